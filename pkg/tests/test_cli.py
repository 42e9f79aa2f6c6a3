import json

import pytest

from sievelab import __version__
from sievelab.main import main


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr().out
    return code, out


def run_json(capsys, *argv):
    code, out = run(capsys, *argv)
    return code, json.loads(out)


def test_optimize_below_target_is_unverified(capsys):
    code, document = run_json(capsys, "optimize", "--k", "2", "--max-degree", "0", "--target", "2")
    assert code == 1
    assert document["result"]["exact_ratio"] == "4/3"
    assert document["header"]["command"] == "optimize"
    assert document["header"]["parameters"]["k"] == 2
    assert document["header"]["version"] == __version__


def test_optimize_above_target(capsys):
    code, document = run_json(capsys, "optimize", "--k", "5", "--max-degree", "8", "--target", "2")
    assert code == 0
    assert document["result"]["exceeds_target"]


def test_optimize_without_target_reports_the_ratio(capsys):
    code, document = run_json(capsys, "optimize", "--k", "3", "--max-degree", "2")
    assert code == 0
    assert document["result"]["k"] == 3


@pytest.mark.parametrize(
    "argv",
    [
        ["optimize", "--k", "0"],
        ["optimize"],
        ["optimize", "--k-range", "3", "5"],
        ["--threads", "0", "optimize", "--k", "2"],
        ["expect", "--ratio", "4", "--theta", "2"],
        ["nonsense"],
        ["cover"],
    ],
)
def test_invalid_input_exits_with_two(capsys, argv):
    assert main(argv) == 2


def test_version_and_help_exit_cleanly(capsys):
    assert main(["--version"]) == 0
    assert __version__ in capsys.readouterr().out
    assert main(["--help"]) == 0


def test_min_k_from_the_command_line(capsys):
    code, document = run_json(
        capsys, "optimize", "--k-range", "3", "10", "--degrees", "4,8", "--target", "2"
    )
    assert code == 0
    assert document["result"]["k"] == 5
    assert [attempt["k"] for attempt in document["result"]["log"]] == [3, 4]


def test_tuple_verify(capsys):
    code, document = run_json(capsys, "tuple", "verify", "0,2,6")
    assert code == 0
    assert document["result"]["diameter"] == 6
    code, document = run_json(capsys, "tuple", "verify", "0,2,4")
    assert code == 1
    assert document["result"]["report"]["covering_prime"] == 3


def test_tuple_verify_from_packaged_file(capsys):
    code, document = run_json(capsys, "tuple", "verify", "--file", "tuple54.json")
    assert code == 0
    assert document["result"]["k"] == 54
    assert document["result"]["diameter"] == 270


def test_tuple_search_and_shifted_primes(capsys):
    code, document = run_json(capsys, "tuple", "search", "--k", "5")
    assert code == 0
    assert document["result"]["best"]["shifts"] == [0, 2, 6, 8, 12]
    assert document["result"]["proven"]
    code, document = run_json(capsys, "tuple", "shifted-primes", "--k", "5")
    assert document["result"]["best"]["shifts"] == [0, 4, 6, 10, 12]
    assert document["result"]["method"] == "shifted-primes"


def test_trivial_cover_beyond_next_prime_fails(capsys):
    code, document = run_json(capsys, "cover", "--strategy", "trivial", "--x", "30", "--y", "40")
    assert code == 1
    assert not document["result"]["cover"]["covered"]
    assert 30 in document["result"]["cover"]["uncovered"]


def test_cover_with_witness(capsys):
    code, document = run_json(capsys, "cover", "--x", "200", "--y", "auto", "--emit-witness")
    assert code == 0
    result = document["result"]
    assert result["cover"]["covered"]
    assert result["witness_verified"]
    assert isinstance(result["witness"]["N"], str)
    assert result["witness"]["y"] == result["max_cover"]["y"]


def test_seeded_runs_are_byte_identical(capsys):
    argv = ["--seed", "3", "cover", "--strategy", "random-weighted", "--x", "300", "--y", "300"]
    first = run(capsys, *argv)
    second = run(capsys, *argv)
    assert first == second
    assert json.loads(first[1])["header"]["seed"] == 3


def test_cover_grid_csv(capsys):
    code, out = run(
        capsys, "--format", "csv", "cover-grid", "--x", "200,300", "--strategies", "trivial"
    )
    assert code == 0
    lines = out.strip().splitlines()
    assert lines[0] == "x,strategy,y,seed"
    assert lines[1:] == ["200,trivial,209,0", "300,trivial,305,0"]


def test_gaps_scan(capsys):
    code, document = run_json(capsys, "gaps", "scan", "--limit", "1000")
    assert code == 0
    assert [record["gap"] for record in document["result"]] == [1, 2, 4, 6, 8, 14, 18, 20]


def test_gaps_curves_csv(capsys):
    code, out = run(capsys, "--format", "csv", "gaps", "curves", "--limit", "10000", "--step", "1000")
    assert code == 0
    lines = out.strip().splitlines()
    assert lines[0] == "X,max_gap,log_squared,rankin_form"
    assert len(lines) == 11


def test_gaps_intervals(capsys):
    code, document = run_json(capsys, "gaps", "intervals", "--X", "1000", "--y", "50")
    assert code == 0
    assert sum(document["result"]["histogram"].values()) == 1001


def test_expect_reports_two_primes(capsys):
    code, document = run_json(capsys, "expect", "--ratio", "4.002")
    assert code == 0
    assert document["result"]["m"] == 2
    assert document["result"]["expectation_limit"] == "2001/2000"
    assert document["result"]["generalized_eh_gap_bound"] == 6


def test_expect_pipeline(capsys):
    code, document = run_json(
        capsys, "expect", "--pipeline", "--theta", "1", "--k-range", "2", "10", "--degrees", "4,8"
    )
    assert code == 0
    assert document["result"]["k"] == 5
    assert document["result"]["bound"] == 12


def test_concentrate(capsys):
    code, document = run_json(capsys, "concentrate", "--k", "100")
    assert code == 0
    assert set(document["result"]) == {"profile", "concentration", "lower_bound", "true_ratio"}


def test_weights(capsys):
    code, document = run_json(
        capsys, "weights", "--shifts", "0,2", "--R", "10", "--X", "10000", "--ell", "1"
    )
    assert code == 0
    assert document["result"]["prime_hit_expectation"] > 0


def test_prime_class(capsys):
    code, document = run_json(capsys, "prime-class", "--q", "10", "--bound", "100")
    assert code == 0
    assert document["result"]["residue"] == 3


def test_out_file(capsys, tmp_path):
    target = tmp_path / "scan.json"
    assert main(["--out", str(target), "gaps", "scan", "--limit", "100"]) == 0
    assert capsys.readouterr().out == ""
    assert json.loads(target.read_text())["header"]["out"] == str(target)
