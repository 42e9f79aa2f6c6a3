import json
from datetime import datetime
from typing import Dict, Optional, Tuple

import numpy as np
from sqlalchemy import JSON, DateTime, Integer, LargeBinary, String, UniqueConstraint, create_engine, select
from sqlalchemy.orm import DeclarativeBase, Mapped, Session, mapped_column

from sievelab.config import get_section
from sievelab.models.settings_models import StorageSettings


class Base(DeclarativeBase):
    pass


class SieveTableModel(Base):
    __tablename__ = "sieve_tables"

    id: Mapped[int] = mapped_column(primary_key=True)
    name: Mapped[str] = mapped_column(String(32))
    limit: Mapped[int] = mapped_column(Integer)
    dtype: Mapped[str] = mapped_column(String(16))
    data: Mapped[bytes] = mapped_column(LargeBinary)
    created_at: Mapped[datetime] = mapped_column(DateTime, default=datetime.utcnow)

    __table_args__ = (UniqueConstraint("name", "limit"),)


class CertificateModel(Base):
    __tablename__ = "certificates"

    id: Mapped[int] = mapped_column(primary_key=True)
    family: Mapped[str] = mapped_column(String(32))
    k: Mapped[int] = mapped_column(Integer)
    max_degree: Mapped[int] = mapped_column(Integer)
    document: Mapped[Dict] = mapped_column(JSON)
    created_at: Mapped[datetime] = mapped_column(DateTime, default=datetime.utcnow)

    __table_args__ = (UniqueConstraint("family", "k", "max_degree"),)


class TableStore:
    """Cache of sieve tables keyed by limit, plus an archive of ratio certificates."""

    def __init__(self, database_url: str):
        engine_args = {}
        if database_url.startswith("sqlite"):
            engine_args["connect_args"] = {"check_same_thread": False}

        self.engine = create_engine(database_url, **engine_args)
        Base.metadata.create_all(self.engine)

    def store_table(self, name: str, limit: int, array: np.ndarray) -> int:
        with Session(self.engine) as session:
            stmt = select(SieveTableModel).where(
                SieveTableModel.name == name, SieveTableModel.limit == limit
            )
            table = session.execute(stmt).scalar_one_or_none()
            if table is None:
                table = SieveTableModel(name=name, limit=limit)
                session.add(table)
            table.dtype = str(array.dtype)
            table.data = np.ascontiguousarray(array).tobytes()
            session.commit()
            return table.id

    def get_table(self, name: str, limit: int) -> Optional[np.ndarray]:
        with Session(self.engine) as session:
            stmt = select(SieveTableModel).where(
                SieveTableModel.name == name, SieveTableModel.limit == limit
            )
            table = session.execute(stmt).scalar_one_or_none()
            if table is None:
                return None
            return np.frombuffer(table.data, dtype=np.dtype(table.dtype)).copy()

    def store_tables(self, limit: int, lpf: np.ndarray, mu: np.ndarray) -> None:
        self.store_table("lpf", limit, lpf)
        self.store_table("mu", limit, mu)

    def get_tables(self, limit: int) -> Optional[Tuple[np.ndarray, np.ndarray]]:
        lpf = self.get_table("lpf", limit)
        mu = self.get_table("mu", limit)
        if lpf is None or mu is None:
            return None
        return lpf, mu

    def store_certificate(self, document: Dict) -> int:
        with Session(self.engine) as session:
            stmt = select(CertificateModel).where(
                CertificateModel.family == document["family"],
                CertificateModel.k == document["k"],
                CertificateModel.max_degree == document["max_degree"],
            )
            record = session.execute(stmt).scalar_one_or_none()
            if record is None:
                record = CertificateModel(
                    family=document["family"], k=document["k"], max_degree=document["max_degree"]
                )
                session.add(record)
            # round-trip through json so that only plain types reach the JSON column
            record.document = json.loads(json.dumps(document, sort_keys=True))
            session.commit()
            return record.id

    def get_certificate(self, family: str, k: int, max_degree: int) -> Optional[Dict]:
        with Session(self.engine) as session:
            stmt = select(CertificateModel).where(
                CertificateModel.family == family,
                CertificateModel.k == k,
                CertificateModel.max_degree == max_degree,
            )
            record = session.execute(stmt).scalar_one_or_none()
            return None if record is None else dict(record.document)


_default_store: Optional[TableStore] = None


def default_store() -> Optional[TableStore]:
    """The configured store when storage is enabled, else None."""
    global _default_store
    settings = get_section("storage", StorageSettings)
    if not settings.enabled or not settings.database_uri:
        return None
    if _default_store is None:
        _default_store = TableStore(settings.database_uri)
    return _default_store
