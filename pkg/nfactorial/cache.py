"""
Persistent result cache for nfactorial
SQLite database with SQLAlchemy ORM, content addressed by task inputs
"""
import hashlib
import logging
from datetime import datetime
from pathlib import Path
from typing import Any, Dict, Optional

from pydantic import ValidationError
from sqlalchemy import Column, DateTime, String, Text, create_engine
from sqlalchemy.orm import declarative_base, sessionmaker

from nfactorial.models import TaskResult, canonical_json

logger = logging.getLogger(__name__)

DB_NAME = "results.db"

Base = declarative_base()


class CachedResult(Base):
    __tablename__ = "results"

    key = Column(String, primary_key=True, index=True)
    task = Column(String, nullable=False)
    payload_json = Column(Text, nullable=False)  # TaskResult, canonical JSON
    engine_version = Column(String, nullable=False)
    created_at = Column(DateTime, nullable=False)


def cache_key(task: str, inputs: Dict[str, Any], engine_version: str,
              context: Optional[Dict[str, Any]] = None) -> str:
    """SHA-256 of the canonical JSON of (task, inputs, engine version, context)

    context holds the settings that change a result (prime seed, bounds).
    """
    material = canonical_json({"task": task, "inputs": inputs, "engine": engine_version,
                               "context": context or {}})
    return hashlib.sha256(material.encode("utf-8")).hexdigest()


def serialize_result(result: TaskResult) -> str:
    """Convert a TaskResult to its stored payload (timings are never stored)"""
    return canonical_json(result.model_dump(mode="json", by_alias=True, exclude={"elapsed_ms"}))


class ResultCache:
    """Get/put TaskResults in <cache_dir>/results.db"""

    def __init__(self, cache_dir: Path):
        cache_dir = Path(cache_dir)
        cache_dir.mkdir(parents=True, exist_ok=True)
        self.path = cache_dir / DB_NAME
        self.engine = create_engine(
            f"sqlite:///{self.path}", connect_args={"check_same_thread": False}
        )
        self.SessionLocal = sessionmaker(autocommit=False, autoflush=False, bind=self.engine)
        Base.metadata.create_all(bind=self.engine)

    def get(self, task: str, inputs: Dict[str, Any], engine_version: str,
            context: Optional[Dict[str, Any]] = None) -> Optional[TaskResult]:
        key = cache_key(task, inputs, engine_version, context)
        db = self.SessionLocal()
        try:
            row = db.query(CachedResult).filter(CachedResult.key == key).first()
            if row is None:
                return None
            try:
                result = TaskResult.model_validate_json(row.payload_json)
            except ValidationError:
                result = None
            if result is None or result.task != task or result.inputs != inputs:
                logger.warning("dropping corrupt cache entry for %s %s", task, inputs)
                db.delete(row)
                db.commit()
                return None
            return result
        finally:
            db.close()

    def put(self, result: TaskResult, context: Optional[Dict[str, Any]] = None) -> None:
        key = cache_key(result.task, result.inputs, result.engine_version, context)
        db = self.SessionLocal()
        try:
            row = db.query(CachedResult).filter(CachedResult.key == key).first()
            if row is None:
                row = CachedResult(key=key, task=result.task)
                db.add(row)
            row.payload_json = serialize_result(result)
            row.engine_version = result.engine_version
            row.created_at = datetime.now()
            db.commit()
        finally:
            db.close()

    def clear(self) -> int:
        db = self.SessionLocal()
        try:
            count = db.query(CachedResult).delete()
            db.commit()
            return count
        finally:
            db.close()

    def dispose(self) -> None:
        self.engine.dispose()
