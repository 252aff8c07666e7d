"""
Experiment run tracking - any SQLAlchemy URL, disabled when GRNF_DATABASE_URL is unset
"""

import json
import logging
import uuid
from datetime import datetime
from functools import lru_cache
from typing import Optional

from sqlalchemy import Column, DateTime, Integer, String, Text, create_engine, text
from sqlalchemy.orm import declarative_base, sessionmaker

from src.utils.settings import get_settings

logger = logging.getLogger(__name__)

Base = declarative_base()


class ExperimentRun(Base):
    __tablename__ = "experiment_runs"

    id = Column(Integer, primary_key=True, index=True)
    run_id = Column(String, unique=True, index=True, default=lambda: str(uuid.uuid4()))
    command = Column(String, nullable=False)
    parameters = Column(Text)  # JSON
    output_path = Column(String)

    status = Column(String, default="initiated")  # initiated, completed, failed
    rows = Column(Integer)
    error = Column(Text)
    created_at = Column(DateTime, default=datetime.utcnow)
    finished_at = Column(DateTime)

    def to_dict(self) -> dict:
        return {
            "run_id": self.run_id,
            "command": self.command,
            "parameters": json.loads(self.parameters) if self.parameters else {},
            "output_path": self.output_path,
            "status": self.status,
            "rows": self.rows,
            "error": self.error,
            "created_at": self.created_at.isoformat() if self.created_at else None,
            "finished_at": self.finished_at.isoformat() if self.finished_at else None,
        }


def get_database_url() -> Optional[str]:
    """Tracking database URL, None when tracking is disabled"""
    return get_settings().database_url


def tracking_enabled() -> bool:
    return get_database_url() is not None


@lru_cache(maxsize=None)
def _session_factory(url: str):
    engine = create_engine(url, echo=False)
    return engine, sessionmaker(autocommit=False, autoflush=False, bind=engine)


def open_session():
    """New session bound to the configured tracking database"""
    url = get_database_url()
    if url is None:
        raise RuntimeError("Run tracking is disabled (GRNF_DATABASE_URL is not set)")
    return _session_factory(url)[1]()


def create_tables():
    """Create all database tables"""
    url = get_database_url()
    if url is None:
        return
    try:
        Base.metadata.create_all(bind=_session_factory(url)[0])
        logger.info("✅ Database tables created/verified")
    except Exception as e:
        logger.error(f"❌ Failed to create tables: {e}")
        raise


def get_db():
    """Get database session"""
    db = open_session()
    try:
        yield db
    except Exception as e:
        logger.error(f"❌ Database session error: {e}")
        db.rollback()
        raise
    finally:
        db.close()


def test_connection() -> bool:
    """Test database connection"""
    if not tracking_enabled():
        return False
    try:
        db = open_session()
        db.execute(text("SELECT 1"))
        db.close()
        return True
    except Exception as e:
        logger.error(f"❌ Database connection failed: {e}")
        return False


def record_run_start(command: str, parameters: dict, output_path: Optional[str] = None) -> Optional[str]:
    """Insert an initiated run; returns its run_id, or None when tracking is off or fails"""
    if not tracking_enabled():
        return None
    try:
        create_tables()
        db = open_session()
        try:
            run = ExperimentRun(
                command=command,
                parameters=json.dumps(parameters, default=str, sort_keys=True),
                output_path=output_path,
                status="initiated",
            )
            db.add(run)
            db.commit()
            db.refresh(run)
            logger.info(f"💾 Recorded run {run.run_id} ({command})")
            return run.run_id
        finally:
            db.close()
    except Exception as e:
        logger.warning(f"⚠️ Run tracking unavailable: {e}")
        return None


def record_run_finish(run_id: Optional[str], status: str, rows: Optional[int] = None, error: Optional[str] = None) -> None:
    if run_id is None:
        return
    try:
        db = open_session()
        try:
            run = db.query(ExperimentRun).filter(ExperimentRun.run_id == run_id).first()
            if run is None:
                logger.warning(f"⚠️ Run {run_id} not found")
                return
            run.status = status
            run.rows = rows
            run.error = error
            run.finished_at = datetime.utcnow()
            db.commit()
            logger.info(f"💾 Run {run_id} marked {status}")
        finally:
            db.close()
    except Exception as e:
        logger.warning(f"⚠️ Could not update run {run_id}: {e}")
