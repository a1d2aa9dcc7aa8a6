import logging
import os
from typing import Iterable, List, Mapping

from sqlalchemy import create_engine
from sqlalchemy.exc import SQLAlchemyError
from sqlalchemy.orm import sessionmaker

from src.database.models import Base, RemovedRelation, SweepResult
from src.evaluation.sweep import SweepRow

logger = logging.getLogger(__name__)


def database_url(target: str) -> str:
    """Accept a SQLAlchemy URL or a plain path to a SQLite file"""
    if "://" in target:
        return target
    return f"sqlite:///{target}"


def connect(target: str) -> sessionmaker:
    logger.info(f"connect: Connecting to {target}")
    try:
        url = database_url(target)
        if url.startswith("sqlite:///") and url != "sqlite:///:memory:":
            directory = os.path.dirname(url[len("sqlite:///"):])
            if directory and not os.path.exists(directory):
                logger.info(f"Creating database directory: {directory}")
                os.makedirs(directory)
        engine = create_engine(url, echo=False)
        Base.metadata.create_all(engine)
        return sessionmaker(bind=engine)
    except SQLAlchemyError as e:
        logger.error(f"connect: Failed: {e}")
        raise


def save_sweep_rows(Session: sessionmaker, experiment: str, rows: Iterable[SweepRow]) -> int:
    """Store one record per (B, run) cell; a cell that is already stored for this experiment is overwritten"""
    session = Session()
    saved = 0
    try:
        for row in rows:
            record = session.query(SweepResult).filter_by(experiment=experiment, bound=row.B, run=row.run).first()
            if record is None:
                record = SweepResult(experiment=experiment, bound=row.B, run=row.run)
                session.add(record)
            else:
                logger.info(f"Sweep cell B={row.B} run={row.run} of {experiment} already stored, overwriting")
            record.seed = row.seed
            record.removed = row.removed
            record.iterations = row.iterations
            record.wall_ms = row.wall_ms
            record.status = row.status
            saved += 1
        session.commit()
        logger.info(f"save_sweep_rows: {saved} rows saved for {experiment}")
        return saved
    except SQLAlchemyError as e:
        session.rollback()
        logger.error(f"save_sweep_rows: Failed: {e}")
        raise
    finally:
        session.close()


def get_sweep_rows(Session: sessionmaker, experiment: str) -> List[SweepRow]:
    session = Session()
    try:
        records = (
            session.query(SweepResult)
            .filter_by(experiment=experiment)
            .order_by(SweepResult.bound, SweepResult.run)
            .all()
        )
        return [
            SweepRow(B=r.bound, run=r.run, seed=r.seed, removed=r.removed, iterations=r.iterations,
                     wall_ms=r.wall_ms, status=r.status)
            for r in records
        ]
    finally:
        session.close()


def save_removals(Session: sessionmaker, run_label: str, removals: Iterable[Mapping]) -> int:
    """
    Store removed relations as reported by build_report, i.e. mappings with
    subject, object, reason and iteration keys.
    """
    session = Session()
    try:
        records = [
            RemovedRelation(run_label=run_label, subject=r["subject"], object=r["object"],
                            reason=r["reason"], iteration=r.get("iteration"))
            for r in removals
        ]
        session.add_all(records)
        session.commit()
        logger.info(f"save_removals: {len(records)} relations saved for {run_label}")
        return len(records)
    except SQLAlchemyError as e:
        session.rollback()
        logger.error(f"save_removals: Failed: {e}")
        raise
    finally:
        session.close()


def get_removals(Session: sessionmaker, run_label: str) -> List[dict]:
    session = Session()
    try:
        records = session.query(RemovedRelation).filter_by(run_label=run_label).order_by(RemovedRelation.id).all()
        return [
            {"subject": r.subject, "object": r.object, "reason": r.reason, "iteration": r.iteration}
            for r in records
        ]
    finally:
        session.close()
