from datetime import datetime

from sqlalchemy import Column, DateTime, Float, Integer, String, UniqueConstraint
from sqlalchemy.orm import declarative_base

Base = declarative_base()


class SweepResult(Base):
    __tablename__ = 'sweep_results'

    id = Column(Integer, primary_key=True)
    experiment = Column(String, nullable=False)
    bound = Column(Integer, nullable=False)
    run = Column(Integer, nullable=False)
    seed = Column(Integer, nullable=False)
    removed = Column(Integer, nullable=False)
    iterations = Column(Integer, nullable=False)
    wall_ms = Column(Float, default=0.0)
    status = Column(String, nullable=False)
    created_at = Column(DateTime, default=datetime.utcnow)

    __table_args__ = (UniqueConstraint('experiment', 'bound', 'run', name='_sweep_cell_uc'),)


class RemovedRelation(Base):
    __tablename__ = 'removed_relations'

    id = Column(Integer, primary_key=True)
    run_label = Column(String, nullable=False)
    subject = Column(String, nullable=False)
    object = Column(String, nullable=False)
    reason = Column(String, nullable=False)
    iteration = Column(Integer, nullable=True)  # empty for pre-processing removals
    created_at = Column(DateTime, default=datetime.utcnow)
