from contextlib import contextmanager
from datetime import datetime

import numpy as np
from sqlalchemy import Column, DateTime, Float, ForeignKey, Integer, String, Text, create_engine
from sqlalchemy.orm import declarative_base, relationship, sessionmaker

from metrics import RunRecord

Base = declarative_base()


class Experiment(Base):
    __tablename__ = 'experiments'

    id = Column(Integer, primary_key=True)
    created_at = Column(DateTime, default=datetime.utcnow)
    master_seed = Column(String, nullable=False)
    mode = Column(String, nullable=False)
    config_text = Column(Text)
    total_runs = Column(Integer, default=0)
    runs = relationship("Run", back_populates="experiment", order_by="Run.id")


class Run(Base):
    __tablename__ = 'runs'

    id = Column(Integer, primary_key=True)
    experiment_id = Column(Integer, ForeignKey('experiments.id'))
    function = Column(String, nullable=False)
    algorithm = Column(String, nullable=False)
    dimension = Column(Integer, nullable=False)
    run_index = Column(Integer, nullable=False)
    # uint64 seeds do not fit SQLite's signed INTEGER
    seed = Column(String, nullable=False)
    best_value = Column(Float, nullable=False)
    error = Column(Float)
    evaluations_used = Column(Integer, nullable=False)
    best_point_text = Column(Text, nullable=False)

    experiment = relationship("Experiment", back_populates="runs")

    @property
    def best_point(self):
        return np.array([float(v) for v in self.best_point_text.split(';')])

    @classmethod
    def from_record(cls, record, error=None):
        return cls(
            function=record.function.value,
            algorithm=record.algorithm,
            dimension=record.dimension,
            run_index=record.run_index,
            seed=str(record.seed),
            best_value=record.best_value,
            error=error,
            evaluations_used=record.evaluations_used,
            best_point_text=';'.join(repr(v) for v in record.best_point),
        )

    def to_record(self):
        return RunRecord(
            function=self.function,
            algorithm=self.algorithm,
            dimension=self.dimension,
            run_index=self.run_index,
            best_value=self.best_value,
            best_point=tuple(self.best_point),
            evaluations_used=self.evaluations_used,
            seed=int(self.seed),
        )


def create_store(db_path):
    """Engine plus session factory for a results database; creates the tables"""
    engine = create_engine(f'sqlite:///{db_path}')
    init_db(engine)
    return sessionmaker(bind=engine)


def init_db(engine):
    Base.metadata.create_all(engine)


@contextmanager
def get_db_session(session_factory):
    """Database session context manager"""
    session = session_factory()
    try:
        yield session
        session.commit()
    except Exception:
        session.rollback()
        raise
    finally:
        session.close()


def save_records(db_path, records, master_seed, mode, config_text='', errors=None):
    """Store one experiment and all of its runs; returns the experiment id"""
    session_factory = create_store(db_path)
    errors = errors or {}
    with get_db_session(session_factory) as session:
        experiment = Experiment(
            master_seed=str(master_seed),
            mode=getattr(mode, 'value', mode),
            config_text=config_text,
            total_runs=len(records),
        )
        for record in records:
            key = (record.function, record.algorithm, record.dimension, record.run_index)
            experiment.runs.append(Run.from_record(record, errors.get(key)))
        session.add(experiment)
        session.flush()
        return experiment.id


def load_records(db_path, experiment_id=None):
    """Runs of one experiment (the latest when no id is given)"""
    session_factory = create_store(db_path)
    with get_db_session(session_factory) as session:
        query = session.query(Experiment)
        if experiment_id is None:
            experiment = query.order_by(Experiment.id.desc()).first()
        else:
            experiment = session.get(Experiment, experiment_id)
        if experiment is None:
            return []
        return [run.to_record() for run in experiment.runs]
