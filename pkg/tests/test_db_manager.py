import pytest
from src.database.db_manager import connect, database_url, get_removals, get_sweep_rows, save_removals, save_sweep_rows
from src.evaluation.sweep import SweepRow

# src/database/test_db_manager.py

@pytest.fixture
def Session(tmp_path):
    return connect(str(tmp_path / "results" / "subcycle.db"))

def test_database_url():
    assert database_url("out/results.db") == "sqlite:///out/results.db"
    assert database_url("postgresql://host/db") == "postgresql://host/db"

def test_connect_creates_directory(tmp_path):
    connect(str(tmp_path / "nested" / "dir" / "results.db"))
    assert (tmp_path / "nested" / "dir").is_dir()

def test_get_sweep_rows_empty(Session):
    assert get_sweep_rows(Session, "nothing") == []

def test_save_and_get_sweep_rows(Session):
    rows = [
        SweepRow(30, 0, 0, 5, 2, 0.0, "acyclic"),
        SweepRow(20, 1, 1, 8, 4, 0.0, "acyclic"),
        SweepRow(20, 0, 0, 7, 3, 0.0, "acyclic"),
    ]
    assert save_sweep_rows(Session, "nested", rows) == 3
    assert get_sweep_rows(Session, "nested") == sorted(rows, key=lambda r: (r.B, r.run))

def test_saving_a_cell_again_overwrites_it(Session):
    save_sweep_rows(Session, "nested", [SweepRow(20, 0, 0, 7, 3, 0.0, "acyclic")])
    save_sweep_rows(Session, "nested", [SweepRow(20, 0, 0, 6, 2, 0.0, "timeout")])
    assert get_sweep_rows(Session, "nested") == [SweepRow(20, 0, 0, 6, 2, 0.0, "timeout")]

def test_experiments_are_separate(Session):
    save_sweep_rows(Session, "a", [SweepRow(20, 0, 0, 7, 3, 0.0, "acyclic")])
    save_sweep_rows(Session, "b", [SweepRow(20, 0, 0, 1, 1, 0.0, "acyclic")])
    assert get_sweep_rows(Session, "a")[0].removed == 7
    assert get_sweep_rows(Session, "b")[0].removed == 1

def test_save_and_get_removals(Session):
    removals = [
        {"subject": "http://example.org/C3", "object": "http://example.org/C3", "reason": "reflexive",
         "iteration": None},
        {"subject": "http://example.org/C1", "object": "http://example.org/C2", "reason": "maxsat", "iteration": 1},
    ]
    assert save_removals(Session, "example.nt:seed=0", removals) == 2
    assert get_removals(Session, "example.nt:seed=0") == removals
    assert get_removals(Session, "other") == []
