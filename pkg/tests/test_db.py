import pytest

from plnr import db
from plnr.jobSpec import JobSpec
from plnr.reports import buildReport


class FakeCursor:
    def __init__(self, conn):
        self.conn = conn
        self.row = None
        self.closed = False

    def execute(self, sql, params=None):
        self.conn.statements.append(" ".join(sql.split()))
        if "to_regclass" in sql:
            self.row = tuple(None if name in self.conn.missing else name for name in params)
        elif "RETURNING id" in sql:
            self.row = (17,)

    def executemany(self, sql, rows):
        if self.conn.failHits:
            raise RuntimeError("unique violation")
        self.conn.hitRows.extend(rows)

    def fetchone(self):
        return self.row

    def close(self):
        self.closed = True


class FakeConnection:
    def __init__(self, missing=(), failHits=False):
        self.missing = set(missing)
        self.failHits = failHits
        self.statements = []
        self.hitRows = []
        self.commits = 0
        self.rollbacks = 0
        self.closed = False

    def cursor(self):
        return FakeCursor(self)

    def commit(self):
        self.commits += 1

    def rollback(self):
        self.rollbacks += 1

    def close(self):
        self.closed = True


@pytest.fixture
def fakeDB(monkeypatch):
    conns = []
    kwargs = []

    def connect(**options):
        kwargs.append(options)
        conn = FakeConnection(**configure.options)
        conns.append(conn)
        return conn

    def configure(**options):
        configure.options = options
        return conns

    configure.options = {}
    configure.kwargs = kwargs
    monkeypatch.setattr(db.psycopg2, "connect", connect)
    return configure


def _searchReport():
    result = {"field": "2^4", "convention": "even",
              "hits": [{"d": 1, "cs": [1], "method": "affine"}, {"d": 5, "cs": [1], "method": "coset"}]}
    return buildReport("planar-search", JobSpec("planar-search", fieldSpec="2^4").toDict(), result, seed=1)


def test_credentials_come_from_the_environment(fakeDB, monkeypatch):
    monkeypatch.setenv("PLNR_DB_NAME", "planes")
    monkeypatch.setenv("PLNR_DB_USER", "alice")
    monkeypatch.delenv("PLNR_DB_PASSWORD", raising=False)
    conns = fakeDB()
    assert db.checkConnection("db.local", 5433)
    assert fakeDB.kwargs[0] == {"host": "db.local", "port": 5433, "dbname": "planes",
                                "user": "alice", "password": "plnr"}
    assert conns[0].closed


def test_check_connection_reports_failure(monkeypatch):
    def refuse(**options):
        raise OSError("connection refused")

    monkeypatch.setattr(db.psycopg2, "connect", refuse)
    assert not db.checkConnection("db.local", 5432)
    assert not db.applySchema("db.local", 5432)
    assert db.insertReport(_searchReport(), None, "db.local", 5432) is None


def test_schema_is_applied_only_when_tables_are_missing(fakeDB):
    conns = fakeDB(missing=("planar_hit",))
    assert db.applySchema("db.local", 5432)
    assert any("CREATE TABLE IF NOT EXISTS planar_hit" in s for s in conns[0].statements)
    assert conns[0].commits == 1

    conns = fakeDB()
    assert db.applySchema("db.local", 5432)
    assert not any("CREATE TABLE" in s for s in conns[-1].statements)


def test_report_and_hits_share_one_transaction(fakeDB):
    conns = fakeDB()
    assert db.insertReport(_searchReport(), None, "db.local", 5432) == 17
    conn = conns[0]
    assert len(conns) == 1
    assert conn.commits == 1 and conn.rollbacks == 0
    assert [row[3] for row in conn.hitRows] == [1, 5]
    assert all(row[:3] == (17, "2^4", "even") for row in conn.hitRows)
    assert conn.closed


def test_failed_hit_insert_rolls_back_the_report(fakeDB):
    conns = fakeDB(failHits=True)
    assert db.insertReport(_searchReport(), None, "db.local", 5432) is None
    conn = conns[0]
    assert conn.commits == 0 and conn.rollbacks == 1
    assert any(s.startswith("INSERT INTO report") for s in conn.statements)
    assert conn.closed


def test_reports_without_hits_skip_the_hit_table(fakeDB):
    conns = fakeDB()
    report = buildReport("planar-verify", JobSpec("planar-verify", fieldSpec="3^2").toDict(), {"planar": True})
    assert db.insertReport(report, True, "db.local", 5432) == 17
    assert conns[0].hitRows == []
    assert conns[0].commits == 1
