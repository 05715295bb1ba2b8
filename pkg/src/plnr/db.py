"""All PostgreSQL operations for plnr. No DB logic should live outside this module."""
import logging
import os
from contextlib import contextmanager
from typing import Iterator

import psycopg2
from psycopg2.extras import Json

logger = logging.getLogger(__name__)

_SCHEMA = os.path.join(os.path.dirname(os.path.abspath(__file__)), "sql", "schema.sql")
_TABLES = ("report", "planar_hit")


def _credentials() -> dict:
    return {
        "dbname": os.environ.get("PLNR_DB_NAME", "plnr"),
        "user": os.environ.get("PLNR_DB_USER", "plnr"),
        "password": os.environ.get("PLNR_DB_PASSWORD", "plnr"),
    }


@contextmanager
def reportTransaction(sqlIP: str, sqlPort: int) -> Iterator["psycopg2.extensions.cursor"]:
    """Cursor on a fresh connection; commit when the block succeeds, roll back when it raises."""
    conn = psycopg2.connect(host=sqlIP, port=sqlPort, **_credentials())
    try:
        cur = conn.cursor()
        try:
            yield cur
            conn.commit()
        except Exception:
            conn.rollback()
            raise
        finally:
            cur.close()
    finally:
        conn.close()


def missingTables(cur) -> list[str]:
    cur.execute("SELECT " + ", ".join("to_regclass(%s)" for _ in _TABLES), _TABLES)
    row = cur.fetchone() or (None,) * len(_TABLES)
    return [name for name, found in zip(_TABLES, row) if found is None]


def checkConnection(sqlIP: str, sqlPort: int) -> bool:
    """True when the database answers; logs which report tables still need creating."""
    try:
        with reportTransaction(sqlIP, sqlPort) as cur:
            missing = missingTables(cur)
    except Exception as e:
        logger.error(f"Error connecting to PostgreSQL database at {sqlIP}:{sqlPort}: {e}")
        return False
    if missing:
        logger.info(f"Tables {', '.join(missing)} not found in the report database")
    return True


def applySchema(sqlIP: str, sqlPort: int) -> bool:
    """Create the report tables if they do not exist yet."""
    try:
        with open(_SCHEMA) as f:
            schema = f.read()
        with reportTransaction(sqlIP, sqlPort) as cur:
            if not missingTables(cur):
                return True
            cur.execute(schema)
        logger.info(f"Report tables created on {sqlIP}:{sqlPort}")
        return True
    except Exception as e:
        logger.error(f"Failed to apply schema: {e}")
        return False


def _insertPlanarHits(cur, reportId: int, fieldSpec: str, convention: str, hits: list[dict]) -> None:
    cur.executemany(
        """
        INSERT INTO planar_hit (report_id, field, convention, exponent, method)
        VALUES (%s, %s, %s, %s, %s)
        ON CONFLICT (report_id, exponent) DO NOTHING
        """,
        [(reportId, fieldSpec, convention, hit["d"], hit["method"]) for hit in hits],
    )


def insertReport(report: dict, verdict: bool | None, sqlIP: str, sqlPort: int) -> int | None:
    """Insert a report envelope, and the hits of a planar search, in one transaction.

    Returns the report id, or None when nothing was written.
    """
    result = report["result"]
    try:
        with reportTransaction(sqlIP, sqlPort) as cur:
            cur.execute(
                """
                INSERT INTO report (command, version, seed, elapsed, verdict, job, result)
                VALUES (%s, %s, %s, %s, %s, %s, %s)
                RETURNING id
                """,
                (
                    report["command"],
                    report["version"],
                    report.get("seed"),
                    report.get("elapsed"),
                    verdict,
                    Json(report["job"]),
                    Json(result),
                ),
            )
            row = cur.fetchone()
            if row is None:
                raise RuntimeError("INSERT returned no id")
            reportId = int(row[0])
            if report["command"] == "planar-search" and result.get("hits"):
                _insertPlanarHits(cur, reportId, result["field"], result["convention"], result["hits"])
                logger.debug(f"{len(result['hits'])} planar hits queued for report {reportId}")
        return reportId
    except Exception as e:
        logger.error(f"Failed to insert report '{report.get('command')}': {e}")
        return None
