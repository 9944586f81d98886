"""
SQLite run store.
Schema: runs (one stats row per layout pipeline requested through the API).
"""

import json
import logging
import sqlite3
import threading
from contextlib import contextmanager
from datetime import datetime
from typing import Any, Optional

from app import config

log = logging.getLogger("layout.db")

_local = threading.local()

SCHEMA_SQL = """
CREATE TABLE IF NOT EXISTS runs (
    id          INTEGER PRIMARY KEY AUTOINCREMENT,
    timestamp   TEXT    NOT NULL,
    label       TEXT    DEFAULT '',
    family      TEXT    DEFAULT '',
    n           INTEGER NOT NULL CHECK(n >= 0),
    m           INTEGER NOT NULL CHECK(m >= 0),
    seed        INTEGER,
    tracks      INTEGER,
    queues      INTEGER,
    volume      INTEGER,
    verified    INTEGER CHECK(verified IN (0, 1)),
    row_json    TEXT    NOT NULL
);

CREATE INDEX IF NOT EXISTS idx_runs_ts ON runs(timestamp);
CREATE INDEX IF NOT EXISTS idx_runs_family ON runs(family);
"""


def get_connection() -> sqlite3.Connection:
    """Thread-local SQLite connection with WAL mode."""
    if getattr(_local, "conn", None) is None or getattr(_local, "path", None) != config.DB_PATH:
        config.DB_PATH.parent.mkdir(parents=True, exist_ok=True)
        conn = sqlite3.connect(str(config.DB_PATH), check_same_thread=False)
        conn.row_factory = sqlite3.Row
        conn.execute("PRAGMA journal_mode=WAL")
        _local.conn = conn
        _local.path = config.DB_PATH
    return _local.conn


def close_connection():
    conn = getattr(_local, "conn", None)
    if conn is not None:
        conn.close()
    _local.conn = None


@contextmanager
def db_cursor():
    """Yield a cursor, auto-commit on success, rollback on error."""
    conn = get_connection()
    cur = conn.cursor()
    try:
        yield cur
        conn.commit()
    except Exception:
        conn.rollback()
        raise


def init_db():
    with db_cursor() as cur:
        cur.executescript(SCHEMA_SQL)
    log.info("Database initialized at %s", config.DB_PATH)


# --- CRUD helpers ---

def _row(r: sqlite3.Row) -> dict:
    out = dict(r)
    out["row"] = json.loads(out.pop("row_json"))
    out["verified"] = bool(out["verified"]) if out["verified"] is not None else None
    return out


def insert_run(row: dict[str, Any], label: str = "", timestamp: Optional[str] = None) -> int:
    ts = timestamp or datetime.now().isoformat()
    verified = row.get("verified")
    with db_cursor() as cur:
        cur.execute(
            """INSERT INTO runs
               (timestamp, label, family, n, m, seed, tracks, queues, volume, verified, row_json)
               VALUES (?,?,?,?,?,?,?,?,?,?,?)""",
            (
                ts,
                label,
                row.get("family") or "",
                row["n"],
                row["m"],
                row.get("seed"),
                row.get("tracks"),
                row.get("queues"),
                row.get("volume"),
                None if verified is None else int(bool(verified)),
                json.dumps(row, sort_keys=True, default=str),
            ),
        )
        return cur.lastrowid


def query_runs(family: Optional[str] = None, limit: int = 100) -> list[dict]:
    with db_cursor() as cur:
        if family:
            cur.execute("SELECT * FROM runs WHERE family=? ORDER BY id DESC LIMIT ?", (family, limit))
        else:
            cur.execute("SELECT * FROM runs ORDER BY id DESC LIMIT ?", (limit,))
        return [_row(r) for r in cur.fetchall()]


def get_run(run_id: int) -> Optional[dict]:
    with db_cursor() as cur:
        cur.execute("SELECT * FROM runs WHERE id=?", (run_id,))
        r = cur.fetchone()
        return _row(r) if r else None


def delete_run(run_id: int) -> bool:
    with db_cursor() as cur:
        cur.execute("DELETE FROM runs WHERE id=?", (run_id,))
        return cur.rowcount > 0
