"""
Track-Layout Engine Configuration.
All settings via environment variables with sensible defaults.
"""

import os
from pathlib import Path

# --- Paths ---
BASE_DIR = Path(os.getenv("LAYOUT_DATA_DIR", "./data"))
DB_PATH = BASE_DIR / "layout.db"

# --- Auth ---
API_KEY = os.getenv("LAYOUT_API_KEY", "")

# --- Dashboard ---
API_URL = os.getenv("LAYOUT_API_URL", "http://localhost:8000")

# --- Logging ---
LOG_LEVEL = os.getenv("LAYOUT_LOG_LEVEL", "INFO").upper()
LOG_FORMAT = "%(asctime)s [%(name)s] %(levelname)s: %(message)s"
LOG_DATEFMT = "%Y-%m-%d %H:%M:%S"

# --- Oracle size gates (vertex counts) ---
# Exhaustive searches; above these limits the oracles raise TooLarge.
ORACLE_QUEUE_LIMIT: int = int(os.getenv("LAYOUT_ORACLE_QUEUE_LIMIT", "9"))          # permutations
ORACLE_TRACK_LIMIT: int = int(os.getenv("LAYOUT_ORACLE_TRACK_LIMIT", "7"))          # assignment + insertion
ORACLE_PATHWIDTH_LIMIT: int = int(os.getenv("LAYOUT_ORACLE_PATHWIDTH_LIMIT", "14"))  # 2^n subset DP
ORACLE_TREEWIDTH_LIMIT: int = int(os.getenv("LAYOUT_ORACLE_TREEWIDTH_LIMIT", "14"))  # 2^n subset DP

# --- Resource budgets ---
GK_VERTEX_BUDGET: int = int(os.getenv("LAYOUT_GK_VERTEX_BUDGET", "20000"))   # G_4 has 16195 vertices
VERTEX_BUDGET: int = int(os.getenv("LAYOUT_VERTEX_BUDGET", "200000"))        # generators, k-tree layouts

# --- Exact geometry ---
COORD_LIMIT: int = int(os.getenv("LAYOUT_COORD_LIMIT", str(2**30)))  # |coordinate| accepted by verify_drawing
