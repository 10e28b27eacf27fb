from __future__ import annotations

import os

from dotenv import load_dotenv


load_dotenv()

MAX_GROUP_ORDER = int(os.environ.get("XXZ_MAX_GROUP_ORDER", str(2**20)))
ASSOCIATIVITY_EXHAUSTIVE_MAX = int(os.environ.get("XXZ_ASSOCIATIVITY_EXHAUSTIVE_MAX", "64"))
ASSOCIATIVITY_SAMPLES = int(os.environ.get("XXZ_ASSOCIATIVITY_SAMPLES", "20000"))
RANDOM_SEED = int(os.environ.get("XXZ_RANDOM_SEED", "0"))
SWEEP_WORKERS = int(os.environ.get("XXZ_SWEEP_WORKERS", "1"))
LOG_LEVEL = os.environ.get("XXZ_LOG_LEVEL", "WARNING")

DEFAULT_ORACLE_QUBITS = 20
HARD_ORACLE_QUBITS = 24


def max_oracle_qubits() -> int:
    """Oracle cap in qubit-equivalents (log2 of the basis size), read per call."""
    raw = os.environ.get("XXZ_MAX_ORACLE_QUBITS")
    if raw in (None, ""):
        return DEFAULT_ORACLE_QUBITS
    value = int(raw)
    if value < 1:
        raise ValueError("XXZ_MAX_ORACLE_QUBITS must be a positive integer")
    return min(value, HARD_ORACLE_QUBITS)
