"""
Runtime settings for the Leavitt path algebra toolkit.

Values come from the environment (optionally seeded from a local .env file)
and fall back to defaults suitable for the bundled fixture graphs. CLI flags
override these per invocation.
"""
import os
from pathlib import Path


def _load_env_file():
    """Load environment variables from .env file if present.
    Does not override existing environment variables and does not raise on failure.
    """
    env_file = Path('.env')
    if not env_file.exists():
        return
    try:
        with open(env_file) as f:
            for line in f:
                line = line.strip()
                if line and not line.startswith('#') and '=' in line:
                    key, value = line.split('=', 1)
                    os.environ.setdefault(key.strip(), value.strip())
    except OSError:
        # Non-fatal: rely on existing os.environ
        pass


def _int_setting(name, default, minimum):
    raw = os.environ.get(name, str(default))
    try:
        value = int(raw)
    except ValueError:
        raise ValueError(f"{name} must be an integer, got {raw!r}")
    if value < minimum:
        raise ValueError(f"{name} must be >= {minimum}, got {value}")
    return value


_load_env_file()

# Coefficient field: "q" for the rationals or "gf:P" for a prime field
FIELD = os.environ.get("LPA_FIELD", "q").strip().lower()
if FIELD != "q" and not FIELD.startswith("gf:"):
    raise ValueError(f"LPA_FIELD must be 'q' or 'gf:P', got {FIELD!r}")

# Membership oracle bound N (max |a| + |b| for candidates a·x·b)
MEMBERSHIP_BOUND = _int_setting("LPA_BOUND", 6, 1)

# hs_lattice enumerates 2^|E0| subsets; refuse graphs above this many vertices
LATTICE_VERTEX_CAP = _int_setting("LPA_LATTICE_CAP", 20, 0)

# Threads used by the lattice subset scan
LATTICE_WORKERS = _int_setting("LPA_WORKERS", 4, 1)

# Subset masks evaluated per worker task
LATTICE_CHUNK = 1 << 14

LOG_LEVEL = os.environ.get("LPA_LOG_LEVEL", "WARNING").upper()

FIXTURE_DIR = Path(__file__).resolve().parent / "graphs"
