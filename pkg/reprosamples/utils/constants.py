from pathlib import Path

PROJECT_DIR = Path(__file__).resolve().parents[1].resolve().parents[0]
CONFIG_FILE = PROJECT_DIR / "config.yml"
DATA_DIR = Path(__file__).resolve().parents[1] / "data"

OUTPUT_DIR = PROJECT_DIR / "output"
LOG_FILE = "reprosamples.log"

# Stream purposes, the first element of every substream path
STREAM_SEARCH = 0
STREAM_MODEL_CS = 1
STREAM_FUNCTIONAL = 2
STREAM_BOOTSTRAP = 3
STREAM_SIMULATION = 4

# Numerical tolerances
RANK_TOL = 1e-10
DEGENERATE_TOL = 1e-12
RSS_TIE_TOL = 1e-9

# Guards for exhaustive enumeration
EXHAUSTIVE_LIMIT = 20_000
C_MIN_LIMIT = 1_000_000

ENV_THREADS = "REPRO_THREADS"
