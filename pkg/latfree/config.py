import os
import sys
import logging
from dotenv import load_dotenv

# Load environment variables from a .env file if it exists
load_dotenv()

logger = logging.getLogger("latfree")


def _env_flag(name: str, default: str = "False") -> bool:
    return os.getenv(name, default).lower() in ('true', '1', 't', 'yes')


def _env_int(name: str, default: int) -> int:
    raw = os.getenv(name)
    if raw is None or raw.strip() == "":
        return default
    try:
        return int(raw)
    except ValueError:
        print(f"WARNING config: {name}={raw!r} is not an integer, using {default}.", file=sys.stderr)
        return default


DEBUG_MODE = _env_flag("LATFREE_DEBUG_MODE")
LOG_LEVEL = os.getenv("LATFREE_LOG_LEVEL", "DEBUG" if DEBUG_MODE else "WARNING").upper()

# --- Search limits ---
# Window-search cap used when lattice-freeness cannot be decided by enumeration or reduction.
DEFAULT_CAP = _env_int("LATFREE_DEFAULT_CAP", 64)
MAX_DIMENSION = _env_int("LATFREE_MAX_DIMENSION", 8)
APPROX_N_CAP = _env_int("LATFREE_APPROX_N_CAP", 4096)

# --- Lemma checkers ---
LEMMA_SAMPLES = _env_int("LATFREE_LEMMA_SAMPLES", 48)
SAMPLE_SEED = _env_int("LATFREE_SAMPLE_SEED", 0)

# --- Worker pool ---
# 1 keeps every search in-process.
WORKERS = max(1, _env_int("LATFREE_WORKERS", 1))

# --- Plotting ---
PLOT_SCALE = _env_int("LATFREE_PLOT_SCALE", 40)


def configure_logging(level: str | None = None) -> None:
    """Attach a stderr handler to the package logger. Safe to call more than once."""
    resolved = (level or LOG_LEVEL).upper()
    if not any(getattr(h, "_latfree", False) for h in logger.handlers):
        handler = logging.StreamHandler(sys.stderr)
        handler.setFormatter(logging.Formatter("%(levelname)s %(name)s: %(message)s"))
        handler._latfree = True  # type: ignore[attr-defined]
        logger.addHandler(handler)
    logger.setLevel(getattr(logging, resolved, logging.WARNING))
    logger.debug(f"DEBUG config: DEBUG_MODE={DEBUG_MODE}, LOG_LEVEL={resolved}")
    logger.debug(f"DEBUG config: DEFAULT_CAP={DEFAULT_CAP}, MAX_DIMENSION={MAX_DIMENSION}, "
                 f"APPROX_N_CAP={APPROX_N_CAP}, WORKERS={WORKERS}")
