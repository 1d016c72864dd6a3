import os

from dotenv import load_dotenv

# --- Environment variables / .env overrides
load_dotenv()


def _float_env(name: str, default: float) -> float:
    raw = os.getenv(name)
    if raw is None or not raw.strip():
        return default
    try:
        return float(raw)
    except ValueError:
        raise EnvironmentError(f"{name} must be a number, got {raw!r}")


TOLERANCE = _float_env("PENTAGON_TOLERANCE", 1e-10)
PSD_TOLERANCE = _float_env("PENTAGON_PSD_TOLERANCE", 1e-9)
ZERO_PROBABILITY = _float_env("PENTAGON_ZERO_PROBABILITY", 1e-12)
DEGENERACY_GAP = _float_env("PENTAGON_DEGENERACY_GAP", 1e-9)
MARGINAL_TOLERANCE = _float_env("PENTAGON_MARGINAL_TOLERANCE", 1e-8)
LOG_LEVEL = os.getenv("PENTAGON_LOG_LEVEL", "WARNING").upper()

# Significant digits for CSV output
CSV_DIGITS = 12
