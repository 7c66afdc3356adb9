import os
from dotenv import load_dotenv

load_dotenv()


def _int_list(raw: str):
    return tuple(int(part) for part in raw.split(",") if part.strip())


# --- Reproducibility ---
DEFAULT_SEED = int(os.getenv("EQF_SEED", "42"))
DEFAULT_TRIALS = int(os.getenv("EQF_TRIALS", "500"))

# --- Point Sampling ---
# Seven coefficient values and a degree cap of 3 for numerators and denominators.
SAMPLE_POOL = _int_list(os.getenv("EQF_SAMPLE_POOL", "-3,-2,-1,0,1,2,3"))
SAMPLE_MAX_DEGREE = int(os.getenv("EQF_SAMPLE_MAX_DEGREE", "3"))
SAMPLER_VERSION = os.getenv("EQF_SAMPLER_VERSION", "sampler-v1")

# --- Logging ---
LOG_LEVEL = os.getenv("EQF_LOG_LEVEL", "WARNING")

# --- Paths ---
CORPUS_DIR = os.getenv("EQF_CORPUS_DIR", "corpus/")
REPORT_DIR = os.getenv("EQF_REPORT_DIR", "reports/")
FORMULA_SUFFIX = ".eqf"

# --- Pair Oracle ---
LINEARIZATION_MAX_DEGREE = int(os.getenv("EQF_LINEARIZATION_MAX_DEGREE", "6"))
SIMPLE_LINEAR_SAMPLES = int(os.getenv("EQF_SIMPLE_LINEAR_SAMPLES", "4"))

# --- Chain Lab ---
CHAIN_MAX_STEPS = int(os.getenv("EQF_CHAIN_MAX_STEPS", "12"))
CHAIN_WINDOW = int(os.getenv("EQF_CHAIN_WINDOW", "2"))
ENUMERATION_LIMIT = int(os.getenv("EQF_ENUMERATION_LIMIT", "10000"))
QUOTIENT_LIMIT = int(os.getenv("EQF_QUOTIENT_LIMIT", "625"))

# --- Reports ---
REPORT_SCHEMA = "eqfields-report-v1"
