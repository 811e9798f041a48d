import os
from os import getenv
from dotenv import load_dotenv

load_dotenv(os.path.join(os.getcwd(), ".env"), override=True)


LOG_LEVEL = getenv("LOG_LEVEL") or "INFO"

DEFAULT_CUTOFF = getenv("DEFAULT_CUTOFF") or "2014.1"
DEFAULT_SEED = int(getenv("DEFAULT_SEED") or "0")
DEFAULT_K_GRID = [int(k) for k in (getenv("DEFAULT_K_GRID") or "5,10,20,50").split(",")]
DEFAULT_NEG_RATIO = float(getenv("DEFAULT_NEG_RATIO") or "1.0")
DEFAULT_MIN_DF = int(getenv("DEFAULT_MIN_DF") or "2")
DEFAULT_LABEL_WINDOW_TERMS = int(getenv("DEFAULT_LABEL_WINDOW_TERMS") or "2")

GPA_MIN = float(getenv("GPA_MIN") or "1.0")
GPA_MAX = float(getenv("GPA_MAX") or "7.0")

MODEL_FORMAT_VERSION = int(getenv("MODEL_FORMAT_VERSION") or "1")
