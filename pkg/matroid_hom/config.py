from starlette.config import Config

# env

env = Config()

LOG_JSON = env("LOG_JSON", cast=bool, default=False)
LOG_COLOR = env("LOG_COLOR", cast=bool, default=True)
LOG_LEVEL = env("LOG_LEVEL", cast=str, default="WARNING")

# search guards
# constants only; the environment configures log presentation and nothing else

MAX_EXHAUSTIVE_GROUND_SIZE = 6
"""Largest ground set enumerated exhaustively."""

MAX_FIBER_SIZE = 3
"""Largest fiber used when subdividing catalog matroids."""

DEFAULT_SUBDIVISION_FIBER_SIZE = 2

DEFAULT_TARGETS_MAX_N = 3
"""Largest homomorphism target in the theorems suite unless asked otherwise."""

RANK_CACHE_SIZE = 1 << 16
