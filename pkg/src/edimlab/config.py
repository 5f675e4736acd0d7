"""Tunable constants. Everything a test tolerance or guard depends on lives here."""

# brute force refuses when C(#candidates, cap) exceeds this
BRUTE_FORCE_MAX_SUBSETS = 10**9

# explicit bitset universes are refused above this many object pairs
MAX_UNIVERSE_PAIRS = 10**7

# Monte Carlo tolerance: |p_hat - target| <= MC_STDERR_MULT * stderr + slack
MC_STDERR_MULT = 4.0
MC_SLACK_Q = 0.005
MC_SLACK_PROFILE = 0.005
MC_SLACK_SP = 0.01

# rejection sampling
REJECTION_BUDGET = 10**6
DEGENERATE_FRACTION = 0.01
# fraction of OTHER-binned (distance not in {1, 2}) profiles that gets flagged
OTHER_BIN_FLAG = 0.01

# exp() argument below which the Suen bound is reported as an underflowed 0
SUEN_UNDERFLOW_EXPONENT = -700.0

# JSON float precision (significant digits)
JSON_SIG_DIGITS = 15

CSV_SCHEMA_VERSION = 1
