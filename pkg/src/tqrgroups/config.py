"""Shared numeric tolerances and size caps, overridable via environment."""

import os


def _env_int(name, default):
    raw = os.environ.get(name)
    return int(raw) if raw else default


def _env_float(name, default):
    raw = os.environ.get(name)
    return float(raw) if raw else default


# One tolerance knob for all certified-rounding and orthogonality checks.
TOL = _env_float("TQR_TOL", 1e-8)

# Largest group we will enumerate at all (permutation closure, cosets, ...).
MAX_ORDER = _env_int("TQR_MAX_ORDER", 20000)

# Largest group for which a character table is computed from scratch.
CHARTABLE_CAP = _env_int("TQR_CHARTABLE_CAP", 2000)

# Associativity is checked exhaustively up to this order, sampled above it.
ASSOC_EXHAUSTIVE_CAP = _env_int("TQR_ASSOC_CAP", 300)

# Eigenvalues of the recombined class matrix closer than this are a collision.
EIG_COLLISION = 1e-6

# Attempts at re-randomizing the class-matrix combination before giving up.
MAX_EIG_ATTEMPTS = 12
