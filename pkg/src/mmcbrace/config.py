"""Search bounds, overridable through the BRACE_CENSUS_BOUND env var."""

from __future__ import annotations

import os

# Max candidate matrices scanned by enumerate_automorphisms.  The largest
# shape in scope (Z/2 x Z/2 x Z/2 x Z/2^(m-1), m = 5) needs 2^20 candidates.
DEFAULT_AUT_ENUM_BOUND = 2**24

# Max elements accumulated while closing a holomorph subgroup.
DEFAULT_GENERATION_BOUND = 2**16

# all_subgroups enumerates the full lattice only up to this m.
MAX_SUBGROUP_LATTICE_M = 6

ENV_BOUND = "BRACE_CENSUS_BOUND"


def _env_bound() -> int | None:
    raw = os.environ.get(ENV_BOUND)
    if raw is None:
        return None
    return int(raw)


def aut_enum_bound(override: int | None = None) -> int:
    if override is not None:
        return override
    return _env_bound() or DEFAULT_AUT_ENUM_BOUND


def generation_bound(override: int | None = None) -> int:
    if override is not None:
        return override
    return _env_bound() or DEFAULT_GENERATION_BOUND
