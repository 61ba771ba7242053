"""Greedy-type constants of finite-dimensional normed spaces (real scalars)."""

import json

from . import _core
from ._core import (
    InvalidArgument,
    SpaceError,
    __version__,
    d_m,
    greedy_ordering,
    greedy_set,
    norm,
    sigma_m,
)


def estimate(space, dim=None, kind="C_g", *, samples=1000, hillclimb=200, seed=0, grid="coarse", workers=1):
    """Lower-bound estimate of one constant, with its witness, as a dict."""
    return json.loads(_core.estimate(space, dim, kind, samples, hillclimb, seed, grid, workers))


def verify(space, dim=None, suite="main", *, samples=1000, hillclimb=200, seed=0, grid="coarse", workers=1, gaps=()):
    """Verdict of one suite as a dict with claim_id, status, detail."""
    return json.loads(_core.verify(space, dim, suite, samples, hillclimb, seed, grid, workers, list(gaps)))


__all__ = [
    "InvalidArgument",
    "SpaceError",
    "__version__",
    "d_m",
    "estimate",
    "greedy_ordering",
    "greedy_set",
    "norm",
    "sigma_m",
    "verify",
]
