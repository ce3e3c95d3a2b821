"""Monodromy, orbitals and commutants of finite Blaschke products."""

import json

from . import _core
from ._core import BlaschkeError, orbital_count

__all__ = [
    "BlaschkeError",
    "analyze",
    "branch_values",
    "evaluate",
    "generators",
    "orbital_count",
    "u_i_norm_check",
    "verify_gamma",
    "zn",
]


def _spec(product):
    """Accept a dict {"theta", "zeros"} or its JSON text."""
    if isinstance(product, str):
        return product
    zeros = [[complex(a).real, complex(a).imag] if not isinstance(a, (list, tuple)) else list(a)
             for a in product["zeros"]]
    return json.dumps({"theta": float(product.get("theta", 0.0)), "zeros": zeros})


def analyze(product, seed=0, newton_tol=1e-11):
    return json.loads(_core.analyze(_spec(product), seed, newton_tol))


def verify_gamma(product, budget=100_000, samples=100, isometry_bound=1e-2, seed=0):
    return json.loads(_core.verify_gamma(_spec(product), budget, samples, isometry_bound, seed))


def zn(n):
    return json.loads(_core.zn(n))


def u_i_norm_check(n, i, k):
    """Both exact norms as (numerator, denominator) pairs."""
    return _core.u_i_norm_check(n, i, k)


def evaluate(product, z):
    return _core.evaluate(_spec(product), complex(z))


def branch_values(product):
    return _core.branch_values(_spec(product))


def generators(product, seed=0):
    return _core.generators(_spec(product), seed)
