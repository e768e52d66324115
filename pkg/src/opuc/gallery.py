"""Named test measures and coefficient sequences."""
from __future__ import annotations

import numpy as np

from .measure import (
    BernsteinSzegoWeight,
    CircleMeasure,
    FourierWeight,
    LebesgueWeight,
    normalize,
)
from .recursion import VerblunskySeq


def lebesgue(grid=4096):
    return CircleMeasure(LebesgueWeight(), grid=grid)


def bernstein_szego(alpha=0.5, grid=4096):
    return CircleMeasure(BernsteinSzegoWeight(alpha), grid=grid)


def fourier(grid=4096):
    """``1 + 0.6 cos θ + 0.2 sin 2θ``: smooth, positive, not finite-rank."""
    return CircleMeasure(FourierWeight((1.0, 0.6), (0.0, 0.2)), grid=grid)


def one_minus_cos(grid=4096):
    """``1 - cos θ``; vanishes at ``θ = 0``."""
    return CircleMeasure(FourierWeight((1.0, -1.0)), grid=grid)


def half_atom(theta=0.0, grid=4096):
    """``½ dθ/2π + ½ δ_θ``."""
    return normalize(CircleMeasure(LebesgueWeight(), atoms=((theta, 0.5),),
                                   grid=grid, weight_scale=0.5))


MEASURES = {
    "lebesgue": lebesgue,
    "bernstein_szego": bernstein_szego,
    "fourier": fourier,
    "one_minus_cos": one_minus_cos,
    "half_atom": half_atom,
}

# atom-free, strictly positive weights
SMOOTH_POSITIVE = ("lebesgue", "bernstein_szego", "fourier")


def measure(name, grid=4096):
    return MEASURES[name](grid=grid)


def finite_rank():
    return VerblunskySeq([0.5, 1 / 3, 0.25])


def decaying(n=200, seed=1, scale=0.4, ratio=0.5):
    """``α_j = scale · ratio^j · e^{iφ_j}`` with uniform random phases."""
    rng = np.random.default_rng(seed)
    return VerblunskySeq(scale * ratio ** np.arange(n) * np.exp(2j * np.pi * rng.random(n)))


def random_bounded(n=60, bound=0.3, seed=0):
    """Uniform on the disk ``|α| <= bound``."""
    rng = np.random.default_rng(seed)
    return VerblunskySeq(bound * np.sqrt(rng.random(n)) * np.exp(2j * np.pi * rng.random(n)))


def periodic(alpha=0.5, n=4000):
    return VerblunskySeq(np.full(n, alpha, dtype=complex))
