"""Probability measures on the unit circle.

A measure is an absolutely continuous part ``w(θ) dθ/2π`` plus a finite list
of point masses.  Weights are kept symbolically (or as samples with a
trigonometric interpolant) and are sampled on a uniform grid on demand, so
any operation can refine the grid without re-entering user data.

Integrals against the a.c. part use the uniform trapezoid rule on
``θ_j = 2πj/N``, which is exact for trigonometric polynomials of degree
below ``N`` and spectrally accurate for smooth periodic weights.  Atoms
contribute exact terms.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field, replace
from typing import Sequence

import numpy as np
import scipy.linalg

from .errors import ResolutionExceeded, SpecError, TrivialMeasure, ZeroMass

DEFAULT_GRID = 4096
TOTAL_MASS_TOL = 1e-12


def grid_angles(n):
    return 2.0 * np.pi * np.arange(n) / n


def _is_power_of_two(n):
    return isinstance(n, (int, np.integer)) and n > 0 and (n & (n - 1)) == 0


class Weight:
    """Base class for a.c. weights ``w(θ) >= 0`` relative to ``dθ/2π``."""

    def __call__(self, theta):
        raise NotImplementedError

    def samples(self, n):
        return self(grid_angles(n))

    def to_dict(self):
        raise NotImplementedError


@dataclass(frozen=True)
class LebesgueWeight(Weight):
    def __call__(self, theta):
        return np.ones_like(np.asarray(theta, dtype=float))

    def to_dict(self):
        return {"preset": "lebesgue"}


@dataclass(frozen=True)
class BernsteinSzegoWeight(Weight):
    """``w(θ) = (1 - α²) / |1 - α e^{iθ}|²`` for real ``|α| < 1``.

    Its Verblunsky coefficients are ``(α, 0, 0, ...)``.
    """

    alpha: float

    def __post_init__(self):
        if not abs(self.alpha) < 1:
            raise SpecError(f"bernstein_szego needs |alpha| < 1, got {self.alpha}")

    def __call__(self, theta):
        a = self.alpha
        theta = np.asarray(theta, dtype=float)
        return (1.0 - a * a) / np.abs(1.0 - a * np.exp(1j * theta)) ** 2

    def to_dict(self):
        return {"preset": "bernstein_szego", "alpha": self.alpha}


@dataclass(frozen=True)
class FourierWeight(Weight):
    """``w(θ) = a_0 + Σ_k a_k cos kθ + Σ_k b_k sin kθ``.

    ``cos`` holds ``a_0, a_1, ...``; ``sin`` holds ``b_1, b_2, ...``.
    """

    cos: tuple = (1.0,)
    sin: tuple = ()

    def __call__(self, theta):
        theta = np.asarray(theta, dtype=float)
        out = np.zeros_like(theta)
        for k, a in enumerate(self.cos):
            out = out + a * np.cos(k * theta)
        for k, b in enumerate(self.sin, start=1):
            out = out + b * np.sin(k * theta)
        return out

    def to_dict(self):
        return {"preset": "fourier", "cos": list(self.cos), "sin": list(self.sin)}


@dataclass(frozen=True)
class SampledWeight(Weight):
    """Weight given by samples on its own uniform grid.

    Other grid sizes are served by the trigonometric interpolant
    (zero-padded FFT), which keeps integrals of the interpolant exact.
    """

    values: tuple

    def __post_init__(self):
        if not _is_power_of_two(len(self.values)):
            raise SpecError("sampled weight length must be a power of two")

    def _coefficients(self):
        v = np.asarray(self.values, dtype=float)
        return np.fft.rfft(v) / len(v)

    def samples(self, n):
        v = np.asarray(self.values, dtype=float)
        if n == len(v):
            return v.copy()
        c = self._coefficients()
        m = len(v)
        if n < m:
            raise ResolutionExceeded(
                f"cannot sample {m}-point weight on a coarser grid of {n}"
            )
        c = c.copy()
        c[-1] *= 0.5  # split the Nyquist term between ±m/2
        padded = np.zeros(n // 2 + 1, dtype=complex)
        padded[: len(c)] = c
        return np.fft.irfft(padded * n, n)

    def __call__(self, theta):
        theta = np.atleast_1d(np.asarray(theta, dtype=float))
        c = self._coefficients()
        k = np.arange(len(c))
        weights = np.full(len(c), 2.0)
        weights[0] = 1.0
        weights[-1] = 1.0
        phases = np.exp(1j * np.outer(theta, k))
        return np.real(phases @ (weights * c))

    def to_dict(self):
        return {"preset": "samples", "values": list(self.values)}


@dataclass(frozen=True)
class CircleMeasure:
    """``dμ = scale · w(θ) dθ/2π + Σ mass_k δ_{θ_k}``.

    ``weight=None`` means a purely atomic measure.
    """

    weight: Weight | None = field(default_factory=LebesgueWeight)
    atoms: tuple = ()
    grid: int = DEFAULT_GRID
    weight_scale: float = 1.0

    def __post_init__(self):
        if not _is_power_of_two(self.grid):
            raise SpecError(f"grid size must be a positive power of two, got {self.grid}")
        cleaned = []
        for theta, mass in self.atoms:
            if not mass > 0:
                raise SpecError(f"atom mass must be positive, got {mass}")
            cleaned.append((float(theta) % (2.0 * np.pi), float(mass)))
        angles = sorted(t for t, _ in cleaned)
        if any(b - a < 1e-14 for a, b in zip(angles, angles[1:])):
            raise SpecError("atom angles must be pairwise distinct")
        object.__setattr__(self, "atoms", tuple(cleaned))

    @property
    def has_atoms(self):
        return len(self.atoms) > 0

    def with_grid(self, n):
        return replace(self, grid=n)

    def weight_samples(self, n=None):
        n = self.grid if n is None else n
        if self.weight is None:
            return np.zeros(n)
        return self.weight_scale * self.weight.samples(n)

    def weight_at(self, theta):
        theta = np.asarray(theta, dtype=float)
        if self.weight is None:
            return np.zeros_like(theta)
        return self.weight_scale * self.weight(theta)

    def nodes(self, n=None):
        """Quadrature nodes on the circle and their weights (grid, then atoms)."""
        n = self.grid if n is None else n
        zeta = np.exp(1j * grid_angles(n))
        wts = self.weight_samples(n) / n
        if self.atoms:
            at = np.array([t for t, _ in self.atoms])
            am = np.array([m for _, m in self.atoms])
            zeta = np.concatenate([zeta, np.exp(1j * at)])
            wts = np.concatenate([wts, am])
        return zeta, wts

    def total_mass(self, n=None):
        return float(np.sum(self.weight_samples(n)) / (self.grid if n is None else n)
                     + sum(m for _, m in self.atoms))

    def check_nontrivial(self, n_max):
        """Raise unless the measure has support on more than ``n_max`` points."""
        w = self.weight_samples()
        if np.any(w > 0):
            return
        if len(self.atoms) >= n_max + 1:
            return
        raise TrivialMeasure(
            f"measure has {len(self.atoms)} support points; degree {n_max} needs "
            f"at least {n_max + 1}",
            operation="check_nontrivial",
        )

    def to_dict(self):
        out = {
            "weight": None if self.weight is None else self.weight.to_dict(),
            "atoms": [[t, m] for t, m in self.atoms],
            "grid": self.grid,
        }
        if self.weight_scale != 1.0:
            out["weight_scale"] = self.weight_scale
        return out

    @classmethod
    def from_dict(cls, data, normalized=True):
        """Build from the JSON measure-spec layout; normalizes by default."""
        try:
            wspec = data.get("weight", {"preset": "lebesgue"})
            weight = _weight_from_dict(wspec)
            atoms = tuple((float(t), float(m)) for t, m in data.get("atoms", []))
            grid = int(data.get("grid", DEFAULT_GRID))
            scale = float(data.get("weight_scale", 1.0))
        except (TypeError, KeyError, AttributeError, ValueError) as exc:
            if isinstance(exc, SpecError):
                raise
            raise SpecError(f"malformed measure spec: {exc}") from exc
        m = cls(weight=weight, atoms=atoms, grid=grid, weight_scale=scale)
        return normalize(m) if normalized else m


def _weight_from_dict(spec):
    if spec is None:
        return None
    preset = spec.get("preset")
    if preset == "lebesgue":
        return LebesgueWeight()
    if preset == "bernstein_szego":
        return BernsteinSzegoWeight(float(spec["alpha"]))
    if preset == "fourier":
        return FourierWeight(
            tuple(float(x) for x in spec.get("cos", [1.0])),
            tuple(float(x) for x in spec.get("sin", [])),
        )
    if preset == "samples":
        return SampledWeight(tuple(float(x) for x in spec["values"]))
    if preset == "verblunsky":
        from .recursion import VerblunskySeq, VerblunskyWeight

        return VerblunskyWeight(VerblunskySeq.from_dict(spec))
    raise SpecError(f"unknown weight preset {preset!r}")


def load_measure(path):
    with open(path) as fh:
        try:
            data = json.load(fh)
        except json.JSONDecodeError as exc:
            raise SpecError(f"invalid JSON in {path}: {exc}") from exc
    return CircleMeasure.from_dict(data)


def normalize(m: CircleMeasure) -> CircleMeasure:
    """Scale weight and atoms by a common factor so the total mass is one."""
    w = m.weight_samples()
    if np.any(w < 0):
        raise ZeroMass("weight is negative at a grid node", operation="normalize")
    total = m.total_mass()
    if not total > 0:
        raise ZeroMass(f"total mass {total} is not positive", operation="normalize")
    if abs(total - 1.0) <= TOTAL_MASS_TOL:
        return m
    return replace(
        m,
        weight_scale=m.weight_scale / total,
        atoms=tuple((t, mass / total) for t, mass in m.atoms),
    )


def _check_order(m, n, operation):
    if n > m.grid // 4:
        raise ResolutionExceeded(
            f"order {n} exceeds grid resolution N/4 = {m.grid // 4}", operation=operation
        )


def moments(m: CircleMeasure, n_max: int) -> np.ndarray:
    """``c_k = ∫ e^{-ikθ} dμ`` for ``k = 0..n_max``."""
    _check_order(m, n_max, "moment")
    c = np.fft.fft(m.weight_samples())[: n_max + 1] / m.grid
    if m.atoms:
        k = np.arange(n_max + 1)
        for theta, mass in m.atoms:
            c = c + mass * np.exp(-1j * k * theta)
    return c


def moment(m: CircleMeasure, n: int) -> complex:
    if n < 0:
        return complex(np.conj(moment(m, -n)))
    return complex(moments(m, n)[n])


def toeplitz_matrix(m: CircleMeasure, k: int) -> np.ndarray:
    """``(k+1)×(k+1)`` Gram matrix ``[⟨z^a, z^b⟩] = [c_{a-b}]``."""
    c = moments(m, k)
    return scipy.linalg.toeplitz(c, np.conj(c))


def inner_product(m: CircleMeasure, p: Sequence[complex], q: Sequence[complex]) -> complex:
    """``⟨p, q⟩ = ∫ conj(p) q dμ`` from ascending coefficient vectors.

    Conjugate-linear in the first slot; reduces to moments via
    ``⟨z^a, z^b⟩ = c_{a-b}``.
    """
    p = np.atleast_1d(np.asarray(p, dtype=complex))
    q = np.atleast_1d(np.asarray(q, dtype=complex))
    k = max(len(p), len(q)) - 1
    p = np.pad(p, (0, k + 1 - len(p)))
    q = np.pad(q, (0, k + 1 - len(q)))
    return complex(np.conj(p) @ toeplitz_matrix(m, k) @ q)


def log_integral(m: CircleMeasure, n: int | None = None) -> float:
    """``∫ log w dθ/2π`` on the grid; ``-inf`` when ``w`` vanishes at a node."""
    w = m.weight_samples(n)
    if np.any(w <= 1e-300):
        return float("-inf")
    return float(np.mean(np.log(w)))
