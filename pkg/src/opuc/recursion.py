"""Szegő recursion, the star map and Verblunsky coefficients.

Coefficient vectors are dense numpy arrays in ascending powers of ``z``.
"""
from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import (
    DegreeMismatch,
    InvalidAlpha,
    NotUnimodular,
    NumericalBreakdown,
    ResolutionExceeded,
    SpecError,
    TrivialMeasure,
)
from .measure import CircleMeasure, Weight

BREAKDOWN_TOL = 1e-13


def _rho(alphas):
    a = np.abs(alphas)
    return np.sqrt((1.0 - a) * (1.0 + a))


@dataclass(frozen=True)
class VerblunskySeq:
    """Finite prefix ``α_0 .. α_{n-1}`` of Verblunsky coefficients.

    Sequences are finite; operations that need more terms read the
    missing ones as zero.
    """

    alphas: np.ndarray

    def __post_init__(self):
        a = np.atleast_1d(np.asarray(self.alphas, dtype=complex)).copy()
        if a.ndim != 1:
            raise InvalidAlpha("Verblunsky coefficients must form a 1-d sequence")
        bad = np.nonzero(~(np.abs(a) < 1.0))[0]
        if bad.size:
            raise InvalidAlpha(f"|alpha_{bad[0]}| = {abs(a[bad[0]])} is not < 1")
        a.setflags(write=False)
        object.__setattr__(self, "alphas", a)

    @property
    def rhos(self):
        return _rho(self.alphas)

    def __len__(self):
        return len(self.alphas)

    def __getitem__(self, k):
        if isinstance(k, slice):
            return VerblunskySeq(self.alphas[k])
        return complex(self.alphas[k]) if k < len(self.alphas) else 0j

    def shift(self, k=1):
        """Coefficients ``α_k, α_{k+1}, ...`` of the k-th iterate."""
        return VerblunskySeq(self.alphas[k:])

    def padded(self, n):
        """Prefix of length ``n``, extended by zeros if needed."""
        a = np.zeros(n, dtype=complex)
        m = min(n, len(self.alphas))
        a[:m] = self.alphas[:m]
        return VerblunskySeq(a)

    def to_dict(self):
        return {"alphas": [[a.real, a.imag] for a in self.alphas]}

    @classmethod
    def from_dict(cls, data):
        try:
            raw = data["alphas"]
            alphas = [complex(x[0], x[1]) if isinstance(x, (list, tuple)) else complex(x)
                      for x in raw]
        except (KeyError, TypeError, ValueError, IndexError) as exc:
            raise SpecError(f"malformed coefficient spec: {exc}") from exc
        return cls(np.array(alphas, dtype=complex))


def as_alphas(v) -> VerblunskySeq:
    return v if isinstance(v, VerblunskySeq) else VerblunskySeq(v)


def load_alphas(path):
    with open(path) as fh:
        try:
            data = json.load(fh)
        except json.JSONDecodeError as exc:
            raise SpecError(f"invalid JSON in {path}: {exc}") from exc
    return VerblunskySeq.from_dict(data)


@dataclass(frozen=True)
class PolyPair:
    """``(φ_n, φ_n^*)`` (or the monic ``Φ_n``) as coefficient vectors."""

    degree: int
    phi: np.ndarray
    phi_star: np.ndarray
    monic: bool = False

    def __call__(self, z):
        z = np.asarray(z, dtype=complex)
        return (np.polynomial.polynomial.polyval(z, self.phi),
                np.polynomial.polynomial.polyval(z, self.phi_star))


def star(q: Sequence[complex], n: int) -> np.ndarray:
    """``q^*(z) = z^n conj(q(1/conj z))``: reverse and conjugate coefficients."""
    q = np.atleast_1d(np.asarray(q, dtype=complex))
    if len(q) > n + 1:
        if np.any(q[n + 1:] != 0):
            raise DegreeMismatch(f"degree of q exceeds n = {n}", operation="star")
        q = q[: n + 1]
    q = np.pad(q, (0, n + 1 - len(q)))
    return np.conj(q[::-1])


@dataclass(frozen=True)
class RecursionTrace:
    """Diagnostics from running the recursion against a measure."""

    alphas: VerblunskySeq
    norms_sq: np.ndarray          # ‖Φ_k‖² by quadrature, k = 0..n
    constant_term_residual: float  # max |α_k + conj(Φ_{k+1}(0))|
    monic: list


def szego_recursion(m: CircleMeasure, n: int, keep_polys=False) -> RecursionTrace:
    """Monic Gram–Schmidt via the Szegő recursion on the measure's nodes.

    ``conj(α_k) = ⟨Φ_k^*, zΦ_k⟩ / ‖Φ_k‖²`` is forced by ``Φ_{k+1} ⟂ Φ_k^*``.
    Inner products are node sums of polynomial values, which equal the moment
    reduction exactly while ``2k+1 < N``.
    """
    if n > m.grid // 8:
        raise ResolutionExceeded(
            f"order {n} needs grid >= {8 * n}, have {m.grid}",
            operation="verblunsky_from_measure",
        )
    m.check_nontrivial(n)
    zeta, wts = m.nodes()
    phi_vals = np.ones_like(zeta)
    phis_vals = np.ones_like(zeta)
    phi = np.ones(1, dtype=complex)
    alphas = np.zeros(n, dtype=complex)
    norms = np.empty(n + 1)
    resid = 0.0
    monic = [PolyPair(0, phi.copy(), phi.copy(), monic=True)] if keep_polys else []
    for k in range(n + 1):
        norm_sq = float(np.real(np.sum(wts * np.abs(phi_vals) ** 2)))
        norms[k] = norm_sq
        if norm_sq < 1e-13:
            raise TrivialMeasure(
                f"‖Φ_{k}‖² = {norm_sq:.3e}; measure supported on <= {k} points",
                operation="verblunsky_from_measure",
            )
        if k == n:
            break
        abar = np.sum(wts * np.conj(phis_vals) * zeta * phi_vals) / norm_sq
        a = complex(np.conj(abar))
        if abs(a) >= 1.0 - BREAKDOWN_TOL:
            raise NumericalBreakdown(
                f"|α_{k}| = {abs(a):.16f} reached the unit circle",
                operation="verblunsky_from_measure",
            )
        alphas[k] = a
        phi_star = star(phi, k)
        phi = np.concatenate([[0], phi]) - abar * np.concatenate([phi_star, [0]])
        resid = max(resid, abs(a + np.conj(phi[0])))
        phi_vals, phis_vals = zeta * phi_vals - abar * phis_vals, phis_vals - a * zeta * phi_vals
        if keep_polys:
            monic.append(PolyPair(k + 1, phi.copy(), star(phi, k + 1), monic=True))
    return RecursionTrace(VerblunskySeq(alphas), norms, resid, monic)


def verblunsky_from_measure(m: CircleMeasure, n: int) -> VerblunskySeq:
    """First ``n`` Verblunsky coefficients of ``m``."""
    return szego_recursion(m, n).alphas


def polys_from_verblunsky(v, upto: int) -> list[PolyPair]:
    """Orthonormal ``φ_0 .. φ_upto`` from the normalized recursion."""
    v = as_alphas(v)
    if upto > len(v):
        raise DegreeMismatch(f"need {upto} coefficients, have {len(v)}",
                             operation="polys_from_verblunsky")
    phi = np.ones(1, dtype=complex)
    phis = np.ones(1, dtype=complex)
    out = [PolyPair(0, phi, phis)]
    for k in range(upto):
        a, r = v.alphas[k], v.rhos[k]
        zphi = np.concatenate([[0], phi])
        phi, phis = ((zphi - np.conj(a) * np.concatenate([phis, [0]])) / r,
                     (np.concatenate([phis, [0]]) - a * zphi) / r)
        out.append(PolyPair(k + 1, phi, phis))
    return out


def monic_polys_from_verblunsky(v, upto: int) -> list[PolyPair]:
    v = as_alphas(v)
    phi = np.ones(1, dtype=complex)
    phis = np.ones(1, dtype=complex)
    out = [PolyPair(0, phi, phis, monic=True)]
    for k in range(upto):
        a = v[k]
        zphi = np.concatenate([[0], phi])
        phi, phis = (zphi - np.conj(a) * np.concatenate([phis, [0]]),
                     np.concatenate([phis, [0]]) - a * zphi)
        out.append(PolyPair(k + 1, phi, phis, monic=True))
    return out


def phi_values(v, z, upto: int | None = None):
    """Values ``φ_k(z), φ_k^*(z)`` for ``k = 0..upto``, shape ``(upto+1, *z.shape)``.

    Coefficients past the end of ``v`` are zero.
    """
    v = as_alphas(v)
    upto = len(v) if upto is None else upto
    z = np.asarray(z, dtype=complex)
    phi = np.empty((upto + 1,) + z.shape, dtype=complex)
    phis = np.empty_like(phi)
    phi[0] = 1.0
    phis[0] = 1.0
    for k in range(upto):
        a = v[k]
        r = np.sqrt((1.0 - abs(a)) * (1.0 + abs(a)))
        phi[k + 1] = (z * phi[k] - np.conj(a) * phis[k]) / r
        phis[k + 1] = (phis[k] - a * z * phi[k]) / r
    return phi, phis


def aleksandrov(v, lam: complex) -> VerblunskySeq:
    """Coefficients ``λα_j`` of the Aleksandrov measure ``μ_λ``."""
    if abs(abs(lam) - 1.0) > 1e-12:
        raise NotUnimodular(f"|λ| = {abs(lam)} is not 1", operation="aleksandrov")
    return VerblunskySeq(lam * as_alphas(v).alphas)


@dataclass(frozen=True, eq=False)
class VerblunskyWeight(Weight):
    """a.c. weight of the measure with coefficients ``v`` followed by zeros.

    ``w = 1 / |φ_n^*(e^{iθ})|²`` with ``n = len(v)``; the measure has no
    singular part.
    """

    v: VerblunskySeq

    def __call__(self, theta):
        theta = np.asarray(theta, dtype=float)
        _, phis = phi_values(self.v, np.exp(1j * theta))
        return 1.0 / np.abs(phis[-1]) ** 2

    def to_dict(self):
        return {"preset": "verblunsky", **self.v.to_dict()}


def quadrature_grid(v, base: int = 4096, cap: int = 2 ** 20) -> int:
    """Grid size resolving ``log |φ_n^*(e^{iθ})|`` to ~``e^{-40}``.

    The zeros of ``φ_n`` lie in the open disk, so ``log w`` extends
    analytically to the annulus ``max|zero| < |z| < 1/max|zero|`` and the
    trapezoid error decays like ``max|zero|^N``.
    """
    v = as_alphas(v)
    if len(v) == 0 or not np.any(v.alphas):
        return base
    phi = polys_from_verblunsky(v, len(v))[-1].phi
    top = np.max(np.abs(np.polynomial.polynomial.polyroots(phi))) if len(phi) > 1 else 0.0
    if top <= 0:
        return base
    need = 40.0 / max(-np.log(min(top, 1.0 - 1e-16)), 1e-300)
    n = base
    while n < need and n < cap:
        n *= 2
    return n


def measure_from_alphas(v, grid: int = 4096) -> CircleMeasure:
    return CircleMeasure(weight=VerblunskyWeight(as_alphas(v)), grid=grid)
