"""Carathéodory, Schur and Szegő functions of a measure or coefficient sequence.

Evaluators are plain callables accepting numpy arrays of points in the open
unit disk.  Quotients by ``z`` (Schur function from ``F``, Schur step-down)
have a removable singularity at the origin; near it the value is recovered
from the Cauchy integral over the circle ``|z| = FILL_RADIUS``, where the
direct formula is well conditioned.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

from .errors import (
    BoundaryPoint,
    DegenerateF,
    ExtrapolationUnstable,
    InvalidAlpha,
    SzegoConditionFails,
    UnsupportedMeasure,
)
from .measure import CircleMeasure, grid_angles, log_integral
from .recursion import (
    VerblunskySeq,
    as_alphas,
    measure_from_alphas,
    quadrature_grid,
    verblunsky_from_measure,
)

INTERIOR_TOL = 1e-9
FILL_RADIUS = 0.5
FILL_NODES = 64
MAX_GRID = 2 ** 22
_CHUNK = 2 ** 22

LADDER = tuple(1.0 - 2.0 ** -k for k in range(4, 15))

Evaluator = Callable[[np.ndarray], np.ndarray]


def _interior(z, operation):
    z = np.asarray(z, dtype=complex)
    if np.any(np.abs(z) >= 1.0 - INTERIOR_TOL):
        raise BoundaryPoint(f"|z| = {np.max(np.abs(z)):.12g} is not interior",
                            operation=operation)
    return z


def _scalar_out(z, out):
    return complex(out) if np.ndim(z) == 0 else out


def _herglotz(zeta, z):
    return (zeta + z) / (zeta - z)


def _cauchy(zeta, z):
    return 1.0 / (zeta - z)


def resolution_for(radius, base):
    """Grid size making the trapezoid error of a Cauchy kernel ~ e^{-40}."""
    need = 40.0 / max(1.0 - radius, 1e-300)
    n = base
    while n < need and n < MAX_GRID:
        n *= 2
    return n


def _grid_integral(samples, z, base, kernel):
    """``∫ s(θ) K(e^{iθ}, z) dθ/2π`` by the trapezoid rule, grid refined per point."""
    flat = z.ravel()
    out = np.empty(flat.shape, dtype=complex)
    sizes = np.array([resolution_for(abs(p), base) for p in flat], dtype=np.int64)
    for n in np.unique(sizes):
        idx = np.nonzero(sizes == n)[0]
        s = samples(int(n)) / n
        zeta = np.exp(1j * grid_angles(int(n)))
        rows = max(1, _CHUNK // int(n))
        for start in range(0, len(idx), rows):
            part = idx[start:start + rows]
            out[part] = kernel(zeta[None, :], flat[part, None]) @ s
    return out.reshape(z.shape)


def _atom_sum(m, z, kernel):
    out = np.zeros(z.shape, dtype=complex)
    for theta, mass in m.atoms:
        out = out + mass * kernel(np.exp(1j * theta), z)
    return out


def caratheodory(m: CircleMeasure, z):
    """``F(z) = ∫ (e^{iθ}+z)/(e^{iθ}-z) dμ(θ)`` for ``|z| < 1``."""
    za = _interior(z, "caratheodory")
    out = _grid_integral(m.weight_samples, za, m.grid, _herglotz) + _atom_sum(m, za, _herglotz)
    return _scalar_out(z, out)


def r_function(m: CircleMeasure, z):
    """``R(z) = ∫ dμ(θ) / (e^{iθ} - z)``; equals ``(F(z) - 1) / 2z`` off the origin."""
    za = _interior(z, "r_function")
    out = _grid_integral(m.weight_samples, za, m.grid, _cauchy) + _atom_sum(m, za, _cauchy)
    return _scalar_out(z, out)


def with_origin_fill(direct: Evaluator) -> Evaluator:
    """Wrap ``direct`` (ill-conditioned near 0) with a Cauchy-integral fill."""
    nodes = FILL_RADIUS * np.exp(2j * np.pi * np.arange(FILL_NODES) / FILL_NODES)

    def evaluate(z):
        za = np.asarray(z, dtype=complex)
        flat = za.ravel()
        out = np.empty(flat.shape, dtype=complex)
        far = np.abs(flat) >= FILL_RADIUS / 2
        if np.any(far):
            out[far] = direct(flat[far])
        if not np.all(far):
            g = direct(nodes)
            near = flat[~far]
            out[~far] = np.mean(g * nodes / (nodes - near[:, None]), axis=1)
        return _scalar_out(z, out.reshape(za.shape))

    return evaluate


def schur_from_caratheodory(F_eval: Evaluator, z=None):
    """``f = (F - 1) / (z (F + 1))``, inverting ``F = (1 + zf)/(1 - zf)``.

    Returns the evaluator when ``z`` is omitted.
    """

    def direct(w):
        F = np.asarray(F_eval(w), dtype=complex)
        if np.any(np.abs(F + 1.0) < 1e-14):
            raise DegenerateF("F(z) = -1 cannot occur for Re F > 0",
                              operation="schur_from_caratheodory")
        return (F - 1.0) / (w * (F + 1.0))

    f = with_origin_fill(direct)
    return f if z is None else f(_interior(z, "schur_from_caratheodory"))


def _check_alpha(a, operation):
    if not abs(a) < 1.0:
        raise InvalidAlpha(f"|α| = {abs(a)} is not < 1", operation=operation)


def schur_step_down(f_eval: Evaluator, alpha0: complex) -> Evaluator:
    """``f_1`` from ``z f_1 = (f - α_0) / (1 - conj(α_0) f)``."""
    _check_alpha(alpha0, "schur_step_down")
    ac = np.conj(alpha0)

    def direct(w):
        f = np.asarray(f_eval(w), dtype=complex)
        return (f - alpha0) / (w * (1.0 - ac * f))

    return with_origin_fill(direct)


def schur_step_up(f1_eval: Evaluator, alpha0: complex) -> Evaluator:
    """``f = (α_0 + z f_1) / (1 + conj(α_0) z f_1)``."""
    _check_alpha(alpha0, "schur_step_up")
    ac = np.conj(alpha0)

    def evaluate(z):
        za = np.asarray(z, dtype=complex)
        zf1 = za * np.asarray(f1_eval(za), dtype=complex)
        return _scalar_out(z, (alpha0 + zf1) / (1.0 + ac * zf1))

    return evaluate


def schur_from_alphas(v, z):
    """Schur function of ``v`` followed by zeros: the folded continued fraction."""
    v = as_alphas(v)
    za = np.asarray(z, dtype=complex)
    f = np.zeros(za.shape, dtype=complex)
    for a in v.alphas[::-1]:
        zf = za * f
        f = (a + zf) / (1.0 + np.conj(a) * zf)
    return _scalar_out(z, f)


def caratheodory_from_alphas(v, z):
    za = np.asarray(z, dtype=complex)
    zf = za * schur_from_alphas(v, za)
    return _scalar_out(z, (1.0 + zf) / (1.0 - zf))


def re_caratheodory_from_schur(f, z):
    """``Re F = (1 - |f|²|z|²) / |1 - zf|²``."""
    return (1.0 - np.abs(f) ** 2 * np.abs(z) ** 2) / np.abs(1.0 - z * f) ** 2


class SchurChain:
    """Schur iterates ``f_0 = f, f_1, f_2, ...`` and their values ``f_n(0)``.

    Measure-backed chains start from ``F`` by quadrature and peel one
    coefficient per step with ``α_n = f_n(0)``; coefficient-backed chains
    read ``f_n`` off the shifted continued fraction.
    """

    def __init__(self, f0: Evaluator, alphas: VerblunskySeq | None = None):
        self._levels = [f0]
        self._alphas = []
        self._source_alphas = alphas

    @classmethod
    def from_measure(cls, m: CircleMeasure):
        return cls(schur_from_caratheodory(lambda w: caratheodory(m, w)))

    @classmethod
    def from_alphas(cls, v):
        v = as_alphas(v)
        return cls(lambda z: schur_from_alphas(v, z), alphas=v)

    def alpha(self, n) -> complex:
        if self._source_alphas is not None:
            return self._source_alphas[n]
        while len(self._alphas) <= n:
            k = len(self._alphas)
            self._alphas.append(complex(self.level(k)(0.0)))
        return self._alphas[n]

    def level(self, n) -> Evaluator:
        if self._source_alphas is not None:
            tail = self._source_alphas.shift(n)
            return lambda z: schur_from_alphas(tail, z)
        while len(self._levels) <= n:
            k = len(self._levels) - 1
            self._levels.append(schur_step_down(self._levels[k], self.alpha(k)))
        return self._levels[n]

    def alphas(self, n) -> VerblunskySeq:
        return VerblunskySeq([self.alpha(k) for k in range(n)])


@dataclass(frozen=True)
class SzegoConditionReport:
    holds: bool
    sum: float
    partial_sums: np.ndarray
    log_integral: float

    @property
    def log_diverges(self):
        return self.log_integral == float("-inf")


def szego_condition(source, n: int | None = None) -> SzegoConditionReport:
    """Coefficient sum ``Σ|α_j|²`` and ``∫ log w dθ/2π`` side by side.

    Only finite data is inspected: partial sums are reported as a trend, and
    ``holds`` means the log integral is finite on the grid.
    """
    if isinstance(source, CircleMeasure):
        n = min(64, source.grid // 8) if n is None else n
        v = verblunsky_from_measure(source, n)
        li = log_integral(source)
    else:
        v = as_alphas(source)
        li = log_integral(measure_from_alphas(v, grid=quadrature_grid(v)))
    partial = np.cumsum(np.abs(v.alphas) ** 2)
    total = float(partial[-1]) if len(partial) else 0.0
    return SzegoConditionReport(bool(np.isfinite(li)), total, partial, li)


def szego_function(m: CircleMeasure, z):
    """``D(z) = exp(∫ (e^{iθ}+z)/(e^{iθ}-z) log w(θ) dθ/4π)``."""
    za = _interior(z, "szego_function")
    if not np.isfinite(log_integral(m)):
        raise SzegoConditionFails("log w is not integrable on the grid",
                                  operation="szego_function")

    def log_samples(n):
        w = m.weight_samples(n)
        if np.any(w <= 1e-300):
            raise SzegoConditionFails(f"weight vanishes on the {n}-point grid",
                                      operation="szego_function")
        return np.log(w)

    out = np.exp(0.5 * _grid_integral(log_samples, za, m.grid, _herglotz))
    return _scalar_out(z, out)


def richardson(values, steps):
    """Neville extrapolation of ``values(h)`` to ``h = 0``.

    Returns ``(estimate, error)`` taken from the tableau entry whose change
    from its predecessor in the same row is smallest.
    """
    values = np.asarray(values, dtype=complex)
    h = np.asarray(steps, dtype=float)
    n = len(values)
    table = [[values[i]] for i in range(n)]
    best, err = values[-1], np.inf
    for i in range(1, n):
        for j in range(1, i + 1):
            t = (h[i - j] * table[i][j - 1] - h[i] * table[i - 1][j - 1]) / (h[i - j] - h[i])
            table[i].append(t)
            e = abs(t - table[i][j - 1])
            if e <= err:
                best, err = t, e
    return best, float(err)


def _radial_limit(values, ladder, tol, operation):
    steps = 1.0 - np.asarray(ladder)
    est, err = richardson(values, steps)
    if not np.isfinite(err) or err > tol * max(1.0, abs(est)):
        raise ExtrapolationUnstable(
            f"radial estimates do not settle (change {err:.3e})", operation=operation
        )
    return est, err


def boundary_weight(m: CircleMeasure, theta: float, ladder=LADDER, tol=1e-3) -> float:
    """``lim_{r→1} Re F(r e^{iθ})``, the a.c. weight at ``θ``."""
    pts = np.asarray(ladder) * np.exp(1j * theta)
    est, _ = _radial_limit(np.real(caratheodory(m, pts)), ladder, tol, "boundary_weight")
    return float(np.real(est))


def pure_point_mass(m: CircleMeasure, theta0: float, ladder=LADDER, tol=1e-3) -> float:
    """``lim_{r→1} (1 - r)/2 · Re F(r e^{iθ_0}) = μ({θ_0})``."""
    r = np.asarray(ladder)
    vals = 0.5 * (1.0 - r) * np.real(caratheodory(m, r * np.exp(1j * theta0)))
    est, _ = _radial_limit(vals, ladder, tol, "pure_point_mass")
    return float(np.real(est))


def radial_divergence(m: CircleMeasure, theta: float, ladder=LADDER):
    """``|F(r e^{iθ})|`` along the ladder and whether it grows like ``1/(1-r)``.

    A diagnostic only; it does not certify singular support.
    """
    r = np.asarray(ladder)
    mags = np.abs(caratheodory(m, r * np.exp(1j * theta)))
    scaled = (1.0 - r) * mags
    diverges = bool(scaled[-1] > 1e-3 and mags[-1] > 10.0 * mags[0])
    return mags, diverges


def boundary_caratheodory(m: CircleMeasure, theta=None, n: int | None = None):
    """Boundary values ``F(e^{iθ}) = w + i·(conjugate of w)`` of an a.c. measure.

    Uses the Fourier series ``c_0 + 2 Σ_{k≥1} c_k e^{ikθ}`` with moments from
    the FFT of the weight on ``n`` points.  ``theta=None`` returns values on
    that grid.
    """
    if m.has_atoms:
        raise UnsupportedMeasure("boundary values need a measure without atoms",
                                 operation="boundary_caratheodory")
    n = m.grid if n is None else n
    c = np.fft.fft(m.weight_samples(n)) / n
    coef = np.zeros(n, dtype=complex)
    coef[0] = c[0]
    coef[1:n // 2] = 2.0 * c[1:n // 2]
    coef[n // 2] = c[n // 2]
    if theta is None:
        return np.fft.ifft(coef) * n
    theta = np.atleast_1d(np.asarray(theta, dtype=float))
    k = np.arange(n // 2 + 1)
    return np.exp(1j * np.outer(theta, k)) @ coef[: n // 2 + 1]
