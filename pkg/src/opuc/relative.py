"""Relative Szegő function and the step-by-step sum rules built on it.

Sources are either a :class:`VerblunskySeq` (read with a zero tail, so all
weights are rational and strictly positive) or an absolutely continuous
:class:`CircleMeasure`.  For measures the shifted weights ``w_k`` come from
the boundary values of ``F`` pushed through the Schur step-down; for
coefficients they are the rational weights of the shifted sequences.
"""
from __future__ import annotations

from dataclasses import dataclass

import mpmath
import numpy as np

from .analytic import (
    LADDER,
    SchurChain,
    boundary_caratheodory,
    re_caratheodory_from_schur,
    richardson,
    schur_from_alphas,
    szego_function,
)
from .errors import LogDivergence, ZeroWeight
from .measure import DEFAULT_GRID, CircleMeasure, grid_angles, log_integral, moments
from .recursion import (
    VerblunskySeq,
    VerblunskyWeight,
    aleksandrov,
    as_alphas,
    measure_from_alphas,
    phi_values,
    quadrature_grid,
    verblunsky_from_measure,
)


def _is_measure(source):
    return isinstance(source, CircleMeasure)


def delta0D(source, z):
    """``(1 - conj(α_0) f)/ρ_0 · (1 - z f_1)/(1 - z f)``."""
    za = np.asarray(z, dtype=complex)
    if _is_measure(source):
        chain = SchurChain.from_measure(source)
        a0 = chain.alpha(0)
        f = chain.level(0)(za)
        f1 = chain.level(1)(za)
    else:
        v = as_alphas(source)
        a0 = v[0]
        f = schur_from_alphas(v, za)
        f1 = schur_from_alphas(v.shift(1), za)
    rho0 = np.sqrt((1.0 - abs(a0)) * (1.0 + abs(a0)))
    out = (1.0 - np.conj(a0) * f) / rho0 * (1.0 - za * f1) / (1.0 - za * f)
    return complex(out) if np.ndim(z) == 0 else out


def _caratheodory_by_polys(v: VerblunskySeq, z):
    """``ψ_n^*/φ_n^*`` at ``n = len(v)``; exact for a zero tail."""
    _, phis = phi_values(v, z)
    _, psis = phi_values(aleksandrov(v, -1.0), z)
    return psis[-1] / phis[-1]


@dataclass(frozen=True)
class RatioResidual:
    ratio: float  # |Re F/Re F_1 - |δ₀D|² (1 - |z|²|f|²)/(1 - |f|²)|
    step: float   # |1 - |z f_1|² - ρ_0²(1 - |f|²)/|1 - conj(α_0) f|²|

    @property
    def residual(self):
        return max(self.ratio, self.step)


def ratio_identity_check(v, z) -> RatioResidual:
    """Residuals of the interior ratio identity and of the one-step modulus identity.

    ``F`` and ``F_1`` are taken from second-kind/first-kind polynomial ratios,
    independently of the continued fraction that feeds ``δ₀D``.
    """
    v = as_alphas(v)
    za = np.asarray(z, dtype=complex)
    a0 = v[0]
    rho0_sq = (1.0 - abs(a0)) * (1.0 + abs(a0))
    F = _caratheodory_by_polys(v, za)
    F1 = _caratheodory_by_polys(v.shift(1), za)
    f = schur_from_alphas(v, za)
    f1 = schur_from_alphas(v.shift(1), za)
    d = delta0D(v, za)
    z2 = np.abs(za) ** 2
    lhs = np.real(F) / np.real(F1)
    rhs = np.abs(d) ** 2 * (1.0 - z2 * np.abs(f) ** 2) / (1.0 - np.abs(f) ** 2)
    step_lhs = 1.0 - np.abs(za * f1) ** 2
    step_rhs = rho0_sq * (1.0 - np.abs(f) ** 2) / np.abs(1.0 - np.conj(a0) * f) ** 2
    return RatioResidual(float(np.max(np.abs(lhs - rhs))),
                         float(np.max(np.abs(step_lhs - step_rhs))))


@dataclass(frozen=True)
class BoundaryRatio:
    theta: float
    extrapolated: float  # lim |δ₀D(r e^{iθ})|²
    direct: float        # w(θ)/w_1(θ)
    error_estimate: float

    @property
    def residual(self):
        return abs(self.extrapolated - self.direct)


def _measure_shifted_weight(m: CircleMeasure, theta, alpha0):
    zeta = np.exp(1j * np.atleast_1d(theta))
    F = boundary_caratheodory(m, theta)
    f = (F - 1.0) / (zeta * (F + 1.0))
    f1 = (f - alpha0) / (zeta * (1.0 - np.conj(alpha0) * f))
    return re_caratheodory_from_schur(f1, zeta)


def weight_ratio_boundary(source, theta: float, ladder=LADDER) -> BoundaryRatio:
    """``|δ₀D|²`` on the radial ladder, extrapolated, against ``w/w_1`` at ``θ``."""
    if _is_measure(source):
        w = float(source.weight_at(theta))
        if w < 1e-12:
            raise ZeroWeight(f"w({theta}) = {w:.3e}", operation="weight_ratio_boundary")
        alpha0 = verblunsky_from_measure(source, 1)[0]
        w1 = float(_measure_shifted_weight(source, theta, alpha0)[0])
    else:
        v = as_alphas(source)
        w = float(VerblunskyWeight(v)(theta))
        if w < 1e-12:
            raise ZeroWeight(f"w({theta}) = {w:.3e}", operation="weight_ratio_boundary")
        w1 = float(VerblunskyWeight(v.shift(1))(theta))
    r = np.asarray(ladder)
    vals = np.abs(delta0D(source, r * np.exp(1j * theta))) ** 2
    est, err = richardson(vals, 1.0 - r)
    return BoundaryRatio(float(theta), float(np.real(est)), w / w1, err)


@dataclass(frozen=True)
class SumRuleReport:
    step: int
    lhs: float  # coefficient side
    rhs: float  # entropy side
    kind: str = "step"

    @property
    def abs_error(self):
        return abs(self.lhs - self.rhs)


def rho_sq_products(alphas):
    """Cumulative ``(ρ_0 ⋯ ρ_{k-1})²`` for ``k = 1..n``."""
    a = np.abs(np.asarray(alphas, dtype=complex))
    return np.cumprod((1.0 - a) * (1.0 + a))


def shifted_weights(source, n_steps: int, grid: int | None = None):
    """Grid samples of ``w_0 .. w_{n_steps}`` and the coefficients used.

    ``w_k`` is the a.c. weight of the measure with coefficients
    ``α_k, α_{k+1}, ...``.
    """
    if _is_measure(source):
        m = source if grid is None else source.with_grid(grid)
        v = verblunsky_from_measure(m, n_steps)
        zeta = np.exp(1j * grid_angles(m.grid))
        f = boundary_caratheodory(m)
        f = (f - 1.0) / (zeta * (f + 1.0))
        weights = [m.weight_samples()]
        for a in v.alphas:
            f = (f - a) / (zeta * (1.0 - np.conj(a) * f))
            weights.append(re_caratheodory_from_schur(f, zeta))
        return v, weights
    v = as_alphas(source).padded(max(n_steps, len(as_alphas(source))))
    n = max(quadrature_grid(v.shift(k)) for k in range(n_steps + 1)) if grid is None else grid
    weights = [VerblunskyWeight(v.shift(k)).samples(n) for k in range(n_steps + 1)]
    return v, weights


def _logs(weights):
    out = []
    for k, w in enumerate(weights):
        if np.any(w <= 1e-300):
            raise LogDivergence(f"w_{k} vanishes on the grid", operation="step_sum_rule")
        out.append(np.log(w))
    return out


def step_sum_rule(source, n_steps: int, grid: int | None = None) -> list[SumRuleReport]:
    """Per-step ``ρ_k² = exp ∫ log(w_k/w_{k+1})`` and the cumulative form.

    Returns ``n_steps`` rows of kind ``"step"`` followed by ``n_steps`` rows of
    kind ``"cumulative"``: ``(ρ_0⋯ρ_{k-1})² = exp ∫ log(w_0/w_k)``.
    """
    v, weights = shifted_weights(source, n_steps, grid)
    logs = _logs(weights)
    rho_sq = (1.0 - np.abs(v.alphas)) * (1.0 + np.abs(v.alphas))
    prods = rho_sq_products(v.alphas)
    rows = [SumRuleReport(k, float(rho_sq[k]), float(np.exp(np.mean(logs[k] - logs[k + 1]))))
            for k in range(n_steps)]
    rows += [SumRuleReport(k, float(prods[k - 1]),
                           float(np.exp(np.mean(logs[0] - logs[k]))), kind="cumulative")
             for k in range(1, n_steps + 1)]
    return rows


@dataclass(frozen=True)
class SzegoTheoremReport:
    n: int
    product: float               # Π_{j<n} (1 - |α_j|²)
    entropy: float               # ∫ log w^{(n)} dθ/2π of the truncated sequence
    source_entropy: float | None  # ∫ log w dθ/2π of the source measure

    @property
    def equality_residual(self):
        return abs(self.product - np.exp(self.entropy))

    @property
    def inequality_margin(self):
        if self.source_entropy is None:
            return None
        return self.product - float(np.exp(self.source_entropy))


def szego_theorem_check(source, n: int) -> SzegoTheoremReport:
    """Product of ``ρ_j²`` against the entropy of the truncated-coefficient weight.

    For a measure source also reports the source entropy, so that
    ``product >= exp(source entropy)`` can be checked at every truncation.
    """
    if _is_measure(source):
        v = verblunsky_from_measure(source, n)
        src = log_integral(source)
    else:
        v = as_alphas(source).padded(n)
        src = None
    prods = rho_sq_products(v.alphas)
    product = float(prods[n - 1]) if n > 0 else 1.0
    entropy = log_integral(measure_from_alphas(v[:n], grid=quadrature_grid(v[:n])))
    if not np.isfinite(entropy):
        raise LogDivergence("truncated weight vanishes on the grid",
                            operation="szego_theorem_check")
    return SzegoTheoremReport(n, product, entropy, src)


def truncation_moment_gap(m: CircleMeasure, n: int, kmax: int = 10) -> float:
    """``max_{k<=kmax} |c_k^{(n)} - c_k|`` for the order-``n`` coefficient truncation.

    Moment convergence is the testable form of weak convergence of the
    truncated measures against trigonometric polynomials.
    """
    v = verblunsky_from_measure(m, n)
    c_trunc = moments(measure_from_alphas(v, grid=m.grid), kmax)
    return float(np.max(np.abs(c_trunc - moments(m, kmax))))


def _schur_scalar(alphas, z):
    f = 0 * z
    for a in reversed(alphas):
        f = (a + z * f) / (1 + a.conjugate() * z * f)
    return f


def _phi_star_scalar(alphas, z, n, sqrt):
    p = ps = 1 + 0 * z
    for k in range(n):
        a = alphas[k] if k < len(alphas) else 0 * z
        rho = sqrt(1 - abs(a) ** 2)
        p, ps = (z * p - a.conjugate() * ps) / rho, (ps - a * z * p) / rho
    return ps


def _delta0D_scalar(alphas, z, sqrt):
    a0 = alphas[0] if alphas else 0 * z
    f = _schur_scalar(alphas, z)
    f1 = _schur_scalar(alphas[1:], z)
    return (1 - a0.conjugate() * f) / sqrt(1 - abs(a0) ** 2) * (1 - z * f1) / (1 - z * f)


def _as_scalars(v, z, dps):
    alphas = list(as_alphas(v).alphas)
    if dps is None:
        return [complex(a) for a in alphas], complex(z), np.sqrt
    return [mpmath.mpc(a) for a in alphas], mpmath.mpc(z), mpmath.sqrt


def delta0D_as_polynomial_limit(v, z, n: int, dps: int | None = None):
    """Ratios ``φ_{k-1}^*(z; α_1, ...) / φ_k^*(z; α_0, ...)`` for ``k = 1..n``.

    With ``dps`` set the recursion runs in mpmath at that many digits and
    the ratios are returned as ``mpc``; otherwise as a complex array.
    """
    ctx = mpmath.workdps(dps) if dps else _nullcontext()
    with ctx:
        alphas, zs, sqrt = _as_scalars(v, z, dps)
        out = [_phi_star_scalar(alphas[1:], zs, k - 1, sqrt) / _phi_star_scalar(alphas, zs, k, sqrt)
               for k in range(1, n + 1)]
    return out if dps else np.array(out, dtype=complex)


def delta0D_high_precision(v, z, dps: int):
    with mpmath.workdps(dps):
        alphas, zs, sqrt = _as_scalars(v, z, dps)
        return _delta0D_scalar(alphas, zs, sqrt)


class _nullcontext:
    def __enter__(self):
        return self

    def __exit__(self, *exc):
        return False


def delta0D_as_D_ratio(v, z, grid: int = DEFAULT_GRID):
    """``|δ₀D(z) - D(z; α_0, α_1, ...)/D(z; α_1, α_2, ...)|`` with quadrature ``D``."""
    v = as_alphas(v)
    D0 = szego_function(measure_from_alphas(v, grid), z)
    D1 = szego_function(measure_from_alphas(v.shift(1), grid), z)
    return np.abs(delta0D(v, z) - D0 / D1)


def nonlocal_sum_rule(source, z, grid: int | None = None):
    """Relative residual between ``δ₀D(z)`` and ``exp(∫ K(θ,z) log(w/w_1) dθ/4π)``."""
    za = np.asarray(z, dtype=complex)
    _, weights = shifted_weights(source, 1, grid)
    logs = _logs(weights)
    n = len(logs[0])
    zeta = np.exp(1j * grid_angles(n))
    kernel = (zeta[None, :] + za.ravel()[:, None]) / (zeta[None, :] - za.ravel()[:, None])
    integral = kernel @ (logs[0] - logs[1]) / (2.0 * n)
    d = np.asarray(delta0D(source, za.ravel()))
    res = np.abs(d - np.exp(integral)) / np.abs(d)
    return res.reshape(za.shape)
