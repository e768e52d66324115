"""Transfer matrices, second-kind polynomials, Weyl solutions and Lyapunov rates.

The ℓ² (Weyl) solution decays while a generic solution of the same
recursion grows, so it is never built by forward iteration from ``ψ + Fφ``
beyond a few steps.  Instead the ratios ``m_n^+ = u_{n+1}/u_n`` come from the
Schur iterates, ``m_n^+ = z (1 - conj(α_n) f_n(z)) / ρ_n``, and
``u_n^* = z f_n(z) u_n``.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .analytic import caratheodory, caratheodory_from_alphas, schur_from_alphas
from .errors import DegenerateF, InvalidAlpha, ZeroDenominator
from .measure import CircleMeasure
from .recursion import VerblunskySeq, aleksandrov, as_alphas, phi_values, verblunsky_from_measure

RESCALE_EVERY = 32


def _rho(a):
    return np.sqrt((1.0 - abs(a)) * (1.0 + abs(a)))


def a_matrix(alpha: complex, z: complex) -> np.ndarray:
    """One-step matrix ``ρ^{-1} [[z, -conj(α)], [-α z, 1]]``."""
    if not abs(alpha) < 1.0:
        raise InvalidAlpha(f"|α| = {abs(alpha)} is not < 1", operation="a_matrix")
    return np.array([[z, -np.conj(alpha)], [-alpha * z, 1.0]], dtype=complex) / _rho(alpha)


def u_matrix(lam: complex) -> np.ndarray:
    return np.array([[1.0, 0.0], [0.0, lam]], dtype=complex)


@dataclass(frozen=True)
class TransferMatrix:
    """``T_n(z) = exp(log_scale) · matrix`` after ``n`` factors.

    ``log_det`` is ``log det T_n`` accumulated from the triangular factors of
    the QR-factored product.  The explicit product is too ill-conditioned
    (condition number ~ ``|T_n|² / |z|^n``) for its own determinant to keep
    any relative accuracy at large ``n``.
    """

    matrix: np.ndarray
    n: int
    log_scale: float = 0.0
    log_det: complex | None = None

    @property
    def value(self):
        return self.matrix * np.exp(self.log_scale)

    @property
    def det(self):
        if self.log_det is not None:
            return complex(np.exp(self.log_det))
        return complex(np.linalg.det(self.matrix) * np.exp(2.0 * self.log_scale))

    def explicit_det(self):
        """Determinant of the explicit product (forward error ~ eps·‖T‖²)."""
        return complex(np.linalg.det(self.matrix) * np.exp(2.0 * self.log_scale))

    def log_norm(self):
        return float(np.log(np.linalg.norm(self.matrix, 2)) + self.log_scale)

    def apply(self, vec):
        return self.value @ np.asarray(vec, dtype=complex)


def cocycle(v, z: complex, n: int | None = None, rescale_every: int = RESCALE_EVERY):
    """``T_n(z) = A(α_{n-1}, z) ⋯ A(α_0, z)``, rescaled to avoid overflow.

    The product is kept as ``Q R`` with ``A_k Q_{k-1} = Q_k R_k``, so
    ``det T_n = det Q_n · Π det R_k`` is available to full relative precision.
    """
    v = as_alphas(v)
    n = len(v) if n is None else n
    q = np.eye(2, dtype=complex)
    r = np.eye(2, dtype=complex)
    log_scale = 0.0
    log_det = 0j
    for k in range(n):
        q, rk = np.linalg.qr(a_matrix(v[k], z) @ q)
        r = rk @ r
        log_det += np.log(rk[0, 0]) + np.log(rk[1, 1])
        if (k + 1) % rescale_every == 0:
            s = np.max(np.abs(r))
            r /= s
            log_scale += np.log(s)
    log_det += np.log(np.linalg.det(q))
    return TransferMatrix(q @ r, n, log_scale, complex(log_det))


def second_kind_polys(v, z, upto: int | None = None):
    """Values ``ψ_k(z), ψ_k^*(z)``: the polynomials of the coefficients ``-α_j``."""
    return phi_values(aleksandrov(v, -1.0), z, upto)


def _caratheodory_of(source, z):
    if isinstance(source, CircleMeasure):
        return caratheodory(source, z)
    return caratheodory_from_alphas(source, z)


def _alphas_of(source, n):
    if isinstance(source, CircleMeasure):
        return verblunsky_from_measure(source, n)
    return as_alphas(source).padded(max(n, len(as_alphas(source))))


@dataclass(frozen=True)
class ConvergenceTable:
    n: np.ndarray
    error: np.ndarray

    @property
    def final(self):
        return float(self.error[-1])


def f_limit_check(source, z: complex, n_max: int) -> ConvergenceTable:
    """``|ψ_n^*(z)/φ_n^*(z) - F(z)|`` for ``n = 0..n_max``."""
    F = _caratheodory_of(source, z)
    v = _alphas_of(source, n_max)
    _, phis = phi_values(v, z, n_max)
    _, psis = second_kind_polys(v, z, n_max)
    return ConvergenceTable(np.arange(n_max + 1), np.abs(psis / phis - F))


@dataclass(frozen=True)
class WeylFit:
    beta: complex
    K: int
    start: int
    tail_sums: np.ndarray = field(repr=False)  # windowed sums for the fitted beta

    def error(self, F):
        return abs(self.beta - F)


def _weyl_vectors(v, z, K):
    phi, phis = phi_values(v, z, K)
    psi, psis = second_kind_polys(v, z, K)
    a = np.stack([psi, -psis], axis=-1)
    b = np.stack([phi, phis], axis=-1)
    return a, b


def weyl_tail_sum(source, z, beta, K: int, start: int | None = None) -> float:
    """``Σ_{n=start}^{K} |(ψ_n, -ψ_n^*) + β (φ_n, φ_n^*)|²``."""
    v = _alphas_of(source, K)
    start = K // 2 if start is None else start
    a, b = _weyl_vectors(v, z, K)
    return float(np.sum(np.abs(a[start:] + beta * b[start:]) ** 2))


def weyl_beta(source, z: complex, K: int, window: str = "tail") -> WeylFit:
    """Least-squares ``β`` minimizing the truncated Weyl sum.

    ``window="tail"`` fits over ``n = K//2 .. K``; ``"full"`` over ``0 .. K``.
    The full-range minimizer carries an ``O(1/K)`` bias from the initial
    terms, the tail window does not.
    """
    v = _alphas_of(source, K)
    a, b = _weyl_vectors(v, z, K)
    start = K // 2 if window == "tail" else 0
    a, b = a[start:], b[start:]
    scale = np.max(np.abs(b))
    a, b = a / scale, b / scale
    beta = -np.sum(np.conj(b) * a) / np.sum(np.abs(b) ** 2)
    sums = np.cumsum((np.abs(a + beta * b) ** 2).sum(axis=1)[::-1])[::-1] * scale ** 2
    return WeylFit(complex(beta), K, start, sums)


def m_tilde(F):
    """``(F - 1)/(F + 1)``, which equals ``z f(z)``."""
    F = np.asarray(F, dtype=complex)
    if np.any(np.abs(F + 1.0) < 1e-14):
        raise DegenerateF("F = -1", operation="m_tilde")
    out = (F - 1.0) / (F + 1.0)
    return complex(out) if out.ndim == 0 else out


def schur_iterates(v, z, n: int):
    """``f_0(z) .. f_n(z)`` of ``v`` (zero tail) by one backward sweep."""
    v = as_alphas(v)
    L = max(n, len(v))
    za = np.asarray(z, dtype=complex)
    f = np.zeros((L + 1,) + za.shape, dtype=complex)
    for k in range(len(v) - 1, -1, -1):
        a = v.alphas[k]
        zf = za * f[k + 1]
        f[k] = (a + zf) / (1.0 + np.conj(a) * zf)
    return f[: n + 1]


def m_plus(v, z: complex, n: int) -> np.ndarray:
    """``m_k^+ = u_{k+1}/u_k`` for ``k = 0..n-1`` via the Schur iterates."""
    v = as_alphas(v)
    if z == 0 and n > 1:
        raise ZeroDenominator("u_1 = 0 at z = 0", index=1, operation="m_plus")
    f = schur_iterates(v, z, n)
    a = v.padded(max(n, len(v))).alphas[:n]
    return z * (1.0 - np.conj(a) * f[:n]) / _rho(a)


def m_plus_direct(v, z: complex, n: int) -> np.ndarray:
    """``u_{k+1}/u_k`` from ``u_k = ψ_k + F φ_k``; only trustworthy for small ``n``."""
    v = as_alphas(v).padded(max(n, len(as_alphas(v))))
    F = caratheodory_from_alphas(v, z)
    phi, _ = phi_values(v, z, n)
    psi, _ = second_kind_polys(v, z, n)
    u = psi + F * phi
    zero = np.nonzero(u[:n] == 0)[0]
    if zero.size:
        raise ZeroDenominator(f"u_{zero[0]} = 0", index=int(zero[0]), operation="m_plus")
    return u[1:] / u[:-1]


@dataclass(frozen=True)
class WeylSolution:
    u: np.ndarray
    u_star: np.ndarray
    beta: complex


def weyl_solution(v, z: complex, K: int) -> WeylSolution:
    """``u_k = ψ_k + F φ_k``, ``u_k^* = -ψ_k^* + F φ_k^*`` for ``k = 0..K``, built stably."""
    v = as_alphas(v)
    F = caratheodory_from_alphas(v, z)
    f = schur_iterates(v, z, K)
    mp = m_plus(v, z, K)
    u = (1.0 + F) * np.concatenate([[1.0], np.cumprod(mp)])
    return WeylSolution(u, z * f * u, complex(F))


@dataclass(frozen=True)
class LyapunovReport:
    z: complex
    gamma2: float                 # decay rate of the ℓ² solution (log scale)
    gamma: float                  # growth rate of T_n(z)
    mc_stderr: float = 0.0
    gamma2_mplus: float | None = None   # mean of log|m_k^+|
    gamma_cocycle: float | None = None  # from ‖T_n‖ directly
    running: np.ndarray | None = field(default=None, repr=False)
    nonconvergent: bool = False
    extra: dict = field(default_factory=dict, repr=False)


def _inverse_log_norms(v, z, n, f_end):
    """``log ‖Ξ_k‖ - log ‖Ξ_n‖`` for ``k = 0..n`` by backward iteration from ``Ξ_n``.

    ``A(α, z)^{-1} = (ρ z)^{-1} [[1, conj(α)], [α z, z]]``; backward is the
    stable direction for the decaying solution.
    """
    xi = np.array([1.0, z * f_end], dtype=complex)
    out = np.zeros(n + 1)
    acc = np.log(np.linalg.norm(xi))
    xi /= np.linalg.norm(xi)
    out[n] = acc
    for k in range(n - 1, -1, -1):
        a = v[k]
        xi = np.array([xi[0] + np.conj(a) * xi[1], a * z * xi[0] + z * xi[1]]) / (_rho(a) * z)
        s = np.linalg.norm(xi)
        acc += np.log(s)
        xi /= s
        out[k] = acc
    return out - out[n]


def lyapunov_deterministic(v, z: complex, n: int | None = None) -> LyapunovReport:
    """Decay rate of the Weyl solution and growth rate of the cocycle.

    Rates are taken over the second half ``[n/2, n)`` of the run, which
    removes the ``O(1/n)`` offset from the starting vector.  ``gamma2`` comes
    from the norms of the Weyl solution (backward transfer iteration),
    ``gamma2_mplus`` from averaging ``log|m_k^+|``.
    """
    v = as_alphas(v)
    n = max(len(v), 200) if n is None else n
    if z == 0:
        raise ZeroDenominator("the Weyl solution vanishes at z = 0", index=1,
                              operation="lyapunov_deterministic")
    vv = v if len(v) >= n else v.padded(n)
    f = schur_iterates(vv, z, n)
    logs = _inverse_log_norms(vv, z, n, f[n])  # log‖Ξ_k‖ relative to Ξ_n
    lm = np.log(np.abs(m_plus(vv, z, n)))
    half = n // 2
    gamma2 = float((logs[n] - logs[half]) / (n - half))
    gamma2_m = float(np.mean(lm[half:n]))
    checkpoints = [n // 2 + (n - n // 2) * i // 4 for i in range(1, 5)]
    running = np.array([(logs[c] - logs[c // 2]) / (c - c // 2) for c in checkpoints])
    T_half = cocycle(vv, z, half)
    T_full = cocycle(vv, z, n)
    gamma_c = float((T_full.log_norm() - T_half.log_norm()) / (n - half))
    return LyapunovReport(
        z=complex(z),
        gamma2=gamma2,
        gamma=float(np.log(abs(z)) - gamma2),
        gamma2_mplus=gamma2_m,
        gamma_cocycle=gamma_c,
        running=running,
        nonconvergent=bool(np.ptp(running) > 1e-2),
    )


def _stream(seed: int, stream: int, index: int) -> np.random.Generator:
    return np.random.Generator(np.random.Philox(np.random.SeedSequence([seed, stream, index])))


def uniform_disk_alphas(radius: float, n_steps: int, n_samples: int, seed: int, stream: int):
    """``(n_samples, n_steps)`` i.i.d. coefficients uniform on ``|α| <= radius``.

    Each sample row has its own counter-based stream keyed by
    ``(seed, stream, row)``, so rows are independent of the sample count.
    """
    if not 0 <= radius < 1:
        raise InvalidAlpha(f"law radius {radius} must lie in [0, 1)",
                           operation="lyapunov_stochastic")
    out = np.empty((n_samples, n_steps), dtype=complex)
    for i in range(n_samples):
        g = _stream(seed, stream, i)
        u = g.random(n_steps)
        t = g.random(n_steps)
        out[i] = radius * np.sqrt(u) * np.exp(2j * np.pi * t)
    return out


def _mplus_log_means(alphas, z):
    """Per-row mean of ``log|m_k^+|`` over the first half of each row."""
    n = alphas.shape[1]
    f = np.zeros(alphas.shape[0], dtype=complex)
    logs = np.empty(alphas.shape, dtype=float)
    for k in range(n - 1, -1, -1):
        a = alphas[:, k]
        zf = z * f
        f = (a + zf) / (1.0 + np.conj(a) * zf)
        logs[:, k] = np.log(np.abs(z * (1.0 - np.conj(a) * f) / _rho(a)))
    return logs[:, : n // 2].mean(axis=1)


def _cocycle_rates(alphas, z):
    """Per-row ``(log‖T_n‖ - log‖T_{n/2}‖)/(n - n/2)`` with periodic rescaling."""
    rows, n = alphas.shape
    mats = np.broadcast_to(np.eye(2, dtype=complex), (rows, 2, 2)).copy()
    log_scale = np.zeros(rows)
    half_log = np.zeros(rows)
    for k in range(n):
        a = alphas[:, k]
        r = _rho(a)
        step = np.empty((rows, 2, 2), dtype=complex)
        step[:, 0, 0] = z / r
        step[:, 0, 1] = -np.conj(a) / r
        step[:, 1, 0] = -a * z / r
        step[:, 1, 1] = 1.0 / r
        mats = step @ mats
        if (k + 1) % RESCALE_EVERY == 0 or k + 1 in (n // 2, n):
            s = np.abs(mats).max(axis=(1, 2))
            mats /= s[:, None, None]
            log_scale += np.log(s)
        if k + 1 == n // 2:
            half_log = log_scale + np.log(np.linalg.norm(mats, 2, axis=(1, 2)))
    full_log = log_scale + np.log(np.linalg.norm(mats, 2, axis=(1, 2)))
    return (full_log - half_log) / (n - n // 2)


def lyapunov_stochastic(radius: float, z: complex, n_steps: int, n_samples: int,
                        seed: int) -> LyapunovReport:
    """Monte Carlo check of ``E log|m^+(z)| = log|z| - γ(z)`` for i.i.d. coefficients.

    The two sides use disjoint random streams.  ``E log|m^+|`` is averaged
    over the first half of each sample (away from the truncation) and over
    samples; ``γ`` is the second-half growth rate of ``‖T_n(z)‖``.
    """
    if z == 0:
        raise ZeroDenominator("m^+ vanishes at z = 0", index=0, operation="lyapunov_stochastic")
    m_side = _mplus_log_means(uniform_disk_alphas(radius, n_steps, n_samples, seed, 0), z)
    g_side = _cocycle_rates(uniform_disk_alphas(radius, n_steps, n_samples, seed, 1), z)
    e_log = float(np.mean(m_side))
    gamma = float(np.mean(g_side))
    se_m = float(np.std(m_side, ddof=1) / np.sqrt(n_samples)) if n_samples > 1 else 0.0
    se_g = float(np.std(g_side, ddof=1) / np.sqrt(n_samples)) if n_samples > 1 else 0.0
    stderr = float(np.hypot(se_m, se_g))
    residual = abs(e_log - (np.log(abs(z)) - gamma))
    return LyapunovReport(
        z=complex(z),
        gamma2=e_log,
        gamma=gamma,
        mc_stderr=stderr,
        gamma2_mplus=e_log,
        gamma_cocycle=gamma,
        extra={
            "e_log_mplus_stderr": se_m,
            "gamma_stderr": se_g,
            "residual": float(residual),
            "passes": bool(residual <= 3.0 * stderr),
        },
    )


def reflected_alphas(alphas_negative) -> VerblunskySeq:
    """``(-conj(α_{-1}), -conj(α_{-2}), ...)`` from ``(α_{-1}, α_{-2}, ...)``."""
    return VerblunskySeq(-np.conj(np.asarray(alphas_negative, dtype=complex)))


def cmv_green(f_plus: Callable, f_minus: Callable, z):
    """``G(z) = f_+ f_- / (1 - z f_+ f_-)`` from two Schur-function evaluators."""
    za = np.asarray(z, dtype=complex)
    prod = np.asarray(f_plus(za)) * np.asarray(f_minus(za))
    den = 1.0 - za * prod
    if np.any(np.abs(den) < 1e-14):
        raise ZeroDenominator("1 - z f_+ f_- vanishes", operation="cmv_green")
    out = prod / den
    return complex(out) if out.ndim == 0 else out


def cmv_green_from_sequences(alphas, alphas_negative, z):
    """Green's function for a two-sided sequence, each half read with a zero tail."""
    plus = as_alphas(alphas)
    minus = reflected_alphas(alphas_negative)
    return cmv_green(lambda w: schur_from_alphas(plus, w),
                     lambda w: schur_from_alphas(minus, w), z)


def constant_schur(alpha: complex, z: complex) -> complex:
    """Schur function of the constant sequence ``α, α, ...`` (quadratic fixed point)."""
    if z == 0:
        return complex(alpha)
    a, b, c = np.conj(alpha) * z, 1.0 - z, -alpha
    if a == 0:
        return complex(-c / b)
    disc = np.sqrt(b * b - 4.0 * a * c)
    roots = [(-b + disc) / (2.0 * a), (-b - disc) / (2.0 * a)]
    return complex(min(roots, key=abs))
