"""Command-line front end.

Reads a JSON measure spec (``{"weight": ..., "atoms": ..., "grid": N}``), a
coefficient spec (``{"alphas": [[re, im], ...]}``) or a stochastic law
(``{"law": "uniform-disk", "radius": r, "seed": s}``) and writes CSV.
Floats are written with 17 significant digits.
"""
from __future__ import annotations

import argparse
import io
import json
import sys

import numpy as np

from . import analytic, relative, transfer
from .errors import BoundaryPoint, OpucError, SpecError
from .measure import CircleMeasure
from .recursion import VerblunskySeq, phi_values, verblunsky_from_measure

QUANTITIES = {
    "F": "Caratheodory function F(z)",
    "R": "R-function R(z)",
    "f": "Schur function f(z)",
    "D": "Szego function D(z)",
    "delta0D": "relative Szego function (delta_0 D)(z)",
    "m_tilde": "m-function analog (F-1)/(F+1) = z f(z)",
    "m_plus0": "m-function analog m_0^+(z) = u_1/u_0",
    "green": "two-sided Green's function f+ f- / (1 - z f+ f-)",
}
SUITES = ("sumrule", "szego", "weyl", "kotani", "ratio")
FAILED_CHECK = 1


def _fmt(x):
    if isinstance(x, (bool, np.bool_)):
        return "pass" if x else "fail"
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    if isinstance(x, str):
        return x
    return f"{float(x) + 0.0:.16e}"  # + 0.0 folds -0 into 0


class Table:
    def __init__(self, columns, comment=None):
        self.columns = list(columns)
        self.comment = comment
        self.rows = []

    def add(self, *values):
        self.rows.append(values)

    def render(self):
        buf = io.StringIO()
        if self.comment:
            buf.write(f"# {self.comment}\n")
        buf.write(",".join(self.columns) + "\n")
        for row in self.rows:
            buf.write(",".join(_fmt(x) for x in row) + "\n")
        return buf.getvalue()


# -- input -----------------------------------------------------------------

def load_input(path):
    """Return ``("measure" | "alphas" | "law", payload)``."""
    if path is None:
        raise SpecError("--input is required")
    try:
        with open(path) as fh:
            data = json.load(fh)
    except OSError as exc:
        raise SpecError(f"cannot read {path}: {exc.strerror}") from exc
    except json.JSONDecodeError as exc:
        raise SpecError(f"invalid JSON in {path}: {exc.msg} (line {exc.lineno})") from exc
    if not isinstance(data, dict):
        raise SpecError("input must be a JSON object")
    if "law" in data:
        return "law", _parse_law(data)
    if "alphas" in data:
        seq = VerblunskySeq.from_dict(data)
        neg = None
        if "alphas_negative" in data:
            neg = VerblunskySeq.from_dict({"alphas": data["alphas_negative"]})
        return "alphas", (seq, neg)
    if "weight" in data or "atoms" in data:
        return "measure", CircleMeasure.from_dict(data)
    raise SpecError("input has none of the keys 'weight', 'atoms', 'alphas', 'law'")


def _parse_law(data):
    if data.get("law") != "uniform-disk":
        raise SpecError(f"unknown law {data.get('law')!r}; only 'uniform-disk' is supported")
    try:
        radius = float(data["radius"])
        seed = int(data.get("seed", 0))
    except (KeyError, TypeError, ValueError) as exc:
        raise SpecError(f"malformed law spec: {exc}") from exc
    if not 0 <= radius < 1:
        raise SpecError(f"law radius must lie in [0, 1), got {radius}")
    return {"radius": radius, "seed": seed}


def parse_grid(text):
    """``"r1,r2:M"`` product grid (``M`` equispaced angles) or ``"z1;z2;..."``."""
    try:
        if ":" in text:
            radii, count = text.split(":")
            rs = [float(r) for r in radii.split(",")]
            th = 2.0 * np.pi * np.arange(int(count)) / int(count)
            pts = np.array([r * np.exp(1j * t) for r in rs for t in th])
        else:
            pts = np.array([complex(s.strip().replace(" ", "")) for s in text.split(";")])
    except ValueError as exc:
        raise SpecError(f"cannot parse grid {text!r}: {exc}") from exc
    if pts.size == 0:
        raise SpecError("empty grid")
    bad = np.abs(pts) >= 1.0 - analytic.INTERIOR_TOL
    if np.any(bad):
        raise BoundaryPoint(f"grid point {pts[bad][0]} is not interior", operation="parse_grid")
    return pts


def _require(kind, allowed, what):
    if kind not in allowed:
        raise SpecError(f"{what} needs a {' or '.join(allowed)} input, got {kind}")


# -- commands --------------------------------------------------------------

def cmd_verblunsky(args):
    kind, payload = load_input(args.input)
    _require(kind, ("measure", "alphas"), "verblunsky")
    n = args.order
    v = verblunsky_from_measure(payload, n) if kind == "measure" else payload[0].padded(n)
    t = Table(["j", "re_alpha", "im_alpha", "rho"])
    for j, (a, r) in enumerate(zip(v.alphas, v.rhos)):
        t.add(j, a.real, a.imag, r)
    return t, 0


def _evaluate(kind, payload, q, z):
    if q == "green":
        _require(kind, ("alphas",), "green")
        plus, minus = payload
        minus = VerblunskySeq([]) if minus is None else minus
        return transfer.cmv_green_from_sequences(plus, minus.alphas, z)
    if kind == "alphas":
        v = payload[0]
        if q == "F":
            return analytic.caratheodory_from_alphas(v, z)
        if q == "R":
            # R(0) = c_1 = α_0, the removable value of (F - 1)/2z
            F = analytic.caratheodory_from_alphas(v, z)
            safe = np.where(z == 0, 1.0, z)
            return np.where(z == 0, v[0], (F - 1.0) / (2.0 * safe))
        if q == "f":
            return analytic.schur_from_alphas(v, z)
        if q == "D":
            _, phis = phi_values(v, z)
            return 1.0 / phis[-1]
        if q == "delta0D":
            return relative.delta0D(v, z)
        if q == "m_tilde":
            return transfer.m_tilde(analytic.caratheodory_from_alphas(v, z))
        if q == "m_plus0":
            a0 = v[0]
            f = analytic.schur_from_alphas(v, z)
            return z * (1.0 - np.conj(a0) * f) / np.sqrt(1.0 - abs(a0) ** 2)
    m = payload
    if q == "F":
        return analytic.caratheodory(m, z)
    if q == "R":
        return analytic.r_function(m, z)
    if q == "f":
        return analytic.schur_from_caratheodory(lambda w: analytic.caratheodory(m, w), z)
    if q == "D":
        return analytic.szego_function(m, z)
    if q == "delta0D":
        return relative.delta0D(m, z)
    if q == "m_tilde":
        return transfer.m_tilde(analytic.caratheodory(m, z))
    if q == "m_plus0":
        a0 = verblunsky_from_measure(m, 1)[0]
        f = analytic.schur_from_caratheodory(lambda w: analytic.caratheodory(m, w), z)
        return z * (1.0 - np.conj(a0) * f) / np.sqrt(1.0 - abs(a0) ** 2)
    raise SpecError(f"unknown quantity {q!r}")


def cmd_evaluate(args):
    if args.quantity not in QUANTITIES:
        raise SpecError(f"--quantity must be one of {', '.join(QUANTITIES)}")
    kind, payload = load_input(args.input)
    _require(kind, ("measure", "alphas"), "evaluate")
    z = parse_grid(args.grid)
    vals = np.broadcast_to(np.asarray(_evaluate(kind, payload, args.quantity, z)), z.shape)
    q = args.quantity
    t = Table(["z_re", "z_im", "quantity", "value_re", "value_im"], comment=f"{q}: {QUANTITIES[q]}")
    for p, val in zip(z, vals):
        t.add(p.real, p.imag, q, complex(val).real, complex(val).imag)
    return t, 0


def _tolerance(args, default):
    return default if args.tolerance is None else args.tolerance


def _verify_table():
    return Table(["check", "residual", "tolerance", "status"])


def _check(t, name, residual, tol, ok=None):
    ok = residual <= tol if ok is None else ok
    t.add(name, residual, tol, bool(ok))
    return bool(ok)


def _source(kind, payload):
    return payload if kind == "measure" else payload[0]


def verify_sumrule(kind, payload, args):
    source = _source(kind, payload)
    tol = _tolerance(args, 1e-5 if kind == "measure" else 1e-8)
    t = _verify_table()
    ok = True
    for row in relative.step_sum_rule(source, args.order):
        ok &= _check(t, f"{row.kind}_{row.step}", row.abs_error, tol)
    return t, ok


def verify_szego(kind, payload, args):
    source = _source(kind, payload)
    tol = _tolerance(args, 1e-9)
    t = _verify_table()
    ok = True
    for n in range(1, args.order + 1):
        rep = relative.szego_theorem_check(source, n)
        ok &= _check(t, f"equality_{n}", rep.equality_residual, tol)
        if rep.inequality_margin is not None:
            margin = rep.inequality_margin
            ok &= _check(t, f"margin_{n}", margin, tol, ok=margin >= -tol)
    return t, ok


def verify_weyl(kind, payload, args):
    source = _source(kind, payload)
    tol = _tolerance(args, 1e-6)
    z = parse_grid(args.grid)
    t = _verify_table()
    ok = True
    K = args.steps
    for i, p in enumerate(z):
        table = transfer.f_limit_check(source, p, args.order)
        ok &= _check(t, f"f_limit_{i}", table.final, tol)
        F = transfer._caratheodory_of(source, p)
        fit = transfer.weyl_beta(source, p, K)
        ok &= _check(t, f"beta_{i}", fit.error(F), tol)
        good = transfer.weyl_tail_sum(source, p, F, K)
        bad = transfer.weyl_tail_sum(source, p, F + 0.1, K)
        ratio = bad / good if good > 0 else np.inf
        ok &= _check(t, f"tail_ratio_{i}", ratio, 1e3, ok=ratio > 1e3)
    return t, ok


def verify_kotani(kind, payload, args):
    _require(kind, ("law",), "kotani")
    seed = payload["seed"] if args.seed is None else args.seed
    t = _verify_table()
    ok = True
    for i, p in enumerate(parse_grid(args.grid)):
        rep = transfer.lyapunov_stochastic(payload["radius"], p, args.steps, args.samples, seed)
        ok &= _check(t, f"kotani_{i}", rep.extra["residual"], 3.0 * rep.mc_stderr,
                     ok=rep.extra["passes"])
    return t, ok


def verify_ratio(kind, payload, args):
    source = _source(kind, payload)
    tol = _tolerance(args, 1e-11)
    t = _verify_table()
    ok = True
    if kind == "alphas":
        for i, p in enumerate(parse_grid(args.grid)):
            ok &= _check(t, f"interior_{i}", relative.ratio_identity_check(source, p).residual, tol)
    for k in range(12):
        theta = 2.0 * np.pi * (k + 0.5) / 12
        res = relative.weight_ratio_boundary(source, theta).residual
        ok &= _check(t, f"boundary_{k}", res, 1e-5)
    return t, ok


VERIFY = {
    "sumrule": verify_sumrule,
    "szego": verify_szego,
    "weyl": verify_weyl,
    "kotani": verify_kotani,
    "ratio": verify_ratio,
}


def cmd_verify(args):
    if args.suite not in VERIFY:
        raise SpecError(f"--suite must be one of {', '.join(SUITES)}")
    kind, payload = load_input(args.input)
    if args.suite != "kotani":
        _require(kind, ("measure", "alphas"), args.suite)
    t, ok = VERIFY[args.suite](kind, payload, args)
    return t, 0 if ok else FAILED_CHECK


def cmd_lyapunov(args):
    kind, payload = load_input(args.input)
    _require(kind, ("alphas", "law"), "lyapunov")
    cols = ["z_re", "z_im", "gamma2", "gamma", "mc_stderr", "gamma2_mplus", "gamma_cocycle",
            "nonconvergent"]
    t = Table(cols)
    for p in parse_grid(args.grid):
        if kind == "law":
            seed = payload["seed"] if args.seed is None else args.seed
            r = transfer.lyapunov_stochastic(payload["radius"], p, args.steps, args.samples, seed)
        else:
            r = transfer.lyapunov_deterministic(payload[0], p, args.steps)
        t.add(p.real, p.imag, r.gamma2, r.gamma, r.mc_stderr, r.gamma2_mplus,
              r.gamma_cocycle, "yes" if r.nonconvergent else "no")
    return t, 0


COMMANDS = {
    "verblunsky": cmd_verblunsky,
    "evaluate": cmd_evaluate,
    "verify": cmd_verify,
    "lyapunov": cmd_lyapunov,
}


def build_parser():
    p = argparse.ArgumentParser(prog="opuc", description="OPUC computations and checks")
    sub = p.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        s = sub.add_parser(name)
        s.add_argument("--input", "-i", required=True)
        s.add_argument("--output", "-o")
        s.add_argument("--order", "-n", type=int, default=20)
        s.add_argument("--grid", default="0.5")
        s.add_argument("--quantity", "-q")
        s.add_argument("--suite")
        s.add_argument("--seed", type=int)
        s.add_argument("--tolerance", type=float)
        s.add_argument("--steps", type=int,
                       help="chain length (lyapunov, kotani; default 2000) or K (weyl; 400)")
        s.add_argument("--samples", type=int, default=200)
    return p


def main(argv=None):
    args = build_parser().parse_args(argv)
    if args.steps is None:
        args.steps = 400 if args.suite == "weyl" else 2000
    try:
        table, code = COMMANDS[args.command](args)
    except OpucError as exc:
        print(f"opuc: {type(exc).__name__}: {exc}", file=sys.stderr)
        return exc.exit_code
    text = table.render()
    if args.output:
        with open(args.output, "w", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return code


if __name__ == "__main__":
    sys.exit(main())
