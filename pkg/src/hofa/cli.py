"""Command-line front end.

Every subcommand writes one JSON run report (schema ``hofa/1``) to stdout.
Validation problems exit with status 2 and a one-line diagnostic on stderr.
"""

from __future__ import annotations

import argparse
import sys
import time
from contextlib import contextmanager

import numpy as np

from . import _reduce
from .cube import (
    Automorphism,
    FaceAction,
    apply_face_action,
    commutator_check,
    cube_membership,
    edges,
    face_equation_kernel,
    spider_image,
    tilde_U,
)
from .decomposition import fourier_truncate, matching_pursuit
from .functions import GroupFunction
from .gowers import CUBE_CAP, DEFINITION_CAP, gowers_U
from .groups import FiniteAbelianGroup, SizeCapError, parse_group
from .io import (
    SCHEMA,
    FormatError,
    complex_pairs,
    dumps,
    function_from_json,
    function_to_json,
    kernel_from_json,
    load_json,
    spectrum_csv,
    write_text,
)
from .kernels import ck_membership, planted_phase_recovery, spectral_decomposition
from .phases import PolynomialPhase, correlation_spectrum, enumerate_phases, phase_eval, zpn_prime


class UsageError(ValueError):
    pass


class _Timer:
    def __init__(self):
        self.timings: dict[str, float] = {}

    @contextmanager
    def phase(self, name: str):
        t0 = time.perf_counter()
        yield
        self.timings[name] = (time.perf_counter() - t0) * 1e3


def _cplx(z: complex) -> list[float]:
    return [float(z.real), float(z.imag)]


def _load_fn(path: str, g: FiniteAbelianGroup | None) -> GroupFunction:
    f = function_from_json(load_json(path))
    if g is not None and f.group != g:
        raise UsageError(f"{path} is defined on {f.group!r}, but --group gives {g!r}")
    return f


# -- subcommands ---------------------------------------------------------------


def cmd_norm(args, timer: _Timer) -> dict:
    g = parse_group(args.group) if args.group else None
    f = _load_fn(args.fn, g)
    methods = ["cube", "definition"] if args.method == "both" else [args.method]
    values = {}
    for m in methods:
        cap = args.cube_cap if m == "cube" else args.definition_cap
        with timer.phase(m):
            values[m] = gowers_U(f, args.k, m, cap=cap)
    out = {"U_k": values[methods[0]], "method": args.method, "values": values}
    out["agreement"] = abs(values["cube"] - values["definition"]) if len(values) == 2 else None
    return out


def cmd_spectrum(args, timer: _Timer) -> dict:
    g = parse_group(args.group) if args.group else None
    f = _load_fn(args.fn, g)
    p = zpn_prime(f.group)
    with timer.phase("correlate"):
        family = enumerate_phases(p, f.group.rank, args.degree)
        spec = correlation_spectrum(f, family)
    if args.csv:
        write_text(args.csv, spectrum_csv(f))
    top = spec[: args.top]
    return {
        "family_size": len(family),
        "top": [
            {"phase": phi.to_json(), "correlation": _cplx(c), "magnitude": abs(c)} for phi, c in top
        ],
    }


def cmd_decompose(args, timer: _Timer) -> dict:
    g = parse_group(args.group) if args.group else None
    f = _load_fn(args.fn, g)
    with timer.phase("decompose"):
        if args.mode == "fourier":
            res = fourier_truncate(f, args.delta)
        else:
            res = matching_pursuit(f, args.k, args.delta, args.max_iter)
    err = float(np.max(np.abs(res.reconstruct().values - f.values)))
    return {
        "terms": [{"atom": a.to_json(), "coefficient": _cplx(c)} for a, c in res.terms],
        "residual": complex_pairs(res.residual.values),
        "residual_gowers": res.residual_gowers,
        "residual_norm": res.residual.norm(),
        "iterations": res.iterations,
        "exhausted": res.exhausted,
        "reconstruction_error": err,
    }


def cmd_kernel(args, timer: _Timer) -> dict:
    K = kernel_from_json(load_json(args.input))
    with timer.phase(args.op):
        if args.op == "membership":
            m = ck_membership(K, args.k, args.tol)
            return {"member": m.member, "max_residual": m.max_residual, "k": args.k}
        if args.op == "spectrum":
            spaces = spectral_decomposition(K)
            return {
                "eigenspaces": [
                    {
                        "eigenvalue": sp.eigenvalue,
                        "dimension": len(sp.functions),
                        "functions": [complex_pairs(v.values) for v in sp.functions],
                    }
                    for sp in spaces
                ]
            }
        phases = planted_phase_recovery(K, args.k)
        return {"phases": [phi.to_json() for phi in phases]}


def cmd_cube_check(args, timer: _Timer) -> dict:
    g = parse_group(args.group)
    k = args.k
    rng = np.random.default_rng(args.seed)
    out: dict = {}
    with timer.phase("membership"):
        img = spider_image(g, k)
        out["image_size"] = len({tuple(r) for r in img.tolist()})
        out["expected_size"] = g.order ** (k + 1)
        sample = img[rng.choice(len(img), size=min(len(img), 64), replace=False)]
        out["image_in_kernel"] = all(
            cube_membership(g, k, [g.element(int(i)) for i in row]) for row in sample
        )
        if g.order ** (2**k) <= 10**6:
            ker = face_equation_kernel(g, k)
            out["image_equals_kernel"] = {tuple(r) for r in ker.tolist()} == {
                tuple(r) for r in img.tolist()
            }
        else:
            out["image_equals_kernel"] = None
    with timer.phase("gowers"):
        f = GroupFunction(g, rng.standard_normal(g.order) + 1j * rng.standard_normal(g.order))
        if g.order ** (2 * k) <= DEFINITION_CAP:
            out["gowers_path_agreement"] = abs(gowers_U(f, k, "cube") - gowers_U(f, k, "definition"))
        else:
            out["gowers_path_agreement"] = None
    with timer.phase("edge_actions"):
        fs = [GroupFunction(g, rng.standard_normal(g.order)) for _ in range(2**k)]
        base = tilde_U(fs, k)
        worst = 0.0
        for e in edges(k):
            for c in range(1, g.order):
                act = FaceAction(frozenset(e), Automorphism.translation(g, g.element(c)))
                worst = max(worst, abs(tilde_U(apply_face_action(act, fs, k), k) - base))
        out["edge_translation_max_deviation"] = worst
    with timer.phase("commutator"):
        if k >= 2:
            s1 = Automorphism(rng.permutation(g.order))
            s2 = Automorphism(rng.permutation(g.order))
            out["commutator_identity"] = commutator_check(g, k, (0, 1), (0, 2), s1, s2)
        else:
            out["commutator_identity"] = None
    return out


def _gen_phase(g: FiniteAbelianGroup, args) -> PolynomialPhase:
    p = zpn_prime(g)
    if args.phase:
        phi = PolynomialPhase.from_json(load_json(args.phase))
        if (phi.p, phi.n) != (p, g.rank):
            raise UsageError("phase file does not match --group")
        return phi
    if args.coeffs is None:
        raise UsageError("--kind phase needs --coeffs (univariate) or --phase FILE")
    if g.rank != 1:
        raise UsageError("--coeffs describes a univariate phase; use --phase for Z_p^n, n > 1")
    try:
        coeffs = [int(c) for c in args.coeffs.split(",")]
    except ValueError:
        raise UsageError(f"malformed --coeffs {args.coeffs!r}") from None
    if len(coeffs) > p:
        raise UsageError(f"degree must stay below p = {p}")
    return PolynomialPhase.univariate(p, coeffs)


def cmd_gen(args, timer: _Timer) -> dict:
    g = parse_group(args.group)
    rng = np.random.default_rng(args.seed)
    with timer.phase("generate"):
        if args.kind == "phase":
            f = phase_eval(_gen_phase(g, args))
        elif args.kind == "noisy-phase":
            if args.noise is None or args.noise < 0:
                raise UsageError("--kind noisy-phase needs --noise >= 0")
            base = phase_eval(_gen_phase(g, args))
            # uniform in the disc of radius noise
            r = args.noise * np.sqrt(rng.random(g.order))
            f = base + r * np.exp(2j * np.pi * rng.random(g.order))
        elif args.kind == "indicator":
            if args.set is None:
                raise UsageError("--kind indicator needs --set")
            try:
                members = [int(s) for s in args.set.split(",") if s.strip()]
            except ValueError:
                raise UsageError(f"malformed --set {args.set!r}") from None
            if any(not 0 <= m < g.order for m in members):
                raise UsageError("--set indices must lie in [0, order)")
            f = GroupFunction.indicator(g, members)
        elif args.kind == "random±1":
            f = GroupFunction(g, rng.choice([-1.0, 1.0], size=g.order))
        else:  # argparse restricts choices
            raise UsageError(f"unknown kind {args.kind}")
    payload = function_to_json(f)
    if args.out:
        write_text(args.out, dumps(payload) + "\n")
        return {"path": args.out, "order": g.order}
    return {"function": payload}


# -- parser --------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="hofa", description=__doc__.splitlines()[0])
    ap.add_argument("--threads", type=int, default=None, help="worker threads (default HOFA_THREADS or 1)")
    sub = ap.add_subparsers(dest="command", required=True)

    def common(sp):
        sp.add_argument("--seed", type=int, default=0)

    sp = sub.add_parser("norm", help="Gowers norm U_k of a function")
    sp.add_argument("--group")
    sp.add_argument("--k", type=int, required=True)
    sp.add_argument("--fn", required=True)
    sp.add_argument("--method", choices=["cube", "definition", "both"], default="cube")
    sp.add_argument("--cube-cap", type=int, default=CUBE_CAP)
    sp.add_argument("--definition-cap", type=int, default=DEFINITION_CAP)
    common(sp)

    sp = sub.add_parser("spectrum", help="correlations with polynomial phases")
    sp.add_argument("--group")
    sp.add_argument("--fn", required=True)
    sp.add_argument("--degree", type=int, default=2)
    sp.add_argument("--top", type=int, default=10)
    sp.add_argument("--csv", help="also write the linear Fourier spectrum as CSV")
    common(sp)

    sp = sub.add_parser("decompose", help="structured-plus-uniform decomposition")
    sp.add_argument("--group")
    sp.add_argument("--k", type=int, default=2)
    sp.add_argument("--fn", required=True)
    sp.add_argument("--delta", type=float, required=True)
    sp.add_argument("--max-iter", type=int, default=100)
    sp.add_argument("--mode", choices=["pursuit", "fourier"], default="pursuit")
    common(sp)

    sp = sub.add_parser("kernel", help="kernel spectrum, C_k membership, phase recovery")
    sp.add_argument("--op", choices=["spectrum", "membership", "recover"], required=True)
    sp.add_argument("--k", type=int, default=2)
    sp.add_argument("--in", dest="input", required=True)
    sp.add_argument("--tol", type=float, default=1e-9)
    common(sp)

    sp = sub.add_parser("cube-check", help="cube-group and face-action self checks")
    sp.add_argument("--group", required=True)
    sp.add_argument("--k", type=int, default=2)
    common(sp)

    sp = sub.add_parser("gen", help="generate a test function")
    sp.add_argument("--group", required=True)
    sp.add_argument("--kind", choices=["phase", "indicator", "random±1", "noisy-phase"], required=True)
    sp.add_argument("--coeffs", help="univariate coefficients c0,c1,... of P")
    sp.add_argument("--phase", help="phase JSON file (any n)")
    sp.add_argument("--set", help="indicator members as element indices")
    sp.add_argument("--noise", type=float, help="sup-norm of the added noise")
    sp.add_argument("--out")
    common(sp)
    return ap


COMMANDS = {
    "norm": cmd_norm,
    "spectrum": cmd_spectrum,
    "decompose": cmd_decompose,
    "kernel": cmd_kernel,
    "cube-check": cmd_cube_check,
    "gen": cmd_gen,
}


def _inputs(args) -> dict:
    return {k: v for k, v in sorted(vars(args).items()) if k not in ("command", "threads")}


def run(argv=None, stdout=None, stderr=None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return int(e.code or 0)
    timer = _Timer()
    previous = _reduce._threads
    try:
        if args.threads is not None:
            _reduce.set_threads(args.threads)
        outputs = COMMANDS[args.command](args, timer)
    except SizeCapError as e:
        print(f"hofa {args.command}: size cap exceeded: {e.what} = {e.size} > {e.cap}", file=stderr)
        return 2
    except (UsageError, FormatError, ValueError, OSError) as e:
        print(f"hofa {args.command}: {e}", file=stderr)
        return 2
    finally:
        _reduce.set_threads(previous)
    report = {
        "schema": SCHEMA,
        "command": args.command,
        "inputs": _inputs(args),
        "outputs": outputs,
        "seed": args.seed,
        "timings": timer.timings,
    }
    print(dumps(report), file=stdout)
    return 0


def payload(report_text: str) -> str:
    """The deterministic part of a report: everything except timings."""
    import json

    d = json.loads(report_text)
    d.pop("timings", None)
    return dumps(d)


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
