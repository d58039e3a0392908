"""Command-line front end.

Machine-readable output goes to stdout as JSON lines; human summaries go
to stderr.  Exit status: 0 when everything passes, 1 on a verification
failure, 2 on bad input or usage.
"""
from __future__ import annotations

import argparse
import json
import os
import sys
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from . import checks, exterior, flatdeform, g2core, grassmann, sympcompat
from .errors import DegeneracyError, G2KitError, InputError, PreconditionError
from .scalars import EXACT, FLOAT, to_complex, to_float_array

EXIT_OK, EXIT_FAIL, EXIT_INPUT = 0, 1, 2
TOL_ENV = "G2KIT_TOL"


@dataclass
class VerificationReport:
    suite: str
    checks: list = field(default_factory=list)
    wall_time: float = 0.0

    @property
    def passed(self) -> bool:
        return all(c.status == "pass" for c in self.checks)

    def lines(self) -> list[str]:
        """JSON lines, sorted by check name; identical for identical seeds and flags."""
        return [json.dumps(c.as_dict(), sort_keys=True) for c in sorted(self.checks, key=lambda c: c.name)]

    def summary(self) -> str:
        failed = [c.name for c in self.checks if c.status != "pass"]
        head = f"{self.suite}: {len(self.checks) - len(failed)}/{len(self.checks)} checks passed in {self.wall_time:.2f}s"
        return head + "".join(f"\n  FAIL {n}" for n in sorted(failed))


def verify(suite: str, seed: int = 0, samples: int | None = None, tol: float | None = None,
           backend: str = EXACT, jobs: int = 1) -> VerificationReport:
    todo = checks.suite_checks(suite)
    t0 = time.perf_counter()

    def one(c):
        return checks.run_check(c, seed, samples, tol, backend)

    if jobs > 1:
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            results = list(pool.map(one, todo))
    else:
        results = [one(c) for c in todo]
    return VerificationReport(suite, results, time.perf_counter() - t0)


# -- helpers ----------------------------------------------------------------------


def _read_json(path: str):
    try:
        with open(path) if path != "-" else sys.stdin as fh:
            return json.load(fh)
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror}") from exc
    except json.JSONDecodeError as exc:
        raise InputError(f"{path} is not valid JSON: {exc}") from exc


def _write_json(obj, path: str | None):
    text = json.dumps(obj, sort_keys=True)
    if path is None or path == "-":
        print(text)
        return
    try:
        with open(path, "w") as fh:
            fh.write(text + "\n")
    except OSError as exc:
        raise InputError(f"cannot write {path}: {exc.strerror}") from exc


def _pair(z) -> list[float]:
    z = to_complex(z)
    return [z.real, z.imag]


def _resolve_tol(args) -> float | None:
    if args.tol is not None:
        return args.tol
    env = os.environ.get(TOL_ENV)
    if env is None or env == "":
        return None
    try:
        value = float(env)
    except ValueError as exc:
        raise InputError(f"{TOL_ENV}={env!r} is not a number") from exc
    if not value >= 0:
        raise InputError(f"{TOL_ENV} must be non-negative")
    return value


def _positive(text: str) -> int:
    try:
        n = int(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"{text!r} is not an integer") from exc
    if n <= 0:
        raise argparse.ArgumentTypeError("must be positive")
    return n


def _nonneg_float(text: str) -> float:
    try:
        x = float(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"{text!r} is not a number") from exc
    if not x >= 0:
        raise argparse.ArgumentTypeError("must be non-negative")
    return x


# -- subcommands ----------------------------------------------------------------------


def cmd_verify(args) -> int:
    report = verify(args.suite, args.seed, args.samples, _resolve_tol(args), args.backend, args.jobs)
    for line in report.lines():
        print(line)
    print(report.summary(), file=sys.stderr)
    return EXIT_OK if report.passed else EXIT_FAIL


def cmd_metric(args) -> int:
    exact = args.backend == EXACT
    phi = exterior.from_json(_read_json(args.input), exact=exact)
    vol = exterior.from_json(_read_json(args.volume), exact=exact) if args.volume else None
    try:
        b = g2core.metric_from_form(phi, vol)
    except DegeneracyError as exc:
        print(f"degenerate: {exc}", file=sys.stderr)
        return EXIT_FAIL
    M = b.matrix
    out = {"matrix": [[_pair(M[i, j]) for j in range(M.shape[1])] for i in range(M.shape[0])],
           "det": _pair(b.det())}
    if b.signature is not None:
        out["signature"] = list(b.signature)
    _write_json(out, args.output)
    print(f"metric extracted (det = {to_complex(b.det()):.6g}, signature {b.signature})", file=sys.stderr)
    return EXIT_OK


def cmd_classify(args) -> int:
    plane = grassmann.plane_from_json(_read_json(args.input), exact=args.backend == EXACT)
    tol = _resolve_tol(args) or grassmann.MEMBERSHIP_TOL
    out = {"ambient": plane.ambient, "k": plane.k}
    if plane.k == 3:
        out["associative"] = grassmann.is_associative(plane, tol)
    if plane.ambient == "R14":
        out["symplectic"] = grassmann.classify_symplectic(plane).kind
        out["isotropic"] = grassmann.is_isotropic(plane, tol)
        if plane.k == 3:
            out["isotropic_associative"] = grassmann.is_isotropic_associative(plane, tol)
            out["b_real_associative"] = grassmann.is_b_real_associative(plane, tol)
    _write_json(out, args.output)
    return EXIT_OK


def cmd_tangent_dim(args) -> int:
    plane = grassmann.plane_from_json(_read_json(args.input), exact=args.backend == EXACT)
    report = grassmann.tangent_dimension(plane, args.kind, method=args.method, variant=args.variant,
                                         backend=args.backend if not plane.exact or args.backend == FLOAT else None)
    summary = report.summary()
    summary["gap_ratio"] = None if not np.isfinite(report.gap_ratio) else report.gap_ratio
    _write_json(summary, args.output)
    print(f"{report.grassmannian_kind}: nullity {report.nullity} "
          f"({'exact' if report.exact else f'gap ratio {report.gap_ratio:.3g}'})", file=sys.stderr)
    return EXIT_OK if report.well_separated else EXIT_FAIL


def cmd_jpath(args) -> int:
    tol = _resolve_tol(args) or sympcompat.TOL
    ts = np.linspace(0.0, 1.0, args.grid)
    if args.input:
        obj = _read_json(args.input)
        try:
            structures = [sympcompat.AlmostComplexStructure(np.asarray(obj["matrix"], dtype=float))]
        except (KeyError, TypeError, ValueError) as exc:
            raise InputError(f"J file needs a real 'matrix': {exc}") from exc
    else:
        rng = np.random.default_rng(args.seed)
        structures = [sympcompat.random_cal_j(rng, args.n, scale=0.5) for _ in range(args.samples or 10)]
    failures = 0
    for s, J in enumerate(structures):
        for r in sympcompat.retraction_residuals(J, ts):
            ok = r["square"] <= tol and r["symplectic"] <= tol and r["min_eig"] > -tol and r["symmetric"] <= tol
            failures += not ok
            print(json.dumps({"sample": s, **r, "status": "pass" if ok else "fail"}, sort_keys=True))
    print(f"jpath: {len(structures)} structures x {len(ts)} t-values, {failures} failures", file=sys.stderr)
    return EXIT_OK if failures == 0 else EXIT_FAIL


def cmd_dirac(args) -> int:
    spectrum = flatdeform.dirac_spectrum(args.modes, block=args.block)
    _write_json({"max_freq": args.modes, "block": args.block, "model": flatdeform.MODEL,
                 "spectrum": flatdeform.spectrum_to_json(spectrum)}, args.out)
    print(f"dirac: {len(spectrum)} distinct eigenvalues on the {args.block} block for |k_i| <= {args.modes}",
          file=sys.stderr)
    return EXIT_OK


def cmd_isotropy(args) -> int:
    chart = flatdeform.chart_from_json(_read_json(args.chart))
    R = flatdeform.isotropy_residual(chart)
    out = flatdeform.residual_to_json(R, chart.N)
    out["reassembly_error"] = flatdeform.da_decomposition(chart).reassembly_error()
    _write_json(out, args.out)
    print(f"isotropy: max |R| = {out['max_abs']:.3e}, reassembly error {out['reassembly_error']:.1e}",
          file=sys.stderr)
    return EXIT_OK


# -- parser ---------------------------------------------------------------------------


def _global_flags(parser: argparse.ArgumentParser, suppress: bool):
    d = (lambda v: argparse.SUPPRESS) if suppress else (lambda v: v)
    parser.add_argument("--seed", type=int, default=d(0), help="base random seed")
    parser.add_argument("--samples", type=_positive, default=d(None), help="override sample counts")
    parser.add_argument("--tol", type=_nonneg_float, default=d(None),
                        help=f"override tolerances (beats ${TOL_ENV})")
    parser.add_argument("--backend", choices=(EXACT, FLOAT), default=d(EXACT), help="scalar arithmetic")


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="g2kit", description="Octonion, G2 and deformation checks.")
    _global_flags(p, suppress=False)
    sub = p.add_subparsers(dest="command", required=True, metavar="COMMAND")

    def add(name, func, help_text):
        sp = sub.add_parser(name, help=help_text)
        _global_flags(sp, suppress=True)
        sp.set_defaults(func=func)
        return sp

    sp = add("verify", cmd_verify, "run a verification suite")
    sp.add_argument("--suite", default="all", choices=checks.SUITES + ("all",))
    sp.add_argument("--jobs", type=_positive, default=1, help="run checks on this many threads")

    sp = add("metric", cmd_metric, "metric induced by a 3-form")
    sp.add_argument("-i", "--input", required=True, help="3-form JSON")
    sp.add_argument("-o", "--output", help="output file (default stdout)")
    sp.add_argument("--volume", help="top-form JSON (default e^1..7)")

    sp = add("classify", cmd_classify, "membership tests for a plane")
    sp.add_argument("-i", "--input", required=True, help="plane JSON")
    sp.add_argument("-o", "--output")

    sp = add("tangent-dim", cmd_tangent_dim, "tangent-space dimension at a plane")
    sp.add_argument("-i", "--input", required=True, help="plane JSON")
    sp.add_argument("--kind", required=True, choices=sorted(set(grassmann.KINDS) | set(grassmann.KIND_ALIASES)))
    sp.add_argument("--method", choices=("lemma", "linearized"), default="lemma")
    sp.add_argument("--variant", choices=("stated", "full"), default="stated")
    sp.add_argument("-o", "--output")

    sp = add("jpath", cmd_jpath, "sweep the retraction path J_t")
    sp.add_argument("--grid", type=_positive, default=11, help="number of t-values in [0, 1]")
    sp.add_argument("--n", type=_positive, default=7, help="half-dimension for random structures")
    sp.add_argument("-i", "--input", help="J JSON {'matrix': ...} in standard-frame coordinates")

    sp = add("dirac", cmd_dirac, "spectrum of the flat-model operator")
    sp.add_argument("--modes", type=int, default=flatdeform.DEFAULT_N, help="max |k_i|")
    sp.add_argument("--block", choices=("normal", "V", "JTY"), default="V")
    sp.add_argument("--out", help="output file (default stdout)")

    sp = add("isotropy", cmd_isotropy, "isotropy residual of a chart on the collocation grid")
    sp.add_argument("--chart", required=True, help="chart JSON")
    sp.add_argument("--out", help="output file (default stdout)")
    return p


def run(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        if getattr(args, "modes", 0) is not None and getattr(args, "modes", 0) < 0:
            raise InputError("--modes must be non-negative")
        return args.func(args)
    except (InputError, PreconditionError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except DegeneracyError as exc:
        print(f"degenerate: {exc}", file=sys.stderr)
        return EXIT_FAIL
    except G2KitError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_FAIL


def main(argv=None):
    sys.exit(run(argv))


if __name__ == "__main__":
    main()
