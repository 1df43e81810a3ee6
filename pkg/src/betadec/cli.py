"""Command-line experiment runner.

Subcommands mirror the verification suites; every randomized command is
deterministic for a fixed seed, and report/sample CSVs are written with
round-trip exact floats so identical invocations produce byte-identical
files.  Exit codes: 0 all selected checks pass, 1 verification failure
(with a JSON failure list on stdout), 2 usage error.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
from pathlib import Path

import numpy as np

from . import oracle, phasecomb, specfun, stats
from .density import CircDAParams, CircularSpec, DAParams, EnsembleSpec, Weight
from .sampler import ChainConfig, SampleBatch, sample_ce, sample_da, sample_me

DEFAULT_SEED = 20250809


def write_samples_csv(batch: SampleBatch, path) -> None:
    """Header x1..xd, one row per configuration, round-trip exact decimals;
    metadata sidecar (same stem, .meta suffix) as key=value lines."""
    path = Path(path)
    d = batch.dim
    lines = [",".join(f"x{i + 1}" for i in range(d))]
    for row in batch.values:
        lines.append(",".join(repr(float(v)) for v in row))
    path.write_text("\n".join(lines) + "\n")
    cfg = batch.config
    meta = {
        "master_seed": batch.master_seed,
        "spec": batch.spec_fingerprint,
        "chains": cfg.chains,
        "burn_in_sweeps": cfg.burn_in_sweeps,
        "step_scale": cfg.step_scale,
        "target_accept": cfg.target_accept,
        "engine": cfg.engine,
    }
    meta_path = path.with_suffix(path.suffix + ".meta")
    meta_path.write_text("".join(f"{k}={meta[k]}\n" for k in sorted(meta)))


def write_report_csv(report: stats.VerificationReport, path) -> None:
    """Columns relation,r,N,position,ks_D,p_value,n1,n2,pass; one row per
    position plus a relation-level summary row (position "all")."""
    path = Path(path)
    lines = ["relation,r,N,position,ks_D,p_value,n1,n2,pass"]
    for i, res in enumerate(report.positions, start=1):
        lines.append(
            f"{report.relation_id},{report.r},{report.N},{i},"
            f"{repr(res.D)},{repr(res.p_value)},{res.n1},{res.n2},"
            f"{str(res.p_value > report.threshold).lower()}"
        )
    worst_d = max((res.D for res in report.positions), default=0.0)
    worst_p = min((res.p_value for res in report.positions), default=1.0)
    lines.append(
        f"{report.relation_id},{report.r},{report.N},all,"
        f"{repr(worst_d)},{repr(worst_p)},{report.M},{report.M},"
        f"{str(report.passed).lower()}"
    )
    path.write_text("\n".join(lines) + "\n")


def _emit_report_files(report: stats.VerificationReport, out_dir, stem: str,
                       with_samples: bool) -> None:
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    write_report_csv(report, out / f"{stem}_report.csv")
    if with_samples and report.samples is not None:
        for side in ("lhs", "rhs"):
            arr = report.samples[side]
            lines = [",".join(f"x{i + 1}" for i in range(arr.shape[1]))]
            for row in arr:
                lines.append(",".join(repr(float(v)) for v in row))
            (out / f"{stem}_{side}.csv").write_text("\n".join(lines) + "\n")


def _set_threads(n) -> None:
    if n is None:
        n = os.environ.get("BETADEC_THREADS")
    if n is None or str(n) == "auto":
        return
    import numba

    numba.set_num_threads(max(1, int(n)))


def _load_config_file(path) -> dict:
    """key = value lines; '#' starts a comment."""
    values = {}
    for raw in Path(path).read_text().splitlines():
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ValueError(f"bad config line: {raw!r}")
        key, val = line.split("=", 1)
        values[key.strip().replace("-", "_")] = val.strip()
    return values


def _merged(args: argparse.Namespace, key: str, default, cast):
    """Flag > config file > default."""
    val = getattr(args, key, None)
    if val is not None:
        return val
    if key in args._config_values:
        return cast(args._config_values[key])
    return default


class _Failures:
    def __init__(self):
        self.items = []

    def check(self, name: str, ok: bool, detail: str = "") -> bool:
        line = f"{'PASS' if ok else 'FAIL'} {name}" + (f"  [{detail}]" if detail else "")
        print(line)
        if not ok:
            self.items.append({"check": name, "detail": detail})
        return ok

    def exit_code(self) -> int:
        if self.items:
            print(json.dumps({"failures": self.items}))
            return 1
        return 0


def _cmd_verify_lemma(args, fails: _Failures) -> None:
    rmax = _merged(args, "r_max", 8, int)
    worst_phase = 0.0
    worst_coeff = 0.0
    for r in range(1, rmax + 1):
        for q in range(1, r + 1):
            worst_phase = max(worst_phase, abs(phasecomb.phase_sum(r, q)))
            worst_coeff = max(worst_coeff, abs(phasecomb.f_poly_coeffs(r, q)[q]))
    fails.check(f"lemma phase sums r<= {rmax}", worst_phase < 1e-10,
                f"max |sum| = {worst_phase:.2e}")
    fails.check(f"lemma z^q coefficients r<= {rmax}", worst_coeff < 1e-10,
                f"max |coeff| = {worst_coeff:.2e}")


def _cmd_verify_selberg(args, fails: _Failures) -> None:
    tol = _merged(args, "tol", 1e-6, float)
    points = _merged(args, "points", 64, int)
    worst = 0.0
    for N in (1, 2, 3):
        for l1 in (0.0, 0.5, 1.0):
            for l2 in (0.0, 0.5, 1.0):
                for lam in (0.25, 0.5, 1.0):
                    a = specfun.SelbergArgs(N, l1, l2, lam)
                    closed = math.exp(specfun.selberg_log(a))
                    quad = oracle.selberg_quadrature(a, points)
                    worst = max(worst, abs(quad / closed - 1.0))
    fails.check("selberg closed form vs quadrature N<=3", worst < tol,
                f"max rel err = {worst:.2e}")


def _cmd_verify_morris(args, fails: _Failures) -> None:
    tol = _merged(args, "tol", 1e-5, float)
    points = _merged(args, "points", 96, int)
    worst = 0.0
    for N in (1, 2):
        for a in (0.0, 0.5, 1.0):
            for lam in (0.25, 0.5, 1.0):
                m = specfun.MorrisArgs(N, a, lam)
                closed = math.exp(specfun.morris_log(m))
                quad = oracle.morris_quadrature(m, points)
                worst = max(worst, abs(quad / closed - 1.0))
    fails.check("morris closed form vs quadrature N<=2", worst < tol,
                f"max rel err = {worst:.2e}")


def _cmd_verify_theorem1(args, fails: _Failures) -> None:
    seed = _merged(args, "seed", DEFAULT_SEED, int)
    points = _merged(args, "points", 48, int)
    rng = np.random.default_rng(seed)
    if getattr(args, "circular", False):
        tol = _merged(args, "tol", 1e-3, float)
        quad = oracle.QuadSpec(points)
        for r, n in ((1, 2), (2, 1)):
            alpha = 1.0 + 2.0 * rng.random(n)
            closed = math.exp(specfun.circ_norm_log(r, n, alpha))
            theta_sets = (
                [np.array([math.pi, 2 * math.pi]), np.array([2.0, 2 * math.pi]),
                 np.array([4.5, 2 * math.pi])]
                if n == 2 else [np.array([2 * math.pi])]
            )
            ratios = [oracle.circ_ratio(CircDAParams(r, n, th, alpha), quad)
                      for th in theta_sets]
            spread = max(ratios) / min(ratios) - 1.0
            err = max(abs(rr / closed - 1.0) for rr in ratios)
            fails.check(f"theorem1 circle r={r} n={n} theta-independence",
                        spread < tol, f"spread = {spread:.2e}")
            fails.check(f"theorem1 circle r={r} n={n} matches closed form",
                        err < tol, f"rel err = {err:.2e}")
        return
    tol = _merged(args, "tol", 1e-4, float)
    quad = oracle.QuadSpec(points)
    for r, n in ((1, 2), (1, 3), (2, 2), (3, 2)):
        for draw in range(3):
            s = 1.0 + 2.0 * rng.random(n)
            closed = math.exp(specfun.da_norm_log(r, n, s))
            base = np.sort(rng.random(n))[::-1] * 2.0
            shifts = (0.0, -0.75, 1.5)
            scales = (1.0, 1.7, 0.6)
            ratios = []
            for sh, sc in zip(shifts, scales):
                a = base * sc + sh
                ratios.append(oracle.theorem1_ratio(DAParams(r, n, a, s), quad))
            spread = max(ratios) / min(ratios) - 1.0
            err = max(abs(rr / closed - 1.0) for rr in ratios)
            fails.check(f"theorem1 line r={r} n={n} draw={draw} a-independence",
                        spread < tol, f"spread = {spread:.2e}")
            fails.check(f"theorem1 line r={r} n={n} draw={draw} matches closed form",
                        err < tol, f"rel err = {err:.2e}")


def _chain_config(args, M: int) -> ChainConfig:
    burn = _merged(args, "burn_in", 5000, int)
    return ChainConfig(burn_in_sweeps=burn, chains=M)


def _cmd_verify_decimation(args, fails: _Failures) -> None:
    relation = args.relation
    r = _merged(args, "r", 1, int)
    N = _merged(args, "N", 2, int)
    M = _merged(args, "M", 20000, int)
    seed = _merged(args, "seed", DEFAULT_SEED, int)
    threshold = _merged(args, "threshold", 1e-3, float)
    rep = stats.verify_decimation_relation(
        relation, r, N, M, seed, a=_merged(args, "a", 0.0, float),
        b=getattr(args, "b", None), threshold=threshold,
        config=_chain_config(args, M),
        negative_control=getattr(args, "negative_control", None),
    )
    expect_fail = getattr(args, "negative_control", None) is not None
    detail = f"min p = {min((p.p_value for p in rep.positions), default=1.0):.4g}"
    if expect_fail:
        fails.check(f"decimation {relation} r={r} N={N} negative control rejects",
                    not rep.passed, detail)
    else:
        fails.check(f"decimation {relation} r={r} N={N}", rep.passed, detail)
    out_dir = getattr(args, "out_dir", None)
    if out_dir:
        nc = getattr(args, "negative_control", None)
        stem = f"decimation_{relation}_r{r}_N{N}" + (f"_nc-{nc}" if nc else "")
        _emit_report_files(rep, out_dir, stem, with_samples=True)


def _cmd_verify_composition(args, fails: _Failures) -> None:
    relation = args.relation
    r = _merged(args, "r", 1, int)
    N = _merged(args, "N", 2, int)
    M = _merged(args, "M", 20000, int)
    seed = _merged(args, "seed", DEFAULT_SEED, int)
    rep = stats.verify_composition(
        relation, r, N, M, seed, a=_merged(args, "a", 0.0, float),
        b=getattr(args, "b", None),
        threshold=_merged(args, "threshold", 1e-3, float),
        config=_chain_config(args, M),
    )
    fails.check(f"composition {relation} r={r} N={N}", rep.passed,
                f"min p = {min(p.p_value for p in rep.positions):.4g}")
    out_dir = getattr(args, "out_dir", None)
    if out_dir:
        _emit_report_files(rep, out_dir, f"composition_{relation}_r{r}_N{N}",
                           with_samples=False)


def _cmd_verify_superposition(args, fails: _Failures) -> None:
    kind = args.kind.replace("-", "_")
    N = _merged(args, "N", 2, int)
    M = _merged(args, "M", 20000, int)
    seed = _merged(args, "seed", DEFAULT_SEED, int)
    rep = stats.verify_superposition(
        kind, N, M, seed, a=_merged(args, "a", 1.0, float),
        b=_merged(args, "b", 1.0, float),
        threshold=_merged(args, "threshold", 1e-3, float),
        config=_chain_config(args, M),
    )
    fails.check(f"superposition {kind} N={N}", rep.passed,
                f"min p = {min(p.p_value for p in rep.positions):.4g}")
    out_dir = getattr(args, "out_dir", None)
    if out_dir:
        _emit_report_files(rep, out_dir, f"superposition_{kind}_N{N}", False)


def _cmd_verify_spacing(args, fails: _Failures) -> None:
    r = _merged(args, "r", 1, int)
    N = _merged(args, "N", 4, int)
    kprime = _merged(args, "kprime", 0, int)
    M = _merged(args, "M", 20000, int)
    seed = _merged(args, "seed", DEFAULT_SEED, int)
    rep = stats.verify_spacing_relation(
        r, N, kprime, M, seed, threshold=_merged(args, "threshold", 1e-3, float),
        config=_chain_config(args, M),
    )
    fails.check(f"spacing r={r} N={N} k'={kprime}", rep.passed,
                f"p = {rep.positions[0].p_value:.4g}")
    out_dir = getattr(args, "out_dir", None)
    if out_dir:
        _emit_report_files(rep, out_dir, f"spacing_r{r}_N{N}_k{kprime}", True)


def _cmd_verify_gap(args, fails: _Failures) -> None:
    a = _merged(args, "a", 0.0, float)
    b = _merged(args, "b", 0.0, float)
    interior = [float(v) for v in _merged(args, "interior", "0.5", str).split(",")]
    M = _merged(args, "M", 100000, int)
    seed = _merged(args, "seed", DEFAULT_SEED, int)
    rep = stats.verify_gap_formula(a, b, interior, M, seed,
                                   config=_chain_config(args, M))
    fails.check(
        f"gap a={a} b={b} interior={interior}", rep.passed,
        f"mc = {rep.extra['mc']:.5f}, closed = {rep.extra['closed']:.5f}, "
        f"se = {rep.extra['se']:.2g}",
    )
    out_dir = getattr(args, "out_dir", None)
    if out_dir:
        stem = f"gap_a{a}_b{b}"
        _emit_report_files(rep, out_dir, stem, False)
        # numeric companion so renderers never recompute the statistics
        values = Path(out_dir) / f"{stem}_values.csv"
        values.write_text(
            "label,mc,closed,se\n"
            f"a={a} b={b} interior={'|'.join(repr(v) for v in interior)},"
            f"{repr(rep.extra['mc'])},{repr(rep.extra['closed'])},{repr(rep.extra['se'])}\n"
        )


def _cmd_verify_asymptotic(args, fails: _Failures) -> None:
    worst = 0.0
    for r in (1, 2, 3):
        for k in (0, 1, 2):
            c2l, c1l, cll = specfun.asymptotic_coeffs(2.0 / (r + 1), (r + 1) * k + r)
            c2r, c1r, clr = specfun.asymptotic_coeffs(2.0 * (r + 1), k)
            worst = max(
                worst,
                abs(c2l * (r + 1) ** 2 - c2r),
                abs(c1l * (r + 1) - c1r),
                abs(cll - clr),
            )
    fails.check("asymptotic coefficient consistency", worst < 1e-12,
                f"max abs err = {worst:.2e}")


def _cmd_sample(args, fails: _Failures) -> None:
    ens = args.ensemble
    beta = _merged(args, "beta", 2.0, float)
    N = _merged(args, "N", 2, int)
    M = _merged(args, "M", 1000, int)
    seed = _merged(args, "seed", DEFAULT_SEED, int)
    cfg = _chain_config(args, M)
    a = _merged(args, "a", 0.0, float)
    b = _merged(args, "b", 0.0, float)
    c = _merged(args, "c", 1.0, float)
    if ens == "jacobi":
        batch = sample_me(EnsembleSpec(beta, N, Weight.jacobi(a, b)), cfg, seed)
    elif ens == "laguerre":
        batch = sample_me(EnsembleSpec(beta, N, Weight.laguerre(a, c)), cfg, seed)
    elif ens == "gaussian":
        batch = sample_me(EnsembleSpec(beta, N, Weight.gaussian(c)), cfg, seed)
    elif ens == "circular":
        batch = sample_ce(CircularSpec(beta, N, b), cfg, seed)
    else:
        raise ValueError(f"unknown ensemble {ens!r}")
    write_samples_csv(batch, args.out)
    fails.check(f"sample {ens} -> {args.out}", True)


def _cmd_report_all(args, fails: _Failures) -> None:
    """The full primary acceptance battery, aggregated."""
    quick = bool(getattr(args, "quick", False))
    seed = _merged(args, "seed", DEFAULT_SEED, int)
    out_dir = getattr(args, "out_dir", None) or "reports"
    M = 2000 if quick else 20000
    burn = 400 if quick else 5000
    args.burn_in = burn
    args.points = None
    args.tol = None
    args.r_max = None
    _cmd_verify_lemma(args, fails)
    _cmd_verify_selberg(args, fails)
    _cmd_verify_morris(args, fails)
    args.seed = seed
    args.circular = False
    _cmd_verify_theorem1(args, fails)
    args.circular = True
    _cmd_verify_theorem1(args, fails)
    ns = argparse.Namespace(**vars(args))
    ns.M = M
    ns.out_dir = out_dir
    ns.a, ns.b, ns.threshold = None, None, None
    for relation in stats.RELATION_IDS:
        for r in (1, 2):
            for N in (2, 3):
                ns.relation = relation
                ns.r, ns.N = r, N
                ns.negative_control = None
                ns.seed = seed + 1000 * (1 + stats.RELATION_IDS.index(relation)) + 10 * r + N
                _cmd_verify_decimation(ns, fails)
    for nc in ("stride", "beta"):
        ns.relation = "gaussian"
        ns.r, ns.N = 1, 2
        ns.negative_control = nc
        ns.seed = seed + 77
        _cmd_verify_decimation(ns, fails)
    ns.negative_control = None
    for relation in ("jacobi", "laguerre"):
        for r in (1, 2):
            ns.relation = relation
            ns.r, ns.N = r, 2
            ns.seed = seed + 31 * r
            _cmd_verify_composition(ns, fails)
    for kind in ("jacobi-8-1", "jacobi-8-2", "laguerre", "gaussian"):
        ns.kind = kind
        ns.N = 2
        ns.seed = seed + 7
        _cmd_verify_superposition(ns, fails)
    ns.r, ns.N, ns.kprime = 1, 4, 0
    ns.seed = seed + 5
    _cmd_verify_spacing(ns, fails)
    gap_cases = [(0.0, 0.0, "0.5"), (0.0, 0.0, "0.9,0.1"), (1.0, 1.0, "0.5")]
    for ga, gb, gi in gap_cases:
        ns.a, ns.b, ns.interior = ga, gb, gi
        ns.M = 20000 if quick else 100000
        ns.seed = seed + 3
        _cmd_verify_gap(ns, fails)
    _cmd_verify_asymptotic(args, fails)


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="betadec",
        description="Verification suites for beta-ensemble decimation identities.",
    )
    parser.add_argument("--config", help="key = value config file")
    parser.add_argument("--threads", help="worker thread count (or env BETADEC_THREADS)")
    parser.add_argument("--ci", action="store_true",
                        help="require --seed on randomized subcommands")
    sub = parser.add_subparsers(dest="command", required=True)

    verify = sub.add_parser("verify", help="run a verification suite")
    vsub = verify.add_subparsers(dest="suite", required=True)

    def common(p, randomized=True):
        p.add_argument("--seed", type=int)
        p.add_argument("--out-dir")
        if randomized:
            p.add_argument("--M", type=int)
            p.add_argument("--burn-in", type=int)
            p.add_argument("--threshold", type=float)

    p = vsub.add_parser("lemma")
    p.add_argument("--r-max", type=int)
    p = vsub.add_parser("selberg")
    p.add_argument("--tol", type=float)
    p.add_argument("--points", type=int)
    p = vsub.add_parser("morris")
    p.add_argument("--tol", type=float)
    p.add_argument("--points", type=int)
    p = vsub.add_parser("theorem1")
    p.add_argument("--circular", action="store_true")
    p.add_argument("--tol", type=float)
    p.add_argument("--points", type=int)
    p.add_argument("--seed", type=int)
    p = vsub.add_parser("decimation")
    p.add_argument("--relation", required=True, choices=stats.RELATION_IDS)
    p.add_argument("--r", type=int)
    p.add_argument("--N", type=int)
    p.add_argument("--a", type=float)
    p.add_argument("--b", type=float)
    p.add_argument("--negative-control", choices=("stride", "beta"))
    common(p)
    p = vsub.add_parser("composition")
    p.add_argument("--relation", required=True, choices=stats.LINE_RELATIONS)
    p.add_argument("--r", type=int)
    p.add_argument("--N", type=int)
    p.add_argument("--a", type=float)
    p.add_argument("--b", type=float)
    common(p)
    p = vsub.add_parser("superposition")
    p.add_argument("--kind", required=True,
                   choices=("jacobi-8-1", "jacobi-8-2", "laguerre", "gaussian"))
    p.add_argument("--N", type=int)
    p.add_argument("--a", type=float)
    p.add_argument("--b", type=float)
    common(p)
    p = vsub.add_parser("spacing")
    p.add_argument("--r", type=int)
    p.add_argument("--N", type=int)
    p.add_argument("--kprime", type=int)
    common(p)
    p = vsub.add_parser("gap")
    p.add_argument("--a", type=float)
    p.add_argument("--b", type=float)
    p.add_argument("--interior")
    common(p)
    p = vsub.add_parser("asymptotic")

    p = sub.add_parser("sample", help="draw a batch and write it as CSV")
    p.add_argument("--ensemble", required=True,
                   choices=("jacobi", "laguerre", "gaussian", "circular"))
    p.add_argument("--beta", type=float)
    p.add_argument("--N", type=int)
    p.add_argument("--M", type=int)
    p.add_argument("--a", type=float)
    p.add_argument("--b", type=float)
    p.add_argument("--c", type=float)
    p.add_argument("--burn-in", type=int)
    p.add_argument("--seed", type=int)
    p.add_argument("--out", required=True)

    p = sub.add_parser("report", help="run the aggregated acceptance battery")
    p.add_argument("--all", action="store_true", required=True)
    p.add_argument("--out-dir")
    p.add_argument("--seed", type=int)
    p.add_argument("--quick", action="store_true",
                   help="reduced sample sizes (smoke mode, not the acceptance scale)")

    return parser


def run(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code) if exc.code else 0
    try:
        args._config_values = _load_config_file(args.config) if args.config else {}
    except (OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    _set_threads(args.threads)
    randomized = (args.command in ("sample", "report")
                  or (args.command == "verify"
                      and args.suite in ("decimation", "composition", "superposition",
                                         "spacing", "gap", "theorem1")))
    if args.ci and randomized and getattr(args, "seed", None) is None \
            and "seed" not in args._config_values:
        print("error: --ci requires --seed on randomized subcommands", file=sys.stderr)
        return 2
    fails = _Failures()
    try:
        if args.command == "verify":
            handler = {
                "lemma": _cmd_verify_lemma,
                "selberg": _cmd_verify_selberg,
                "morris": _cmd_verify_morris,
                "theorem1": _cmd_verify_theorem1,
                "decimation": _cmd_verify_decimation,
                "composition": _cmd_verify_composition,
                "superposition": _cmd_verify_superposition,
                "spacing": _cmd_verify_spacing,
                "gap": _cmd_verify_gap,
                "asymptotic": _cmd_verify_asymptotic,
            }[args.suite]
            handler(args, fails)
        elif args.command == "sample":
            _cmd_sample(args, fails)
        elif args.command == "report":
            _cmd_report_all(args, fails)
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    return fails.exit_code()


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
