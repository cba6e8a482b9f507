"""Command-line front end: compute the desk-scale reference tables, run verifications
and Monte Carlo checks, and emit deterministic CSV or JSON artifacts.

Exit codes: 0 success, 1 usage error, 2 guard violation, 3 numeric or
structural failure.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
from dataclasses import asdict, dataclass
from fractions import Fraction

from .errors import GuardError, NumericError, StructureError

# brute-force/Holevo cross-checks embedded in reports stay interactive up to
# this dimension; the library guard (4096) still bounds explicit requests
CHECK_GUARD = 256


@dataclass
class RunConfig:
    subcommand: str
    N: int | None = None
    d: int | None = None
    cost: str | None = None
    regime: str | None = None
    trials: int | None = None
    seed: int | None = None
    tol: float | None = None
    threads: int | None = None
    format: str = "json"
    output: str | None = None
    variant: str | None = None
    overlap: float | None = None
    nmin: int | None = None
    nmax: int | None = None
    r: int | None = None
    what: str | None = None

    def public(self) -> dict:
        skip = ("output", "subcommand")
        return {k: v for k, v in asdict(self).items() if v is not None and k not in skip}


def _fmt(v):
    if isinstance(v, Fraction):
        return f"{v.numerator}/{v.denominator}"
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, float):
        return repr(v)
    return str(v)


def _decimal(v):
    if isinstance(v, (Fraction, int, float)):
        return repr(float(v))
    return ""


def _jsonable(v):
    if isinstance(v, Fraction):
        return {"rational": f"{v.numerator}/{v.denominator}", "decimal": float(v)}
    if isinstance(v, (list, tuple)):
        return [_jsonable(x) for x in v]
    if isinstance(v, dict):
        return {str(k): _jsonable(x) for k, x in v.items()}
    return v


def emit(cfg: RunConfig, results: dict, checks: list[dict] | None = None,
         rows: list | None = None, header: list | None = None) -> str:
    """Render a report deterministically and write it to -o or stdout."""
    checks = checks or []
    if cfg.format == "json":
        payload = {
            "subcommand": cfg.subcommand,
            "config": cfg.public(),
            "results": _jsonable(results),
            "checks": checks,
        }
        if rows is not None:
            payload["rows"] = {"header": header, "data": _jsonable(rows)}
        text = json.dumps(payload, indent=2) + "\n"
    else:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        if rows is not None:
            writer.writerow(header)
            for row in rows:
                writer.writerow([_fmt(v) for v in row])
        else:
            writer.writerow(["key", "value", "decimal"])
            for k, v in results.items():
                writer.writerow([k, _fmt(v), _decimal(v)])
            for chk in checks:
                writer.writerow(
                    [f"check:{chk['name']}", "pass" if chk["pass"] else "fail", chk.get("detail", "")]
                )
        text = buf.getvalue()
    if cfg.output:
        with open(cfg.output, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return text


# ---------------------------------------------------------------------------
# subcommands

def cmd_quantum(cfg: RunConfig) -> int:
    from .povm import (
        build_povm,
        success_probability_asymptotic,
        success_probability_bruteforce,
        success_probability_exact,
        verify_holevo,
    )

    N, d = cfg.N, cfg.d
    exact = success_probability_exact(N, d)
    results = {"success_exact": exact}
    for regime in ("combined", "sublinear", "linear", "superlinear"):
        if N >= 2:
            results[f"asymptote_{regime}"] = success_probability_asymptotic(N, d, regime)
    if N >= 2:
        results["ratio_exact_over_combined"] = float(exact) / results["asymptote_combined"]
    checks = []
    if d**N <= CHECK_GUARD:
        brute = success_probability_bruteforce(N, d)
        results["success_bruteforce"] = brute
        checks.append(
            {"name": "bruteforce_matches_formula", "pass": brute == exact,
             "detail": f"{brute} vs {exact}"}
        )
        povm = build_povm(N, d)
        checks.append({"name": "completeness", "pass": povm.is_complete(), "detail": "exact"})
        rep = verify_holevo(povm, tol=cfg.tol or 1e-9)
        checks.append({"name": "holevo", "pass": rep.passed, "detail": rep.detail})
    else:
        checks.append(
            {"name": "bruteforce_matches_formula", "pass": True,
             "detail": f"skipped: d^N = {d**N} exceeds the report guard {CHECK_GUARD}"}
        )
    emit(cfg, results, checks)
    return 0


def cmd_classical(cfg: RunConfig) -> int:
    from .classical import (
        composition_count,
        success_asymptotic_unknown,
        success_exact_unknown,
    )

    N, d = cfg.N, cfg.d
    asym = success_asymptotic_unknown(N, d)
    results = {"asymptote": asym}
    checks = []
    count = composition_count(N, d)
    if count <= 10**6:
        exact = success_exact_unknown(N, d)
        results = {"success_exact": exact, "asymptote": asym,
                   "ratio_exact_over_asymptote": float(exact) / asym,
                   "compositions": count}
    else:
        checks.append(
            {"name": "exact_enumeration", "pass": True,
             "detail": f"skipped: {count} compositions exceed the guard"}
        )
    emit(cfg, results, checks)
    return 0


def cmd_known_quantum(cfg: RunConfig) -> int:
    from .known_quantum import (
        average_success_known,
        helstrom_simulate,
        success_known_clustering,
        success_known_pure,
        unambiguous_average,
    )

    N, d = cfg.N, cfg.d
    variant = cfg.variant or "pure"
    avg = average_success_known(N, d, variant)
    unamb = unambiguous_average(N, d)
    c = cfg.overlap if cfg.overlap is not None else 0.5
    sim = helstrom_simulate(c, N, trials=cfg.trials or 100_000, seed=cfg.seed or 0,
                            mode=variant, threads=cfg.threads or os.cpu_count())
    reference = success_known_pure(c, N) if variant == "pure" else success_known_clustering(c, N)
    results = {
        "average_success": avg.value,
        "average_asymptote": avg.asymptote,
        "unambiguous_average": unamb.value,
        "unambiguous_asymptote": unamb.asymptote,
        "simulator_overlap": c,
        "simulator_estimate": sim.estimate,
        "simulator_stderr": sim.stderr,
        "simulator_reference": reference,
    }
    sigma = max(sim.stderr, 1e-12)
    checks = [{
        "name": "simulator_within_4_sigma",
        "pass": abs(sim.estimate - reference) < 4 * sigma,
        "detail": f"|{sim.estimate} - {reference}| vs 4*{sigma}",
    }]
    emit(cfg, results, checks)
    return 0


def cmd_known_classical(cfg: RunConfig) -> int:
    from .classical import average_known_classical

    res = average_known_classical(cfg.N, cfg.d, trials=cfg.trials or 200_000, seed=cfg.seed or 0)
    results = {"average_success": res.exact if res.exact is not None else res.value,
               "asymptote": res.asymptote}
    if res.stderr is not None:
        results["stderr"] = res.stderr
    emit(cfg, results, checks=[])
    return 0


def cmd_table1(cfg: RunConfig) -> int:
    from .costs import COST_KINDS, guess_rule_general
    from .partitions import enumerate_two_row_irreps

    nmin = cfg.nmin or 4
    nmax = cfg.nmax or 8
    d = cfg.d or 2
    kinds = list(COST_KINDS) if (cfg.cost or "all") == "all" else [cfg.cost]
    rows = []
    for kind in kinds:
        for N in range(nmin, nmax + 1):
            table = guess_rule_general(kind, N, d)
            for lam in enumerate_two_row_irreps(N):
                guesses = ",".join(str(n) for n in table.guess(lam))
                rows.append((kind, N, lam[0], lam[1], guesses))
    emit(cfg, {}, rows=rows, header=["cost", "N", "lambda1", "lambda2", "guesses"])
    return 0


def cmd_heatmap(cfg: RunConfig) -> int:
    from .costs import hamming_heatmap

    labels, mat = hamming_heatmap(cfg.N)
    rows = [[lab] + row.tolist() for lab, row in zip(labels, mat)]
    emit(cfg, {}, rows=rows, header=["string"] + labels)
    return 0


def cmd_partitions(cfg: RunConfig) -> int:
    from .partitions import count_partitions_max_len

    exact, asym = count_partitions_max_len(cfg.N, cfg.r or 2)
    emit(cfg, {"exact": exact, "asymptotic": asym, "ratio": exact / asym}, [])
    return 0


def cmd_mc(cfg: RunConfig) -> int:
    from .classical import mc_unknown_success, success_exact_unknown
    from .known_quantum import (
        helstrom_simulate,
        success_known_clustering,
        success_known_pure,
    )

    trials = cfg.trials or 100_000
    seed = cfg.seed or 0
    if cfg.what == "classical-unknown":
        res = mc_unknown_success(cfg.N, cfg.d, trials=trials, seed=seed,
                                 threads=cfg.threads or os.cpu_count())
        reference = float(success_exact_unknown(cfg.N, cfg.d))
    else:
        mode = "pure" if cfg.what == "helstrom-pure" else "clustering"
        c = cfg.overlap if cfg.overlap is not None else 0.5
        res = helstrom_simulate(c, cfg.N, trials=trials, seed=seed, mode=mode,
                                threads=cfg.threads or os.cpu_count())
        reference = (success_known_pure if mode == "pure" else success_known_clustering)(c, cfg.N)
    sigma = max(res.stderr, 1e-12)
    results = {"estimate": res.estimate, "stderr": res.stderr, "reference": reference,
               "sigma_distance": abs(res.estimate - reference) / sigma}
    checks = [{"name": "within_4_sigma", "pass": abs(res.estimate - reference) < 4 * sigma,
               "detail": f"sigma_distance={results['sigma_distance']:.3f}"}]
    emit(cfg, results, checks)
    return 0


def cmd_verify(cfg: RunConfig) -> int:
    checks: list[dict] = []
    results: dict = {}
    if cfg.what == "holevo":
        from .costs import build_cost_povm
        from .povm import build_povm, verify_holevo

        cost = cfg.cost or "zero_one"
        povm = build_povm(cfg.N, cfg.d) if cost == "zero_one" else build_cost_povm(cost, cfg.N, cfg.d)
        rep = verify_holevo(povm, cost=cost, tol=cfg.tol or 1e-9)
        results["min_eigenvalue"] = rep.min_eigenvalue
        checks.append({"name": "holevo", "pass": rep.passed, "detail": rep.detail})
    elif cfg.what == "completeness":
        from .povm import build_povm

        povm = build_povm(cfg.N, cfg.d)
        checks.append({"name": "completeness", "pass": povm.is_complete(), "detail": "exact"})
    elif cfg.what == "conjecture":
        from .costs import COST_KINDS, check_conjecture

        kinds = list(COST_KINDS) if (cfg.cost or "all") == "all" else [cfg.cost]
        for kind in kinds:
            verdicts = check_conjecture(kind, cfg.N, cfg.d, tol=cfg.tol or 1e-8)
            ok = all(verdicts.values())
            detail = "; ".join(
                f"lam={lam} n={n}: {'ok' if v else 'FAIL'}" for (lam, n), v in sorted(verdicts.items())
            )
            checks.append({"name": f"conjecture_{kind}", "pass": ok, "detail": detail})
    elif cfg.what == "dimensions":
        from .partitions import (
            dim_symgroup_irrep,
            dim_unitary_irrep,
            partitions_of,
            sym_subspace_dim,
        )

        ok_schur = True
        for d in range(2, 6):
            for N in range(1, 11):
                total = sum(
                    dim_unitary_irrep(lam, d) * dim_symgroup_irrep(lam)
                    for lam in partitions_of(N) if len(lam) <= d
                )
                ok_schur = ok_schur and total == d**N
        checks.append({"name": "schur_weyl_dimension_sum", "pass": ok_schur,
                       "detail": "N <= 10, d <= 5, exact"})
        dd = cfg.d or 2
        ok_cg = True
        for total in range(2, 13):
            for n in range(total // 2 + 1):
                nb = total - n
                lhs = sym_subspace_dim(nb, dd) * sym_subspace_dim(n, dd)
                rhs = sum(dim_unitary_irrep((total - i, i), dd) for i in range(n + 1))
                ok_cg = ok_cg and lhs == rhs
                from math import comb

                ok_cg = ok_cg and comb(total, n) == sum(
                    dim_symgroup_irrep((total - i, i)) for i in range(n + 1)
                )
        checks.append({"name": "tensor_product_dimension_sums", "pass": ok_cg,
                       "detail": f"n + nbar <= 12, d = {dd}, exact"})
    elif cfg.what == "moments":
        import numpy as np
        from scipy import stats as sstats

        from .classical import sample_haar_induced, sample_simplex_uniform, simplex_moment
        from itertools import product as iproduct

        d = cfg.d or 2
        trials = cfg.trials or 200_000
        rng = np.random.default_rng(cfg.seed or 0)
        samples = {
            "simplex": sample_simplex_uniform(d, rng, size=trials),
            "haar": sample_haar_induced(d, rng, size=trials),
        }
        worst = 0.0
        ok = True
        for nvec in iproduct(range(4), repeat=d):
            deg = sum(nvec)
            if not 1 <= deg <= 3:
                continue
            target = float(simplex_moment(nvec, d))
            for name, p in samples.items():
                vals = np.ones(trials)
                for s, n in enumerate(nvec):
                    if n:
                        vals = vals * p[:, s] ** n
                sigma = vals.std(ddof=1) / np.sqrt(trials)
                dev = float(abs(vals.mean() - target) / max(sigma, 1e-300))
                worst = max(worst, dev)
                ok = ok and dev < 4
        checks.append({"name": "moments_within_4_sigma", "pass": bool(ok),
                       "detail": f"worst deviation {worst:.2f} sigma"})
        ks = sstats.ks_2samp(samples["simplex"][:, 0], samples["haar"][:, 0])
        results["ks_pvalue"] = float(ks.pvalue)
        checks.append({"name": "ks_not_rejected", "pass": bool(ks.pvalue > 0.001),
                       "detail": f"p = {ks.pvalue:.4f}"})
    else:
        raise ValueError(f"unknown verification {cfg.what!r}")
    emit(cfg, results, checks)
    return 0


# ---------------------------------------------------------------------------
# argument parsing

class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        sys.stderr.write(f"error: {message}\n")
        raise SystemExit(1)


def _add_common(p, n_required=True):
    if n_required:
        p.add_argument("-N", type=int, required=True, help="number of systems")
    else:
        p.add_argument("-N", type=int, help="number of systems")
    p.add_argument("-d", type=int, default=2, help="local dimension / alphabet size")
    p.add_argument("--trials", type=int)
    p.add_argument("--seed", type=int)
    p.add_argument("--tol", type=float)
    p.add_argument("--threads", type=int,
                   help="worker cap for Monte Carlo (default: available parallelism; results are worker-count independent)")
    p.add_argument("--format", choices=("json", "csv"), default="json")
    p.add_argument("-o", "--output")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="qclust", description=__doc__)
    sub = parser.add_subparsers(dest="subcommand", required=True)

    p = sub.add_parser("quantum", help="universal quantum clustering performance")
    _add_common(p)
    p.add_argument("--asymptote", action="store_true", help="kept for symmetry; asymptotes always reported")
    p.add_argument("--regime", choices=("combined", "sublinear", "linear", "superlinear"))

    p = sub.add_parser("classical", help="unknown-distribution classical clustering")
    _add_common(p)

    p = sub.add_parser("known-quantum", help="known-states quantum clustering")
    _add_common(p)
    p.add_argument("--variant", choices=("pure", "clustering"), default="pure")
    p.add_argument("--overlap", type=float)

    p = sub.add_parser("known-classical", help="known-distribution classical clustering")
    _add_common(p)

    p = sub.add_parser("table1", help="optimal guess table per cost and irrep")
    _add_common(p, n_required=False)
    p.add_argument("--cost", default="all",
                   choices=("all", "zero_one", "hamming", "trace_distance", "infidelity"))
    p.add_argument("--nmin", type=int, default=4)
    p.add_argument("--nmax", type=int, default=8)

    p = sub.add_parser("heatmap", help="pairwise Hamming distance matrix")
    _add_common(p)

    p = sub.add_parser("verify", help="run a named verification")
    p.add_argument("what", choices=("holevo", "completeness", "conjecture", "dimensions", "moments"))
    _add_common(p, n_required=False)
    p.add_argument("--cost", default=None)

    p = sub.add_parser("mc", help="Monte Carlo protocol validation")
    p.add_argument("what", choices=("classical-unknown", "helstrom-pure", "helstrom-clustering"))
    _add_common(p)
    p.add_argument("--overlap", type=float)

    p = sub.add_parser("partitions", help="partition counts and their asymptote")
    _add_common(p)
    p.add_argument("-r", type=int, default=2, help="maximum number of parts")
    return parser


_DISPATCH = {
    "quantum": cmd_quantum,
    "classical": cmd_classical,
    "known-quantum": cmd_known_quantum,
    "known-classical": cmd_known_classical,
    "table1": cmd_table1,
    "heatmap": cmd_heatmap,
    "verify": cmd_verify,
    "mc": cmd_mc,
    "partitions": cmd_partitions,
}

_NEEDS_N = {"quantum", "classical", "known-quantum", "known-classical", "heatmap", "mc", "partitions"}


def main(argv=None) -> int:
    parser = build_parser()
    try:
        ns = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    cfg = RunConfig(
        subcommand=ns.subcommand,
        N=getattr(ns, "N", None),
        d=getattr(ns, "d", None),
        cost=getattr(ns, "cost", None),
        regime=getattr(ns, "regime", None),
        trials=getattr(ns, "trials", None),
        seed=getattr(ns, "seed", None),
        tol=getattr(ns, "tol", None),
        threads=getattr(ns, "threads", None),
        format=getattr(ns, "format", "json"),
        output=getattr(ns, "output", None),
        variant=getattr(ns, "variant", None),
        overlap=getattr(ns, "overlap", None),
        nmin=getattr(ns, "nmin", None),
        nmax=getattr(ns, "nmax", None),
        r=getattr(ns, "r", None),
        what=getattr(ns, "what", None),
    )
    if cfg.subcommand == "verify" and cfg.what in ("holevo", "completeness", "conjecture") and cfg.N is None:
        sys.stderr.write("error: this verification needs -N\n")
        return 1
    try:
        return _DISPATCH[cfg.subcommand](cfg)
    except GuardError as exc:
        sys.stderr.write(f"guard violation: {exc}\n")
        return 2
    except (NumericError, StructureError) as exc:
        sys.stderr.write(f"numeric failure: {exc}\n")
        return 3
    except ValueError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return 1


if __name__ == "__main__":
    raise SystemExit(main())
