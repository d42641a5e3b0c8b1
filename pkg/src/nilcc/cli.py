"""Command-line front end.

Exit codes: 0 success, 1 regression failure, 2 input error.
"""
from __future__ import annotations

import argparse
import json
import os
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Dict, List, Optional, Sequence

from . import catalog, cohomology, dc, freelie, spectral_toy
from .algebra import AlgebraError, GradedLieAlgebra, algebra_from_json, ensure_valid, is_filtered, layer_profile
from .forms import d0, theta
from .linalg import fmt_frac


class InputError(Exception):
    pass


def dumps(obj) -> str:
    return json.dumps(obj, sort_keys=True, indent=2, ensure_ascii=False)


def load_algebra(source: str) -> GradedLieAlgebra:
    """``catalog:<name>[,params]`` or a path to a JSON algebra file."""
    try:
        if source.startswith("catalog:"):
            return catalog.parse_spec(source[len("catalog:"):])
        with open(source, encoding="utf-8") as fh:
            data = json.load(fh)
        return ensure_valid(algebra_from_json(data))
    except (OSError, json.JSONDecodeError) as exc:
        raise InputError(f"{source}: {exc}") from exc
    except (AlgebraError, catalog.CatalogError) as exc:
        raise InputError(f"{source}: {exc}") from exc


def curvature_span(alg: GradedLieAlgebra):
    """The 2-forms d0 theta_z for z in the weight-two layer."""
    return [d0(alg, theta(alg, alg.labels[z])) for z in alg.layer(2)]


# ---------------------------------------------------------------------------
# analyze


def analyze(alg: GradedLieAlgebra, dc_degrees: Sequence[int] = (), seed: int = 0, search: bool = True,
            audible: bool = True, timing: bool = False) -> dict:
    times: Dict[str, float] = {}

    def timed(key, fn):
        t = time.perf_counter()
        out = fn()
        times[key] = round(time.perf_counter() - t, 4)
        return out

    profile = layer_profile(alg)
    report = {
        "algebra": {"name": alg.name, "dim": alg.dim, "labels": list(alg.labels), "weights": list(alg.weights)},
        "layer_profile": profile.to_json(),
        "seed": seed,
    }
    report["cohomology"] = timed("cohomology", lambda: cohomology.cohomology_summary(alg).to_json())
    report["pinching"] = timed("pinching", lambda: cohomology.pinching_report(alg, audible=audible).to_json())
    predicates: Dict[str, object] = {}
    if profile.filtered:
        report["relations"] = timed("relations", lambda: freelie.relation_profile(alg).to_json())
        predicates["quadratic"] = cohomology.is_quadratically_presented(alg)
    else:
        report["relations"] = None
        predicates["quadratic"] = None
    two_step = set(alg.weights) == {1, 2}
    if search and two_step:
        predicates["omega_regular"] = timed("omega", lambda: cohomology.omega_regular_search(alg, seed=seed).to_json(alg))
        predicates["rank2_curvature"] = timed(
            "rank2", lambda: cohomology.rank2_in_span(alg, curvature_span(alg), seed=seed).to_json())
    report["predicates"] = predicates
    if dc_degrees:
        report["dc"] = {str(k): timed(f"dc{k}", lambda k=k: dc.dc_matrix(alg, k).to_json()) for k in dc_degrees}
    if timing:
        report["timing"] = times
    return report


def render_text(report: dict) -> str:
    a = report["algebra"]
    lp = report["layer_profile"]
    lines = [f"algebra {a['name']}  dim {a['dim']}  N(G) {lp['homogeneous_dim']}  rank {lp['rank']}  "
             f"filtered {lp['filtered']}"]
    lines.append("degree  dim  weights")
    for d in report["cohomology"]["degrees"]:
        lines.append(f"{d['degree']:>6}  {d['dim']:>3}  {d['weights']}")
    lines.append("pinching")
    for e in report["pinching"]["degrees"]:
        if e["applicable"]:
            extra = f"  audible r={e['audible_lower_bound']}" if e["audible_lower_bound"] is not None else ""
            lines.append(f"  k={e['degree']}  beta in [{e['beta'][0]}, {e['beta'][1]}]  "
                         f"alpha in [{e['alpha'][0]}, {e['alpha'][1]}]{extra}")
        else:
            lines.append(f"  k={e['degree']}  not applicable ({e['reason']})")
    if report.get("relations"):
        lines.append(f"relation weights {report['relations']['weights']}")
    for key, val in sorted(report["predicates"].items()):
        lines.append(f"{key}: {json.dumps(val, sort_keys=True)}")
    for k, m in sorted(report.get("dc", {}).items()):
        lines.append(f"d_c in degree {k}")
        for e in m["entries"]:
            lines.append(f"  {m['source'][e['col']]} --[{e['symbol']}]--> {m['target'][e['row']]}")
    if "timing" in report:
        lines.append("timing " + json.dumps(report["timing"], sort_keys=True))
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# regression


@dataclass
class RegressionRow:
    algebra: str
    criterion: str
    expected: object
    actual: object

    @property
    def ok(self) -> bool:
        return self.expected == self.actual


def _pair(p) -> Optional[List[str]]:
    return [fmt_frac(p[0]), fmt_frac(p[1])] if p else None


def evaluate(label: str, build: Callable[[], GradedLieAlgebra], expected: Dict[str, object]) -> List[RegressionRow]:
    """Compare the computed value of every expected key."""
    rows = []
    try:
        alg = build()
    except (AlgebraError, catalog.CatalogError) as exc:
        return [RegressionRow(label, "valid", True, f"error: {exc}")]
    rows.append(RegressionRow(label, "valid", True, True))
    for key, want in sorted(expected.items()):
        name, _, arg = key.partition(":")
        if name == "N":
            got = layer_profile(alg).homogeneous_dim
        elif name == "e0_dims":
            got = [len(cohomology.e0_basis(alg, k)) for k in range(alg.dim + 1)]
        elif name == "h2_weights":
            got = sorted(cohomology.h2_weights(alg))
        elif name == "e0_weights":
            got = sorted(cohomology.e0_basis(alg, int(arg)).weights)
        elif name == "beta":
            got = _pair(cohomology.pinching_entry(alg, int(arg)).beta)
        elif name == "alpha":
            got = _pair(cohomology.pinching_entry(alg, int(arg)).alpha)
        elif name == "quadratic":
            got = cohomology.is_quadratically_presented(alg) if is_filtered(alg) else None
        elif name == "relations":
            got = freelie.relation_profile(alg).weights
        else:
            got = f"unknown criterion {key}"
        rows.append(RegressionRow(label, key, want, got))
    return rows


def _evaluate_entry(entry: catalog.CatalogEntry) -> List[RegressionRow]:
    return evaluate(entry.spec, entry.build, entry.expected)


def run_regression(entries: Sequence[catalog.CatalogEntry], threads: int = 1) -> List[RegressionRow]:
    if threads > 1 and len(entries) > 1:
        with ProcessPoolExecutor(max_workers=threads) as pool:
            parts = list(pool.map(_evaluate_entry, entries))
    else:
        parts = [_evaluate_entry(e) for e in entries]
    return [row for part in parts for row in part]


def format_table(rows: Sequence[RegressionRow]) -> str:
    out = [f"{'algebra':<20} {'criterion':<14} {'status':<6} expected / actual"]
    for r in rows:
        out.append(f"{r.algebra:<20} {r.criterion:<14} {'pass' if r.ok else 'FAIL':<6} "
                   f"{json.dumps(r.expected)} / {json.dumps(r.actual)}")
    return "\n".join(out) + "\n"


def _threads() -> int:
    try:
        return max(1, int(os.environ.get("CC_THREADS", "1")))
    except ValueError:
        return 1


# ---------------------------------------------------------------------------
# commands


def cmd_analyze(args) -> int:
    alg = load_algebra(args.input)
    report = analyze(alg, args.dc or (), seed=args.seed, search=not args.no_search,
                     audible=not args.no_audible, timing=args.timing)
    sys.stdout.write(dumps(report) + "\n" if args.format == "json" else render_text(report))
    return 0


def cmd_regress(args) -> int:
    entries = catalog.catalog_list()
    if args.filter is not None:
        entries = [e for e in entries if args.filter in e.spec]
    rows = run_regression(entries, _threads())
    sys.stdout.write(format_table(rows))
    return 0 if all(r.ok for r in rows) else 1


def cmd_free(args) -> int:
    if args.generators < 1 or args.rank < 1:
        raise InputError("--generators and --rank must be positive")
    hb = freelie.hall_basis(args.generators, args.rank)
    sys.stdout.write(dumps(hb.to_json()) + "\n")
    return 0


def cmd_relations(args) -> int:
    alg = load_algebra(args.input)
    try:
        profile = freelie.relation_profile(alg)
    except AlgebraError as exc:
        raise InputError(str(exc)) from exc
    sys.stdout.write(dumps(profile.to_json()) + "\n")
    return 0


def cmd_dc(args) -> int:
    alg = load_algebra(args.input)
    if not 0 <= args.degree <= alg.dim:
        raise InputError(f"degree must lie in [0, {alg.dim}]")
    m = dc.dc_matrix(alg, args.degree)
    if args.format == "json":
        sys.stdout.write(dumps(m.to_json()) + "\n")
    else:
        sys.stdout.write(m.diagram() + "\n")
    return 0


def cmd_spectral_toy(args) -> int:
    try:
        cfg = spectral_toy.ToyConfig(args.lambda_min, args.lambda_max, args.points, args.epsilon,
                                     args.t_min, args.t_max)
    except ValueError as exc:
        raise InputError(str(exc)) from exc
    rep = spectral_toy.run_toy(cfg)
    if args.out_dir:
        os.makedirs(args.out_dir, exist_ok=True)
        for name, text in (("area.csv", rep.area_csv()), ("heat.csv", rep.heat_csv()),
                           ("summary.json", dumps(rep.to_json()) + "\n")):
            with open(os.path.join(args.out_dir, name), "w", encoding="utf-8") as fh:
                fh.write(text)
    else:
        sys.stdout.write(rep.area_csv() + "\n" + rep.heat_csv() + "\n" + dumps(rep.to_json()) + "\n")
    return 0


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="nilcc", description="Weight-graded cohomology and d_c for graded nilpotent Lie algebras")
    sub = p.add_subparsers(dest="command", required=True)

    a = sub.add_parser("analyze", help="full report for one algebra")
    a.add_argument("input", help="JSON file or catalog:<name>[,params]")
    a.add_argument("--dc", type=int, action="append", help="include d_c matrices in this degree (repeatable)")
    a.add_argument("--format", choices=["text", "json"], default="text")
    a.add_argument("--seed", type=int, default=0)
    a.add_argument("--no-search", action="store_true", help="skip randomized searches")
    a.add_argument("--no-audible", action="store_true", help="skip the zero-column bound")
    a.add_argument("--timing", action="store_true", help="include wall-clock timings (not byte-stable)")
    a.set_defaults(func=cmd_analyze)

    r = sub.add_parser("regress", help="check headline numbers over the catalog")
    r.add_argument("--filter", default=None, help="substring of catalog names to keep")
    r.set_defaults(func=cmd_regress)

    f = sub.add_parser("free", help="Lyndon basis of a free nilpotent Lie algebra")
    f.add_argument("--generators", type=int, required=True)
    f.add_argument("--rank", type=int, required=True)
    f.set_defaults(func=cmd_free)

    rel = sub.add_parser("relations", help="relation-ideal generator weights")
    rel.add_argument("input")
    rel.set_defaults(func=cmd_relations)

    d = sub.add_parser("dc", help="d_c in one degree")
    d.add_argument("input")
    d.add_argument("--degree", type=int, required=True)
    d.add_argument("--format", choices=["text", "json"], default="text")
    d.set_defaults(func=cmd_dc)

    s = sub.add_parser("spectral-toy", help="areas and heat integrals for x^4 + y^2")
    s.add_argument("--lambda-min", type=float, default=1e-4)
    s.add_argument("--lambda-max", type=float, default=1.0)
    s.add_argument("--points", type=int, default=25)
    s.add_argument("--epsilon", type=float, default=0.1)
    s.add_argument("--t-min", type=float, default=1.0)
    s.add_argument("--t-max", type=float, default=1e4)
    s.add_argument("--out-dir", default=None, help="write area.csv, heat.csv, summary.json here")
    s.set_defaults(func=cmd_spectral_toy)
    return p


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0) and 2
    try:
        return args.func(args)
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
