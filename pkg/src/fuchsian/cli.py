"""Command-line front end.

Subcommands build the canonical polygon, verify the structural and dynamical
properties, run seeded entry simulations, and report cycle data.  Exit codes:
0 all requested checks passed, 1 a check failed, 2 configuration error.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import warnings
from dataclasses import asdict, dataclass, field

from . import tolerances
from .boundary import cycle, make_partition, markov_check, verify_matching
from .errors import (FuchsianError, InvalidSignature, NotElliptic,
                     PartitionOutOfGuaranteeRange)
from .extension import (build_attractor, simulate_entry, traces_to_csv,
                        verify_bijectivity)
from .polygon import Signature, build_canonical, validate_polygon
from .render import FigureSpec, render_attractor, render_polygon

ALL_CHECKS = ("polygon", "cycles", "markov", "bijectivity")


@dataclass
class RunConfig:
    """Flat, serializable description of one CLI run."""

    signature: str
    partition: str = "midpoint"
    seed: int = 42
    samples: int = 1000
    max_iters: int = 100_000
    buffer: float = 1e-6
    checks: tuple[str, ...] = ("all",)
    survey: bool = False
    strict: bool = True
    vertex: int = -1
    json_out: str = ""
    svg_out: str = ""
    attractor_svg_out: str = ""
    report_out: str = ""
    csv_out: str = ""
    tolerance_profile: str = field(
        default_factory=lambda: os.environ.get("FUCHSIAN_TOLERANCE_PROFILE",
                                               "default"))

    def to_dict(self) -> dict:
        d = asdict(self)
        d["checks"] = list(self.checks)
        return d

    @classmethod
    def from_dict(cls, d: dict) -> "RunConfig":
        d = dict(d)
        d["checks"] = tuple(d.get("checks", ("all",)))
        return cls(**d)


def parse_partition_arg(text: str):
    """Returns (mode, custom angles or None)."""
    if text in ("left", "right", "midpoint"):
        return text, None
    if text.startswith("custom="):
        body = text[len("custom="):]
        try:
            angles = [float(s) for s in body.split(",") if s]
        except ValueError:
            raise ValueError(f"cannot parse custom angles {body!r}") from None
        return "custom", angles
    raise ValueError(f"unknown partition {text!r}; "
                     "use left|right|midpoint|custom=a1,a2,...")


def _write(path: str, text: str) -> None:
    if path:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text)


def _setup(cfg: RunConfig):
    tolerances.set_profile(cfg.tolerance_profile)
    sig = Signature.parse(cfg.signature)
    poly = build_canonical(sig)
    mode, custom = parse_partition_arg(cfg.partition)
    part = make_partition(poly, mode, custom)
    return poly, part


def cmd_polygon(cfg: RunConfig) -> int:
    tolerances.set_profile(cfg.tolerance_profile)
    try:
        sig = Signature.parse(cfg.signature)
    except InvalidSignature as exc:
        print(f"invalid signature: {exc}", file=sys.stderr)
        return 2
    poly = build_canonical(sig)
    report = validate_polygon(poly)
    _write(cfg.json_out, poly.to_json())
    _write(cfg.report_out, json.dumps(report.to_dict(), indent=2))
    if cfg.svg_out or cfg.attractor_svg_out:
        try:
            mode, custom = parse_partition_arg(cfg.partition)
            part = make_partition(poly, mode, custom)
        except (FuchsianError, ValueError) as exc:
            print(f"configuration error: {exc}", file=sys.stderr)
            return 2
        if cfg.svg_out:
            _write(cfg.svg_out, render_polygon(poly, part, FigureSpec()))
        if cfg.attractor_svg_out:
            with warnings.catch_warnings():
                warnings.simplefilter("ignore", PartitionOutOfGuaranteeRange)
                dom = build_attractor(poly, part)
            _write(cfg.attractor_svg_out,
                   render_attractor(dom, FigureSpec(kind="attractor")))
    print(f"signature={sig} ell={poly.ell} N={poly.n_sides} "
          f"area={report.area!r} valid={report.passed}")
    for name, res in report.checks.items():
        print(f"  {name}: {'pass' if res.passed else 'FAIL'} "
              f"(residual {res.residual:.3e})")
    return 0 if report.passed else 1


def cmd_verify(cfg: RunConfig) -> int:
    selected = ALL_CHECKS if "all" in cfg.checks else cfg.checks
    unknown = [c for c in selected if c not in ALL_CHECKS]
    if unknown:
        print(f"unknown checks: {','.join(unknown)}; "
              f"available: {','.join(ALL_CHECKS)},all", file=sys.stderr)
        return 2
    try:
        poly, part = _setup(cfg)
    except (FuchsianError, ValueError) as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return 2

    results: dict[str, dict] = {}
    tols = tolerances.active()
    if "polygon" in selected:
        rep = validate_polygon(poly)
        results["polygon"] = rep.to_dict()
    if "cycles" in selected:
        worst, rows = 0.0, []
        for k in poly.elliptic_indices():
            data = cycle(poly, part, k)
            res = verify_matching(poly, part, k, data)
            worst = max(worst, res, data.matching_residual)
            rows.append({"vertex": k, "order": data.order, "J": data.J,
                         "I": data.I, "degenerate": data.degenerate,
                         "end_of_cycle": data.end_of_cycle.theta,
                         "residual": res})
        results["cycles"] = {"passed": worst < tols.residual,
                             "residual": worst, "vertices": rows}
    if "markov" in selected:
        rep = markov_check(poly, part, max_steps=10_000)
        results["markov"] = rep.to_dict()
    if "bijectivity" in selected:
        with warnings.catch_warnings(record=True) as caught:
            warnings.simplefilter("always", PartitionOutOfGuaranteeRange)
            dom = build_attractor(poly, part)
        rep = verify_bijectivity(poly, part, dom)
        results["bijectivity"] = rep.to_dict()
        if not dom.guarantee:
            results["bijectivity"]["warning"] = (
                "partition outside guarantee range; bijectivity holds but "
                "global attraction is only conjectural here")
            print("warning: partition outside [P,Q] guarantee range",
                  file=sys.stderr)

    ok = all(r.get("passed", False) for r in results.values())
    out = {"config": cfg.to_dict(), "passed": ok, "results": results}
    _write(cfg.report_out, json.dumps(out, indent=2))
    for name, r in results.items():
        print(f"{name}: {'pass' if r.get('passed') else 'FAIL'}")
    return 0 if ok else 1


def cmd_simulate(cfg: RunConfig) -> int:
    if cfg.samples < 1:
        print("samples must be >= 1", file=sys.stderr)
        return 2
    try:
        poly, part = _setup(cfg)
    except (FuchsianError, ValueError) as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return 2
    with warnings.catch_warnings():
        warnings.simplefilter("ignore" if cfg.survey else "default",
                              PartitionOutOfGuaranteeRange)
        dom = build_attractor(poly, part)
    traces = simulate_entry(poly, part, dom, cfg.samples, cfg.seed,
                            cfg.max_iters, cfg.buffer)
    _write(cfg.csv_out, traces_to_csv(traces, cfg.seed))
    entered = [t for t in traces if t.entered]
    ks = [t.K for t in entered]
    print(f"samples={cfg.samples} entered={len(entered)} "
          f"max_K={max(ks) if ks else -1} "
          f"mean_K={sum(ks)/len(ks) if ks else float('nan'):.3f}")
    if cfg.survey:
        return 0
    return 0 if len(entered) == cfg.samples else 1


def cmd_cycle(cfg: RunConfig) -> int:
    try:
        poly, part = _setup(cfg)
    except (FuchsianError, ValueError) as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return 2
    if not (0 <= cfg.vertex < poly.n_sides):
        print(f"vertex index must be in [0, {poly.n_sides})", file=sys.stderr)
        return 2
    try:
        data = cycle(poly, part, cfg.vertex)
    except NotElliptic as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return 2
    res = verify_matching(poly, part, cfg.vertex, data)
    out = {"vertex": data.vertex, "order": data.order, "J": data.J,
           "I": data.I, "end_of_cycle": data.end_of_cycle.theta,
           "degenerate": data.degenerate, "matching_residual": res}
    text = json.dumps(out, indent=2)
    print(text)
    _write(cfg.report_out, text)
    return 0


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="fuchsian",
        description="canonical polygons, boundary maps, and attractors "
                    "for signatures with a cusp")
    sub = ap.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--signature", required=True,
                       help='signature "g;m1,...,mr;t", e.g. "0;2,3;1"')
        p.add_argument("--partition", default="midpoint",
                       help="left|right|midpoint|custom=a1,a2,...")
        p.add_argument("--report", dest="report_out", default="")
        p.add_argument("--tolerance-profile", dest="tolerance_profile",
                       default=os.environ.get("FUCHSIAN_TOLERANCE_PROFILE",
                                              "default"))

    p = sub.add_parser("polygon", help="build and validate the polygon")
    common(p)
    p.add_argument("--json", dest="json_out", default="")
    p.add_argument("--svg", dest="svg_out", default="")
    p.add_argument("--attractor-svg", dest="attractor_svg_out", default="")

    p = sub.add_parser("verify", help="run structural/dynamical checks")
    common(p)
    p.add_argument("--checks", default="all",
                   help=f"comma list from {','.join(ALL_CHECKS)} or 'all'")

    p = sub.add_parser("simulate", help="seeded attractor-entry simulation")
    common(p)
    p.add_argument("--samples", type=int, default=1000)
    p.add_argument("--seed", type=int, default=42)
    p.add_argument("--max-iters", dest="max_iters", type=int, default=100_000)
    p.add_argument("--buffer", type=float, default=1e-6)
    p.add_argument("--survey", action="store_true",
                   help="statistics only; always exit 0")
    p.add_argument("--csv", dest="csv_out", default="")

    p = sub.add_parser("cycle", help="cycle data of one elliptic vertex")
    common(p)
    p.add_argument("--vertex", type=int, required=True)
    return ap


def config_from_args(ns: argparse.Namespace) -> RunConfig:
    checks = tuple(s for s in getattr(ns, "checks", "all").split(",") if s)
    return RunConfig(
        signature=ns.signature,
        partition=ns.partition,
        seed=getattr(ns, "seed", 42),
        samples=getattr(ns, "samples", 1000),
        max_iters=getattr(ns, "max_iters", 100_000),
        buffer=getattr(ns, "buffer", 1e-6),
        checks=checks,
        survey=getattr(ns, "survey", False),
        vertex=getattr(ns, "vertex", -1),
        json_out=getattr(ns, "json_out", ""),
        svg_out=getattr(ns, "svg_out", ""),
        attractor_svg_out=getattr(ns, "attractor_svg_out", ""),
        report_out=getattr(ns, "report_out", ""),
        csv_out=getattr(ns, "csv_out", ""),
        tolerance_profile=ns.tolerance_profile,
    )


def main(argv: list[str] | None = None) -> int:
    ns = build_parser().parse_args(argv)
    cfg = config_from_args(ns)
    try:
        handler = {"polygon": cmd_polygon, "verify": cmd_verify,
                   "simulate": cmd_simulate, "cycle": cmd_cycle}[ns.command]
        return handler(cfg)
    except KeyError:  # pragma: no cover
        return 2


if __name__ == "__main__":
    sys.exit(main())
