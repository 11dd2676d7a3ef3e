"""Command line entry point: ``weylcorr <scenario> [options]``.

Exit status is 0 when every verdict passes, 2 when one fails and 3 on
input or cap errors.
"""
from __future__ import annotations

import argparse
import json
import sys
from typing import Optional, Sequence

from weylcorr import scenarios
from weylcorr.errors import StructuralError, WeylCorrError

EXIT_OK, EXIT_VERDICT, EXIT_INPUT = 0, 2, 3


def _seed(text: str) -> int:
    value = int(text, 0)
    if not 0 <= value < 2**64:
        raise argparse.ArgumentTypeError("seed must fit in an unsigned 64-bit integer")
    return value


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_INPUT, f"{self.prog}: error: {message}\n")


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("json", "dot", "text"), default="json")
    common.add_argument("--seed", type=_seed, default=scenarios.DEFAULT_SEED,
                        help=f"seed for sampled quotients (default {scenarios.DEFAULT_SEED})")
    common.add_argument("--out", metavar="PATH", help="write the report here instead of stdout")
    common.add_argument("--timing", action="store_true",
                        help="fill timing_ms (otherwise null, keeping output reproducible)")

    parser = _Parser(prog="weylcorr", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="scenario", required=True, parser_class=_Parser)

    p = sub.add_parser("flag-building", parents=[common], help="flag building of F_q^n")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--q", type=int, required=True)

    p = sub.add_parser("product", parents=[common], help="product boundary B1 x B2")
    p.add_argument("--m1", type=int, required=True)
    p.add_argument("--m2", type=int, required=True)

    p = sub.add_parser("obstruct", parents=[common], help="flip -> w_long homomorphism search")
    p.add_argument("--source", required=True, help="S<n> or Z2^<r>")
    p.add_argument("--target", required=True, help="S<n>")

    p = sub.add_parser("embed-check", parents=[common], help="check a chamber map")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--q", type=int, required=True)
    p.add_argument("--map", dest="map_spec", required=True,
                   help="identity | matrix:<entries> | random:<seed>")
    return parser


def run(args: argparse.Namespace) -> tuple[dict, float]:
    if args.scenario == "flag-building":
        return scenarios.timed(scenarios.run_flag_building, args.n, args.q, seed=args.seed)
    if args.scenario == "product":
        return scenarios.timed(scenarios.run_product, args.m1, args.m2, seed=args.seed)
    if args.scenario == "obstruct":
        return scenarios.timed(scenarios.run_obstruction, args.source, args.target)
    return scenarios.timed(scenarios.run_embed_check, args.n, args.q, args.map_spec)


def all_pass(report: dict) -> bool:
    return all(v["pass"] for v in report["verdicts"].values())


def to_dot(report: dict) -> str:
    """Both Hasse diagrams side by side; pairing edges are dashed."""
    lattice = report.get("lattice")
    if lattice is None:
        raise WeylCorrError(f"DOT output needs a lattice; scenario {report['scenario']} has none")
    lines = ["digraph closed_lattices {", "  rankdir=BT;", "  node [shape=box, fontsize=10];"]
    kinds = (("subgroup", "closed subgroups"), ("quotient", "closed quotients"))
    for kind, title in kinds:
        lines.append(f"  subgraph cluster_{kind} {{")
        lines.append(f'    label="{title}";')
        for node in lattice["nodes"]:
            if node["kind"] != kind:
                continue
            if kind == "subgroup":
                text = "{" + ", ".join(node["members"]) + "}"
            else:
                text = node.get("label", f"{node['num_blocks']} blocks")
            lines.append(f'    {node["id"]} [label="{node["id"]}: {text}"];')
        for a, b in lattice["hasse"][kind]:
            lines.append(f"    {a} -> {b};")
        lines.append("  }")
    for s, q in lattice["pairing"]:
        lines.append(f"  {s} -> {q} [style=dashed, dir=none, constraint=false];")
    lines.append("}")
    return "\n".join(lines) + "\n"


def to_text(report: dict) -> str:
    out = [f"scenario: {report['scenario']}"]
    out.append("params: " + ", ".join(f"{k}={v}" for k, v in report["params"].items()))
    for key, value in report["counts"].items():
        out.append(f"  {key}: {value}")
    lattice = report.get("lattice")
    if lattice:
        for node in lattice["nodes"]:
            if node["kind"] == "subgroup":
                out.append(f"  {node['id']} subgroup order {node['order']}: {' '.join(node['members'])}")
            else:
                out.append(f"  {node['id']} quotient, {node['num_blocks']} blocks {node.get('label', '')}".rstrip())
        out.append("  pairing: " + ", ".join(f"{s}<->{q}" for s, q in lattice["pairing"]))
    details = report.get("details", {})
    if "cube" in details:
        out.append(f"Boolean cube of dimension {details['cube_dimension']}: {details['cube']}")
    if "obstruction" in details:
        for row in details["homomorphisms"]:
            out.append(f"  hom {row['generator_images']} kernel {{{', '.join(row['kernel'])}}}: {row['case']}")
        out.append(f"superrigidity obstruction (no injective pinned hom): {'yes' if details['obstruction'] else 'no'}")
    if details.get("first_violation"):
        out.append(f"first violation: {json.dumps(details['first_violation'])}")
    for name, v in report["verdicts"].items():
        out.append(f"[{'PASS' if v['pass'] else 'FAIL'}] {name}: {v['method']}")
    if report.get("timing_ms") is not None:
        out.append(f"timing_ms: {report['timing_ms']}")
    return "\n".join(out) + "\n"


def render(report: dict, fmt: str) -> str:
    if fmt == "json":
        return json.dumps(report, indent=2) + "\n"
    if fmt == "dot":
        return to_dot(report)
    return to_text(report)


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        report, elapsed = run(args)
        report["timing_ms"] = round(elapsed, 1) if args.timing else None
        text = render(report, args.format)
    except StructuralError as exc:
        print(f"weylcorr: structural check failed: {exc}", file=sys.stderr)
        return EXIT_VERDICT
    except WeylCorrError as exc:
        print(f"weylcorr: {exc}", file=sys.stderr)
        return EXIT_INPUT
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return EXIT_OK if all_pass(report) else EXIT_VERDICT


if __name__ == "__main__":
    sys.exit(main())
