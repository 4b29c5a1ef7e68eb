"""Command-line front end.

Exit codes: 0 decided, 1 input error, 2 precision exhausted, 3 undecided threshold.
"""

from __future__ import annotations

import argparse
import json
import re
import sys
import time
from collections import Counter
from dataclasses import dataclass, field
from decimal import Decimal, localcontext
from fractions import Fraction
from pathlib import Path
from typing import Sequence

from . import __version__
from .errors import BpCheckError, PrecisionExhaustedError, UndecidedError
from .parity import analyse, good_result, load_automaton, product
from .pps import Enclosure, FixedPointSolver, SolverSettings, build_af_pps
from .process import BranchingProcess, load_process, type_name
from .pttl import Checker, is_qualitative, parse_formula
from .pttl.syntax import format_formula
from .sampling import GENERATOR, af_hits, binomial_half_width, Estimate, sample_prefixes

EXIT_OK = 0
EXIT_INPUT = 1
EXIT_PRECISION = 2
EXIT_UNDECIDED = 3

DECIMAL_DIGITS = 20


@dataclass(frozen=True)
class RunConfig:
    epsilon: Fraction = Fraction(1, 10**9)
    budget: int = 10**6
    samples: int = 1000
    depth: int = 10
    seed: int = 0
    machine: bool = False
    max_nodes: int = 100_000

    def __post_init__(self):
        if self.epsilon <= 0:
            raise ValueError("epsilon must be positive")
        if self.budget < 1 or self.samples < 1 or self.max_nodes < 1:
            raise ValueError("budgets must be positive")
        if self.depth < 0:
            raise ValueError("depth must be nonnegative")

    def settings(self) -> SolverSettings:
        return SolverSettings(epsilon=self.epsilon, max_iterations=self.budget)

    def as_dict(self) -> dict:
        return {
            "epsilon": rational(self.epsilon),
            "budget": self.budget,
            "samples": self.samples,
            "depth": self.depth,
            "seed": self.seed,
            "max_nodes": self.max_nodes,
        }


@dataclass
class Report:
    command: str
    inputs: dict
    config: RunConfig
    records: list = field(default_factory=list)
    extra: dict = field(default_factory=dict)
    exit_code: int = EXIT_OK
    error: str | None = None
    elapsed: float = 0.0

    def document(self) -> dict:
        doc = {
            "tool": "bpcheck",
            "version": __version__,
            "command": self.command,
            "inputs": self.inputs,
            "config": self.config.as_dict(),
            "exit_code": self.exit_code,
            "records": self.records,
        }
        doc.update(self.extra)
        if self.error is not None:
            doc["error"] = self.error
        return doc


# -- value rendering ---------------------------------------------------------


def decimal(value: Fraction, digits: int = DECIMAL_DIGITS) -> str:
    value = Fraction(value)
    with localcontext() as ctx:
        ctx.prec = digits
        return str(Decimal(value.numerator) / Decimal(value.denominator))


def rational(value: Fraction) -> dict:
    value = Fraction(value)
    return {"rational": f"{value.numerator}/{value.denominator}", "decimal": decimal(value)}


def enclosure_dict(enc: Enclosure) -> dict:
    return {
        "lower": rational(enc.lower),
        "upper": rational(enc.upper),
        "exact": None if enc.exact is None else rational(enc.exact),
        "width": decimal(enc.width, 6),
    }


def names(types) -> list[str]:
    return sorted(type_name(t) for t in types)


# -- helpers -----------------------------------------------------------------


def split_types(text: str | None) -> list[str]:
    if text is None:
        return []
    return [t for t in re.split(r"[\s,]+", text.strip()) if t]


def resolve_types(bp: BranchingProcess, wanted: Sequence[str]) -> list:
    by_name = {type_name(t): t for t in bp.types}
    out = []
    for name in wanted:
        if name not in by_name:
            bp.require(name)  # raises UnknownTypeError
        out.append(by_name[name])
    return out


def starts(bp: BranchingProcess, start: str | None) -> list:
    return resolve_types(bp, [start]) if start is not None else list(bp.types)


def read_formula(text: str) -> str:
    path = Path(text)
    if text.endswith(".pttl") and path.is_file():
        return path.read_text(encoding="utf-8").strip()
    return text


# -- commands ----------------------------------------------------------------


def _certified(solver: FixedPointSolver, i: int) -> dict | None:
    """The exact value when a small-denominator fixed point is proven equal to the LFP."""
    value = solver.exact_value(i)
    return None if value is None else rational(value)


def cmd_check_parity(process_file, automaton_file, start, config: RunConfig,
                     show_sets: bool = False) -> Report:
    bp = load_process(process_file)
    aut = load_automaton(automaton_file, alphabet=bp.types).for_process(bp)
    report = Report("check-parity", {"process": str(process_file),
                                     "automaton": str(automaton_file)}, config)
    cbp = product(bp, aut)
    analysis = analyse(cbp)
    solver = FixedPointSolver(build_af_pps(cbp, analysis.good_region), config.settings())
    for x in starts(bp, start):
        res = good_result(cbp, (x, aut.initial), config.settings(), solver)
        report.records.append({
            "query": "accept",
            "type": type_name(x),
            "verdict": res.is_one,
            "is_zero": res.is_zero,
            "is_one": res.is_one,
            "method": res.method,
            "enclosure": enclosure_dict(res.enclosure),
            "certified_value": _certified(solver, solver.pps.index((x, aut.initial))),
        })
    report.extra["numeric_runs"] = solver.numeric_runs
    if show_sets:
        report.extra["sets"] = {
            "n_sets": {type_name(x): names(s) for x, s in analysis.n_sets.items()},
            "clean": names(analysis.clean),
            "good": names(analysis.good_region),
        }
    return report


def cmd_check_pttl(process_file, formula_text, start, config: RunConfig) -> Report:
    bp = load_process(process_file)
    phi = parse_formula(read_formula(formula_text))
    report = Report("check-pttl", {"process": str(process_file),
                                   "formula": format_formula(phi)}, config)
    report.extra["qualitative_fragment"] = is_qualitative(phi)
    checker = Checker(bp, config.settings())
    try:
        sat = checker.sat(phi)
    except UndecidedError as exc:
        report.exit_code = EXIT_UNDECIDED
        report.error = str(exc)
        report.records.append({
            "query": "formula",
            "type": type_name(exc.type),
            "verdict": "unknown",
            "subformula": exc.formula,
            "enclosure": enclosure_dict(exc.enclosure),
        })
        report.extra["numeric_runs"] = checker.numeric_runs
        return report
    for x in starts(bp, start):
        report.records.append({"query": "formula", "type": type_name(x), "verdict": sat[x]})
    report.extra["probabilities"] = [
        {
            "subformula": rec.formula,
            "types": {type_name(x): {"method": rec.method[x],
                                     "verdict": rec.verdict[x],
                                     "enclosure": enclosure_dict(enc)}
                      for x, enc in rec.probability.items()},
        }
        for rec in checker.records.values()
    ]
    report.extra["numeric_runs"] = checker.numeric_runs
    return report


def cmd_solve(process_file, targets: Sequence[str], start, config: RunConfig,
              dump_pps: bool = False) -> Report:
    bp = load_process(process_file)
    target_types = resolve_types(bp, targets)
    report = Report("solve", {"process": str(process_file),
                              "targets": names(target_types)}, config)
    pps = build_af_pps(bp, target_types)
    solver = FixedPointSolver(pps, config.settings())
    for x in starts(bp, start):
        i = pps.index(x)
        if solver.is_qualitative(i):
            enc, method = Enclosure.point(solver.exact_decided(i)), "qualitative"
        else:
            enc, method = solver.enclosure(i), "numeric"
        report.records.append({
            "query": "af",
            "type": type_name(x),
            "is_zero": enc.exact == 0,
            "is_one": enc.exact == 1,
            "method": method,
            "enclosure": enclosure_dict(enc),
            "certified_value": _certified(solver, i),
        })
    report.extra["numeric_runs"] = solver.numeric_runs
    if dump_pps:
        report.extra["pps"] = pps.dump()
    return report


def cmd_sample(process_file, start, targets: Sequence[str], config: RunConfig) -> Report:
    bp = load_process(process_file)
    (x,) = resolve_types(bp, [start])
    target_types = resolve_types(bp, targets)
    report = Report("sample", {"process": str(process_file), "start": type_name(x),
                               "targets": names(target_types) if targets else None}, config)
    report.extra["generator"] = GENERATOR
    indices = range(config.samples)
    if targets:
        hits = 0
        for i, (ok, explored) in zip(indices, af_hits(bp, x, target_types, config.depth,
                                                       config.seed, indices)):
            hits += ok
            report.records.append({"index": i, "hit": ok, "explored": explored})
        est = Estimate(Fraction(hits, config.samples), binomial_half_width(hits, config.samples),
                       config.samples, config.seed)
        report.extra["estimate"] = {
            "point": rational(est.point),
            "half_width": decimal(est.half_width, 8),
            "lower": decimal(est.lower, 8),
            "upper": decimal(est.upper, 8),
            "samples": est.samples,
            "seed": est.seed,
            "kind": "lower-bound estimator of Pr[AF targets] at finite depth",
        }
        return report
    try:
        for i, t in zip(indices, sample_prefixes(bp, x, config.depth, config.seed, indices,
                                                 config.max_nodes)):
            leaves = t.leaves()
            report.records.append({
                "index": i,
                "nodes": len(t.nodes),
                "internal": len(t.nodes) - len(leaves),
                "height": t.depth(),
                "frontier": dict(sorted(Counter(type_name(t.label[w]) for w in leaves).items())),
            })
    except ValueError as exc:
        raise BpCheckError(f"{exc}; lower --depth or raise --max-nodes") from None
    return report


def cmd_validate(process_file, automaton_file, config: RunConfig) -> Report:
    bp = load_process(process_file)
    inputs = {"process": str(process_file)}
    info = {
        "types": [type_name(t) for t in bp.types],
        "rules": len(bp.rules),
        "max_arity": bp.max_arity,
        "propositions": sorted(bp.propositions),
        "coloured": all(t in bp.colours for t in bp.types),
    }
    if automaton_file is not None:
        inputs["automaton"] = str(automaton_file)
        aut = load_automaton(automaton_file, alphabet=bp.types).for_process(bp)
        product(bp, aut)  # alphabet and arity compatibility
        info["automaton_states"] = len(aut.states)
    report = Report("validate", inputs, config)
    report.records.append({"query": "validate", "valid": True, **info})
    return report


# -- output ------------------------------------------------------------------


def render_human(report: Report) -> str:
    out = [f"{report.command}: " + ", ".join(f"{k}={v}" for k, v in report.inputs.items()
                                              if v is not None)]
    for rec in report.records:
        if report.command == "check-parity":
            enc = rec["enclosure"]
            out.append(f"  {rec['type']}: Pr[accepted] {_enc_text(enc)} ({rec['method']})"
                       f"{_certified_text(rec)}; almost sure: {_yes(rec['verdict'])}")
        elif report.command == "check-pttl":
            line = f"  {rec['type']}: {_verdict(rec['verdict'])}"
            if rec["verdict"] == "unknown":
                line += f" for {rec['subformula']}, Pr {_enc_text(rec['enclosure'])}"
            out.append(line)
        elif report.command == "solve":
            out.append(f"  {rec['type']}: Pr[AF targets] {_enc_text(rec['enclosure'])} "
                       f"({rec['method']}){_certified_text(rec)}")
        elif report.command == "validate":
            out.append(f"  valid: {len(rec['types'])} types, {rec['rules']} rules, "
                       f"max arity {rec['max_arity']}")
    if report.command == "sample" and report.records:
        out.extend(_sample_summary(report))
    sets = report.extra.get("sets")
    if sets:
        for x, s in sets["n_sets"].items():
            out.append(f"  N[{x}] = {{{', '.join(s)}}}")
        out.append(f"  clean = {{{', '.join(sets['clean'])}}}")
        out.append(f"  G = {{{', '.join(sets['good'])}}}")
    if "pps" in report.extra:
        out.append(report.extra["pps"].rstrip("\n"))
    out.append(f"time: {report.elapsed:.3f}s")
    return "\n".join(out) + "\n"


def _enc_text(enc: dict) -> str:
    if enc["exact"] is not None:
        return f"= {enc['exact']['rational'].removesuffix('/1')}"
    return f"in [{enc['lower']['decimal']}, {enc['upper']['decimal']}] (width {enc['width']})"


def _certified_text(rec: dict) -> str:
    value = rec.get("certified_value")
    if value is None or rec["enclosure"]["exact"] is not None:
        return ""
    return f", exactly {value['rational']}"


def _yes(flag: bool) -> str:
    return "yes" if flag else "no"


def _verdict(v) -> str:
    return v if isinstance(v, str) else ("true" if v else "false")


def _sample_summary(report: Report) -> list[str]:
    recs = report.records
    est = report.extra.get("estimate")
    if est is not None:
        explored = sum(r["explored"] for r in recs)
        return [f"  samples: {len(recs)}, nodes explored: {explored}",
                f"  estimate: {est['point']['decimal'][:10]} +/- {est['half_width']} (99%)"]
    nodes = sum(r["nodes"] for r in recs)
    return [f"  samples: {len(recs)}, mean nodes: {decimal(Fraction(nodes, len(recs)), 6)}"]


def emit(report: Report, machine: bool, stream=None) -> None:
    stream = stream or sys.stdout
    if machine:
        json.dump(report.document(), stream, indent=2, sort_keys=False)
        stream.write("\n")
    else:
        stream.write(render_human(report))


# -- argument parsing ---------------------------------------------------------


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_INPUT, f"{self.prog}: error: {message}\n")


def _fraction(text: str) -> Fraction:
    try:
        value = Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"not a rational number: {text!r}") from None
    if value <= 0:
        raise argparse.ArgumentTypeError("must be positive")
    return value


def _positive(text: str) -> int:
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError("must be positive")
    return value


def _nonneg(text: str) -> int:
    value = int(text)
    if value < 0:
        raise argparse.ArgumentTypeError("must be nonnegative")
    return value


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--epsilon", type=_fraction, default=Fraction(1, 10**9),
                        help="enclosure width target (default 1e-9)")
    common.add_argument("--budget", type=_positive, default=10**6,
                        help="iteration budget for the fixed-point solver")
    common.add_argument("--json", action="store_true", help="machine-readable output")

    parser = _Parser(prog="bpcheck", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"bpcheck {__version__}")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("check-parity", parents=[common],
                       help="probability that a random tree is accepted by a parity automaton")
    p.add_argument("process")
    p.add_argument("automaton")
    p.add_argument("--start", help="start type (default: every type)")
    p.add_argument("--sets", action="store_true", help="also report N, clean and G sets")

    p = sub.add_parser("check-pttl", parents=[common], help="model check a PTTL formula")
    p.add_argument("process")
    p.add_argument("formula", help="formula text, or a .pttl file")
    p.add_argument("--start", help="report only this type")

    p = sub.add_parser("solve", parents=[common],
                       help="probability that every branch reaches a target type")
    p.add_argument("process")
    p.add_argument("--targets", required=True, help="target types, comma or space separated")
    p.add_argument("--start", help="report only this type")
    p.add_argument("--dump-pps", action="store_true", help="include the equation system")

    p = sub.add_parser("sample", parents=[common], help="Monte Carlo sampling of random trees")
    p.add_argument("process")
    p.add_argument("--start", required=True)
    p.add_argument("--depth", type=_nonneg, default=10)
    p.add_argument("--samples", type=_positive, default=1000)
    p.add_argument("--seed", type=_nonneg, default=0)
    p.add_argument("--targets", help="estimate Pr[AF targets] instead of prefix statistics")
    p.add_argument("--max-nodes", type=_positive, default=100_000,
                   help="refuse prefixes larger than this")

    p = sub.add_parser("validate", parents=[common], help="check input files")
    p.add_argument("process")
    p.add_argument("automaton", nargs="?")
    return parser


def _config(args) -> RunConfig:
    return RunConfig(
        epsilon=args.epsilon,
        budget=args.budget,
        samples=getattr(args, "samples", 1000),
        depth=getattr(args, "depth", 10),
        seed=getattr(args, "seed", 0),
        machine=args.json,
        max_nodes=getattr(args, "max_nodes", 100_000),
    )


def run(args, config: RunConfig) -> Report:
    if args.command == "check-parity":
        return cmd_check_parity(args.process, args.automaton, args.start, config, args.sets)
    if args.command == "check-pttl":
        return cmd_check_pttl(args.process, args.formula, args.start, config)
    if args.command == "solve":
        return cmd_solve(args.process, split_types(args.targets), args.start, config,
                         args.dump_pps)
    if args.command == "sample":
        return cmd_sample(args.process, args.start, split_types(args.targets), config)
    return cmd_validate(args.process, args.automaton, config)


def _error_text(exc: BaseException) -> str:
    text = str(exc)
    source, line = getattr(exc, "source", None), getattr(exc, "line", None)
    if source is not None and not text.startswith(f"{source}:"):
        where = f"{source}:{line}:" if line is not None else f"{source}:"
        text = f"{where} {text}"
    return text


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    config = _config(args)
    inputs = {k: getattr(args, k) for k in ("process", "automaton", "formula")
              if getattr(args, k, None) is not None}
    began = time.perf_counter()
    try:
        report = run(args, config)
    except PrecisionExhaustedError as exc:
        report = Report(args.command, inputs, config, exit_code=EXIT_PRECISION, error=str(exc))
    except (BpCheckError, OSError, ValueError, KeyError) as exc:
        report = Report(args.command, inputs, config, exit_code=EXIT_INPUT,
                        error=_error_text(exc))
    report.elapsed = time.perf_counter() - began
    if report.error is not None:
        print(f"bpcheck: {report.error}", file=sys.stderr)
    emit(report, config.machine)
    return report.exit_code


if __name__ == "__main__":
    sys.exit(main())
