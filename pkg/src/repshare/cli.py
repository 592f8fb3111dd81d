"""Command-line entry points.

Exit status: 0 success, 1 golden-value or validation failure, 2 I/O failure.
"""

from __future__ import annotations

import argparse
import json
import logging
import os
import sys
from dataclasses import replace
from pathlib import Path

from .aggregation import Contributor, aggregate_contributors
from .casestudy import format_report, run_case_study
from .core import EngineParams, Opinion, ReputationError
from .filtering import classify, second_moment
from .persistence import load_ledger
from .report import OutputError, RunReport, emit_results
from .scenario import digest_bytes, load_scenario_bytes
from .simulation import simulate
from .weighting import BehaviorStats, advisor_weight

EXIT_OK, EXIT_FAILURE, EXIT_IO = 0, 1, 2
OUT_DIR_ENV = "REPSHARE_OUT_DIR"

log = logging.getLogger("repshare")


def _out_dir(arg: str | None, default: str | None) -> Path | None:
    value = arg or os.environ.get(OUT_DIR_ENV) or default
    return Path(value) if value else None


def _formats(arg: str) -> set[str]:
    return {f.strip() for f in arg.split(",") if f.strip()}


def cmd_case_study(args) -> int:
    report = run_case_study()
    print(format_report(report))
    out = _out_dir(args.out, None)
    if out is not None:
        for path in emit_results(report, _formats(args.format), out):
            log.info("wrote %s", path)
    if not report.passed:
        print("case study replay does not match the published values", file=sys.stderr)
        return EXIT_FAILURE
    return EXIT_OK


def cmd_simulate(args) -> int:
    path = Path(args.config)
    raw = path.read_bytes()
    config = load_scenario_bytes(raw, path)
    digest_input = raw
    if args.seed is not None:
        config = replace(config, seed=args.seed)
        digest_input = raw + f"\n--seed={args.seed}".encode()
    traces, metrics = simulate(config)
    report = RunReport(
        digest_bytes(digest_input), config.engine, metrics,
        tuple(traces) if args.verbose else None,
    )
    out = _out_dir(args.out, "results")
    written = emit_results(report, _formats(args.format), out)
    liar = metrics.liar_mean_reputation
    honest = metrics.honest_mean_reputation
    print(f"rounds: {len(metrics.rounds)}   sr absent: {sum(r.sr_absent for r in metrics.rounds)}")
    print(f"final mean advisor reputation  liars: {'n/a' if liar is None else f'{liar:.4f}'}"
          f"   honest: {'n/a' if honest is None else f'{honest:.4f}'}")
    print(f"final reputed-list contamination: {metrics.final_contamination:.4f}")
    for p in written:
        print(f"wrote {p}")
    return EXIT_OK


def _read_opinions(path: Path) -> list[Opinion]:
    data = json.loads(path.read_text(encoding="utf-8"))
    if isinstance(data, dict):
        seller = data.get("seller", "s")
        items = data.get("opinions", [])
    else:
        seller, items = "s", data
    return [Opinion(str(o["advisor"]), str(o.get("seller", seller)), o["reported"]) for o in items]


def cmd_filter(args) -> int:
    params = EngineParams()
    if args.config:
        cfg_path = Path(args.config)
        params = load_scenario_bytes(cfg_path.read_bytes(), cfg_path).engine
    params.checked()
    opinions = _read_opinions(Path(args.opinions))
    m2 = second_moment([o.reported for o in opinions], args.individual)
    verdicts = classify(opinions, args.individual, params)
    ledger = load_ledger(args.ledger) if args.ledger else None
    contributors = []
    for v in verdicts:
        if v.honest:
            rec = None if ledger is None else ledger.get(v.opinion.advisor)
            stats = BehaviorStats() if rec is None else rec.stats
            contributors.append(Contributor(v.opinion.advisor, advisor_weight(stats, params), v.opinion.reported))
    result = aggregate_contributors(contributors)
    out = {
        "m2": m2,
        "verdicts": {v.opinion.advisor: v.label.value for v in verdicts},
        "weights": {c.advisor: c.weight for c in result.contributors},
        "or_others": None if result.aggregate is None else float(result.aggregate),
        "unweighted_fallback": result.unweighted_fallback,
    }
    if args.json:
        print(json.dumps(out, indent=2))
    else:
        print(f"second moment: {m2:.4f}")
        for a, label in out["verdicts"].items():
            print(f"  {a}: {label}")
        if out["or_others"] is None:
            print("aggregated shared reputation: absent (no honest opinions)")
        else:
            note = " (unweighted: all weights zero)" if result.unweighted_fallback else ""
            print(f"aggregated shared reputation: {out['or_others']:.4f}{note}")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="repshare", description=__doc__.splitlines()[0])
    parser.add_argument("-v", "--log-level", default="WARNING")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("case-study", help="replay the published case study and check golden values")
    p.add_argument("--out", help=f"output directory (default: ${OUT_DIR_ENV}; no files if unset)")
    p.add_argument("--format", default="csv,json", help="comma-separated subset of csv,json")
    p.set_defaults(func=cmd_case_study)

    p = sub.add_parser("simulate", help="run a market scenario")
    p.add_argument("--config", required=True)
    p.add_argument("--seed", type=int)
    p.add_argument("--out", help=f"output directory (default: ${OUT_DIR_ENV} or ./results)")
    p.add_argument("--format", default="csv,json")
    p.add_argument("--verbose", action="store_true", help="include per-round traces in report.json")
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("filter", help="filter and aggregate one hand-written set of opinions")
    p.add_argument("--opinions", required=True, help="JSON list of {advisor, reported}")
    p.add_argument("--individual", required=True, type=float)
    p.add_argument("--ledger", help="buyer ledger file supplying advisor histories for weights")
    p.add_argument("--config", help="scenario file whose engine block overrides the defaults")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_filter)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=args.log_level.upper(), format="%(levelname)s %(message)s")
    try:
        return args.func(args)
    except OutputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO
    except OSError as exc:
        print(f"error: {exc.filename or ''}: {exc.strerror or exc}", file=sys.stderr)
        return EXIT_IO
    except (ReputationError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_FAILURE


if __name__ == "__main__":
    sys.exit(main())
