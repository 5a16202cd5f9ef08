"""Command line entry point: generate, metrics, simulate, sweep, surface,
regress."""

from __future__ import annotations

import argparse
import json
import sys

import numpy as np

from . import fileio
from .dynamics import BehaviorDistribution, ElectionConfig, sample_strategies, \
    run_election
from .experiments import ols_fit, run_batch, surface_mean_abs_gap
from .graphs import HrcParams, assign_parties_spa, build_caveman, generate_hrc
from .metrics import (AssortmentConvention, GapConvention, influence_gap,
                      metric_report)


def _parse_counts(text: str) -> dict:
    counts = {}
    for part in text.split(","):
        party, _, value = part.partition("=")
        if not value:
            raise argparse.ArgumentTypeError(
                "counts look like 'red=10,blue=10'")
        counts[party.strip()] = int(value)
    return counts


def _float_list(text: str):
    return tuple(float(x) for x in text.split(","))


def _load_graph_and_assignment(args):
    """From --graph/--assignment files, or generated from --l/--k/... flags."""
    if args.graph and args.assignment:
        return fileio.read_graph(args.graph), fileio.read_assignment(args.assignment)
    if args.graph or args.assignment:
        raise SystemExit("--graph and --assignment must be given together")
    if args.counts is None or args.seed is None:
        raise SystemExit("either give --graph/--assignment or generator "
                         "flags (--l --k --p0 --homophily --counts --seed)")
    rng = np.random.default_rng(args.seed)
    base = build_caveman(args.l, args.k)
    assignment = assign_parties_spa(base, args.counts, rng)
    params = HrcParams(args.l, args.k, args.p0, args.homophily)
    return generate_hrc(params, assignment, rng), assignment


def _add_generator_flags(sub, seed_required):
    sub.add_argument("--l", type=int, default=4, help="number of cliques")
    sub.add_argument("--k", type=int, default=5, help="clique size")
    sub.add_argument("--p0", type=float, default=0.0, help="rewire probability")
    sub.add_argument("--homophily", type=float, default=0.5)
    sub.add_argument("--counts", type=_parse_counts, default=None,
                     help="per-party voter counts, e.g. 'red=10,blue=10'")
    sub.add_argument("--seed", type=int, required=seed_required)


def _cmd_generate(args):
    if args.counts is None:
        raise SystemExit("--counts is required")
    rng = np.random.default_rng(args.seed)
    base = build_caveman(args.l, args.k)
    assignment = assign_parties_spa(base, args.counts, rng)
    params = HrcParams(args.l, args.k, args.p0, args.homophily)
    graph = generate_hrc(params, assignment, rng)
    fileio.write_graph(args.graph_out, graph)
    fileio.write_assignment(args.assignment_out, assignment)
    print(f"wrote {args.graph_out} ({graph.edge_count} edges) and "
          f"{args.assignment_out} ({assignment.node_count} voters)")


def _cmd_metrics(args):
    graph, assignment = _load_graph_and_assignment(args)
    aconv = AssortmentConvention(args.assortment_convention)
    gconv = GapConvention(args.gap_convention)
    reference = args.party or ("red" if "red" in assignment.parties
                               else assignment.parties[0])
    report = metric_report(graph, assignment, aconv, reference_party=reference)
    rows = []
    wanted = set(args.metric) if args.metric else {"influence-gap", "majority",
                                                   "dvs", "eg"}
    if "influence-gap" in wanted:
        for party in assignment.parties:
            values = influence_gap(graph, assignment, party, aconv, gconv)
            rows.append({"metric": "influence-gap", "party": party,
                         "value": sorted(float(v) for v in values),
                         "assortment_convention": aconv.value,
                         "gap_convention": gconv.value})
    two_party = assignment.n_parties == 2
    simple = {"majority": report.majority, "dvs": report.voter_skew,
              "eg": report.efficiency}
    for name in ("majority", "dvs", "eg"):
        if name in wanted and two_party:
            rows.append({"metric": name, "party": reference,
                         "value": float(simple[name])})
    out = open(args.out, "w") if args.out else sys.stdout
    try:
        if args.format == "json":
            for row in rows:
                out.write(json.dumps(row) + "\n")
        else:
            out.write("metric,party,value,assortment_convention,gap_convention\n")
            for row in rows:
                value = row["value"]
                if isinstance(value, list):
                    value = ";".join(repr(v) for v in value)
                else:
                    value = repr(value)
                out.write(f"{row['metric']},{row['party']},{value},"
                          f"{row.get('assortment_convention', '')},"
                          f"{row.get('gap_convention', '')}\n")
    finally:
        if args.out:
            out.close()


def _cmd_simulate(args):
    graph, assignment = _load_graph_and_assignment(args)
    config = ElectionConfig(args.duration, args.cutoff, args.tick,
                            args.victory_threshold)
    empirical = (fileio.read_strategy_samples(args.strategy_file)
                 if args.strategy_file else None)
    behavior = (BehaviorDistribution(empirical=empirical)
                if args.concentration is None else
                BehaviorDistribution(concentration=args.concentration,
                                     empirical=empirical))
    rng = np.random.default_rng(args.sim_seed if args.sim_seed is not None
                                else args.seed)
    strategies = sample_strategies(behavior, graph.node_count, rng)
    outcome = run_election(graph, assignment, config, strategies, rng,
                           stick_to=args.stick_to)
    result = {
        "parties": list(outcome.parties),
        "final_shares": outcome.final_shares,
        "final_skews": outcome.final_skews,
        "winner": outcome.winner,
        "deadlock": outcome.is_deadlock,
        "ticks": config.n_ticks,
        "victory_threshold": config.victory_threshold,
    }
    text = json.dumps(result, indent=2)
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text + "\n")
    else:
        print(text)
    if args.trajectory_out:
        fileio.write_trajectory(args.trajectory_out, outcome, config.tick_s)


def _cmd_sweep(args):
    overrides = {
        "seed": args.seed, "l": args.l, "k": args.k,
        "p0": _float_list(args.p0) if args.p0 else None,
        "h": _float_list(args.h) if args.h else None,
        "elections": args.elections,
        "parties": tuple(args.parties.split(",")) if args.parties else None,
        "red_min": args.red_min, "red_max": args.red_max,
        "min_count": args.min_count,
        "victory_threshold": args.victory_threshold,
        "duration": args.duration, "cutoff": args.cutoff, "tick": args.tick,
        "concentration": args.concentration,
        "strategy_file": args.strategy_file,
        "stick_to": args.stick_to,
    }
    config = fileio.load_sweep_config(args.config, overrides)
    records = run_batch(config, workers=args.workers)
    fileio.write_records(args.out, records)
    print(f"wrote {args.out}")


def _cmd_surface(args):
    points = surface_mean_abs_gap(_float_list(args.h), _float_list(args.p0),
                                  args.samples, args.l, args.k, args.seed)
    fileio.write_surface(args.out, points)
    print(f"wrote {args.out} ({len(points)} grid points)")


def _cmd_regress(args):
    records = fileio.read_records(args.records)
    rows = [r for r in records if r.majority is not None
            and "red" in r.gaps and "red" in r.final_skews]
    if not rows:
        raise SystemExit("records contain no two-party rows with majority and gap")
    majority = np.array([r.majority for r in rows])
    gap = np.array([r.gaps["red"] for r in rows])
    skew = np.array([r.final_skews["red"] for r in rows])
    models = {
        "majority": ols_fit(majority, skew, args.train_fraction, args.seed),
        "influence_gap": ols_fit(gap, skew, args.train_fraction, args.seed),
        "joint": ols_fit(np.column_stack([majority, gap]), skew,
                         args.train_fraction, args.seed),
    }
    result = {name: {"coefficients": list(fit.coefficients),
                     "intercept": fit.intercept,
                     "r_squared": fit.r_squared,
                     "train_fraction": fit.train_fraction,
                     "n_train": fit.n_train, "n_test": fit.n_test}
              for name, fit in models.items()}
    text = json.dumps(result, indent=2)
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text + "\n")
    else:
        print(text)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="cavevote",
        description="Elections and influence metrics on community graphs")
    subs = parser.add_subparsers(dest="command", required=True)

    gen = subs.add_parser("generate", help="write graph and assignment files")
    _add_generator_flags(gen, seed_required=True)
    gen.add_argument("--graph-out", required=True)
    gen.add_argument("--assignment-out", required=True)
    gen.set_defaults(func=_cmd_generate)

    met = subs.add_parser("metrics", help="metric report for one graph")
    met.add_argument("--graph")
    met.add_argument("--assignment")
    _add_generator_flags(met, seed_required=False)
    met.add_argument("--metric", action="append",
                     choices=["influence-gap", "majority", "dvs", "eg"])
    met.add_argument("--party", help="reference party for majority/dvs/eg "
                                     "(default: red when present)")
    met.add_argument("--assortment-convention", default="dominant-negative",
                     choices=[c.value for c in AssortmentConvention])
    met.add_argument("--gap-convention", default="vs-most-influential",
                     choices=[c.value for c in GapConvention])
    met.add_argument("--format", default="json", choices=["json", "csv"])
    met.add_argument("--out")
    met.set_defaults(func=_cmd_metrics)

    sim = subs.add_parser("simulate", help="run one election")
    sim.add_argument("--graph")
    sim.add_argument("--assignment")
    _add_generator_flags(sim, seed_required=False)
    sim.add_argument("--sim-seed", type=int, default=None,
                     help="seed for strategies and ticks when the graph "
                          "comes from files (defaults to --seed)")
    sim.add_argument("--victory-threshold", type=float, default=0.6)
    sim.add_argument("--duration", type=float, default=240.0)
    sim.add_argument("--cutoff", type=float, default=83.0)
    sim.add_argument("--tick", type=float, default=3.3)
    sim.add_argument("--concentration", type=float, default=None)
    sim.add_argument("--strategy-file")
    sim.add_argument("--stick-to", dest="stick_to", default="assigned",
                     choices=["assigned", "current"])
    sim.add_argument("--out")
    sim.add_argument("--trajectory-out")
    sim.set_defaults(func=_cmd_simulate)

    swp = subs.add_parser("sweep", help="batch elections over a (p0, h) grid")
    swp.add_argument("--config", help="flat TOML config file")
    swp.add_argument("--seed", type=int, required=True)
    swp.add_argument("--out", required=True)
    swp.add_argument("--workers", type=int, default=1)
    swp.add_argument("--l", type=int)
    swp.add_argument("--k", type=int)
    swp.add_argument("--p0", help="comma list, e.g. 0,0.4,1")
    swp.add_argument("--h", help="comma list")
    swp.add_argument("--elections", type=int)
    swp.add_argument("--parties", help="comma list of party names")
    swp.add_argument("--red-min", type=int, dest="red_min")
    swp.add_argument("--red-max", type=int, dest="red_max")
    swp.add_argument("--min-count", type=int, dest="min_count")
    swp.add_argument("--victory-threshold", type=float)
    swp.add_argument("--duration", type=float)
    swp.add_argument("--cutoff", type=float)
    swp.add_argument("--tick", type=float)
    swp.add_argument("--concentration", type=float)
    swp.add_argument("--strategy-file")
    swp.add_argument("--stick-to", dest="stick_to",
                     choices=["assigned", "current"])
    swp.set_defaults(func=_cmd_sweep)

    srf = subs.add_parser("surface", help="mean |influence gap| over the grid")
    srf.add_argument("--h", default="0,0.1,0.2,0.3,0.4,0.5,0.6,0.7,0.8,0.9,1")
    srf.add_argument("--p0", default="0,0.25,0.5,0.75,1")
    srf.add_argument("--samples", type=int, default=300)
    srf.add_argument("--l", type=int, default=25)
    srf.add_argument("--k", type=int, default=4)
    srf.add_argument("--seed", type=int, required=True)
    srf.add_argument("--out", required=True)
    srf.set_defaults(func=_cmd_surface)

    reg = subs.add_parser("regress", help="fit skew models to a records CSV")
    reg.add_argument("--records", required=True)
    reg.add_argument("--train-fraction", type=float, default=0.7)
    reg.add_argument("--seed", type=int, default=0)
    reg.add_argument("--out")
    reg.set_defaults(func=_cmd_regress)

    return parser


def main(argv=None):
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    main()
