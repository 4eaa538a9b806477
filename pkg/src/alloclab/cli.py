"""Command-line runner: one subcommand per experiment, each writing report.csv and report.json.

Exit status: 0 when every check passes, 1 when a check fails, 2 for usage
errors and unknown commands, 3 for a malformed run configuration, 4 when a
size cap is hit, 5 for invalid parameters or input files.
"""
from __future__ import annotations

import argparse
import json
import os
import sys
from fractions import Fraction
from pathlib import Path
from typing import Optional, Sequence

from . import constants
from .allocation import AllocationInstance, Objective, evaluate_welfare, validate_family2
from .core import AllocLabError, ResourceLimitError, parse_rational
from .distributions import analyze, make_eta, noisy_eta
from .functions import FunctionTable, dictator, efron_stein, influence_profile, random_mean_function
from .gadgets import (
    build_dictator_test,
    chi_allocation_utilities,
    completeness_floor,
    completeness_utilities,
    soundness_landscape,
    soundness_limit,
    soundness_value,
)
from .reduction import (
    DEFAULT_D,
    DEFAULT_TAU,
    build_gap_instance,
    build_meta_instance,
    gap_no_bound,
    gap_yes_allocation,
    gap_yes_usw,
    limit_ratios,
    no_case_bound,
    no_case_bound_collapsed,
    quartic_grid_minimum,
    quartic_stationary_point,
    theorem_ratios,
    yes_allocation,
    yes_floor,
)
from .report import Report, check, info
from .solvers import DEFAULT_SOLVER_CAP, solve_exact
from .unique_games import (
    Labeling,
    UGInstance,
    decode_labeling,
    decoder_sets,
    planted_instance,
    random_instance,
    satisfaction,
)

OUT_ENV = "ALLOCLAB_OUT_DIR"
DEFAULT_OUT = "alloclab-report"

EXIT_OK = 0
EXIT_CHECK_FAILED = 1
EXIT_USAGE = 2
EXIT_BAD_CONFIG = 3
EXIT_CAP = 4
EXIT_BAD_INPUT = 5


class ConfigError(Exception):
    pass


def rational(text) -> Fraction:
    try:
        return parse_rational(str(text))
    except (ValueError, ZeroDivisionError, AllocLabError) as exc:
        raise argparse.ArgumentTypeError(f"not a rational 'num/den': {text!r}") from exc


def _read_json(path):
    try:
        return json.loads(Path(path).read_text())
    except FileNotFoundError as exc:
        raise AllocLabError(f"input file not found: {path}") from exc
    except json.JSONDecodeError as exc:
        raise AllocLabError(f"{path} is not valid JSON: {exc}") from exc


def _write_json(out: Path, name: str, doc) -> None:
    out.mkdir(parents=True, exist_ok=True)
    (out / name).write_text(json.dumps(doc, indent=2, sort_keys=True) + "\n")


def _load_functions(path) -> list[FunctionTable]:
    doc = _read_json(path)
    docs = doc if isinstance(doc, list) else [doc]
    return [FunctionTable.from_json(d) for d in docs]


def _load_ug(args) -> UGInstance:
    return UGInstance.from_json(_read_json(args.ug))


def _load_labeling(args, ug: UGInstance) -> Labeling:
    return Labeling.from_json(_read_json(args.labeling), ug.n_a)


# --- subcommands ---------------------------------------------------------


def cmd_distributions(args, report: Report) -> None:
    q, eps = args.q, args.eps
    m = Fraction(q, q + 1)
    params = {"q": q, "eps": eps}
    eta = analyze(make_eta(q))
    report.add(check("eta.balanced", params, eta.balanced, "==", True, "balanced-pairwise"))
    report.add(check("eta.pairwise_independent", params, eta.pairwise_independent, "==", True, "balanced-pairwise"))
    report.add(check("eta.prob_some_zero", params, eta.prob_some_zero, "==", 1, "balanced-pairwise"))
    noisy_dist = noisy_eta(q, eps)
    noisy = analyze(noisy_dist)
    floor = eps / (q + 1) ** (q + 2)
    report.add(check("noisy.balanced", params, noisy.balanced, "==", True, "balanced-pairwise"))
    report.add(check("noisy.pairwise_independent", params, noisy.pairwise_independent, "==", True, "balanced-pairwise"))
    report.add(check("noisy.min_probability", params, noisy.min_probability, "==", floor, "noise-floor-q2"))
    report.add(check("noisy.prob_some_zero", params, noisy.prob_some_zero, "==", 1 - eps * m ** (q + 2), "balanced-pairwise"))
    report.add(check("noisy.prob_some_zero_floor", params, noisy.prob_some_zero, ">=", 1 - eps, "balanced-pairwise"))
    tag = "soundness-limit-q2" if q == 2 else "soundness-limit-q1" if q == 1 else constants.INFORMATIONAL
    report.add(info("soundness_limit", params, soundness_limit(q), note=f"cited as {tag}"))
    if args.json_out:
        _write_json(Path(args.out), args.json_out, noisy_dist.to_json())


def _function_from_args(args) -> FunctionTable:
    if args.function:
        fs = _load_functions(args.function)
        if len(fs) != 1:
            raise AllocLabError("decompose expects a single function")
        return fs[0]
    if args.dictator:
        return dictator(args.R, args.dictator, args.q)
    return random_mean_function(args.R, args.q, args.mean, args.seed)


def cmd_decompose(args, report: Report) -> None:
    f = _function_from_args(args)
    params = {"R": f.R, "q": f.q, "d": args.d, "tau": args.tau, "seed": args.seed}
    dec = efron_stein(f)
    report.add(check("reconstruction", params, dec.reconstruct() == f.values, "==", True, "efron-stein"))
    subsets = dec.subsets
    orthogonal = all(dec.inner(S, T) == 0 for i, S in enumerate(subsets) for T in subsets[i + 1 :])
    report.add(check("orthogonality", params, orthogonal, "==", True, "efron-stein"))
    second_moment = sum((v * v for v in f.values), Fraction(0)) / len(f.values)
    report.add(check("parseval", params, sum((dec.weight(S) for S in subsets), Fraction(0)), "==", second_moment, "efron-stein"))
    prof = influence_profile(f, args.d)
    for i, (inf, low) in enumerate(zip(prof.influences, prof.low_degree), start=1):
        report.add(info(f"influence[{i}]", params, inf))
        report.add(info(f"low_degree_influence[{i}]", params, low))
    variance = second_moment - f.mean() ** 2
    report.add(check("low_degree_total", params, sum(prof.low_degree, Fraction(0)), "<=", args.d * variance, "low-degree-influence-budget"))
    report.add(check("influential_count", params, prof.count_at_least(args.tau), "<=", args.d / args.tau, "low-degree-influence-budget"))


def cmd_gadget_completeness(args, report: Report) -> None:
    inst = build_dictator_test(args.R, args.q, args.eps)
    coords = [args.i] if args.i else range(1, args.R + 1)
    floor = completeness_floor(inst)
    for i in coords:
        params = {"R": args.R, "q": args.q, "eps": args.eps, "i": i}
        util = completeness_utilities(inst, i, cap=args.cap)
        report.add(check("min_zero_agent_utility", params, util.min(), ">=", floor, "completeness-floor"))
        total = chi_allocation_utilities(inst, i, cap=args.cap).total()
        report.add(check("small_mass_allocated", params, total, "==", 1, "small-mass"))


def cmd_gadget_soundness(args, report: Report) -> None:
    inst = build_dictator_test(args.R, args.q, args.eps)
    limit = soundness_limit(args.q)
    tag = "soundness-limit-q2" if args.q == 2 else constants.INFORMATIONAL
    base = {"R": args.R, "q": args.q, "eps": args.eps, "d": args.d, "tau": args.tau}
    if args.exhaustive:
        rows = soundness_landscape(inst, d=args.d)
        m = Fraction(args.q, args.q + 1)
        dictator_value = 1 - args.eps * m ** (args.q + 2)
        for row in rows:
            params = dict(base, ones=" ".join(map(str, row.ones)))
            if row.is_dictator:
                report.add(check("dictator_value", params, row.value, "==", dictator_value, "dictator-completeness"))
            elif max(row.low_degree) <= args.tau:
                report.add(check("low_influence_value", params, row.value, "<=", limit + args.slack, tag))
            else:
                report.add(info("function_value", params, row.value))
        best = max(r.value for r in rows)
        maximizers = [r for r in rows if r.value == best]
        report.add(info("functions", base, len(rows)))
        report.add(info("max_value", base, best))
        report.add(info("maximizers", base, len(maximizers)))
        report.add(check("maximizers_all_dictators", base, all(r.is_dictator for r in maximizers), "==", True, "dictator-completeness"))
        return
    lo, hi = limit - args.window, limit + args.eps + args.window
    inside, worst = 0, Fraction(0)
    for k in range(args.samples):
        seed = args.seed + k
        f = random_mean_function(args.R, args.q, Fraction(args.q, args.q + 1), seed)
        value = soundness_value(inst, f)
        low = influence_profile(f, args.d).max_low_degree()
        inside += lo <= value <= hi
        worst = max(worst, low)
        report.add(info("sample_value", dict(base, seed=seed, max_low_degree=low), value))
    params = dict(base, samples=args.samples, seed=args.seed, window=args.window)
    report.add(check("fraction_in_window", params, Fraction(inside, args.samples), ">=", Fraction(95, 100), tag))
    report.add(check("max_low_degree_influence", params, worst, "<", args.tau, "low-influence-sampling"))


def cmd_build_ug(args, report: Report) -> None:
    params = {"A": args.A, "B": args.B, "degree_b": args.degree_b, "R": args.R, "seed": args.seed}
    out = Path(args.out)
    if args.planted:
        ug, lab = planted_instance(args.A, args.B, args.degree_b, args.R, args.seed)
        _write_json(out, "labeling.json", lab.to_json())
        report.add(check("planted_satisfaction", params, satisfaction(ug, lab), "==", 1, "planted-labeling"))
    else:
        ug = random_instance(args.A, args.B, args.degree_b, args.R, args.seed)
    _write_json(out, "ug.json", ug.to_json())
    report.add(info("edges", params, len(ug.edges)))
    report.add(info("degree_a", params, ug.degree_a))


def cmd_decode(args, report: Report) -> None:
    ug = _load_ug(args)
    params = {"d": args.d, "tau": args.tau, "seed": args.seed}
    if args.functions:
        fs = _load_functions(args.functions)
    else:
        lab = _load_labeling(args, ug)
        fs = [dictator(ug.R, lab.labels_a[a], 2) for a in range(ug.n_a)]
    sets = decoder_sets(ug, fs, args.d, args.tau)
    for a, cand in enumerate(sets.candidates_a):
        report.add(check("candidate_count", dict(params, a=a), len(cand), "<=", 2 * args.d / args.tau, "low-degree-influence-budget"))
    decoded = decode_labeling(ug, fs, args.d, args.tau, args.seed)
    _write_json(Path(args.out), "decoded_labeling.json", decoded.to_json())
    sat = satisfaction(ug, decoded)
    if args.functions:
        report.add(info("satisfaction", params, sat))
    else:
        report.add(check("satisfaction", params, sat, "==", 1, "planted-labeling"))


def _meta(args):
    return build_meta_instance(_load_ug(args), args.eps, args.d, args.tau)


def _meta_params(args, meta) -> dict:
    return {"eps": args.eps, "d": args.d, "tau": args.tau, "R": meta.R, "A": meta.ug.n_a, "B": meta.ug.n_b}


def cmd_build_reduction(args, report: Report) -> None:
    meta = _meta(args)
    params = _meta_params(args, meta)
    fam = validate_family2(meta, args.eps)
    report.add(check("family_membership", params, fam.ok, "==", True, "equal-group-family", note=fam.clause or ""))
    report.add(check("dummy_total", params, meta.dummy_total, "<=", meta.delta, "dummy-cap"))
    report.add(check("delta", params, meta.delta, "<=", args.eps, "dummy-cap"))
    report.add(check("small_mass", params, meta.small_mass(), "==", 1, "small-mass"))
    report.add(info("agents", params, meta.n_agents))
    report.add(info("large_goods", params, meta.ug.n_a * meta.large_per_group))
    report.add(info("dummy_goods", params, meta.dummy_count))
    report.add(info("small_goods", params, meta.small_good_count))
    if args.explicit:
        _write_json(Path(args.out), "instance.json", meta.to_allocation_instance().to_json())


def cmd_yes_case(args, report: Report) -> None:
    meta = _meta(args)
    lab = _load_labeling(args, meta.ug)
    params = _meta_params(args, meta)
    yes = yes_allocation(meta, lab)
    report.add(check("min_nonlarge_utility", params, yes.min_nonlarge(), ">=", yes_floor(meta), "completeness-floor"))
    report.add(check("small_mass_allocated", params, yes.small_total, "==", 1, "small-mass"))
    report.add(check("dummies_used", params, yes.dummies_used, "<=", meta.dummy_count, "dummy-cap"))
    report.add(info("large_holders", params, len(yes.large_holders)))
    if args.utilities:
        table = {str(a): f"{v.numerator}/{v.denominator}" for a, v in yes.utilities.as_dict().items()}
        _write_json(Path(args.out), "utilities.json", table)


def cmd_no_bound(args, report: Report) -> None:
    meta = _meta(args)
    params = dict(_meta_params(args, meta), seed=args.seed)
    if args.functions:
        fs = _load_functions(args.functions)
    else:
        fs = [random_mean_function(meta.R, 2, Fraction(2, 3), args.seed + a) for a in range(meta.ug.n_a)]
    bound = no_case_bound(meta, fs)
    report.add(info("no_case_bound", params, bound))
    report.add(check("averaged_route", params, no_case_bound_collapsed(meta, fs), "==", bound, "averaged-functions"))
    report.add(check("family_cap", params, bound, "<=", 1 + args.eps, "equal-group-family"))
    report.add(info("limit_with_slack", params, constants.SOUNDNESS_Q2 + 3 * args.eps,
                    note="ceiling claimed for instances without a good labeling"))


def cmd_gap_instance(args, report: Report) -> None:
    gap = build_gap_instance(_load_ug(args), args.eps, args.d, args.tau, args.c)
    params = dict(_meta_params(args, gap.meta), c=args.c)
    guaranteed = gap_yes_usw(gap)
    if args.c == constants.GAP_C:
        report.add(check("yes_usw", params, guaranteed, "==", constants.value("gap-yes") - args.eps, "gap-yes"))
    else:
        report.add(info("yes_usw", params, guaranteed))
    if args.labeling:
        realized = gap_yes_allocation(gap, _load_labeling(args, gap.meta.ug))
        report.add(check("realized_usw", params, realized.usw, ">=", guaranteed, "gap-yes"))
        report.add(check("realized_feasible", params, realized.feasible, "==", True, "gap-yes"))
    x, low = quartic_grid_minimum(args.c)
    report.add(info("grid_minimizer", params, x))
    if args.c == constants.GAP_C:
        report.add(check("grid_minimum", params, low, "==", constants.GAP_POLY_MIN, "gap-poly-min"))
        report.add(check("stationary_point", params, quartic_stationary_point(args.c), "==", Fraction(2, 3), "gap-poly-min"))
        report.add(check("no_usw", params, gap_no_bound(args.eps), "<=", constants.value("gap-no") + 5 * args.eps, "gap-no"))
    else:
        report.add(info("grid_minimum", params, low))


def cmd_ratios(args, report: Report) -> None:
    rep = theorem_ratios(args.eps)
    params = {"eps": args.eps}
    for name, value in rep.values.items():
        report.add(info(name, params, value))
    tags = {"nash": "nash-ratio-cubed", "budget": "budget-ratio", "gap": "gap-ratio"}
    for name, ok in rep.checks.items():
        report.add(check(name, params, ok, "==", True, tags[name.split("_")[0]]))
    # table decimals are eps -> 0 values; compare the limits always and
    # the finite-eps ratios only once eps is small enough to be invisible
    tol = Fraction(1, 1000)
    limits = {"nash": constants.value("nash-ratio-cubed"), "budget": constants.value("budget-ratio"),
              "gap": constants.value("gap-ratio")}
    for name, table in constants.TABLE_DECIMALS.items():
        target = Fraction(str(table))
        power = 3 if name == "nash" else 1
        note = "cubed" if power == 3 else ""
        candidates = [("limit", limits[name])]
        if args.eps <= Fraction(1, 10000):
            exact = rep.values["nash_ratio_cubed"] if name == "nash" else rep.values[f"{name}_ratio"]
            candidates.append(("ratio", exact))
        for kind, value in candidates:
            p = dict(params, table=target)
            report.add(check(f"{name}_{kind}_vs_table_low", p, value, ">=", (target - tol) ** power, tags[name], note))
            report.add(check(f"{name}_{kind}_vs_table_high", p, value, "<=", (target + tol) ** power, tags[name], note))
    for q in args.limits:
        lim = limit_ratios(q)
        p = {"q": q}
        report.add(info("limit.soundness", p, lim.soundness))
        report.add(info("limit.nash_power", p, lim.nash_power, note=f"ratio^{q + 1}"))
        report.add(info("limit.budget", p, lim.budget))
        report.add(info("limit.gap", p, lim.gap))


def cmd_solve(args, report: Report) -> None:
    inst = AllocationInstance.from_json(_read_json(args.instance))
    result = solve_exact(inst, args.objective, cap=args.cap, workers=args.workers)
    params = {"objective": args.objective, "agents": inst.n_agents, "goods": inst.n_goods}
    _write_json(Path(args.out), "solution.json", result.to_json())
    report.add(info("explored", params, result.explored))
    if result.best_allocation is None:
        report.add(info("best_value", params, None, note="no feasible allocation"))
        return
    report.add(info("best_value", params, result.best_value))
    again = evaluate_welfare(inst, result.best_allocation, args.objective)
    report.add(check("welfare_recomputed", params, again, "==", result.best_value, "solver-consistency"))


COMMANDS = {
    "distributions": cmd_distributions,
    "decompose": cmd_decompose,
    "gadget-completeness": cmd_gadget_completeness,
    "gadget-soundness": cmd_gadget_soundness,
    "build-ug": cmd_build_ug,
    "decode": cmd_decode,
    "build-reduction": cmd_build_reduction,
    "yes-case": cmd_yes_case,
    "no-bound": cmd_no_bound,
    "gap-instance": cmd_gap_instance,
    "ratios": cmd_ratios,
    "solve": cmd_solve,
}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--out", default=os.environ.get(OUT_ENV, DEFAULT_OUT),
                        help=f"output directory (default: ${OUT_ENV} or {DEFAULT_OUT})")
    common.add_argument("--config", help="run-configuration JSON; command-line flags take precedence")
    common.add_argument("--seed", type=int, default=0)

    parser = argparse.ArgumentParser(prog="alloclab", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", metavar="command", required=True)

    def add(name, help_text):
        return sub.add_parser(name, parents=[common], help=help_text)

    def add_meta(p):
        p.add_argument("--ug", required=True, help="unique-games instance JSON")
        p.add_argument("--eps", type=rational, default=Fraction(1, 10))
        p.add_argument("--d", type=int, default=DEFAULT_D)
        p.add_argument("--tau", type=rational, default=DEFAULT_TAU)

    p = add("distributions", "analyze the tuple distribution and its noisy mixture")
    p.add_argument("--q", type=int, default=2)
    p.add_argument("--eps", type=rational, default=Fraction(1, 10))
    p.add_argument("--json-out", help="file name (inside --out) for the noisy distribution")

    p = add("decompose", "Efron-Stein decomposition and influences of one function")
    p.add_argument("--R", type=int, default=2)
    p.add_argument("--q", type=int, default=2)
    src = p.add_mutually_exclusive_group()
    src.add_argument("--function", help="FunctionTable JSON")
    src.add_argument("--dictator", type=int, help="use 1{x_i > 0} for this coordinate")
    p.add_argument("--mean", type=rational, default=Fraction(2, 3), help="mean of the random function")
    p.add_argument("--d", type=int, default=2)
    p.add_argument("--tau", type=rational, default=Fraction(1, 8))

    p = add("gadget-completeness", "chi allocation utilities in the dictator test")
    p.add_argument("--R", type=int, default=2)
    p.add_argument("--q", type=int, default=2)
    p.add_argument("--eps", type=rational, default=Fraction(1, 10))
    p.add_argument("--i", type=int, help="coordinate (default: all)")
    p.add_argument("--cap", type=int, default=None, help="support enumeration cap")

    p = add("gadget-soundness", "soundness values of mean-constrained functions")
    p.add_argument("--R", type=int, default=2)
    p.add_argument("--q", type=int, default=2)
    p.add_argument("--eps", type=rational, default=Fraction(1, 10))
    p.add_argument("--exhaustive", action="store_true", help="every mean-constrained function")
    p.add_argument("--samples", type=int, default=20)
    p.add_argument("--d", type=int, default=None, help="influence degree (default 1 exhaustive, 2 sampled)")
    p.add_argument("--tau", type=rational, default=None,
                   help="influence threshold (default 1/20 exhaustive, 1/10 sampled)")
    p.add_argument("--slack", type=rational, default=Fraction(1, 10))
    p.add_argument("--window", type=rational, default=Fraction(1, 20))

    p = add("build-ug", "generate a biregular unique-games instance")
    p.add_argument("--A", type=int, default=2)
    p.add_argument("--B", type=int, default=2)
    p.add_argument("--degree-b", type=int, default=2)
    p.add_argument("--R", type=int, default=2)
    p.add_argument("--planted", action="store_true", help="plant a fully satisfying labeling")

    p = add("decode", "influence-based labeling decoder")
    p.add_argument("--ug", required=True)
    p.add_argument("--functions", help="JSON list of FunctionTables, one per node of A")
    p.add_argument("--labeling", help="labeling JSON; decodes its dictator functions")
    p.add_argument("--d", type=int, default=DEFAULT_D)
    p.add_argument("--tau", type=rational, default=DEFAULT_TAU)

    p = add("build-reduction", "allocation instance from a unique-games instance")
    add_meta(p)
    p.add_argument("--explicit", action="store_true", help="also write instance.json (small instances only)")

    p = add("yes-case", "allocation built from a labeling")
    add_meta(p)
    p.add_argument("--labeling", required=True)
    p.add_argument("--utilities", action="store_true", help="also write utilities.json")

    p = add("no-bound", "exact ceiling on the utility of agents without a large good")
    add_meta(p)
    p.add_argument("--functions", help="JSON list of 0/1 FunctionTables of mean 2/3 (default: random)")

    p = add("gap-instance", "GAP variant of the reduction")
    add_meta(p)
    p.add_argument("--c", type=rational, default=constants.GAP_C)
    p.add_argument("--labeling", help="labeling JSON for the realized YES allocation")

    p = add("ratios", "welfare ratios and their proof chains")
    p.add_argument("--eps", type=rational, default=Fraction(1, 100))
    p.add_argument("--limits", type=int, nargs="*", default=[1, 2, 4],
                   help="alphabet parameters q for limit ratios")

    p = add("solve", "exhaustive welfare maximization")
    p.add_argument("--instance", required=True)
    p.add_argument("--objective", choices=[o.value for o in Objective], default=Objective.NASH.value)
    p.add_argument("--cap", type=int, default=DEFAULT_SOLVER_CAP)
    p.add_argument("--workers", type=int, default=1)
    return parser


def _subparser(parser: argparse.ArgumentParser, name: str) -> argparse.ArgumentParser:
    for action in parser._subparsers._group_actions:
        if isinstance(action, argparse._SubParsersAction):
            return action.choices[name]
    raise KeyError(name)


def _apply_config(sub: argparse.ArgumentParser, config: dict) -> None:
    actions = {a.dest: a for a in sub._actions}
    defaults = {}
    for key, raw in config.items():
        dest = key.replace("-", "_")
        if dest in ("command", "config"):
            continue
        if dest not in actions:
            raise ConfigError(f"unknown configuration key {key!r}")
        action = actions[dest]
        if isinstance(action, argparse._StoreTrueAction):
            if not isinstance(raw, bool):
                raise ConfigError(f"{key} must be true or false")
            defaults[dest] = raw
            continue
        convert = action.type or str
        try:
            if action.nargs in ("*", "+"):
                if not isinstance(raw, list):
                    raise TypeError("expected a list")
                defaults[dest] = [convert(v) for v in raw]
            else:
                if isinstance(raw, (dict, list)) or (convert is int and isinstance(raw, (bool, float))):
                    raise TypeError("expected a scalar")
                defaults[dest] = convert(raw)
        except (argparse.ArgumentTypeError, ValueError, TypeError) as exc:
            raise ConfigError(f"bad value for {key}: {raw!r}") from exc
        if action.choices is not None and defaults[dest] not in action.choices:
            raise ConfigError(f"{key} must be one of {sorted(action.choices)}")
    sub.set_defaults(**defaults)


def _finalize(args) -> None:
    if args.command == "gadget-soundness":
        if args.d is None:
            args.d = 1 if args.exhaustive else 2
        if args.tau is None:
            args.tau = Fraction(1, 20) if args.exhaustive else Fraction(1, 10)
    if args.command == "decode" and not (args.functions or args.labeling):
        raise AllocLabError("decode needs --functions or --labeling")


def main(argv: Optional[Sequence[str]] = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    pre = argparse.ArgumentParser(add_help=False)
    pre.add_argument("--config")
    known, _ = pre.parse_known_args(argv)
    config: dict = {}
    if known.config:
        try:
            config = json.loads(Path(known.config).read_text())
            if not isinstance(config, dict):
                raise ConfigError("run configuration must be a JSON object")
        except (OSError, json.JSONDecodeError, ConfigError) as exc:
            print(f"alloclab: malformed run configuration: {exc}", file=sys.stderr)
            return EXIT_BAD_CONFIG
        if "command" in config and not any(a in COMMANDS for a in argv):
            argv = [str(config["command"])] + argv
    command = next((a for a in argv if a in COMMANDS), None)
    if command is not None and config:
        try:
            _apply_config(_subparser(parser, command), config)
        except ConfigError as exc:
            print(f"alloclab: malformed run configuration: {exc}", file=sys.stderr)
            return EXIT_BAD_CONFIG
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    report = Report(args.command)
    try:
        _finalize(args)
        COMMANDS[args.command](args, report)
    except ResourceLimitError as exc:
        print(f"alloclab: {exc}", file=sys.stderr)
        return EXIT_CAP
    except (AllocLabError, ValueError, KeyError) as exc:
        print(f"alloclab: {exc}", file=sys.stderr)
        return EXIT_BAD_INPUT
    csv_path, _ = report.write(args.out)
    for row in report.failures():
        print(f"FAIL {row.experiment} {row.as_record()['params']}: {row.as_record()['value']} "
              f"{row.relation} {row.as_record()['bound']}", file=sys.stderr)
    print(f"{len(report.rows)} rows, {len(report.failures())} failed -> {csv_path}")
    return EXIT_OK if report.all_pass() else EXIT_CHECK_FAILED


if __name__ == "__main__":
    sys.exit(main())
