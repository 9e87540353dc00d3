"""Command-line entry points: the named rule-out computations, the
small-order classifications, filter reports, pseudo-arc searches and the
classical demonstration objects, all emitting machine-readable reports.

Exit codes: 0 when every verdict passes and every compiled-in expected
count matches, 1 on a verdict/count failure, 2 on bad input.
"""
from __future__ import annotations

import argparse
import json
import os
import random
import sys
import time
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple

try:
    from importlib.metadata import version as _pkg_version

    VERSION = _pkg_version("asq")
except Exception:  # pragma: no cover - not installed
    VERSION = "0.0.0"

from . import gf2
from .asconfig import (
    ASConfiguration,
    _validate,
    check_as_axioms,
    check_pds,
    check_kantor,
    clique_size_qplus1,
    delta,
    enough_subgroups,
    kantor_from_as,
    lemma41_invariants,
    parse_config,
    structural_filter,
)
from .geometry import (
    as_quadrangle,
    collinearity_srg,
    kantor_quadrangle,
    regular_point,
    verify_gq,
)
from .groups import (
    TABLE4_IDS,
    HeisenbergGroup,
    Subgroup,
    elementary_abelian,
    load_group,
    order8_catalogue,
    order27_catalogue,
    table4_group,
)
from .quadform import (
    PRESETS,
    field_reduction_arc,
    forms_equivalent,
    load_form,
    preset,
    gamma_forms,
)
from .search import (
    PlaneCatalogue,
    arc_seeds,
    as_backtrack,
    brute_force_as_configs,
    extend_arcs,
    is_partial_pseudo_arc,
    lemma53_counts,
    lift_arc,
    minus_type_obstruction,
)


class InputError(Exception):
    """Bad command-line input or unparseable file (exit code 2)."""


@dataclass
class RunReport:
    command: str
    inputs: Dict[str, object] = field(default_factory=dict)
    counts: Dict[str, int] = field(default_factory=dict)
    verdicts: Dict[str, bool] = field(default_factory=dict)
    notes: Dict[str, object] = field(default_factory=dict)
    wall_time: float = 0.0
    version: str = VERSION

    @property
    def passed(self) -> bool:
        return all(self.verdicts.values())

    def to_dict(self) -> Dict[str, object]:
        # deterministic field order; counts/verdicts sorted by key
        return {
            "command": self.command,
            "inputs": self.inputs,
            "counts": {k: self.counts[k] for k in sorted(self.counts)},
            "verdicts": {k: bool(self.verdicts[k]) for k in sorted(self.verdicts)},
            "notes": self.notes,
            "wall_time": self.wall_time,
            "version": self.version,
        }


def _expect(report: RunReport, expected: Dict[str, int]) -> None:
    """Compiled-in count assertions: one verdict per expected count."""
    for name, want in expected.items():
        got = report.counts.get(name)
        report.verdicts[f"{name}_matches"] = got == want
        if got != want:
            report.notes[f"{name}_expected"] = want


# ----------------------------------------------------------------------
# commands


def cmd_verify(group_file: str, config_file: str) -> RunReport:
    rep = RunReport("verify", inputs={"group": group_file, "config": config_file})
    try:
        with open(group_file) as fh:
            G = load_group(fh.read())
        with open(config_file) as fh:
            cfg = parse_config(fh.read(), G, validate=False)
    except (OSError, ValueError) as e:
        raise InputError(str(e))
    try:
        _validate(G, cfg)
    except ValueError as e:
        rep.verdicts["config_valid"] = False
        rep.notes["config_witness"] = str(e)
        return rep
    rep.verdicts["config_valid"] = True
    ax = check_as_axioms(G, cfg)
    rep.verdicts["as_axioms"] = bool(ax["ok"])
    if not ax["ok"]:
        rep.notes["as_witness"] = ax["witness"]
        return rep
    inv = lemma41_invariants(G, cfg)
    rep.verdicts["structural_invariants"] = bool(inv["ok"])
    try:
        lam, mu = check_pds(G, delta(cfg))
        rep.verdicts["pds"] = (lam, mu) == (cfg.q - 2, cfg.q + 2)
        rep.counts["pds_lambda"], rep.counts["pds_mu"] = lam, mu
    except ValueError as e:
        rep.verdicts["pds"] = False
        rep.notes["pds_witness"] = str(e)
    fam = kantor_from_as(cfg)
    kv = check_kantor(G, fam, cfg.q, cfg.q)
    rep.verdicts["kantor_family"] = bool(kv["ok"])
    try:
        geom = as_quadrangle(cfg)
        s, t = verify_gq(geom)
        rep.counts["as_gq_s"], rep.counts["as_gq_t"] = s, t
        rep.verdicts["as_gq"] = (s, t) == (cfg.q - 1, cfg.q + 1)
        v, k, lam2, mu2 = collinearity_srg(geom)
        rep.counts["srg_v"], rep.counts["srg_k"] = v, k
        rep.counts["srg_lambda"], rep.counts["srg_mu"] = lam2, mu2
        rep.verdicts["as_srg"] = True
    except ValueError as e:
        rep.verdicts["as_gq"] = False
        rep.notes["as_gq_witness"] = str(e)
    try:
        kg = kantor_quadrangle(G, fam, cfg.q, cfg.q)
        s, t = verify_gq(kg)
        rep.counts["kantor_gq_s"], rep.counts["kantor_gq_t"] = s, t
        rep.verdicts["kantor_gq"] = (s, t) == (cfg.q, cfg.q)
        rep.verdicts["base_point_regular"] = regular_point(kg, 0)
    except ValueError as e:
        rep.verdicts["kantor_gq"] = False
        rep.notes["kantor_gq_witness"] = str(e)
    return rep


def _ruleout_208a(rep: RunReport, seed_size: int, threads: int) -> None:
    G = table4_group("208a")
    cat = PlaneCatalogue(preset("deg-hyp6"))
    seeds = arc_seeds(cat, seed_size)
    rep.counts["seeds"] = len(seeds)
    arcs = extend_arcs(cat, seeds, 9, threads=threads)
    rep.counts["arcs"] = len(arcs)
    per_arc = set()
    families = 0
    for arc in arcs:
        pool, dropped = lift_arc(G, [cat.planes[i] for i in arc.members])
        per_arc.add(len(pool))
        families += len(as_backtrack(G, pool, 9))
        rep.counts["dropped_planes"] = rep.counts.get("dropped_planes", 0) + len(dropped)
    rep.counts["candidates_per_arc"] = per_arc.pop() if len(per_arc) == 1 else -1
    rep.counts["families"] = families
    _expect(rep, {"arcs": 8, "candidates_per_arc": 72, "families": 0})


def _ruleout_210b(rep: RunReport, seed_size: int, threads: int) -> None:
    G = table4_group("210b")
    res = lemma53_counts(G)
    rep.counts["pool"] = res["pool"]
    dist = res["distribution"]
    for v in sorted(dist):
        rep.counts[f"thirds_with_{v}_fourths"] = dist[v]
    rep.counts["size6_families"] = res["size6_families"]
    rep.verdicts["distribution_matches"] = dist == {0: 112, 48: 672}
    _expect(rep, {"pool": 784, "size6_families": 0})


def _ruleout_211p(rep: RunReport, seed_size: int, threads: int) -> None:
    cat = PlaneCatalogue(preset("plus8"))
    seeds = arc_seeds(cat, seed_size)
    rep.counts["seeds"] = len(seeds)
    arcs = extend_arcs(cat, seeds, 9, threads=threads)
    rep.counts["extensions"] = len(arcs)
    expected = {"extensions": 0}
    if seed_size == 6:
        expected["seeds"] = 1402
    _expect(rep, expected)


def _ruleout_212m(rep: RunReport, seed_size: int, threads: int) -> None:
    G = table4_group("212m")
    res = minus_type_obstruction(G)
    rep.counts["center_order"] = res["center_order"]
    rep.counts["candidates"] = res["n_candidates"]
    rep.counts["seeds"] = res["seeds"]
    rep.counts["arcs"] = res["arcs"]
    rep.counts["families"] = res["families"]
    rep.verdicts["centralizer_is_perp_preimage"] = bool(
        res["centralizer_is_perp_preimage"]
    )
    _expect(rep, {"center_order": 2, "families": 0})


def cmd_ruleout(ident: str, seed_size: int = 6, threads: int = 1) -> RunReport:
    rep = RunReport("ruleout", inputs={"group": ident, "seed_size": seed_size})
    dispatch = {
        "208a": _ruleout_208a,
        "210b": _ruleout_210b,
        "211p": _ruleout_211p,
        "212m": _ruleout_212m,
    }
    if ident not in dispatch:
        raise InputError(f"unknown group id {ident!r}; have {TABLE4_IDS}")
    dispatch[ident](rep, seed_size, threads)
    return rep


def cmd_classify(order: int) -> RunReport:
    rep = RunReport("classify", inputs={"order": order})
    if order == 8:
        groups = order8_catalogue()
        admitting = {"C2^3"}
    elif order == 27:
        groups = order27_catalogue()
        admitting = {"Heisenberg(3)"}
    else:
        raise InputError("classification supports orders 8 and 27")
    for G in groups:
        cfgs = brute_force_as_configs(G)
        rep.counts[f"configs_{G.name}"] = len(cfgs)
        rep.verdicts[f"{G.name}_as_expected"] = (len(cfgs) > 0) == (G.name in admitting)
    return rep


def _load_group_arg(arg: str):
    if arg in TABLE4_IDS:
        return table4_group(arg)
    if arg == "heisenberg3":
        return HeisenbergGroup(3)
    if os.path.exists(arg):
        try:
            with open(arg) as fh:
                return load_group(fh.read())
        except ValueError as e:
            raise InputError(str(e))
    raise InputError(f"no such group file or builtin id: {arg!r}")


def cmd_filters(group_arg: str) -> RunReport:
    rep = RunReport("filters", inputs={"group": group_arg})
    G = _load_group_arg(group_arg)
    q = round(G.n ** (1 / 3))
    fr = structural_filter(G)
    for name, ok in fr.conditions.items():
        rep.verdicts[name] = ok
    rep.notes.update(fr.notes)
    if q & (q - 1) == 0:  # the subgroup-clique predicates are 2-group only
        rep.verdicts["enough_subgroups"] = enough_subgroups(G, q)
        rep.verdicts["clique_of_size_q_plus_1"] = clique_size_qplus1(G, q)
    return rep


def _load_form_arg(arg: str):
    if arg in PRESETS:
        return preset(arg)
    if os.path.exists(arg):
        try:
            with open(arg) as fh:
                return load_form(fh.read())
        except ValueError as e:
            raise InputError(str(e))
    raise InputError(f"no such form file or preset: {arg!r} (presets: {sorted(PRESETS)})")


def cmd_pseudoarcs(form_arg: str, seed_size: int, target: int,
                   threads: int = 1) -> RunReport:
    rep = RunReport(
        "pseudoarcs",
        inputs={"form": form_arg, "seed_size": seed_size, "target": target},
    )
    form = _load_form_arg(form_arg)
    try:
        cat = PlaneCatalogue(form)
    except ValueError as e:
        raise InputError(f"cannot build a symmetry group for this form: {e}")
    rep.counts["planes"] = cat.n
    seeds = arc_seeds(cat, seed_size)
    rep.counts["seeds"] = len(seeds)
    arcs = extend_arcs(cat, seeds, target, threads=threads)
    rep.counts["arcs"] = len(arcs)
    rep.verdicts["all_revalidate"] = all(
        is_partial_pseudo_arc(form, [cat.planes[i] for i in a.members]) for a in arcs
    )
    rep.notes["arcs"] = [list(a.members) for a in arcs]
    return rep


# -- demos -------------------------------------------------------------

_F4_MUL = ((0, 0, 0, 0), (0, 1, 2, 3), (0, 2, 3, 1), (0, 3, 1, 2))


def _hyperoval_config() -> ASConfiguration:
    """The pseudo-hyperoval of PG(5,2): field reduction of the regular
    hyperoval {(1, t, t^2)} + {(0,1,0), (0,0,1)} of PG(2,4)."""
    G = elementary_abelian(6)
    pts = [(1, t, _F4_MUL[t][t]) for t in range(4)] + [(0, 1, 0), (0, 0, 1)]
    subgroups = []
    for p in pts:
        elems = sorted(
            _F4_MUL[lam][p[0]] | (_F4_MUL[lam][p[1]] << 2) | (_F4_MUL[lam][p[2]] << 4)
            for lam in range(4)
        )
        subgroups.append(Subgroup(G, tuple(elems)))
    return ASConfiguration(G, 4, tuple(subgroups))


def _demo_w3q3(rep: RunReport) -> None:
    G = HeisenbergGroup(3)
    cfgs = brute_force_as_configs(G)
    rep.counts["configurations"] = len(cfgs)
    rep.verdicts["heisenberg_admits"] = len(cfgs) > 0
    cfg = cfgs[0]
    rep.verdicts["as_axioms"] = bool(check_as_axioms(G, cfg)["ok"])
    lam, mu = check_pds(G, delta(cfg))
    rep.verdicts["pds_1_5"] = (lam, mu) == (1, 5)
    geom = as_quadrangle(cfg)
    s, t = verify_gq(geom)
    rep.verdicts["gq_2_4"] = (s, t) == (2, 4)
    rep.verdicts["srg_27_10_1_5"] = collinearity_srg(geom) == (27, 10, 1, 5)
    fam = kantor_from_as(cfg)
    kg = kantor_quadrangle(G, fam, 3, 3)
    s, t = verify_gq(kg)
    rep.verdicts["gq_3_3"] = (s, t) == (3, 3)
    rep.verdicts["srg_40_12_2_4"] = collinearity_srg(kg) == (40, 12, 2, 4)
    rep.verdicts["all_points_regular"] = all(
        regular_point(kg, p) for p in range(kg.n_points)
    )
    rep.counts["points"], rep.counts["lines"] = kg.n_points, len(kg.lines)


def _demo_as35(rep: RunReport) -> None:
    cfg = _hyperoval_config()
    G = cfg.group
    rep.verdicts["as_axioms"] = bool(check_as_axioms(G, cfg)["ok"])
    geom = as_quadrangle(cfg)
    s, t = verify_gq(geom)
    rep.counts["points"] = geom.n_points
    rep.counts["lines"] = len(geom.lines)
    rep.verdicts["gq_3_5"] = (s, t) == (3, 5)
    _expect(rep, {"points": 64, "lines": 96})


def _demo_field_reduction(rep: RunReport) -> None:
    fra = field_reduction_arc()
    rep.counts["planes"] = len(fra.quotient_arc)
    rep.verdicts["pseudo_arc"] = is_partial_pseudo_arc(
        fra.quotient_form, list(fra.quotient_arc)
    )
    rep.verdicts["radical_meets_trivial"] = all(
        gf2.meet(p, fra.quotient_radical).rank == 0 for p in fra.quotient_arc
    )
    rep.verdicts["all_gamma_forms_equivalent"] = all(
        forms_equivalent(q, fra.form) is not None for q in gamma_forms().values()
    )
    _expect(rep, {"planes": 9})


def cmd_demo(name: str) -> RunReport:
    rep = RunReport("demo", inputs={"name": name})
    dispatch = {
        "w3q-3": _demo_w3q3,
        "as35": _demo_as35,
        "field-reduction": _demo_field_reduction,
    }
    if name not in dispatch:
        raise InputError(f"unknown demo {name!r}; have {sorted(dispatch)}")
    dispatch[name](rep)
    return rep


# ----------------------------------------------------------------------
# argument parsing and report output


def _default_threads() -> int:
    env = os.environ.get("ASQ_THREADS")
    if env:
        try:
            return max(1, int(env))
        except ValueError:
            raise InputError(f"ASQ_THREADS must be an integer, got {env!r}")
    return os.cpu_count() or 1


def build_parser() -> argparse.ArgumentParser:
    # shared flags work both before and after the subcommand
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--threads", type=int, default=None,
                        help="worker count (default: ASQ_THREADS or machine)")
    common.add_argument("--seed-size", type=int, default=6,
                        help="partial pseudo-arc seed size (default 6)")
    common.add_argument("--json", metavar="PATH", default=None,
                        help="write the JSON report here")
    common.add_argument("--quiet", action="store_true",
                        help="suppress the summary")
    ap = argparse.ArgumentParser(
        prog="asq",
        description="AS-configuration and pseudo-arc computations",
        parents=[common],
    )
    sub = ap.add_subparsers(dest="cmd", required=True)

    def add(name, help):
        return sub.add_parser(name, help=help, parents=[common])

    p = add("verify", "check a configuration file end to end")
    p.add_argument("group_file")
    p.add_argument("config_file")

    p = add("ruleout", "run one of the order-512 rule-outs")
    p.add_argument("ident", choices=list(TABLE4_IDS))

    p = add("classify", "brute-force classification at small order")
    p.add_argument("order", type=int)

    p = add("filters", "structural filter report for a group")
    p.add_argument("group")

    p = add("pseudoarcs", "seed and extend singular pseudo-arcs")
    p.add_argument("form")
    p.add_argument("--target", type=int, default=9)

    p = add("demo", "build and verify a classical object")
    p.add_argument("name")
    return ap


def run(argv: Optional[Sequence[str]] = None) -> Tuple[RunReport, int]:
    args = build_parser().parse_args(argv)
    threads = args.threads if args.threads is not None else _default_threads()
    if threads < 1:
        raise InputError("--threads must be positive")
    t0 = time.monotonic()
    if args.cmd == "verify":
        rep = cmd_verify(args.group_file, args.config_file)
    elif args.cmd == "ruleout":
        rep = cmd_ruleout(args.ident, seed_size=args.seed_size, threads=threads)
    elif args.cmd == "classify":
        rep = cmd_classify(args.order)
    elif args.cmd == "filters":
        rep = cmd_filters(args.group)
    elif args.cmd == "pseudoarcs":
        rep = cmd_pseudoarcs(args.form, args.seed_size, args.target, threads=threads)
    else:
        rep = cmd_demo(args.name)
    rep.wall_time = time.monotonic() - t0
    if args.json:
        with open(args.json, "w") as fh:
            json.dump(rep.to_dict(), fh, indent=2)
            fh.write("\n")
    if not args.quiet:
        _print_summary(rep)
    return rep, 0 if rep.passed else 1


def _print_summary(rep: RunReport) -> None:
    print(f"asq {rep.command} ({rep.wall_time:.1f}s)")
    for k in sorted(rep.counts):
        print(f"  {k}: {rep.counts[k]}")
    for k in sorted(rep.verdicts):
        print(f"  {k}: {'pass' if rep.verdicts[k] else 'FAIL'}")
    if not rep.passed and rep.notes:
        print(f"  notes: {rep.notes}")


def main(argv: Optional[Sequence[str]] = None) -> int:
    try:
        _, code = run(argv)
        return code
    except InputError as e:
        print(f"error: {e}", file=sys.stderr)
        return 2


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
