"""Command line: chgraph <command> [algebra.json] [options].

Exit codes: 0 all checks pass, 1 some identity fails, 2 input or usage error.
"""

from __future__ import annotations

import argparse
import json
import os
import random
import sys
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

from .algebra import (
    CHAlgebra, check_derived, check_three_q, load_algebra, satisfies_one_twelfth, validate_algebra,
)
from .bcov import bcov_verify
from .core import InputError, _frac_str
from .evaluator import check_cross_pipeline, compute_potential
from .graphs import enumerate_graphs
from .homotopy import check_maurer_cartan, check_operator_identities, compute_gamma
from .relations import (
    check_getzler, check_getzler_routes_agree, check_wdvv_graph, check_wdvv_pde,
    check_wdvv_routes_agree, decompose_in_p_basis, getzler_combination_of_table,
)
from .report import Report

MAX_DEGREE = 8
# `all` runs the costlier relation checks at a capped degree.
GETZLER_CAP, IDENTITIES_CAP = 3, 3


@dataclass
class RunConfig:
    command: str
    algebra: Optional[str] = None
    degree: int = 4
    genus: int = 0
    fmt: str = "human"
    require_one_twelfth: bool = False
    seed: int = 0
    max_vertices: int = 12
    leaves: int = 4
    labels: Optional[list] = None
    route: str = "both"
    slice: Optional[list] = None
    extra: dict = field(default_factory=dict)

    def __post_init__(self):
        if not 1 <= self.degree <= MAX_DEGREE:
            raise InputError(f"degree must lie in 1..{MAX_DEGREE}")


def _parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("-d", "--degree", type=int, default=None,
                        help="truncation degree (default $CHGRAPH_DEGREE or 4)")
    common.add_argument("--format", choices=("human", "json"), default="human")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--require-one-twelfth", action="store_true",
                        help="treat the 1/12 axiom as part of validity")
    common.add_argument("--slice", help="comma-separated H0 labels carrying coordinates")

    ap = argparse.ArgumentParser(prog="chgraph", description=__doc__.splitlines()[0])
    sub = ap.add_subparsers(dest="command", required=True)
    for name in ("validate", "potential", "gamma", "all"):
        p = sub.add_parser(name, parents=[common])
        p.add_argument("algebra")
        if name == "potential":
            p.add_argument("-g", "--genus", type=int, choices=(0, 1), default=0)
    g = sub.add_parser("graphs", parents=[common])
    g.add_argument("--leaves", type=int, default=4)
    g.add_argument("-g", "--genus", type=int, choices=(0, 1), default=0)
    g.add_argument("--labels")
    g.add_argument("--max-vertices", type=int, default=12)
    c = sub.add_parser("check")
    csub = c.add_subparsers(dest="what", required=True)
    for name in ("wdvv", "getzler", "identities", "bcov"):
        p = csub.add_parser(name, parents=[common])
        p.add_argument("algebra")
        if name in ("wdvv", "getzler"):
            p.add_argument("--route", choices=("pde", "graph", "both"), default="both")
    return ap


def _config(ns) -> RunConfig:
    degree = ns.degree
    if degree is None:
        env = os.environ.get("CHGRAPH_DEGREE")
        try:
            degree = int(env) if env else 4
        except ValueError:
            raise InputError("CHGRAPH_DEGREE must be an integer")
    cmd = ns.command if ns.command != "check" else f"check {ns.what}"
    labels = getattr(ns, "labels", None)
    return RunConfig(
        command=cmd, algebra=getattr(ns, "algebra", None), degree=degree,
        genus=getattr(ns, "genus", 0), fmt=ns.format,
        require_one_twelfth=getattr(ns, "require_one_twelfth", False), seed=ns.seed,
        max_vertices=getattr(ns, "max_vertices", 12), leaves=getattr(ns, "leaves", 4),
        labels=labels.split(",") if labels else None, route=getattr(ns, "route", "both"),
        slice=ns.slice.split(",") if getattr(ns, "slice", None) else None)


def _even_full(alg: CHAlgebra) -> bool:
    return alg.active is None and not any(alg.parities[i] for i in alg.h0)


def _random_leaves(alg: CHAlgebra, seed: int, k: int = 3) -> list:
    rnd = random.Random(seed)
    return [{i: Fraction(rnd.randint(-3, 3)) for i in alg.h0} for _ in range(k)]


def run_validate(alg, cfg) -> Report:
    rep = Report(f"validate:{alg.name}")
    rep.extend(validate_algebra(alg, check_one_twelfth=cfg.require_one_twelfth))
    if not cfg.require_one_twelfth:
        rep.note("one_twelfth_tier", detail={"satisfied": satisfies_one_twelfth(alg)})
    rep.extend(check_derived(alg), "derived.")
    rep.extend(check_three_q(alg), "three_q.")
    return rep


def run_wdvv(alg, cfg, D=None) -> Report:
    D = D or cfg.degree
    rep = Report(f"wdvv:{alg.name}")
    if cfg.route in ("pde", "both"):
        if _even_full(alg):
            rep.extend(check_wdvv_pde(alg, D), "pde.")
            rep.extend(check_wdvv_routes_agree(alg, D), "routes.")
        else:
            rep.skip("pde.wdvv_three_channels_equal", "PDE route needs every H0 coordinate and even H0")
    if cfg.route in ("graph", "both"):
        rep.extend(check_wdvv_graph(alg, D), "graph.")
    return rep


def run_getzler(alg, cfg, D=None) -> Report:
    D = D or cfg.degree
    rep = Report(f"getzler:{alg.name}")
    comb = getzler_combination_of_table()
    rep.add("table_combination_is_zero_row", all(c == 0 for c in comb),
            detail=[_frac_str(c) for c in comb])
    routes = ("pde", "graph") if cfg.route == "both" else (cfg.route,)
    for r in routes:
        rep.extend(check_getzler(alg, D, r), f"{r}.")
    if cfg.route == "both" and _even_full(alg):
        rep.extend(check_getzler_routes_agree(alg, D), "routes.")
    if alg.active is None:
        rep.extend(decompose_in_p_basis(alg, _random_leaves(alg, cfg.seed)), "p_basis.")
    return rep


def run_identities(alg, cfg, D=None) -> Report:
    D = D or cfg.degree
    rep = Report(f"identities:{alg.name}")
    rep.extend(check_maurer_cartan(alg, D), "maurer_cartan.")
    rep.extend(check_operator_identities(alg, D), "operators.")
    return rep


def run_bcov(alg, cfg, D=None) -> Report:
    D = D or cfg.degree
    if any(alg.parities[i] for i in alg.h0):
        rep = Report(f"bcov:{alg.name}")
        rep.skip("bcov", "BCOV route implemented for even H0 only")
        return rep
    return bcov_verify(alg, D)


def run_all(alg, cfg) -> Report:
    D = cfg.degree
    rep = Report(f"all:{alg.name}")
    rep.extend(run_validate(alg, cfg), "validate.")
    if not rep.passed:
        rep.skip("downstream", "algebra fails validation; identities not evaluated")
        return rep
    rep.extend(check_maurer_cartan(alg, D), "identities.maurer_cartan.")
    rep.extend(check_operator_identities(alg, min(D, IDENTITIES_CAP)), "identities.operators.")
    rep.extend(run_wdvv(alg, cfg, D), "wdvv.")
    rep.extend(run_getzler(alg, cfg, min(D, GETZLER_CAP)), "getzler.")
    rep.extend(check_cross_pipeline(alg, D), "cross_pipeline.")
    rep.extend(run_bcov(alg, cfg, D), "bcov.")
    return rep


def _emit(obj, cfg, human: Optional[str] = None):
    if cfg.fmt == "json":
        print(json.dumps(obj, indent=2, sort_keys=True))
    else:
        print(human if human is not None else json.dumps(obj, indent=2, sort_keys=True))


def run(argv=None) -> int:
    try:
        ns = _parser().parse_args(argv)
    except SystemExit as e:
        return 2 if e.code not in (0, None) else 0
    try:
        cfg = _config(ns)
        if cfg.command == "graphs":
            labels = cfg.labels
            if labels is not None and len(labels) != cfg.leaves:
                raise InputError("--labels must name every leaf")
            classes = enumerate_graphs(cfg.leaves, labels, cfg.genus, cfg.max_vertices)
            _emit([c.to_json() for c in classes], cfg)
            return 0
        alg = load_algebra(cfg.algebra)
        if cfg.slice:
            alg = alg.sliced(cfg.slice)
        if cfg.command == "potential":
            F = compute_potential(alg, cfg.genus, cfg.degree)
            _emit({"algebra": alg.name, "genus": cfg.genus, "degree": cfg.degree,
                   "potential": F.to_json()}, cfg)
            return 0
        if cfg.command == "gamma":
            g = compute_gamma(alg, cfg.degree)
            _emit({"algebra": alg.name, "degree": cfg.degree, "gamma": g.to_json()}, cfg)
            return 0
        runner = {"validate": run_validate, "check wdvv": run_wdvv, "check getzler": run_getzler,
                  "check identities": run_identities, "check bcov": run_bcov, "all": run_all}[cfg.command]
        rep = runner(alg, cfg)
    except (InputError, OSError, json.JSONDecodeError) as e:
        print(f"error: {e}", file=sys.stderr)
        return 2
    if cfg.fmt == "json":
        print(rep.dumps())
    else:
        print(rep.human())
    return 0 if rep.passed else 1


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()
