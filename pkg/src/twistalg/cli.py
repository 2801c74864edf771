"""Command-line front door.

Every leaf command builds an :class:`ExperimentConfig`, dispatches to the
owning module and emits a JSON report (schema ``twistalg-report/1``) with
the config echo, per-check results and witnesses.  Exit codes: 0 success,
1 verification failure (witness in the report), 2 invalid configuration.
Reports are byte-reproducible for a fixed seed; the wall-clock field can
be suppressed with --omit-timing for byte-level comparisons.
"""

from __future__ import annotations

import csv
import io
import json
import math
import os
import sys
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field
from typing import Optional

import click

from . import __version__
from .scalars import Alpha, make_alpha, symbolic_alpha
from .groups import mat, sl2_generators
from .cocycles import (SymplecticCocycle, WellDefinednessError,
                       cocycle_from_descriptor, extend_to_semidirect,
                       group_from_descriptor, is_coboundary, restrict,
                       sl2_mod_cached, verify_cocycle_identity)

SCHEMA = "twistalg-report/1"


@dataclass
class ExperimentConfig:
    command: str
    params: dict = field(default_factory=dict)
    seed: int = 0
    tol: float = 1e-8
    out: Optional[str] = None
    omit_timing: bool = False
    workers: int = 1


class CheckFailure(Exception):
    pass


def _parse_alpha(text: str) -> Alpha:
    """N:k for zeta_N^k (square root zeta_{2N}^k); sym1/sym2 for formals."""
    text = text.strip()
    if text in ("sym1", "sym2"):
        return symbolic_alpha(int(text[-1]))
    try:
        N, k = text.split(":")
        return make_alpha(int(N), int(k))
    except (ValueError, TypeError) as exc:
        raise click.UsageError(f"bad alpha descriptor {text!r}; expected N:k") from exc


def _parse_mat(text: str):
    try:
        vals = [int(v) for v in text.replace(";", ",").split(",")]
        if len(vals) != 4:
            raise ValueError
    except ValueError as exc:
        raise click.UsageError(f"bad matrix {text!r}; expected a,b,c,d") from exc
    return mat([[vals[0], vals[1]], [vals[2], vals[3]]])


def _parse_json_arg(text: str, what: str) -> dict:
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise click.UsageError(f"bad {what}: {exc}") from exc


def run_config(config: ExperimentConfig) -> dict:
    """Dispatch a config to its handler; returns the report dict."""
    handler = _COMMANDS.get(config.command)
    if handler is None:
        raise click.UsageError(f"unknown command {config.command!r}")
    t0 = time.monotonic()
    results, checks = handler(config)
    report = {
        "schema": SCHEMA,
        "version": __version__,
        "command": config.command,
        "config": {"params": config.params, "seed": config.seed, "tol": config.tol},
        "results": results,
        "checks": checks,
        "status": "ok" if all(c.get("pass", True) for c in checks) else "failed",
    }
    if not config.omit_timing:
        report["wallclockMs"] = int((time.monotonic() - t0) * 1000)
    return report


def emit_report(report: dict, config: ExperimentConfig) -> int:
    text = json.dumps(report, indent=2, sort_keys=True) + "\n"
    if config.out:
        with open(config.out, "w") as fh:
            fh.write(text)
    else:
        click.echo(text, nl=False)
    return 0 if report["status"] == "ok" else 1


def _finish(config: ExperimentConfig):
    report = run_config(config)
    raise SystemExit(emit_report(report, config))


# ---------------------------------------------------------------------------
# handlers


def _scalars_check(config: ExperimentConfig):
    from .scalars import half_power
    alpha = _parse_alpha(config.params["alpha"])
    checks = []
    rng_limit = 4 * (alpha.root_order or 8)
    ok_add = all(half_power(alpha, m) * half_power(alpha, mp) == half_power(alpha, m + mp)
                 for m in range(-rng_limit, rng_limit + 1, 3)
                 for mp in range(-rng_limit, rng_limit + 1, 5))
    checks.append({"name": "scalars.half_power.additive", "pass": ok_add})
    checks.append({"name": "scalars.conj.inverse",
                   "pass": (alpha.value.conj() * alpha.value).is_one()})
    order = alpha.order
    if order:
        checks.append({"name": "scalars.pow.order",
                       "pass": (alpha.value ** order).is_one()})
    results = {"alpha": alpha.value.render(), "root": alpha.root.render(),
               "order": order, "rootOrder": alpha.root_order}
    return results, checks


def _cocycle_verify(config: ExperimentConfig):
    desc = config.params["cocycle"]
    mu = cocycle_from_descriptor(desc)
    if config.params.get("extendGamma"):
        gamma = sl2_mod_cached(int(desc["q"]))
        mu = extend_to_semidirect(mu, gamma)
    rep = verify_cocycle_identity(mu, samples=config.params.get("samples", 10 ** 6),
                                  seed=config.seed)
    checks = [{"name": "cocycles.identity", "pass": rep.ok,
               "witness": repr(rep.witness) if rep.witness else None}]
    return {"checked": rep.checked, "mode": rep.mode}, checks


def _cocycle_coboundary(config: ExperimentConfig):
    mu = cocycle_from_descriptor(config.params["cocycle"])
    from .cocycles import as_table
    lam = is_coboundary(as_table(mu))
    results = {"isCoboundary": lam is not None,
               "witness": {repr(g): s.render() for g, s in lam.items()} if lam else None}
    return results, [{"name": "cocycles.is_coboundary.ran", "pass": True}]


def _cocycle_restrict(config: ExperimentConfig):
    mu = cocycle_from_descriptor(config.params["cocycle"])
    sub = [tuple(x) for x in config.params["subgroup"]]
    res = restrict(mu, sub)
    lam = is_coboundary(res) if res.value_order else None
    table = [[list(g), list(h), res(g, h).render()]
             for g in res.group.elements for h in res.group.elements]
    return ({"table": table, "restrictionIsCoboundary": lam is not None},
            [{"name": "cocycles.restrict.ran", "pass": True}])


def _algebra_clockshift(config: ExperimentConfig):
    from .twisted_algebra import clock_shift, monomial_power
    N = int(config.params["n"])
    u, v, alpha = clock_shift(N)
    from .twisted_algebra import Coeff
    rel = (u @ v) == (v @ u).scale(alpha.value)
    pow_ok = monomial_power(u, N).is_identity() and monomial_power(v, N).is_identity()
    traces_ok = True
    for k in range(N):
        for l in range(N):
            tr = (monomial_power(u, k) @ monomial_power(v, l)).trace_coeff()
            if (k % N, l % N) == (0, 0):
                if not (tr - Coeff.integer(N, alpha.value)).is_zero():
                    traces_ok = False
            elif not tr.is_zero():
                traces_ok = False
    checks = [
        {"name": "twisted_algebra.clock_shift.commutation", "pass": rel},
        {"name": "twisted_algebra.clock_shift.order", "pass": pow_ok},
        {"name": "twisted_algebra.clock_shift.traces", "pass": traces_ok},
    ]
    return {"n": N, "alpha": alpha.value.render()}, checks


def _algebra_regular(config: ExperimentConfig):
    from .twisted_algebra import regular_rep
    G = group_from_descriptor(config.params["group"])
    mu = cocycle_from_descriptor(config.params["cocycle"])
    rep = regular_rep(G, mu)
    ok, witness = rep.verify_relations(pair_limit=config.params.get("pairLimit", 250_000),
                                       seed=config.seed)
    return ({"dim": rep.dim},
            [{"name": "twisted_algebra.regular_rep.relations", "pass": ok,
              "witness": repr(witness) if witness else None}])


def _action_verify(config: ExperimentConfig):
    from .actions import make_context, sigma, verify_action
    alpha = _parse_alpha(config.params["alpha"])
    q = int(config.params["q"])
    try:
        ctx = make_context(alpha, q)
    except WellDefinednessError as exc:
        raise click.UsageError(str(exc)) from exc
    sigma_fn = None
    if config.params.get("injectFault"):
        def sigma_fn(c, g, x):  # deliberately corrupted phase
            out = sigma(c, g, x)
            bad = {yy: cc * c.alpha.half_power(2) for yy, cc in out.terms.items()}
            from .twisted_algebra import AlgebraElement
            return AlgebraElement(c.algebra, bad)
    report = verify_action(ctx, sigma_fn=sigma_fn, seed=config.seed)
    checks = [
        {"name": "actions.verify.homomorphism", "pass": report.homomorphism},
        {"name": "actions.verify.multiplicativity", "pass": report.multiplicative},
        {"name": "actions.verify.star", "pass": report.star_preserving},
        {"name": "actions.verify.trace", "pass": report.trace_preserving},
        {"name": "actions.verify.formula_transport", "pass": report.formula_matches_transport},
    ]
    if report.witness:
        checks.append({"name": "actions.verify.witness", "pass": False,
                       "witness": repr(report.witness)})
    return {"q": q, "alpha": alpha.value.render()}, checks


def _action_model(config: ExperimentConfig):
    from .actions import finite_model
    alpha = _parse_alpha(config.params["alpha"])
    q = int(config.params["q"])
    gens = config.params.get("gens")
    try:
        rep = finite_model(alpha, q, [_parse_mat(g) for g in gens] if gens else None)
    except WellDefinednessError as exc:
        raise click.UsageError(str(exc)) from exc
    ok, witness = rep.verify_relations(pair_limit=config.params.get("pairLimit", 10_000),
                                       seed=config.seed)
    return ({"dim": rep.dim},
            [{"name": "actions.finite_model.relations", "pass": ok,
              "witness": repr(witness) if witness else None}])


def _action_crossed(config: ExperimentConfig):
    from .actions import crossed_product_consistency, make_context
    from .cocycles import sl2_mod_cached
    from .groups import generated_subgroup, mmod
    alpha = _parse_alpha(config.params["alpha"])
    q = int(config.params["q"])
    ctx = make_context(alpha, q)
    gens = config.params.get("gens")
    gamma = None
    if gens:
        full = sl2_mod_cached(q)
        gamma = generated_subgroup(full, [mmod(_parse_mat(g), q) for g in gens])
    fault = None
    if config.params.get("injectFault"):
        ext_bad_phase = alpha.half_power(1)

        def fault(e1, e2):
            from .cocycles import ExtendedCocycle
            base = ctx.cocycle
            (x1, g1), (x2, _) = e1, e2
            from .groups import mvec
            return base(x1, mvec(g1, x2, mod=q)) * ext_bad_phase
    ok = crossed_product_consistency(ctx, gamma=gamma, fault=fault, seed=config.seed)
    return ({"q": q}, [{"name": "actions.crossed_product", "pass": ok}])


def _rigidity_trivialize(config: ExperimentConfig):
    import numpy as np
    from .rigidity import NoRankOneInvariant, NotEigenvector, trivialize
    from .twisted_algebra import regular_rep
    from .cocycles import as_table
    inst = config.params["instance"]
    G = group_from_descriptor(inst["group"])
    mu = as_table(cocycle_from_descriptor(inst["cocycle"]))
    rep = regular_rep(G, mu)
    xi = None
    if isinstance(inst.get("xi"), list):
        xi = np.array([complex(re, im) for re, im in inst["xi"]])
        xi = xi / np.linalg.norm(xi)
    try:
        res = trivialize(rep, xi=xi, tol=float(inst.get("tol", config.tol)))
    except (NoRankOneInvariant, NotEigenvector) as exc:
        return ({"error": type(exc).__name__, "detail": str(exc)},
                [{"name": "rigidity.trivialize", "pass": False,
                  "witness": type(exc).__name__}])
    return ({"lambda": {repr(g): s.render() for g, s in res.lam.items()},
             "residual": res.residual, "certificate": res.certificate,
             "overlap": res.overlap},
            [{"name": "rigidity.trivialize.certificate_zero",
              "pass": res.certificate == 0.0}])


def _rigidity_gap(config: ExperimentConfig):
    from .rigidity import relative_gap
    from .twisted_algebra import regular_rep
    from .cocycles import SymplecticCocycle
    from .groups import cyclic_power, mmod
    q = int(config.params["q"])
    gdesc = config.params.get("group", {"kind": "semidirect", "q": q})
    gdesc["q"] = q
    G = group_from_descriptor(gdesc)
    mu = _trivial_cocycle(G)
    rep = regular_rep(G, mu)
    sub = config.params.get("subgroup", "torus")
    if sub == "torus" and gdesc.get("kind") == "semidirect":
        gamma_id = ((1, 0), (0, 1))
        H = [ (x, gamma_id) for x in cyclic_power(q, 2).elements ]
    elif sub == "full" or gdesc.get("kind") != "semidirect":
        H = G.elements
    else:
        H = [tuple(x) for x in sub]
    gens = config.params.get("gens")
    if gens:
        F = [_parse_mat(g) for g in gens]
        F = [(tuple([0, 0]), mmod(g, q)) for g in F]
    else:
        F = _default_gap_generators(G, q, gdesc)
    gap, dim_c = relative_gap(rep, H, F)
    return ({"gap": gap if gap != math.inf else "inf", "dimComplement": dim_c},
            [{"name": "rigidity.relative_gap.positive", "pass": gap > 0}])


def _trivial_cocycle(G):
    from .cocycles import trivial_cocycle
    return trivial_cocycle(G)


def _default_gap_generators(G, q, gdesc):
    from .groups import mmod
    if gdesc.get("kind") == "semidirect":
        gamma_id = ((1, 0), (0, 1))
        F = [((1 % q, 0), gamma_id), ((0, 1 % q), gamma_id)]
        for g in sl2_generators():
            F.append(((0, 0), mmod(g, q)))
        return F
    return [(1 % q, 0), (0, 1 % q)]


def _rigidity_bound(config: ExperimentConfig):
    from fractions import Fraction
    from .rigidity import counting_bound, projective_rigidity_constants
    n = int(config.params["n"])
    f1 = int(config.params["f1"])
    delta1 = Fraction(config.params["delta1"])
    bound = counting_bound(n, f1, delta1)
    eps = config.params.get("eps")
    schedule = None
    if eps is not None:
        F_sched, d_sched = projective_rigidity_constants(
            Fraction(eps), lambda x: f"F({x})", lambda x: Fraction(x) / 10)
        schedule = {"F": F_sched, "delta": str(d_sched)}
    return ({"bound": str(bound), "schedule": schedule},
            [{"name": "rigidity.counting_bound.ran", "pass": True}])


def _disintegrate_heisenberg(config: ExperimentConfig):
    from .disintegration import disintegrate, heisenberg_extension
    m = int(config.params["m"])
    ext = heisenberg_extension(m)
    blocks, report = disintegrate(ext)
    checks = [
        {"name": "disintegration.theta.unitary", "pass": report.unitary_check},
        {"name": "disintegration.theta.intertwine", "pass": report.intertwine_check},
        {"name": "disintegration.block_diagonal", "pass": report.block_diagonal_check},
        {"name": "disintegration.dims", "pass": report.dims_sum_check},
        {"name": "disintegration.trace_identity", "pass": report.trace_identity_check},
    ]
    return ({"m": m, "blocks": report.blocks,
             "unitaryCheck": report.unitary_check,
             "intertwineCheck": report.intertwine_check}, checks)


def _disintegrate_custom(config: ExperimentConfig):
    from .disintegration import AValuedCocycle, central_extension, disintegrate
    from .groups import abelian_group
    A = abelian_group(config.params["aCycles"])
    G = group_from_descriptor(config.params["group"])
    table = {( _tup(g), _tup(h)): _tup(v) for g, h, v in config.params["nu"]}
    nu = AValuedCocycle(G, A, lambda g, h: table[(g, h)])
    ext = central_extension(A, G, nu)
    blocks, report = disintegrate(ext)
    checks = [
        {"name": "disintegration.theta.unitary", "pass": report.unitary_check},
        {"name": "disintegration.theta.intertwine", "pass": report.intertwine_check},
        {"name": "disintegration.dims", "pass": report.dims_sum_check},
        {"name": "disintegration.trace_identity", "pass": report.trace_identity_check},
    ]
    return ({"order": ext.order, "blocks": report.blocks}, checks)


def _tup(x):
    return tuple(x) if isinstance(x, (list, tuple)) else x


def _conjugacy_decide(config: ExperimentConfig):
    from .conjugacy import ConjugacyError, decide_conjugacy
    if config.params.get("symbolic"):
        a1 = symbolic_alpha(1)
        power = config.params.get("power")
        a2 = symbolic_alpha(1, power) if power else symbolic_alpha(2)
    else:
        a1 = _parse_alpha(config.params["alpha1"])
        a2 = _parse_alpha(config.params["alpha2"])
    a = _parse_mat(config.params["a"])
    b = _parse_mat(config.params["b"])
    try:
        decision = decide_conjugacy(a1, a2, a, b)
    except ConjugacyError as exc:
        raise click.UsageError(str(exc)) from exc
    return (decision.to_json(),
            [{"name": "conjugacy.decide.ran", "pass": True}])


def _conjugacy_sweep(config: ExperimentConfig):
    from .conjugacy import decide_conjugacy, residue_oracle
    N = int(config.params["n"])
    a = _parse_mat(config.params.get("a", "1,1,0,1"))
    b = _parse_mat(config.params.get("b", "1,0,1,1"))
    rows = []

    def one_row(st):
        s, t = st
        decision = decide_conjugacy(make_alpha(N, s), make_alpha(N, t), a, b)
        oracle = residue_oracle(N, s % N, t % N)
        return {"N": N, "s": s, "t": t, "verdict": decision.verdict,
                "oracle": "consistent" if oracle else "obstructed",
                "match": (decision.verdict == "consistent") == oracle}

    pairs = [(s, t) for s in range(1, N) for t in range(1, N)]
    rows = _pool_map(one_row, pairs, config.workers)
    rows.sort(key=lambda r: (r["s"], r["t"]))
    ok = all(r["match"] for r in rows)
    return ({"rows": rows, "count": len(rows)},
            [{"name": "conjugacy.sweep.oracle_agreement", "pass": ok}])


def _gap_sweep(config: ExperimentConfig):
    qs = config.params["qs"]

    def one_row(q):
        cfg = ExperimentConfig("rigidity.gap", {"q": q, "group": {"kind": "cyclicPower", "q": q, "m": 2},
                                                "subgroup": "full"},
                               seed=config.seed, tol=config.tol, omit_timing=True)
        rep = run_config(cfg)
        row = {"q": q, "gap": rep["results"]["gap"],
               "oracle": 2 - 2 * math.cos(2 * math.pi / q)}
        row["withinTol"] = (isinstance(row["gap"], float)
                            and abs(row["gap"] - row["oracle"]) < 1e-9)
        return row

    rows = _pool_map(one_row, qs, config.workers)
    rows.sort(key=lambda r: r["q"])
    ok = all(r["withinTol"] for r in rows)
    return ({"rows": rows, "count": len(rows)},
            [{"name": "rigidity.gap_sweep.oracle_agreement", "pass": ok}])


def _pool_map(fn, items, workers: int):
    if workers <= 1 or len(items) <= 1:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, items))


_COMMANDS = {
    "scalars.check": _scalars_check,
    "cocycle.verify": _cocycle_verify,
    "cocycle.coboundary": _cocycle_coboundary,
    "cocycle.restrict": _cocycle_restrict,
    "algebra.clockshift": _algebra_clockshift,
    "algebra.regular": _algebra_regular,
    "action.verify": _action_verify,
    "action.model": _action_model,
    "action.crossed": _action_crossed,
    "rigidity.trivialize": _rigidity_trivialize,
    "rigidity.gap": _rigidity_gap,
    "rigidity.bound": _rigidity_bound,
    "disintegrate.heisenberg": _disintegrate_heisenberg,
    "disintegrate.custom": _disintegrate_custom,
    "conjugacy.decide": _conjugacy_decide,
    "conjugacy.sweep": _conjugacy_sweep,
    "rigidity.gap_sweep": _gap_sweep,
}


# ---------------------------------------------------------------------------
# click wiring


def _common(ctx) -> dict:
    return ctx.obj


@click.group()
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("--tol", type=float, default=1e-8, show_default=True)
@click.option("--out", type=click.Path(dir_okay=False), default=None)
@click.option("--omit-timing", is_flag=True, default=False,
              help="suppress the wall-clock field for byte-identical reports")
@click.option("--workers", type=int, default=None,
              help="worker threads for sweeps (default: env TWISTALG_WORKERS or 1)")
@click.version_option(version=__version__)
@click.pass_context
def main(ctx, seed, tol, out, omit_timing, workers):
    """Exact experiments with 2-cocycles and twisted group algebras."""
    if workers is None:
        workers = int(os.environ.get("TWISTALG_WORKERS", "1"))
    ctx.obj = {"seed": seed, "tol": tol, "out": out,
               "omit_timing": omit_timing, "workers": workers}


def _cfg(ctx, command, params) -> ExperimentConfig:
    o = ctx.obj
    return ExperimentConfig(command, params, seed=o["seed"], tol=o["tol"],
                            out=o["out"], omit_timing=o["omit_timing"],
                            workers=o["workers"])


@main.group()
def scalars():
    """Scalar arithmetic checks."""


@scalars.command("check")
@click.option("--alpha", required=True, help="N:k or sym1/sym2")
@click.pass_context
def scalars_check(ctx, alpha):
    _finish(_cfg(ctx, "scalars.check", {"alpha": alpha}))


@main.group()
def cocycle():
    """Cocycle identity, coboundary and restriction tools."""


@cocycle.command("verify")
@click.option("--descriptor", required=True, help="JSON cocycle descriptor")
@click.option("--extend-gamma", is_flag=True, default=False,
              help="extend to the full SL(2,Z/q) semidirect product first")
@click.option("--samples", type=int, default=10 ** 6, show_default=True)
@click.pass_context
def cocycle_verify(ctx, descriptor, extend_gamma, samples):
    params = {"cocycle": _parse_json_arg(descriptor, "cocycle descriptor"),
              "extendGamma": extend_gamma, "samples": samples}
    _finish(_cfg(ctx, "cocycle.verify", params))


@cocycle.command("coboundary")
@click.option("--descriptor", help="JSON cocycle descriptor")
@click.option("--file", "file_", type=click.Path(exists=True), help="JSON file")
@click.pass_context
def cocycle_coboundary(ctx, descriptor, file_):
    if descriptor:
        desc = _parse_json_arg(descriptor, "cocycle descriptor")
    elif file_:
        with open(file_) as fh:
            desc = json.load(fh)
    else:
        raise click.UsageError("need --descriptor or --file")
    _finish(_cfg(ctx, "cocycle.coboundary", {"cocycle": desc}))


@cocycle.command("restrict")
@click.option("--descriptor", required=True)
@click.option("--subgroup", required=True, help="JSON list of elements")
@click.pass_context
def cocycle_restrict(ctx, descriptor, subgroup):
    params = {"cocycle": _parse_json_arg(descriptor, "cocycle descriptor"),
              "subgroup": _parse_json_arg(subgroup, "subgroup")}
    _finish(_cfg(ctx, "cocycle.restrict", params))


@main.group()
def algebra():
    """Twisted algebra models."""


@algebra.command("clockshift")
@click.option("--n", type=int, required=True)
@click.pass_context
def algebra_clockshift(ctx, n):
    _finish(_cfg(ctx, "algebra.clockshift", {"n": n}))


@algebra.command("regular")
@click.option("--group", required=True, help="JSON group descriptor")
@click.option("--cocycle", "cocycle_", required=True, help="JSON cocycle descriptor")
@click.pass_context
def algebra_regular(ctx, group, cocycle_):
    params = {"group": _parse_json_arg(group, "group descriptor"),
              "cocycle": _parse_json_arg(cocycle_, "cocycle descriptor")}
    _finish(_cfg(ctx, "algebra.regular", params))


@main.group()
def action():
    """The matrix-group action on twisted torus algebras."""


@action.command("verify")
@click.option("--q", type=int, required=True)
@click.option("--alpha", required=True)
@click.option("--inject-fault", is_flag=True, default=False, hidden=True)
@click.pass_context
def action_verify(ctx, q, alpha, inject_fault):
    _finish(_cfg(ctx, "action.verify", {"q": q, "alpha": alpha,
                                        "injectFault": inject_fault}))


@action.command("model")
@click.option("--q", type=int, required=True)
@click.option("--alpha", required=True)
@click.option("--gens", multiple=True, help="generator matrices a,b,c,d")
@click.pass_context
def action_model(ctx, q, alpha, gens):
    _finish(_cfg(ctx, "action.model", {"q": q, "alpha": alpha,
                                       "gens": list(gens) or None}))


@action.command("crossed")
@click.option("--q", type=int, required=True)
@click.option("--alpha", required=True)
@click.option("--gens", multiple=True)
@click.option("--inject-fault", is_flag=True, default=False, hidden=True)
@click.pass_context
def action_crossed(ctx, q, alpha, gens):
    _finish(_cfg(ctx, "action.crossed", {"q": q, "alpha": alpha,
                                         "gens": list(gens) or None}))


@main.group()
def rigidity():
    """Trivialization, spectral gaps and counting bounds."""


@rigidity.command("trivialize")
@click.option("--instance", required=True, type=click.Path(exists=True))
@click.pass_context
def rigidity_trivialize(ctx, instance):
    with open(instance) as fh:
        inst = json.load(fh)
    _finish(_cfg(ctx, "rigidity.trivialize", {"instance": inst}))


@rigidity.command("gap")
@click.option("--q", type=int, required=True)
@click.option("--group", default=None, help="JSON group descriptor")
@click.option("--subgroup", default="torus", help="'torus', 'full', or JSON elements")
@click.option("--gens", multiple=True)
@click.pass_context
def rigidity_gap(ctx, q, group, subgroup, gens):
    params = {"q": q, "subgroup": subgroup if subgroup in ("torus", "full")
              else _parse_json_arg(subgroup, "subgroup"),
              "gens": list(gens) or None}
    if group:
        params["group"] = _parse_json_arg(group, "group descriptor")
    _finish(_cfg(ctx, "rigidity.gap", params))


@rigidity.command("bound")
@click.option("--n", type=int, required=True)
@click.option("--f1", type=int, required=True)
@click.option("--delta1", required=True)
@click.option("--eps", default=None)
@click.pass_context
def rigidity_bound(ctx, n, f1, delta1, eps):
    _finish(_cfg(ctx, "rigidity.bound", {"n": n, "f1": f1, "delta1": delta1, "eps": eps}))


@rigidity.command("gap-sweep")
@click.option("--q-min", type=int, default=2, show_default=True)
@click.option("--q-max", type=int, default=12, show_default=True)
@click.option("--format", "fmt", type=click.Choice(["json", "csv"]), default="json")
@click.pass_context
def rigidity_gap_sweep(ctx, q_min, q_max, fmt):
    cfg = _cfg(ctx, "rigidity.gap_sweep", {"qs": list(range(q_min, q_max + 1))})
    report = run_config(cfg)
    raise SystemExit(_emit_sweep(report, cfg, fmt))


@main.group()
def disintegrate():
    """Central-extension block decomposition."""


@disintegrate.command("heisenberg")
@click.option("--m", type=int, required=True)
@click.pass_context
def disintegrate_heisenberg(ctx, m):
    _finish(_cfg(ctx, "disintegrate.heisenberg", {"m": m}))


@disintegrate.command("custom")
@click.option("--a-cycles", required=True, help="JSON list of cycle sizes")
@click.option("--group", required=True, help="JSON group descriptor")
@click.option("--nu", required=True, type=click.Path(exists=True),
              help="JSON file: list of [g, h, value] entries")
@click.pass_context
def disintegrate_custom(ctx, a_cycles, group, nu):
    with open(nu) as fh:
        nu_entries = json.load(fh)
    params = {"aCycles": _parse_json_arg(a_cycles, "cycle list"),
              "group": _parse_json_arg(group, "group descriptor"),
              "nu": nu_entries}
    _finish(_cfg(ctx, "disintegrate.custom", params))


@main.group()
def conjugacy():
    """Conjugacy obstruction decisions."""


@conjugacy.command("decide")
@click.option("--alpha1", default=None, help="N:s")
@click.option("--alpha2", default=None, help="N:t")
@click.option("--a", "a_", default="1,1,0,1", show_default=True)
@click.option("--b", "b_", default="1,0,1,1", show_default=True)
@click.option("--symbolic", is_flag=True, default=False)
@click.option("--power", type=int, default=None,
              help="with --symbolic: alpha2 = alpha1^power instead of independent")
@click.pass_context
def conjugacy_decide(ctx, alpha1, alpha2, a_, b_, symbolic, power):
    if not symbolic and (alpha1 is None or alpha2 is None):
        raise click.UsageError("need --alpha1 and --alpha2 (or --symbolic)")
    params = {"alpha1": alpha1, "alpha2": alpha2, "a": a_, "b": b_,
              "symbolic": symbolic, "power": power}
    _finish(_cfg(ctx, "conjugacy.decide", params))


@conjugacy.command("sweep")
@click.option("--n", type=int, required=True)
@click.option("--a", "a_", default="1,1,0,1", show_default=True)
@click.option("--b", "b_", default="1,0,1,1", show_default=True)
@click.option("--format", "fmt", type=click.Choice(["json", "csv"]), default="json")
@click.pass_context
def conjugacy_sweep(ctx, n, a_, b_, fmt):
    cfg = _cfg(ctx, "conjugacy.sweep", {"n": n, "a": a_, "b": b_})
    report = run_config(cfg)
    raise SystemExit(_emit_sweep(report, cfg, fmt))


def _emit_sweep(report: dict, config: ExperimentConfig, fmt: str) -> int:
    if fmt == "json":
        return emit_report(report, config)
    rows = report["results"]["rows"]
    buf = io.StringIO()
    if rows:
        writer = csv.DictWriter(buf, fieldnames=list(rows[0].keys()))
        writer.writeheader()
        writer.writerows(rows)
    text = buf.getvalue()
    if config.out:
        with open(config.out, "w") as fh:
            fh.write(text)
    else:
        click.echo(text, nl=False)
    return 0 if report["status"] == "ok" else 1


if __name__ == "__main__":
    main()
