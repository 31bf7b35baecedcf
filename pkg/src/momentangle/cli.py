"""Command-line driver: configuration ingestion, dispatch, report emission.

Exit status: 0 all checks pass, 1 some check fails, 2 configuration or
usage error, 3 precondition violation, 4 numeric non-convergence.
"""

from __future__ import annotations

import argparse
import os
import sys

from . import procedures as proc
from .charts import NonConvergenceError
from .config_io import (
    ConfigError,
    ConfigFile,
    config_from_double,
    config_from_polytope,
    config_from_quadrics,
    double_from_config,
    parse_config,
    polytope_from_config,
    quadrics_from_config,
    render_config,
)
from .polytope import EmptyPolytopeError, UnboundedPolytopeError, is_delzant, is_simple
from .quadric_config import CanonicalFormError, gale_dual
from .reduction_catalog import (
    StackValidationError,
    catalog_double,
    catalog_names,
    catalog_polytope,
    catalog_quadrics,
    classify_N,
)
from .report import VerificationReport
from .submanifold_numerics import InvarianceError, MetricSpec

COMMANDS = (
    "gale",
    "check-simple",
    "check-delzant",
    "check-free",
    "check-nondeg",
    "classify",
    "verify-lagrangian",
    "verify-minimal",
    "verify-hminimal",
    "verify-noether",
    "verify-variation",
    "verify-ntilde",
    "report-all",
)

_TOL_FIELDS = {
    "membership": "tol_membership",
    "frame": "tol_frame",
    "curvature": "tol_curvature",
    "variation": "tol_variation",
    "step": "step",
    "step_chart": "step_chart",
    "step_divergence": "step_divergence",
    "step_gradient": "step_gradient",
    "newton": "newton_tol",
}


def _spec_from(cfg: ConfigFile, flag_tols: list[tuple[str, float]]) -> MetricSpec:
    spec = MetricSpec()
    merged = dict(cfg.tols)
    for name, value in _env_tols():
        merged[name] = value
    for name, value in flag_tols:
        merged[name] = value
    for name, value in merged.items():
        field_name = _TOL_FIELDS.get(name, name)
        if not hasattr(spec, field_name):
            raise ConfigError(f"unknown tolerance name {name!r}")
        setattr(spec, field_name, float(value))
    return spec


def _env_tols():
    out = []
    for key, value in os.environ.items():
        if key.startswith("MOMENTANGLE_TOL_"):
            out.append((key[len("MOMENTANGLE_TOL_"):].lower(), float(value)))
    return out


def _resolve_seed(cfg: ConfigFile, flag_seed: int | None) -> int:
    if flag_seed is not None:
        return flag_seed
    env = os.environ.get("MOMENTANGLE_SEED")
    if env is not None:
        return int(env)
    return cfg.seed


def _resolve_samples(cfg: ConfigFile, flag_samples: int | None, default: int = 100) -> int:
    if flag_samples is not None:
        return flag_samples
    if cfg.samples is not None:
        return cfg.samples
    return default


def run_command(
    command: str,
    cfg: ConfigFile,
    seed: int,
    samples: int,
    spec: MetricSpec,
    l_param: int | None = None,
    out=None,
) -> VerificationReport:
    """Dispatch one verification command over a parsed configuration."""
    out = sys.stdout if out is None else out
    rep = VerificationReport(seed=seed)
    if command == "gale":
        P = polytope_from_config(cfg)
        Q = gale_dual(P)
        out.write(render_config(config_from_quadrics(Q, seed=seed)))
        rep.add_bool("gale-computed", True)
        return rep

    if command in ("check-simple", "check-delzant"):
        P = polytope_from_config(cfg)
        if command == "check-simple":
            v = is_simple(P)
            rep.add_bool("simple", bool(v), detail=str(v.witness) if not v else "")
        else:
            v = is_delzant(P)
            rep.add_bool("delzant", bool(v), detail=str(v.witness) if not v else "")
        return rep

    if command == "verify-ntilde":
        D = double_from_config(cfg)
        rep.extend(proc.ntilde_report(D, samples=samples, seed=seed, spec=spec))
        if D.gamma_cfg.num_quadrics == 1 and len(set(D.gamma_cfg.gamma.entries[0])) == 1:
            rep.extend(proc.cp_chart_report(D, samples=min(samples, 50), seed=seed, spec=spec))
        return rep

    if cfg.mode == "double" and command == "report-all":
        D = double_from_config(cfg)
        for name, check in D.checks.items():
            ok = check.all_ok if hasattr(check, "all_ok") else bool(check)
            required = not name.endswith("_delta") or name.startswith("nondeg")
            if required:
                rep.add_bool(name, ok)
            else:
                rep.add_bool(name, True, detail=f"informational: {ok}")
        rep.extend(proc.ntilde_report(D, samples=samples, seed=seed, spec=spec))
        if D.gamma_cfg.num_quadrics == 1 and len(set(D.gamma_cfg.gamma.entries[0])) == 1:
            rep.extend(proc.cp_chart_report(D, samples=min(samples, 50), seed=seed, spec=spec))
        return rep

    Q = quadrics_from_config(cfg)

    if command == "check-free":
        rep.extend(proc.quadrics_core_report(Q))
        return rep
    if command == "check-nondeg":
        rep.extend(proc.quadrics_core_report(Q))
        return rep
    if command == "classify":
        l_value = l_param if l_param is not None else cfg.l
        desc = classify_N(Q, l=l_value)
        out.write(f"{desc.name}\n")
        for fact in desc.facts:
            out.write(f"  {fact}\n")
        rep.add_bool("classified", True, detail=desc.name)
        return rep
    if command == "verify-lagrangian":
        rep.extend(proc.point_residual_report(Q, samples=samples, seed=seed, spec=spec, with_minimal=False))
        return rep
    if command == "verify-minimal":
        rep.extend(proc.point_residual_report(Q, samples=samples, seed=seed, spec=spec))
        return rep
    if command == "verify-hminimal":
        rep.extend(proc.hminimality_report(Q, points=min(samples, 20), seed=seed, spec=spec))
        if Q.num_quadrics == 1 and Q.ambient_dim in (2, 3):
            rep.extend(proc.hamiltonian_stationarity_report(Q, seed=seed, spec=spec))
        return rep
    if command == "verify-noether":
        rep.extend(proc.noether_report(Q, seed=seed, spec=spec))
        return rep
    if command == "verify-variation":
        rep.extend(proc.first_variation_report(Q, seed=seed, spec=spec))
        return rep
    if command == "report-all":
        if cfg.mode == "polytope":
            P = polytope_from_config(cfg)
            rep.extend(proc.gale_report(P, seed=seed))
            rep.extend(proc.polytope_report(P))
            rep.extend(proc.delzant_freeness_report(P))
        rep.extend(proc.quadrics_core_report(Q))
        rep.extend(proc.point_residual_report(Q, samples=samples, seed=seed, spec=spec))
        rep.extend(proc.vo_symmetry_report(Q, samples=samples, seed=seed, spec=spec))
        rep.extend(proc.noether_report(Q, seed=seed, spec=spec))
        rep.extend(proc.hminimality_report(Q, points=min(samples, 20), seed=seed, spec=spec))
        if Q.num_quadrics == 1 and Q.ambient_dim in (1, 2):
            rep.extend(proc.first_variation_report(Q, seed=seed, spec=spec))
        if Q.num_quadrics == 1 and Q.ambient_dim in (2, 3):
            rep.extend(proc.coarea_report(Q, seed=seed, spec=spec))
            rep.extend(proc.hamiltonian_stationarity_report(Q, seed=seed, spec=spec, n_fields=3))
        return rep

    raise ConfigError(f"unknown command {command!r}")


def _catalog_config(name: str) -> ConfigFile:
    try:
        if name in ("cp2-torus", "rp2"):
            return config_from_double(catalog_double(name))
        if name.startswith(("one-quadric:", "two-quadrics:")):
            return config_from_quadrics(catalog_quadrics(name))
        return config_from_polytope(catalog_polytope(name))
    except KeyError as exc:
        raise ConfigError(str(exc)) from exc


def main(argv: list[str] | None = None) -> int:
    parser = argparse.ArgumentParser(
        prog="momentangle",
        description="Build quadric intersections from polytope data and verify "
        "minimality / Lagrangian / H-minimality claims numerically.",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    for cmd in COMMANDS:
        p = sub.add_parser(cmd)
        p.add_argument("config", help="path to an instance file, or catalog:<name>")
        p.add_argument("--seed", type=int, default=None)
        p.add_argument("--samples", type=int, default=None)
        p.add_argument("--l", type=int, default=None, help="twisting parameter for classify")
        p.add_argument("--tol", nargs=2, action="append", default=[], metavar=("NAME", "VALUE"))
        p.add_argument("--report-file", default=None, help="write the machine-readable report here")
    pc = sub.add_parser("emit-catalog")
    pc.add_argument("name", help="catalog instance name; 'list' prints the catalog")
    pc.add_argument("output", nargs="?", default="-", help="output path (default: stdout)")

    args = parser.parse_args(argv)

    try:
        if args.command == "emit-catalog":
            if args.name == "list":
                for n in catalog_names():
                    print(n)
                return 0
            text = render_config(_catalog_config(args.name))
            if args.output == "-":
                sys.stdout.write(text)
            else:
                with open(args.output, "w") as fh:
                    fh.write(text)
            return 0

        if args.config.startswith("catalog:"):
            cfg = _catalog_config(args.config[len("catalog:"):])
        else:
            with open(args.config) as fh:
                cfg = parse_config(fh.read())
        seed = _resolve_seed(cfg, args.seed)
        samples = _resolve_samples(cfg, args.samples)
        spec = _spec_from(cfg, [(n, float(v)) for n, v in args.tol])
        rep = run_command(args.command, cfg, seed, samples, spec, l_param=args.l)
        sys.stdout.write(rep.render_human())
        if args.report_file:
            with open(args.report_file, "w") as fh:
                fh.write(rep.render_machine())
        return 0 if rep.overall else 1
    except FileNotFoundError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except ConfigError as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return 2
    except (
        StackValidationError,
        InvarianceError,
        UnboundedPolytopeError,
        EmptyPolytopeError,
        CanonicalFormError,
    ) as exc:
        print(f"precondition violation: {exc}", file=sys.stderr)
        return 3
    except ValueError as exc:
        print(f"precondition violation: {exc}", file=sys.stderr)
        return 3
    except NonConvergenceError as exc:
        print(f"numeric failure: {exc}", file=sys.stderr)
        return 4


if __name__ == "__main__":
    sys.exit(main())
