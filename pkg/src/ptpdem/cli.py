"""Command-line front end: config-driven pipeline stages with CSV reports.

Each subcommand runs one pipeline stage and writes, into --output-dir:

* ``report.kv``   -- key=value lines; the resolved configuration is embedded
  under ``config.*`` keys (reproducibility header) and the only
  non-deterministic entry is ``meta.timestamp``;
* ``*.csv``       -- data tables, 17 significant digits, locale-independent;
* ``plotdata_*.csv`` -- two-column series for external plotting.

Exit status: 0 success, 2 validation/config error, 3 numerical failure
(Riccati pole, quadrature non-convergence, residual or eigensolve failure),
4 non-normalizable state.  On failure the report still gets written and
names the failing stage.

Without --config the profile defaults to the constant-mass oscillator
family (beta1 = -1, omega^2 = 4*beta2) at the given --beta2.
"""

import argparse
import sys
from dataclasses import dataclass
from datetime import datetime, timezone
from pathlib import Path
from typing import Optional

import numpy as np

from . import __version__
from .errors import (
    ConfigError,
    NonNormalizable,
    NumericalError,
    ValidationError,
)
from .ladder import build_ladder, deformed_observables
from .lattice import factorization_residual, verify_profile
from .metric import build_metric
from .oracles import random_smooth_basket
from .profiles import (
    DEFAULT_GRID,
    GridSpec,
    ho_profile,
    load_config,
    profile_from_config,
)
from .states import (
    boundary_density_ratio,
    coherent_state,
    convention_residuals,
    variance_report,
)
from .susy import effective_fields, solve_K_riccati, susy_package
from .uncertainty import assemble_report, ho_case_study

__all__ = ["RunConfig", "run", "main"]

SUBCOMMANDS = ("metric", "susy", "factorize", "coherent", "uncertainty",
               "verify", "demo")

BOUNDARY_WARN_RATIO = 1e-12


@dataclass
class RunConfig:
    """Resolved invocation: profile source, stage, outputs, stage knobs."""

    subcommand: str
    output_dir: Path
    config: Optional[dict] = None
    beta2: Optional[float] = None
    alpha_re: float = 0.0
    alpha_im: float = 0.0
    convention: str = "eta"
    grid_l: Optional[float] = None
    grid_n: Optional[int] = None
    sweep: Optional[tuple] = None  # (lo, hi, n)
    mu: float = 0.0
    ic: float = 0.0
    a0: float = 1.0


# ---------------------------------------------------------------------------
# formatting / writers


def _fmt(value):
    if isinstance(value, (bool, np.bool_)):
        return "true" if value else "false"
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, (float, np.floating)):
        return "%.17g" % float(value)
    return str(value)


def _write_report(path, pairs):
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        for key, value in pairs:
            fh.write(f"{key}={_fmt(value)}\n")


def _write_csv(path, header, columns):
    columns = [np.asarray(col) for col in columns]
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(",".join(header) + "\n")
        for row in zip(*columns):
            fh.write(",".join(_fmt(v) for v in row) + "\n")


# ---------------------------------------------------------------------------
# profile resolution


def _resolve(rc):
    """Build (profile, grid, config_pairs) from file config and flag overrides."""
    if rc.config is not None:
        cfg = dict(rc.config)
        if rc.beta2 is not None:
            cfg["beta2"] = rc.beta2
        grid_cfg = dict(cfg.get("grid", {}) or {})
        if rc.grid_l is not None:
            grid_cfg["L"] = rc.grid_l
        if rc.grid_n is not None:
            grid_cfg["N"] = rc.grid_n
        if grid_cfg:
            cfg["grid"] = grid_cfg
        profile, grid = profile_from_config(cfg)
    else:
        beta2 = 1.0 if rc.beta2 is None else rc.beta2
        grid = GridSpec(L=rc.grid_l if rc.grid_l is not None else DEFAULT_GRID.L,
                        N=rc.grid_n if rc.grid_n is not None else DEFAULT_GRID.N)
        profile = ho_profile(beta2, validation_grid=grid)
    params = profile.params
    pairs = [
        ("config.subcommand", rc.subcommand),
        ("config.mass", profile.mass.descriptor),
        ("config.potential", profile.potential.descriptor),
        ("config.beta1", params.beta1),
        ("config.beta2", params.beta2),
        ("config.hbar", params.hbar),
        ("config.grid_L", grid.L),
        ("config.grid_N", grid.N),
        ("config.convention", rc.convention),
        ("config.alpha_re", rc.alpha_re),
        ("config.alpha_im", rc.alpha_im),
        ("config.output_dir", str(rc.output_dir)),
    ]
    if rc.subcommand == "susy":
        pairs += [("config.mu", rc.mu), ("config.ic", rc.ic),
                  ("config.a0", rc.a0)]
    if rc.sweep is not None:
        lo, hi, n = rc.sweep
        pairs += [("config.sweep_lo", lo), ("config.sweep_hi", hi),
                  ("config.sweep_n", n)]
    return profile, grid, pairs


def _chain_pairs(report, prefix=""):
    chain = report.chain
    pairs = [
        (prefix + "var_Phi_cf", chain.var_Phi_cf),
        (prefix + "var_Pi_cf", chain.var_Pi_cf),
        (prefix + "du0_var", chain.du0_var),
        (prefix + "bound_paper_sq", chain.bound_paper_sq),
        (prefix + "bound_standard_sq", chain.bound_standard_sq),
        (prefix + "product_cf", chain.product_cf),
        (prefix + "decomposition_tail", chain.decomposition_tail),
        (prefix + "chain_non_physical", chain.non_physical),
        (prefix + "quad_var_Phi", report.quad_var_Phi),
        (prefix + "quad_var_Pi", report.quad_var_Pi),
        (prefix + "quad_bound_sq", report.quad_bound_sq),
        (prefix + "product_quad", report.product_quad),
        (prefix + "delta_Phi", report.delta_Phi),
        (prefix + "delta_Pi", report.delta_Pi),
        (prefix + "violated_paper_convention", report.violated_paper_convention),
        (prefix + "violated_standard_convention",
         report.violated_standard_convention),
        (prefix + "beta0", report.beta0),
        (prefix + "inequality_74_holds", report.inequality_74_holds),
        (prefix + "convention", report.convention),
    ]
    if report.demo is not None:
        demo = report.demo
        pairs += [
            (prefix + "demo_var_Pi_cf", demo.var_Pi),
            (prefix + "demo_var_Phi_cf", demo.var_Phi),
            (prefix + "demo_bound_sq_cf", demo.bound_sq),
            (prefix + "demo_product_cf", demo.product),
            (prefix + "demo_dx_sq_cf", demo.dx_sq),
            (prefix + "demo_c0_abs_cf", demo.c0_abs),
            (prefix + "demo_non_physical", demo.non_physical),
        ]
    return pairs


# ---------------------------------------------------------------------------
# stages


def _stage_metric(rc, profile, grid, out, pairs):
    metric = build_metric(profile, grid)
    x = grid.nodes()
    _write_csv(out / "metric.csv", ["x", "lambda", "eta"],
               [x, metric.lambda_samples, metric.eta_samples])
    _write_csv(out / "plotdata_eta.csv", ["x", "eta"], [x, metric.eta_samples])
    pairs += [
        ("metric.sigma", profile.params.sigma),
        ("metric.hermitian", profile.params.hermitian),
        ("metric.lambda_at_L", metric.lambda_samples[-1]),
        ("metric.eta_max", float(np.max(metric.eta_samples))),
    ]


def _stage_susy(rc, profile, grid, out, pairs):
    fields = effective_fields(profile, grid)
    K = solve_K_riccati(fields, profile, mu=rc.mu, ic_value=rc.ic, grid=grid)
    pkg = susy_package(fields, K, rc.a0, profile)
    x = grid.nodes()
    _write_csv(out / "susy.csv",
               ["x", "u", "V_e", "K", "phi", "V_partner"],
               [x, fields.u, fields.V_e, K.field_samples, pkg.phi_samples,
                pkg.partner_potential])
    _write_csv(out / "plotdata_partner_potential.csv", ["x", "V_partner"],
               [x, pkg.partner_potential])
    pairs += [
        ("susy.mu", K.mu),
        ("susy.ic_value", K.ic_value),
        ("susy.route", K.route),
        ("susy.residual_norm", K.residual_norm),
        ("susy.a0", pkg.a0),
    ]


def _stage_factorize(rc, profile, grid, out, pairs):
    pkg = build_ladder(profile, grid)
    obs = deformed_observables(pkg)
    x = grid.nodes()
    _write_csv(out / "factorize.csv",
               ["x", "a_minus", "u0", "phi_minus", "phi_plus", "Phi",
                "commutator_field"],
               [x, pkg.a_minus, pkg.u0, pkg.phi_minus.field_samples,
                pkg.phi_plus, obs.Phi, obs.commutator_field])
    _write_csv(out / "plotdata_phi_minus.csv", ["x", "phi_minus"],
               [x, pkg.phi_minus.field_samples])
    basket = random_smooth_basket(grid, count=16, seed=7)
    fact = factorization_residual(pkg, profile, grid, basket)
    pairs += [
        ("factorize.route", pkg.phi_minus.route),
        ("factorize.residual_norm", pkg.phi_minus.residual_norm),
        ("factorize.lambda0", pkg.lambda0),
        ("factorize.a_plus_tag", pkg.a_plus_tag),
        ("factorize.factorization_residual", fact),
    ]


def _stage_coherent(rc, profile, grid, out, pairs):
    metric = build_metric(profile, grid)
    pkg = build_ladder(profile, grid)
    alpha = complex(rc.alpha_re, rc.alpha_im)
    state = coherent_state(pkg, alpha, metric, convention=rc.convention)
    weight = metric.eta_samples if rc.convention == "eta" else 1.0
    density = weight * np.abs(state.samples) ** 2
    x = grid.nodes()
    _write_csv(out / "coherent.csv",
               ["x", "psi_re", "psi_im", "weighted_density"],
               [x, state.samples.real, state.samples.imag, density])
    _write_csv(out / "plotdata_density.csv", ["x", "weighted_density"],
               [x, density])
    ratio = boundary_density_ratio(state.samples, metric, rc.convention)
    if ratio > BOUNDARY_WARN_RATIO:
        pairs.append(("warning.boundary_density_ratio", ratio))
        print(f"warning: weighted density at |x|=L is {ratio:.3e} of its peak",
              file=sys.stderr)
    moments = variance_report(state, pkg, metric)
    residuals = convention_residuals(state, pkg, metric)
    pairs += [
        ("coherent.c0_re", state.c0.real),
        ("coherent.c0_im", state.c0.imag),
        ("coherent.c0_abs", abs(state.c0)),
        ("coherent.boundary_density_ratio", ratio),
        ("coherent.mean_Phi", moments.mean_Phi),
        ("coherent.mean_Pi", moments.mean_Pi),
        ("coherent.var_Phi", moments.var_Phi),
        ("coherent.var_Pi", moments.var_Pi),
        ("coherent.mean_commutator_im", moments.mean_commutator.imag),
        ("coherent.mean_x", moments.mean_x),
        ("coherent.var_x", moments.var_x),
        ("coherent.beta_weight", moments.beta_weight),
    ]
    pairs += [(f"coherent.identity_residual.{name}", value)
              for name, value in sorted(residuals.items())]


def _stage_uncertainty(rc, profile, grid, out, pairs):
    metric = build_metric(profile, grid)
    pkg = build_ladder(profile, grid)
    alpha = complex(rc.alpha_re, rc.alpha_im)
    state = coherent_state(pkg, alpha, metric, convention=rc.convention)
    report = assemble_report(profile, pkg, state, metric)
    pairs += _chain_pairs(report, prefix="uncertainty.")


def _case_study_for(rc, profile, grid, beta2):
    m0 = float(np.asarray(profile.mass.m(0.0), dtype=float))
    return ho_case_study(beta2, m=m0, hbar=profile.params.hbar, grid=grid,
                         convention=rc.convention)


def _stage_demo(rc, profile, grid, out, pairs):
    if profile.mass.descriptor != "constant":
        raise ConfigError(
            "the demo stage reproduces the constant-mass oscillator family; "
            "use a constant mass profile")
    if rc.sweep is None:
        report = _case_study_for(rc, profile, grid, profile.params.beta2)
        pairs += _chain_pairs(report, prefix="demo.")
        return
    lo, hi, n = rc.sweep
    values = np.linspace(lo, hi, n)
    rows = {name: [] for name in
            ("beta2", "var_Phi_cf", "var_Pi_cf", "var_Phi_quad",
             "var_Pi_quad", "product_cf", "product_quad", "bound_paper",
             "bound_standard", "violated_paper", "violated_standard")}
    for beta2 in values:
        report = _case_study_for(rc, profile, grid, float(beta2))
        rows["beta2"].append(float(beta2))
        rows["var_Phi_cf"].append(report.chain.var_Phi_cf)
        rows["var_Pi_cf"].append(report.chain.var_Pi_cf)
        rows["var_Phi_quad"].append(report.quad_var_Phi)
        rows["var_Pi_quad"].append(report.quad_var_Pi)
        rows["product_cf"].append(report.chain.product_cf)
        rows["product_quad"].append(report.product_quad)
        rows["bound_paper"].append(report.chain.bound_paper_sq)
        rows["bound_standard"].append(report.chain.bound_standard_sq)
        rows["violated_paper"].append(report.violated_paper_convention)
        rows["violated_standard"].append(report.violated_standard_convention)
    header = list(rows)
    _write_csv(out / "sweep.csv", header, [rows[name] for name in header])
    _write_csv(out / "plotdata_product_quad.csv", ["beta2", "product_quad"],
               [rows["beta2"], rows["product_quad"]])
    _write_csv(out / "plotdata_bound_standard.csv",
               ["beta2", "bound_standard"],
               [rows["beta2"], rows["bound_standard"]])
    pairs += [
        ("demo.sweep_points", len(values)),
        ("demo.any_violated_paper", bool(np.any(rows["violated_paper"]))),
        ("demo.all_violated_paper", bool(np.all(rows["violated_paper"]))),
        ("demo.any_violated_standard", bool(np.any(rows["violated_standard"]))),
    ]


def _stage_verify(rc, profile, grid, out, pairs):
    report = verify_profile(profile, grid)
    eigs = report.spectrum.eigenvalues
    _write_csv(out / "eigenvalues.csv",
               ["index", "re", "im"],
               [np.arange(len(eigs)), eigs.real, eigs.imag])
    pairs += [
        ("verify.pseudo_hermiticity_residual", report.pseudo_hermiticity_residual),
        ("verify.pt_commutator_residual", report.pt_commutator_residual),
        ("verify.factorization_residual", report.factorization_residual),
        ("verify.max_imag_eigenvalue", report.max_imag_eigenvalue),
        ("verify.boundary_layers_excluded", report.boundary_layers_excluded),
        ("verify.hermitian_solve", report.spectrum.hermitian_solve),
    ]


_STAGES = {
    "metric": _stage_metric,
    "susy": _stage_susy,
    "factorize": _stage_factorize,
    "coherent": _stage_coherent,
    "uncertainty": _stage_uncertainty,
    "demo": _stage_demo,
    "verify": _stage_verify,
}


# ---------------------------------------------------------------------------
# entry points


def run(rc):
    """Execute one resolved invocation; returns the process exit status."""
    out = Path(rc.output_dir)
    out.mkdir(parents=True, exist_ok=True)
    pairs = []
    stage = "resolve-profile"
    try:
        if rc.convention not in ("eta", "flat"):
            raise ConfigError(f"unknown convention {rc.convention!r}")
        if rc.sweep is not None and rc.sweep[2] < 2:
            raise ConfigError("sweep needs at least 2 points (lo:hi:n, n >= 2)")
        profile, grid, pairs = _resolve(rc)
        stage = rc.subcommand
        _STAGES[rc.subcommand](rc, profile, grid, out, pairs)
    except (ValidationError, NumericalError, NonNormalizable) as exc:
        pairs += [
            ("error.stage", stage),
            ("error.type", type(exc).__name__),
            ("error.message", str(exc).replace("\n", " ")),
        ]
        pairs.append(("meta.version", __version__))
        pairs.append(("meta.timestamp",
                      datetime.now(timezone.utc).isoformat()))
        _write_report(out / "report.kv", pairs)
        print(f"error [{stage}] {type(exc).__name__}: {exc}", file=sys.stderr)
        if isinstance(exc, NonNormalizable):
            return 4
        if isinstance(exc, ValidationError):
            return 2
        return 3
    pairs.append(("meta.version", __version__))
    pairs.append(("meta.timestamp", datetime.now(timezone.utc).isoformat()))
    _write_report(out / "report.kv", pairs)
    return 0


def _parse_sweep(text):
    parts = text.split(":")
    if len(parts) != 3:
        raise argparse.ArgumentTypeError("sweep must be lo:hi:n")
    try:
        lo, hi, n = float(parts[0]), float(parts[1]), int(parts[2])
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"bad sweep spec: {exc}")
    return lo, hi, n


def _build_parser():
    parser = argparse.ArgumentParser(
        prog="ptpdem",
        description="PT-symmetric position-dependent-mass lab: metric, SUSY "
                    "partner, ladder factorization, coherent states, "
                    "uncertainty analysis, lattice verification.",
    )
    sub = parser.add_subparsers(dest="subcommand", required=True)
    for name in SUBCOMMANDS:
        sp = sub.add_parser(name)
        sp.add_argument("--config", type=str, default=None,
                        help="YAML profile configuration")
        sp.add_argument("--beta2", type=float, default=None)
        sp.add_argument("--alpha-re", type=float, default=0.0)
        sp.add_argument("--alpha-im", type=float, default=0.0)
        sp.add_argument("--convention", choices=("eta", "flat"), default="eta")
        sp.add_argument("--grid-n", type=int, default=None)
        sp.add_argument("--grid-l", type=float, default=None)
        sp.add_argument("--beta2-sweep", type=_parse_sweep, default=None,
                        metavar="LO:HI:N")
        sp.add_argument("--output-dir", type=str, default=".")
        if name == "susy":
            sp.add_argument("--mu", type=float, default=0.0)
            sp.add_argument("--ic", type=float, default=0.0)
            sp.add_argument("--a0", type=float, default=1.0)
    return parser


def main(argv=None):
    args = _build_parser().parse_args(argv)
    try:
        cfg_dict = load_config(args.config) if args.config else None
    except (OSError, ConfigError) as exc:
        print(f"error [load-config] {exc}", file=sys.stderr)
        return 2
    rc = RunConfig(
        subcommand=args.subcommand,
        output_dir=Path(args.output_dir),
        config=cfg_dict,
        beta2=args.beta2,
        alpha_re=args.alpha_re,
        alpha_im=args.alpha_im,
        convention=args.convention,
        grid_l=args.grid_l,
        grid_n=args.grid_n,
        sweep=args.beta2_sweep,
        mu=getattr(args, "mu", 0.0),
        ic=getattr(args, "ic", 0.0),
        a0=getattr(args, "a0", 1.0),
    )
    return run(rc)


if __name__ == "__main__":
    sys.exit(main())
