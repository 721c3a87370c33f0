"""Command-line front end: single-point reports, parameter sweeps, sampling
runs, the qubit violation scan, finite-thermalization sweeps and oracle
comparisons.  Delimited outputs are written with 17 significant digits and
are byte-stable for fixed inputs and seeds; figures are rendered next to
each output file unless suppressed.

Exit codes: 0 ok, 1 usage error, 2 domain error, 3 tolerance failure.
"""

from __future__ import annotations

import argparse
import csv
import json
import math
import sys
from pathlib import Path

import numpy as np

from . import plots
from .bosonic import (
    char_fn,
    efficiency_and_cop,
    entropy_production,
    moments,
    tur_report,
)
from .core import (
    DomainError,
    EngineParams,
    Occupations,
    Statistics,
    beta_from_occupation,
    classify_regime,
    f_bound,
)
from .distribution import (
    bosonic_pmf,
    bosonic_pmf_from_occupations,
    sample,
    squeeze_pmf,
    write_samples_csv,
)
from .fock import (
    BeamSplitter,
    CubicExchange,
    TruncationError,
    TruncationSpec,
    TwoModeSqueeze,
    char_fn_oracle,
    joint_distribution,
)
from .qubit import (
    qubit_moments,
    qubit_oracle_joint,
    qubit_tur_report,
    three_point_pmf,
    violation_scan,
)
from .strokes import (
    CubicParams,
    SqueezeParams,
    cubic_entropy_relation,
    cubic_heat_engine_condition,
    cubic_sigma_from_work,
    delta_structure_report,
    squeeze_moments,
)
from .thermalization import (
    ThermalizationParams,
    partial_inv_snr,
    partial_tur_report,
    steady_occupations,
)

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_DOMAIN = 2
EXIT_TOLERANCE = 3

FORMULAS = {
    "bosonic": {
        "n_x": "1/(exp(beta_x*omega_x) - 1)",
        "mean_w": "(omega_a - omega_b)*(n_b - n_a)*sin(theta)^2",
        "mean_qh": "omega_a*(n_a - n_b)*sin(theta)^2",
        "var_w": "(omega_a - omega_b)^2*(n_a + n_b + 2*n_a*n_b + (n_a - n_b)^2*sin(theta)^2)*sin(theta)^2",
        "sigma": "(beta_a*omega_a - beta_b*omega_b)*(n_b - n_a)*sin(theta)^2",
        "eta": "1 - omega_b/omega_a",
        "zeta": "omega_b/(omega_a - omega_b)",
        "inv_snr_w": "(n_a + n_b + 2*n_a*n_b)/((n_a - n_b)^2*sin(theta)^2) + 1",
        "exact_rhs": "h(beta_a*omega_a - beta_b*omega_b)/sigma + 1 with h(x) = x*coth(x/2)",
    },
    "qubit": {
        "n_x": "1/(exp(beta_x*omega_x) + 1)",
        "mean_qh": "omega_a*(n_a - n_b)*sin(theta)^2",
        "var_qh": "omega_a^2*((n_a + n_b - 2*n_a*n_b)*sin(theta)^2 - (n_a - n_b)^2*sin(theta)^4)",
        "inv_snr_w": "(n_a + n_b - 2*n_a*n_b)/((n_a - n_b)^2*sin(theta)^2) - 1",
        "exact_rhs": "h(beta_a*omega_a - beta_b*omega_b)/sigma - 1 with h(x) = x*coth(x/2)",
    },
    "squeeze": {
        "mean_w": "(omega_a + omega_b)*(n_a + n_b + 1)*sinh(r)^2",
        "sigma": "(beta_a*omega_a + beta_b*omega_b)/(omega_a + omega_b)*mean_w",
        "inv_snr_w": "(n_a + n_b + 2*n_a*n_b + 1)/((n_a + n_b + 1)^2*sinh(r)^2) + 1",
        "exact_rhs": "h(beta_a*omega_a + beta_b*omega_b)/sigma + 1 with h(x) = x*coth(x/2)",
    },
    "cubic": {
        "sigma_from_qh": "-(beta_a*omega_a - 2*omega_b*beta_b)/omega_a*mean_qh",
        "sigma_from_w": "(beta_a*omega_a - 2*omega_b*beta_b)/(omega_a - 2*omega_b)*mean_w",
        "engine_condition": "beta_a*omega_a < 2*beta_b*omega_b and omega_a > 2*omega_b",
        "efficiency_on_support": "1 - 2*omega_b/omega_a",
    },
}


class CliParser(argparse.ArgumentParser):
    """argparse with usage failures mapped to exit code 1."""

    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"error: {message}", file=sys.stderr)
        raise SystemExit(EXIT_USAGE)


class ToleranceFailure(Exception):
    pass


def _g17(value) -> str:
    return f"{value:.17g}"


def _sanitize(obj):
    """Round-trippable JSON: non-finite floats become strings."""
    if isinstance(obj, dict):
        return {k: _sanitize(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_sanitize(v) for v in obj]
    if isinstance(obj, (np.floating, float)):
        v = float(obj)
        if math.isfinite(v):
            return v
        return "inf" if v > 0 else ("-inf" if v < 0 else "nan")
    if isinstance(obj, (np.bool_, bool)):
        return bool(obj)
    if isinstance(obj, np.integer):
        return int(obj)
    return obj


def _emit_json(doc: dict, out: str | None) -> None:
    text = json.dumps(_sanitize(doc), indent=2) + "\n"
    if out is None or out == "-":
        sys.stdout.write(text)
    else:
        Path(out).write_text(text)


def _write_csv(path: str | None, header: list[str], rows) -> None:
    if path is None or path == "-":
        writer = csv.writer(sys.stdout)
        writer.writerow(header)
        writer.writerows(rows)
    else:
        with open(path, "w", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(header)
            writer.writerows(rows)


def _plot_path(out: str | None):
    if out is None or out == "-":
        return None
    return str(Path(out).with_suffix(".png"))


# -- argument plumbing ---------------------------------------------------------


def _add_engine_args(parser: argparse.ArgumentParser):
    parser.add_argument("--wa", type=float, default=1.0, help="frequency of mode a")
    parser.add_argument("--wb", type=float, default=0.6, help="frequency of mode b")
    parser.add_argument("--ba", type=float, default=1.0, help="inverse temperature of bath a")
    parser.add_argument("--bb", type=float, default=2.0, help="inverse temperature of bath b")
    theta = parser.add_mutually_exclusive_group()
    theta.add_argument("--theta", type=float, default=None, help="coupling angle in radians")
    theta.add_argument(
        "--theta-frac", type=float, default=None, help="coupling angle as a fraction of pi"
    )
    parser.add_argument("--phi", type=float, default=0.0, help="coupling phase (irrelevant)")
    parser.add_argument(
        "--na", type=float, default=None, help="occupation of bath a (overrides --ba)"
    )
    parser.add_argument(
        "--nb", type=float, default=None, help="occupation of bath b (overrides --bb)"
    )


def _add_config_arg(parser: argparse.ArgumentParser):
    parser.add_argument(
        "--config", type=str, default=None, help="JSON file supplying flag defaults"
    )


def _apply_config(
    parser: argparse.ArgumentParser,
    subparsers: dict[str, argparse.ArgumentParser],
    argv: list[str],
) -> argparse.Namespace:
    """Parse with config-file defaults: flags on the command line win."""
    pre, _ = parser.parse_known_args(argv)
    config_path = getattr(pre, "config", None)
    if config_path:
        try:
            loaded = json.loads(Path(config_path).read_text())
        except OSError as err:
            raise DomainError(f"cannot read config file: {err}") from err
        except json.JSONDecodeError as err:
            raise DomainError(f"config file is not valid JSON: {err}") from err
        if not isinstance(loaded, dict):
            raise DomainError("config file must hold a JSON object of flag values")
        active = subparsers[pre.command]
        valid = {action.dest for action in active._actions}
        unknown = set(loaded) - valid
        if unknown:
            active.error(f"unknown config keys: {sorted(unknown)}")
        active.set_defaults(**loaded)
    return parser.parse_args(argv)


def _theta_of(args) -> float:
    if getattr(args, "theta_frac", None) is not None:
        return args.theta_frac * math.pi
    if getattr(args, "theta", None) is not None:
        return args.theta
    return math.pi / 2.0


def _params_of(args, statistics: Statistics = Statistics.BOSE) -> EngineParams:
    ba, bb = args.ba, args.bb
    if args.na is not None:
        ba = beta_from_occupation(args.na, args.wa, statistics)
    if args.nb is not None:
        bb = beta_from_occupation(args.nb, args.wb, statistics)
    return EngineParams(
        omega_a=args.wa,
        omega_b=args.wb,
        beta_a=ba,
        beta_b=bb,
        theta=_theta_of(args),
        phi=args.phi,
    )


# -- report ---------------------------------------------------------------------


def _moments_dict(mom) -> dict:
    return {
        "mean_w": mom.mean_w,
        "mean_qh": mom.mean_qh,
        "mean_qc": mom.mean_qc,
        "var_w": mom.var_w,
        "var_qh": mom.var_qh,
        "cov_w_qh": mom.cov_w_qh,
    }


def _tur_dict(rep) -> dict:
    out = {
        "inv_snr_w": rep.inv_snr_w,
        "sigma": rep.sigma,
        "exact_rhs": rep.exact_rhs,
        "standard_tur_rhs": rep.standard_tur_rhs,
        "shifted_tur_rhs": rep.shifted_tur_rhs,
        "saturable_rhs": rep.saturable_rhs,
        "standard_tur_satisfied": rep.satisfies_standard,
        "shifted_tur_satisfied": rep.satisfies_shifted,
        "saturable_satisfied": rep.satisfies_saturable,
    }
    if rep.efficiency is not None:
        out.update(
            efficiency=rep.efficiency,
            efficiency_bound=rep.efficiency_bound,
            extracted_work=rep.work_bound_lhs,
            extracted_work_bound=rep.work_bound_rhs,
            work_bound_satisfied=rep.satisfies_work_bound,
        )
    return out


def _pmf_head(pmf, span: int = 5) -> list[dict]:
    return [
        {"n": o.n, "w": o.w, "q_h": o.qh, "probability": o.probability}
        for o in pmf.outcomes(-span, span)
    ]


def cmd_report(args) -> int:
    variant = args.variant
    doc: dict = {"schema": 1, "variant": variant}
    if variant == "bosonic":
        params = _params_of(args)
        occ = Occupations.from_params(params)
        doc["params"] = vars(params).copy()
        gamma_tau = args.gamma_tau
        if gamma_tau is not None:
            tp = ThermalizationParams(engine=params, gamma_tau=gamma_tau)
            ta, tb = steady_occupations(tp)
            ptr = partial_tur_report(tp)
            pmf = bosonic_pmf_from_occupations(ta, tb, params.theta, params.omega_a, params.omega_b)
            doc["thermalization"] = {
                "gamma_tau": gamma_tau,
                "n_a_tilde": ta,
                "n_b_tilde": tb,
                "v_value": ptr.v_value,
                "v_lower_bound": ptr.v_lower_bound,
                "coth_tur_rhs": ptr.coth_tur_rhs,
                "coth_tur_satisfied": ptr.satisfies_coth_tur,
            }
            doc["occupations"] = {"n_a": ta, "n_b": tb, "statistics": "bose"}
            doc["moments"] = _moments_dict(pmf.moments())
            doc["entropy_production"] = ptr.report.sigma
            doc["tur"] = _tur_dict(ptr.report)
        else:
            pmf = bosonic_pmf(params)
            doc["occupations"] = {"n_a": occ.n_a, "n_b": occ.n_b, "statistics": "bose"}
            doc["regime"] = classify_regime(params).value
            doc["moments"] = _moments_dict(moments(params))
            doc["entropy_production"] = entropy_production(params)
            doc["tur"] = _tur_dict(tur_report(params))
        try:
            eta, eta_c, zeta, zeta_c = efficiency_and_cop(params)
            doc["efficiency"] = {
                "eta": eta,
                "eta_carnot": eta_c,
                "zeta": zeta,
                "zeta_carnot": zeta_c,
            }
        except DomainError:
            doc["efficiency"] = None
        if "regime" not in doc and gamma_tau is None:
            doc["regime"] = classify_regime(params).value
        doc["pmf_head"] = _pmf_head(pmf)
    elif variant == "qubit":
        params = _params_of(args, Statistics.FERMI)
        occ = Occupations.from_params(params, Statistics.FERMI)
        doc["params"] = vars(params).copy()
        doc["occupations"] = {"n_a": occ.n_a, "n_b": occ.n_b, "statistics": "fermi"}
        doc["regime"] = classify_regime(params).value
        doc["moments"] = _moments_dict(qubit_moments(params))
        tp = three_point_pmf(params)
        doc["entropy_production"] = qubit_tur_report(params).sigma
        doc["tur"] = _tur_dict(qubit_tur_report(params))
        doc["three_point_pmf"] = {
            "p_zero": tp.p_zero,
            "p_plus": tp.p_plus,
            "p_minus": tp.p_minus,
        }
        try:
            eta, eta_c, zeta, zeta_c = efficiency_and_cop(params)
            doc["efficiency"] = {
                "eta": eta,
                "eta_carnot": eta_c,
                "zeta": zeta,
                "zeta_carnot": zeta_c,
            }
        except DomainError:
            doc["efficiency"] = None
    elif variant == "squeeze":
        sp = _squeeze_params_of(args)
        mom, rep = squeeze_moments(sp)
        na, nb = sp.occupations
        doc["params"] = {
            "omega_a": sp.omega_a,
            "omega_b": sp.omega_b,
            "beta_a": sp.beta_a,
            "beta_b": sp.beta_b,
            "r": sp.r,
        }
        doc["occupations"] = {"n_a": na, "n_b": nb, "statistics": "bose"}
        doc["moments"] = _moments_dict(mom)
        doc["entropy_production"] = rep.sigma
        doc["tur"] = _tur_dict(rep)
        pmf = squeeze_pmf(na, nb, sp.r, sp.omega_a, sp.omega_b)
        doc["pmf_head"] = _pmf_head(pmf)
    elif variant == "cubic":
        cp = _cubic_params_of(args)
        doc["params"] = {
            "omega_a": cp.omega_a,
            "omega_b": cp.omega_b,
            "beta_a": cp.beta_a,
            "beta_b": cp.beta_b,
            "theta_c": abs(cp.theta_c),
        }
        na, nb = cp.occupations
        doc["occupations"] = {"n_a": na, "n_b": nb, "statistics": "bose"}
        doc["engine_condition"] = cubic_heat_engine_condition(cp)
        doc["efficiency_on_support"] = 1.0 - 2.0 * cp.omega_b / cp.omega_a
        doc["sigma_per_mean_qh"] = -(
            cp.beta_a * cp.omega_a - 2.0 * cp.omega_b * cp.beta_b
        ) / cp.omega_a
    else:  # pragma: no cover - argparse restricts choices
        raise DomainError(f"unknown variant {variant!r}")
    doc["formulas"] = FORMULAS[variant]
    _emit_json(doc, args.out)
    if args.plot and "pmf_head" in doc:
        plots.pmf_figure(args.plot, pmf.outcomes(-12, 12))
    return EXIT_OK


def _squeeze_params_of(args) -> SqueezeParams:
    ba, bb = args.ba, args.bb
    if args.na is not None:
        ba = beta_from_occupation(args.na, args.wa)
    if args.nb is not None:
        bb = beta_from_occupation(args.nb, args.wb)
    return SqueezeParams(
        omega_a=args.wa, omega_b=args.wb, beta_a=ba, beta_b=bb, r=args.r
    )


def _cubic_params_of(args) -> CubicParams:
    ba, bb = args.ba, args.bb
    if args.na is not None:
        ba = beta_from_occupation(args.na, args.wa)
    if args.nb is not None:
        bb = beta_from_occupation(args.nb, args.wb)
    return CubicParams(
        omega_a=args.wa, omega_b=args.wb, beta_a=ba, beta_b=bb, theta_c=args.thetac
    )


# -- sweep ------------------------------------------------------------------------

SWEEP_DEFAULT_OUTPUTS = {
    "omega_b_ratio": ["mean_w", "mean_qh", "sigma"],
    "theta": ["mean_w", "mean_qh", "sigma"],
    "n_b": ["mean_w", "mean_qh", "sigma"],
    "gamma_tau": ["snr_w", "inv_snr_w"],
}

SWEEP_QUANTITIES = [
    "mean_w",
    "mean_qh",
    "mean_qc",
    "var_w",
    "var_qh",
    "cov_w_qh",
    "sigma",
    "inv_snr_w",
    "snr_w",
    "exact_rhs",
    "eta",
    "eta_carnot",
    "zeta",
    "zeta_carnot",
    "bound_shifted_tur",
    "bound_saturable_tur",
]


def _point_quantities(params: EngineParams, variant: str) -> dict[str, float]:
    if variant == "qubit":
        mom = qubit_moments(params)
        rep = qubit_tur_report(params)
        sigma = rep.sigma
    else:
        mom = moments(params)
        rep = tur_report(params)
        sigma = entropy_production(params)
    try:
        eta, eta_c, zeta, zeta_c = efficiency_and_cop(params)
    except DomainError:
        eta = eta_c = zeta = zeta_c = math.nan
    w2 = mom.mean_w**2
    if w2 == 0.0:
        shifted_bound = 0.0
        saturable_bound = 0.0
        snr = 0.0
    else:
        shifted_bound = w2 * (2.0 / sigma + 1.0)
        saturable_bound = w2 * f_bound(sigma)
        snr = w2 / mom.var_w
    return {
        "mean_w": mom.mean_w,
        "mean_qh": mom.mean_qh,
        "mean_qc": mom.mean_qc,
        "var_w": mom.var_w,
        "var_qh": mom.var_qh,
        "cov_w_qh": mom.cov_w_qh,
        "sigma": sigma,
        "inv_snr_w": rep.inv_snr_w,
        "snr_w": snr,
        "exact_rhs": rep.exact_rhs,
        "eta": eta,
        "eta_carnot": eta_c,
        "zeta": zeta,
        "zeta_carnot": zeta_c,
        "bound_shifted_tur": shifted_bound,
        "bound_saturable_tur": saturable_bound,
    }


def cmd_sweep(args) -> int:
    variable = args.variable
    if args.points < 2:
        raise DomainError("a sweep needs at least 2 points")
    values = np.linspace(args.start, args.stop, args.points)
    outputs = (
        [s.strip() for s in args.outputs.split(",") if s.strip()]
        if args.outputs
        else SWEEP_DEFAULT_OUTPUTS[variable]
    )
    unknown = [o for o in outputs if o not in SWEEP_QUANTITIES]
    if unknown:
        raise DomainError(f"unknown output quantities: {unknown}; known: {SWEEP_QUANTITIES}")
    statistics = Statistics.FERMI if args.variant == "qubit" else Statistics.BOSE

    columns: dict[str, list[float]] = {name: [] for name in outputs}
    for value in values:
        override = dict(
            wa=args.wa, wb=args.wb, ba=args.ba, bb=args.bb, na=args.na, nb=args.nb
        )
        theta = _theta_of(args)
        gamma_tau = None
        if variable == "omega_b_ratio":
            if value <= 0:
                raise DomainError("omega_b_ratio must be positive")
            override["wb"] = value * args.wa
        elif variable == "theta":
            theta = value
        elif variable == "n_b":
            override["nb"] = value
        elif variable == "gamma_tau":
            gamma_tau = float(value)
            theta = math.pi / 2.0
        ns = argparse.Namespace(
            wa=override["wa"],
            wb=override["wb"],
            ba=override["ba"],
            bb=override["bb"],
            na=override["na"],
            nb=override["nb"],
            theta=theta,
            theta_frac=None,
            phi=args.phi,
        )
        params = _params_of(ns, statistics)
        if gamma_tau is not None:
            point = _thermal_point(params, gamma_tau)
        else:
            point = _point_quantities(params, args.variant)
        for name in outputs:
            columns[name].append(point[name])

    header = [variable] + outputs
    rows = [
        [_g17(values[i])] + [_g17(columns[name][i]) for name in outputs]
        for i in range(len(values))
    ]
    _write_csv(args.out, header, rows)
    fig_path = _plot_path(args.out)
    if fig_path and not args.no_plot:
        plots.sweep_figure(
            fig_path, variable, values, {k: np.asarray(v) for k, v in columns.items()}
        )
    return EXIT_OK


def _thermal_point(params: EngineParams, gamma_tau: float) -> dict[str, float]:
    tp = ThermalizationParams(engine=params, gamma_tau=gamma_tau)
    ptr = partial_tur_report(tp)
    pmf = bosonic_pmf_from_occupations(
        ptr.n_a_tilde, ptr.n_b_tilde, params.theta, params.omega_a, params.omega_b
    )
    mom = pmf.moments()
    rep = ptr.report
    try:
        eta, eta_c, zeta, zeta_c = efficiency_and_cop(params)
    except DomainError:
        eta = eta_c = zeta = zeta_c = math.nan
    w2 = mom.mean_w**2
    snr = 0.0 if (w2 == 0.0 or not math.isfinite(rep.inv_snr_w)) else 1.0 / rep.inv_snr_w
    return {
        "mean_w": mom.mean_w,
        "mean_qh": mom.mean_qh,
        "mean_qc": mom.mean_qc,
        "var_w": mom.var_w,
        "var_qh": mom.var_qh,
        "cov_w_qh": mom.cov_w_qh,
        "sigma": rep.sigma,
        "inv_snr_w": rep.inv_snr_w,
        "snr_w": snr,
        "exact_rhs": rep.exact_rhs,
        "eta": eta,
        "eta_carnot": eta_c,
        "zeta": zeta,
        "zeta_carnot": zeta_c,
        "bound_shifted_tur": 0.0 if w2 == 0.0 else w2 * (2.0 / rep.sigma + 1.0),
        "bound_saturable_tur": 0.0 if w2 == 0.0 else w2 * f_bound(rep.sigma),
    }


# -- sample ------------------------------------------------------------------------


def cmd_sample(args) -> int:
    if args.variant == "squeeze":
        sp = _squeeze_params_of(args)
        na, nb = sp.occupations
        pmf = squeeze_pmf(na, nb, sp.r, sp.omega_a, sp.omega_b)
    else:
        params = _params_of(args)
        pmf = bosonic_pmf(params)
    batch = sample(pmf, args.count, args.seed)
    if args.out is None or args.out == "-":
        writer = csv.writer(sys.stdout)
        writer.writerow(["draw_index", "n", "w", "q_h"])
        w = batch.w
        qh = batch.qh
        for i in range(len(batch)):
            writer.writerow([i, int(batch.n[i]), _g17(w[i]), _g17(qh[i])])
    else:
        write_samples_csv(batch, args.out)
        fig_path = _plot_path(args.out)
        if fig_path and not args.no_plot:
            plots.samples_figure(fig_path, batch)
    return EXIT_OK


# -- violation scan ------------------------------------------------------------------


def cmd_violation_scan(args) -> int:
    scan = violation_scan(_theta_of(args), args.resolution)
    if args.out:
        scan.to_csv(args.out)
        fig_path = _plot_path(args.out)
        if fig_path and not args.no_plot:
            plots.scan_figure(fig_path, scan)
    _emit_json(
        {
            "schema": 1,
            "theta": scan.theta,
            "resolution": args.resolution,
            "area_fraction": scan.area_fraction,
            "violations": int(scan.violated.sum()),
        },
        None,
    )
    return EXIT_OK


# -- thermalization sweep --------------------------------------------------------------


def cmd_thermalization(args) -> int:
    gts = [float(s) for s in args.gamma_tau.split(",") if s.strip()]
    if not gts:
        raise DomainError("at least one gamma_tau value is required")
    if args.nb_points < 2:
        raise DomainError("the occupation sweep needs at least 2 points")
    nb = np.linspace(args.nb_start, args.nb_stop, args.nb_points)
    if np.any(nb <= 0):
        raise DomainError("occupations must be positive")
    na = args.na
    ideal = partial_inv_snr(na, nb, np.inf)
    with np.errstate(divide="ignore"):
        curves = {"snr_ideal": 1.0 / ideal}
        for gt in gts:
            curves[f"snr_gt_{gt:g}"] = 1.0 / partial_inv_snr(na, nb, gt)
    header = ["n_b"] + list(curves)
    rows = [
        [_g17(nb[i])] + [_g17(curves[name][i]) for name in curves]
        for i in range(nb.size)
    ]
    _write_csv(args.out, header, rows)
    fig_path = _plot_path(args.out)
    if fig_path and not args.no_plot:
        plots.thermalization_figure(fig_path, nb, curves)
    return EXIT_OK


# -- oracle comparison -----------------------------------------------------------------


def cmd_oracle_compare(args) -> int:
    tol = args.tol
    checks: dict[str, float] = {}
    if args.variant == "bosonic":
        params = _params_of(args)
        occ = Occupations.from_params(params)
        trunc = TruncationSpec.for_occupations(occ.n_a, occ.n_b, args.n_max)
        kind = BeamSplitter(theta=params.theta, phi=params.phi)
        result = joint_distribution(
            kind, occ.n_a, occ.n_b, trunc, omega_a=params.omega_a, omega_b=params.omega_b
        )
        pmf = bosonic_pmf(params)
        ns, marg = result.heat_marginal()
        checks["total_variation"] = 0.5 * float(np.abs(marg - pmf.prob(ns)).sum())
        mom = moments(params)
        checks["mean_w_residual"] = abs(result.mean_w() - mom.mean_w)
        checks["var_w_residual"] = abs(result.var_w() - mom.var_w)
        checks["mean_qh_residual"] = abs(result.mean_qh() - mom.mean_qh)
        chi_c = char_fn(params, 0.3, 0.7)
        chi_o = char_fn_oracle(
            kind, occ.n_a, occ.n_b, params.omega_a, params.omega_b, 0.3, 0.7, trunc
        )
        checks["char_fn_residual"] = abs(chi_o - chi_c)
        checks["off_support_mass"] = result.off_support_mass(kind.charge)
        tail = result.tail_bound
    elif args.variant == "qubit":
        params = _params_of(args, Statistics.FERMI)
        joint = qubit_oracle_joint(params)
        tp = three_point_pmf(params)
        checks["p_plus_residual"] = abs(joint[1] - tp.p_plus)
        checks["p_minus_residual"] = abs(joint[-1] - tp.p_minus)
        checks["p_zero_residual"] = abs(joint[0] - tp.p_zero)
        mom = qubit_moments(params)
        mean_qh = params.omega_a * (joint[1] - joint[-1])
        checks["mean_qh_residual"] = abs(mean_qh - mom.mean_qh)
        tail = 0.0
    elif args.variant == "squeeze":
        sp = _squeeze_params_of(args)
        na, nb = sp.occupations
        trunc = TruncationSpec.for_occupations(na, nb, args.n_max)
        kind = TwoModeSqueeze(r=sp.r)
        result = joint_distribution(
            kind, na, nb, trunc, omega_a=sp.omega_a, omega_b=sp.omega_b
        )
        pmf = squeeze_pmf(na, nb, sp.r, sp.omega_a, sp.omega_b)
        ns, marg = result.heat_marginal()
        checks["total_variation"] = 0.5 * float(np.abs(marg - pmf.prob(ns)).sum())
        mom, _ = squeeze_moments(sp)
        checks["mean_w_residual"] = abs(result.mean_w() - mom.mean_w)
        checks["var_w_residual"] = abs(result.var_w() - mom.var_w)
        checks["off_support_mass"] = result.off_support_mass(kind.charge)
        tail = result.tail_bound
    elif args.variant == "cubic":
        cp = _cubic_params_of(args)
        na, nb = cp.occupations
        trunc = (
            TruncationSpec.for_occupations(na, nb, args.n_max) if args.n_max else None
        )
        report = delta_structure_report(
            CubicExchange(cp.theta_c), na, nb, cp.omega_a, cp.omega_b, trunc
        )
        trunc_used = TruncationSpec.for_occupations(na, nb, report.n_max)
        result = joint_distribution(
            CubicExchange(cp.theta_c), na, nb, trunc_used,
            omega_a=cp.omega_a, omega_b=cp.omega_b,
        )
        sigma_qh = cubic_entropy_relation(cp, result.mean_qh())
        checks["sigma_route_residual"] = abs(
            sigma_qh - cubic_sigma_from_work(cp, result.mean_w())
        )
        dea, deb = result.mean_delta_e()
        checks["sigma_direct_residual"] = abs(
            sigma_qh - (cp.beta_a * dea + cp.beta_b * deb)
        )
        checks["off_support_mass"] = report.off_support_mass
        checks["efficiency_residual"] = (
            abs(report.support_ratio - (1.0 - 2.0 * cp.omega_b / cp.omega_a))
            if report.support_ratio is not None
            else 0.0
        )
        checks["sigma_negative_excess"] = max(0.0, -sigma_qh)
        tail = report.tail_bound
    else:  # pragma: no cover
        raise DomainError(f"unknown variant {args.variant!r}")

    passed = all(v <= tol for v in checks.values())
    _emit_json(
        {
            "schema": 1,
            "variant": args.variant,
            "tolerance": tol,
            "tail_bound": tail,
            "checks": checks,
            "passed": passed,
        },
        args.out,
    )
    if not passed:
        raise ToleranceFailure(f"oracle comparison exceeded tolerance {tol}")
    return EXIT_OK


# -- entry point ---------------------------------------------------------------------


def build_parser() -> tuple[CliParser, dict[str, argparse.ArgumentParser]]:
    parser = CliParser(
        prog="ottofluct",
        description="Work and heat statistics of two-mode bosonic and two-qubit Otto engines",
    )
    sub = parser.add_subparsers(dest="command", required=True, parser_class=CliParser)

    p_report = sub.add_parser("report", help="single-point JSON report")
    _add_engine_args(p_report)
    _add_config_arg(p_report)
    p_report.add_argument(
        "--variant",
        choices=["bosonic", "qubit", "squeeze", "cubic"],
        default="bosonic",
    )
    p_report.add_argument("--r", type=float, default=0.5, help="squeeze magnitude")
    p_report.add_argument("--thetac", type=float, default=0.3, help="cubic coupling")
    p_report.add_argument(
        "--gamma-tau", type=float, default=None, help="finite bath contact (swap only)"
    )
    p_report.add_argument("-o", "--out", default=None, help="output path (default stdout)")
    p_report.add_argument("--plot", default=None, help="also render the law to this PNG")
    p_report.set_defaults(func=cmd_report)

    p_sweep = sub.add_parser("sweep", help="1d parameter sweep to CSV (+figure)")
    _add_engine_args(p_sweep)
    _add_config_arg(p_sweep)
    p_sweep.add_argument(
        "--variable",
        choices=["omega_b_ratio", "n_b", "theta", "gamma_tau"],
        required=True,
    )
    p_sweep.add_argument("--start", type=float, required=True)
    p_sweep.add_argument("--stop", type=float, required=True)
    p_sweep.add_argument("--points", type=int, required=True)
    p_sweep.add_argument("--variant", choices=["bosonic", "qubit"], default="bosonic")
    p_sweep.add_argument(
        "--outputs", default=None, help="comma list of quantities (defaults per variable)"
    )
    p_sweep.add_argument("-o", "--out", default=None, help="CSV path (default stdout)")
    p_sweep.add_argument("--no-plot", action="store_true")
    p_sweep.set_defaults(func=cmd_sweep)

    p_sample = sub.add_parser("sample", help="draw exact samples of (W, Q_H)")
    _add_engine_args(p_sample)
    _add_config_arg(p_sample)
    p_sample.add_argument("--variant", choices=["bosonic", "squeeze"], default="bosonic")
    p_sample.add_argument("--r", type=float, default=0.5)
    p_sample.add_argument("--count", type=int, default=1000)
    p_sample.add_argument("--seed", type=int, default=0)
    p_sample.add_argument("-o", "--out", default=None)
    p_sample.add_argument("--no-plot", action="store_true")
    p_sample.set_defaults(func=cmd_sample)

    p_scan = sub.add_parser("violation-scan", help="qubit standard-bound violation scan")
    _add_config_arg(p_scan)
    theta = p_scan.add_mutually_exclusive_group()
    theta.add_argument("--theta", type=float, default=None)
    theta.add_argument("--theta-frac", type=float, default=None)
    p_scan.add_argument("--resolution", type=int, default=200)
    p_scan.add_argument("-o", "--out", default=None, help="CSV path")
    p_scan.add_argument("--no-plot", action="store_true")
    p_scan.set_defaults(func=cmd_violation_scan)

    p_thermal = sub.add_parser(
        "thermalization", help="work SNR against cold occupation for several contact times"
    )
    _add_config_arg(p_thermal)
    p_thermal.add_argument("--na", type=float, default=3.0)
    p_thermal.add_argument("--nb-start", type=float, default=0.1)
    p_thermal.add_argument("--nb-stop", type=float, default=2.5)
    p_thermal.add_argument("--nb-points", type=int, default=100)
    p_thermal.add_argument("--gamma-tau", default="1,2,3")
    p_thermal.add_argument("-o", "--out", default=None)
    p_thermal.add_argument("--no-plot", action="store_true")
    p_thermal.set_defaults(func=cmd_thermalization)

    p_oracle = sub.add_parser("oracle-compare", help="closed forms vs Fock oracle")
    _add_engine_args(p_oracle)
    _add_config_arg(p_oracle)
    p_oracle.add_argument(
        "--variant",
        choices=["bosonic", "qubit", "squeeze", "cubic"],
        default="bosonic",
    )
    p_oracle.add_argument("--r", type=float, default=0.5)
    p_oracle.add_argument("--thetac", type=float, default=0.3)
    p_oracle.add_argument("--n-max", type=int, default=None)
    p_oracle.add_argument("--tol", type=float, default=1e-7)
    p_oracle.add_argument("-o", "--out", default=None)
    p_oracle.set_defaults(func=cmd_oracle_compare)

    subparsers = {
        "report": p_report,
        "sweep": p_sweep,
        "sample": p_sample,
        "violation-scan": p_scan,
        "thermalization": p_thermal,
        "oracle-compare": p_oracle,
    }
    return parser, subparsers


def main(argv: list[str] | None = None) -> int:
    argv = sys.argv[1:] if argv is None else argv
    parser, subparsers = build_parser()
    try:
        args = _apply_config(parser, subparsers, argv)
        return args.func(args)
    except SystemExit as err:
        return err.code if err.code is not None else EXIT_USAGE
    except ToleranceFailure as err:
        print(f"tolerance failure: {err}", file=sys.stderr)
        return EXIT_TOLERANCE
    except (DomainError, TruncationError) as err:
        print(f"domain error: {err}", file=sys.stderr)
        return EXIT_DOMAIN


if __name__ == "__main__":
    sys.exit(main())
