"""Batch front end producing plot-ready CSV files.

Usage::

    qlangevin noise    --config run.ini --out results/
    qlangevin dynamics --config run.ini --out results/ --traj 10000
    qlangevin steady   --config run.ini --out results/
    qlangevin network  --config run.ini --out results/
    qlangevin verify   --out results/ [--tol-scale 1.0]

Exit codes: 0 success, 1 usage/config/I-O error, 2 a numerical check failed.

Configuration is an INI file.  Sections and keys (defaults in brackets):

[oscillator]  mass [1], omega [1], counter_term [true], units [nondimensional]
[bath]        spectral [lorentzian | ohmic], lam [0.3], omega0 [0.5],
              gamma [0.1], gamma_damp [0.1], omega_cutoff [1], temperature [0.1],
              kind [quantum | classical]
[bath.NAME]   network baths: the [bath] keys plus oscillators (indices) and
              temperature_factor (T = factor * swept temperature)
[simulation]  dt [0.05], t_final [100], n_traj [1000], seed, record_every [20],
              integrator [embedded], pad_factor [4], heat_window [0.25],
              mu_x0 [0], mu_p0 [0], sigma_xx0 [0.5], sigma_xp0 [0], sigma_pp0 [0.5],
              chunk_size [500], kinds [quantum, classical], noise_dt [0.1],
              n_samples [65536], n_traces [100], nperseg [4096]
[network]     mass_matrix [1 0; 0 1], potential_matrix [1 -0.1; -0.1 1]
[sweep]       temperatures [0.1, 0.3, 1, 3, 10], lambdas [bath lam],
              mean_force_pv [closed | numeric]
[checks]      n_se [3], psd_rtol [0.05], skew_max [0.02], kurt_max [0.05],
              acf_rtol [0.05], matsubara_rtol [1e-6], mean_force_rtol [1e-5],
              balance_rtol [1e-3]

Unknown sections or keys are rejected.  Every output starts with `#` lines
echoing the version, the seed and all resolved settings.  Stochastic commands
without a seed draw one and record it there.
"""

from __future__ import annotations

import argparse
import configparser
import json
import math
import os
import sys
from dataclasses import dataclass, field

import numpy as np

from . import __version__
from .engine import SimConfig, run_ensemble, write_ensemble_csv
from .exceptions import DomainError, QuadratureError, StepSizeError, UnstableError
from .network import (
    Attachment,
    NetworkSpec,
    build_network,
    heat_currents_opensystems,
    network_steady_covariances,
    run_network_ensemble,
    write_heat_sweep_csv,
)
from .noise import (
    autocorrelation,
    derive_rng,
    estimate_psd,
    gaussianity_stats,
    NoiseTrace,
    synthesize_batch,
    write_psd_csv,
    write_trace_csv,
)
from .oracle import (
    classical_thermal_covariances,
    covariance_evolution,
    g_functions,
    gibbs_covariances,
    mean_force_covariances,
    steady_covariances_matsubara,
    steady_covariances_quadrature,
    write_steady_csv,
)
from .spectral import (
    BathSpec,
    Lorentzian,
    NoiseKind,
    OhmicExpCutoff,
    OscillatorParams,
    eval_force_psd,
    force_autocorrelation,
)

EXIT_OK, EXIT_ERROR, EXIT_CHECK = 0, 1, 2


class ConfigError(Exception):
    """Invalid or inconsistent configuration."""


def _bool(s):
    v = s.strip().lower()
    if v in ("1", "true", "yes", "on"):
        return True
    if v in ("0", "false", "no", "off"):
        return False
    raise ValueError(f"not a boolean: {s!r}")


def _floats(s):
    return [float(v) for v in s.replace(",", " ").split()] if s.strip() else []


def _ints(s):
    return [int(v) for v in s.replace(",", " ").split()]


def _matrix(s):
    rows = [_floats(r) for r in s.split(";")]
    if not rows or any(len(r) != len(rows[0]) for r in rows):
        raise ValueError("matrix rows must have equal length")
    return np.array(rows)


def _kinds(s):
    return [NoiseKind(v.strip()) for v in s.split(",") if v.strip()]


SCHEMA = {
    "oscillator": {"mass": (float, 1.0), "omega": (float, 1.0), "counter_term": (_bool, True),
                   "units": (str, "nondimensional")},
    "bath": {"spectral": (str, "lorentzian"), "lam": (float, 0.3), "omega0": (float, 0.5),
             "gamma": (float, 0.1), "gamma_damp": (float, 0.1), "omega_cutoff": (float, 1.0),
             "temperature": (float, 0.1), "kind": (NoiseKind, NoiseKind.QUANTUM)},
    "simulation": {"dt": (float, 0.05), "t_final": (float, 100.0), "n_traj": (int, 1000),
                   "seed": (int, None), "record_every": (int, 20), "integrator": (str, "embedded"),
                   "pad_factor": (int, 4), "heat_window": (float, 0.25), "mu_x0": (float, 0.0),
                   "mu_p0": (float, 0.0), "sigma_xx0": (float, 0.5), "sigma_xp0": (float, 0.0),
                   "sigma_pp0": (float, 0.5), "chunk_size": (int, 500),
                   "kinds": (_kinds, [NoiseKind.QUANTUM, NoiseKind.CLASSICAL]),
                   "noise_dt": (float, 0.1), "n_samples": (int, 65536), "n_traces": (int, 100),
                   "nperseg": (int, 4096)},
    "network": {"mass_matrix": (_matrix, np.eye(2)),
                "potential_matrix": (_matrix, np.array([[1.0, -0.1], [-0.1, 1.0]]))},
    "sweep": {"temperatures": (_floats, [0.1, 0.3, 1.0, 3.0, 10.0]), "lambdas": (_floats, None),
              "mean_force_pv": (str, "closed")},
    "checks": {"n_se": (float, 3.0), "psd_rtol": (float, 0.05), "skew_max": (float, 0.02),
               "kurt_max": (float, 0.05), "acf_rtol": (float, 0.05), "matsubara_rtol": (float, 1e-6),
               "mean_force_rtol": (float, 1e-5), "balance_rtol": (float, 1e-3)},
}
NETWORK_BATH_KEYS = {"oscillators": (_ints, None), "temperature_factor": (float, None)}


@dataclass
class RunConfig:
    """Parsed configuration: one dict per section, defaults filled in."""

    sections: dict
    network_baths: dict = field(default_factory=dict)
    raw: dict = field(default_factory=dict)
    seed_drawn: bool = False

    def __getitem__(self, name):
        return self.sections[name]

    @property
    def seed(self):
        return self.sections["simulation"]["seed"]

    def echo(self):
        """Header lines: version, seed and every key as given or defaulted."""
        lines = [f"qlangevin {__version__}"]
        if self.seed is not None:
            lines.append(f"seed = {self.seed}" + (" (drawn)" if self.seed_drawn else ""))
        for sec, values in self.sections.items():
            for k, v in values.items():
                if k != "seed":
                    lines.append(f"[{sec}] {k} = {_fmt(v)}")
        for name, values in self.network_baths.items():
            for k, v in values.items():
                lines.append(f"[bath.{name}] {k} = {_fmt(v)}")
        return lines


def _fmt(v):
    if isinstance(v, NoiseKind):
        return v.value
    if isinstance(v, np.ndarray):
        return "; ".join(" ".join(repr(float(x)) for x in row) for row in np.atleast_2d(v))
    if isinstance(v, (list, tuple)):
        return ", ".join(_fmt(x) for x in v)
    return str(v)


def _parse_section(name, items, schema):
    out, raw = {}, {}
    for key, value in items.items():
        if key not in schema:
            raise ConfigError(f"unknown key {key!r} in section [{name}]")
        conv = schema[key][0]
        try:
            out[key] = conv(value)
        except ValueError as exc:
            raise ConfigError(f"[{name}] {key}: {exc}") from exc
        raw[key] = value
    for key, (_, default) in schema.items():
        out.setdefault(key, default)
    return out, raw


def load_config(path=None, text=None) -> RunConfig:
    cp = configparser.ConfigParser(inline_comment_prefixes=("#",), interpolation=None)
    try:
        if text is not None:
            cp.read_string(text)
        elif path is not None:
            with open(path) as fh:
                cp.read_file(fh)
    except (OSError, configparser.Error) as exc:
        raise ConfigError(f"cannot read configuration: {exc}") from exc
    sections, raw, nets = {}, {}, {}
    for name in cp.sections():
        if name.startswith("bath."):
            schema = dict(SCHEMA["bath"], **NETWORK_BATH_KEYS)
            nets[name[5:]], raw[name] = _parse_section(name, dict(cp[name]), schema)
        elif name in SCHEMA:
            sections[name], raw[name] = _parse_section(name, dict(cp[name]), SCHEMA[name])
        else:
            raise ConfigError(f"unknown section [{name}]")
    for name, schema in SCHEMA.items():
        if name not in sections:
            sections[name], _ = _parse_section(name, {}, schema)
    if sections["oscillator"]["units"] != "nondimensional":
        raise ConfigError("only units = nondimensional is supported")
    return RunConfig(sections, nets, raw)


def _spectral(sec):
    kind = sec["spectral"].lower()
    if kind == "lorentzian":
        return Lorentzian(sec["lam"], sec["omega0"], sec["gamma"])
    if kind == "ohmic":
        return OhmicExpCutoff(sec["gamma_damp"], sec["omega_cutoff"])
    raise ConfigError(f"unknown spectral density {sec['spectral']!r}")


def _oscillator(cfg):
    o = cfg["oscillator"]
    return OscillatorParams(o["mass"], o["omega"], o["counter_term"])


def _bath(cfg, temperature=None, kind=None, lam=None):
    sec = dict(cfg["bath"])
    if lam is not None:
        sec["lam"] = lam
    t = sec["temperature"] if temperature is None else temperature
    return BathSpec(_spectral(sec), t, sec["kind"] if kind is None else kind)


def _sim_config(cfg, threads, **over):
    s = cfg["simulation"]
    kw = dict(dt=s["dt"], t_final=s["t_final"], n_traj=s["n_traj"], master_seed=cfg.seed,
              mu0=(s["mu_x0"], s["mu_p0"]), sigma0=(s["sigma_xx0"], s["sigma_xp0"], s["sigma_pp0"]),
              integrator=s["integrator"], record_every=s["record_every"], pad_factor=s["pad_factor"],
              heat_window=s["heat_window"], chunk_size=s["chunk_size"], threads=threads)
    kw.update(over)
    return SimConfig(**kw)


def _finish(out_dir, name, summary):
    with open(os.path.join(out_dir, name), "w") as fh:
        json.dump(summary, fh, indent=2, sort_keys=True, default=_json_default)
        fh.write("\n")
    return EXIT_OK if all(c["passed"] for c in summary.get("checks", [])) else EXIT_CHECK


def _json_default(o):
    if isinstance(o, (np.floating, np.integer)):
        return o.item()
    if isinstance(o, np.bool_):
        return bool(o)
    raise TypeError(type(o))


def _check(name, passed, value, tolerance, anchor=""):
    return {"name": name, "passed": bool(passed), "value": value, "tolerance": tolerance, "anchor": anchor}


# ---------------------------------------------------------------------------
# commands


def cmd_noise(cfg: RunConfig, out_dir, threads=None):
    """One trace, ensemble PSD against target, autocorrelation and Gaussianity."""
    s, ch = cfg["simulation"], cfg["checks"]
    b = _bath(cfg)
    dt, n, n_tr = s["noise_dt"], s["n_samples"], s["n_traces"]
    nperseg = min(s["nperseg"], n)
    rngs = [derive_rng(cfg.seed, k, 1) for k in range(n_tr)]
    data = synthesize_batch(lambda w: eval_force_psd(b, w), dt, n, rngs, s["pad_factor"])
    traces = [NoiseTrace(dt, row, cfg.seed, b.describe()) for row in data]
    header = cfg.echo()
    write_trace_csv(os.path.join(out_dir, "noise_trace.csv"), traces[0], header)
    est = estimate_psd(traces, nperseg=nperseg)
    target = eval_force_psd(b, est.freq_grid)
    write_psd_csv(os.path.join(out_dir, "noise_psd.csv"), est, target, header)

    checks = []
    if b.j.is_zero:
        checks.append(_check("zero bath gives zero noise", not np.any(data), float(np.max(np.abs(data))), 0.0))
    else:
        lo, hi = _band(b.j)
        sel = (est.freq_grid >= lo) & (est.freq_grid <= hi)
        ratio = float(np.sum(est.psd_values[sel]) / np.sum(target[sel]))
        checks.append(_check("band-averaged PSD / target", abs(ratio - 1) <= ch["psd_rtol"],
                             ratio, ch["psd_rtol"], "fluctuation-dissipation relation"))
        max_lag = min(n - 1, int(round(4 * math.pi / (dt * _scale_freq(b.j)))))
        lags = np.arange(0, max_lag + 1, max(1, max_lag // 60))
        acf_est = np.mean([autocorrelation(tr, max_lag) for tr in traces], axis=0)[lags]
        acf_ref = np.array([force_autocorrelation(b, dt * k) for k in lags])
        err = float(np.max(np.abs(acf_est - acf_ref)) / abs(acf_ref[0]))
        checks.append(_check("autocorrelation vs quadrature (max err / variance)",
                             err <= ch["acf_rtol"], err, ch["acf_rtol"], "two-time force correlation"))
        _write_columns(os.path.join(out_dir, "noise_acf.csv"), ["tau", "acf", "acf_target"],
                       [dt * lags, acf_est, acf_ref], header)
    g = gaussianity_stats(traces)
    if not g.degenerate:
        checks.append(_check("|skewness|", abs(g.skewness) < ch["skew_max"], g.skewness, ch["skew_max"]))
        checks.append(_check("|excess kurtosis|", abs(g.excess_kurtosis) < ch["kurt_max"],
                             g.excess_kurtosis, ch["kurt_max"]))
    summary = {"seed": cfg.seed, "n_samples": g.n_samples, "variance": g.variance,
               "skewness": g.skewness, "excess_kurtosis": g.excess_kurtosis, "checks": checks}
    return _finish(out_dir, "noise_summary.json", summary)


def _band(j):
    if isinstance(j, Lorentzian):
        return max(j.omega0 - 3 * j.gamma, 1e-12), j.omega0 + 3 * j.gamma
    return 1e-12, 3 * j.omega_cutoff


def _scale_freq(j):
    return j.omega0 if isinstance(j, Lorentzian) else j.omega_cutoff


def _write_columns(path, names, cols, header):
    rows = np.column_stack(cols)
    with open(path, "w") as fh:
        for line in header:
            fh.write(f"# {line}\n")
        fh.write(",".join(names) + "\n")
        for row in rows:
            fh.write(",".join(repr(float(v)) for v in row) + "\n")


def cmd_dynamics(cfg: RunConfig, out_dir, threads=None):
    """Ensemble moments next to the exact ones, per noise kind."""
    p = _oscillator(cfg)
    ch = cfg["checks"]
    checks, summary = [], {"seed": cfg.seed}
    sim = _sim_config(cfg, threads)
    for kind in cfg["simulation"]["kinds"]:
        b = _bath(cfg, kind=kind)
        stats = run_ensemble(sim, p, b)
        g = g_functions(p, b.j)
        exact = covariance_evolution(g, b, sim.sigma0, stats.t, mu0=sim.mu0)
        header = cfg.echo() + [f"noise kind = {kind.value}", "uncertainty reference = 0.25"]
        names = ["t", "mu_x", "mu_p", "sigma_xx", "sigma_xp", "sigma_pp", "se_xx", "se_xp", "se_pp",
                 "uncertainty", "se_uncertainty", "exact_sigma_xx", "exact_sigma_xp", "exact_sigma_pp",
                 "exact_uncertainty"]
        cols = [stats.t, stats.mu_x, stats.mu_p, stats.sigma_xx, stats.sigma_xp, stats.sigma_pp,
                stats.se_xx, stats.se_xp, stats.se_pp, stats.uncertainty, stats.se_uncertainty,
                exact.sigma_xx, exact.sigma_xp, exact.sigma_pp, exact.uncertainty]
        _write_columns(os.path.join(out_dir, f"dynamics_{kind.value}.csv"), names, cols, header)
        write_ensemble_csv(os.path.join(out_dir, f"ensemble_{kind.value}.csv"), stats, header)
        if not stats.degenerate:
            worst = 0.0
            for comp in ("xx", "xp", "pp"):
                se = getattr(stats, "se_" + comp)
                diff = np.abs(getattr(stats, "sigma_" + comp) - getattr(exact, "sigma_" + comp))
                # at t = 0 with a deterministic start the spread is exactly zero
                z = np.where(se > 0, diff / np.where(se > 0, se, 1), np.where(diff > 1e-12, np.inf, 0))
                worst = max(worst, float(np.max(z)))
            checks.append(_check(f"{kind.value}: ensemble vs exact covariances (max |z|)",
                                 worst <= ch["n_se"], worst, ch["n_se"], "dynamical covariances"))
        summary[kind.value] = {"min_uncertainty": float(np.min(stats.uncertainty)),
                               "final_sigma_xx": float(stats.sigma_xx[-1])}
    summary["checks"] = checks
    return _finish(out_dir, "dynamics_summary.json", summary)


def cmd_steady(cfg: RunConfig, out_dir, threads=None):
    """Steady covariances against temperature for each coupling strength."""
    p = _oscillator(cfg)
    sw, ch = cfg["sweep"], cfg["checks"]
    lambdas = sw["lambdas"] or [cfg["bath"]["lam"]]
    temps = sw["temperatures"]
    kind = cfg["bath"]["kind"]
    checks, summary = [], {}
    for lam in lambdas:
        temps_out, rows = [], []
        for temp in temps:
            b = _bath(cfg, temperature=temp, lam=lam)
            q = steady_covariances_quadrature(p, b)
            temps_out.append(temp)
            rows.append(q)
            if kind is NoiseKind.CLASSICAL:
                ref = classical_thermal_covariances(p, b.j, temp)
                temps_out.append(temp)
                rows.append(ref)
                rel = max(abs(q.sigma_xx / ref.sigma_xx - 1), abs(q.sigma_pp / ref.sigma_pp - 1))
                checks.append(_check(f"lam={lam} T={temp}: quadrature vs classical thermal state",
                                     rel <= 1e-8, rel, 1e-8, "classical thermal state"))
                continue
            gib = gibbs_covariances(p, temp)
            temps_out.append(temp)
            rows.append(gib)
            if isinstance(b.j, Lorentzian) and temp > 0:
                ms = steady_covariances_matsubara(p, b.j, temp)
                temps_out.append(temp)
                rows.append(ms)
                rel = max(abs(ms.sigma_xx / q.sigma_xx - 1), abs(ms.sigma_pp / q.sigma_pp - 1))
                checks.append(_check(f"lam={lam} T={temp}: Matsubara vs quadrature", rel <= ch["matsubara_rtol"],
                                     rel, ch["matsubara_rtol"], "Matsubara series"))
            pv = sw["mean_force_pv"] if isinstance(b.j, Lorentzian) else "numeric"
            mf = mean_force_covariances(p, b.j, temp, pv=pv)
            temps_out.append(temp)
            rows.append(mf)
            rel = max(abs(mf.sigma_xx / q.sigma_xx - 1), abs(mf.sigma_pp / q.sigma_pp - 1))
            checks.append(_check(f"lam={lam} T={temp}: mean-force vs quadrature", rel <= ch["mean_force_rtol"],
                                 rel, ch["mean_force_rtol"], "mean-force Gibbs state"))
        header = cfg.echo() + [f"lam = {lam}", f"noise kind = {kind.value}"]
        write_steady_csv(os.path.join(out_dir, f"steady_lam{lam:g}.csv"), temps_out, rows, header)
        summary[f"lam={lam:g}"] = len(temps)
    summary["checks"] = checks
    return _finish(out_dir, "steady_summary.json", summary)


def _network_spec(cfg, temperature):
    net = cfg["network"]
    if not cfg.network_baths:
        raise ConfigError("network command needs at least one [bath.NAME] section")
    atts = []
    for name, sec in cfg.network_baths.items():
        if sec["oscillators"] is None:
            raise ConfigError(f"[bath.{name}] needs 'oscillators'")
        if sec["temperature_factor"] is not None:
            temp = sec["temperature_factor"] * temperature
        else:
            temp = sec["temperature"]
        atts.append(Attachment(tuple(sec["oscillators"]), BathSpec(_spectral(sec), temp, sec["kind"])))
    return NetworkSpec(net["mass_matrix"], net["potential_matrix"], tuple(atts),
                       cfg["oscillator"]["counter_term"])


def cmd_network(cfg: RunConfig, out_dir, threads=None):
    """Heat currents from the trace formula and from trajectories over a temperature sweep."""
    ch = cfg["checks"]
    names = list(cfg.network_baths)
    rows, checks = [], []
    n_traj = cfg["simulation"]["n_traj"]
    for temp in cfg["sweep"]["temperatures"]:
        net = build_network(_network_spec(cfg, temp))
        q_open = heat_currents_opensystems(net, network_steady_covariances(net))
        first, last = q_open[0], q_open[-1]
        rows.append((temp, first, last, 0.0, 0.0, "opensystems"))
        if n_traj < 2:
            continue
        res = run_network_ensemble(net, _sim_config(cfg, threads))
        q_sto = [h.steady for h in res.heat]
        se = [h.steady_se for h in res.heat]
        rows.append((temp, q_sto[0], q_sto[-1], se[0], se[-1], "stochastic"))
        for k, name in enumerate(names):
            z = abs(q_sto[k] - q_open[k]) / se[k] if se[k] > 0 else math.inf
            checks.append(_check(f"T={temp} bath {name}: stochastic vs trace formula (|z|)",
                                 z <= ch["n_se"], z, ch["n_se"], "steady-state heat currents"))
        bound = max(ch["n_se"] * res.balance_se, ch["balance_rtol"] * float(np.max(np.abs(q_sto))))
        checks.append(_check(f"T={temp}: energy balance |sum Q|", abs(res.balance) <= bound,
                             abs(res.balance), bound, "energy balance"))
    header = cfg.echo() + [f"bath order: {', '.join(names)} (H = first, C = last)"]
    write_heat_sweep_csv(os.path.join(out_dir, "heat_currents.csv"), rows, header)
    return _finish(out_dir, "network_summary.json", {"seed": cfg.seed, "checks": checks})


def cmd_verify(out_dir, tol_scale=1.0, seed=2024, threads=None, n_traj=2000):
    """Reduced cross-check suite with a machine-readable report."""
    from .verify import run_checks

    report = run_checks(tol_scale=tol_scale, seed=seed, threads=threads, n_traj=n_traj)
    with open(os.path.join(out_dir, "verify_report.json"), "w") as fh:
        json.dump(report, fh, indent=2, default=_json_default)
        fh.write("\n")
    with open(os.path.join(out_dir, "verify_report.txt"), "w") as fh:
        for c in report["checks"]:
            status = "PASS" if c["passed"] else "FAIL"
            fh.write(f"{status} {c['name']}: value {c['value']:.6g} tolerance {c['tolerance']:.6g}"
                     f" [{c['anchor']}]\n")
    for c in report["checks"]:
        print(("PASS" if c["passed"] else "FAIL"), c["name"], f"{c['value']:.3g} (tol {c['tolerance']:.3g})")
    return EXIT_OK if all(c["passed"] for c in report["checks"]) else EXIT_CHECK


STOCHASTIC = ("noise", "dynamics", "network")
COMMANDS = {"noise": cmd_noise, "dynamics": cmd_dynamics, "steady": cmd_steady, "network": cmd_network}


def build_parser():
    ap = argparse.ArgumentParser(prog="qlangevin", description=__doc__.split("\n")[0])
    ap.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = ap.add_subparsers(dest="command", required=True)
    for name in list(COMMANDS) + ["verify"]:
        sp = sub.add_parser(name)
        sp.add_argument("--config", help="INI configuration file")
        sp.add_argument("--out", default=".", help="output directory")
        sp.add_argument("--seed", type=int, help="master seed (overrides config)")
        sp.add_argument("--traj", type=int, help="trajectory count (overrides config)")
        sp.add_argument("--threads", type=int, help="worker threads (overrides QLANGEVIN_THREADS)")
        if name == "verify":
            sp.add_argument("--tol-scale", type=float, default=1.0, help="multiply every tolerance")
    return ap


def main(argv=None):
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code == 0 else EXIT_ERROR
    try:
        os.makedirs(args.out, exist_ok=True)
        if args.threads is not None and args.threads < 1:
            raise ConfigError("--threads must be >= 1")
        if args.command == "verify":
            seed = 2024 if args.seed is None else args.seed
            return cmd_verify(args.out, args.tol_scale, seed, args.threads, args.traj or 2000)
        cfg = load_config(args.config) if args.config else load_config()
        sim = cfg["simulation"]
        if args.seed is not None:
            sim["seed"] = args.seed
        if sim["seed"] is None and args.command in STOCHASTIC:
            sim["seed"] = int(np.random.SeedSequence().entropy % (1 << 63))
            cfg.seed_drawn = True
        if args.traj is not None:
            sim["n_traj"] = args.traj
            cfg.raw.setdefault("simulation", {})["n_traj"] = str(args.traj)
        return COMMANDS[args.command](cfg, args.out, args.threads)
    except (ConfigError, OSError, DomainError, StepSizeError, UnstableError, QuadratureError,
            TypeError, ValueError) as exc:
        print(f"qlangevin: error: {exc}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
