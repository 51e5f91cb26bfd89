"""Command-line entry point emitting CSV artifacts for every figure-class output.

Configuration is resolved in layers: built-in defaults, then a named preset,
then a line-oriented ``key = value`` config file, then explicit flags (flags
win).  Every CSV embeds the fully resolved configuration as '#' comment
lines, and reruns are byte-identical.  Unless ``--no-plot`` is given, each
command also renders a matplotlib figure next to its delimited output.

Exit codes: 0 success, 2 usage/configuration error, 3 numerical failure.
"""

from __future__ import annotations

import argparse
import math
import sys
from pathlib import Path

import numpy as np

from . import analysis
from . import plots
from . import quench as qn
from . import spectral as spl
from .krylov import KrylovConvergenceError
from .model import (
    FullParity,
    ModelParams,
    MSubspace,
    TruncationError,
    assemble,
    build_basis,
    operator_diagonal,
    suggest_n_max,
)
from .presets import PRESETS, resolve_preset
from .reporting import write_csv
from .spectral import DiagonalizationError

COMMANDS = ("levels", "quench", "sweep", "peres", "observable", "dispersion", "dump-matrix")


class UsageError(Exception):
    pass


# key -> (caster, default); the config-file and flag namespaces are identical
_SCHEMA: dict[str, tuple] = {
    "omega": (float, 1.0),
    "omega0": (float, 1.0),
    "delta": (float, 0.0),
    "two_j": (int, 2),
    "n_max": (int, 0),  # 0 = automatic with truncation audit and retry
    "sector": (str, "even"),
    "lam": (float, math.nan),
    "lambda_grid": (str, ""),
    "lambda_i": (float, math.nan),
    "lambda_f": (float, math.nan),
    "lambda_f_grid": (str, ""),
    "initial": (str, "ground"),
    "time_grid": (str, "auto"),
    "population_floor": (float, 1e-6),
    "mod_threshold": (float, 0.005),
    "mod_rule": (str, "threshold"),
    "kernel_width": (float, 0.0),  # 0 = automatic
    "observable": (str, "photon_number"),
    "lowest_per_m": (int, 0),
    "states": (str, ""),
    "method": (str, "auto"),
    "threads": (int, 1),
    "plot": (bool, True),
    "out": (str, "out"),
}


def _parse_config_file(path: str) -> dict:
    values: dict = {}
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise UsageError(f"cannot read config file {path}: {exc}") from exc
    for ln, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise UsageError(f"{path}:{ln}: expected 'key = value', got {raw!r}")
        key, _, val = line.partition("=")
        key = key.strip()
        val = val.strip()
        if key not in _SCHEMA:
            raise UsageError(f"{path}:{ln}: unknown key {key!r}")
        caster = _SCHEMA[key][0]
        try:
            values[key] = _cast(caster, val)
        except ValueError as exc:
            raise UsageError(f"{path}:{ln}: bad value for {key}: {exc}") from exc
    return values


def _cast(caster, val: str):
    if caster is bool:
        low = val.lower()
        if low in ("1", "true", "yes", "on"):
            return True
        if low in ("0", "false", "no", "off"):
            return False
        raise ValueError(f"expected boolean, got {val!r}")
    return caster(val)


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="dicke-quench",
        description="Quench dynamics in the extended Dicke model: "
        "deterministic CSV (and figure) outputs for spectra, strength "
        "functions, survival probabilities, sweeps, Peres lattices and "
        "interaction dispersions.",
    )
    p.add_argument("command", nargs="?", choices=COMMANDS,
                   help="action to run (optional when --preset supplies it)")
    p.add_argument("--preset", choices=sorted(PRESETS),
                   help="named figure protocol; see README for the catalogue")
    p.add_argument("--scale-j", type=float, dest="scale_j",
                   help="rebuild the preset at spin j (desk-scale replicas)")
    p.add_argument("--config", help="key = value configuration file")
    g = p.add_argument_group("model")
    g.add_argument("--omega", type=float, help="boson energy")
    g.add_argument("--omega0", type=float, help="atomic excitation energy")
    g.add_argument("--delta", type=float, help="counter-rotating scale in [0,1]")
    g.add_argument("--two-j", type=int, dest="two_j", help="twice the collective spin")
    g.add_argument("--n-max", type=int, dest="n_max",
                   help="photon truncation (0 = auto with audit)")
    g.add_argument("--sector", help="'even', 'odd', 'both' or 'M=<int>'")
    r = p.add_argument_group("protocol")
    r.add_argument("--lam", type=float, help="single coupling (peres, dump-matrix)")
    r.add_argument("--lambda-grid", dest="lambda_grid", help="'lo:hi:n' grid (levels)")
    r.add_argument("--lambda-i", type=float, dest="lambda_i", help="initial coupling")
    r.add_argument("--lambda-f", type=float, dest="lambda_f", help="final coupling")
    r.add_argument("--lambda-f-grid", dest="lambda_f_grid",
                   help="'lo:hi:n' or comma list (sweep)")
    r.add_argument("--initial", help="'ground', 'index:K' or 'basis:n,m'")
    r.add_argument("--time-grid", dest="time_grid",
                   help="'auto', 'log:lo:hi:n' or 'lin:lo:hi:n'")
    r.add_argument("--observable", choices=("photon_number", "Jz"),
                   help="observable for the evolution command")
    r.add_argument("--lowest-per-m", type=int, dest="lowest_per_m",
                   help="dispersion mode: lowest state of each M = 0..value")
    r.add_argument("--states", help="dispersion mode: explicit 'n,m;n,m;...' list")
    t = p.add_argument_group("thresholds and execution")
    t.add_argument("--population-floor", type=float, dest="population_floor")
    t.add_argument("--mod-threshold", type=float, dest="mod_threshold",
                   help="weight threshold of the modified Heisenberg time")
    t.add_argument("--mod-rule", dest="mod_rule", choices=("threshold", "cumulative"),
                   help="which reduced-level rule fills the sweep t_H_mod column")
    t.add_argument("--kernel-width", type=float, dest="kernel_width",
                   help="smoothing width for densities (0 = auto)")
    t.add_argument("--method", choices=("auto", "dense", "lanczos"))
    t.add_argument("--threads", type=int, help="parallel grid evaluations")
    t.add_argument("--plot", action=argparse.BooleanOptionalAction, default=None,
                   help="render figures next to the CSV output")
    p.add_argument("--out", help="output directory")
    return p


def resolve_config(args: argparse.Namespace) -> tuple[str, dict]:
    """Merge defaults, preset, config file and flags into one config dict."""
    config = {k: d for k, (_, d) in _SCHEMA.items()}
    command = args.command
    if args.preset:
        preset_cmd, preset_cfg = resolve_preset(args.preset, args.scale_j)
        unknown = set(preset_cfg) - set(_SCHEMA)
        if unknown:
            raise UsageError(f"preset {args.preset} sets unknown keys {unknown}")
        config.update(preset_cfg)
        if command is None:
            command = preset_cmd
        elif command != preset_cmd:
            raise UsageError(
                f"preset {args.preset} belongs to command {preset_cmd!r}, "
                f"not {command!r}"
            )
    elif args.scale_j is not None:
        raise UsageError("--scale-j is only meaningful together with --preset")
    if args.config:
        config.update(_parse_config_file(args.config))
    for key in _SCHEMA:
        val = getattr(args, key, None)
        if val is not None:
            config[key] = val
    if command is None:
        raise UsageError("no command given and no --preset to supply one")
    return command, config


# ---------------------------------------------------------------------------
# Config interpretation helpers
# ---------------------------------------------------------------------------

def _parse_grid(text: str, what: str) -> np.ndarray:
    if not text:
        raise UsageError(f"missing {what} grid")
    if ":" in text:
        parts = text.split(":")
        if len(parts) != 3:
            raise UsageError(f"{what}: expected 'lo:hi:n', got {text!r}")
        try:
            lo, hi, n = float(parts[0]), float(parts[1]), int(parts[2])
        except ValueError as exc:
            raise UsageError(f"{what}: {exc}") from exc
        if n < 2 or hi <= lo:
            raise UsageError(f"{what}: need hi > lo and n >= 2, got {text!r}")
        return np.linspace(lo, hi, n)
    try:
        vals = np.array([float(x) for x in text.split(",") if x.strip() != ""])
    except ValueError as exc:
        raise UsageError(f"{what}: {exc}") from exc
    if vals.size == 0 or np.any(np.diff(vals) <= 0):
        raise UsageError(f"{what}: need a strictly increasing list, got {text!r}")
    return vals


def _parse_sector(config: dict):
    sector = config["sector"].strip()
    if sector in ("even", "odd"):
        return FullParity(sector)
    if sector == "both":
        return "both"
    if sector.startswith("M=") or sector.startswith("m="):
        try:
            return MSubspace(int(sector[2:]))
        except ValueError as exc:
            raise UsageError(f"bad sector {sector!r}: {exc}") from exc
    raise UsageError(f"bad sector {sector!r}; use 'even', 'odd', 'both' or 'M=<int>'")


def _parse_initial(config: dict) -> qn.InitialSelector:
    text = config["initial"].strip()
    if text == "ground":
        return qn.EigenstateIndex(0)
    if text.startswith("index:"):
        try:
            return qn.EigenstateIndex(int(text[6:]))
        except ValueError as exc:
            raise UsageError(f"bad initial {text!r}: {exc}") from exc
    if text.startswith("basis:"):
        parts = text[6:].split(",")
        if len(parts) != 2:
            raise UsageError(f"bad initial {text!r}; use 'basis:n,m'")
        try:
            n = int(parts[0])
            two_m = round(2 * float(parts[1]))
        except ValueError as exc:
            raise UsageError(f"bad initial {text!r}: {exc}") from exc
        return qn.ExplicitBasisState(n, int(two_m))
    raise UsageError(f"bad initial {text!r}; use 'ground', 'index:K' or 'basis:n,m'")


def _make_params(config: dict, involved: list[float], spec) -> ModelParams:
    base = dict(
        omega=config["omega"], omega0=config["omega0"], delta=config["delta"],
        two_j=config["two_j"],
    )
    n_max = config["n_max"]
    if n_max == 0 and not isinstance(spec, MSubspace):
        n_max = suggest_n_max(ModelParams(**base, n_max=0), involved)
    try:
        return ModelParams(**base, n_max=n_max)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc


def _grow_truncation(params: ModelParams) -> ModelParams:
    return ModelParams(
        omega=params.omega, omega0=params.omega0, delta=params.delta,
        two_j=params.two_j, n_max=int(params.n_max * 1.5) + 10,
    )


def _run_with_audit_retry(params: ModelParams, runner, attempts: int = 3):
    """Re-run with a larger photon truncation when the audit trips."""
    for attempt in range(attempts):
        try:
            return params, runner(params)
        except TruncationError as exc:
            if attempt == attempts - 1:
                raise
            params = _grow_truncation(params)
            print(f"[dicke-quench] {exc}; retrying with n_max={params.n_max}",
                  file=sys.stderr)
    raise AssertionError("unreachable")


def _time_grid(config: dict, sc: qn.QuenchScalars) -> np.ndarray:
    text = config["time_grid"].strip()
    if text == "auto":
        t_h = sc.t_H if math.isfinite(sc.t_H) else sc.t_s
        return qn.default_time_grid(sc.t_s, t_h)
    parts = text.split(":")
    if len(parts) != 4 or parts[0] not in ("log", "lin"):
        raise UsageError(f"bad time grid {text!r}; use 'auto', 'log:lo:hi:n' or 'lin:lo:hi:n'")
    try:
        lo, hi, n = float(parts[1]), float(parts[2]), int(parts[3])
    except ValueError as exc:
        raise UsageError(f"bad time grid {text!r}: {exc}") from exc
    if parts[0] == "log":
        if lo <= 0:
            raise UsageError("log time grid needs lo > 0")
        return np.concatenate(([0.0], np.geomspace(lo, hi, n)))
    grid = np.linspace(lo, hi, n)
    return grid if lo == 0.0 else np.concatenate(([0.0], grid))


def _mod_time(sc: qn.QuenchScalars, rule: str) -> float:
    return sc.t_H_mod if rule == "threshold" else sc.t_H_mod_alt


# ---------------------------------------------------------------------------
# Commands
# ---------------------------------------------------------------------------

def cmd_levels(command: str, config: dict, outdir: Path) -> None:
    grid = _parse_grid(config["lambda_grid"], "lambda")
    sector = _parse_sector(config)
    sectors = [FullParity("even"), FullParity("odd")] if sector == "both" else [sector]
    params = _make_params(config, [float(np.max(np.abs(grid)))], sectors[0])
    config = dict(config, n_max=params.n_max)
    scale = params.energy_scale

    tables = [spl.level_dynamics(params, s, grid, threads=config["threads"])
              for s in sectors]
    merged = np.hstack([t[1] for t in tables])
    merged.sort(axis=1)

    rows = []
    for i, lam in enumerate(grid):
        for l, e in enumerate(merged[i]):
            rows.append((float(lam), l, float(e), float(e / scale)))
    write_csv(outdir / "levels.csv", command, config,
              ["lambda", "level_index", "E", "E_over_w0j"], rows)

    cs = spl.esqpt_lines(params)
    curve_fns = cs.curves()
    header = ["lambda"]
    curve_vals = {name: np.asarray(fn(grid), dtype=float)
                  for name, (fn, _validity) in curve_fns.items()}
    for name in curve_vals:
        header += [name, f"{name}_valid"]
    crit_rows = []
    for i in range(grid.size):
        row: list = [float(grid[i])]
        for name, vals in curve_vals.items():
            row += [float(vals[i]), int(np.isfinite(vals[i]))]
        crit_rows.append(tuple(row))
    write_csv(outdir / "critical_lines.csv", command, config, header, crit_rows)

    if config["plot"]:
        plots.plot_levels(outdir / "levels.png", grid, merged / scale, curve_vals)


def _quench_spec(config: dict, sector) -> qn.QuenchSpec:
    if sector == "both":
        raise UsageError("quench-type commands need a definite sector")
    if math.isnan(config["lambda_i"]) or math.isnan(config["lambda_f"]):
        raise UsageError("lambda_i and lambda_f are required")
    return qn.QuenchSpec(
        lambda_i=config["lambda_i"],
        lambda_f=config["lambda_f"],
        initial=_parse_initial(config),
        basis=sector,
    )


def _scalar_rows(sc: qn.QuenchScalars, result: qn.QuenchResult, p_longtime: float):
    w = result.weights
    k = int(np.argmax(w))
    return [(
        sc.mean_Ef, sc.var_Ef, sc.t_s, sc.t_H, sc.t_H_mod, sc.t_H_mod_alt,
        sc.participation, sc.p_infinity, sc.p_variance, sc.n_levels,
        sc.n_retained, sc.n_retained_alt, float(w[k]),
        float(result.final_energies[k]), p_longtime, result.initial_energy,
        result.spec.delta_lambda,
    )]


_SCALAR_HEADER = [
    "mean_Ef", "var_Ef", "t_s", "t_H", "t_H_mod", "t_H_mod_alt",
    "participation", "p_infinity", "p_variance", "n_levels", "n_retained",
    "n_retained_alt", "max_s2", "E_at_max_s2", "p_longtime_mean",
    "initial_energy", "delta_lambda",
]


def cmd_quench(command: str, config: dict, outdir: Path) -> None:
    sector = _parse_sector(config)
    spec0 = _quench_spec(config, sector)
    params0 = _make_params(config, [spec0.lambda_i, spec0.lambda_f], sector)
    params, result = _run_with_audit_retry(
        params0, lambda p: qn.run_quench(p, spec0, method=config["method"]))
    config = dict(config, n_max=params.n_max)
    scale = params.energy_scale

    sc = qn.scalars(result, mod_threshold=config["mod_threshold"])
    e, w = result.strength_function()
    s = result.amplitudes
    write_csv(outdir / "strength.csv", command, config,
              ["l", "E", "E_over_w0j", "s", "s2"],
              [(l, float(e[l]), float(e[l] / scale), float(s[l]), float(w[l]))
               for l in range(e.size)])

    grid = _time_grid(config, sc)
    surv = qn.survival_probability(result, grid)
    gauss = qn.gaussian_reference(sc.t_s, grid)
    write_csv(outdir / "survival.csv", command, config,
              ["t", "P", "P_gaussian_ref"],
              [(float(grid[i]), float(surv.values[i]), float(gauss.values[i]))
               for i in range(grid.size)])

    t_mod = _mod_time(sc, config["mod_rule"])
    t_ref = t_mod if math.isfinite(t_mod) else sc.t_H
    p_long = (qn.long_time_average(result, 100 * t_ref, 200 * t_ref)
              if math.isfinite(t_ref) else math.nan)
    write_csv(outdir / "scalars.csv", command, config, _SCALAR_HEADER,
              _scalar_rows(sc, result, p_long))

    table = analysis.spacing_population_table(result)
    write_csv(outdir / "spacing.csv", command, config,
              ["l", "E", "spacing", "mean_population"],
              [(rec.l, float(e[rec.l]), rec.spacing, rec.mean_pop) for rec in table])

    if config["plot"]:
        plots.plot_quench(outdir / "quench.png", surv, gauss, e / scale, w,
                          {"t_s": sc.t_s, "t_H": sc.t_H, "t_H'": t_mod})


def cmd_sweep(command: str, config: dict, outdir: Path) -> None:
    sector = _parse_sector(config)
    if sector == "both":
        raise UsageError("sweep needs a definite sector")
    grid = _parse_grid(config["lambda_f_grid"], "lambda_f")
    if math.isnan(config["lambda_i"]):
        raise UsageError("lambda_i is required")
    initial = _parse_initial(config)
    params0 = _make_params(
        config, [config["lambda_i"], float(np.max(np.abs(grid)))], sector)

    def runner(p: ModelParams):
        return qn.sweep_scalars(
            p, sector, config["lambda_i"], initial, grid,
            method=config["method"], threads=config["threads"],
            mod_threshold=config["mod_threshold"],
        )

    params, rows = _run_with_audit_retry(params0, runner)
    config = dict(config, n_max=params.n_max)
    out_rows = []
    for lam_f, sc in rows:
        out_rows.append((
            float(lam_f), sc.mean_Ef, sc.var_Ef, sc.t_H,
            _mod_time(sc, config["mod_rule"]), sc.participation, sc.p_infinity,
        ))
    write_csv(outdir / "sweep.csv", command, config,
              ["lambda_f", "mean_Ef", "var_Ef", "t_H", "t_H_mod",
               "participation", "p_infinity"], out_rows)
    if config["plot"]:
        arr = np.array(out_rows)
        plots.plot_sweep(outdir / "sweep.png", arr[:, 0], arr[:, 3], arr[:, 4], arr[:, 5])


def cmd_peres(command: str, config: dict, outdir: Path) -> None:
    sector = _parse_sector(config)
    if sector == "both":
        raise UsageError("peres needs a definite sector")
    if math.isnan(config["lam"]):
        raise UsageError("lam is required for the Peres lattice")
    involved = [config["lam"]]
    overlay_requested = not math.isnan(config["lambda_i"])
    if overlay_requested:
        involved.append(config["lambda_i"])
    params0 = _make_params(config, involved, sector)

    def runner(p: ModelParams):
        split = assemble(p, sector)
        eig = spl.diagonalize_split(split, config["lam"])
        overlay = None
        if overlay_requested:
            spec = qn.QuenchSpec(config["lambda_i"], config["lam"],
                                 _parse_initial(config), sector)
            psi, e_i = qn._initial_state_dense(split, spec)
            amplitudes = eig.vectors.T @ psi
            overlay = qn.QuenchResult(
                params=p, spec=spec, amplitudes=amplitudes,
                final_energies=eig.energies, initial_energy=e_i, method="dense")
            from .quench import _audit_quench, _strength_edge_dense
            _audit_quench(split.basis, psi,
                          _strength_edge_dense(split.basis, eig.vectors, amplitudes**2))
        obs = operator_diagonal(split.basis, config["observable"])
        return analysis.peres_lattice(eig, obs, overlay)

    params, points = _run_with_audit_retry(params0, runner)
    config = dict(config, n_max=params.n_max)
    scale = params.energy_scale
    write_csv(outdir / "peres.csv", command, config,
              ["l", "E", "E_over_w0j", "expect_n", "population"],
              [(pt.l, pt.energy, pt.energy / scale, pt.expectation, pt.population)
               for pt in points])
    if config["plot"]:
        arr = np.array([(pt.energy / scale, pt.expectation, pt.population)
                        for pt in points])
        plots.plot_peres(outdir / "peres.png", arr[:, 0], arr[:, 1], arr[:, 2])


def cmd_observable(command: str, config: dict, outdir: Path) -> None:
    sector = _parse_sector(config)
    spec0 = _quench_spec(config, sector)
    params0 = _make_params(config, [spec0.lambda_i, spec0.lambda_f], sector)

    def runner(p: ModelParams):
        return qn.run_quench(p, spec0, method=config["method"], return_final=True)

    params, (result, final) = _run_with_audit_retry(params0, runner)
    config = dict(config, n_max=params.n_max)
    sc = qn.scalars(result, mod_threshold=config["mod_threshold"])
    grid = _time_grid(config, sc)
    obs = operator_diagonal(final.basis, config["observable"])
    evo = qn.observable_evolution(result, final, obs, grid,
                                  population_floor=config["population_floor"])
    provenance = dict(config, population_floor_error_bound=evo.error_bound,
                      retained_weight=evo.retained_weight)
    write_csv(outdir / "observable.csv", command, provenance,
              ["t", "expectation", "diagonal_saturation_value"],
              [(float(grid[i]), float(evo.values[i]), evo.saturation)
               for i in range(grid.size)])
    if config["plot"]:
        plots.plot_observable(outdir / "observable.png", grid, evo.values, evo.saturation)


def cmd_dispersion(command: str, config: dict, outdir: Path) -> None:
    from .model import interaction_dispersion_analytic, interaction_dispersion_numeric

    base = ModelParams(omega=config["omega"], omega0=config["omega0"],
                       delta=config["delta"], two_j=config["two_j"], n_max=0)
    if base.omega == base.omega0:
        print("[dicke-quench] resonance omega = omega0: lowest subspace states "
              "are degenerate at lambda=0; dispersion rows use the max-m state",
              file=sys.stderr)
    entries: list[tuple[int, int, int]] = []  # (M, n, two_m)
    if config["lowest_per_m"] > 0:
        for m_tot in range(0, config["lowest_per_m"] + 1):
            basis = build_basis(base, MSubspace(m_tot))
            h0 = (base.omega * basis.n_values
                  + base.omega0 * basis.two_m_values / 2.0)
            k = int(np.argmin(h0))
            entries.append((m_tot, int(basis.n_values[k]), int(basis.two_m_values[k])))
    elif config["states"]:
        for item in config["states"].split(";"):
            parts = item.split(",")
            if len(parts) != 2:
                raise UsageError(f"bad state {item!r}; use 'n,m'")
            n = int(parts[0])
            two_m = round(2 * float(parts[1]))
            m_tot = (2 * n + two_m + base.two_j) // 2
            entries.append((m_tot, n, int(two_m)))
    else:
        raise UsageError("dispersion needs --lowest-per-m or --states")

    rows = []
    for m_tot, n, two_m in entries:
        e0 = base.omega * n + base.omega0 * two_m / 2.0
        rows.append((
            m_tot, n, two_m / 2.0, float(e0),
            interaction_dispersion_analytic(base, n, two_m / 2.0),
            interaction_dispersion_numeric(base, n, two_m),
        ))
    write_csv(outdir / "dispersion.csv", command, config,
              ["M", "n", "m", "E_at_lambda0", "dispersion_analytic",
               "dispersion_numeric"], rows)
    if config["plot"]:
        arr = np.array([(r[3] / base.energy_scale, r[4], r[0]) for r in rows])
        plots.plot_dispersion(outdir / "dispersion.png", arr[:, 0], arr[:, 1], arr[:, 2])


def cmd_dump_matrix(command: str, config: dict, outdir: Path) -> None:
    sector = _parse_sector(config)
    if sector == "both":
        raise UsageError("dump-matrix needs a definite sector")
    params = _make_params(config, [abs(config["lam"]) if not math.isnan(config["lam"]) else 1.0],
                          sector)
    config = dict(config, n_max=params.n_max)
    split = assemble(params, sector)
    if split.dim > 3000:
        raise UsageError(f"refusing to dump a {split.dim}-dimensional dense matrix")
    write_csv(outdir / "h0.csv", command, config,
              [f"c{j}" for j in range(split.dim)],
              [tuple(float(x) for x in row) for row in split.h0])
    write_csv(outdir / "v.csv", command, config,
              [f"c{j}" for j in range(split.dim)],
              [tuple(float(x) for x in row) for row in split.v])


_DISPATCH = {
    "levels": cmd_levels,
    "quench": cmd_quench,
    "sweep": cmd_sweep,
    "peres": cmd_peres,
    "observable": cmd_observable,
    "dispersion": cmd_dispersion,
    "dump-matrix": cmd_dump_matrix,
}


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        command, config = resolve_config(args)
        outdir = Path(config["out"])
        print(f"[dicke-quench] {command} -> {outdir}", file=sys.stderr)
        _DISPATCH[command](command, config, outdir)
    except (UsageError, KeyError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (ValueError,) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (TruncationError, DiagonalizationError, KrylovConvergenceError,
            qn.DegenerateInitialStateError, qn.QuenchConsistencyError,
            np.linalg.LinAlgError) as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return 3
    print(f"[dicke-quench] done: {command}", file=sys.stderr)
    return 0


if __name__ == "__main__":
    sys.exit(main())
