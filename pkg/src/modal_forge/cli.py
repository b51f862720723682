"""Command-line harness wiring the full pipeline.

    modal-forge <simulate|sweep|train|evaluate|optimize|validate>
                --config FILE [--seed N] [--out DIR]

One TOML file configures every stage; each command reads the sections it
needs. `--seed` overrides every per-section seed for one-line
reproduction; `--out` redirects the output directory. Exit codes: 0 ok,
2 configuration error, 3 data error, 4 numerical failure.

All data outputs are deterministic given config and seeds, so re-running a
command overwrites them byte-identically; files holding wall-clock
measurements (runtime.json, validation_report.json) are the documented
exception. Every output carries the tool version and a hash of the
resolved configuration.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import math
import sys
import time
from dataclasses import dataclass
from pathlib import Path
from typing import Optional

import numpy as np

try:
    import tomllib  # py311+
except ModuleNotFoundError:  # pragma: no cover - depends on interpreter
    import tomli as tomllib

from . import __version__
from .dataset import (
    Dataset,
    GridSampling,
    LogUniformSampling,
    ParameterSpace,
    generate_dataset,
    read_dataset,
    split_dataset,
    write_dataset,
)
from .errors import DataError, InvalidInputError, ModalForgeError, NumericalError
from .excitation import (
    BaseRecord,
    Free,
    HalfSinePulse,
    Sine,
    load_ground_motion,
    resample_record,
    synthesize_force,
)
from .ga import GaConfig, direct_fitness, evolve, surrogate_fitness
from .gnn import (
    TrainConfig,
    evaluate as evaluate_model,
    fit_norm_stats,
    init_model,
    load_model,
    predict_batch,
    save_model,
    train as train_model,
)
from .sdof import (
    InitialConditions,
    NewmarkParams,
    SdofSystem,
    damping_from_ratio,
    max_abs_displacement,
    newmark_solve,
)

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_DATA = 3
EXIT_NUMERICAL = 4


def _fmt(x: float) -> str:
    return repr(float(x))


@dataclass(frozen=True)
class RunConfig:
    """Parsed configuration plus resolved locations and a content hash."""

    raw: dict
    config_dir: Path
    out_dir: Path
    config_hash: str

    def section(self, name: str) -> dict:
        value = self.raw.get(name)
        if value is None:
            raise InvalidInputError(f"config is missing the [{name}] section")
        return value

    def path_entry(self, key: str) -> Path:
        paths = self.raw.get("paths", {})
        value = paths.get(key)
        if value is None:
            raise InvalidInputError(f"config is missing paths.{key}")
        p = Path(value)
        return p if p.is_absolute() else self.out_dir / p

    def optional(self, section: str, key: str, default):
        return self.raw.get(section, {}).get(key, default)


def load_config(path: str, seed_override: Optional[int], out_override: Optional[str]) -> RunConfig:
    cfg_path = Path(path)
    try:
        with open(cfg_path, "rb") as fh:
            raw = tomllib.load(fh)
    except OSError as exc:
        raise DataError(f"cannot read config {path}: {exc}") from exc
    except tomllib.TOMLDecodeError as exc:
        raise InvalidInputError(f"malformed config {path}: {exc}") from exc

    if seed_override is not None:
        raw.setdefault("space", {})["seed"] = seed_override
        raw.setdefault("dataset", {})["split_seed"] = seed_override
        raw.setdefault("training", {})["seed"] = seed_override
        raw.setdefault("ga", {})["seed"] = seed_override

    config_dir = cfg_path.resolve().parent
    if out_override is not None:
        out_dir = Path(out_override).resolve()
    else:
        out_entry = Path(raw.get("paths", {}).get("out_dir", "."))
        out_dir = out_entry if out_entry.is_absolute() else (config_dir / out_entry)
    out_dir.mkdir(parents=True, exist_ok=True)

    digest = hashlib.sha256(
        json.dumps(raw, sort_keys=True, default=str).encode()
    ).hexdigest()[:12]
    return RunConfig(raw=raw, config_dir=config_dir, out_dir=out_dir, config_hash=digest)


def _csv_header_lines(config: RunConfig) -> str:
    return f"# modal-forge {__version__}\n# config {config.config_hash}\n"


def _json_meta(config: RunConfig) -> dict:
    return {"tool_version": __version__, "config_hash": config.config_hash}


def _write_json(path: Path, payload: dict) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(payload, fh, indent=2, sort_keys=True)
        fh.write("\n")


def _build_system(config: RunConfig) -> tuple:
    sec = config.section("system")
    try:
        m = float(sec["m"])
        k = float(sec["k"])
    except KeyError as exc:
        raise InvalidInputError(f"system section is missing {exc.args[0]!r}") from None
    has_c = "c" in sec
    has_zeta = "zeta" in sec
    if has_c == has_zeta:
        raise InvalidInputError("system section must set exactly one of 'c' or 'zeta'")
    c = float(sec["c"]) if has_c else damping_from_ratio(m, k, float(sec["zeta"]))
    ic = InitialConditions(u0=float(sec.get("u0", 0.0)), v0=float(sec.get("v0", 0.0)))
    return SdofSystem(m=m, k=k, c=c), ic


def _solver_params(config: RunConfig) -> tuple:
    sec = config.section("solver")
    try:
        dt = float(sec["dt"])
        duration = float(sec["duration"])
    except KeyError as exc:
        raise InvalidInputError(f"solver section is missing {exc.args[0]!r}") from None
    params = NewmarkParams(
        dt=dt,
        gamma=float(sec.get("gamma", 0.5)),
        beta=float(sec.get("beta", 0.25)),
    )
    n = int(round(duration / dt)) + 1
    if n < 2:
        raise InvalidInputError(f"duration {duration} must cover at least 2 samples at dt={dt}")
    return params, duration, n


def _build_excitation(config: RunConfig, dt: float):
    sec = config.section("excitation")
    kind = sec.get("kind")
    if kind == "free":
        return Free()
    if kind == "sine":
        try:
            return Sine(amplitude=float(sec["amplitude"]), omega=float(sec["omega"]))
        except KeyError as exc:
            raise InvalidInputError(f"sine excitation is missing {exc.args[0]!r}") from None
    if kind == "half_sine_pulse":
        try:
            return HalfSinePulse(p0=float(sec["p0"]), td=float(sec["td"]))
        except KeyError as exc:
            raise InvalidInputError(f"pulse excitation is missing {exc.args[0]!r}") from None
    if kind == "base_record":
        record = load_ground_motion(config.path_entry("ground_motion"))
        if not math.isclose(record.dt, dt, rel_tol=1e-9):
            record = resample_record(record, dt)
        return BaseRecord(record=record, scale=float(sec.get("scale", 1.0)))
    raise InvalidInputError(
        f"excitation.kind must be free|sine|half_sine_pulse|base_record, got {kind!r}"
    )


def _build_space(config: RunConfig) -> ParameterSpace:
    sec = config.section("space")
    ranges = {}
    for key in ("m_range", "k_range", "c_range"):
        try:
            lo, hi = sec[key]
        except KeyError:
            raise InvalidInputError(f"space section is missing {key!r}") from None
        ranges[key] = (float(lo), float(hi))
    mode = sec.get("sampling", "log_uniform")
    if mode == "grid":
        counts = sec.get("counts")
        if counts is None or len(counts) != 3:
            raise InvalidInputError("grid sampling requires space.counts = [nm, nk, nc]")
        sampling = GridSampling(counts=tuple(int(c) for c in counts))
    elif mode == "log_uniform":
        sampling = LogUniformSampling(
            count=int(sec.get("count", 2000)),
            seed=int(sec.get("seed", 0)),
        )
    else:
        raise InvalidInputError(f"space.sampling must be grid or log_uniform, got {mode!r}")
    return ParameterSpace(sampling=sampling, **ranges)


def _train_config(config: RunConfig) -> TrainConfig:
    sec = config.raw.get("training", {})
    return TrainConfig(
        learning_rate=float(sec.get("learning_rate", 1e-2)),
        momentum=float(sec.get("momentum", 0.9)),
        epochs=int(sec.get("epochs", 600)),
        batch_size=int(sec.get("batch_size", 32)),
        seed=int(sec.get("seed", 13)),
        patience=int(sec.get("patience", 60)),
    )


def _ga_config(config: RunConfig) -> GaConfig:
    sec = config.raw.get("ga", {})
    if all(key in sec for key in ("m_range", "k_range", "c_range")):
        bounds = tuple(
            (float(sec[key][0]), float(sec[key][1]))
            for key in ("m_range", "k_range", "c_range")
        )
    elif "space" in config.raw:
        space = _build_space(config)
        bounds = space.ranges
    else:
        from .ga import DEFAULT_BOUNDS
        bounds = DEFAULT_BOUNDS
    return GaConfig(
        bounds=bounds,
        population=int(sec.get("population", 50)),
        generations=int(sec.get("generations", 100)),
        tournament=int(sec.get("tournament", 3)),
        crossover_p=float(sec.get("crossover_p", 0.9)),
        blend_alpha=float(sec.get("blend_alpha", 0.5)),
        mutation_p=float(sec.get("mutation_p", 0.2)),
        mutation_sigma=float(sec.get("mutation_sigma", 0.1)),
        elites=int(sec.get("elites", 1)),
        seed=int(sec.get("seed", 0)),
    )


# ---------------------------------------------------------------------------
# commands
# ---------------------------------------------------------------------------

def cmd_simulate(config: RunConfig) -> int:
    """Run one time-history simulation and write t,u,v,a,p as CSV."""
    system, ic = _build_system(config)
    params, _duration, n = _solver_params(config)
    excitation = _build_excitation(config, params.dt)
    forces = synthesize_force(excitation, system.m, params.dt, n)
    history = newmark_solve(system, ic, forces, params)

    out = config.out_dir / "time_history.csv"
    lines = [_csv_header_lines(config) + "t,u_m,v_mps,a_mps2,p_N"]
    t = history.t
    for i in range(len(history)):
        lines.append(",".join(_fmt(x) for x in (t[i], history.u[i], history.v[i],
                                                history.a[i], history.p[i])))
    out.write_text("\n".join(lines) + "\n", encoding="utf-8")

    u_max = max_abs_displacement(history)
    print(f"wrote {out}")
    print(f"u_max = {u_max:.6e} m")
    return EXIT_OK


def cmd_sweep(config: RunConfig) -> int:
    """Generate the peak-displacement dataset over the parameter space."""
    params, duration, _n = _solver_params(config)
    excitation = _build_excitation(config, params.dt)
    space = _build_space(config)

    t0 = time.perf_counter()
    dataset = generate_dataset(space, excitation, params.dt, duration)
    elapsed = time.perf_counter() - t0

    sec = config.raw.get("dataset", {})
    test_fraction = float(sec.get("test_fraction", 0.2))
    split_seed = int(sec.get("split_seed", 101))
    dataset = split_dataset(dataset, test_fraction, split_seed)

    csv_path = config.path_entry("dataset")
    write_dataset(
        dataset,
        csv_path,
        header_comment=f"modal-forge {__version__}\nconfig {config.config_hash}",
    )
    meta_path = Path(f"{csv_path}.meta.json")
    meta = json.loads(meta_path.read_text(encoding="utf-8"))
    meta.update(_json_meta(config))
    meta["split_seed"] = split_seed
    meta["test_fraction"] = test_fraction
    _write_json(meta_path, meta)

    print(f"wrote {csv_path} ({len(dataset)} records, "
          f"{len(dataset.train_idx)} train / {len(dataset.test_idx)} test)")
    print(f"sweep wall time: {elapsed:.2f} s")
    return EXIT_OK


def _load_dataset(config: RunConfig) -> Dataset:
    csv_path = config.path_entry("dataset")
    if not Path(csv_path).exists():
        raise DataError(f"dataset not found: {csv_path} (run `modal-forge sweep` first)")
    return read_dataset(csv_path)


def _print_metrics(metrics, label: str) -> None:
    print(f"Model performance ({label})")
    print(f"  R^2  : {metrics.r2:.4f}")
    print(f"  MAE  : {metrics.mae:.6f} m")
    print(f"  MAPE : {metrics.mape:.2f} %")


def cmd_train(config: RunConfig) -> int:
    """Fit the surrogate on the dataset's training split and checkpoint it."""
    dataset = _load_dataset(config)
    tcfg = _train_config(config)
    sec = config.raw.get("training", {})

    train_triples, train_targets = dataset.subset(dataset.train_idx)
    if len(train_targets) == 0:
        raise DataError("dataset has an empty training split")

    # hold out a slice of the training split for early stopping; the test
    # split stays untouched until evaluation
    val_fraction = float(sec.get("val_fraction", 0.15))
    rng = np.random.default_rng(tcfg.seed)
    perm = rng.permutation(len(train_targets))
    n_val = int(round(val_fraction * len(perm)))
    val_sel, fit_sel = perm[:n_val], perm[n_val:]
    if len(fit_sel) == 0:
        raise InvalidInputError("val_fraction leaves no training samples")

    norm = fit_norm_stats(train_triples[fit_sel], train_targets[fit_sel])
    model = init_model(
        norm,
        rounds=int(sec.get("rounds", 2)),
        hidden=int(sec.get("hidden", 64)),
        activation=sec.get("activation", "tanh"),
        seed=tcfg.seed,
    )
    val_data = (train_triples[val_sel], train_targets[val_sel]) if n_val else None
    t0 = time.perf_counter()
    model, history = train_model(model, (train_triples[fit_sel], train_targets[fit_sel]),
                                 val_data, tcfg)
    elapsed = time.perf_counter() - t0

    ckpt_path = config.path_entry("checkpoint")
    save_model(model, ckpt_path)

    print(f"trained {len(history)} epochs in {elapsed:.1f} s; wrote {ckpt_path}")
    if dataset.test_idx:
        test_data = dataset.subset(dataset.test_idx)
        metrics = evaluate_model(model, test_data)
        _print_metrics(metrics, "test split")
        parity = config.out_dir / "parity.csv"
        preds = predict_batch(model, test_data[0])
        lines = [_csv_header_lines(config) + "u_true_m,u_pred_m"]
        for y, yhat in zip(test_data[1], preds):
            lines.append(f"{_fmt(y)},{_fmt(yhat)}")
        parity.write_text("\n".join(lines) + "\n", encoding="utf-8")
        print(f"wrote {parity}")
    return EXIT_OK


def cmd_evaluate(config: RunConfig) -> int:
    """Report test-split metrics for an existing checkpoint."""
    dataset = _load_dataset(config)
    ckpt_path = config.path_entry("checkpoint")
    if not Path(ckpt_path).exists():
        raise DataError(f"checkpoint not found: {ckpt_path} (run `modal-forge train` first)")
    model = load_model(ckpt_path)
    idx = dataset.test_idx if dataset.test_idx else dataset.train_idx
    label = "test split" if dataset.test_idx else "train split"
    metrics = evaluate_model(model, dataset.subset(idx))
    _print_metrics(metrics, label)
    return EXIT_OK


def cmd_optimize(config: RunConfig) -> int:
    """Search the bounded (m, k, c) box with the genetic algorithm."""
    gcfg = _ga_config(config)
    mode = config.optional("ga", "mode", "surrogate")
    if mode == "surrogate":
        ckpt_path = config.path_entry("checkpoint")
        if not Path(ckpt_path).exists():
            raise DataError(f"checkpoint not found: {ckpt_path} (run `modal-forge train` first)")
        fitness = surrogate_fitness(load_model(ckpt_path))
    elif mode == "direct":
        params, duration, _n = _solver_params(config)
        fitness = direct_fitness(_build_excitation(config, params.dt), params.dt, duration)
    else:
        raise InvalidInputError(f"ga.mode must be surrogate or direct, got {mode!r}")

    result = evolve(fitness, gcfg)
    m, k, c = result.best_params

    conv = config.out_dir / "convergence.csv"
    lines = [_csv_header_lines(config) + "generation,best_fitness_m,mean_fitness_m"]
    for gen, (best, mean) in enumerate(result.history):
        lines.append(f"{gen},{_fmt(best)},{_fmt(mean)}")
    conv.write_text("\n".join(lines) + "\n", encoding="utf-8")

    best = {
        **_json_meta(config),
        "mode": mode,
        "m_kg": m,
        "k_N_per_m": k,
        "c_Ns_per_m": c,
        "fitness_m": result.best_fitness,
        "evaluations": result.evaluations,
        "generations": gcfg.generations,
        "population": gcfg.population,
        "seed": gcfg.seed,
        "bounds": [list(b) for b in gcfg.bounds],
    }
    _write_json(config.out_dir / "best_params.json", best)

    # wall-clock measurements live in their own file: every other output is
    # byte-reproducible, these numbers never are
    _write_json(config.out_dir / "runtime.json", {
        **_json_meta(config),
        "mode": mode,
        "fitness_calls": fitness.n_evals,
        "fitness_total_s": fitness.total_seconds,
        "fitness_mean_s": fitness.mean_seconds,
    })

    print(f"wrote {conv}")
    print(f"best (m, k, c) = ({m:.6g}, {k:.6g}, {c:.6g})")
    print(f"best fitness = {result.best_fitness:.6e} m "
          f"after {result.evaluations} evaluations")
    return EXIT_OK


@dataclass(frozen=True)
class ValidationReport:
    """Surrogate-vs-solver comparison at the optimized parameters."""

    m: float
    k: float
    c: float
    u_pred: float              # surrogate prediction, m
    u_sim: float               # direct simulation, m
    abs_diff: float            # m
    rel_diff_percent: Optional[float]  # None when u_sim == 0
    runtime: dict

    def to_dict(self) -> dict:
        return {
            "optimal": {"m_kg": self.m, "k_N_per_m": self.k, "c_Ns_per_m": self.c},
            "u_pred_m": self.u_pred,
            "u_sim_m": self.u_sim,
            "abs_diff_m": self.abs_diff,
            "rel_diff_percent": self.rel_diff_percent,
            "runtime": self.runtime,
        }


def cmd_validate(config: RunConfig) -> int:
    """Check the GA optimum against a direct simulation and report the gap
    plus the per-call cost of each fitness path."""
    best_path = config.out_dir / "best_params.json"
    if not best_path.exists():
        raise DataError(f"best-parameter record not found: {best_path} "
                        "(run `modal-forge optimize` first)")
    best = json.loads(best_path.read_text(encoding="utf-8"))
    m, k, c = best["m_kg"], best["k_N_per_m"], best["c_Ns_per_m"]

    ckpt_path = config.path_entry("checkpoint")
    if not Path(ckpt_path).exists():
        raise DataError(f"checkpoint not found: {ckpt_path}")
    model = load_model(ckpt_path)

    params, duration, _n = _solver_params(config)
    excitation = _build_excitation(config, params.dt)

    surrogate = surrogate_fitness(model)
    u_pred = surrogate(m, k, c)

    direct = direct_fitness(excitation, params.dt, duration)
    repeats = int(config.optional("validate", "solver_repeats", 3))
    for _ in range(max(1, repeats)):
        u_sim = direct(m, k, c)

    # amortized surrogate cost, measured the way the optimizer consumes it:
    # whole-population batches
    pop = int(config.optional("ga", "population", 50))
    batch = np.tile([[m, k, c]], (pop, 1))
    for _ in range(20):
        surrogate.evaluate_batch(batch)

    runtime_path = config.out_dir / "runtime.json"
    ga_runtime = None
    if runtime_path.exists():
        ga_runtime = json.loads(runtime_path.read_text(encoding="utf-8"))

    if ga_runtime and ga_runtime.get("mode") == "surrogate" and ga_runtime.get("fitness_calls"):
        surrogate_mean = float(ga_runtime["fitness_mean_s"])
        surrogate_calls = int(ga_runtime["fitness_calls"])
    else:
        surrogate_mean = surrogate.mean_seconds
        surrogate_calls = surrogate.n_evals

    runtime = {
        "surrogate_mean_s": surrogate_mean,
        "surrogate_calls": surrogate_calls,
        "direct_mean_s": direct.mean_seconds,
        "direct_calls": direct.n_evals,
        "speedup_ratio": (direct.mean_seconds / surrogate_mean
                          if surrogate_mean > 0 else None),
    }

    abs_diff = abs(u_pred - u_sim)
    rel = 100.0 * abs_diff / u_sim if u_sim > 0 else None
    report = ValidationReport(m=m, k=k, c=c, u_pred=u_pred, u_sim=u_sim,
                              abs_diff=abs_diff, rel_diff_percent=rel, runtime=runtime)

    _write_json(config.out_dir / "validation_report.json",
                {**_json_meta(config), **report.to_dict()})

    print("Validation at GA optimum")
    print(f"  (m, k, c)     = ({m:.6g}, {k:.6g}, {c:.6g})")
    print(f"  u_pred        = {u_pred:.6e} m")
    print(f"  u_sim         = {u_sim:.6e} m")
    print(f"  abs diff      = {abs_diff:.6e} m")
    if rel is not None:
        print(f"  rel diff      = {rel:.2f} %")
    else:
        print("  rel diff      = undefined (u_sim = 0)")
    print(f"  surrogate call: {surrogate_mean * 1e6:.1f} us mean "
          f"({surrogate_calls} calls)")
    print(f"  solver call   : {direct.mean_seconds * 1e3:.2f} ms mean "
          f"({direct.n_evals} calls)")
    if runtime["speedup_ratio"]:
        print(f"  speedup       : {runtime['speedup_ratio']:.0f}x")
    return EXIT_OK


COMMANDS = {
    "simulate": cmd_simulate,
    "sweep": cmd_sweep,
    "train": cmd_train,
    "evaluate": cmd_evaluate,
    "optimize": cmd_optimize,
    "validate": cmd_validate,
}


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="modal-forge",
        description="SDOF simulation, surrogate training and GA parameter search",
    )
    parser.add_argument("command", choices=sorted(COMMANDS))
    parser.add_argument("--config", required=True, help="TOML configuration file")
    parser.add_argument("--seed", type=int, default=None,
                        help="override every per-section seed")
    parser.add_argument("--out", default=None, help="override the output directory")
    args = parser.parse_args(argv)

    try:
        config = load_config(args.config, args.seed, args.out)
        return COMMANDS[args.command](config)
    except NumericalError as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    except DataError as exc:
        print(f"data error: {exc}", file=sys.stderr)
        return EXIT_DATA
    except (InvalidInputError, ModalForgeError) as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
