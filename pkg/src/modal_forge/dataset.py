"""Design-space sampling and peak-displacement dataset generation.

A dataset maps (m, k, c) triples to the peak absolute displacement of a
direct time-history simulation under one fixed excitation. Datasets are
persisted as a CSV of records plus a JSON metadata sidecar carrying the
excitation descriptor, solver settings, seeds and the train/test split.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field, replace
from typing import Optional, Sequence, Tuple, Union

import numpy as np

from .errors import DataError, InvalidInputError
from .excitation import ExcitationSpec, excitation_descriptor, synthesize_force
from .sdof import InitialConditions, NewmarkParams, SdofSystem, max_abs_displacement, newmark_solve

__all__ = [
    "GridSampling",
    "LogUniformSampling",
    "ParameterSpace",
    "SampleRecord",
    "Dataset",
    "DEFAULT_SPACE",
    "sample_parameters",
    "generate_dataset",
    "split_dataset",
    "write_dataset",
    "read_dataset",
]

CSV_HEADER = "m_kg,k_N_per_m,c_Ns_per_m,u_max_m"


@dataclass(frozen=True)
class GridSampling:
    """Cartesian grid; counts are per axis in (m, k, c) order."""

    counts: Tuple[int, int, int]

    def __post_init__(self):
        if any(c < 1 for c in self.counts):
            raise InvalidInputError(f"grid counts must be >= 1, got {self.counts}")


@dataclass(frozen=True)
class LogUniformSampling:
    """Independent draws, uniform in log10 of each interval."""

    count: int
    seed: int = 0

    def __post_init__(self):
        if self.count < 0:
            raise InvalidInputError(f"sample count must be >= 0, got {self.count}")


@dataclass(frozen=True)
class ParameterSpace:
    """Closed (m, k, c) intervals with a sampling strategy. Lower bounds
    must be positive: sampling and the surrogate both work in log10."""

    m_range: Tuple[float, float]
    k_range: Tuple[float, float]
    c_range: Tuple[float, float]
    sampling: Union[GridSampling, LogUniformSampling]

    def __post_init__(self):
        for name, (lo, hi) in (("m", self.m_range), ("k", self.k_range), ("c", self.c_range)):
            if not (lo > 0 and math.isfinite(lo) and math.isfinite(hi)):
                raise InvalidInputError(f"{name}_range lower bound must be positive and finite")
            if lo > hi:
                raise InvalidInputError(f"{name}_range is inverted: {lo} > {hi}")

    @property
    def ranges(self) -> Tuple[Tuple[float, float], ...]:
        return (self.m_range, self.k_range, self.c_range)

    def log_bounds(self) -> Tuple[np.ndarray, np.ndarray]:
        lo = np.log10([r[0] for r in self.ranges])
        hi = np.log10([r[1] for r in self.ranges])
        return lo, hi


# The box the optimizer searches by default (see ga.DEFAULT_BOUNDS).
OPTIMIZATION_BOX = ((0.1, 1000.0), (0.01, 1000.0), (0.02, 100.0))

# Default sweep space: the optimization box padded by 0.15 decade per side,
# so a surrogate trained on the sweep interpolates (rather than
# extrapolates) at the box faces where displacement minimization lands.
# Log sampling because each axis spans several decades; the damping floor
# keeps log10(c) defined.
SWEEP_PAD_DECADES = 0.15
_PAD = 10.0 ** SWEEP_PAD_DECADES
DEFAULT_SPACE = ParameterSpace(
    m_range=(OPTIMIZATION_BOX[0][0] / _PAD, OPTIMIZATION_BOX[0][1] * _PAD),
    k_range=(OPTIMIZATION_BOX[1][0] / _PAD, OPTIMIZATION_BOX[1][1] * _PAD),
    c_range=(OPTIMIZATION_BOX[2][0] / _PAD, OPTIMIZATION_BOX[2][1] * _PAD),
    sampling=LogUniformSampling(count=2000, seed=7),
)


@dataclass(frozen=True)
class SampleRecord:
    m: float
    k: float
    c: float
    u_max: float

    def __post_init__(self):
        vals = (self.m, self.k, self.c, self.u_max)
        if not all(math.isfinite(v) for v in vals):
            raise DataError(f"non-finite sample record {vals}")
        if self.u_max < 0:
            raise DataError(f"u_max must be non-negative, got {self.u_max}")


@dataclass(frozen=True)
class Dataset:
    """Immutable sweep result. train_idx/test_idx partition range(len(records));
    an unsplit dataset has everything in train_idx."""

    records: Tuple[SampleRecord, ...]
    excitation: dict
    dt: float
    duration: float
    seed: Optional[int]
    train_idx: Tuple[int, ...] = field(default=())
    test_idx: Tuple[int, ...] = field(default=())

    def __post_init__(self):
        n = len(self.records)
        if not self.train_idx and not self.test_idx:
            object.__setattr__(self, "train_idx", tuple(range(n)))
        combined = sorted(self.train_idx + self.test_idx)
        if combined != list(range(n)):
            raise InvalidInputError("train/test split must partition the record indices")

    def __len__(self):
        return len(self.records)

    def triples(self) -> np.ndarray:
        return np.array([[r.m, r.k, r.c] for r in self.records], dtype=float).reshape(-1, 3)

    def targets(self) -> np.ndarray:
        return np.array([r.u_max for r in self.records], dtype=float)

    def subset(self, indices: Sequence[int]) -> Tuple[np.ndarray, np.ndarray]:
        idx = list(indices)
        trip = self.triples()
        return trip[idx], self.targets()[idx]


def sample_parameters(space: ParameterSpace) -> list:
    """Sample (m, k, c) triples from a parameter space.

    Grid sampling walks the Cartesian product with m outermost; log-uniform
    sampling draws each coordinate as 10**U with U uniform between the log10
    bounds, reproducibly for a given seed.
    """
    sampling = space.sampling
    if isinstance(sampling, GridSampling):
        axes = []
        for (lo, hi), count in zip(space.ranges, sampling.counts):
            if count > 1 and lo == hi:
                raise InvalidInputError(
                    f"degenerate interval [{lo}, {hi}] cannot take {count} distinct points"
                )
            axes.append(np.linspace(lo, hi, count))
        return [(float(m), float(k), float(c))
                for m in axes[0] for k in axes[1] for c in axes[2]]
    if isinstance(sampling, LogUniformSampling):
        lo, hi = space.log_bounds()
        rng = np.random.default_rng(sampling.seed)
        genes = rng.uniform(lo, hi, size=(sampling.count, 3))
        values = 10.0 ** genes
        return [tuple(map(float, row)) for row in values]
    raise InvalidInputError(f"unknown sampling strategy {sampling!r}")


def _solve_peak(m, k, c, excitation, dt, n) -> float:
    system = SdofSystem(m=m, k=k, c=c)
    forces = synthesize_force(excitation, m, dt, n)
    history = newmark_solve(system, InitialConditions(), forces, NewmarkParams(dt=dt))
    return max_abs_displacement(history)


def generate_dataset(
    space: ParameterSpace,
    excitation: ExcitationSpec,
    dt: float,
    duration: float,
) -> Dataset:
    """Run the direct solver over every sampled triple and collect peak
    displacements. Initial conditions are zero; the simulation covers
    [0, duration] at step dt. Record order follows sample order."""
    n = int(round(duration / dt)) + 1
    if n < 2:
        raise InvalidInputError(f"duration {duration} must cover at least 2 samples at dt={dt}")
    triples = sample_parameters(space)
    records = []
    for m, k, c in triples:
        try:
            u_max = _solve_peak(m, k, c, excitation, dt, n)
        except Exception as exc:
            raise type(exc)(f"sweep failed at (m={m}, k={k}, c={c}): {exc}") from exc
        records.append(SampleRecord(m=m, k=k, c=c, u_max=u_max))
    seed = space.sampling.seed if isinstance(space.sampling, LogUniformSampling) else None
    return Dataset(
        records=tuple(records),
        excitation=excitation_descriptor(excitation),
        dt=dt,
        duration=duration,
        seed=seed,
    )


def split_dataset(dataset: Dataset, test_fraction: float, seed: int) -> Dataset:
    """Assign a seeded shuffled train/test split; |test| = round(fraction*N)."""
    if not 0.0 <= test_fraction < 1.0:
        raise InvalidInputError(f"test_fraction must be in [0, 1), got {test_fraction}")
    n = len(dataset)
    n_test = int(round(test_fraction * n))
    perm = np.random.default_rng(seed).permutation(n)
    test_idx = tuple(int(i) for i in perm[:n_test])
    train_idx = tuple(int(i) for i in perm[n_test:])
    return replace(dataset, train_idx=train_idx, test_idx=test_idx)


def _format_float(x: float) -> str:
    # repr round-trips exactly and always carries >= 9 significant digits
    return repr(float(x))


def write_dataset(dataset: Dataset, csv_path, meta_path=None, header_comment: str = "") -> None:
    """Write the record CSV and the JSON metadata sidecar.

    meta_path defaults to <csv_path>.meta.json. header_comment, when given,
    is emitted as leading `#` lines of the CSV.
    """
    meta_path = meta_path or f"{csv_path}.meta.json"
    lines = []
    for comment in filter(None, header_comment.splitlines() if header_comment else []):
        lines.append(f"# {comment}")
    lines.append(CSV_HEADER)
    for r in dataset.records:
        lines.append(",".join(_format_float(v) for v in (r.m, r.k, r.c, r.u_max)))
    with open(csv_path, "w", encoding="utf-8") as fh:
        fh.write("\n".join(lines) + "\n")

    meta = {
        "excitation": dataset.excitation,
        "dt": dataset.dt,
        "duration": dataset.duration,
        "seed": dataset.seed,
        "n_records": len(dataset),
        "train_idx": list(dataset.train_idx),
        "test_idx": list(dataset.test_idx),
    }
    with open(meta_path, "w", encoding="utf-8") as fh:
        json.dump(meta, fh, indent=2, sort_keys=True)
        fh.write("\n")


def read_dataset(csv_path, meta_path=None) -> Dataset:
    """Read a dataset back; inverse of write_dataset."""
    meta_path = meta_path or f"{csv_path}.meta.json"
    try:
        with open(csv_path, "r", encoding="utf-8") as fh:
            raw_lines = fh.read().splitlines()
    except OSError as exc:
        raise DataError(f"cannot read dataset CSV {csv_path}: {exc}") from exc

    records = []
    header_seen = False
    for lineno, raw in enumerate(raw_lines, start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if not header_seen:
            if line != CSV_HEADER:
                raise DataError(f"line {lineno}: expected header {CSV_HEADER!r}, got {line!r}")
            header_seen = True
            continue
        parts = line.split(",")
        if len(parts) != 4:
            raise DataError(f"line {lineno}: expected 4 fields, got {len(parts)}")
        try:
            m, k, c, u_max = (float(p) for p in parts)
        except ValueError:
            raise DataError(f"line {lineno}: non-numeric field in {line!r}") from None
        records.append(SampleRecord(m=m, k=k, c=c, u_max=u_max))
    if not header_seen:
        raise DataError("dataset CSV has no header line")

    try:
        with open(meta_path, "r", encoding="utf-8") as fh:
            meta = json.load(fh)
    except OSError as exc:
        raise DataError(f"cannot read dataset metadata {meta_path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise DataError(f"malformed dataset metadata {meta_path}: {exc}") from exc

    if meta.get("n_records") != len(records):
        raise DataError(
            f"metadata says {meta.get('n_records')} records but CSV holds {len(records)}"
        )
    return Dataset(
        records=tuple(records),
        excitation=meta["excitation"],
        dt=meta["dt"],
        duration=meta["duration"],
        seed=meta["seed"],
        train_idx=tuple(meta["train_idx"]),
        test_idx=tuple(meta["test_idx"]),
    )
