"""Excitation handling: ground-motion record parsing and resampling, and
synthesis of force series for the supported excitation types.

Ground-motion text format: one header line `dt=<seconds>`, then one
acceleration value (m/s^2) per line. Lines starting with `#` and blank
lines are ignored. UTF-8, LF or CRLF. Parse errors cite 1-based line
numbers.
"""

from __future__ import annotations

import hashlib
import math
from dataclasses import dataclass
from typing import Union

import numpy as np

from .errors import DataError, InvalidInputError

__all__ = [
    "GroundMotionRecord",
    "Free",
    "Sine",
    "HalfSinePulse",
    "BaseRecord",
    "ExcitationSpec",
    "parse_ground_motion",
    "load_ground_motion",
    "resample_record",
    "synthesize_force",
    "excitation_descriptor",
    "demo_ground_motion",
]


@dataclass(frozen=True)
class GroundMotionRecord:
    """A sampled ground-acceleration record."""

    dt: float
    accel: np.ndarray  # m/s^2
    label: str = ""

    def __post_init__(self):
        if self.dt <= 0:
            raise InvalidInputError(f"record dt must be positive, got {self.dt}")
        if len(self.accel) == 0:
            raise DataError("ground-motion record has no samples")
        if not np.all(np.isfinite(self.accel)):
            raise DataError("ground-motion record contains non-finite values")

    def __len__(self):
        return len(self.accel)

    @property
    def duration(self) -> float:
        return (len(self.accel) - 1) * self.dt

    def checksum(self) -> str:
        """SHA-256 over the raw sample bytes; pins a record's identity in
        dataset metadata."""
        return hashlib.sha256(np.ascontiguousarray(self.accel, dtype="<f8").tobytes()).hexdigest()


@dataclass(frozen=True)
class Free:
    """No forcing; the response is driven by initial conditions alone."""


@dataclass(frozen=True)
class Sine:
    """p(t) = amplitude * sin(omega * t)."""

    amplitude: float  # N
    omega: float      # rad/s

    def __post_init__(self):
        if not math.isfinite(self.amplitude):
            raise InvalidInputError("sine amplitude must be finite")


@dataclass(frozen=True)
class HalfSinePulse:
    """p(t) = p0 * sin(pi*t/td) for t <= td, zero afterwards."""

    p0: float  # N
    td: float  # pulse duration, s

    def __post_init__(self):
        if not math.isfinite(self.p0):
            raise InvalidInputError("pulse amplitude must be finite")
        if self.td <= 0:
            raise InvalidInputError(f"pulse duration must be positive, got {self.td}")


@dataclass(frozen=True)
class BaseRecord:
    """Ground-motion base excitation: p(t) = -m * scale * accel(t)."""

    record: GroundMotionRecord
    scale: float = 1.0

    def __post_init__(self):
        if not math.isfinite(self.scale):
            raise InvalidInputError("record scale must be finite")


ExcitationSpec = Union[Free, Sine, HalfSinePulse, BaseRecord]


def parse_ground_motion(text: str) -> GroundMotionRecord:
    """Parse the ground-motion text format into a record.

    The first non-comment line must be a `dt=<seconds>` header; every
    further non-comment line holds one acceleration value.
    """
    dt = None
    values = []
    saw_content = False
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        saw_content = True
        if dt is None:
            if not line.startswith("dt="):
                raise DataError(f"line {lineno}: expected 'dt=<seconds>' header, got {line!r}")
            try:
                dt = float(line[3:])
            except ValueError:
                raise DataError(f"line {lineno}: malformed dt header {line!r}") from None
            if dt <= 0 or not math.isfinite(dt):
                raise DataError(f"line {lineno}: dt must be positive, got {dt}")
            continue
        try:
            values.append(float(line))
        except ValueError:
            raise DataError(f"line {lineno}: non-numeric acceleration {line!r}") from None
    if not saw_content:
        raise DataError("empty ground-motion input")
    if dt is None:
        raise DataError("missing 'dt=<seconds>' header")
    if not values:
        raise DataError("ground-motion input has a header but no samples")
    return GroundMotionRecord(dt=dt, accel=np.asarray(values, dtype=float))


def load_ground_motion(path, label: str = "") -> GroundMotionRecord:
    """Read and parse a ground-motion file; the label defaults to the path."""
    try:
        with open(path, "r", encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise DataError(f"cannot read ground-motion file {path}: {exc}") from exc
    rec = parse_ground_motion(text)
    return GroundMotionRecord(dt=rec.dt, accel=rec.accel, label=label or str(path))


def resample_record(record: GroundMotionRecord, new_dt: float) -> GroundMotionRecord:
    """Linearly interpolate a record onto a new sampling interval covering
    the same duration. Endpoint values are preserved; interpolated values
    never leave the original [min, max] range."""
    if new_dt <= 0:
        raise InvalidInputError(f"new_dt must be positive, got {new_dt}")
    if new_dt == record.dt:
        return record
    duration = record.duration
    n_new = int(math.floor(duration / new_dt + 1e-9)) + 1
    t_new = np.arange(n_new) * new_dt
    t_old = np.arange(len(record)) * record.dt
    lo, hi = float(record.accel.min()), float(record.accel.max())
    accel = np.clip(np.interp(t_new, t_old, record.accel), lo, hi)
    accel[0] = record.accel[0]
    if abs(t_new[-1] - duration) <= 1e-9 * record.dt:
        accel[-1] = record.accel[-1]
    return GroundMotionRecord(dt=new_dt, accel=accel, label=record.label)


def synthesize_force(spec: ExcitationSpec, m: float, dt: float, n: int) -> np.ndarray:
    """Force series of length n at sampling interval dt for an excitation.

    For BaseRecord the record must already be sampled at dt (resample
    first); the force is -m*scale*accel, zero-padded past the record end.
    """
    if dt <= 0:
        raise InvalidInputError(f"dt must be positive, got {dt}")
    if n < 1:
        raise InvalidInputError(f"sample count must be >= 1, got {n}")
    t = np.arange(n) * dt
    if isinstance(spec, Free):
        return np.zeros(n)
    if isinstance(spec, Sine):
        return spec.amplitude * np.sin(spec.omega * t)
    if isinstance(spec, HalfSinePulse):
        return np.where(t <= spec.td, spec.p0 * np.sin(np.pi * t / spec.td), 0.0)
    if isinstance(spec, BaseRecord):
        rec = spec.record
        if not math.isclose(rec.dt, dt, rel_tol=1e-9, abs_tol=0.0):
            raise InvalidInputError(
                f"record dt {rec.dt} does not match requested dt {dt}; "
                "resample_record first"
            )
        p = np.zeros(n)
        ncopy = min(n, len(rec))
        p[:ncopy] = -m * spec.scale * rec.accel[:ncopy]
        return p
    raise InvalidInputError(f"unknown excitation spec {spec!r}")


def excitation_descriptor(spec: ExcitationSpec) -> dict:
    """JSON-ready description of an excitation, with a checksum instead of
    raw samples for record-based excitation."""
    if isinstance(spec, Free):
        return {"kind": "free"}
    if isinstance(spec, Sine):
        return {"kind": "sine", "amplitude": spec.amplitude, "omega": spec.omega}
    if isinstance(spec, HalfSinePulse):
        return {"kind": "half_sine_pulse", "p0": spec.p0, "td": spec.td}
    if isinstance(spec, BaseRecord):
        rec = spec.record
        return {
            "kind": "base_record",
            "scale": spec.scale,
            "record_label": rec.label,
            "record_dt": rec.dt,
            "record_samples": len(rec),
            "record_sha256": rec.checksum(),
        }
    raise InvalidInputError(f"unknown excitation spec {spec!r}")


def _cumtrapz(y: np.ndarray, dt: float) -> np.ndarray:
    out = np.zeros_like(y)
    out[1:] = np.cumsum(0.5 * (y[1:] + y[:-1])) * dt
    return out


def demo_ground_motion(duration: float = 30.0, dt: float = 0.02) -> GroundMotionRecord:
    """Deterministic synthetic accelerogram for demos and tests.

    A fixed sum of sinusoids under a rise-and-decay envelope, peaking
    around 0.2 g, baseline-corrected so the ground velocity and
    displacement (trapezoid quadrature) return to zero at the end of the
    record. Recorded accelerograms are ingested from user-supplied files;
    this stands in when none is available.
    """
    n = int(round(duration / dt)) + 1
    t = np.arange(n) * dt
    components = [
        (2.4, 1.6, 0.7),
        (1.8, 3.1, 2.1),
        (1.2, 5.4, 4.4),
        (0.8, 8.9, 0.3),
        (0.5, 14.2, 5.1),
        (0.3, 21.7, 2.7),
    ]
    accel = np.zeros(n)
    for amp, omega, phase in components:
        accel += amp * np.sin(omega * t + phase)
    rise = (t / 4.0) ** 2 / (1.0 + (t / 4.0) ** 2)
    accel *= rise * np.exp(-t / 12.0)

    # baseline correction in the span of two envelope-tapered basis series
    # (tapering keeps the record starting exactly at rest)
    basis = np.stack([rise, rise * t / duration])
    targets = np.array([_cumtrapz(accel, dt)[-1], _cumtrapz(_cumtrapz(accel, dt), dt)[-1]])
    system = np.array([
        [_cumtrapz(b, dt)[-1] for b in basis],
        [_cumtrapz(_cumtrapz(b, dt), dt)[-1] for b in basis],
    ])
    coef = np.linalg.solve(system, targets)
    accel = accel - coef[0] * basis[0] - coef[1] * basis[1]
    return GroundMotionRecord(dt=dt, accel=accel, label="synthetic-demo")
