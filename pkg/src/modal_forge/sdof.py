"""Single-degree-of-freedom dynamics: system definition, modal quantities,
the Newmark-beta time integrator, and a closed-form free-vibration solution
used as an independent check on the integrator.

All quantities are SI (kg, N/m, N*s/m, m, s). Everything here is a pure
function over immutable values; nothing holds state between calls.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from .errors import DataError, InvalidInputError

__all__ = [
    "SdofSystem",
    "ModalProps",
    "InitialConditions",
    "NewmarkParams",
    "TimeHistory",
    "derive_modal",
    "damping_from_ratio",
    "newmark_solve",
    "analytic_free_vibration",
    "max_abs_displacement",
    "absolute_acceleration",
]


def _require_finite(name, value):
    if not math.isfinite(value):
        raise InvalidInputError(f"{name} must be finite, got {value!r}")


@dataclass(frozen=True)
class SdofSystem:
    """Lumped mass m on a spring k with viscous damper c:
    m*u'' + c*u' + k*u = p(t)."""

    m: float  # mass, kg
    k: float  # stiffness, N/m
    c: float  # damping coefficient, N*s/m

    def __post_init__(self):
        for name in ("m", "k", "c"):
            _require_finite(name, getattr(self, name))
        if self.m <= 0:
            raise InvalidInputError(f"mass must be positive, got {self.m}")
        if self.k <= 0:
            raise InvalidInputError(f"stiffness must be positive, got {self.k}")
        if self.c < 0:
            raise InvalidInputError(f"damping must be non-negative, got {self.c}")


@dataclass(frozen=True)
class ModalProps:
    """Modal quantities of an SdofSystem. omega_d is None at or above
    critical damping (no oscillatory solution)."""

    omega_n: float          # natural circular frequency, rad/s
    zeta: float             # damping ratio
    t_n: float              # natural period, s
    omega_d: Optional[float]  # damped frequency, rad/s; None for zeta >= 1


@dataclass(frozen=True)
class InitialConditions:
    u0: float = 0.0  # initial displacement, m
    v0: float = 0.0  # initial velocity, m/s

    def __post_init__(self):
        _require_finite("u0", self.u0)
        _require_finite("v0", self.v0)


@dataclass(frozen=True)
class NewmarkParams:
    """Integrator parameters. gamma=0.5, beta=0.25 is the unconditionally
    stable average-acceleration member of the family."""

    dt: float
    gamma: float = 0.5
    beta: float = 0.25

    def __post_init__(self):
        if not (self.dt > 0 and math.isfinite(self.dt)):
            raise InvalidInputError(f"dt must be positive and finite, got {self.dt}")
        if self.beta <= 0:
            raise InvalidInputError(f"beta must be positive, got {self.beta}")
        if not 0.0 <= self.gamma <= 1.0:
            raise InvalidInputError(f"gamma must be in [0, 1], got {self.gamma}")


@dataclass(frozen=True)
class TimeHistory:
    """Sampled response of one simulation. Sample i is at time t = i*dt.
    u, v, a, p all have the same length >= 1."""

    dt: float
    u: np.ndarray  # displacement, m
    v: np.ndarray  # velocity, m/s
    a: np.ndarray  # acceleration, m/s^2
    p: np.ndarray  # applied force, N

    def __post_init__(self):
        if self.dt <= 0:
            raise InvalidInputError(f"dt must be positive, got {self.dt}")
        n = len(self.u)
        if n < 1:
            raise InvalidInputError("time history must contain at least one sample")
        if not (len(self.v) == len(self.a) == len(self.p) == n):
            raise InvalidInputError(
                "u, v, a, p lengths differ: "
                f"{n}, {len(self.v)}, {len(self.a)}, {len(self.p)}"
            )

    def __len__(self):
        return len(self.u)

    @property
    def t(self) -> np.ndarray:
        return np.arange(len(self.u)) * self.dt


def derive_modal(system: SdofSystem) -> ModalProps:
    """Natural frequency, damping ratio, period and (if underdamped) the
    damped frequency of a system."""
    omega_n = math.sqrt(system.k / system.m)
    zeta = system.c / (2.0 * math.sqrt(system.k * system.m))
    t_n = 2.0 * math.pi / omega_n
    omega_d = omega_n * math.sqrt(1.0 - zeta * zeta) if zeta < 1.0 else None
    return ModalProps(omega_n=omega_n, zeta=zeta, t_n=t_n, omega_d=omega_d)


def damping_from_ratio(m: float, k: float, zeta: float) -> float:
    """Damping coefficient c = 2*zeta*sqrt(k*m) for a target damping ratio."""
    if m <= 0 or k <= 0:
        raise InvalidInputError(f"m and k must be positive, got m={m}, k={k}")
    if zeta < 0:
        raise InvalidInputError(f"zeta must be non-negative, got {zeta}")
    return 2.0 * zeta * math.sqrt(k * m)


def newmark_solve(
    system: SdofSystem,
    ic: InitialConditions,
    forces: Sequence[float],
    params: NewmarkParams,
) -> TimeHistory:
    """Integrate m*u'' + c*u' + k*u = p(t) with the Newmark-beta scheme.

    forces[i] is the applied force at t = i*dt; the output series have the
    same length and echo the forces. The initial acceleration is taken from
    equilibrium at t=0, a0 = (p0 - c*v0 - k*u0)/m, so a force that jumps at
    t=0 is handled correctly.

    Each step solves the effective static problem
        khat * u[i+1] = p[i+1] + m*(b1*u[i] + b2*v[i] + b3*a[i])
                               + c*(g1*u[i] + g2*v[i] + g3*a[i])
    with khat = k + g1*c + b1*m, then recovers v[i+1] and a[i+1] from the
    Newmark update formulas. With gamma=0.5, beta=0.25 the scheme is the
    average-acceleration method: second-order accurate and unconditionally
    stable, and each output sample satisfies the equation of motion to
    machine precision.
    """
    p = np.asarray(forces, dtype=float)
    if p.ndim != 1 or len(p) == 0:
        raise InvalidInputError("force series must be a non-empty 1-D sequence")
    bad = np.flatnonzero(~np.isfinite(p))
    if bad.size:
        raise DataError(f"non-finite force value at index {int(bad[0])}")

    m, k, c = system.m, system.k, system.c
    dt, gamma, beta = params.dt, params.gamma, params.beta
    n = len(p)

    b1 = 1.0 / (beta * dt * dt)
    b2 = 1.0 / (beta * dt)
    b3 = 1.0 / (2.0 * beta) - 1.0
    g1 = gamma / (beta * dt)
    g2 = gamma / beta - 1.0
    g3 = dt * (gamma / (2.0 * beta) - 1.0)
    v_coef = 1.0 - gamma / beta
    a_coef = dt * (1.0 - gamma / (2.0 * beta))
    khat = k + g1 * c + b1 * m

    u_out = np.empty(n)
    v_out = np.empty(n)
    a_out = np.empty(n)

    u = float(ic.u0)
    v = float(ic.v0)
    a = (p[0] - c * v - k * u) / m
    u_out[0], v_out[0], a_out[0] = u, v, a

    p_list = p.tolist()  # scalar loop: plain floats are much faster than ndarray scalars
    for i in range(1, n):
        phat = (p_list[i]
                + m * (b1 * u + b2 * v + b3 * a)
                + c * (g1 * u + g2 * v + g3 * a))
        u_next = phat / khat
        v_next = g1 * (u_next - u) + v_coef * v + a_coef * a
        a_next = b1 * (u_next - u) - b2 * v - b3 * a
        u, v, a = u_next, v_next, a_next
        u_out[i], v_out[i], a_out[i] = u, v, a

    return TimeHistory(dt=dt, u=u_out, v=v_out, a=a_out, p=p)


def analytic_free_vibration(
    system: SdofSystem,
    ic: InitialConditions,
    dt: float,
    n: int,
) -> TimeHistory:
    """Closed-form underdamped free-vibration response, sampled at dt.

    u(t) = exp(-zeta*omega_n*t) * (u0*cos(omega_d*t)
           + (v0 + zeta*omega_n*u0)/omega_d * sin(omega_d*t))

    Velocity is the exact derivative; acceleration follows from the
    equation of motion, a = -(c*v + k*u)/m. Only valid for zeta < 1.
    """
    if dt <= 0:
        raise InvalidInputError(f"dt must be positive, got {dt}")
    if n < 1:
        raise InvalidInputError(f"sample count must be >= 1, got {n}")
    modal = derive_modal(system)
    if modal.omega_d is None:
        raise InvalidInputError(
            f"closed form requires an underdamped system, got zeta={modal.zeta:.6g}"
        )
    wn, wd, zeta = modal.omega_n, modal.omega_d, modal.zeta

    t = np.arange(n) * dt
    amp_a = ic.u0
    amp_b = (ic.v0 + zeta * wn * ic.u0) / wd
    env = np.exp(-zeta * wn * t)
    coswd = np.cos(wd * t)
    sinwd = np.sin(wd * t)

    u = env * (amp_a * coswd + amp_b * sinwd)
    # d/dt of env*(A cos + B sin)
    v = env * ((amp_b * wd - zeta * wn * amp_a) * coswd
               - (amp_a * wd + zeta * wn * amp_b) * sinwd)
    a = -(system.c * v + system.k * u) / system.m
    return TimeHistory(dt=dt, u=u, v=v, a=a, p=np.zeros(n))


def max_abs_displacement(history: TimeHistory) -> float:
    """Peak absolute displacement of a response history."""
    if len(history) == 0:
        raise InvalidInputError("empty time history")
    return float(np.max(np.abs(history.u)))


def absolute_acceleration(history: TimeHistory, ground_accel: Sequence[float]) -> np.ndarray:
    """Total (absolute-frame) acceleration: relative acceleration plus the
    ground acceleration it was computed against."""
    g = np.asarray(ground_accel, dtype=float)
    if g.shape != history.a.shape:
        raise InvalidInputError(
            f"ground acceleration length {len(g)} does not match history length {len(history)}"
        )
    return history.a + g
