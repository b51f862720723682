"""Half-sine force pulse on an oscillator with a 1-second natural period.

A classic tabulated case: k = 10, 5% damping, pulse amplitude 10 over
0.6 s, integrated at a coarse dt = 0.1 s. The script prints the response
table and shows the displacement continuing as free vibration after the
pulse ends.
"""

import math
from pathlib import Path

import matplotlib
matplotlib.use("Agg")
import matplotlib.pyplot as plt
import numpy as np

from modal_forge import (
    HalfSinePulse,
    InitialConditions,
    NewmarkParams,
    SdofSystem,
    max_abs_displacement,
    newmark_solve,
    synthesize_force,
)

out_dir = Path(__file__).parent / "output"
out_dir.mkdir(exist_ok=True)

k = 10.0
m = k / (2 * math.pi) ** 2          # unit natural period
c = 2 * 0.05 * math.sqrt(k * m)     # 5% damping
system = SdofSystem(m=m, k=k, c=c)
print(f"m = {m:.6f}, k = {k}, c = {c:.6f}")

pulse = HalfSinePulse(p0=10.0, td=0.6)
dt = 0.1
n = 11
forces = synthesize_force(pulse, m, dt, n)
history = newmark_solve(system, InitialConditions(), forces, NewmarkParams(dt=dt))

print(f"{'t':>5} {'p':>9} {'u':>9} {'v':>9} {'a':>10}")
for i in range(n):
    print(f"{history.t[i]:5.1f} {history.p[i]:9.4f} {history.u[i]:9.4f} "
          f"{history.v[i]:9.4f} {history.a[i]:10.4f}")
print(f"peak |u| = {max_abs_displacement(history):.4f} "
      f"at t = {history.t[np.argmax(np.abs(history.u))]:.1f} s")

# a finer run shows what the coarse table is sampling
fine_n = 301
fine_forces = synthesize_force(pulse, m, 0.01, fine_n)
fine = newmark_solve(system, InitialConditions(), fine_forces, NewmarkParams(dt=0.01))

fig, (ax1, ax2) = plt.subplots(2, 1, figsize=(8, 6), sharex=True)
ax1.plot(fine.t, fine.p, lw=1.0)
ax1.set_ylabel("force (N)")
ax1.set_title("Half-sine pulse and response")
ax2.plot(fine.t, fine.u, lw=1.0, label="dt = 0.01")
ax2.plot(history.t, history.u, "o", ms=4, label="dt = 0.1 samples")
ax2.axvline(pulse.td, color="k", ls=":", lw=0.8)
ax2.set_xlabel("time (s)")
ax2.set_ylabel("displacement")
ax2.legend()
fig.tight_layout()
fig.savefig(out_dir / "pulse_response.png", dpi=130)
print(f"wrote {out_dir / 'pulse_response.png'}")
