"""Ground-motion response of a base-excited oscillator.

Reads the accelerogram written by 00_make_record.py, shakes a stiff
lightly damped system with it (relative-coordinate formulation, effective
force -m * ground acceleration), and plots the input motion alongside the
relative displacement and total acceleration.
"""

from pathlib import Path

import matplotlib
matplotlib.use("Agg")
import matplotlib.pyplot as plt
import numpy as np

from modal_forge import (
    BaseRecord,
    InitialConditions,
    NewmarkParams,
    SdofSystem,
    absolute_acceleration,
    damping_from_ratio,
    derive_modal,
    load_ground_motion,
    max_abs_displacement,
    newmark_solve,
    synthesize_force,
)

here = Path(__file__).parent
out_dir = here / "output"
record_path = out_dir / "record.txt"
if not record_path.exists():
    raise SystemExit("run 00_make_record.py first")

record = load_ground_motion(record_path)
print(f"record: {len(record)} samples at dt={record.dt} s, "
      f"peak {np.max(np.abs(record.accel)):.3f} m/s^2")

m, k = 3.531117, 521.429791
system = SdofSystem(m=m, k=k, c=damping_from_ratio(m, k, zeta=0.093387))
modal = derive_modal(system)
print(f"T_n = {modal.t_n:.4f} s, zeta = {modal.zeta:.4f}")

dt = record.dt
duration = 40.0  # record plus free decay
n = int(round(duration / dt)) + 1
excitation = BaseRecord(record=record, scale=1.0)
forces = synthesize_force(excitation, m, dt, n)
history = newmark_solve(system, InitialConditions(), forces, NewmarkParams(dt=dt))
print(f"peak relative displacement: {max_abs_displacement(history):.5f} m")

ground = np.zeros(n)
ground[: len(record)] = record.accel
total_accel = absolute_acceleration(history, ground)

fig, axes = plt.subplots(3, 1, figsize=(9, 7), sharex=True)
axes[0].plot(np.arange(len(record)) * dt, record.accel, lw=0.7)
axes[0].set_ylabel("ground accel (m/s$^2$)")
axes[0].set_title("Base excitation and response")
axes[1].plot(history.t, 1e3 * history.u, lw=0.7)
axes[1].set_ylabel("rel. displacement (mm)")
axes[2].plot(history.t, total_accel, lw=0.7)
axes[2].set_ylabel("total accel (m/s$^2$)")
axes[2].set_xlabel("time (s)")
fig.tight_layout()
fig.savefig(out_dir / "base_excitation.png", dpi=130)
print(f"wrote {out_dir / 'base_excitation.png'}")
