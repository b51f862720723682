"""Minimize peak displacement over (m, k, c) with the genetic algorithm.

Uses the surrogate trained by 04_surrogate_training.py as the fitness
function, runs the evolutionary search, then checks the winner with a
direct simulation. The interesting outputs: the convergence trace, the
agreement between predicted and simulated displacement at the optimum,
and the per-call cost gap between the two fitness paths.
"""

import time
from pathlib import Path

import matplotlib
matplotlib.use("Agg")
import matplotlib.pyplot as plt
import numpy as np

from modal_forge import (
    BaseRecord,
    GaConfig,
    direct_fitness,
    evolve,
    load_ground_motion,
    load_model,
    surrogate_fitness,
)

here = Path(__file__).parent
out_dir = here / "output"
for required in ("record.txt", "demo_model.json"):
    if not (out_dir / required).exists():
        raise SystemExit("run 00_make_record.py and 04_surrogate_training.py first")

record = load_ground_motion(out_dir / "record.txt")
model = load_model(out_dir / "demo_model.json")

fitness = surrogate_fitness(model)
config = GaConfig(
    bounds=((0.1, 1000.0), (0.01, 1000.0), (0.02, 100.0)),
    population=50, generations=100, seed=29,
)
result = evolve(fitness, config)
m, k, c = result.best_params
print(f"GA optimum: m = {m:.4g} kg, k = {k:.4g} N/m, c = {c:.4g} N*s/m")
print(f"surrogate-predicted peak displacement: {result.best_fitness:.4e} m")
print(f"{result.evaluations} fitness evaluations, "
      f"{fitness.mean_seconds * 1e6:.1f} us per call")

reference = direct_fitness(BaseRecord(record=record, scale=1.0), dt=0.02, duration=40.0)
u_sim = reference(m, k, c)
gap = 100 * abs(result.best_fitness - u_sim) / u_sim
print(f"direct simulation at the optimum: {u_sim:.4e} m "
      f"({reference.mean_seconds * 1e3:.2f} ms per call)")
print(f"prediction gap: {gap:.2f}%  |  "
      f"speedup: {reference.mean_seconds / fitness.mean_seconds:.0f}x")

bests = [b for b, _ in result.history]
means = [mn for _, mn in result.history]
fig, ax = plt.subplots(figsize=(7, 4.5))
ax.semilogy(bests, lw=1.2, label="generation best")
ax.semilogy(means, lw=0.8, alpha=0.7, label="generation mean")
ax.set_xlabel("generation")
ax.set_ylabel("predicted peak displacement (m)")
ax.set_title("Evolution of the displacement objective")
ax.legend()
fig.tight_layout()
fig.savefig(out_dir / "convergence.png", dpi=130)
print(f"wrote {out_dir / 'convergence.png'}")
