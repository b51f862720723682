"""Sweep the design space and train the graph surrogate on it.

Mirrors the pipeline.toml configuration as a library script: sample
(m, k, c) log-uniformly over the sweep box, simulate each sample under the
demo ground motion, extract peak displacements, fit the message-passing
surrogate, and draw the predicted-vs-simulated parity plot.

Note the sweep box is the optimization box padded by 0.15 decade per
side: the genetic search in 05_parameter_search.py runs to the face of
its box, and the surrogate should be interpolating there, not
extrapolating. Takes about half a minute.
"""

from pathlib import Path

import matplotlib
matplotlib.use("Agg")
import matplotlib.pyplot as plt
import numpy as np

from modal_forge import (
    BaseRecord,
    DEFAULT_SPACE,
    TrainConfig,
    evaluate,
    fit_norm_stats,
    generate_dataset,
    init_model,
    load_ground_motion,
    predict_batch,
    save_model,
    split_dataset,
    train,
)

here = Path(__file__).parent
out_dir = here / "output"
record_path = out_dir / "record.txt"
if not record_path.exists():
    raise SystemExit("run 00_make_record.py first")
record = load_ground_motion(record_path)

space = DEFAULT_SPACE  # padded box, 2000 log-uniform samples, seed 7
excitation = BaseRecord(record=record, scale=1.0)

print(f"sweeping {space.sampling.count} samples ...")
dataset = generate_dataset(space, excitation, dt=0.02, duration=40.0)
dataset = split_dataset(dataset, test_fraction=0.2, seed=101)
targets = dataset.targets()
print(f"peak displacements span [{targets.min():.2e}, {targets.max():.2e}] m")

train_triples, train_targets = dataset.subset(dataset.train_idx)
rng = np.random.default_rng(13)
perm = rng.permutation(len(train_targets))
n_val = int(round(0.15 * len(perm)))
val_sel, fit_sel = perm[:n_val], perm[n_val:]
norm = fit_norm_stats(train_triples[fit_sel], train_targets[fit_sel])
model = init_model(norm, rounds=2, hidden=64, seed=13)

config = TrainConfig()  # lr 1e-2, momentum 0.9, 600 epochs, patience 60
print("training ...")
model, history = train(
    model,
    (train_triples[fit_sel], train_targets[fit_sel]),
    (train_triples[val_sel], train_targets[val_sel]),
    config,
)
print(f"stopped after {len(history)} epochs; "
      f"final train loss {history[-1][0]:.5f}, best val loss "
      f"{min(v for _, v in history):.5f}")

test_data = dataset.subset(dataset.test_idx)
metrics = evaluate(model, test_data)
print(f"test split: R^2 = {metrics.r2:.4f}, MAE = {metrics.mae:.5f} m, "
      f"MAPE = {metrics.mape:.2f}%")

save_model(model, out_dir / "demo_model.json")
print(f"wrote {out_dir / 'demo_model.json'}")

pred = predict_batch(model, test_data[0])
lims = [min(test_data[1].min(), pred.min()) * 0.7,
        max(test_data[1].max(), pred.max()) * 1.4]
fig, ax = plt.subplots(figsize=(5.5, 5.5))
ax.loglog(test_data[1], pred, ".", ms=4, alpha=0.6)
ax.loglog(lims, lims, "k--", lw=0.8)
ax.set_xlabel("simulated peak displacement (m)")
ax.set_ylabel("predicted peak displacement (m)")
ax.set_title("Parity on the held-out split")
fig.tight_layout()
fig.savefig(out_dir / "parity.png", dpi=130)
print(f"wrote {out_dir / 'parity.png'}")
