"""Graph surrogate for peak displacement.

An SDOF system is encoded as a two-node graph: a ground node and a mass
node, joined by one undirected edge that carries the stiffness and damping
features. Message passing runs a fixed number of rounds; the readout is a
linear map of the mass-node state, denormalized through 10**(.) so the
prediction is always a positive displacement.

Inputs and the target are standardized in log10 space (the design ranges
span several decades). Training is plain SGD with momentum on the mean
squared error of the normalized log target, with gradients accumulated by
reverse-mode differentiation through the full forward computation; a
finite-difference check (`gradient_check`) verifies them.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from .errors import CheckpointError, DataError, InvalidInputError, NumericalError

__all__ = [
    "NormStats",
    "SdofGraph",
    "GnnModel",
    "TrainConfig",
    "Metrics",
    "fit_norm_stats",
    "encode_graph",
    "init_model",
    "forward",
    "predict_batch",
    "loss_and_gradients",
    "train",
    "evaluate",
    "metrics_from_predictions",
    "gradient_check",
    "save_model",
    "load_model",
]

CHECKPOINT_VERSION = 1
_ACTIVATIONS = ("tanh",)

NODE_DIM = 2   # [normalized log10 m, is_ground]
EDGE_DIM = 2   # [normalized log10 k, normalized log10 c]


@dataclass(frozen=True)
class NormStats:
    """Standardization statistics, fitted on the training split only.
    input_* are per-channel over (log10 m, log10 k, log10 c); target_*
    describe log10 of the peak displacement."""

    input_mean: Tuple[float, float, float]
    input_std: Tuple[float, float, float]
    target_mean: float
    target_std: float

    def __post_init__(self):
        if any(s <= 0 for s in self.input_std) or self.target_std <= 0:
            raise InvalidInputError("standard deviations must be positive")


def fit_norm_stats(triples: np.ndarray, targets: np.ndarray) -> NormStats:
    """Fit log10 standardization stats from training samples."""
    triples = np.asarray(triples, dtype=float)
    targets = np.asarray(targets, dtype=float)
    if np.any(triples <= 0) or np.any(targets <= 0):
        raise DataError("norm stats require positive parameters and targets")
    logs = np.log10(triples)
    logt = np.log10(targets)
    std = logs.std(axis=0)
    tstd = logt.std()
    if np.any(std <= 0) or tstd <= 0:
        raise DataError("training split has zero variance in log space")
    return NormStats(
        input_mean=tuple(float(v) for v in logs.mean(axis=0)),
        input_std=tuple(float(v) for v in std),
        target_mean=float(logt.mean()),
        target_std=float(tstd),
    )


@dataclass(frozen=True)
class SdofGraph:
    """Two-node graph: the row with is_ground=1 is the ground node (mass
    channel fixed to 0); the other row is the mass node."""

    node_features: np.ndarray       # (2, NODE_DIM)
    edge_index: Tuple[int, int]
    edge_features: np.ndarray       # (EDGE_DIM,)

    def __post_init__(self):
        nf = np.asarray(self.node_features, dtype=float)
        ef = np.asarray(self.edge_features, dtype=float)
        if nf.shape != (2, NODE_DIM):
            raise InvalidInputError(f"node features must be (2, {NODE_DIM}), got {nf.shape}")
        if ef.shape != (EDGE_DIM,):
            raise InvalidInputError(f"edge features must be ({EDGE_DIM},), got {ef.shape}")
        ground = nf[:, 1]
        if sorted(ground.tolist()) != [0.0, 1.0]:
            raise InvalidInputError("exactly one node must have is_ground=1")
        gi = int(np.argmax(ground))
        if nf[gi, 0] != 0.0:
            raise InvalidInputError("ground node mass channel must be 0")
        a, b = self.edge_index
        if sorted((a, b)) != [0, 1]:
            raise InvalidInputError(f"edge must join the two nodes, got {self.edge_index}")
        object.__setattr__(self, "node_features", nf)
        object.__setattr__(self, "edge_features", ef)

    @property
    def mass_index(self) -> int:
        return int(np.argmin(self.node_features[:, 1]))


def encode_graph(m: float, k: float, c: float, norm: NormStats) -> SdofGraph:
    """Standardize (m, k, c) in log10 space and build the canonical graph
    (ground node first, mass node second)."""
    if m <= 0 or k <= 0 or c <= 0:
        raise InvalidInputError(f"parameters must be positive, got (m={m}, k={k}, c={c})")
    mu, sd = norm.input_mean, norm.input_std
    zm = (math.log10(m) - mu[0]) / sd[0]
    zk = (math.log10(k) - mu[1]) / sd[1]
    zc = (math.log10(c) - mu[2]) / sd[2]
    nodes = np.array([[0.0, 1.0], [zm, 0.0]])
    return SdofGraph(node_features=nodes, edge_index=(0, 1),
                     edge_features=np.array([zk, zc]))


@dataclass
class GnnModel:
    """Message-passing weights plus normalization stats.

    Per round r the edge transform edge_w[r] maps [h_src, h_dst, e] to a
    hidden-width message; node_w[r] maps [h, sum of incoming messages] to
    the next node state. Layer input widths grow after round 0 (node states
    switch from NODE_DIM to hidden), so the per-round matrices differ in
    shape. Treat instances as immutable; training returns new ones.
    """

    rounds: int
    hidden: int
    activation: str
    norm: NormStats
    edge_w: List[np.ndarray]
    edge_b: List[np.ndarray]
    node_w: List[np.ndarray]
    node_b: List[np.ndarray]
    readout_w: np.ndarray
    readout_b: np.ndarray  # shape (1,)
    seed: Optional[int] = None

    def __post_init__(self):
        if self.activation not in _ACTIVATIONS:
            raise CheckpointError(
                f"unknown activation {self.activation!r}; supported: {_ACTIVATIONS}"
            )
        d = NODE_DIM
        for r in range(self.rounds):
            ew, nw = self.edge_w[r], self.node_w[r]
            if ew.shape != (self.hidden, 2 * d + EDGE_DIM):
                raise CheckpointError(
                    f"round {r}: edge transform shape {ew.shape} inconsistent with "
                    f"hidden={self.hidden} (expected {(self.hidden, 2 * d + EDGE_DIM)})"
                )
            if nw.shape != (self.hidden, d + self.hidden):
                raise CheckpointError(
                    f"round {r}: node transform shape {nw.shape} inconsistent with "
                    f"hidden={self.hidden} (expected {(self.hidden, d + self.hidden)})"
                )
            if self.edge_b[r].shape != (self.hidden,) or self.node_b[r].shape != (self.hidden,):
                raise CheckpointError(f"round {r}: bias width must be {self.hidden}")
            d = self.hidden
        if self.readout_w.shape != (self.hidden,):
            raise CheckpointError(
                f"readout width {self.readout_w.shape} incompatible with hidden={self.hidden}"
            )
        if self.readout_b.shape != (1,):
            raise CheckpointError("readout bias must be a single value")
        for name, arr in self.parameters():
            if not np.all(np.isfinite(arr)):
                raise CheckpointError(f"non-finite weights in {name}")

    def parameters(self):
        """Yield (name, array) for every weight and bias, in a fixed order."""
        for r in range(self.rounds):
            yield f"edge_w{r}", self.edge_w[r]
            yield f"edge_b{r}", self.edge_b[r]
            yield f"node_w{r}", self.node_w[r]
            yield f"node_b{r}", self.node_b[r]
        yield "readout_w", self.readout_w
        yield "readout_b", self.readout_b

    def copy(self) -> "GnnModel":
        return GnnModel(
            rounds=self.rounds,
            hidden=self.hidden,
            activation=self.activation,
            norm=self.norm,
            edge_w=[w.copy() for w in self.edge_w],
            edge_b=[b.copy() for b in self.edge_b],
            node_w=[w.copy() for w in self.node_w],
            node_b=[b.copy() for b in self.node_b],
            readout_w=self.readout_w.copy(),
            readout_b=self.readout_b.copy(),
            seed=self.seed,
        )


def init_model(
    norm: NormStats,
    rounds: int = 2,
    hidden: int = 64,
    activation: str = "tanh",
    seed: int = 0,
) -> GnnModel:
    """Seeded uniform initialization in [-1/sqrt(fan_in), 1/sqrt(fan_in)]."""
    if rounds < 1 or hidden < 1:
        raise InvalidInputError("rounds and hidden width must be >= 1")
    rng = np.random.default_rng(seed)

    def uniform(shape, fan_in):
        bound = 1.0 / math.sqrt(fan_in)
        return rng.uniform(-bound, bound, shape)

    edge_w, edge_b, node_w, node_b = [], [], [], []
    d = NODE_DIM
    for _ in range(rounds):
        fe = 2 * d + EDGE_DIM
        edge_w.append(uniform((hidden, fe), fe))
        edge_b.append(np.zeros(hidden))
        fn = d + hidden
        node_w.append(uniform((hidden, fn), fn))
        node_b.append(np.zeros(hidden))
        d = hidden
    return GnnModel(
        rounds=rounds, hidden=hidden, activation=activation, norm=norm,
        edge_w=edge_w, edge_b=edge_b, node_w=node_w, node_b=node_b,
        readout_w=uniform((hidden,), hidden), readout_b=np.zeros(1), seed=seed,
    )


def _denormalize(model: GnnModel, s):
    return 10.0 ** (s * model.norm.target_std + model.norm.target_mean)


def forward(model: GnnModel, graph: SdofGraph) -> float:
    """Predict the peak displacement (m) for one encoded system.

    Structure-driven: messages run along the stored edge in both
    directions and are sum-aggregated per node, so the result does not
    depend on node storage order.
    """
    h = graph.node_features
    a, b = graph.edge_index
    e = graph.edge_features
    for r in range(model.rounds):
        ew, eb = model.edge_w[r], model.edge_b[r]
        nw, nb = model.node_w[r], model.node_b[r]
        msg_ab = np.tanh(ew @ np.concatenate([h[a], h[b], e]) + eb)
        msg_ba = np.tanh(ew @ np.concatenate([h[b], h[a], e]) + eb)
        incoming = np.zeros((2, model.hidden))
        incoming[b] += msg_ab
        incoming[a] += msg_ba
        h = np.stack([
            np.tanh(nw @ np.concatenate([h[i], incoming[i]]) + nb)
            for i in range(2)
        ])
    s = float(model.readout_w @ h[graph.mass_index] + model.readout_b[0])
    return float(_denormalize(model, s))


def _features_from_graph(graph: SdofGraph) -> np.ndarray:
    mi = graph.mass_index
    return np.array([graph.node_features[mi, 0],
                     graph.edge_features[0], graph.edge_features[1]])


def _normalize_inputs(model: GnnModel, triples: np.ndarray) -> np.ndarray:
    triples = np.asarray(triples, dtype=float).reshape(-1, 3)
    if np.any(triples <= 0):
        raise InvalidInputError("parameters must be positive")
    mu = np.array(model.norm.input_mean)
    sd = np.array(model.norm.input_std)
    return (np.log10(triples) - mu) / sd


def _forward_batch(model: GnnModel, Z: np.ndarray, want_cache: bool = False):
    """Vectorized forward over normalized feature rows Z = [z_m, z_k, z_c].

    Evaluates the canonical node order (ground, mass); identical math to
    `forward` on encode_graph output.
    """
    B = Z.shape[0]
    hg = np.zeros((B, NODE_DIM))
    hg[:, 1] = 1.0
    hm = np.zeros((B, NODE_DIM))
    hm[:, 0] = Z[:, 0]
    e = Z[:, 1:3]
    cache = {"hg": [hg], "hm": [hm], "e": e, "X": [], "M": [], "U": [], "H": []}
    for r in range(model.rounds):
        ew, eb = model.edge_w[r], model.edge_b[r]
        nw, nb = model.node_w[r], model.node_b[r]
        x_gm = np.concatenate([hg, hm, e], axis=1)   # message ground -> mass
        x_mg = np.concatenate([hm, hg, e], axis=1)   # message mass -> ground
        m_gm = np.tanh(x_gm @ ew.T + eb)
        m_mg = np.tanh(x_mg @ ew.T + eb)
        u_m = np.concatenate([hm, m_gm], axis=1)
        u_g = np.concatenate([hg, m_mg], axis=1)
        hm = np.tanh(u_m @ nw.T + nb)
        hg = np.tanh(u_g @ nw.T + nb)
        if want_cache:
            cache["X"].append((x_gm, x_mg))
            cache["M"].append((m_gm, m_mg))
            cache["U"].append((u_m, u_g))
            cache["H"].append((hm, hg))
            cache["hg"].append(hg)
            cache["hm"].append(hm)
    s = hm @ model.readout_w + model.readout_b[0]
    if want_cache:
        cache["s"] = s
        cache["hm_last"] = hm
        return s, cache
    return s


def predict_batch(model: GnnModel, triples: np.ndarray) -> np.ndarray:
    """Vectorized prediction for an (N, 3) array of (m, k, c) rows."""
    Z = _normalize_inputs(model, triples)
    return _denormalize(model, _forward_batch(model, Z))


def _zero_grads(model: GnnModel) -> Dict[str, np.ndarray]:
    return {name: np.zeros_like(arr) for name, arr in model.parameters()}


def loss_and_gradients(
    model: GnnModel,
    batch: Sequence[Tuple[SdofGraph, float]],
) -> Tuple[float, Dict[str, np.ndarray]]:
    """Mean squared error in normalized log-target space and its gradient
    for every weight and bias, by reverse-mode accumulation."""
    if len(batch) == 0:
        raise InvalidInputError("batch must be non-empty")
    targets = np.array([t for _, t in batch], dtype=float)
    if np.any(targets <= 0):
        bad = float(targets[targets <= 0][0])
        raise DataError(f"target displacement must be positive, got {bad}")
    Z = np.stack([_features_from_graph(g) for g, _ in batch])
    z_t = (np.log10(targets) - model.norm.target_mean) / model.norm.target_std
    return _loss_grads_normalized(model, Z, z_t)


def _loss_grads_normalized(model, Z, z_t):
    B = Z.shape[0]
    s, cache = _forward_batch(model, Z, want_cache=True)
    res = s - z_t
    loss = float(np.mean(res ** 2))
    ds = 2.0 * res / B

    grads = _zero_grads(model)
    grads["readout_w"][:] = ds @ cache["hm_last"]
    grads["readout_b"][0] = ds.sum()
    dhm = np.outer(ds, model.readout_w)
    dhg = np.zeros_like(dhm)

    for r in range(model.rounds - 1, -1, -1):
        ew, nw = model.edge_w[r], model.node_w[r]
        x_gm, x_mg = cache["X"][r]
        m_gm, m_mg = cache["M"][r]
        u_m, u_g = cache["U"][r]
        hm_out, hg_out = cache["H"][r]
        d_in = cache["hg"][r].shape[1]

        dq_m = dhm * (1.0 - hm_out ** 2)
        dq_g = dhg * (1.0 - hg_out ** 2)
        grads[f"node_w{r}"][:] = dq_m.T @ u_m + dq_g.T @ u_g
        grads[f"node_b{r}"][:] = dq_m.sum(axis=0) + dq_g.sum(axis=0)
        du_m = dq_m @ nw
        du_g = dq_g @ nw
        dhm_in = du_m[:, :d_in]
        dhg_in = du_g[:, :d_in]
        dm_gm = du_m[:, d_in:]
        dm_mg = du_g[:, d_in:]

        dp_gm = dm_gm * (1.0 - m_gm ** 2)
        dp_mg = dm_mg * (1.0 - m_mg ** 2)
        grads[f"edge_w{r}"][:] = dp_gm.T @ x_gm + dp_mg.T @ x_mg
        grads[f"edge_b{r}"][:] = dp_gm.sum(axis=0) + dp_mg.sum(axis=0)
        dx_gm = dp_gm @ ew
        dx_mg = dp_mg @ ew

        # x_gm = [hg, hm, e]; x_mg = [hm, hg, e]
        dhg_in = dhg_in + dx_gm[:, :d_in] + dx_mg[:, d_in:2 * d_in]
        dhm_in = dhm_in + dx_gm[:, d_in:2 * d_in] + dx_mg[:, :d_in]
        dhm, dhg = dhm_in, dhg_in

    return loss, grads


@dataclass(frozen=True)
class TrainConfig:
    learning_rate: float = 1e-2
    momentum: float = 0.9
    epochs: int = 600
    batch_size: int = 32
    seed: int = 13
    patience: int = 60  # epochs without validation improvement before stopping

    def __post_init__(self):
        # zero learning rate is legal (useful to verify the no-update identity)
        if self.learning_rate < 0:
            raise InvalidInputError("learning rate must be >= 0")
        if self.epochs < 1:
            raise InvalidInputError("epochs must be >= 1")
        if self.batch_size < 1:
            raise InvalidInputError("batch size must be >= 1")


def train(
    initial: GnnModel,
    train_data: Tuple[np.ndarray, np.ndarray],
    val_data: Optional[Tuple[np.ndarray, np.ndarray]],
    config: TrainConfig,
) -> Tuple[GnnModel, List[Tuple[float, float]]]:
    """SGD with momentum over seeded mini-batch shuffles.

    train_data/val_data are (triples, targets) arrays of raw parameters and
    raw peak displacements. Returns the weights of the epoch with the best
    validation loss (best training loss when no validation set is given)
    and the per-epoch (train_loss, val_loss) history. Fully deterministic
    for a given config seed.
    """
    triples, targets = train_data
    if len(targets) == 0:
        raise InvalidInputError("training set must be non-empty")
    Z = _normalize_inputs(initial, triples)
    if np.any(np.asarray(targets) <= 0):
        raise DataError("training targets must be positive displacements")
    z_t = (np.log10(np.asarray(targets, dtype=float)) - initial.norm.target_mean) \
        / initial.norm.target_std
    if val_data is not None and len(val_data[1]) > 0:
        Zv = _normalize_inputs(initial, val_data[0])
        zv = (np.log10(np.asarray(val_data[1], dtype=float)) - initial.norm.target_mean) \
            / initial.norm.target_std
    else:
        Zv = zv = None

    model = initial.copy()
    velocity = _zero_grads(model)
    params = dict(model.parameters())
    rng = np.random.default_rng(config.seed)
    history: List[Tuple[float, float]] = []
    best_model = model.copy()
    best_score = math.inf
    stale = 0

    n = Z.shape[0]
    for epoch in range(config.epochs):
        order = rng.permutation(n)
        epoch_loss = 0.0
        for start in range(0, n, config.batch_size):
            idx = order[start:start + config.batch_size]
            loss, grads = _loss_grads_normalized(model, Z[idx], z_t[idx])
            if not math.isfinite(loss):
                raise NumericalError(f"training loss became non-finite at epoch {epoch + 1}")
            epoch_loss += loss * len(idx)
            for name in params:
                velocity[name] *= config.momentum
                velocity[name] -= config.learning_rate * grads[name]
                params[name] += velocity[name]
        train_loss = epoch_loss / n

        if Zv is not None:
            val_loss = float(np.mean((_forward_batch(model, Zv) - zv) ** 2))
        else:
            val_loss = train_loss
        if not math.isfinite(val_loss):
            raise NumericalError(f"validation loss became non-finite at epoch {epoch + 1}")
        history.append((train_loss, val_loss))

        if val_loss < best_score:
            best_score = val_loss
            best_model = model.copy()
            stale = 0
        else:
            stale += 1
            if stale >= config.patience:
                break
    return best_model, history


@dataclass(frozen=True)
class Metrics:
    """Regression quality on the raw displacement scale."""

    r2: float
    mae: float
    mape: float  # percent


def metrics_from_predictions(y_true: np.ndarray, y_pred: np.ndarray) -> Metrics:
    """R^2, MAE and MAPE between raw targets and raw predictions."""
    y = np.asarray(y_true, dtype=float)
    pred = np.asarray(y_pred, dtype=float)
    if y.size == 0:
        raise InvalidInputError("evaluation split must be non-empty")
    ss_tot = float(np.sum((y - y.mean()) ** 2))
    if ss_tot == 0.0:
        raise InvalidInputError("r2 undefined: targets have zero variance")
    ss_res = float(np.sum((y - pred) ** 2))
    return Metrics(
        r2=1.0 - ss_res / ss_tot,
        mae=float(np.mean(np.abs(y - pred))),
        mape=float(100.0 * np.mean(np.abs(y - pred) / np.abs(y))),
    )


def evaluate(model: GnnModel, data: Tuple[np.ndarray, np.ndarray]) -> Metrics:
    """Metrics of model predictions against raw peak displacements."""
    triples, targets = data
    y = np.asarray(targets, dtype=float)
    if y.size and np.any(y <= 0):
        raise DataError("evaluation targets must be positive")
    if y.size == 0:
        raise InvalidInputError("evaluation split must be non-empty")
    return metrics_from_predictions(y, predict_batch(model, triples))


def gradient_check(model: GnnModel, sample: Tuple[SdofGraph, float], step: float = 1e-5) -> float:
    """Max relative disagreement between analytic gradients and central
    finite differences over every parameter.

    The numeric side rebuilds the loss from forward passes only: for the
    squared error (s - z)^2 the central difference factors as
    (s+ - s-)(s+ + s- - 2z)/(2h), which avoids the cancellation that
    squaring first would cost at this step size.
    """
    graph, target = sample
    if target <= 0:
        raise DataError(f"target displacement must be positive, got {target}")
    Z = _features_from_graph(graph).reshape(1, 3)
    z = (math.log10(target) - model.norm.target_mean) / model.norm.target_std

    work = model.copy()
    _, grads = _loss_grads_normalized(work, Z, np.array([z]))
    params = dict(work.parameters())

    worst = 0.0
    for name, arr in params.items():
        flat = arr.reshape(-1)
        gflat = grads[name].reshape(-1)
        for i in range(flat.size):
            saved = flat[i]
            flat[i] = saved + step
            s_plus = float(_forward_batch(work, Z)[0])
            flat[i] = saved - step
            s_minus = float(_forward_batch(work, Z)[0])
            flat[i] = saved
            numeric = (s_plus - s_minus) * (s_plus + s_minus - 2.0 * z) / (2.0 * step)
            analytic = float(gflat[i])
            rel = abs(analytic - numeric) / max(abs(analytic), abs(numeric), 1e-12)
            worst = max(worst, rel)
    return worst


def save_model(model: GnnModel, path) -> None:
    """Write a JSON checkpoint. Matrices are stored as row-major nested
    lists; floats survive the round trip bit-exactly."""
    payload = {
        "format_version": CHECKPOINT_VERSION,
        "rounds": model.rounds,
        "hidden": model.hidden,
        "activation": model.activation,
        "seed": model.seed,
        "norm": {
            "input_mean": list(model.norm.input_mean),
            "input_std": list(model.norm.input_std),
            "target_mean": model.norm.target_mean,
            "target_std": model.norm.target_std,
        },
        "weights": {
            "edge_w": [w.tolist() for w in model.edge_w],
            "edge_b": [b.tolist() for b in model.edge_b],
            "node_w": [w.tolist() for w in model.node_w],
            "node_b": [b.tolist() for b in model.node_b],
            "readout_w": model.readout_w.tolist(),
            "readout_b": float(model.readout_b[0]),
        },
    }
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(payload, fh, indent=1, sort_keys=True)
        fh.write("\n")


def load_model(path) -> GnnModel:
    """Read a checkpoint written by save_model, validating shape and format."""
    try:
        with open(path, "r", encoding="utf-8") as fh:
            payload = json.load(fh)
    except OSError as exc:
        raise DataError(f"cannot read checkpoint {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise CheckpointError(f"malformed checkpoint {path}: {exc}") from exc

    version = payload.get("format_version")
    if version != CHECKPOINT_VERSION:
        raise CheckpointError(
            f"unsupported checkpoint format version {version!r} (supported: {CHECKPOINT_VERSION})"
        )
    if "norm" not in payload:
        raise CheckpointError("checkpoint is missing normalization stats")
    norm_d = payload["norm"]
    try:
        norm = NormStats(
            input_mean=tuple(norm_d["input_mean"]),
            input_std=tuple(norm_d["input_std"]),
            target_mean=norm_d["target_mean"],
            target_std=norm_d["target_std"],
        )
        w = payload["weights"]
        model = GnnModel(
            rounds=payload["rounds"],
            hidden=payload["hidden"],
            activation=payload["activation"],
            norm=norm,
            edge_w=[np.array(x, dtype=float) for x in w["edge_w"]],
            edge_b=[np.array(x, dtype=float) for x in w["edge_b"]],
            node_w=[np.array(x, dtype=float) for x in w["node_w"]],
            node_b=[np.array(x, dtype=float) for x in w["node_b"]],
            readout_w=np.array(w["readout_w"], dtype=float),
            readout_b=np.array([float(w["readout_b"])]),
            seed=payload.get("seed"),
        )
    except (KeyError, TypeError, ValueError) as exc:
        raise CheckpointError(f"checkpoint {path} is structurally invalid: {exc}") from exc
    return model
