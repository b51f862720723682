"""Real-coded genetic algorithm over (m, k, c), minimizing a displacement
fitness function.

Chromosomes are length-3 arrays of log10-encoded parameters: the default
search box spans several decades per axis, and blend crossover and
Gaussian mutation are far better conditioned on the log scale. Selection
is by tournament (scale-invariant in the fitness), out-of-bounds repair is
clipping, and elitism keeps the per-generation best-fitness trace
non-increasing. Lower fitness is always better.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass
from typing import Callable, List, Optional, Sequence, Tuple

import numpy as np

from .errors import InvalidInputError, NumericalError
from .excitation import ExcitationSpec, synthesize_force
from .gnn import GnnModel, predict_batch
from .sdof import InitialConditions, NewmarkParams, SdofSystem, max_abs_displacement, newmark_solve

__all__ = [
    "GaConfig",
    "GaResult",
    "DEFAULT_BOUNDS",
    "init_population",
    "tournament_select",
    "blend_crossover",
    "gaussian_mutate",
    "evolve",
    "decode",
    "SurrogateFitness",
    "DirectFitness",
    "surrogate_fitness",
    "direct_fitness",
]

# (m, k, c) search box; the default sweep space pads these intervals so the
# surrogate is interpolating wherever the search can go
DEFAULT_BOUNDS = ((0.1, 1000.0), (0.01, 1000.0), (0.02, 100.0))


@dataclass(frozen=True)
class GaConfig:
    bounds: Tuple[Tuple[float, float], ...] = DEFAULT_BOUNDS
    population: int = 50
    generations: int = 100
    tournament: int = 3
    crossover_p: float = 0.9
    blend_alpha: float = 0.5
    mutation_p: float = 0.2
    mutation_sigma: float = 0.1  # in log10 gene units
    elites: int = 1
    seed: int = 0

    def __post_init__(self):
        if len(self.bounds) != 3:
            raise InvalidInputError("bounds must give (m, k, c) intervals")
        for lo, hi in self.bounds:
            if not (lo > 0 and lo <= hi and math.isfinite(hi)):
                raise InvalidInputError(f"invalid bound interval ({lo}, {hi})")
        if self.population < 2:
            raise InvalidInputError("population must be >= 2")
        if not 0 <= self.elites < self.population:
            raise InvalidInputError("elite count must be in [0, population)")
        if not 1 <= self.tournament <= self.population:
            raise InvalidInputError("tournament size must be in [1, population]")
        for name in ("crossover_p", "mutation_p"):
            p = getattr(self, name)
            if not 0.0 <= p <= 1.0:
                raise InvalidInputError(f"{name} must be in [0, 1], got {p}")
        if self.generations < 1:
            raise InvalidInputError("generations must be >= 1")
        if self.mutation_sigma < 0:
            raise InvalidInputError("mutation sigma must be >= 0")

    def log_bounds(self) -> Tuple[np.ndarray, np.ndarray]:
        lo = np.log10([b[0] for b in self.bounds])
        hi = np.log10([b[1] for b in self.bounds])
        return lo, hi


def decode(genes: np.ndarray) -> Tuple[float, float, float]:
    """log10 genes -> physical (m, k, c)."""
    m, k, c = 10.0 ** np.asarray(genes, dtype=float)
    return float(m), float(k), float(c)


@dataclass(frozen=True)
class GaResult:
    best_genes: np.ndarray
    best_params: Tuple[float, float, float]  # decoded (m, k, c)
    best_fitness: float
    history: Tuple[Tuple[float, float], ...]  # per generation (best, mean)
    evaluations: int


def init_population(config: GaConfig, rng: Optional[np.random.Generator] = None) -> List[np.ndarray]:
    """Population of chromosomes with genes uniform between the log bounds."""
    rng = rng if rng is not None else np.random.default_rng(config.seed)
    lo, hi = config.log_bounds()
    return [rng.uniform(lo, hi) for _ in range(config.population)]


def tournament_select(
    population: Sequence[np.ndarray],
    fitnesses: np.ndarray,
    config: GaConfig,
    rng: np.random.Generator,
) -> np.ndarray:
    """Fittest of `tournament` uniform draws with replacement; ties go to
    the lowest population index."""
    if len(population) == 0:
        raise InvalidInputError("population must be non-empty")
    candidates = rng.integers(0, len(population), size=config.tournament)
    winner = min((int(i) for i in candidates), key=lambda i: (fitnesses[i], i))
    return population[winner].copy()


def blend_crossover(
    parent_a: np.ndarray,
    parent_b: np.ndarray,
    config: GaConfig,
    rng: np.random.Generator,
) -> Tuple[np.ndarray, np.ndarray]:
    """BLX-alpha: with probability crossover_p, each child gene is drawn
    uniformly from the parents' interval widened by alpha on both sides,
    then clipped to the bounds; otherwise the children are copies."""
    lo, hi = config.log_bounds()
    if rng.random() >= config.crossover_p:
        return parent_a.copy(), parent_b.copy()
    g_lo = np.minimum(parent_a, parent_b)
    g_hi = np.maximum(parent_a, parent_b)
    span = config.blend_alpha * (g_hi - g_lo)
    child_a = np.clip(rng.uniform(g_lo - span, g_hi + span), lo, hi)
    child_b = np.clip(rng.uniform(g_lo - span, g_hi + span), lo, hi)
    return child_a, child_b


def gaussian_mutate(
    chromosome: np.ndarray,
    config: GaConfig,
    rng: np.random.Generator,
) -> np.ndarray:
    """Each gene independently perturbed by N(0, sigma^2) with probability
    mutation_p, then clipped to the bounds."""
    lo, hi = config.log_bounds()
    mask = rng.random(chromosome.shape) < config.mutation_p
    noise = rng.normal(0.0, config.mutation_sigma, chromosome.shape)
    return np.clip(chromosome + mask * noise, lo, hi)


def _evaluate(fitness, population: Sequence[np.ndarray]) -> np.ndarray:
    """Fitness of every chromosome, via the batch hook when the function
    provides one."""
    triples = 10.0 ** np.stack(population)
    batch = getattr(fitness, "evaluate_batch", None)
    if batch is not None:
        values = np.asarray(batch(triples), dtype=float)
    else:
        values = np.array([float(fitness(m, k, c)) for m, k, c in triples])
    bad = np.flatnonzero(~np.isfinite(values))
    if bad.size:
        i = int(bad[0])
        m, k, c = triples[i]
        raise NumericalError(
            f"fitness returned a non-finite value at (m={m}, k={k}, c={c})"
        )
    return values


def evolve(fitness: Callable[[float, float, float], float], config: GaConfig) -> GaResult:
    """Generational loop: evaluate, carry elites unchanged, refill by
    tournament selection, blend crossover and Gaussian mutation.

    All random draws happen in the sequential loop; fitness evaluations are
    pure and could run concurrently without changing the result. The total
    number of fitness calls is exactly population * generations.
    """
    rng = np.random.default_rng(config.seed)
    population = init_population(config, rng)
    history: List[Tuple[float, float]] = []
    evaluations = 0
    best_genes = None
    best_fitness = math.inf

    for _ in range(config.generations):
        fitnesses = _evaluate(fitness, population)
        evaluations += len(population)
        order = np.argsort(fitnesses, kind="stable")
        gen_best = float(fitnesses[order[0]])
        if gen_best < best_fitness:
            best_fitness = gen_best
            best_genes = population[order[0]].copy()
        history.append((gen_best, float(np.mean(fitnesses))))

        next_population = [population[i].copy() for i in order[: config.elites]]
        while len(next_population) < config.population:
            parent_a = tournament_select(population, fitnesses, config, rng)
            parent_b = tournament_select(population, fitnesses, config, rng)
            child_a, child_b = blend_crossover(parent_a, parent_b, config, rng)
            for child in (child_a, child_b):
                if len(next_population) < config.population:
                    next_population.append(gaussian_mutate(child, config, rng))
        population = next_population

    return GaResult(
        best_genes=best_genes,
        best_params=decode(best_genes),
        best_fitness=best_fitness,
        history=tuple(history),
        evaluations=evaluations,
    )


class SurrogateFitness:
    """Fitness function backed by a trained surrogate. Pure; keeps call
    counts and cumulative wall time for cost reporting."""

    def __init__(self, model: GnnModel):
        self.model = model
        self.n_evals = 0
        self.total_seconds = 0.0

    def evaluate_batch(self, triples: np.ndarray) -> np.ndarray:
        t0 = time.perf_counter()
        values = predict_batch(self.model, triples)
        self.total_seconds += time.perf_counter() - t0
        self.n_evals += len(values)
        return values

    def __call__(self, m: float, k: float, c: float) -> float:
        return float(self.evaluate_batch(np.array([[m, k, c]]))[0])

    @property
    def mean_seconds(self) -> float:
        return self.total_seconds / self.n_evals if self.n_evals else 0.0


class DirectFitness:
    """Fitness by direct time-history simulation: peak displacement of a
    fresh solver run from rest. Also used as the validation reference."""

    def __init__(self, excitation: ExcitationSpec, dt: float, duration: float):
        self.excitation = excitation
        self.dt = dt
        self.duration = duration
        self.n_samples = int(round(duration / dt)) + 1
        if self.n_samples < 2:
            raise InvalidInputError(
                f"duration {duration} must cover at least 2 samples at dt={dt}"
            )
        self.n_evals = 0
        self.total_seconds = 0.0

    def __call__(self, m: float, k: float, c: float) -> float:
        t0 = time.perf_counter()
        system = SdofSystem(m=m, k=k, c=c)
        forces = synthesize_force(self.excitation, m, self.dt, self.n_samples)
        history = newmark_solve(system, InitialConditions(), forces, NewmarkParams(dt=self.dt))
        value = max_abs_displacement(history)
        self.total_seconds += time.perf_counter() - t0
        self.n_evals += 1
        return value

    @property
    def mean_seconds(self) -> float:
        return self.total_seconds / self.n_evals if self.n_evals else 0.0


def surrogate_fitness(model: GnnModel) -> SurrogateFitness:
    """Wrap a trained model as a (m, k, c) -> predicted displacement fitness."""
    return SurrogateFitness(model)


def direct_fitness(excitation: ExcitationSpec, dt: float, duration: float) -> DirectFitness:
    """Wrap the direct solver as a (m, k, c) -> simulated peak fitness."""
    return DirectFitness(excitation, dt, duration)
