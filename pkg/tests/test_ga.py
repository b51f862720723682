import numpy as np
import pytest

from modal_forge import (
    BaseRecord,
    Free,
    GaConfig,
    InvalidInputError,
    NumericalError,
    blend_crossover,
    damping_from_ratio,
    direct_fitness,
    evolve,
    gaussian_mutate,
    generate_dataset,
    GridSampling,
    init_population,
    LogUniformSampling,
    ParameterSpace,
    surrogate_fitness,
    tournament_select,
)
from modal_forge.ga import decode
from modal_forge.gnn import NormStats, init_model

from conftest import DEMO_K, DEMO_M, DEMO_ZETA

WIDE = GaConfig(bounds=((1e-3, 1e3), (1e-3, 1e3), (1e-3, 1e3)), seed=0)


class QuadraticFitness:
    """Separable quadratic in log10 space with minimum at (10, 10, 1)."""

    optimum = np.array([1.0, 1.0, 0.0])

    def __init__(self):
        self.seen = []

    def __call__(self, m, k, c):
        genes = np.log10([m, k, c])
        self.seen.append((m, k, c))
        return float(np.sum((genes - self.optimum) ** 2))


# ---------------------------------------------------------------------------
# operators
# ---------------------------------------------------------------------------

def test_init_population_within_bounds():
    config = GaConfig(population=50, seed=12)
    pop = init_population(config)
    lo, hi = config.log_bounds()
    assert len(pop) == 50
    for genes in pop:
        assert np.all(genes >= lo) and np.all(genes <= hi)


def test_init_population_degenerate_bounds():
    config = GaConfig(bounds=((2.0, 2.0), (5.0, 5.0), (0.1, 0.1)), seed=1)
    for genes in init_population(config):
        assert np.allclose(genes, np.log10([2.0, 5.0, 0.1]))


def test_init_population_deterministic():
    config = GaConfig(seed=9)
    a = init_population(config)
    b = init_population(config)
    assert all(np.array_equal(x, y) for x, y in zip(a, b))


def test_tournament_size_one_is_uniform():
    config = GaConfig(population=4, tournament=1, seed=0)
    pop = [np.full(3, float(i)) for i in range(4)]
    fitnesses = np.array([3.0, 2.0, 1.0, 0.5])
    rng = np.random.default_rng(0)
    counts = np.zeros(4)
    for _ in range(20000):
        winner = tournament_select(pop, fitnesses, config, rng)
        counts[int(winner[0])] += 1
    assert np.all(np.abs(counts / 20000 - 0.25) < 0.02)


def test_tournament_two_of_two_selection_probability():
    config = GaConfig(population=2, tournament=2, seed=0)
    pop = [np.zeros(3), np.ones(3)]
    fitnesses = np.array([1.0, 2.0])
    rng = np.random.default_rng(1)
    hits = 0
    trials = 100000
    for _ in range(trials):
        winner = tournament_select(pop, fitnesses, config, rng)
        hits += winner[0] == 0.0
    assert hits / trials == pytest.approx(0.75, abs=0.01)


def test_tournament_tie_breaks_lowest_index():
    config = GaConfig(population=5, tournament=2, seed=0)
    pop = [np.full(3, float(i)) for i in range(5)]
    fitnesses = np.zeros(5)

    class StubRng:
        def integers(self, low, high, size):
            return np.array([3, 1])

    winner = tournament_select(pop, fitnesses, config, StubRng())
    assert winner[0] == 1.0


def test_blend_identical_parents_yield_parents():
    rng = np.random.default_rng(2)
    parent = np.array([0.5, -0.2, 1.0])
    a, b = blend_crossover(parent, parent.copy(), WIDE, rng)
    assert np.array_equal(a, parent) and np.array_equal(b, parent)


def test_blend_zero_probability_copies():
    config = GaConfig(bounds=WIDE.bounds, crossover_p=0.0, seed=0)
    rng = np.random.default_rng(3)
    pa, pb = np.array([0.1, 0.2, 0.3]), np.array([1.0, 2.0, -1.0])
    a, b = blend_crossover(pa, pb, config, rng)
    assert np.array_equal(a, pa) and np.array_equal(b, pb)
    assert a is not pa  # copies, not aliases


def test_blend_interval_and_mean():
    config = GaConfig(bounds=WIDE.bounds, crossover_p=1.0, blend_alpha=0.5, seed=0)
    rng = np.random.default_rng(4)
    pa = np.array([0.0, 0.0, 0.0])
    pb = np.array([1.0, 1.0, 1.0])
    samples = []
    for _ in range(50000):
        a, b = blend_crossover(pa, pb, config, rng)
        samples.extend([a[0], b[0]])
    samples = np.array(samples)
    assert samples.min() >= -0.5 and samples.max() <= 1.5
    assert samples.mean() == pytest.approx(0.5, abs=0.01)


def test_mutation_identity_cases():
    rng = np.random.default_rng(5)
    genes = np.array([0.3, 0.7, -0.5])
    none = gaussian_mutate(genes, GaConfig(bounds=WIDE.bounds, mutation_p=0.0), rng)
    assert np.array_equal(none, genes)
    still = gaussian_mutate(genes, GaConfig(bounds=WIDE.bounds, mutation_p=1.0,
                                            mutation_sigma=0.0), rng)
    assert np.array_equal(still, genes)


def test_mutation_clips_at_bound_half_the_time():
    config = GaConfig(bounds=((1e-3, 10.0), (1e-3, 1e3), (1e-3, 1e3)),
                      mutation_p=1.0, mutation_sigma=0.1)
    rng = np.random.default_rng(6)
    upper = np.log10(10.0)
    genes = np.array([upper, 0.0, 0.0])
    at_bound = 0
    trials = 100000
    for _ in range(trials):
        mutated = gaussian_mutate(genes, config, rng)
        assert mutated[0] <= upper
        at_bound += mutated[0] == upper
    assert at_bound / trials == pytest.approx(0.5, abs=0.01)


def test_config_invariants():
    with pytest.raises(InvalidInputError):
        GaConfig(population=1)
    with pytest.raises(InvalidInputError):
        GaConfig(elites=50, population=50)
    with pytest.raises(InvalidInputError):
        GaConfig(tournament=0)
    with pytest.raises(InvalidInputError):
        GaConfig(crossover_p=1.5)
    with pytest.raises(InvalidInputError):
        GaConfig(bounds=((0.0, 1.0), (1.0, 2.0), (1.0, 2.0)))


# ---------------------------------------------------------------------------
# evolution
# ---------------------------------------------------------------------------

def test_evolve_finds_quadratic_optimum():
    config = GaConfig(seed=17)
    result = evolve(QuadraticFitness(), config)
    m, k, c = result.best_params
    assert m == pytest.approx(10.0, rel=0.05)
    assert k == pytest.approx(10.0, rel=0.05)
    assert c == pytest.approx(1.0, rel=0.05)


def test_evolve_constant_fitness():
    result = evolve(lambda m, k, c: 2.5, GaConfig(generations=10, seed=3))
    assert result.best_fitness == 2.5
    assert all(best == 2.5 for best, _ in result.history)


def test_evolve_elitist_monotonicity_and_budget():
    config = GaConfig(generations=40, seed=8)
    result = evolve(QuadraticFitness(), config)
    bests = [b for b, _ in result.history]
    assert all(b <= a for a, b in zip(bests, bests[1:]))
    assert len(result.history) == config.generations
    assert result.evaluations == config.population * config.generations


def test_evolve_deterministic():
    config = GaConfig(generations=15, seed=21)
    r1 = evolve(QuadraticFitness(), config)
    r2 = evolve(QuadraticFitness(), config)
    assert np.array_equal(r1.best_genes, r2.best_genes)
    assert r1.history == r2.history
    assert r1.evaluations == r2.evaluations


def test_evolve_every_evaluated_triple_in_bounds():
    config = GaConfig(generations=25, seed=30)
    fitness = QuadraticFitness()
    evolve(fitness, config)
    (m_lo, m_hi), (k_lo, k_hi), (c_lo, c_hi) = config.bounds
    seen = np.array(fitness.seen)
    tol = 1e-12
    assert np.all(seen[:, 0] >= m_lo * (1 - tol)) and np.all(seen[:, 0] <= m_hi * (1 + tol))
    assert np.all(seen[:, 1] >= k_lo * (1 - tol)) and np.all(seen[:, 1] <= k_hi * (1 + tol))
    assert np.all(seen[:, 2] >= c_lo * (1 - tol)) and np.all(seen[:, 2] <= c_hi * (1 + tol))


def test_evolve_rejects_non_finite_fitness():
    def bad(m, k, c):
        return float("nan")
    with pytest.raises(NumericalError, match=r"\(m="):
        evolve(bad, GaConfig(generations=2, seed=1))


def test_decode_inverts_log_encoding():
    assert decode(np.array([1.0, 2.0, -1.0])) == pytest.approx((10.0, 100.0, 0.1))


# ---------------------------------------------------------------------------
# fitness adapters
# ---------------------------------------------------------------------------

def surrogate_for_tests():
    norm = NormStats(input_mean=(0.0, 0.0, 0.0), input_std=(1.0, 1.0, 1.0),
                     target_mean=-2.0, target_std=0.5)
    return surrogate_fitness(init_model(norm, hidden=8, seed=5))


def test_surrogate_fitness_pure_and_positive():
    fitness = surrogate_for_tests()
    a = fitness(2.0, 30.0, 0.5)
    b = fitness(2.0, 30.0, 0.5)
    assert a == b
    assert a > 0
    rng = np.random.default_rng(0)
    triples = 10.0 ** rng.uniform(-2, 2, size=(50, 3))
    assert np.all(fitness.evaluate_batch(triples) > 0)


def test_surrogate_batch_matches_single_calls():
    fitness = surrogate_for_tests()
    rng = np.random.default_rng(1)
    triples = 10.0 ** rng.uniform(-1, 1, size=(10, 3))
    batch = fitness.evaluate_batch(triples)
    # re-running the same batch is bit-reproducible
    assert np.array_equal(batch, fitness.evaluate_batch(triples))
    # single calls agree to rounding (different BLAS batch shapes)
    singles = [fitness(m, k, c) for m, k, c in triples]
    assert np.allclose(batch, singles, rtol=1e-12)


def test_surrogate_fitness_counts_calls():
    fitness = surrogate_for_tests()
    fitness(1.0, 1.0, 1.0)
    fitness.evaluate_batch(np.ones((7, 3)))
    assert fitness.n_evals == 8
    assert fitness.total_seconds > 0
    assert fitness.mean_seconds > 0


def test_direct_fitness_free_excitation_is_zero():
    fitness = direct_fitness(Free(), 0.05, 2.0)
    assert fitness(1.0, 20.0, 0.4) == 0.0


def test_direct_fitness_matches_dataset_generation(demo_record):
    excitation = BaseRecord(record=demo_record, scale=1.0)
    space = ParameterSpace(
        m_range=(1.0, 5.0), k_range=(10.0, 200.0), c_range=(0.1, 2.0),
        sampling=LogUniformSampling(count=3, seed=11),
    )
    dataset = generate_dataset(space, excitation, 0.02, 32.0)
    fitness = direct_fitness(excitation, 0.02, 32.0)
    for record in dataset.records:
        assert fitness(record.m, record.k, record.c) == record.u_max


def test_direct_fitness_soft_system_tracks_ground_displacement(demo_record):
    # far below the record's frequency content the mass stays put, so the
    # relative peak approaches the peak ground displacement
    excitation = BaseRecord(record=demo_record, scale=1.0)
    fitness = direct_fitness(excitation, 0.02, 40.0)
    u_soft = fitness(992.2885, 0.0454, 0.020)
    dt = demo_record.dt
    vel = np.zeros(len(demo_record))
    vel[1:] = np.cumsum(0.5 * (demo_record.accel[1:] + demo_record.accel[:-1])) * dt
    disp = np.zeros_like(vel)
    disp[1:] = np.cumsum(0.5 * (vel[1:] + vel[:-1])) * dt
    assert u_soft == pytest.approx(np.max(np.abs(disp)), rel=0.15)


def test_direct_fitness_propagates_solver_errors():
    fitness = direct_fitness(Free(), 0.05, 2.0)
    with pytest.raises(InvalidInputError):
        fitness(-1.0, 1.0, 0.1)


def test_evolve_with_batched_surrogate_runs():
    fitness = surrogate_for_tests()
    config = GaConfig(generations=5, population=20, seed=2)
    result = evolve(fitness, config)
    assert fitness.n_evals == 100
    assert result.evaluations == 100
    assert result.best_fitness > 0
