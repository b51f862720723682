import numpy as np
import pytest

from modal_forge import (
    BaseRecord,
    DataError,
    Dataset,
    Free,
    GridSampling,
    InitialConditions,
    InvalidInputError,
    LogUniformSampling,
    NewmarkParams,
    ParameterSpace,
    SampleRecord,
    SdofSystem,
    damping_from_ratio,
    direct_fitness,
    generate_dataset,
    newmark_solve,
    read_dataset,
    sample_parameters,
    split_dataset,
    write_dataset,
)

from conftest import DEMO_K, DEMO_M, DEMO_ZETA


def small_space(**kwargs):
    defaults = dict(
        m_range=(1.0, 10.0),
        k_range=(1.0, 100.0),
        c_range=(0.1, 1.0),
        sampling=LogUniformSampling(count=5, seed=3),
    )
    defaults.update(kwargs)
    return ParameterSpace(**defaults)


# ---------------------------------------------------------------------------
# sampling
# ---------------------------------------------------------------------------

def test_grid_cartesian_product_order():
    space = ParameterSpace(
        m_range=(1.0, 2.0), k_range=(10.0, 10.0), c_range=(0.1, 0.2),
        sampling=GridSampling(counts=(2, 1, 2)),
    )
    assert sample_parameters(space) == [
        (1.0, 10.0, 0.1), (1.0, 10.0, 0.2), (2.0, 10.0, 0.1), (2.0, 10.0, 0.2)]


def test_grid_has_no_duplicates():
    space = ParameterSpace(
        m_range=(1.0, 3.0), k_range=(5.0, 50.0), c_range=(0.1, 0.4),
        sampling=GridSampling(counts=(3, 4, 2)),
    )
    triples = sample_parameters(space)
    assert len(triples) == 24
    assert len(set(triples)) == 24


def test_grid_degenerate_interval_with_multiple_points():
    space = ParameterSpace(
        m_range=(2.0, 2.0), k_range=(1.0, 2.0), c_range=(0.1, 0.2),
        sampling=GridSampling(counts=(3, 1, 1)),
    )
    with pytest.raises(InvalidInputError, match="degenerate"):
        sample_parameters(space)


def test_log_uniform_empty():
    assert sample_parameters(small_space(sampling=LogUniformSampling(count=0))) == []


def test_log_uniform_mean_of_logs():
    space = ParameterSpace(
        m_range=(1.0, 1000.0), k_range=(1.0, 1000.0), c_range=(1.0, 1000.0),
        sampling=LogUniformSampling(count=10000, seed=42),
    )
    triples = np.array(sample_parameters(space))
    assert np.log10(triples[:, 0]).mean() == pytest.approx(1.5, abs=0.05)
    assert triples.min() >= 1.0 and triples.max() <= 1000.0


def test_log_uniform_deterministic_per_seed():
    space = small_space()
    assert sample_parameters(space) == sample_parameters(space)
    other = small_space(sampling=LogUniformSampling(count=5, seed=4))
    assert sample_parameters(space) != sample_parameters(other)


def test_space_invariants():
    with pytest.raises(InvalidInputError):
        ParameterSpace(m_range=(0.0, 1.0), k_range=(1.0, 2.0), c_range=(0.1, 1.0),
                       sampling=GridSampling(counts=(1, 1, 1)))
    with pytest.raises(InvalidInputError):
        ParameterSpace(m_range=(2.0, 1.0), k_range=(1.0, 2.0), c_range=(0.1, 1.0),
                       sampling=GridSampling(counts=(1, 1, 1)))
    with pytest.raises(InvalidInputError):
        GridSampling(counts=(0, 1, 1))
    with pytest.raises(InvalidInputError):
        LogUniformSampling(count=-1)


# ---------------------------------------------------------------------------
# generation
# ---------------------------------------------------------------------------

def test_generate_matches_direct_fitness_exactly(demo_record):
    c = damping_from_ratio(DEMO_M, DEMO_K, DEMO_ZETA)
    space = ParameterSpace(
        m_range=(DEMO_M, DEMO_M), k_range=(DEMO_K, DEMO_K), c_range=(c, c),
        sampling=GridSampling(counts=(1, 1, 1)),
    )
    excitation = BaseRecord(record=demo_record, scale=1.0)
    dataset = generate_dataset(space, excitation, 0.02, 35.0)
    fitness = direct_fitness(excitation, 0.02, 35.0)
    assert dataset.records[0].u_max == fitness(DEMO_M, DEMO_K, c)
    assert dataset.records[0].u_max > 0


def test_generate_free_excitation_all_zero():
    dataset = generate_dataset(small_space(), Free(), 0.05, 2.0)
    assert all(r.u_max == 0.0 for r in dataset.records)


def test_generate_is_deterministic():
    space = small_space()
    a = generate_dataset(space, Free(), 0.05, 1.0)
    b = generate_dataset(space, Free(), 0.05, 1.0)
    assert a == b


def test_generate_requires_two_samples():
    with pytest.raises(InvalidInputError):
        generate_dataset(small_space(), Free(), 1.0, 0.2)


def test_generate_names_offending_triple_on_error(demo_record):
    # record dt mismatch surfaces with the sample that hit it
    space = small_space(sampling=LogUniformSampling(count=2, seed=1))
    excitation = BaseRecord(record=demo_record, scale=1.0)
    with pytest.raises(InvalidInputError, match=r"sweep failed at \(m="):
        generate_dataset(space, excitation, 0.05, 1.0)


def test_peak_monotone_in_damping_for_free_vibration():
    # free decay from a displaced start: more damping never raises the peak
    ic = InitialConditions(u0=0.01)
    c_values = np.linspace(5.0, 80.0, 5)
    peaks = []
    for c in c_values:
        system = SdofSystem(m=DEMO_M, k=DEMO_K, c=float(c))
        h = newmark_solve(system, ic, np.zeros(2001), NewmarkParams(dt=0.02))
        peaks.append(np.max(np.abs(h.u)))
    assert all(b <= a + 1e-15 for a, b in zip(peaks, peaks[1:]))


# ---------------------------------------------------------------------------
# splitting
# ---------------------------------------------------------------------------

def make_dataset(n):
    records = tuple(SampleRecord(m=1.0 + i, k=2.0, c=0.3, u_max=0.1 * (i + 1))
                    for i in range(n))
    return Dataset(records=records, excitation={"kind": "free"}, dt=0.1,
                   duration=1.0, seed=0)


def test_split_sizes_and_disjointness():
    ds = split_dataset(make_dataset(10), 0.2, seed=5)
    assert len(ds.test_idx) == 2 and len(ds.train_idx) == 8
    assert not set(ds.test_idx) & set(ds.train_idx)
    assert sorted(ds.test_idx + ds.train_idx) == list(range(10))


def test_split_zero_fraction_all_train():
    ds = split_dataset(make_dataset(7), 0.0, seed=5)
    assert ds.test_idx == ()
    assert len(ds.train_idx) == 7


def test_split_deterministic_and_seed_sensitive():
    base = make_dataset(100)
    assert split_dataset(base, 0.3, seed=5) == split_dataset(base, 0.3, seed=5)
    assert split_dataset(base, 0.3, seed=5) != split_dataset(base, 0.3, seed=6)


def test_split_overlap_between_seeds_is_hypergeometric():
    base = make_dataset(1000)
    a = set(split_dataset(base, 0.2, seed=1).test_idx)
    b = set(split_dataset(base, 0.2, seed=2).test_idx)
    # expectation 200 * 0.2 = 40; allow a generous window around it
    assert 20 <= len(a & b) <= 60


def test_split_rejects_bad_fraction():
    with pytest.raises(InvalidInputError):
        split_dataset(make_dataset(4), 1.0, seed=0)
    with pytest.raises(InvalidInputError):
        split_dataset(make_dataset(4), -0.1, seed=0)


def test_dataset_split_partition_invariant():
    records = tuple(SampleRecord(m=1.0, k=1.0, c=0.1, u_max=0.0) for _ in range(3))
    with pytest.raises(InvalidInputError):
        Dataset(records=records, excitation={"kind": "free"}, dt=0.1, duration=1.0,
                seed=None, train_idx=(0, 1), test_idx=(1, 2))


# ---------------------------------------------------------------------------
# persistence
# ---------------------------------------------------------------------------

def test_round_trip(tmp_path):
    ds = split_dataset(make_dataset(3), 0.34, seed=2)
    csv = tmp_path / "data.csv"
    write_dataset(ds, csv)
    assert read_dataset(csv) == ds


def test_round_trip_preserves_full_precision(tmp_path):
    records = (SampleRecord(m=1.0 / 3.0, k=float(np.pi), c=0.1234567890123456,
                            u_max=1.0e-7 / 3.0),)
    ds = Dataset(records=records, excitation={"kind": "free"}, dt=0.02,
                 duration=40.0, seed=9)
    csv = tmp_path / "data.csv"
    write_dataset(ds, csv)
    back = read_dataset(csv)
    assert back.records[0] == records[0]


def test_header_only_csv_is_valid_empty(tmp_path):
    ds = Dataset(records=(), excitation={"kind": "free"}, dt=0.1, duration=1.0, seed=0)
    csv = tmp_path / "empty.csv"
    write_dataset(ds, csv)
    back = read_dataset(csv)
    assert len(back) == 0


def test_hand_written_csv(tmp_path):
    csv = tmp_path / "hand.csv"
    csv.write_text(
        "m_kg,k_N_per_m,c_Ns_per_m,u_max_m\n1.5,20.0,0.3,0.012\n2.5,30.0,0.4,0.034\n")
    meta = tmp_path / "hand.csv.meta.json"
    meta.write_text(
        '{"excitation": {"kind": "free"}, "dt": 0.1, "duration": 1.0,'
        ' "seed": null, "n_records": 2, "train_idx": [0, 1], "test_idx": []}\n')
    ds = read_dataset(csv)
    assert ds.records == (SampleRecord(1.5, 20.0, 0.3, 0.012),
                          SampleRecord(2.5, 30.0, 0.4, 0.034))


def test_malformed_row_cites_line(tmp_path):
    csv = tmp_path / "bad.csv"
    csv.write_text("m_kg,k_N_per_m,c_Ns_per_m,u_max_m\n1.0,2.0,0.1,0.01\n1.0,oops,0.1\n")
    (tmp_path / "bad.csv.meta.json").write_text(
        '{"excitation": {"kind": "free"}, "dt": 0.1, "duration": 1.0,'
        ' "seed": null, "n_records": 2, "train_idx": [0, 1], "test_idx": []}\n')
    with pytest.raises(DataError, match="line 3"):
        read_dataset(csv)


def test_record_count_mismatch_is_integrity_error(tmp_path):
    ds = make_dataset(3)
    csv = tmp_path / "data.csv"
    write_dataset(ds, csv)
    meta = tmp_path / "data.csv.meta.json"
    text = meta.read_text().replace('"n_records": 3', '"n_records": 5')
    meta.write_text(text)
    with pytest.raises(DataError, match="5 records"):
        read_dataset(csv)


def test_sample_record_invariants():
    with pytest.raises(DataError):
        SampleRecord(m=1.0, k=1.0, c=0.1, u_max=-0.5)
    with pytest.raises(DataError):
        SampleRecord(m=1.0, k=float("nan"), c=0.1, u_max=0.0)
