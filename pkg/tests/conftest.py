"""Shared fixtures: the tabulated pulse benchmark, the synthetic ground
motion, and helpers for writing record files and CLI configs."""

import math

import numpy as np
import pytest

from modal_forge import GroundMotionRecord, demo_ground_motion

# Tabulated reference response of a lightly damped oscillator under a
# half-sine force pulse p(t) = 10*sin(pi*t/0.6) for t <= 0.6, integrated
# at dt = 0.1 with the average-acceleration scheme. Columns: t, p, u, v, a.
# The printed force column continues the sinusoid past the pulse end even
# though the response columns are free vibration there; consumers must take
# the force as zero for t > 0.6 (see tests that recover the system).
PULSE_BENCHMARK = np.array([
    [0.0,   0.0000,  0.0000,  0.0000,   0.0000],
    [0.1,   5.0000,  0.0439,  0.8735,  17.4666],
    [0.2,   8.6602,  0.2327,  2.9056,  23.1803],
    [0.3,  10.0000,  0.6121,  4.6837,  12.3724],
    [0.4,   8.6603,  1.0827,  4.7262, -11.5169],
    [0.5,   5.0000,  1.4309,  2.2422, -38.1611],
    [0.6,   0.0000,  1.4231, -2.3995, -54.6733],
    [0.7,  -5.0000,  0.9622, -6.8183, -33.7019],
    [0.8,  -8.6602,  0.1906, -8.6094,  -2.1229],
    [0.9, -10.0000, -0.6048, -7.2936,  28.4417],
    [1.0,  -8.2441, -1.1444, -3.5027,  47.3716],
])

PULSE_P0 = 10.0
PULSE_TD = 0.6
PULSE_DT = 0.1

# The system the benchmark identifies: unit natural period, 5% damping,
# k = 10 (frozen from the least-squares recovery, see test_acceptance A1).
BENCH_M = 10.0 / (4.0 * math.pi ** 2)   # 0.2533029591058444
BENCH_K = 10.0
BENCH_C = 0.5 / math.pi                 # 0.15915494309189535

# Base-excited demo system (stiff, lightly damped)
DEMO_M = 3.531117
DEMO_K = 521.429791
DEMO_ZETA = 0.093387


def pulse_benchmark_forces():
    """Force series the benchmark response was generated with: the printed
    column while the pulse is active, zero afterwards."""
    t = PULSE_BENCHMARK[:, 0]
    return np.where(t <= PULSE_TD + 1e-12, PULSE_BENCHMARK[:, 1], 0.0)


def write_record_file(path, record: GroundMotionRecord) -> None:
    lines = [f"dt={record.dt!r}"]
    lines.extend(repr(float(a)) for a in record.accel)
    path.write_text("\n".join(lines) + "\n", encoding="utf-8")


@pytest.fixture(scope="session")
def demo_record() -> GroundMotionRecord:
    return demo_ground_motion()


@pytest.fixture()
def record_file(tmp_path, demo_record):
    path = tmp_path / "record.txt"
    write_record_file(path, demo_record)
    return path
