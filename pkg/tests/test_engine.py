"""Walk engine: initial states, shift/step semantics, both evolution modes."""

import numpy as np
import pytest

from qwcarbon.classical import classical_evolve_absorbing, uniform_distribution
from qwcarbon.coins import coin_by_name, fourier, grover, hadamard
from qwcarbon.engine import (
    TransportRecord,
    evolve_absorbing,
    evolve_unitary,
    make_initial_state,
    shift,
    step,
)
from qwcarbon.graphs import (
    build_c60,
    build_capped_nanotube,
    build_cycle,
    build_nanotube_loop,
    compute_levels,
    face_nodes,
)

from _oracles import dense_absorbing_arrival, dense_evolve


def random_state(g, cdim, seed):
    rng = np.random.default_rng(seed)
    amp = rng.normal(size=(g.n, cdim)) + 1j * rng.normal(size=(g.n, cdim))
    amp /= np.linalg.norm(amp)
    s = make_initial_state(g, [0], cdim)
    s.amplitudes = amp
    return s


# --- initial states ----------------------------------------------------------


def test_initial_state_c18_single_node():
    g = build_cycle(18)
    s = make_initial_state(g, [0], 2)
    assert np.isclose(s.amplitudes[0, 0], 1 / np.sqrt(2))
    assert np.isclose(s.amplitudes[0, 1], 1 / np.sqrt(2))
    assert np.isclose(s.norm_squared(), 1.0, atol=1e-15)
    assert s.absorbed == 0.0 and s.t == 0


def test_initial_state_c60_hexagon_face():
    g = build_c60()
    face = face_nodes(g, 6)
    s = make_initial_state(g, face, 3)
    nz = np.abs(s.amplitudes.reshape(-1)) > 0
    assert nz.sum() == 18
    assert np.allclose(s.amplitudes[list(face), :], 1 / np.sqrt(18))
    assert np.isclose(s.norm_squared(), 1.0, atol=1e-14)


def test_initial_state_errors():
    g = build_cycle(6)
    with pytest.raises(ValueError):
        make_initial_state(g, [], 2)
    with pytest.raises(ValueError):
        make_initial_state(g, [0], 4)


# --- shift -------------------------------------------------------------------


@pytest.mark.parametrize("cdim_extra", [0, 1])
def test_shift_is_involution(cdim_extra):
    for g in (build_cycle(9), build_c60(), build_nanotube_loop("zigzag", 6, 4)):
        cdim = g.d + cdim_extra
        s = random_state(g, cdim, seed=7)
        twice = shift(shift(s, g), g)
        assert np.array_equal(twice.amplitudes, s.amplitudes)


def test_shift_routes_basis_states():
    g = build_cycle(18)
    s = make_initial_state(g, [0], 2)
    s.amplitudes[:] = 0
    s.amplitudes[0, 1] = 1.0  # localized at (0, 1)
    out = shift(s, g)
    assert out.amplitudes[1, 0] == 1.0
    assert np.abs(out.amplitudes).sum() == 1.0


def test_shift_fixes_wait_port():
    g = build_cycle(6)
    s = make_initial_state(g, [2], 3)
    s.amplitudes[:] = 0
    s.amplitudes[2, 2] = 1.0  # wait component
    out = shift(s, g)
    assert out.amplitudes[2, 2] == 1.0


# --- step --------------------------------------------------------------------


def test_step_c18_one_step_exact():
    g = build_cycle(18)
    s1 = step(make_initial_state(g, [0], 2), g, hadamard())
    expected = np.zeros((18, 2), dtype=complex)
    expected[17, 1] = 1.0
    assert np.allclose(s1.amplitudes, expected, atol=1e-15)
    assert s1.t == 1


def test_step_preserves_norm():
    g = build_nanotube_loop("armchair", 6, 3)
    s = random_state(g, 3, seed=3)
    out = step(s, g, grover(3))
    assert abs(out.norm_squared() - s.norm_squared()) < 1e-12


def test_step_dimension_mismatch():
    g = build_cycle(6)
    with pytest.raises(ValueError):
        step(make_initial_state(g, [0], 2), g, grover(3))


@pytest.mark.parametrize(
    "n,coin",
    [
        (4, hadamard()),
        (4, grover(3)),
        (8, fourier(3)),
        (18, hadamard()),
        (21, grover(3)),
        (16, coin_by_name("Hi")),
    ],
)
def test_dense_oracle_equivalence(n, coin):
    """Engine evolution matches an independent dense step matrix (n*c <= 64)."""
    g = build_cycle(n)
    assert g.n * coin.dim <= 64
    s = make_initial_state(g, [0], coin.dim)
    reference = dense_evolve(g, coin.entries, s.amplitudes.reshape(-1), steps=50)
    cur = s
    for t in range(1, 51):
        cur = step(cur, g, coin)
        assert np.max(np.abs(cur.amplitudes.reshape(-1) - reference[t])) < 1e-10


# --- absorbing evolution -------------------------------------------------------


def test_absorbing_starts_at_zero_when_off_target():
    g = build_cycle(18)
    lm = compute_levels(g, [0])
    rec = evolve_absorbing(make_initial_state(g, [0], 2), g, hadamard(), lm.target_set, 10, lm)
    assert rec.arrival[0] == 0.0
    assert len(rec.arrival) == 11


def test_absorbing_monotone_and_bounded():
    g = build_c60()
    lm = compute_levels(g, [0])
    rec = evolve_absorbing(make_initial_state(g, [0], 3), g, grover(3), lm.target_set, 300, lm)
    assert np.all(np.diff(rec.arrival) >= -1e-15)
    assert np.all((rec.arrival >= 0) & (rec.arrival <= 1 + 1e-12))
    assert np.all(rec.avg_level <= lm.num_levels - 1 + 1e-9)


def test_absorbing_matches_dense_oracle():
    g = build_cycle(18)
    lm = compute_levels(g, [0])
    rec = evolve_absorbing(make_initial_state(g, [0], 2), g, hadamard(), lm.target_set, 60, lm)
    oracle = dense_absorbing_arrival(g, hadamard().entries, [0], lm.target_set, 60)
    assert np.max(np.abs(rec.arrival - oracle)) < 1e-10


def test_absorbing_bookkeeping_identity():
    """Remaining norm plus accumulated arrival is 1 after every step."""
    g = build_nanotube_loop("zigzag", 6, 8)
    ring = g.metadata["ring"]
    lm = compute_levels(g, ring)
    state = make_initial_state(g, ring, 3)
    coin = grover(3)
    absorbed = 0.0
    arrivals = []
    cur = state
    tgt = list(lm.target_set)
    for t in range(80):
        if t > 0:
            cur = step(cur, g, coin)
        absorbed += float(np.sum(np.abs(cur.amplitudes[tgt, :]) ** 2))
        cur.amplitudes[tgt, :] = 0.0
        arrivals.append(absorbed)
        assert abs(cur.norm_squared() + absorbed - 1.0) < 1e-12
    rec = evolve_absorbing(state, g, coin, tgt, 79, lm)
    assert np.allclose(rec.arrival, arrivals, atol=1e-12)


def test_absorbing_negative_steps():
    g = build_cycle(6)
    lm = compute_levels(g, [0])
    with pytest.raises(ValueError):
        evolve_absorbing(make_initial_state(g, [0], 2), g, hadamard(), lm.target_set, -1, lm)


def test_quantum_reaches_unity_like_classical_by_1200():
    g = build_cycle(18)
    lm = compute_levels(g, [0])
    rec = evolve_absorbing(make_initial_state(g, [0], 2), g, hadamard(), lm.target_set, 1200, lm)
    cl = classical_evolve_absorbing(
        uniform_distribution(g, [0]), g, lm.target_set, False, 1200, lm
    )
    assert rec.arrival[-1] > 0.99
    assert cl.arrival[-1] > 0.99


# --- unitary evolution ----------------------------------------------------------


def test_unitary_average_level_starts_at_zero():
    g = build_cycle(18)
    lm = compute_levels(g, [0])
    rec = evolve_unitary(make_initial_state(g, [0], 2), g, hadamard(), lm, 5)
    assert rec.avg_level[0] == 0.0
    assert np.all(rec.arrival == 0.0)


def test_unitary_uniform_distribution_average():
    g = build_cycle(18)
    lm = compute_levels(g, [0])
    s = make_initial_state(g, range(18), 2)
    rec = evolve_unitary(s, g, hadamard(), lm, 0)
    # (0 + 9 + 2*(1+...+8)) / 18
    assert np.isclose(rec.avg_level[0], 4.5, atol=1e-12)


def test_unitary_oscillates_about_middle():
    g = build_cycle(18)
    lm = compute_levels(g, [0])
    rec = evolve_unitary(make_initial_state(g, [0], 2), g, hadamard(), lm, 1200)
    tail = rec.avg_level[200:]
    assert 4.0 < tail.mean() < 5.0
    assert tail.std() > 0.5  # keeps oscillating, does not settle


# --- records ---------------------------------------------------------------------


def test_record_csv_round_trip():
    g = build_cycle(18)
    lm = compute_levels(g, [0])
    rec = evolve_absorbing(make_initial_state(g, [0], 2), g, hadamard(), lm.target_set, 40, lm)
    back = TransportRecord.from_csv(rec.to_csv())
    assert np.array_equal(back.arrival, rec.arrival)
    assert np.array_equal(back.avg_level, rec.avg_level)


def test_determinism_bit_identical():
    g = build_c60()
    lm = compute_levels(g, [0])
    a = evolve_absorbing(make_initial_state(g, [0], 3), g, grover(3), lm.target_set, 200, lm)
    b = evolve_absorbing(make_initial_state(g, [0], 3), g, grover(3), lm.target_set, 200, lm)
    assert np.array_equal(a.arrival, b.arrival)
    assert np.array_equal(a.avg_level, b.avg_level)
    assert a.to_csv() == b.to_csv()
