import numpy as np
import pytest
from numpy.testing import assert_allclose

from modules.errors import InconsistentMarginal, NotPositive
from modules.hilbert import maximally_mixed, trace_distance
from modules.kd import kd_term
from modules.pentagon import frame_from_angles
from modules.tomography import (
    RedEntries,
    TomographicData,
    complete_table,
    completion_shift,
    derived_probabilities,
    extract,
    reconstruct,
    reconstruct_matrix,
    red_from_state,
    red_to_data,
)

from conftest import ANGLE_PAIRS, random_density


def direct_completion(rho, frame):
    return [kd_term(rho, "3", "P2", frame), kd_term(rho, "2", "P2", frame), kd_term(rho, "3", "S2", frame)]


class TestExtract:
    def test_t1f(self, t1f, frame):
        data = extract(t1f, frame)
        assert data.p1 == pytest.approx(9 / 11, abs=1e-12)
        assert data.pf == pytest.approx(25 / 33, abs=1e-12)
        assert data.r_1f == pytest.approx(15 / 33, abs=1e-12)

    def test_nx(self, nx, frame):
        data = extract(nx, frame)
        assert data.p1 == pytest.approx(4 / 9, abs=1e-12)
        assert data.pf == pytest.approx(1 / 3, abs=1e-12)
        assert data.r_1f == pytest.approx(2 / 9, abs=1e-12)
        assert data.r_1D2 == pytest.approx(1 / 9, abs=1e-12)
        assert data.r_D2f == pytest.approx(1 / 9, abs=1e-12)

    def test_s1_has_all_zero_coefficients(self, state_of, frame):
        data = extract(state_of("S1"), frame)
        assert_allclose([data.p1, data.pf, data.r_1f, data.r_1D2, data.r_D2f], 0, atol=1e-15)

    def test_mixed(self, frame):
        data = extract(maximally_mixed(), frame)
        assert data.p1 == pytest.approx(1 / 3, abs=1e-12)
        assert data.r_1f == pytest.approx(1 / 9, abs=1e-12)
        assert data.r_1D2 == pytest.approx(1 / 6, abs=1e-12)
        assert data.r_D2f == pytest.approx(2 / 9, abs=1e-12)


class TestReconstruct:
    def test_roundtrip(self, states, frame):
        for rho in states:
            assert_allclose(reconstruct(extract(rho, frame), frame), rho, atol=1e-10)

    @pytest.mark.parametrize("theta1, theta2", ANGLE_PAIRS)
    def test_roundtrip_on_other_frames(self, rng, theta1, theta2):
        frame = frame_from_angles(theta1, theta2)
        for _ in range(20):
            rho = random_density(rng)
            assert_allclose(reconstruct(extract(rho, frame), frame), rho, atol=1e-10)

    def test_zero_data_gives_s1(self, frame):
        zero = TomographicData(0.0, 0.0, 0j, 0j, 0j)
        assert_allclose(reconstruct(zero, frame), frame.projector("S1"), atol=1e-12)

    def test_linear_in_the_data(self, frame, rng):
        a, b = random_density(rng), random_density(rng, 1)
        w = 0.3
        mixed = extract(a, frame).scaled(w) + extract(b, frame).scaled(1 - w)
        assert_allclose(reconstruct(mixed, frame), w * a + (1 - w) * b, atol=1e-10)

    def test_raw_matrix_is_hermitian_with_unit_trace(self, frame):
        data = TomographicData(0.9, 0.9, 0.5 + 0.2j, 0.1j, -0.3)
        m = reconstruct_matrix(data, frame)
        assert_allclose(m, np.conj(m).T, atol=1e-14)
        assert complex(np.trace(m)) == pytest.approx(1.0, abs=1e-12)

    def test_inconsistent_data_is_not_positive(self, frame):
        red = RedEntries(0j, 0.4 + 0j, 0j, 0j, 0j)
        with pytest.raises(NotPositive) as info:
            reconstruct(red_to_data(red), frame)
        assert info.value.min_eigenvalue < 0
        expected = 1.2 * frame.projector("2") - 0.2 * frame.projector("S1")
        assert_allclose(info.value.matrix, expected, atol=1e-12)

    def test_nx_trace_distance(self, nx, frame):
        rho = reconstruct(extract(nx, frame), frame)
        assert trace_distance(rho, nx) < 1e-10


class TestRedEntries:
    def test_t1f_red_entries(self, t1f, frame):
        red = red_from_state(t1f, frame)
        assert_allclose(
            [red.r_1f, red.r_2f, red.r_3f, red.r_1S2, red.r_1P2],
            [15 / 33, 5 / 33, 5 / 33, 9 / 33, 3 / 33],
            atol=1e-12,
        )

    def test_to_data(self, t1f, nx, frame):
        data = red_to_data(red_from_state(t1f, frame))
        assert data.p1 == pytest.approx(27 / 33, abs=1e-12)
        assert data.pf == pytest.approx(25 / 33, abs=1e-12)
        assert red_to_data(red_from_state(nx, frame)).pf == pytest.approx(1 / 3, abs=1e-12)

    def test_to_data_matches_extract(self, states, frame):
        for rho in states[:50]:
            data = red_to_data(red_from_state(rho, frame))
            direct = extract(rho, frame)
            assert_allclose(
                [data.p1, data.pf, data.r_1f, data.r_1D2, data.r_D2f],
                [direct.p1, direct.pf, direct.r_1f, direct.r_1D2, direct.r_D2f],
                atol=1e-10,
            )

    def test_zero_entries(self):
        data = red_to_data(RedEntries.zeros())
        assert (data.p1, data.pf) == (0.0, 0.0)

    def test_imaginary_marginal_is_rejected(self):
        red = RedEntries(0.2 + 0.1j, 0j, 0j, 0j, 0j)
        with pytest.raises(InconsistentMarginal):
            red_to_data(red)

    def test_imaginary_marginal_is_tolerated_when_not_strict(self):
        red = RedEntries(0.2 + 0.1j, 0j, 0j, 0j, 0j)
        data = red_to_data(red, strict=False)
        assert data.imag_residual == pytest.approx(0.1, abs=1e-12)
        assert data.p1 == pytest.approx(0.2, abs=1e-12)


class TestCompletion:
    def test_t1f(self, t1f, frame):
        completion = complete_table(red_from_state(t1f, frame))
        assert_allclose(completion, [1 / 33, -2 / 33, -3 / 33], atol=1e-12)

    def test_zero_entries(self):
        assert_allclose(complete_table(RedEntries.zeros()), [1 / 4, 1 / 2, 1 / 4])

    @pytest.mark.parametrize(
        "name, expected",
        [("S1", [1 / 4, 1 / 2, 1 / 4]), ("2", [0, 2 / 3, 0]), ("S2", [0, 0, 1 / 2]), ("f", [0, 0, 0])],
    )
    def test_special_states(self, state_of, frame, name, expected):
        assert_allclose(complete_table(red_from_state(state_of(name), frame)), expected, atol=1e-12)

    def test_matches_direct_terms(self, states, frame):
        for rho in states:
            completed = complete_table(red_from_state(rho, frame))
            assert_allclose(completed, direct_completion(rho, frame), atol=1e-10)

    def test_total_is_one(self, states, frame):
        for rho in states[:30]:
            red = red_from_state(rho, frame)
            total = red.r_1f + red.r_2f + red.r_3f + red.r_1S2 + red.r_1P2 + sum(complete_table(red))
            assert total == pytest.approx(1.0, abs=1e-12)


class TestDerived:
    def test_nx(self, nx, frame):
        derived = derived_probabilities(extract(nx, frame))
        assert derived.pS1 == pytest.approx(1 / 2, abs=1e-12)
        assert derived.p2 == pytest.approx(4 / 9, abs=1e-12)
        assert derived.pS2 == pytest.approx(1 / 2, abs=1e-12)
        assert derived.pD2 == pytest.approx(1 / 18, abs=1e-12)

    def test_match_born(self, states, frame):
        for rho in states:
            derived = derived_probabilities(extract(rho, frame))
            for value, outcome in zip(derived, ("2", "S2", "D2", "S1")):
                expected = np.real(np.vdot(frame.vec(outcome), rho @ frame.vec(outcome)))
                assert value == pytest.approx(expected, abs=1e-10)


class TestCoherenceShift:
    def test_t1f(self, t1f, frame):
        shift = completion_shift(red_from_state(t1f, frame))
        assert shift.delta == pytest.approx(4 / 33, abs=1e-12)
        assert shift.reference_r_1f == pytest.approx(11 / 33, abs=1e-12)
        assert shift.residual < 1e-12

    def test_incoherent_mixture_has_no_shift(self, state_of, frame):
        rho = 6 / 11 * state_of("1") + 5 / 11 * state_of("f")
        red = red_from_state(rho, frame)
        assert red.r_1f == pytest.approx(11 / 33, abs=1e-12)
        assert red.r_2f == pytest.approx(5 / 33, abs=1e-12)
        assert red.r_1S2 == pytest.approx(9 / 33, abs=1e-12)
        assert completion_shift(red).delta == pytest.approx(0, abs=1e-12)
