import math

import numpy as np
import pytest
from numpy.testing import assert_allclose

from modules.errors import DegenerateOverlap, NotHermitian, NotPositive, TraceNotOne
from modules.hilbert import (
    basis,
    born,
    eigenvalues,
    expectation,
    inner,
    ket,
    lambda_op,
    maximally_mixed,
    projector,
    trace_distance,
    validate_density,
)

from conftest import random_density


class TestVectors:
    def test_ket_normalizes(self):
        assert_allclose(ket(3, 4, 0), [0.6, 0.8, 0])

    def test_ket_rejects_zero(self):
        with pytest.raises(ValueError):
            ket(0, 0, 0)

    def test_vectors_are_read_only(self):
        v = basis(1)
        with pytest.raises(ValueError):
            v[0] = 2

    def test_inner_is_conjugate_linear_in_first_argument(self):
        u = ket(1j, 0, 0)
        assert inner(u, basis(1)) == pytest.approx(-1j)

    def test_projector_of_f(self, frame):
        p = projector(frame.vec("f"))
        assert_allclose(np.abs(p), np.full((3, 3), 1 / 3), atol=1e-15)
        assert_allclose(p[0, 2], -1 / 3, atol=1e-15)


class TestLambda:
    def test_diagonal_element(self, frame):
        op = lambda_op(frame.vec("S1"), frame.vec("D2"))
        assert op[2, 2] == pytest.approx(1.0)

    def test_vanishing_element(self, frame):
        op = lambda_op(frame.vec("1"), frame.vec("P2"))
        assert op[2, 2] == pytest.approx(0.0)

    def test_orthogonal_pair_is_undefined(self, frame):
        with pytest.raises(DegenerateOverlap):
            lambda_op(frame.vec("1"), frame.vec("2"))

    def test_unit_trace_and_idempotent(self, frame):
        op = lambda_op(frame.vec("f"), frame.vec("1"))
        assert complex(np.trace(op)) == pytest.approx(1.0)
        assert_allclose(op @ op, op, atol=1e-14)

    def test_conjugate_symmetry(self, frame, rng):
        rho = random_density(rng)
        a, b = frame.vec("S2"), frame.vec("P1")
        forward = expectation(rho, lambda_op(a, b))
        backward = expectation(rho, lambda_op(b, a))
        assert forward == pytest.approx(np.conj(backward))

    def test_weighted_expectation_is_kd_term(self, frame, nx):
        op = abs(inner(frame.vec("1"), frame.vec("f"))) ** 2 * lambda_op(frame.vec("f"), frame.vec("1"))
        assert expectation(nx, op) == pytest.approx(2 / 9)


class TestDensity:
    def test_accepts_valid_state(self):
        rho = validate_density(np.diag([0.5, 0.5, 0]))
        assert born(rho, basis(1)) == pytest.approx(0.5)

    def test_rejects_negative_eigenvalue(self):
        with pytest.raises(NotPositive) as info:
            validate_density(np.diag([2.0, -1.0, 0.0]))
        assert info.value.min_eigenvalue == pytest.approx(-1.0)
        assert info.value.matrix is not None

    def test_rejects_non_hermitian(self):
        m = np.diag([0.5, 0.5, 0]).astype(complex)
        m[0, 1] = 0.1
        with pytest.raises(NotHermitian):
            validate_density(m)

    def test_rejects_wrong_trace(self):
        with pytest.raises(TraceNotOne):
            validate_density(np.eye(3))

    def test_rejects_wrong_shape(self):
        with pytest.raises(ValueError):
            validate_density(np.eye(2) / 2)

    def test_tolerates_roundoff(self):
        m = np.diag([1.0 + 1e-13, 0.0, -1e-13])
        validate_density(m)


class TestSpectra:
    def test_complete_context_sums_to_identity(self, frame):
        total = sum(frame.projector(a) for a in ("S2", "f", "P2"))
        assert_allclose(eigenvalues(total), [1, 1, 1], atol=1e-14)

    def test_trace_distance_of_orthogonal_states(self):
        assert trace_distance(projector(basis(1)), projector(basis(2))) == pytest.approx(1.0)

    def test_trace_distance_to_mixed(self):
        d = trace_distance(projector(basis(1)), maximally_mixed())
        assert d == pytest.approx(2 / 3)

    def test_trace_distance_is_symmetric(self, rng):
        a, b = random_density(rng), random_density(rng, 1)
        assert trace_distance(a, b) == pytest.approx(trace_distance(b, a))
        assert 0 <= trace_distance(a, b) <= 1 + 1e-12

    def test_eigenvalues_ascending(self):
        values = eigenvalues(np.diag([0.7, 0.1, 0.2]))
        assert list(values) == sorted(values)
        assert math.isclose(values[0], 0.1)
