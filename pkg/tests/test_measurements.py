"""Tests for measurement value types, constructors and noise."""

import numpy as np
import pytest

from src.measurements import (
    Assemblage,
    HermitianOp,
    Measurement,
    Visibility,
    assemblage_distance,
    assemblage_from_json,
    assemblage_norm,
    assemblage_to_json,
    builtin_assemblage,
    depolarize,
    make_pauli_assemblage,
    measurements_from_steering,
    permute_outcomes,
    random_assemblage,
    restrict,
    steering_assemblage,
)
from src.measurements.builders import PAULI_X, PAULI_Y, PAULI_Z
from src.measurements.outcomes import label_key, marginal_groups, outcome_tuples
from src.utils.errors import InvalidInputError

# sigma_z eigenprojectors in the [re, im] pair format
SIGMA_Z_JSON = [[[[1, 0], [0, 0]], [[0, 0], [0, 0]]], [[[0, 0], [0, 0]], [[0, 0], [1, 0]]]]


class TestValueTypes:
    """Invariants enforced at construction."""

    def test_hermitian_op_rejects_non_hermitian(self):
        """Test Hermiticity check."""
        with pytest.raises(InvalidInputError):
            HermitianOp.from_array(np.array([[0, 1], [0, 0]]))

    def test_hermitian_op_is_read_only(self):
        """Test that operators are immutable."""
        op = HermitianOp.from_array(np.eye(2))
        with pytest.raises(ValueError):
            op.matrix[0, 0] = 5

    def test_measurement_requires_completeness(self):
        """Test completeness check."""
        with pytest.raises(InvalidInputError):
            Measurement.from_arrays([np.eye(2) / 2, np.eye(2) / 4])

    def test_measurement_requires_psd(self):
        """Test positivity check."""
        with pytest.raises(InvalidInputError):
            Measurement.from_arrays([np.diag([1.5, 0.5]), np.diag([-0.5, 0.5])])

    def test_assemblage_rejects_mixed_dimensions(self):
        """Test dimension consistency."""
        with pytest.raises(InvalidInputError):
            Assemblage.from_arrays([[np.eye(2)], [np.eye(3)]])

    def test_assemblage_shape(self, xzh):
        """Test assemblage shape."""
        assert xzh.dim == 2
        assert xzh.settings == 3
        assert xzh.outcome_counts == (2, 2, 2)

    def test_visibility_bounds(self):
        """Test visibility range and clipping."""
        with pytest.raises(ValueError):
            Visibility(eta=1.5)
        assert Visibility.clipped(1.0000001).eta == 1.0
        assert Visibility.clipped(-1e-9).eta == 0.0
        assert float(Visibility(eta=0.25)) == 0.25


class TestBuilders:
    """Named, projective and random assemblages."""

    def test_builtin_orderings(self, pauli_xyz, xzh):
        """Test builtin setting order."""
        assert np.allclose(pauli_xyz.effect(0, 0), (np.eye(2) + PAULI_X) / 2)
        assert np.allclose(pauli_xyz.effect(2, 1), (np.eye(2) - PAULI_Z) / 2)
        hadamard = (PAULI_X + PAULI_Z) / np.sqrt(2)
        assert np.allclose(xzh.effect(2, 0), (np.eye(2) + hadamard) / 2)

    def test_unknown_builtin(self):
        """Test unknown builtin names."""
        with pytest.raises(InvalidInputError):
            builtin_assemblage("pauli-abc")

    def test_axis_must_be_unit(self):
        """Test axis normalisation check."""
        with pytest.raises(InvalidInputError):
            make_pauli_assemblage([(1.0, 1.0, 0.0)])

    def test_random_assemblage_is_seeded(self):
        """Test seeded random assemblages."""
        first = random_assemblage(2, 3, 2, seed=11)
        second = random_assemblage(2, 3, 2, seed=11)
        assert all(np.allclose(a, b) for ra, rb in zip(first.arrays(), second.arrays()) for a, b in zip(ra, rb))
        assert first.outcome_counts == (2, 2, 2)

    def test_restrict_keeps_order(self, xzh):
        """Test restrict ordering."""
        sub = restrict(xzh, [2, 0])
        assert np.allclose(sub.effect(0, 0), xzh.effect(2, 0))
        assert np.allclose(sub.effect(1, 0), xzh.effect(0, 0))

    @pytest.mark.parametrize("subset", [[], [0, 0], [3]])
    def test_restrict_rejects_bad_subsets(self, xzh, subset):
        """Test restrict validation."""
        with pytest.raises(InvalidInputError):
            restrict(xzh, subset)

    def test_permute_outcomes(self, pauli_xz):
        """Test outcome relabeling."""
        flipped = permute_outcomes(pauli_xz, [[1, 0], [0, 1]])
        assert np.allclose(flipped.effect(0, 0), pauli_xz.effect(0, 1))
        with pytest.raises(InvalidInputError):
            permute_outcomes(pauli_xz, [[0, 0], [0, 1]])


class TestNoise:
    """Depolarizing noise and the assemblage norm."""

    def test_depolarize_extremes(self, pauli_xyz):
        """Test eta = 1 and eta = 0."""
        assert assemblage_distance(depolarize(pauli_xyz, 1.0), pauli_xyz) < 1e-12
        trivial = depolarize(pauli_xyz, 0.0)
        for row in trivial.arrays():
            for effect in row:
                assert np.allclose(effect, np.eye(2) / 2)

    def test_depolarize_keeps_povm(self):
        """Test that noise keeps a POVM."""
        noisy = depolarize(random_assemblage(3, 2, 3, seed=5), 0.4)
        for row in noisy.arrays():
            assert np.allclose(sum(row), np.eye(3))

    def test_depolarize_rejects_out_of_range(self, pauli_xz):
        """Test visibility validation in depolarize."""
        with pytest.raises(ValueError):
            depolarize(pauli_xz, 1.2)

    def test_norm_of_pauli_assemblage(self, pauli_xyz):
        """Test the norm of the Paulis."""
        # every projector has operator norm 1
        assert assemblage_norm(pauli_xyz) == pytest.approx(6.0)

    def test_distance_shape_mismatch(self, pauli_xz, pauli_xyz):
        """Test distance shape check."""
        with pytest.raises(InvalidInputError):
            assemblage_distance(pauli_xz, pauli_xyz)

    def test_distance_under_noise(self, pauli_xz):
        """Test the distance to a noisy copy."""
        # M^eta - M = (1 - eta)(Tr[M] 1/d - M), with norm (1 - eta)/2 per effect
        assert assemblage_distance(depolarize(pauli_xz, 0.5), pauli_xz) == pytest.approx(4 * 0.25)

    def test_depolarize_composes(self, xzh):
        """Test that two rounds of noise multiply their visibilities."""
        twice = depolarize(depolarize(xzh, 0.8), 0.5)
        assert assemblage_distance(twice, depolarize(xzh, 0.4)) < 1e-12

    def test_norm_axioms(self):
        """Test zero, homogeneity and the triangle inequality of the assemblage norm."""
        first, second, third = (random_assemblage(3, 2, 3, seed=s) for s in (1, 2, 3))
        assert assemblage_norm([[np.zeros((3, 3))] * 3] * 2) == 0.0
        scaled = [[-2.5 * e for e in row] for row in first.arrays()]
        assert assemblage_norm(scaled) == pytest.approx(2.5 * assemblage_norm(first))
        detour = assemblage_distance(first, second) + assemblage_distance(second, third)
        assert assemblage_distance(first, third) <= detour + 1e-12


class TestSteering:
    """Maximally entangled steering map and its inverse."""

    def test_no_signaling(self, xzh):
        """Test the reduced state of the steering assemblage."""
        states = steering_assemblage(xzh)
        assert np.allclose(states.reduced_state(), np.eye(2) / 2)

    def test_inverse(self, xzh):
        """Test the inverse steering map."""
        recovered = measurements_from_steering(steering_assemblage(xzh))
        assert assemblage_distance(recovered, xzh) < 1e-12

    def test_states_are_transposed(self, pauli_xyz):
        """Test that the +1 effect of sigma_y steers to (1 - sigma_y)/4."""
        state = steering_assemblage(pauli_xyz).states[1][0].matrix
        assert np.allclose(state, (np.eye(2) - PAULI_Y) / 4)


class TestOutcomesAndCodec:
    """Outcome labels and the JSON format."""

    def test_outcome_tuples_lexicographic(self):
        """Test outcome tuple order."""
        assert outcome_tuples((2, 3))[:4] == [(0, 0), (0, 1), (0, 2), (1, 0)]
        assert len(outcome_tuples((2, 2, 2))) == 8

    def test_marginal_groups(self):
        """Test marginal groups."""
        groups = marginal_groups((2, 2))
        assert groups[(0, 1)] == [2, 3]
        assert groups[(1, 0)] == [0, 2]

    def test_label_key(self):
        """Test label keys."""
        assert label_key("G", (0, 1, 1)) == "G[0,1,1]"

    def test_json_round_trip(self, xzh):
        """Test assemblage JSON."""
        data = assemblage_to_json(xzh)
        assert data["d"] == 2
        assert assemblage_distance(assemblage_from_json(data), xzh) < 1e-15

    def test_json_rejects_bad_operator(self):
        """Test a malformed operator."""
        with pytest.raises(InvalidInputError):
            assemblage_from_json({"measurements": [[[[1, 0], [0, 0]]]]})

    def test_json_rejects_wrong_dimension(self, pauli_xz):
        """Test a wrong declared dimension."""
        data = assemblage_to_json(pauli_xz)
        data["d"] = 3
        with pytest.raises(InvalidInputError):
            assemblage_from_json(data)

    @pytest.mark.parametrize(
        "data",
        [
            {"measurements": 5},
            {"measurements": [7]},
            {"d": "two", "measurements": [SIGMA_Z_JSON]},
        ],
    )
    def test_json_rejects_malformed_structure(self, data):
        """Test that structurally broken assemblage JSON is an input error."""
        with pytest.raises(InvalidInputError):
            assemblage_from_json(data)
