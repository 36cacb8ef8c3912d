"""Tests for standard joint measurability."""

import math

import numpy as np
import pytest

from src.jm import ParentPovm, jm_distance, jm_feasible, jm_visibility, noisy_xz_parent, verify_parent
from src.measurements import Assemblage, depolarize, permute_outcomes, random_assemblage
from src.measurements.outcomes import outcome_tuples
from src.utils.errors import InconclusiveError, InvalidInputError
from tests.conftest import SQRT2


class TestJmVisibility:
    """Critical visibilities."""

    def test_sigma_x_sigma_z(self, pauli_xz):
        """Test sigma_x and sigma_z."""
        assert jm_visibility(pauli_xz).eta == pytest.approx(1 / SQRT2, abs=1e-4)

    def test_three_paulis(self, pauli_xyz):
        """Test the three Paulis."""
        assert jm_visibility(pauli_xyz).eta == pytest.approx(1 / math.sqrt(3), abs=1e-4)

    def test_subset_of_builtin(self, xzh):
        """Test a subset of a builtin."""
        # settings 0 and 1 of xzh are sigma_x and sigma_z
        assert jm_visibility(xzh, [0, 1]).eta == pytest.approx(1 / SQRT2, abs=1e-4)

    def test_single_setting_is_one(self, xzh):
        """Test a single setting."""
        assert jm_visibility(xzh, [2]).eta == 1.0

    def test_repeated_measurement_is_one(self, pauli_xz):
        """Test a repeated measurement."""
        same = Assemblage(measurements=(pauli_xz.measurements[1],) * 2)
        assert jm_visibility(same).eta == pytest.approx(1.0, abs=1e-6)

    def test_outcome_relabeling_invariant(self, pauli_xyz):
        """Test invariance under outcome relabeling."""
        relabeled = permute_outcomes(pauli_xyz, [[1, 0], [0, 1], [1, 0]])
        assert jm_visibility(relabeled).eta == pytest.approx(jm_visibility(pauli_xyz).eta, abs=1e-5)

    def test_subsets_never_lower_visibility(self):
        """Test that dropping settings never lowers the critical visibility."""
        assemblage = random_assemblage(2, 3, 2, seed=21)
        full = jm_visibility(assemblage).eta
        for subset in ([0, 1], [0, 2], [1, 2]):
            assert jm_visibility(assemblage, subset).eta >= full - 1e-6

    def test_heavy_noise_is_jm(self):
        """Test that a random qubit assemblage at visibility 0.1 is jointly measurable."""
        assemblage = random_assemblage(2, 3, 2, seed=1)
        assert jm_visibility(assemblage).eta >= 0.1
        member, _ = jm_feasible(depolarize(assemblage, 0.1))
        assert member

    def test_bad_subset(self, pauli_xz):
        """Test an out-of-range subset."""
        with pytest.raises(InvalidInputError):
            jm_visibility(pauli_xz, [0, 5])

    def test_inconclusive_propagates(self, pauli_xz, mocker):
        """Test that solver trouble is raised."""
        mocker.patch("src.jm.parent.require_optimal", side_effect=InconclusiveError("stalled", status="Inaccurate"))
        with pytest.raises(InconclusiveError):
            jm_visibility(pauli_xz)


class TestJmFeasible:
    """Membership decisions and parent witnesses."""

    def test_flip_around_threshold(self, pauli_xz):
        """Test membership just below and above 1/sqrt(2)."""
        member, parent = jm_feasible(depolarize(pauli_xz, 0.70))
        assert member
        assert verify_parent(depolarize(pauli_xz, 0.70), None, parent) <= 1e-6
        member, parent = jm_feasible(depolarize(pauli_xz, 0.72))
        assert not member
        assert parent is None

    def test_distance_positive_outside(self, pauli_xz):
        """Test the JM distance."""
        assert jm_distance(pauli_xz) > 1e-3
        assert jm_distance(depolarize(pauli_xz, 0.5)) <= 1e-6

    def test_noise_monotone(self):
        """Test membership below the critical visibility."""
        assemblage = random_assemblage(2, 3, 2, seed=3)
        eta = jm_visibility(assemblage).eta
        below, _ = jm_feasible(depolarize(assemblage, max(0.0, eta - 0.02)))
        assert below

    def test_commuting_projectors(self):
        """Test that commuting projective measurements are JM with the product parent."""
        halves = [np.diag([1.0, 1.0, 0.0, 0.0]).astype(complex), np.diag([0.0, 0.0, 1.0, 1.0]).astype(complex)]
        parity = [np.diag([1.0, 0.0, 1.0, 0.0]).astype(complex), np.diag([0.0, 1.0, 0.0, 1.0]).astype(complex)]
        assemblage = Assemblage.from_arrays([halves, parity])
        labels = tuple(outcome_tuples((2, 2)))
        parent = ParentPovm(outcome_labels=labels, effects=tuple(halves[a] @ parity[b] for a, b in labels))
        assert verify_parent(assemblage, None, parent) <= 1e-15
        member, _ = jm_feasible(assemblage)
        assert member
        assert jm_visibility(assemblage).eta == pytest.approx(1.0, abs=1e-6)

    def test_parent_for_subset(self, xzh):
        """Test a parent on a subset."""
        noisy = depolarize(xzh, 0.6)
        member, parent = jm_feasible(noisy, [0, 2])
        assert member
        assert all(len(label) == 2 for label in parent.outcome_labels)
        assert verify_parent(noisy, [0, 2], parent) <= 1e-6


class TestExplicitParent:
    """Closed-form parent for noisy sigma_x and sigma_z."""

    def test_reproduces_noisy_pair(self, pauli_xz):
        """Test the closed-form parent at 1/sqrt(2)."""
        eta = 1 / SQRT2
        assert verify_parent(depolarize(pauli_xz, eta), None, noisy_xz_parent(eta)) <= 1e-12

    def test_not_positive_beyond_threshold(self):
        """Test that the closed form fails above 1/sqrt(2)."""
        with pytest.raises(ValueError):
            noisy_xz_parent(0.8)

    def test_parent_validation(self):
        """Test parent validation."""
        with pytest.raises(ValueError):
            ParentPovm(outcome_labels=((0,), (1,)), effects=(np.eye(2), np.eye(2)))

    def test_verify_rejects_wrong_labels(self, pauli_xyz):
        """Test verify_parent label checks."""
        with pytest.raises(InvalidInputError):
            verify_parent(pauli_xyz, None, noisy_xz_parent(0.5))

    def test_to_json(self):
        """Test parent JSON."""
        data = noisy_xz_parent(0.5).to_json()
        assert data["outcome_labels"][1] == [0, 1]
        assert len(data["effects"]) == 4
