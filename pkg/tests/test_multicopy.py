"""Tests for n-copy joint measurability and cloning bounds."""

from fractions import Fraction

import numpy as np
import pytest

from src.jm import jm_feasible, jm_visibility
from src.measurements import depolarize, random_assemblage
from src.multicopy import (
    MultiCopyParent,
    check_dimension,
    clone_bound,
    clone_bound_fraction,
    gell_mann_basis,
    jm_clone_bound,
    monomial_pairings,
    ncopy_feasible,
    ncopy_visibility,
    ncopy_visibility_with_parent,
    parent_to_json,
    product_parent,
    symmetrize_parent,
    verify_multicopy_statistics,
)
from src.utils.errors import DimensionGuardError, InvalidInputError
from tests.conftest import NCOPY_PAULI, SQRT2


class TestBasis:
    """Gell-Mann bases and monomial pairings."""

    @pytest.mark.parametrize("d", [2, 3, 4])
    def test_orthogonality(self, d):
        """Test Gell-Mann orthogonality."""
        basis = gell_mann_basis(d)
        assert len(basis.elements) == d * d - 1
        gram = np.array([[np.trace(a @ b) for b in basis.elements] for a in basis.elements])
        assert np.allclose(gram, 2 * np.eye(d * d - 1))

    def test_rejects_non_orthogonal(self):
        """Test basis validation."""
        with pytest.raises(ValueError):
            type(gell_mann_basis(2))(dim=2, elements=(np.diag([1, -1]),) * 3)

    def test_pairing_count(self):
        """Test the number of monomial pairings."""
        # multisets of size <= 2 drawn from 3 basis elements
        pairings = monomial_pairings(2, 2)
        assert len(pairings) == 1 + 3 + 6
        assert pairings[0][0] == ()
        assert np.allclose(pairings[0][1], np.eye(4))

    def test_pairings_cached_and_read_only(self):
        """Test pairing caching."""
        assert monomial_pairings(2, 2) is monomial_pairings(2, 2)
        with pytest.raises(ValueError):
            monomial_pairings(2, 2)[1][1][0, 0] = 3.0


class TestNcopy:
    """n-copy visibilities and witnesses."""

    def test_guard(self):
        """Test the dimension guard."""
        with pytest.raises(DimensionGuardError):
            check_dimension(2, 5)
        with pytest.raises(InvalidInputError):
            check_dimension(2, 0)
        check_dimension(2, 4)

    def test_guard_stops_solve(self, pauli_xyz):
        """Test that the guard runs before any solve."""
        with pytest.raises(DimensionGuardError):
            ncopy_visibility(pauli_xyz, 3, max_dim=4)

    def test_single_copy_is_jm(self, pauli_xz):
        """Test n = 1."""
        assert ncopy_visibility(pauli_xz, 1).eta == pytest.approx(1 / SQRT2, abs=1e-4)

    def test_paulis_two_copies(self, pauli_xyz):
        """Test the Paulis with two copies."""
        visibility, parent = ncopy_visibility_with_parent(pauli_xyz, 2)
        assert visibility.eta == pytest.approx(NCOPY_PAULI, abs=1e-3)
        noisy = depolarize(pauli_xyz, visibility.eta)
        assert verify_multicopy_statistics(noisy, parent, trials=50, seed=1) <= 1e-6

    def test_flip(self, pauli_xyz):
        """Test membership around sqrt(3)/2."""
        below = depolarize(pauli_xyz, 0.86)
        member, parent = ncopy_feasible(below, 2)
        assert member
        assert parent.n_copies == 2
        assert verify_multicopy_statistics(below, parent, trials=20, seed=2) <= 1e-6
        member, parent = ncopy_feasible(depolarize(pauli_xyz, 0.88), 2)
        assert not member
        assert parent is None

    def test_copies_equal_settings_is_one(self, pauli_xz):
        """Test n = m."""
        assert ncopy_visibility(pauli_xz, 2).eta == pytest.approx(1.0, abs=1e-6)

    def test_monotone_in_copies(self, pauli_xyz):
        """Test that more copies never lower the n-copy visibility."""
        values = [ncopy_visibility(pauli_xyz, n).eta for n in (1, 2, 3)]
        assert values[0] == pytest.approx(1 / np.sqrt(3), abs=1e-4)
        assert values[2] == pytest.approx(1.0, abs=1e-6)
        assert all(a <= b + 1e-6 for a, b in zip(values, values[1:]))

    def test_above_jm(self):
        """Test that two copies beat one."""
        assemblage = random_assemblage(2, 3, 2, seed=9)
        assert ncopy_visibility(assemblage, 2).eta >= jm_visibility(assemblage).eta - 1e-6

    def test_single_copy_membership_matches_jm(self):
        """Test single-copy membership against JM."""
        for seed in range(25):
            assemblage = random_assemblage(2, 3, 2, seed=seed)
            assert ncopy_feasible(assemblage, 1)[0] == jm_feasible(assemblage)[0]


class TestParents:
    """Explicit parents and their statistics."""

    def test_product_parent(self, xzh):
        """Test the product parent."""
        parent = product_parent(xzh)
        assert parent.n_copies == 3
        assert len(parent.effects) == 8
        assert verify_multicopy_statistics(xzh, parent, trials=20, seed=3) <= 1e-12

    def test_symmetrize_keeps_statistics(self, pauli_xz):
        """Test symmetrisation."""
        parent = symmetrize_parent(product_parent(pauli_xz))
        assert verify_multicopy_statistics(pauli_xz, parent, trials=20, seed=4) <= 1e-12
        swap = parent.effects[1].reshape(2, 2, 2, 2).transpose(1, 0, 3, 2).reshape(4, 4)
        assert np.allclose(swap, parent.effects[1])

    def test_verify_detects_wrong_target(self, pauli_xz):
        """Test verification against a wrong target."""
        parent = product_parent(pauli_xz)
        assert verify_multicopy_statistics(depolarize(pauli_xz, 0.5), parent, trials=20, seed=5) > 0.01

    def test_verify_detects_perturbed_parent(self, pauli_xz):
        """Test that mixing white noise into a correct parent shows up in the statistics."""
        parent = product_parent(pauli_xz)
        perturbed = MultiCopyParent(
            n_copies=2,
            dim=2,
            outcome_labels=parent.outcome_labels,
            effects=tuple(0.8 * e + 0.05 * np.eye(4) for e in parent.effects),
        )
        assert verify_multicopy_statistics(pauli_xz, perturbed, trials=20, seed=6) > 1e-3

    def test_verify_rejects_dimension(self, pauli_xz):
        """Test verification dimension check."""
        parent = product_parent(random_assemblage(3, 2, 2, seed=0))
        with pytest.raises(InvalidInputError):
            verify_multicopy_statistics(pauli_xz, parent)

    def test_parent_validation(self):
        """Test parent validation."""
        with pytest.raises(ValueError):
            MultiCopyParent(n_copies=2, dim=2, outcome_labels=((0,),), effects=(np.eye(2),))

    def test_json(self, pauli_xz):
        """Test parent JSON."""
        data = parent_to_json(product_parent(pauli_xz))
        assert data["n_copies"] == 2
        assert data["outcome_labels"][2] == [1, 0]
        assert len(data["effects"][0]) == 4


class TestCloningBounds:
    """Universal bounds from asymmetric cloning."""

    def test_exact_values(self):
        """Test exact cloning bounds."""
        assert clone_bound_fraction(2, 3, 2) == Fraction(5, 6)
        assert clone_bound_fraction(2, 3, 1) == Fraction(5, 9)
        assert jm_clone_bound(2, 2).eta == pytest.approx(2 / 3)
        assert clone_bound(2, 3, 3).eta == 1.0

    @pytest.mark.parametrize("d, m, n", [(1, 3, 2), (2, 3, 4), (2, 3, 0)])
    def test_rejects(self, d, m, n):
        """Test cloning bound validation."""
        with pytest.raises(InvalidInputError):
            clone_bound_fraction(d, m, n)

    def test_below_ncopy_threshold(self, pauli_xyz):
        """Test the bound on the Paulis."""
        assert clone_bound(2, 3, 2).eta <= ncopy_visibility(pauli_xyz, 2).eta + 1e-4

    def test_below_ncopy_on_random_assemblages(self):
        """Test the bound on random assemblages."""
        bound = clone_bound(2, 3, 2).eta
        for seed in range(25):
            assemblage = random_assemblage(2, 3, 2, seed=100 + seed)
            assert bound <= ncopy_visibility(assemblage, 2).eta + 1e-4
