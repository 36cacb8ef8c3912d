"""Tests for partitions, deterministic simulability and n-wise compatibility."""

import math

import numpy as np
import pytest

from src.jm import jm_feasible, jm_visibility
from src.measurements import depolarize, random_assemblage
from src.measurements.builders import PAULIS
from src.measurements.outcomes import outcome_tuples
from src.structures import (
    BlockOracle,
    BlockParent,
    ConvexDecomposition,
    DecompositionTerm,
    PartitionCollection,
    best_sim_det_partition,
    decomposition_to_json,
    enumerate_partitions,
    nwise_distance,
    nwise_feasible,
    nwise_visibility,
    pairwise_compatible,
    pairwise_visibility,
    restricted_growth_strings,
    sim_det_feasible,
    sim_det_visibility,
    verify_decomposition,
)
from src.utils.errors import InvalidInputError
from tests.conftest import NWISE_PAULI, SQRT2

SIGNS = {0: 1.0, 1: -1.0}


def pauli_pair_parent(block, weight, eta):
    """Weighted parent of two orthogonal noisy Pauli measurements, positive up to eta = 1/sqrt(2)."""
    x, y = block
    labels = tuple(outcome_tuples((2, 2)))
    effects = tuple(
        weight * (np.eye(2) + eta * (SIGNS[a] * PAULIS[x] + SIGNS[b] * PAULIS[y])) / 4 for a, b in labels
    )
    return BlockParent(block=block, outcome_labels=labels, effects=effects)


class TestPartitions:
    """Restricted growth string enumeration."""

    @pytest.mark.parametrize("m, n, expected", [(4, 2, 8), (3, 2, 4), (3, 3, 5), (4, 4, 15), (2, 1, 1)])
    def test_counts(self, m, n, expected):
        """Test partition counts."""
        assert len(enumerate_partitions(m, n)) == expected

    def test_order_is_stable(self):
        """Test enumeration order."""
        first = [p.blocks for p in enumerate_partitions(4, 2)]
        second = [p.blocks for p in enumerate_partitions(4, 2)]
        assert first == second
        assert first[0] == ((0, 1, 2, 3),)
        assert first[1] == ((0, 1, 2), (3,))
        assert first[-1] == ((0,), (1, 2, 3))

    def test_growth_strings(self):
        """Test growth strings."""
        assert list(restricted_growth_strings(3, 2)) == [(0, 0, 0), (0, 0, 1), (0, 1, 0), (0, 1, 1)]

    @pytest.mark.parametrize("m, n", [(2, 3), (3, 0)])
    def test_rejects_bad_sizes(self, m, n):
        """Test size validation."""
        with pytest.raises(InvalidInputError):
            enumerate_partitions(m, n)

    def test_partition_helpers(self):
        """Test partition helpers."""
        partition = PartitionCollection.from_growth_string((0, 1, 0, 2))
        assert partition.blocks == ((0, 2), (1,), (3,))
        assert partition.assignment() == [0, 1, 0, 2]
        assert partition.locate(2) == (0, 1)
        assert partition.one_based() == [[1, 3], [2], [4]]
        assert str(partition) == "[(1,3), (2), (4)]"

    def test_rejects_non_cover(self):
        """Test cover check."""
        with pytest.raises(ValueError):
            PartitionCollection(blocks=((0, 1), (1, 2)))


class TestDeterministic:
    """Deterministic n-simulability."""

    def test_xzh_pairing(self, xzh):
        """Test the best xzh pairing."""
        visibility, partition = best_sim_det_partition(xzh, 2)
        assert visibility.eta == pytest.approx(0.7654, abs=1e-3)
        # sigma_z or sigma_x alone, the other paired with H
        assert partition.blocks in (((0, 2), (1,)), ((0,), (1, 2)))

    def test_paulis(self, pauli_xyz):
        """Test the Paulis at n = 2."""
        assert sim_det_visibility(pauli_xyz, 2).eta == pytest.approx(1 / SQRT2, abs=1e-4)

    def test_n_equals_m_is_one(self, pauli_xyz):
        """Test n = m."""
        assert sim_det_visibility(pauli_xyz, 3).eta == 1.0

    def test_n_one_is_jm(self, pauli_xyz):
        """Test n = 1."""
        assert sim_det_visibility(pauli_xyz, 1).eta == pytest.approx(jm_visibility(pauli_xyz).eta, abs=1e-6)

    def test_feasible_returns_partition(self, pauli_xyz):
        """Test membership with a partition."""
        member, partition = sim_det_feasible(depolarize(pauli_xyz, 0.7), 2)
        assert member
        assert partition.block_count == 2
        member, partition = sim_det_feasible(depolarize(pauli_xyz, 0.72), 2)
        assert not member
        assert partition is None

    def test_oracle_caches(self, pauli_xyz, mocker):
        """Test block caching."""
        spy = mocker.spy(BlockOracle, "visibility")
        oracle = BlockOracle(pauli_xyz)
        first = oracle.visibility((0, 1))
        assert oracle.visibility((1, 0)) == first
        assert oracle.visibility((2,)) == 1.0
        assert spy.call_count == 3
        assert len(oracle._visibility) == 2

    def test_matches_single_partition_mixtures(self, xzh):
        """Test single-partition mixtures."""
        # one partition per mixture reduces n-wise compatibility to the deterministic case
        best = max(nwise_visibility(xzh, 2, partitions=[p]).eta for p in enumerate_partitions(3, 2))
        assert sim_det_visibility(xzh, 2).eta == pytest.approx(best, abs=1e-5)


class TestNwise:
    """n-wise compatibility (convex hull of deterministic simulability)."""

    def test_pauli_threshold(self, pauli_xyz):
        """Test the Pauli threshold."""
        assert nwise_visibility(pauli_xyz, 2).eta == pytest.approx(NWISE_PAULI, abs=1e-3)

    def test_flip(self, pauli_xyz):
        """Test membership around (sqrt(2) + 1)/3."""
        below = depolarize(pauli_xyz, 0.80)
        member, decomposition = nwise_feasible(below, 2)
        assert member
        assert verify_decomposition(below, decomposition) <= 1e-6
        member, decomposition = nwise_feasible(depolarize(pauli_xyz, 0.82), 2)
        assert not member
        assert decomposition is None

    def test_convex_hull_beats_deterministic(self, xzh):
        """Test mixtures against deterministic simulation."""
        assert nwise_visibility(xzh, 2).eta >= sim_det_visibility(xzh, 2).eta - 1e-6

    def test_distance_zero_inside(self, pauli_xyz):
        """Test the n-wise distance."""
        nu, _ = nwise_distance(depolarize(pauli_xyz, 0.75), 2)
        assert nu <= 1e-6
        nu, _ = nwise_distance(pauli_xyz, 2)
        assert nu > 1e-3

    def test_monotone_in_n(self, pauli_xyz):
        """Test that allowing more simulators never lowers the n-wise visibility."""
        values = [nwise_visibility(pauli_xyz, n).eta for n in (1, 2, 3)]
        assert values[0] == pytest.approx(1 / math.sqrt(3), abs=1e-4)
        assert values[2] == pytest.approx(1.0, abs=1e-6)
        assert all(a <= b + 1e-6 for a, b in zip(values, values[1:]))

    def test_deterministic_members_are_nwise(self):
        """Test that deterministically simulable assemblages are n-wise compatible."""
        for seed in range(5):
            assemblage = random_assemblage(2, 3, 2, seed=40 + seed)
            eta = sim_det_visibility(assemblage, 2).eta
            noisy = depolarize(assemblage, max(0.0, eta - 0.02))
            member, _ = sim_det_feasible(noisy, 2)
            assert member
            assert nwise_feasible(noisy, 2)[0]

    def test_single_block_partition_is_redundant(self, pauli_xyz):
        """Test that dropping the single-block partition leaves the visibility unchanged at m = 3."""
        pairings = [p for p in enumerate_partitions(3, 2) if p.block_count == 2]
        assert len(pairings) == 3
        for assemblage in (pauli_xyz, random_assemblage(2, 3, 2, seed=8)):
            full = nwise_visibility(assemblage, 2).eta
            assert nwise_visibility(assemblage, 2, partitions=pairings).eta == pytest.approx(full, abs=1e-6)

    def test_explicit_pauli_mixture(self, pauli_xyz):
        """Test the equal mixture over pairings that reaches (sqrt(2) + 1)/3 on the Paulis."""
        terms = []
        for partition in enumerate_partitions(3, 2):
            if partition.block_count != 2:
                continue
            parents = []
            for block in partition.blocks:
                if len(block) == 2:
                    parents.append(pauli_pair_parent(block, 1 / 3, 1 / SQRT2))
                else:
                    x = block[0]
                    effects = tuple(pauli_xyz.effect(x, a) / 3 for a in range(2))
                    parents.append(BlockParent(block=block, outcome_labels=((0,), (1,)), effects=effects))
            terms.append(DecompositionTerm(partition=partition, weight=1 / 3, parents=tuple(parents)))
        decomposition = ConvexDecomposition(terms=tuple(terms))
        assert verify_decomposition(depolarize(pauli_xyz, NWISE_PAULI), decomposition) <= 1e-12

    def test_single_jm_term(self, pauli_xyz):
        """Test that a full JM parent is a one-term decomposition."""
        noisy = depolarize(pauli_xyz, 0.5)
        member, parent = jm_feasible(noisy)
        assert member
        block = BlockParent(block=(0, 1, 2), outcome_labels=parent.outcome_labels, effects=parent.effects)
        term = DecompositionTerm(partition=PartitionCollection(blocks=((0, 1, 2),)), weight=1.0, parents=(block,))
        assert verify_decomposition(noisy, ConvexDecomposition(terms=(term,))) <= 1e-6

    def test_rejects_foreign_partition(self, pauli_xyz):
        """Test partition validation."""
        with pytest.raises(InvalidInputError):
            nwise_visibility(pauli_xyz, 2, partitions=[PartitionCollection(blocks=((0,), (1,), (2,)))])
        with pytest.raises(InvalidInputError):
            nwise_visibility(pauli_xyz, 2, partitions=[])

    def test_decomposition_json_is_one_based(self, pauli_xyz):
        """Test decomposition JSON."""
        _, decomposition = nwise_feasible(depolarize(pauli_xyz, 0.75), 2)
        data = decomposition_to_json(decomposition)
        assert len(data["terms"]) == 4
        assert data["terms"][0]["partition"] == [[1, 2, 3]]
        assert sum(term["weight"] for term in data["terms"]) == pytest.approx(1.0, abs=1e-6)

    def test_verify_flags_wrong_target(self, pauli_xyz):
        """Test verification against a wrong target."""
        _, decomposition = nwise_feasible(depolarize(pauli_xyz, 0.75), 2)
        assert verify_decomposition(pauli_xyz, decomposition) > 0.1


class TestPairwise:
    """Pairwise compatibility."""

    def test_pauli_pairs(self, pauli_xyz):
        """Test Pauli pairs."""
        assert pairwise_visibility(pauli_xyz).eta == pytest.approx(1 / SQRT2, abs=1e-4)

    def test_failing_pair(self, pauli_xyz):
        """Test the first failing pair."""
        assert pairwise_compatible(depolarize(pauli_xyz, 0.7)) == (True, None)
        assert pairwise_compatible(depolarize(pauli_xyz, 0.75)) == (False, (0, 1))

    def test_above_full_jm(self):
        """Test pairwise against full JM."""
        assemblage = random_assemblage(2, 3, 2, seed=17)
        assert pairwise_visibility(assemblage).eta >= jm_visibility(assemblage).eta - 1e-6

    def test_pairwise_not_sufficient(self, pauli_xyz):
        """Test that pairwise does not imply full JM."""
        # at 0.65 every pair is compatible while the triple is not
        noisy = depolarize(pauli_xyz, 0.65)
        assert pairwise_compatible(noisy)[0]
        assert jm_visibility(pauli_xyz).eta < 0.65 < 1 / math.sqrt(2)
