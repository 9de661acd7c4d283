import random
from fractions import Fraction as F
from functools import reduce

import pytest

import laminal as L
from laminal.corpus import random_models

from conftest import bp


@pytest.fixture(scope="module")
def ex1_parts():
    return {
        "T": bp("1,2,3,4,5,6,7", 7),
        "B1": bp("1,2,3,4,5,6|7", 7),
        "B2": bp("1,2,3,4,7|5,6", 7),
        "B3": bp("1,2,3,4|5,6,7", 7),
        "L": bp("1,2,3,4|5,6|7", 7),
        "A1": bp("1,2|3,4|5,6|7", 7),
        "A2": bp("1,3|2,4|5,6|7", 7),
        "C1": bp("1,3|2,4|5,6,7", 7),
        "C2": bp("1,3,5,6|2,4|7", 7),
    }


class TestIsAncillary:
    def test_a1_distribution(self, ex1, ex1_parts):
        assert L.is_ancillary(ex1, ex1_parts["A1"])
        assert L.ancillary_distribution(ex1, ex1_parts["A1"]) == \
            (F(1, 4), F(1, 4), F(3, 14), F(4, 14))

    def test_trivial_partition_is_always_ancillary(self, ex1, ex2, one_theta):
        for m in (ex1, ex2, one_theta):
            assert L.is_ancillary(m, L.Partition.one_block(m.n_samples))

    def test_singletons_of_example2_are_not(self, ex2):
        assert not L.is_ancillary(ex2, L.Partition.singletons(4))

    def test_ground_set_mismatch(self, ex2):
        with pytest.raises(L.GroundSetMismatch):
            L.is_ancillary(ex2, L.Partition.singletons(5))


class TestEnumerationOfAncillaries:
    def test_example1_set_matches_coarsening_oracle(self, ex1, ex1_parts):
        # Independent oracle: every ancillary refines to a maximal one, so
        # the full set is the union of the coarsenings of A1 and of A2.
        oracle = set(L.enumerate_partitions(7, coarser_than=ex1_parts["A1"]))
        oracle |= set(L.enumerate_partitions(7, coarser_than=ex1_parts["A2"]))
        got = set(L.ancillaries(ex1, within=L.mss_partition(ex1)))
        assert got == oracle
        assert len(got) == 25
        assert set(ex1_parts.values()) <= got

    def test_one_theta_everything_is_ancillary(self, one_theta):
        assert len(L.ancillaries(one_theta)) == 5  # Bell(3)

    def test_example2(self, ex2):
        got = set(L.ancillaries(ex2))
        assert bp("1,2|3,4", 4) in got
        assert bp("1,3|2,4", 4) in got
        assert got == {L.Partition.one_block(4), bp("1,2|3,4", 4), bp("1,3|2,4", 4)}


class TestMaximalMinimalLaminal:
    def test_example1_maximal(self, ex1, ex1_parts):
        assert set(L.maximal_ancillaries(ex1)) == {ex1_parts["A1"], ex1_parts["A2"]}

    def test_example1_minimal(self, ex1, ex1_parts):
        want = {ex1_parts[k] for k in ("T", "B1", "B2", "B3", "L")}
        assert set(L.minimal_ancillaries(ex1)) == want

    def test_example1_laminal(self, ex1, ex1_parts):
        assert L.laminal(ex1) == ex1_parts["L"]

    def test_example2(self, ex2):
        assert set(L.maximal_ancillaries(ex2)) == {bp("1,2|3,4", 4), bp("1,3|2,4", 4)}
        assert set(L.minimal_ancillaries(ex2)) == {L.Partition.one_block(4)}
        assert L.laminal(ex2) == L.Partition.one_block(4)

    def test_one_theta(self, one_theta):
        assert L.maximal_ancillaries(one_theta) == (L.Partition.singletons(3),)
        assert len(L.minimal_ancillaries(one_theta)) == 5
        assert L.laminal(one_theta) == L.Partition.singletons(3)

    def test_unique_maximal_model(self, unique_maximal):
        maxs = L.maximal_ancillaries(unique_maximal)
        assert maxs == (bp("1,2|3", 3),)
        assert L.laminal(unique_maximal) == maxs[0]

    def test_meet_of_minimals_is_the_laminal(self, ex1, ex2, one_theta):
        # The joint statistic of all minimal ancillaries is again minimal
        # and maximal among the minimals.
        models = [ex1, ex2, one_theta] + random_models(5, 20)
        for m in models:
            mins = L.minimal_ancillaries(m)
            joint = reduce(L.meet, mins)
            assert joint == L.laminal(m)
            assert joint in mins


class TestStability:
    def test_example1_classifications(self, ex1, ex1_parts):
        assert L.is_stable(ex1, ex1_parts["L"])
        assert L.is_strong(ex1, ex1_parts["L"])
        assert not L.is_stable(ex1, ex1_parts["C2"])
        assert not L.is_strong(ex1, ex1_parts["A1"])
        assert L.is_stable(ex1, ex1_parts["T"])
        assert L.is_strong(ex1, ex1_parts["T"])

    def test_requires_an_ancillary(self, ex2):
        with pytest.raises(L.NotAncillary):
            L.is_stable(ex2, L.Partition.singletons(4))
        with pytest.raises(L.NotAncillary):
            L.is_strong(ex2, L.Partition.singletons(4))

    def test_stable_iff_strong_iff_minimal_on_example1(self, ex1):
        minimal = set(L.minimal_ancillaries(ex1))
        for u in L.ancillaries(ex1):
            stable = L.is_stable(ex1, u)
            assert stable == L.is_strong(ex1, u)
            assert stable == (u in minimal)

    def test_point_mass_reduction_extends_to_random_weights(self, ex1):
        # Whenever u stays ancillary in every conditional given a block of v,
        # it stays ancillary in the mixture for any weights; spot-check with
        # seeded random rational weight vectors (zeros allowed).
        rng = random.Random(20260810)
        anc = L.ancillaries(ex1)
        checked = 0
        for u in anc:
            for v in anc:
                ok_all = all(
                    L.is_ancillary(
                        L.condition_on_event(ex1, block),
                        u.restrict(L.event_support(ex1, block)),
                    )
                    for block in v.blocks
                )
                if not ok_all:
                    continue
                checked += 1
                for _ in range(50):
                    draws = [rng.randint(0, 9) for _ in range(v.n_blocks)]
                    if not any(draws):
                        draws[0] = 1
                    total = sum(draws)
                    w = tuple(F(d, total) for d in draws)
                    mix = L.mixture_model(ex1, v, w)
                    kept = tuple(
                        j for j in range(7) if w[v.block_of(j)] > 0
                    )
                    assert L.is_ancillary(mix, u.restrict(kept)), (u, v, w)
        assert checked >= 100

    def test_exceptional_epsilon_has_extra_ancillary(self):
        # eps = 1/224 is the one value in (0, 1/64) where cross-pair blocks
        # like {3,6} and {4,5} become parameter-free, so the generic
        # classification does not apply there.
        odd = bp("1,2|3,6|4,5|7", 7)
        assert L.is_ancillary(L.example1_model(F(1, 224)), odd)
        assert not L.is_ancillary(L.example1_model(F(1, 100)), odd)
        cls = L.classify(L.example1_model(F(1, 224)))
        assert len(cls.maximal) > 2


class TestInstabilityWitness:
    def test_stable_statistics_have_no_witness(self, ex1, ex1_parts):
        assert L.instability_witness(ex1, ex1_parts["L"]) is None
        assert L.instability_witness(ex1, ex1_parts["T"]) is None

    def test_c2_witness_is_deterministic_and_valid(self, ex1, ex1_parts):
        w = L.instability_witness(ex1, ex1_parts["C2"])
        # first hit in enumeration order: a point mass on the first block of
        # {1,2,5,6,7}|{3,4}
        assert w.via == bp("1,2,5,6,7|3,4", 7)
        assert w.weights == (F(1), F(0))
        assert w.block == 0
        assert w.lr == (F(163, 350), F(249, 700))
        assert w.lr[0] != w.lr[1]

    def test_restricted_search_stays_in_the_lattice(self, ex1, ex1_parts):
        mss = L.mss_partition(ex1)
        w = L.instability_witness(ex1, ex1_parts["C2"], within=mss)
        assert w is not None
        assert L.is_coarsening(w.via, mss)
        assert L.instability_witness(ex1, ex1_parts["L"], within=mss) is None

    def test_every_witness_recomputes(self, ex1):
        stable = set(L.minimal_ancillaries(ex1))
        for u in L.ancillaries(ex1):
            if u in stable:
                continue
            w = L.instability_witness(ex1, u)
            mix = L.mixture_model(ex1, w.via, w.weights)
            kept = tuple(
                j for j in range(7) if w.weights[w.via.block_of(j)] > 0
            )
            pos = {e: i for i, e in enumerate(kept)}
            trace = [pos[e] for e in u.blocks[w.block] if e in pos]
            got = (mix.event_prob(w.thetas[0], trace),
                   mix.event_prob(w.thetas[1], trace))
            assert got == w.lr
            assert got[0] != got[1]


class TestEventsAndGamma0:
    def test_example1_events(self, ex1):
        events = set(L.ancillary_events(ex1))
        assert frozenset() in events and frozenset(range(7)) in events
        for e in (frozenset({6}), frozenset({4, 5}), frozenset({0, 1, 2, 3})):
            assert e in events
        # closed under union of the generators
        assert frozenset({4, 5, 6}) in events

    def test_example2_contains_the_half_event(self, ex2):
        assert frozenset({0, 1}) in set(L.ancillary_events(ex2))

    def test_gamma0_example1_is_the_laminal_algebra(self, ex1):
        g0 = L.gamma0(ex1)
        assert len(g0) == 8
        assert set(g0) == set(L.algebra_generated_by(bp("1,2,3,4|5,6|7", 7)))

    def test_gamma0_example2_is_trivial(self, ex2):
        assert set(L.gamma0(ex2)) == {frozenset(), frozenset(range(4))}

    def test_gamma0_one_theta_is_the_power_set(self, one_theta):
        assert len(L.gamma0(one_theta)) == 8

    def test_event_scan_cap(self):
        n = 21
        flat = L.build_model(("t",), tuple(str(i) for i in range(n)),
                             [[F(1, n)] * n])
        with pytest.raises(L.SizeCapExceeded):
            L.ancillary_events(flat)

    def test_enumeration_cap_propagates(self):
        n = 14
        total = n * (n + 1) // 2
        rows = [[F(i + 1, total) for i in range(n)],
                [F(n - i, total) for i in range(n)]]
        wide = L.build_model(("a", "b"), tuple(str(i) for i in range(n)), rows)
        with pytest.raises(L.SizeCapExceeded):
            L.ancillaries(wide)


class TestClassify:
    def test_example1(self, ex1, ex1_parts):
        cls = L.classify(ex1)
        assert set(cls.minimal) == {ex1_parts[k] for k in ("T", "B1", "B2", "B3", "L")}
        assert set(cls.maximal) == {ex1_parts["A1"], ex1_parts["A2"]}
        assert cls.laminal == ex1_parts["L"]
        assert cls.stable == cls.minimal
        assert not cls.restricted_to_mss
        within = L.classify(ex1, within=L.mss_partition(ex1))
        assert within.restricted_to_mss
        assert within.minimal == cls.minimal

    def test_example2(self, ex2):
        cls = L.classify(ex2)
        assert set(cls.maximal) == {bp("1,2|3,4", 4), bp("1,3|2,4", 4)}
        assert cls.laminal == L.Partition.one_block(4)
        assert cls.stable == (L.Partition.one_block(4),)
        assert set(cls.gamma0) == {frozenset(), frozenset(range(4))}

    def test_one_theta_two_points(self):
        m = L.build_model(("t",), ("1", "2"), [[F(1, 2), F(1, 2)]])
        cls = L.classify(m)
        assert len(cls.ancillaries) == 2
        assert cls.laminal == L.Partition.singletons(2)


class TestMle:
    def test_example2_values(self, ex2):
        assert L.mle(ex2, 0) == 0
        assert L.mle(ex2, 2) == 1
        assert [L.mle(ex2, x) for x in range(4)] == [0, 1, 1, 0]

    def test_tie_goes_to_the_lowest_index(self):
        m = L.build_model(("a", "b"), ("1", "2"),
                          [[F(1, 2), F(1, 2)], [F(1, 2), F(1, 2)]])
        assert L.mle(m, 0) == 0
        assert L.mle_ties(m, 0) == (0, 1)

    def test_one_theta(self, one_theta):
        assert L.mle(one_theta, 2) == 0


class TestConditionalMleTable:
    def test_example2_tables(self, ex2):
        a1 = bp("1,2|3,4", 4)
        a2 = bp("1,3|2,4", 4)
        assert L.conditional_mle_table(ex2, a1, 0) == \
            ((F(1, 2), F(1, 2)), (F(1, 4), F(3, 4)))
        assert L.conditional_mle_table(ex2, a2, 0) == \
            ((F(1, 3), F(2, 3)), (F(1, 6), F(5, 6)))

    def test_rows_sum_to_one(self, ex2):
        for a in (bp("1,2|3,4", 4), bp("1,3|2,4", 4)):
            for b in range(2):
                for row in L.conditional_mle_table(ex2, a, b):
                    assert sum(row) == 1

    def test_one_theta_trivial(self, one_theta):
        t = L.conditional_mle_table(one_theta, L.Partition.one_block(3), 0)
        assert t == ((F(1),),)

    def test_requires_ancillary(self, ex2):
        with pytest.raises(L.NotAncillary):
            L.conditional_mle_table(ex2, L.Partition.singletons(4), 0)
