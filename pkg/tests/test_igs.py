import random

import pytest

from xnfkit.gf2 import LinSystem, Lineral
from xnfkit.igs import (
    Igs,
    _reach,
    _span_intersection,
    cr_ggcp,
    descendants,
    ggcp,
    preprocess,
    scc_condense,
    tfls,
    trivial_igs,
)
from xnfkit.oracle import enumerate_models
from xnfkit.solver import SolveStats
from xnfkit.generate import GenSpec, gen_random
from xnfkit.xnf import XnfFormula, parse_xnf

from helpers import RUNNING_EXAMPLE_XNF, eval_lineral, lin, span_encs


def running_example():
    return parse_xnf(RUNNING_EXAMPLE_XNF)


def igs_of_running_example():
    return trivial_igs(running_example())


class TestTrivialIgs:
    def test_running_example_shape(self):
        igs = igs_of_running_example()
        # the worked example's figure: 16 vertex labels, 7 edge pairs
        assert igs.lin.dim == 0
        assert igs.vertex_count() == 16
        assert igs.edge_count() == 14
        igs.check_invariants()
        expected_edges = {
            (lin(1).enc, lin(2).enc),
            (lin(2).enc, lin(1, 3).enc),
            (lin(2).enc, lin(4).enc),
            (lin(2, 5).enc, lin(1, 3).enc),
            (lin(1, 3).enc, lin(1, 2, 3, c=1).enc),
            (lin(4).enc, lin(3).enc),
            (lin(5).enc, lin(4).enc),
        }
        mirrored = {(v ^ 1, u ^ 1) for u, v in expected_edges}
        assert set(igs.edges()) == expected_edges | mirrored

    def test_unit_clauses_feed_linear_system(self):
        f = parse_xnf("p xnf 3 3\n1 0\n-2+3 0\n2 0\n")
        igs = trivial_igs(f)
        assert igs.vertex_count() == 0 and igs.edge_count() == 0
        # clause lineral l contributes the polynomial l+1
        assert span_encs(igs.lin.rows()) == span_encs(
            [lin(1, c=1), lin(2, 3), lin(2, c=1)]
        )

    def test_extended_single_clause(self):
        # clause with product x1*x2: (-X1 v -X2)
        f = XnfFormula(2, [(lin(1, c=1), lin(2, c=1))])
        igs = trivial_igs(f, extended=True)
        assert igs.vertex_count() == 6
        assert igs.edge_count() == 6
        assert lin(1, 2).enc in igs.succ  # the f+g vertex
        igs.check_invariants()

    def test_empty_clause_is_inconsistent(self):
        igs = trivial_igs(XnfFormula(2, [()]))
        assert igs.lin.inconsistent

    def test_wide_clause_rejected(self):
        f = parse_xnf("p xnf 3 1\n1 2 3 0\n")
        with pytest.raises(ValueError):
            trivial_igs(f)


class TestGgcp:
    def test_paper_relabeling_round(self):
        igs = igs_of_running_example()
        igs.lin.insert(lin(1, 2))
        ggcp(igs)
        assert igs.lin.rows() == [lin(1, 2)]
        assert igs.is_sigma_reduced()
        labels = set(igs.succ)
        assert lin(2, 3).enc in labels  # x1+x3 relabeled to x2+x3
        assert lin(1, 3).enc not in labels
        assert igs.vertex_count() == 12
        igs.check_invariants()

    def test_fixed_point_identity(self):
        igs = igs_of_running_example()
        ggcp(igs)
        before = (igs.lin.row_encs(), {u: set(v) for u, v in igs.succ.items()})
        ggcp(igs)
        assert (igs.lin.row_encs(), igs.succ) == before

    def test_source_forced_to_zero_learns_target(self):
        # edge (x1, x2) with L containing x1: source reduces to 0, learn x2
        igs = Igs(2)
        igs.add_edge_pair(lin(1).enc, lin(2).enc)
        igs.lin.insert(lin(1))
        ggcp(igs)
        assert igs.lin.contains(lin(2))
        assert igs.edge_count() == 0

    def test_target_forced_to_one_learns_negated_source(self):
        # edge (x1, x2) with L containing x2+1: target becomes 1, learn x1+1
        igs = Igs(2)
        igs.add_edge_pair(lin(1).enc, lin(2).enc)
        igs.lin.insert(lin(2, c=1))
        ggcp(igs)
        assert igs.lin.contains(lin(1, c=1))

    def test_complementary_pair_learned_as_linear(self):
        # edge (f, f+1) encodes the product (f+1)(f+1) = f+1
        igs = Igs(2)
        igs.add_edge_pair(lin(1, 2).enc, lin(1, 2, c=1).enc)
        ggcp(igs)
        assert igs.lin.contains(lin(1, 2, c=1))


class TestSccCondense:
    def test_running_example_cycles(self):
        igs = igs_of_running_example()
        igs.lin.insert(lin(1, 2))
        ggcp(igs)
        igs.lin.insert(lin(2, c=1))
        ggcp(igs)
        assert igs.lin.rows() == [lin(1, c=1), lin(2, c=1)]
        comps, learned, odd = scc_condense(igs)
        assert not odd
        assert sorted(len(c) for c in comps) == [3, 3]
        assert span_encs(learned) == span_encs([lin(3, 5), lin(4, 5)])

    def test_acyclic_graph_nothing_learned(self):
        igs = igs_of_running_example()
        comps, learned, odd = scc_condense(igs)
        assert learned == [] and not odd
        assert all(len(c) == 1 for c in comps)
        assert len(comps) % 2 == 0  # skew pairing keeps the count even

    def test_self_complementary_cycle_surfaces_inconsistency(self):
        # f <-> not f: clauses (X1 v X1) and (-X1 v -X1)
        f = parse_xnf("p xnf 1 2\n1 1 0\n-1 -1 0\n")
        igs = trivial_igs(f)
        comps, learned, odd = scc_condense(igs)
        got_one = LinSystem(learned).inconsistent
        assert odd or got_one
        cr = cr_ggcp(trivial_igs(f))
        assert cr.lin.inconsistent
        assert enumerate_models(f) == []


class TestCrGgcp:
    def test_running_example_collapse(self):
        igs = igs_of_running_example()
        igs.lin.insert(lin(1, 2))
        igs.lin.insert(lin(2, c=1))
        cr_ggcp(igs)
        assert igs.lin.rows() == [lin(1, c=1), lin(2, c=1), lin(3, 5), lin(4, 5)]
        assert igs.edge_count() == 0

    def test_acyclic_input_identity(self):
        igs = igs_of_running_example()
        ggcp(igs)
        before = {u: set(v) for u, v in igs.succ.items()}
        cr_ggcp(igs)
        assert igs.succ == before

    def test_output_acyclic_random(self):
        for seed in range(30):
            f, _ = gen_random(GenSpec(n=6, m=10, seed=seed))
            igs = trivial_igs(f)
            cr_ggcp(igs)
            assert igs.is_acyclic()
            assert igs.is_sigma_reduced()
            igs.check_invariants()


class TestTfls:
    def test_running_example_failed_lineral(self):
        igs = igs_of_running_example()
        igs.lin.insert(lin(1, 2))
        ggcp(igs)
        assert tfls(igs) == [lin(2)]

    def test_edgeless_graph(self):
        assert tfls(Igs(3)) == []

    def test_fork_to_complementary_pair(self):
        igs = Igs(3)
        f, g = lin(1), lin(2)
        igs.add_edge_pair(f.enc, g.enc)
        igs.add_edge_pair(f.enc, g.enc ^ 1)
        assert tfls(igs) == [f]

    def test_cyclic_input_rejected(self):
        igs = Igs(2)
        igs.add_edge_pair(lin(1).enc, lin(2).enc)
        igs.add_edge_pair(lin(2).enc, lin(1).enc)
        with pytest.raises(ValueError):
            tfls(igs)

    def test_matches_brute_force_on_random_graphs(self):
        rng = random.Random(31)
        rounds = 0
        while rounds < 25:
            f, _ = gen_random(GenSpec(n=7, m=rng.randrange(6, 14), seed=rng.random()))
            igs = trivial_igs(f)
            cr_ggcp(igs)
            if not igs.succ:
                continue
            rounds += 1
            got = {l.enc for l in tfls(igs)}
            want = set()
            for v in igs.succ:
                down = _reach(igs.succ, v)
                if any((g ^ 1) in down for g in down):
                    want.add(v)
            assert got == want


class TestPreprocess:
    def test_running_example_full_collapse(self):
        igs = igs_of_running_example()
        preprocess(igs)
        assert igs.lin.rows() == [lin(1, c=1), lin(2, c=1), lin(3, 5), lin(4, 5)]
        assert igs.edge_count() == 0

    def test_intersection_contains_paper_lineral(self):
        igs = igs_of_running_example()
        d2 = _reach(igs.succ, lin(2).enc)
        d2c = _reach(igs.succ, lin(2, c=1).enc)
        meet = _span_intersection(d2, d2c)
        assert lin(1, 2).enc in span_encs([Lineral.from_enc(e) for e in meet])

    def test_edgeless_identity(self):
        igs = Igs(3)
        igs.lin.insert(lin(1))
        preprocess(igs)
        assert igs.lin.rows() == [lin(1)] and igs.edge_count() == 0

    def test_learned_linerals_sound_random(self):
        for seed in range(20):
            f, _ = gen_random(GenSpec(n=6, m=8, seed=1000 + seed))
            models = enumerate_models(f)
            igs = trivial_igs(f)
            preprocess(igs)
            if igs.lin.inconsistent:
                assert models == []
                continue
            for row in igs.lin.rows():
                for a in models:
                    assert eval_lineral(row, a) == 0

    def test_edge_extension_sound_random(self):
        for seed in range(12):
            f, _ = gen_random(GenSpec(n=5, m=6, seed=2000 + seed))
            models = enumerate_models(f)
            igs = trivial_igs(f)
            preprocess(igs, edge_extension=True)
            if igs.lin.inconsistent:
                assert models == []
                continue
            igs.check_invariants()
            # every edge (u, v) encodes (u+1)v in the ideal
            for u, v in igs.edges():
                for a in models:
                    uval = eval_lineral(Lineral.from_enc(u), a)
                    vval = eval_lineral(Lineral.from_enc(v), a)
                    assert (uval ^ 1) & vval == 0


def reference_pass(succ, changed):
    """Straightforward edge-by-edge pass (the ggcp case table), used as the
    semantic reference for the optimized bulk pass."""
    learned = []
    new_succ = {}
    for u, vs in succ.items():
        ru = changed.get(u, u)
        for v in vs:
            rv = changed.get(v, v)
            if ru == 0:
                if rv != 0:
                    learned.append(rv)
            elif rv == 1:
                if ru != 1:
                    learned.append(ru ^ 1)
            elif ru <= 1 or rv == 0 or ru == rv:
                continue
            elif ru == (rv ^ 1):
                learned.append(rv)
            else:
                new_succ.setdefault(ru, set()).add(rv)
                new_succ.setdefault(rv, set())
    # drop isolated vertices: in-edges of x mirror the out-edges of x+1
    while True:
        dead = [
            x
            for x in new_succ
            if not new_succ[x] and not new_succ.get(x ^ 1)
        ]
        if not dead:
            return new_succ, learned
        for x in dead:
            del new_succ[x]


class TestBulkPass:
    def test_matches_reference_on_random_relabelings(self):
        from xnfkit.gf2 import LinSystem

        rng = random.Random(909)
        rounds = 0
        while rounds < 200:
            f, _ = gen_random(GenSpec(n=8, m=12, seed=rng.random()))
            igs = trivial_igs(f)
            ggcp(igs)
            if igs.lin.inconsistent or not igs.succ:
                continue
            rounds += 1
            # random sound-or-not relabeling pressure: insert random rows
            lin = igs.lin.copy()
            for _ in range(rng.randrange(1, 3)):
                lin.insert_enc(rng.getrandbits(8) << 1 | rng.getrandbits(1))
            if lin.inconsistent:
                continue
            probe = Igs(f.num_vars, lin.copy())
            probe.succ = igs.succ
            probe.reduced_mask = igs.reduced_mask
            probe.clean = True
            ggcp(probe)
            # replay with the straightforward reference pass to a fixpoint
            ref = lin.copy()
            ref_succ = dict(igs.succ)
            while not ref.inconsistent:
                changed = {}
                for u in ref_succ:
                    r = ref.reduce_enc(u)
                    if r != u:
                        changed[u] = r
                ref_succ, ref_learned = reference_pass(ref_succ, changed)
                grew = False
                for e in ref_learned:
                    grew |= ref.insert_enc(e)
                if not grew:
                    break
            if ref.inconsistent:
                assert probe.lin.inconsistent
                assert probe.succ == {}
                continue
            assert probe.succ == ref_succ
            assert probe.lin.row_encs() == ref.row_encs()
            assert probe.lin.inconsistent == ref.inconsistent


class TestIncrementalPass:
    def test_warm_pass_matches_cold_rebuild(self):
        # a pass that only re-reduces labels hit by new pivots must agree
        # with a from-scratch rebuild of the same IGS
        rng = random.Random(77)
        rounds = 0
        while rounds < 40:
            f, _ = gen_random(GenSpec(n=10, m=18, seed=rng.random()))
            igs = trivial_igs(f)
            cr_ggcp(igs)
            if igs.lin.inconsistent or not igs.succ:
                continue
            rounds += 1
            enc = 0
            while enc <= 1:
                enc = igs.lin.reduce_enc(rng.getrandbits(10) << 1 | rng.getrandbits(1))
            fast = Igs(f.num_vars, igs.lin.copy())
            fast.succ = igs.succ
            fast.reduced_mask = igs.reduced_mask
            fast.clean = True
            slow = Igs(f.num_vars, igs.lin.copy())
            slow.succ = igs.succ
            slow.clean = False  # force the full rebuild path
            fast.lin.insert_enc(enc)
            slow.lin.insert_enc(enc)
            ggcp(fast)
            ggcp(slow)
            assert fast.succ == slow.succ
            assert fast.lin.row_encs() == slow.lin.row_encs()
            assert fast.lin.inconsistent == slow.lin.inconsistent
            if fast.succ:
                fast.check_invariants()


class TestMonotonicity:
    def test_preceq_along_operations(self):
        stats = SolveStats()
        for seed in range(20):
            f, _ = gen_random(GenSpec(n=6, m=9, seed=3000 + seed))
            igs = trivial_igs(f)
            dim, nv = igs.lin.dim, igs.vertex_count()
            for op in (ggcp, cr_ggcp, preprocess):
                op(igs, stats)
                assert igs.lin.dim >= dim
                assert igs.vertex_count() <= nv
                dim, nv = igs.lin.dim, igs.vertex_count()

    def test_descendants_helper(self):
        igs = igs_of_running_example()
        labels, span = descendants(igs, lin(1))
        assert lin(1) in labels and lin(2) in labels
        assert span.contains(lin(1, 2))
