import random

import pytest

from xnfkit.generate import GenSpec, gen_random
from xnfkit.gf2 import Lineral
from xnfkit.igs import Igs, cr_ggcp, trivial_igs
from xnfkit.oracle import brute_force_solve, enumerate_models
from xnfkit.solver import (
    SolverConfig,
    decide_maxbottleneck,
    decide_maxpath,
    decide_maxreach,
    dpll_solve,
    verify_model,
)
from xnfkit.xnf import XnfFormula, parse_xnf

from helpers import RUNNING_EXAMPLE_XNF, SBOX_XNF, lin


def make_dag(stride_edges, n_vars=12):
    """Build a skew-symmetric acyclic Igs from edges over const-0 labels."""
    igs = Igs(n_vars)
    for u, v in stride_edges:
        igs.add_edge_pair(lin(u).enc, lin(v).enc)
    igs.check_invariants()
    assert igs.is_acyclic()
    return igs


def dfs_count_paths_from(succ, v):
    """Number of paths starting at v (every vertex is a length-0 path)."""
    total = 1
    for w in succ.get(v, ()):
        total += dfs_count_paths_from(succ, w)
    return total


def dfs_count_paths_to(succ, v):
    pred = {}
    for u, vs in succ.items():
        for w in vs:
            pred.setdefault(w, []).append(u)
    def up(x):
        return 1 + sum(up(u) for u in pred.get(x, ()))
    return up(v)


def dfs_longest_path_len(succ):
    best = 0
    def down(v):
        return 1 + max((down(w) for w in succ.get(v, ())), default=0)
    for v in succ:
        best = max(best, down(v))
    return best


def random_upper_dag(rng, nv):
    """Random DAG on vertices x1..x_nv (edges ascending), mirrored."""
    edges = []
    for i in range(1, nv + 1):
        for j in range(i + 1, nv + 1):
            if rng.random() < 0.25:
                edges.append((i, j))
    return make_dag(edges, n_vars=nv)


class TestMaxReach:
    def test_single_edge_tie_break(self):
        igs = make_dag([(1, 2)])
        d = decide_maxreach(igs)
        assert d.l0 == [lin(1), lin(2)]
        assert d.l1 == [lin(1, c=1)]

    def test_chain_path_count(self):
        igs = make_dag([(1, 2), (2, 3), (3, 4)])
        d = decide_maxreach(igs)
        # source x1 has the longest reach; D_f = whole chain
        assert d.l0 == [lin(1), lin(2), lin(3), lin(4)]
        assert d.l1 == [lin(1, c=1)]

    def test_counts_match_dfs_oracle(self):
        from xnfkit.igs import _topo_order_or_raise
        from xnfkit.solver import _paths_from

        rng = random.Random(41)
        for _ in range(15):
            igs = random_upper_dag(rng, rng.randrange(4, 13))
            if igs.edge_count() == 0:
                continue
            order = _topo_order_or_raise(igs.succ, "cyclic")
            p = _paths_from(igs.succ, order)
            for v in igs.succ:
                assert p[v] == dfs_count_paths_from(igs.succ, v)


class TestMaxBottleneck:
    def test_single_edge_tie_break(self):
        igs = make_dag([(1, 2)])
        d = decide_maxbottleneck(igs)
        assert d.l0 == [lin(1), lin(2)]
        assert d.l1 == [lin(1, c=1)]

    def test_middle_of_diamond_wins(self):
        # two sources feed m, m feeds two sinks: m scores 3+3, others 5
        igs = make_dag([(1, 3), (2, 3), (3, 4), (3, 5)])
        d = decide_maxbottleneck(igs)
        assert lin(3) in d.l0 and lin(4) in d.l0 and lin(5) in d.l0
        assert lin(3, c=1) in d.l1

    def test_star_source_score(self):
        from xnfkit.igs import _topo_order_or_raise
        from xnfkit.solver import _paths_from, _paths_to

        k = 5
        igs = make_dag([(1, i) for i in range(2, 2 + k)])
        order = _topo_order_or_raise(igs.succ, "cyclic")
        p = _paths_from(igs.succ, order)
        q = _paths_to(igs.succ, order)
        src = lin(1).enc
        assert p[src] + q[src] == k + 1 + 1

    def test_scores_match_dfs_oracle(self):
        from xnfkit.igs import _topo_order_or_raise
        from xnfkit.solver import _paths_from, _paths_to

        rng = random.Random(42)
        for _ in range(10):
            igs = random_upper_dag(rng, rng.randrange(4, 11))
            if igs.edge_count() == 0:
                continue
            order = _topo_order_or_raise(igs.succ, "cyclic")
            p = _paths_from(igs.succ, order)
            q = _paths_to(igs.succ, order)
            for v in igs.succ:
                assert p[v] == dfs_count_paths_from(igs.succ, v)
                assert q[v] == dfs_count_paths_to(igs.succ, v)


class TestMaxPath:
    def test_single_edge(self):
        igs = make_dag([(1, 2)])
        d = decide_maxpath(igs)
        assert d.l0 == [lin(1, 2)]
        assert d.l1 == [lin(1, c=1), lin(2)]

    def test_chain_of_three(self):
        igs = make_dag([(1, 2), (2, 3)])
        d = decide_maxpath(igs)
        assert d.l0 == [lin(1, 2), lin(1, 3)]
        assert d.l1 == [lin(1, c=1), lin(3)]

    def test_longest_path_matches_dfs_oracle(self):
        rng = random.Random(43)
        for _ in range(15):
            igs = random_upper_dag(rng, rng.randrange(4, 13))
            if igs.edge_count() == 0:
                continue
            d = decide_maxpath(igs)
            # recovered path has r vertices => r-1 sums in l0
            assert len(d.l0) == dfs_longest_path_len(igs.succ) - 1


class TestHeuristicContracts:
    def test_empty_graph_rejected(self):
        for heuristic in (decide_maxreach, decide_maxbottleneck, decide_maxpath):
            with pytest.raises(ValueError):
                heuristic(Igs(3))

    def test_decision_sides_outside_span(self):
        for seed in range(20):
            f, _ = gen_random(GenSpec(n=8, m=12, seed=seed))
            igs = trivial_igs(f)
            cr_ggcp(igs)
            if igs.lin.inconsistent or igs.edge_count() == 0:
                continue
            for heuristic in (decide_maxreach, decide_maxbottleneck, decide_maxpath):
                d = heuristic(igs)
                assert any(not igs.lin.contains(l) for l in d.l0)
                assert any(not igs.lin.contains(l) for l in d.l1)


class TestDpllSolve:
    def test_running_example_all_configs(self):
        f = parse_xnf(RUNNING_EXAMPLE_XNF)
        for heuristic in ("maxreach", "maxbottleneck", "maxpath"):
            for extended in (False, True):
                cfg = SolverConfig(heuristic=heuristic, extended_igs=extended)
                res = dpll_solve(f, cfg)
                assert res.status == "SAT"
                assert res.model == (1, 1, 0, 0, 0)
                assert verify_model(f, res.model)

    def test_running_example_propagation_only_with_extended_igs(self):
        f = parse_xnf(RUNNING_EXAMPLE_XNF)
        res = dpll_solve(f, SolverConfig(extended_igs=True))
        assert res.status == "SAT" and res.stats.decisions == 0

    def test_running_example_propagation_only_with_preprocess(self):
        f = parse_xnf(RUNNING_EXAMPLE_XNF)
        res = dpll_solve(f, SolverConfig(preprocess=True))
        assert res.status == "SAT" and res.stats.decisions == 0

    def test_empty_clause_unsat_without_decisions(self):
        res = dpll_solve(XnfFormula(3, [(), (lin(1),)]))
        assert res.status == "UNSAT" and res.stats.decisions == 0

    def test_xor_plus_or_pair(self):
        f = parse_xnf("p xnf 2 3\n1+2 0\n1 2 0\n-1 -2 0\n")
        res = dpll_solve(f)
        assert res.status == "SAT"
        assert res.model in {(0, 1), (1, 0)}

    def test_wide_clause_rejected(self):
        f = parse_xnf("p xnf 3 1\n1 2 3 0\n")
        with pytest.raises(ValueError):
            dpll_solve(f)

    def test_unknown_heuristic_rejected(self):
        with pytest.raises(ValueError):
            dpll_solve(XnfFormula(1, []), SolverConfig(heuristic="dlis"))

    def test_timeout_status(self):
        f, _ = gen_random(GenSpec(n=12, m=30, seed=5))
        res = dpll_solve(f, SolverConfig(timeout=0.0))
        assert res.status == "TIMEOUT"

    def test_oracle_agreement_small(self):
        for seed in range(60):
            n = 4 + seed % 6
            f, _ = gen_random(GenSpec(n=n, m=2 * n, force_sat=seed % 2 == 0, seed=seed))
            want = brute_force_solve(f).status
            res = dpll_solve(f)
            assert res.status == want
            if res.status == "SAT":
                assert verify_model(f, res.model)

    def test_decision_completeness_enumerated(self):
        for seed in range(15):
            f, _ = gen_random(GenSpec(n=7, m=12, seed=700 + seed))
            cfg = SolverConfig(check_decisions=True)
            res = dpll_solve(f, cfg)  # raises on an incomplete decision
            assert res.status in ("SAT", "UNSAT")

    def test_determinism(self):
        f, _ = gen_random(GenSpec(n=10, m=25, seed=77))
        for heuristic in ("maxreach", "maxbottleneck", "maxpath"):
            cfg = SolverConfig(heuristic=heuristic)
            a, b = dpll_solve(f, cfg), dpll_solve(f, cfg)
            assert a.status == b.status and a.model == b.model
            assert (a.stats.decisions, a.stats.learned, a.stats.peak_depth) == (
                b.stats.decisions,
                b.stats.learned,
                b.stats.peak_depth,
            )

    def test_branch_depth_bounded(self):
        for seed in range(20):
            n = 6 + seed % 5
            f, _ = gen_random(GenSpec(n=n, m=3 * n, seed=900 + seed))
            res = dpll_solve(f)
            assert res.stats.peak_depth <= n + 1


class TestVerifyModel:
    def test_sbox_graph_points(self):
        f = parse_xnf(SBOX_XNF)
        models = enumerate_models(f)
        assert len(models) == 32
        for m in models:
            assert verify_model(f, m)
        # the models form the graph of a 5-bit bijection
        assert len({m[:5] for m in models}) == 32

    def test_empty_formula(self):
        assert verify_model(XnfFormula(2, []), (0, 1))

    def test_empty_clause_never_satisfied(self):
        f = XnfFormula(2, [()])
        assert not verify_model(f, (0, 0))
        assert not verify_model(f, (1, 1))

    def test_length_mismatch(self):
        with pytest.raises(ValueError):
            verify_model(XnfFormula(3, []), (0, 1))
