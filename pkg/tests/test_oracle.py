import itertools

import numpy as np
import pytest

from switchgraph import binmat, oracle, reach
from switchgraph.binmat import NEGATIVE, POSITIVE, BinaryMatrix
from switchgraph.errors import MarginSumMismatch, NonGraphical
from switchgraph.graph import dense_spectral_radius

from conftest import BLOCK_A, BLOCK_B, RING_A, RING_B


def brute_enumerate(R, C):
    """Independent oracle: filter the full 2^(pq) space."""
    p, q = len(R), len(C)
    out = []
    for bits in itertools.product([0, 1], repeat=p * q):
        arr = np.array(bits, dtype=int).reshape(p, q)
        if list(arr.sum(axis=1)) == list(R) and list(arr.sum(axis=0)) == list(C):
            out.append(BinaryMatrix(arr))
    return out


class TestEnumerateMargins:
    def test_permutation_class(self):
        mats = oracle.enumerate_margins((1, 1), (1, 1))
        assert len(mats) == 2
        assert BinaryMatrix([[1, 0], [0, 1]]) in mats
        assert BinaryMatrix([[0, 1], [1, 0]]) in mats

    def test_forced_class(self):
        mats = oracle.enumerate_margins((2, 2), (2, 2))
        assert mats == [BinaryMatrix([[1, 1], [1, 1]])]

    def test_ring_class_contains_golden_pair(self):
        mats = oracle.enumerate_margins((1, 3, 3, 1), (3, 1, 1, 3))
        assert BinaryMatrix(RING_A) in mats
        assert BinaryMatrix(RING_B) in mats

    def test_matches_brute_force(self):
        rng = np.random.default_rng(3)
        for _ in range(15):
            p, q = int(rng.integers(1, 4)), int(rng.integers(1, 4))
            arr = (rng.random((p, q)) < 0.5).astype(int)
            R = [int(x) for x in arr.sum(axis=1)]
            C = [int(x) for x in arr.sum(axis=0)]
            ours = oracle.enumerate_margins(R, C)
            brute = brute_enumerate(R, C)
            assert sorted(m.key() for m in ours) == sorted(m.key() for m in brute)
            assert len(set(m.key() for m in ours)) == len(ours)

    def test_infeasible_empty(self):
        # column 1 demands 3 ones but the only nonzero rows are 1 and 2
        assert oracle.enumerate_margins((2, 2, 0), (3, 1, 0)) == []

    def test_sum_mismatch(self):
        with pytest.raises(MarginSumMismatch):
            oracle.enumerate_margins((1, 1), (1,))

    def test_count_with_cap(self):
        assert oracle.count_margin_class((2, 2, 2, 2), (2, 2, 2, 2)) == 90
        assert oracle.count_margin_class((2, 2, 2, 2), (2, 2, 2, 2), cap=10) is None


class TestBuildDag:
    def test_permutation_class_structure(self):
        mats = oracle.enumerate_margins((1, 1), (1, 1))
        dag = oracle.build_dag(mats)
        assert dag.arc_count == 1
        identity = dag.index[BinaryMatrix([[1, 0], [0, 1]]).key()]
        anti = dag.index[BinaryMatrix([[0, 1], [1, 0]]).key()]
        assert dag.arcs[anti][0][0] == identity
        assert dag.sinks == [identity]
        assert dag.sources == [anti]
        assert binmat.classify(mats[identity]).is_split_zebra

    def test_singleton(self):
        dag = oracle.build_dag(oracle.enumerate_margins((2, 2), (2, 2)))
        assert dag.sinks == [0] and dag.sources == [0]
        assert oracle.topological_order(dag) == [0]

    def test_sinks_match_checkerboard_freeness(self):
        mats = oracle.enumerate_margins((2, 1, 1), (2, 1, 1))
        dag = oracle.build_dag(mats)
        for v, mat in enumerate(mats):
            neg = binmat.find_checkerboards(mat, NEGATIVE)
            pos = binmat.find_checkerboards(mat, POSITIVE)
            assert (v in dag.sinks) == (not neg)
            assert (v in dag.sources) == (not pos)


class TestVerifyDagStructure:
    @pytest.mark.parametrize(
        "R,C",
        [
            ((1, 1), (1, 1)),
            ((2, 1, 1), (2, 1, 1)),
            ((1, 3, 3, 1), (3, 1, 1, 3)),
            ((2, 2, 2, 2), (2, 2, 2, 2)),
            ((3, 2, 1), (2, 2, 2)),
        ],
    )
    def test_small_classes_pass(self, R, C):
        dag = oracle.build_dag(oracle.enumerate_margins(R, C))
        rep = oracle.verify_dag_structure(dag)
        assert rep.ok, rep.failures

    def test_no_split_member_reports_vacuous(self):
        dag = oracle.build_dag(oracle.enumerate_margins((1, 3, 3, 1), (3, 1, 1, 3)))
        rep = oracle.verify_dag_structure(dag)
        assert rep.unique_sink == "vacuous" and rep.ok

    def test_split_member_reports_pass(self):
        dag = oracle.build_dag(oracle.enumerate_margins((1, 1), (1, 1)))
        rep = oracle.verify_dag_structure(dag)
        assert rep.unique_sink == "pass" and rep.unique_source == "pass"

    def test_topological_order_exists(self):
        dag = oracle.build_dag(oracle.enumerate_margins((2, 2, 1), (2, 2, 1)))
        order = oracle.topological_order(dag)
        assert order is not None
        pos = {v: idx for idx, v in enumerate(order)}
        for v, out in enumerate(dag.arcs):
            for dest, _ in out:
                assert pos[v] < pos[dest]


class TestVerifyReachability:
    def test_ring_class(self):
        mats = oracle.enumerate_margins((1, 3, 3, 1), (3, 1, 1, 3))
        dag = oracle.build_dag(mats)
        rep = oracle.verify_reachability(dag)
        assert rep.ok
        a = dag.index[BinaryMatrix(RING_A).key()]
        b = dag.index[BinaryMatrix(RING_B).key()]
        closure = oracle.reachability_closure(dag)
        assert not closure[a] >> b & 1  # golden pair unreachable
        # the logged evidence for that difference: condition (ii) fails
        M = reach.diff(mats[a], mats[b])
        key = reach.compute_T(M).values.tobytes()
        rec = next(r for r in rep.conjecture if r.diff_key == key)
        assert rec.cond_i and not rec.cond_ii and rec.reachable_pairs == 0

    def test_block_class_distance_four(self):
        A, B = BinaryMatrix(BLOCK_A), BinaryMatrix(BLOCK_B)
        path = oracle.bfs_directed_path(A, B)
        assert path is not None and len(path) == 4
        assert reach.validate_path(A, B, path)

    def test_two_switch_distance(self, pair_3x3):
        A, B = pair_3x3
        path = oracle.bfs_directed_path(A, B)
        assert len(path) == 2

    def test_bfs_agrees_with_closure(self):
        mats = oracle.enumerate_margins((2, 1, 1), (1, 1, 2))
        dag = oracle.build_dag(mats)
        closure = oracle.reachability_closure(dag)
        for a, ma in enumerate(mats):
            for b, mb in enumerate(mats):
                path = oracle.bfs_directed_path(ma, mb)
                assert (path is not None) == bool(closure[a] >> b & 1)
                if path is not None and a != b:
                    assert reach.validate_path(ma, mb, path)


class TestComplementDuality:
    def test_dag_reverses_under_complement(self):
        R, C = (2, 1, 1), (2, 1, 1)
        mats = oracle.enumerate_margins(R, C)
        dag = oracle.build_dag(mats)
        comp_mats = [binmat.complement(m) for m in mats]
        comp_dag = oracle.build_dag(oracle.enumerate_margins((1, 2, 2), (1, 2, 2)))
        assert comp_dag.arc_count == dag.arc_count
        # arc u -> v in the class maps to comp(v) -> comp(u) in the complement class
        for u, out in enumerate(dag.arcs):
            for v, _ in out:
                cu = comp_dag.index[comp_mats[u].key()]
                cv = comp_dag.index[comp_mats[v].key()]
                assert any(dest == cu for dest, _ in comp_dag.arcs[cv])
        # sinks map onto sources and sources onto sinks
        assert {comp_dag.index[comp_mats[s].key()] for s in dag.sinks} == set(
            comp_dag.sources
        )
        assert {comp_dag.index[comp_mats[s].key()] for s in dag.sources} == set(
            comp_dag.sinks
        )


class TestGraphical:
    @pytest.mark.parametrize(
        "D,expect",
        [
            ((3, 3, 3, 3), True),
            ((2, 2, 2, 2), True),
            ((3, 1), False),
            ((1, 1), True),
            ((5, 1, 1, 1, 1), False),
            ((4, 4, 4, 1, 1), False),
            ((0,), True),
            ((2, 2, 1, 1), True),
        ],
    )
    def test_known_cases(self, D, expect):
        assert oracle.is_graphical(D) == expect

    def test_matches_enumeration(self):
        # graphical iff the labelled class is non-empty
        for n in range(1, 6):
            for D in itertools.combinations_with_replacement(range(n - 1, -1, -1), n):
                feasible = oracle.is_graphical(D)
                if sum(D) % 2:
                    assert not feasible
                    continue
                if feasible:
                    assert oracle.enumerate_degree_class(list(D))
                else:
                    with pytest.raises(NonGraphical):
                        oracle.enumerate_degree_class(list(D))


class TestDegreeClasses:
    def test_single_edge(self):
        graphs = oracle.enumerate_degree_class([1, 1])
        assert len(graphs) == 1 and graphs[0].m == 1

    def test_cycle_class(self):
        graphs = oracle.enumerate_degree_class([2, 2, 2, 2])
        assert len(graphs) == 3  # the three labelled 4-cycles
        for g in graphs:
            assert tuple(g.degrees) == (2, 2, 2, 2)

    def test_degree_vector_exact(self):
        graphs = oracle.enumerate_degree_class([3, 2, 2, 2, 1])
        assert graphs
        for g in graphs:
            assert tuple(g.degrees) == (3, 2, 2, 2, 1)
        keys = {g.key() for g in graphs}
        assert len(keys) == len(graphs)

    def test_requires_sorted(self):
        with pytest.raises(ValueError):
            oracle.enumerate_degree_class([1, 2, 1])


class TestSpectralMaxAtSink:
    def test_regular_class_trivial(self):
        graphs = oracle.enumerate_degree_class([2, 2, 2, 2])
        rep = oracle.verify_spectral_max_at_sink(graphs)
        assert rep.ok
        assert rep.max_lambda == pytest.approx(2.0, abs=1e-9)

    def test_mixed_class(self):
        graphs = oracle.enumerate_degree_class([3, 2, 2, 2, 1])
        rep = oracle.verify_spectral_max_at_sink(graphs)
        assert rep.ok, rep.failures
        assert rep.sink_count >= 1

    def test_max_matches_brute_scan(self):
        graphs = oracle.enumerate_degree_class([3, 3, 2, 2, 2])
        rep = oracle.verify_spectral_max_at_sink(graphs)
        assert rep.max_lambda == pytest.approx(
            max(dense_spectral_radius(g.adj) for g in graphs), abs=1e-12
        )

    def test_graph_dag_sources_sinks(self):
        graphs = oracle.enumerate_degree_class([2, 2, 1, 1])
        dag = oracle.build_graph_dag(graphs)
        assert len(graphs) == len(dag.graphs)
        for v, g in enumerate(graphs):
            from switchgraph.graph import count_sym_checkerboards

            assert (v in dag.sinks) == (count_sym_checkerboards(g.adj, NEGATIVE) == 0)
            assert (v in dag.sources) == (count_sym_checkerboards(g.adj, POSITIVE) == 0)


class TestGraphicalSequences:
    def test_small_counts(self):
        # n = 3: degree vectors (0,0,0), (1,1,0), (2,1,1), (2,2,2)
        assert list(oracle.graphical_sequences(3)) == [
            (2, 2, 2),
            (2, 1, 1),
            (1, 1, 0),
            (0, 0, 0),
        ]

    def test_every_sequence_enumerates(self):
        for D in oracle.graphical_sequences(5):
            assert oracle.enumerate_degree_class(list(D))
