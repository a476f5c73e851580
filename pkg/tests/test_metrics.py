import numpy as np
import pytest

from dagkit import graph, metrics

from conftest import random_dag


class TestDegreeCcdf:
    def test_star_out_degrees(self):
        g = graph.build(4, [(0, 1), (0, 2), (0, 3)])
        ccdf = metrics.degree_ccdf(g, "out")
        points = dict(ccdf.points)
        assert points[0] == 1.0
        assert points[3] == 0.25

    def test_first_point_is_one(self):
        rng = np.random.default_rng(0)
        for _ in range(20):
            g = random_dag(rng, max_nodes=15)
            for kind in ("total", "in", "out"):
                points = metrics.degree_ccdf(g, kind).points
                assert points[0][1] == 1.0
                values = [v for _, v in points]
                assert all(a >= b for a, b in zip(values, values[1:]))

    def test_histogram_sums_to_n(self):
        g = graph.build(5, [(4, 0), (3, 0), (2, 1)])
        ccdf = metrics.degree_ccdf(g, "total")
        # survival differences recover the histogram
        fractions = [v for _, v in ccdf.points] + [0.0]
        total = sum(fractions[i] - fractions[i + 1] for i in range(len(ccdf.points)))
        assert total == pytest.approx(1.0)


def dense_directed_clustering(g):
    """Independent oracle: the matrix formula evaluated densely."""
    n = g.node_count
    a = np.zeros((n, n))
    for i, j in g.edge_array():
        a[i, j] = 1.0
    b = a + a.T
    b3 = np.linalg.matrix_power(b, 3)
    d_tot = a.sum(axis=0) + a.sum(axis=1)
    d_bidir = np.diag(a @ a)
    out = np.zeros(n)
    for i in range(n):
        denom = 2.0 * (d_tot[i] * (d_tot[i] - 1) - 2.0 * d_bidir[i])
        out[i] = b3[i, i] / denom if denom > 0 else 0.0
    return out


class TestClustering:
    def test_feed_forward_triangle_matches_oracle(self, kernel_backend):
        g = graph.build(3, [(0, 1), (0, 2), (1, 2)])
        per_node, avg, glob = metrics.clustering_directed(g)
        oracle = dense_directed_clustering(g)
        assert per_node == pytest.approx(oracle)
        assert avg == pytest.approx(oracle.mean())

    def test_random_dags_match_dense_oracle(self, kernel_backend):
        rng = np.random.default_rng(21)
        for _ in range(500):
            g = random_dag(rng, max_nodes=10, edge_prob=0.4)
            per_node, avg, _ = metrics.clustering_directed(g)
            oracle = dense_directed_clustering(g)
            assert per_node == pytest.approx(oracle, abs=1e-12)

    def test_edgeless_graph_zero(self, kernel_backend):
        g = graph.build(4, [])
        per_node, avg, glob = metrics.clustering_directed(g)
        assert (per_node == 0).all() and avg == 0.0 and glob == 0.0

    def test_undirected_triangle(self, kernel_backend):
        g = graph.build(3, [(2, 0), (2, 1), (1, 0)])
        avg, glob = metrics.clustering_undirected(g)
        assert avg == pytest.approx(1.0)
        assert glob == pytest.approx(1.0)

    def test_path_zero(self, kernel_backend):
        g = graph.build(3, [(2, 1), (1, 0)])
        avg, glob = metrics.clustering_undirected(g)
        assert avg == 0.0 and glob == 0.0

    def test_directed_is_half_undirected_on_dags(self, kernel_backend):
        rng = np.random.default_rng(22)
        for _ in range(100):
            g = random_dag(rng, max_nodes=12, edge_prob=0.4)
            _, avg_dir, _ = metrics.clustering_directed(g)
            avg_und, _ = metrics.clustering_undirected(g)
            assert abs(avg_dir - avg_und / 2.0) < 1e-9

    def test_reciprocated_pair_rejected(self, kernel_backend):
        g = graph.build(2, [(0, 1), (1, 0)])
        with pytest.raises(ValueError, match="reciprocated"):
            metrics.clustering_directed(g)


def edge_enumeration_assortativity(g, mode):
    """Oracle: direct Pearson over the enumerated edge list."""
    deg = {
        "out": g.out_degrees(),
        "in": g.in_degrees(),
    }
    xs, ys = [], []
    if mode == "undirected":
        d = g.out_degrees() + g.in_degrees()
        for i, j in g.edge_array():
            xs.extend([d[i], d[j]])
            ys.extend([d[j], d[i]])
    else:
        a, b = mode.split("-")
        for i, j in g.edge_array():
            xs.append(deg[a][i])
            ys.append(deg[b][j])
    xs = np.asarray(xs, dtype=float)
    ys = np.asarray(ys, dtype=float)
    sx, sy = xs - xs.mean(), ys - ys.mean()
    denom = np.sqrt((sx @ sx) * (sy @ sy))
    return None if denom == 0 else float(sx @ sy) / denom


class TestAssortativity:
    def test_hand_graph_matches_oracle(self):
        g = graph.build(4, [(3, 1), (3, 2), (2, 0), (1, 0)])
        for mode in metrics.ASSORTATIVITY_MODES:
            got = metrics.assortativity(g, mode)
            want = edge_enumeration_assortativity(g, mode)
            if want is None:
                assert got is None
            else:
                assert got == pytest.approx(want, abs=1e-12)

    def test_random_dags_match_oracle(self):
        rng = np.random.default_rng(31)
        for _ in range(100):
            g = random_dag(rng, max_nodes=12, edge_prob=0.4)
            if g.edge_count < 2:
                continue
            for mode in metrics.ASSORTATIVITY_MODES:
                got = metrics.assortativity(g, mode)
                want = edge_enumeration_assortativity(g, mode)
                if want is None:
                    assert got is None
                else:
                    assert got == pytest.approx(want, abs=1e-10)
                    assert -1.0 - 1e-9 <= got <= 1.0 + 1e-9

    def test_regular_graph_undefined(self):
        # directed 4-cycle: every degree equal, zero variance
        g = graph.build(4, [(0, 1), (1, 2), (2, 3), (3, 0)])
        assert metrics.assortativity(g, "out-out") is None

    def test_too_few_edges(self):
        with pytest.raises(ValueError):
            metrics.assortativity(graph.build(2, [(0, 1)]), "out-out")


class TestPathLength:
    def test_directed_chain(self, kernel_backend):
        g = graph.build(3, [(2, 1), (1, 0)])
        assert metrics.average_path_length(g, "directed-reachable") == pytest.approx(4 / 3)

    def test_undirected_path(self, kernel_backend):
        g = graph.build(3, [(2, 1), (1, 0)])
        assert metrics.average_path_length(g, "undirected") == pytest.approx(4 / 3)

    def test_no_reachable_pairs(self, kernel_backend):
        g = graph.build(3, [])
        with pytest.raises(ValueError, match="reachable"):
            metrics.average_path_length(g, "directed-reachable")

    def test_matches_bruteforce_bfs(self, kernel_backend):
        rng = np.random.default_rng(41)
        for _ in range(30):
            g = random_dag(rng, max_nodes=12, edge_prob=0.3)
            # brute force over all ordered pairs with a python BFS
            import collections
            total, count = 0, 0
            for s in range(g.node_count):
                dist = {s: 0}
                queue = collections.deque([s])
                while queue:
                    u = queue.popleft()
                    for v in g.out_neighbors(u):
                        v = int(v)
                        if v not in dist:
                            dist[v] = dist[u] + 1
                            queue.append(v)
                total += sum(dist.values())
                count += len(dist) - 1
            if count == 0:
                continue
            assert metrics.average_path_length(g, "directed-reachable") == pytest.approx(total / count)


class TestSelfDegree:
    def test_equal_in_out_degrees_give_spearman_one(self):
        # kout == kin at every node, with variation across nodes
        g = graph.build(4, [(0, 1), (1, 2), (2, 0), (0, 3), (3, 0)])
        assert metrics.self_degree_correlation(g).spearman == pytest.approx(1.0)

    def test_spearman_matches_stats_module(self):
        g = graph.build(6, [(0, 1), (0, 2), (1, 2), (3, 0), (4, 0), (5, 0), (2, 3)])
        from dagkit import stats
        want = stats.correlate(g.out_degrees(), g.in_degrees(), "spearman").coefficient
        assert metrics.self_degree_correlation(g).spearman == pytest.approx(want)

    def test_binning(self):
        # out-degrees: one node with 1, one with 3, rest 0
        edges = [(0, 2)] + [(1, j) for j in range(2, 5)]
        g = graph.build(6, edges)
        sd = metrics.self_degree_correlation(g)
        assert sd.curve.bin_counts[0] == 1  # [1, 3)
        assert sd.curve.bin_counts[1] == 1  # [3, 9)
        assert sd.curve.bin_means[0] == pytest.approx(0.0)
        assert sd.curve.bin_edges == [1.0, 3.0, 9.0, 27.0, 81.0, 243.0]

    def test_zero_variance_raises(self):
        g = graph.build(3, [(0, 1), (1, 2), (2, 0)])
        with pytest.raises(ValueError):
            metrics.self_degree_correlation(g)


class TestSummary:
    def test_single_edge_density(self):
        g = graph.build(2, [(1, 0)])
        report = metrics.summary(g)
        assert report.density == pytest.approx(0.5)
        assert report.average_degree == pytest.approx(1.0)

    def test_identities_random(self):
        rng = np.random.default_rng(51)
        g = random_dag(rng, max_nodes=20, edge_prob=0.3)
        report = metrics.summary(g)
        n, m = report.node_count, report.link_count
        assert report.density == pytest.approx(m / (n * (n - 1)))
        assert report.average_degree == pytest.approx(2 * m / n)
        assert report.max_degree == int((g.out_degrees() + g.in_degrees()).max())

    def test_serializable(self):
        import json
        g = graph.build(4, [(3, 1), (3, 2), (2, 0), (1, 0)])
        doc = metrics.summary(g).to_dict()
        json.dumps(doc)
        assert set(doc["assortativity"].keys()) == set(metrics.ASSORTATIVITY_MODES)
