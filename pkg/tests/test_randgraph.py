import math

import numpy as np
import pytest

from spinchaos.errors import CapacityError, ValidationError
from spinchaos.hypergraph import ball, berge_distance, has_berge_cycle, hypergraph
from spinchaos.randgraph import (DilutedSpec, diluted_spec, explore,
                                 frontier_mean_bound,
                                 frontier_second_moment_bound, growth_stats,
                                 growth_stats_rows, hypertree_trend,
                                 probe_depth, sample_diluted)
from spinchaos.rng import substream

from conftest import brute_has_berge_cycle, random_hypergraph


def test_spec_validation():
    spec = diluted_spec(100, {2: 0.6, 3: 0.2})
    assert spec.alphas == ((2, 0.6), (3, 0.2))
    with pytest.raises(ValidationError):
        diluted_spec(1, {2: 0.5})
    with pytest.raises(ValidationError):
        diluted_spec(50, {1: 0.5})
    with pytest.raises(ValidationError):
        diluted_spec(50, {2: -0.1})
    with pytest.raises(ValidationError):
        diluted_spec(50, {60: 0.1})  # arity above N
    with pytest.raises(ValidationError):
        diluted_spec(4, {2: 2.0})  # alpha N above C(N, 2)
    with pytest.raises(CapacityError):
        diluted_spec(200_000, {2: 0.5})
    with pytest.raises(CapacityError):
        diluted_spec(50_000, {4: 0.1})


def test_growth_rates():
    spec = diluted_spec(1000, {2: 0.6, 3: 0.2})
    assert spec.growth_rate == pytest.approx(2.4, abs=1e-15)
    assert spec.growth_rate_prime == pytest.approx(1.2, abs=1e-15)
    pure2 = diluted_spec(1000, {2: 0.9})
    assert pure2.growth_rate_prime == 0.0


def test_sample_shapes_and_validity():
    spec = diluted_spec(60, {2: 0.5, 3: 0.1})
    g = sample_diluted(spec, substream(21, "sample"))
    assert g.n == 60
    seen = set()
    for e in g.edges:
        assert len(e) in (2, 3)
        assert list(e) == sorted(set(e))
        assert 0 <= e[0] and e[-1] < 60
        assert e not in seen
        seen.add(e)


def test_sample_determinism():
    spec = diluted_spec(80, {2: 0.7})
    a = sample_diluted(spec, substream(5, "det"))
    b = sample_diluted(spec, substream(5, "det"))
    assert a == b


def test_sample_edge_counts_binomial():
    n, alpha = 50, 0.8
    spec = diluted_spec(n, {2: alpha})
    reps = 400
    counts = [sample_diluted(spec, substream(33, "cnt", k)).n_edges
              for k in range(reps)]
    total = math.comb(n, 2)
    q = alpha * n / total
    mean, var = total * q, total * q * (1 - q)
    assert abs(np.mean(counts) - mean) < 4 * math.sqrt(var / reps)
    assert 0.7 * var < np.var(counts, ddof=1) < 1.4 * var


def test_sampler_capacity_guard():
    spec = diluted_spec(10_000, {7: 1e-17})
    with pytest.raises(CapacityError):
        sample_diluted(spec, substream(1, "cap"))


# ---------------------------------------------------------------------------
# exploration: exact layer characterization


def layers_oracle(g, root):
    dist = {v: berge_distance(g, root, v) for v in range(g.n)}
    max_d = max((d for d in dist.values() if d < math.inf), default=0)
    i_sets = []
    for t in range(int(max_d) + 1):
        i_sets.append(frozenset(v for v, d in dist.items() if d == t))
    e_by_round = {t: set() for t in range(int(max_d) + 2)}
    for eid, e in enumerate(g.edges):
        d = min(dist[v] for v in e)
        if d < math.inf:
            e_by_round[int(d) + 1].add(eid)
    return i_sets, e_by_round


def test_explore_matches_bfs_layers(rng):
    for _ in range(200):
        g = random_hypergraph(rng, n_max=9, e_max=8)
        root = int(rng.integers(g.n))
        tr = explore(g, root)
        want_i, want_e = layers_oracle(g, root)
        assert list(tr.i_sets[:len(want_i)]) == want_i
        extra = list(tr.i_sets[len(want_i):])
        # a trailing empty frontier survives only to hold closing edges
        assert extra in ([], [frozenset()])
        if extra:
            assert tr.e_sets[len(want_i)]
        for t in range(len(tr.e_sets)):
            assert set(tr.e_sets[t]) == want_e.get(t, set())
        for t, es in want_e.items():
            if es:
                assert t < len(tr.e_sets)
        # every component edge is revealed exactly once, at the round
        # after its closest vertex enters the frontier
        revealed = tr.revealed_edges()
        assert len(revealed) == len(set(revealed))
        assert set(revealed) == set().union(*want_e.values()) if want_e else not revealed


def test_trace_partition_properties(rng):
    for _ in range(150):
        g = random_hypergraph(rng, n_max=9, e_max=8)
        root = int(rng.integers(g.n))
        tr = explore(g, root)
        removed = set()
        for t, i_t in enumerate(tr.i_sets):
            assert not (removed & i_t)  # R_t and I_t disjoint
            if t >= 1:
                for eid in tr.e_sets[t]:
                    e = set(g.edges[eid])
                    assert e & tr.i_sets[t - 1]  # touches the old frontier
                    assert not e & (removed - tr.i_sets[t - 1])
            removed |= i_t
        # B_t(root) = union of layers 0..t
        cum = set()
        for t, i_t in enumerate(tr.i_sets):
            cum |= i_t
            assert frozenset(cum) == ball(g, root, t)


def test_flags_iff_revealed_cycle(rng):
    flagged = clean = 0
    for _ in range(250):
        g = random_hypergraph(rng, n_max=9, e_max=7)
        root = int(rng.integers(g.n))
        tr = explore(g, root)
        has_flags = tr.first_cycle_round is not None
        cyc = has_berge_cycle(g, tr.revealed_edges())
        assert has_flags == cyc
        sub = hypergraph(g.n, [g.edges[e] for e in tr.revealed_edges()])
        assert cyc == brute_has_berge_cycle(sub)
        if has_flags:
            flagged += 1
            t = tr.first_cycle_round
            assert tr.a_counts[t] or tr.d_counts[t]
            assert all(a == 0 and d == 0 for a, d in
                       zip(tr.a_counts[:t], tr.d_counts[:t]))
            # the rounds before the first flag reveal a cycle-free set
            early = [e for s in range(t) for e in tr.e_sets[s]]
            assert not has_berge_cycle(g, early)
        else:
            clean += 1
    assert flagged and clean


def test_explore_max_depth_truncates():
    n = 12
    path = hypergraph(n, [(k, k + 1) for k in range(n - 1)])
    tr = explore(path, 0, max_depth=4)
    assert tr.depth_reached == 4
    assert tr.frontier_sizes(6) == [1, 1, 1, 1, 1, 0, 0]
    assert tr.ball_size(4) == 5
    assert tr.revealed_edges() == (0, 1, 2, 3)
    full = explore(path, 0)
    assert full.depth_reached == n - 1
    assert full.first_cycle_round is None


def test_explore_isolated_root():
    g = hypergraph(5, [(1, 2)])
    tr = explore(g, 0)
    assert tr.i_sets == (frozenset({0}),)
    assert tr.depth_reached == 0
    assert tr.first_cycle_round is None


def test_explore_validation():
    g = hypergraph(3, [(0, 1)])
    with pytest.raises(ValidationError):
        explore(g, 3)


# ---------------------------------------------------------------------------
# bounds and replicated statistics


def test_bound_formulas():
    spec = diluted_spec(1000, {2: 0.6, 3: 0.2})
    lam, lam_p = 2.4, 1.2
    assert frontier_mean_bound(spec, 0) == 1.0
    assert frontier_mean_bound(spec, 3) == pytest.approx(lam ** 3)
    assert frontier_second_moment_bound(spec, 0) == 1.0
    t = 3
    first = sum(lam ** k for k in range(t, 2 * t + 1))
    second = sum(lam ** k for k in range(t - 1, 2 * t - 1))
    assert frontier_second_moment_bound(spec, t) == pytest.approx(first + lam_p * second)
    with pytest.raises(ValidationError):
        frontier_mean_bound(spec, -1)


def test_growth_stats_within_bounds():
    spec = diluted_spec(3000, {2: 0.6, 3: 0.2})
    stats = growth_stats(spec, depth=4, replicas=400, seed=40)
    assert stats.mean_i[0] == 1.0 and stats.se_i[0] == 0.0
    for t in range(5):
        assert stats.mean_i[t] <= stats.bound_lambda_t[t] + 3 * stats.se_i[t]
        assert stats.mean_i2[t] <= stats.bound_second_moment[t] + 3 * stats.se_i2[t]
    rows = growth_stats_rows(stats)
    assert [r["t"] for r in rows] == [0, 1, 2, 3, 4]
    assert rows[2]["mean_B"] == pytest.approx(
        stats.mean_i[0] + stats.mean_i[1] + stats.mean_i[2])
    assert 0.0 <= stats.cycle_prob <= 1.0


def test_growth_stats_deterministic():
    spec = diluted_spec(500, {2: 0.7})
    a = growth_stats(spec, 3, 50, seed=7)
    b = growth_stats(spec, 3, 50, seed=7)
    assert np.array_equal(a.mean_i, b.mean_i)
    assert np.array_equal(a.mean_i2, b.mean_i2)
    assert a.cycle_prob == b.cycle_prob


def test_probe_depth():
    spec = diluted_spec(1000, {2: 0.6, 3: 0.2})  # lambda = 2.4
    delta = 0.5 / (2 * math.log(2.4))
    assert probe_depth(spec, 1000, 0.5) == math.floor(delta * math.log(1000))
    with pytest.raises(ValidationError):
        probe_depth(diluted_spec(1000, {2: 0.4}), 1000, 0.5)  # lambda < 1
    with pytest.raises(ValidationError):
        probe_depth(spec, 1000, 1.5)


def test_hypertree_trend_rows():
    rows = hypertree_trend({2: 0.9, 3: 0.2}, [300, 600], eps=0.5,
                           replicas=60, seed=11)
    assert [r["n"] for r in rows] == [300, 600]
    for r in rows:
        spec = diluted_spec(r["n"], {2: 0.9, 3: 0.2})
        assert r["depth"] == probe_depth(spec, r["n"], 0.5)
        assert 0.0 <= r["cycle_prob"] <= 1.0
        assert r["se"] >= 0.0
    again = hypertree_trend({2: 0.9, 3: 0.2}, [300, 600], eps=0.5,
                            replicas=60, seed=11)
    assert again == rows
