"""Shared brute-force oracles.

Everything here is written independently of the package internals and on
purpose uses different mechanics: dense itertools enumeration instead of
blocked bit tricks, recursive path search instead of union-find, and so
on. Slow is fine; these only run on small instances.
"""

import itertools

import numpy as np
import pytest
from scipy.special import logsumexp

from spinchaos.hypergraph import Hypergraph, hypergraph


def all_states(n: int) -> np.ndarray:
    """(2^n, n) array of +-1 rows, itertools order."""
    return np.array(list(itertools.product((-1.0, 1.0), repeat=n)))


def dense_energies(graph: Hypergraph, couplings, states: np.ndarray) -> np.ndarray:
    vals = np.zeros(len(states))
    for c, edge in zip(couplings, graph.edges):
        vals += c * np.prod(states[:, list(edge)], axis=1)
    return vals


def dense_correlations(graph: Hypergraph, couplings, beta: float):
    """(corr, means, log_z) by direct enumeration and softmax weights."""
    states = all_states(graph.n)
    h = dense_energies(graph, couplings, states)
    logw = beta * h
    log_z = logsumexp(logw)
    w = np.exp(logw - log_z)
    means = w @ states
    corr = (states * w[:, None]).T @ states
    np.fill_diagonal(corr, 1.0)
    return corr, means, log_z


def dense_ground_states(graph: Hypergraph, couplings):
    """(max energy, list of maximizing state rows)."""
    states = all_states(graph.n)
    h = dense_energies(graph, couplings, states)
    best = h.max()
    keep = states[np.isclose(h, best, rtol=1e-12, atol=0.0)]
    return best, keep


def dense_ground_correlations(graph: Hypergraph, couplings):
    _, keep = dense_ground_states(graph, couplings)
    means = keep.mean(axis=0)
    corr = keep.T @ keep / len(keep)
    np.fill_diagonal(corr, 1.0)
    return corr, means


def berge_paths_exist(graph: Hypergraph, u: int, v: int):
    """Shortest Berge path length by exhaustive search; None if none.

    A Berge path is v_0, e_1, v_1, ..., e_l, v_l with distinct vertices,
    distinct edges, and {v_{k-1}, v_k} a subset of e_k.
    """
    if u == v:
        return 0
    best = [None]

    def extend(cur: int, used_v: set, used_e: set, length: int):
        if best[0] is not None and length >= best[0]:
            return
        for eid, edge in enumerate(graph.edges):
            if eid in used_e or cur not in edge:
                continue
            for nxt in edge:
                if nxt == v:
                    if best[0] is None or length + 1 < best[0]:
                        best[0] = length + 1
                elif nxt not in used_v:
                    extend(nxt, used_v | {nxt}, used_e | {eid}, length + 1)

    extend(u, {u}, set(), 0)
    return best[0]


def brute_has_berge_cycle(graph: Hypergraph) -> bool:
    """Exhaustive Berge cycle search: v_1, e_1, ..., v_l, e_l, v_1 with
    l >= 2, distinct vertices, distinct edges."""
    edges = graph.edges

    def walk(start: int, cur: int, used_v: set, used_e: set) -> bool:
        for eid, edge in enumerate(edges):
            if eid in used_e or cur not in edge:
                continue
            for nxt in edge:
                if nxt == start and len(used_e) >= 1:
                    return True
                if nxt not in used_v:
                    if walk(start, nxt, used_v | {nxt}, used_e | {eid}):
                        return True
        return False

    for start in range(graph.n):
        if walk(start, start, {start}, set()):
            return True
    return False


def random_hypergraph(rng, n_max: int = 7, e_max: int = 5,
                      arities=(2, 3)) -> Hypergraph:
    n = int(rng.integers(2, n_max + 1))
    m = int(rng.integers(1, e_max + 1))
    edges = []
    seen = set()
    for _ in range(m):
        p = int(rng.choice([a for a in arities if a <= n]))
        edge = tuple(sorted(rng.choice(n, size=p, replace=False).tolist()))
        if edge not in seen:
            seen.add(edge)
            edges.append(edge)
    return hypergraph(n, edges)


@pytest.fixture
def rng():
    return np.random.default_rng(20260815)
