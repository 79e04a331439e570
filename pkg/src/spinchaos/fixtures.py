"""Built-in hypergraphs used by experiments and tests.

Every fixture is deterministic (the diluted demo is a frozen draw from a
fixed stream) and can be written to the text format, so external tools
can reproduce runs without this package.
"""

from __future__ import annotations

from .chaos import remark_graph, two_lobe_graph
from .errors import ValidationError
from .hypergraph import Hypergraph, hypergraph
from .randgraph import diluted_spec, sample_diluted
from .rng import substream

_DEMO_SEED = 715

DESCRIPTIONS = {
    "remark-path-graph": "4 vertices, edges {0,1},{0,2},{1,3}; the pair (0,1) "
                         "has <s0 s1> = tanh(beta c_01) exactly",
    "figure1-hypergraph": "7 vertices, 5 hyperedges; two 3-spin lobes joined by "
                          "a bridge through hub 0; <s1 s4> decouples",
    "ea-ring": "8-vertex 2-spin ring, 8 edges",
    "ea-torus-4x4": "4x4 periodic square lattice, 16 vertices, 32 2-spin edges",
    "diluted-demo": "frozen diluted draw, N=16, alpha_2=0.6, alpha_3=0.2 "
                    "(growth rate 2.4)",
}


def ring(n: int) -> Hypergraph:
    return hypergraph(n, [tuple(sorted((v, (v + 1) % n))) for v in range(n)])


def torus_4x4() -> Hypergraph:
    def vid(r, c):
        return 4 * (r % 4) + (c % 4)
    edges = []
    for r in range(4):
        for c in range(4):
            edges.append(tuple(sorted((vid(r, c), vid(r, c + 1)))))
            edges.append(tuple(sorted((vid(r, c), vid(r + 1, c)))))
    return hypergraph(16, edges)


def get_fixture(name: str) -> Hypergraph:
    if name == "remark-path-graph":
        return remark_graph()
    if name == "figure1-hypergraph":
        return two_lobe_graph(0)[0]
    if name == "ea-ring":
        return ring(8)
    if name == "ea-torus-4x4":
        return torus_4x4()
    if name == "diluted-demo":
        spec = diluted_spec(16, {2: 0.6, 3: 0.2})
        return sample_diluted(spec, substream(_DEMO_SEED, "fixture", name))
    raise ValidationError(f"unknown fixture {name!r}; know {sorted(DESCRIPTIONS)}")


def catalog() -> dict[str, tuple[Hypergraph, str]]:
    return {name: (get_fixture(name), desc) for name, desc in sorted(DESCRIPTIONS.items())}
