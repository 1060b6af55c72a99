"""small fixtures, mostly for tests and the `gen er` subcommand"""

import networkx as nx

from spanlab.common.classes import Edge, Graph


def from_networkx(G: "nx.Graph[int] | nx.DiGraph[int]") -> Graph:
    """relabels to 0..n-1 in sorted node order, keeps `weight`/`label` attrs"""
    order = {node: i for i, node in enumerate(sorted(G.nodes))}
    edges = tuple(
        Edge(order[a], order[b], int(data.get("weight", 1)), data.get("label"))
        for a, b, data in sorted(G.edges(data=True), key=lambda e: (order[e[0]], order[e[1]]))
    )
    return Graph(len(order), edges, G.is_directed())


def erdos_renyi(n: int, p: float, seed: int) -> Graph:
    return from_networkx(nx.erdos_renyi_graph(n, p, seed=seed))


def path_graph(n: int) -> Graph:
    return Graph(n, tuple(Edge(i, i + 1) for i in range(n - 1)))


def cycle_graph(n: int) -> Graph:
    return Graph(n, tuple(Edge(i, (i + 1) % n) for i in range(n)))


def complete_graph(n: int) -> Graph:
    return Graph(n, tuple(Edge(i, j) for i in range(n) for j in range(i + 1, n)))


def complete_bipartite(a: int, b: int) -> Graph:
    """sides 0..a-1 and a..a+b-1"""
    return Graph(a + b, tuple(Edge(i, a + j) for i in range(a) for j in range(b)))


def star_graph(leaves: int) -> Graph:
    return Graph(leaves + 1, tuple(Edge(0, i) for i in range(1, leaves + 1)))
