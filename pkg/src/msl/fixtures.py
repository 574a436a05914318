"""Built-in small matroids and decompositions used by the test and ledger suites."""
from __future__ import annotations

from .connectivity import TreeDecomposition
from .fileformat import Decomposition
from .matroid import (
    GraphicMatroid,
    LinearMatroid,
    SparsePavingMatroid,
    UniformMatroid,
    complete_graph,
    direct_sum,
    dual,
    fano,
    truncate,
)


def _named(M, name):
    M.name = name
    return M


def parallel_loop_graph() -> GraphicMatroid:
    """Triangle with one edge doubled plus a loop (5 elements)."""
    return _named(GraphicMatroid(3, [(0, 1), (0, 1), (1, 2), (0, 2), (2, 2)]), "triangle+parallel+loop")


def triple_parallel_graph() -> GraphicMatroid:
    """Triangle whose edge 0-1 is tripled (elements 1, 2, 3)."""
    return _named(GraphicMatroid(3, [(0, 1), (0, 1), (0, 1), (1, 2), (0, 2)]), "triangle+3parallel")


def triangle_plus_coloop() -> GraphicMatroid:
    return _named(GraphicMatroid(4, [(0, 1), (1, 2), (0, 2), (2, 3)]), "triangle+coloop")


def ternary_u24() -> LinearMatroid:
    return _named(LinearMatroid(3, [[1, 0, 1, 1], [0, 1, 1, 2]]), "U2,4/GF(3)")


def small_fixtures() -> dict:
    """Matroids with at most 8 elements, for exhaustive evaluation."""
    K4 = complete_graph(4)
    items = [
        UniformMatroid(1, 3),
        UniformMatroid(2, 3),
        UniformMatroid(2, 4),
        UniformMatroid(3, 3),
        UniformMatroid(3, 5),
        K4,
        parallel_loop_graph(),
        triple_parallel_graph(),
        triangle_plus_coloop(),
        ternary_u24(),
        _named(SparsePavingMatroid(3, 6, [(1, 2, 3), (4, 5, 6)]), "sparsepaving(3,6,h2)"),
        _named(direct_sum(UniformMatroid(1, 2), UniformMatroid(1, 2)), "U1,2+U1,2"),
        _named(direct_sum(UniformMatroid(2, 3), UniformMatroid(1, 2)), "U2,3+U1,2"),
        _named(dual(K4), "M*(K4)"),
        _named(truncate(K4), "T(M(K4))"),
        fano(),
        _named(direct_sum(UniformMatroid(1, 4), UniformMatroid(1, 4)), "U1,4+U1,4"),
    ]
    return {M.name: M for M in items}


def medium_fixtures() -> dict:
    """Matroids with up to 100 elements, for Monte Carlo evaluation."""
    items = [
        complete_graph(7),
        _named(SparsePavingMatroid(5, 12, [(1, 2, 3, 4, 5)]), "sparsepaving(5,12,h1)"),
        _named(dual(complete_graph(6)), "M*(K6)"),
        UniformMatroid(10, 40),
        _named(SparsePavingMatroid(6, 30, [range(1, 7), range(7, 13), range(13, 19)]),
               "sparsepaving(6,30,h3)"),
        UniformMatroid(20, 100),
    ]
    return {M.name: M for M in items}


def k4_triangle_star():
    """M(K4) split into a star (lower index, peeled first) and a triangle; thickness 2."""
    K4 = complete_graph(4)
    # edges: 1=01 2=02 3=03 4=12 5=13 6=23
    td = TreeDecomposition(["star", "tri"], [("star", "tri")],
                           {"tri": {1, 2, 4}, "star": {3, 5, 6}})
    return K4, td


def direct_sum_decomposition():
    M = direct_sum(UniformMatroid(1, 2), UniformMatroid(1, 2))
    M.name = "U1,2+U1,2"
    td = TreeDecomposition(["a", "b"], [("a", "b")], {"a": {1, 2}, "b": {3, 4}})
    return M, td


def graphic_two_sum() -> Decomposition:
    """Two 4-cycles glued along a doubled edge: the 6-cycle plus two parallel
    basepoint copies (elements 7, 8).  Parts are the two 4-cycles; thickness 1.
    The target restriction is the 6-cycle."""
    edges = [(0, 1), (1, 2), (2, 3),   # first cycle, closed by 7 = (3, 0)
             (3, 4), (4, 5), (5, 0),   # second cycle, closed by 8 = (0, 3)
             (3, 0), (0, 3)]
    M = GraphicMatroid(6, edges)
    M.name = "2-sum(C4,C4)+basepoints"
    td = TreeDecomposition(["a", "b"], [("a", "b")], {"a": {1, 2, 3, 7}, "b": {4, 5, 6, 8}},
                           {"a": "graphic", "b": "graphic"})
    return Decomposition(M, td, frozenset(range(1, 7)), {M.name: M}, {("a", "b"): 1})


def two_k5_graph():
    """Two copies of K5 sharing a vertex pair, the shared edge doubled (20 elements)."""
    import itertools

    first = list(itertools.combinations([0, 1, 2, 3, 4], 2))
    second = list(itertools.combinations([3, 4, 5, 6, 7], 2))
    M = GraphicMatroid(8, first + second)
    M.name = "K5 (2-sum) K5"
    td = TreeDecomposition(["a", "b"], [("a", "b")],
                           {"a": set(range(1, 11)), "b": set(range(11, 21))},
                           {"a": "graphic", "b": "graphic"})
    return M, td
