"""Local connectivity, the connectivity function, tree-decompositions and
single-element perturbation witnesses."""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Hashable, Iterable

import numpy as np

from .errors import MatroidError
from .matroid import Matroid, Minor, same_rank_function


def local_connectivity(M: Matroid, X, Y) -> int:
    """r(X) + r(Y) - r(X | Y) for disjoint X, Y."""
    X, Y = M._check(X), M._check(Y)
    if X & Y:
        raise MatroidError(f"sets overlap on {sorted(X & Y)}")
    return M._r(X) + M._r(Y) - M._r(X | Y)


def connectivity(M: Matroid, X) -> int:
    """lambda_M(X) = local connectivity of X and its complement."""
    X = M._check(X)
    return M._r(X) + M._r(M.ground - X) - M.full_rank


# the short name mirrors the usual notation
lam = connectivity


@dataclass
class TreeDecomposition:
    """A tree ``T`` plus a partition of the ground set indexed by ``V(T)``.

    ``parts`` maps each vertex to a frozenset of elements; empty parts are fine.
    """

    vertices: tuple
    edges: tuple
    parts: dict = field(default_factory=dict)
    labels: dict = field(default_factory=dict)

    def __post_init__(self):
        self.vertices = tuple(self.vertices)
        self.edges = tuple(tuple(e) for e in self.edges)
        self.parts = {v: frozenset(self.parts.get(v, ())) for v in self.vertices}
        if len(set(self.vertices)) != len(self.vertices):
            raise MatroidError("repeated tree vertex")
        vs = set(self.vertices)
        for u, v in self.edges:
            if u not in vs or v not in vs or u == v:
                raise MatroidError(f"bad tree edge {u}-{v}")
        if not self.vertices:
            raise MatroidError("a tree needs at least one vertex")
        if len(self.edges) != len(self.vertices) - 1:
            raise MatroidError("not a tree: |E(T)| != |V(T)| - 1")
        # connected + |V|-1 edges => acyclic
        seen = {self.vertices[0]}
        stack = [self.vertices[0]]
        while stack:
            for w in self.neighbors(stack.pop()):
                if w not in seen:
                    seen.add(w)
                    stack.append(w)
        if seen != vs:
            raise MatroidError("not a tree: disconnected")

    @property
    def ground(self) -> frozenset:
        return frozenset().union(*self.parts.values())

    def neighbors(self, v) -> list:
        return [b if a == v else a for a, b in self.edges if v in (a, b)]

    def leaves(self) -> list:
        return [v for v in self.vertices if len(self.neighbors(v)) == 1]

    def side(self, edge, v) -> frozenset:
        """Union of the parts on ``v``'s side of tree edge ``edge``."""
        a, b = edge
        other = b if v == a else a
        seen, stack = {v}, [v]
        while stack:
            x = stack.pop()
            for y in self.neighbors(x):
                if y not in seen and {x, y} != {v, other}:
                    seen.add(y)
                    stack.append(y)
        return frozenset().union(*(self.parts[x] for x in seen))

    def validate(self, M: Matroid) -> None:
        total = sum(len(p) for p in self.parts.values())
        if total != len(self.ground) or self.ground != M.ground:
            raise MatroidError("parts must partition the ground set")

    def without(self, leaf) -> "TreeDecomposition":
        return TreeDecomposition(
            [v for v in self.vertices if v != leaf],
            [e for e in self.edges if leaf not in e],
            {v: p for v, p in self.parts.items() if v != leaf},
            {v: l for v, l in self.labels.items() if v != leaf},
        )


def edge_thickness(M: Matroid, td: TreeDecomposition, edge) -> int:
    return connectivity(M, td.side(edge, edge[0]))


def thickness(M: Matroid, td: TreeDecomposition) -> int:
    td.validate(M)
    return max((edge_thickness(M, td, e) for e in td.edges), default=0)


def is_full(M: Matroid, td: TreeDecomposition) -> bool:
    td.validate(M)
    return all(
        local_connectivity(M, td.parts[u], td.parts[v]) == edge_thickness(M, td, (u, v))
        for u, v in td.edges
    )


def normalize_leaf(M: Matroid, td: TreeDecomposition, leaf, check: bool = True):
    """Move ``X_leaf & cl(X_u)`` into ``X_u`` for the leaf's neighbour ``u``.

    Returns ``(new_td, moved)``.  With ``check`` the guarantees of the move
    (connectivity does not grow, fullness kept, leaf disjoint from the
    neighbour's closure) are asserted.
    """
    nbrs = td.neighbors(leaf)
    if len(nbrs) != 1:
        raise MatroidError(f"vertex {leaf!r} is not a leaf")
    u = nbrs[0]
    moved = td.parts[leaf] & M.closure(td.parts[u])
    if not moved:
        return td, moved
    parts = dict(td.parts)
    parts[leaf] = td.parts[leaf] - moved
    parts[u] = td.parts[u] | moved
    new = TreeDecomposition(td.vertices, td.edges, parts, dict(td.labels))
    if check:
        assert connectivity(M, parts[leaf]) <= connectivity(M, td.parts[leaf])
        assert not (parts[leaf] & M.closure(parts[u]))
        if is_full(M, td):
            assert is_full(M, new)
    return new, moved


# -- perturbations -------------------------------------------------------


@dataclass
class PerturbationStep:
    """One elementary lift or projection, witnessed by ``ambient`` and ``x``.

    ``direction="projection"``: the step goes from ``ambient \\ x`` to ``ambient / x``.
    ``direction="lift"``: the step goes from ``ambient / x`` to ``ambient \\ x``.
    """

    ambient: Matroid
    x: Hashable
    direction: str = "projection"

    def __post_init__(self):
        if self.direction not in ("lift", "projection"):
            raise MatroidError(f"unknown direction {self.direction!r}")
        if self.x not in self.ambient.ground:
            raise MatroidError(f"{self.x} not in the ambient ground set")
        if self.ambient.is_loop(self.x):
            raise MatroidError(f"{self.x} is a loop of the ambient matroid")

    @property
    def deletion(self) -> Minor:
        return self.ambient.delete([self.x])

    @property
    def contraction(self) -> Minor:
        return self.ambient.contract([self.x])

    @property
    def source(self) -> Minor:
        return self.deletion if self.direction == "projection" else self.contraction

    @property
    def target(self) -> Minor:
        return self.contraction if self.direction == "projection" else self.deletion


def verify_perturbation_step(step: PerturbationStep, M_from: Matroid, M_to: Matroid) -> bool:
    common = step.ambient.ground - {step.x}
    if M_from.ground != common or M_to.ground != common:
        raise MatroidError("ground sets do not match the ambient matroid minus x")
    return same_rank_function(step.source, M_from) and same_rank_function(step.target, M_to)


@dataclass
class LambdaWitness:
    """Certificate that ``M / (E-X)`` is ``|I3|`` projections away from ``M | X``.

    ``N = (M / I2) | (X | I3)`` satisfies ``N \\ I3 = M|X`` and ``N / I3 = M/(E-X)``.
    """

    X: frozenset
    I1: frozenset
    I2: frozenset
    I3: tuple
    N: Matroid

    @property
    def t(self) -> int:
        return len(self.I3)

    def steps(self) -> list[PerturbationStep]:
        """The projection chain, contracting ``I3`` one element at a time."""
        out = []
        for j, y in enumerate(self.I3):
            ambient = self.N.minor(contract=self.I3[:j], delete=self.I3[j + 1:])
            out.append(PerturbationStep(ambient, y, "projection"))
        return out


def _extend(M: Matroid, I: frozenset, candidates, within=None) -> frozenset:
    """Greedily extend independent ``I`` using ``candidates`` in the given order."""
    within = M if within is None else within
    for e in candidates:
        if within._r(I | {e}) == len(I) + 1:
            I = I | {e}
    return I


def lemma_lambda_witness(M: Matroid, X, rng: np.random.Generator | None = None) -> LambdaWitness:
    """Build I1, I2, I3 greedily (in that order) and the matroid N.

    ``rng`` only permutes the scan order; without it elements are scanned in
    increasing label order.
    """
    X = M._check(X)
    rest = M.ground - X

    def order(S):
        S = sorted(S)
        if rng is not None:
            S = [S[i] for i in rng.permutation(len(S))]
        return S

    I1 = _extend(M, frozenset(), order(X))
    I12 = _extend(M, I1, order(rest))
    I2 = I12 - I1
    rest_order = order(rest - I2)
    I23 = _extend(M, I2, rest_order)
    I3 = tuple(e for e in rest_order if e in I23 - I2)
    N = M.minor(contract=I2, delete=rest - I2 - frozenset(I3))
    return LambdaWitness(X, I1, I2, I3, N)
