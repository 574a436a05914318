"""Rank-oracle matroids: concrete families and lazy derived views.

Every matroid is a ground set of hashable integer labels plus a rank
function.  The concrete families label their elements ``1..n``.  Views
(minors, duals, truncations) keep the labels of the matroid they wrap, so
the relabeling map back to the parent is the identity; ``direct_sum`` is the
only construction that may shift labels and it records the map explicitly.
"""
from __future__ import annotations

import itertools
from typing import Callable, Iterable

import numpy as np

from .errors import MatroidError, ResourceLimitError

# rank memoization is switched on by default only for small ground sets
CACHE_LIMIT = 16
# exhaustive subset scans refuse ground sets larger than this
ENUMERATION_CAP = 20


class Matroid:
    """Base class.  Subclasses implement ``_rank(X)`` for a frozenset ``X``."""

    name = "matroid"

    def __init__(self, ground: Iterable[int], cache: bool | None = None):
        self.ground = frozenset(ground)
        if cache is None:
            cache = len(self.ground) <= CACHE_LIMIT
        # dict reads and writes are atomic; concurrent misses just recompute
        self._cache: dict | None = {} if cache else None
        self._full_rank: int | None = None

    def _rank(self, X: frozenset) -> int:
        raise NotImplementedError

    def _r(self, X: frozenset) -> int:
        cache = self._cache
        if cache is None:
            return self._rank(X)
        value = cache.get(X)
        if value is None:
            value = cache[X] = self._rank(X)
        return value

    def _check(self, X: Iterable[int]) -> frozenset:
        X = frozenset(X)
        if not X <= self.ground:
            raise MatroidError(f"elements {sorted(X - self.ground)} not in ground set")
        return X

    def __len__(self) -> int:
        return len(self.ground)

    def __repr__(self) -> str:
        return f"<{type(self).__name__} {self.name} n={len(self)} r={self.full_rank}>"

    # -- queries ---------------------------------------------------------

    def rank(self, X: Iterable[int] | None = None) -> int:
        if X is None:
            return self.full_rank
        return self._r(self._check(X))

    @property
    def full_rank(self) -> int:
        if self._full_rank is None:
            self._full_rank = self._r(self.ground)
        return self._full_rank

    def is_independent(self, X: Iterable[int]) -> bool:
        X = self._check(X)
        return self._r(X) == len(X)

    def closure(self, X: Iterable[int]) -> frozenset:
        X = self._check(X)
        rX = self._r(X)
        return X | frozenset(e for e in self.ground - X if self._r(X | {e}) == rX)

    def loops(self) -> frozenset:
        return frozenset(e for e in self.ground if self._r(frozenset((e,))) == 0)

    def is_loop(self, e: int) -> bool:
        return self.rank((e,)) == 0

    def parallel_class(self, e: int) -> frozenset:
        """Non-loops ``f`` with ``r({e, f}) = 1``, including ``e`` itself."""
        if self.is_loop(e):
            raise MatroidError(f"{e} is a loop")
        return frozenset(
            f for f in self.ground
            if self._r(frozenset((e, f))) == 1 and self._r(frozenset((f,))) == 1
        )

    def parallel_classes(self) -> list[frozenset]:
        seen: set[int] = set()
        classes = []
        for e in sorted(self.ground - self.loops()):
            if e in seen:
                continue
            cls = self.parallel_class(e)
            seen |= cls
            classes.append(cls)
        return classes

    # -- derived views ---------------------------------------------------

    def restrict(self, R: Iterable[int]) -> "Minor":
        R = self._check(R)
        return Minor(self, (), self.ground - R)

    def delete(self, D: Iterable[int]) -> "Minor":
        return Minor(self, (), D)

    def contract(self, C: Iterable[int]) -> "Minor":
        return Minor(self, C, ())

    def minor(self, contract: Iterable[int] = (), delete: Iterable[int] = ()) -> "Minor":
        return Minor(self, contract, delete)

    def dual(self) -> "Matroid":
        return dual(self)

    def truncate(self) -> "Truncation":
        return Truncation(self)

    # -- exhaustive helpers ----------------------------------------------

    def subsets(self, cap: int | None = None):
        """Yield every subset of the ground set as a frozenset."""
        elements = sorted(self.ground)
        cap = ENUMERATION_CAP if cap is None else cap
        if len(elements) > cap:
            raise ResourceLimitError(
                f"ground set of size {len(elements)} exceeds enumeration cap {cap}"
            )
        for k in range(len(elements) + 1):
            for X in itertools.combinations(elements, k):
                yield frozenset(X)


def same_rank_function(M1: Matroid, M2: Matroid, cap: int | None = None) -> bool:
    """Exhaustive rank-function equality on a common ground set."""
    if M1.ground != M2.ground:
        return False
    return all(M1._r(X) == M2._r(X) for X in M1.subsets(cap))


# -- concrete families ---------------------------------------------------


class UniformMatroid(Matroid):
    def __init__(self, r: int, n: int, cache: bool | None = None):
        if not 0 <= r <= n:
            raise MatroidError(f"need 0 <= r <= n, got r={r}, n={n}")
        super().__init__(range(1, n + 1), cache=False if cache is None else cache)
        self.r, self.n = r, n
        self.name = f"U{r},{n}"

    def _rank(self, X):
        return min(len(X), self.r)


class GraphicMatroid(Matroid):
    """Cycle matroid of a multigraph; element ``i`` is ``edges[i-1]``.

    Vertices are ``0..num_vertices-1``.  Loops and parallel edges are allowed.
    """

    def __init__(self, num_vertices: int, edges, cache: bool | None = None):
        self.num_vertices = num_vertices
        self.edges = {}
        for i, (u, v) in enumerate(edges, start=1):
            if not (0 <= u < num_vertices and 0 <= v < num_vertices):
                raise MatroidError(f"edge {i}=({u},{v}) has a vertex out of range")
            self.edges[i] = (u, v)
        super().__init__(self.edges, cache=cache)
        self.name = f"graphic(v={num_vertices},e={len(self.edges)})"

    def _rank(self, X):
        parent: dict[int, int] = {}

        def find(a):
            root = a
            while parent.get(root, root) != root:
                root = parent[root]
            while parent.get(a, a) != root:
                parent[a], a = root, parent[a]
            return root

        rank = 0
        for e in X:
            u, v = self.edges[e]
            ru, rv = find(u), find(v)
            if ru != rv:
                parent[ru] = rv
                rank += 1
        return rank


def complete_graph(n: int) -> GraphicMatroid:
    """M(K_n), edges in lexicographic order of their endpoints."""
    M = GraphicMatroid(n, list(itertools.combinations(range(n), 2)))
    M.name = f"M(K{n})"
    return M


def gf_rank(A: np.ndarray, p: int) -> int:
    """Rank of an integer matrix over GF(p) by row reduction with modular inverses."""
    A = np.array(A, dtype=np.int64) % p
    rows, cols = A.shape
    rank = 0
    for c in range(cols):
        if rank == rows:
            break
        nz = np.nonzero(A[rank:, c])[0]
        if nz.size == 0:
            continue
        piv = rank + int(nz[0])
        if piv != rank:
            A[[rank, piv]] = A[[piv, rank]]
        inv = pow(int(A[rank, c]), -1, p)
        A[rank] = (A[rank] * inv) % p
        below = rank + 1 + np.nonzero(A[rank + 1:, c])[0]
        if below.size:
            # entries < p <= 2**31 keep the products inside int64
            A[below] = (A[below] - np.outer(A[below, c], A[rank])) % p
        rank += 1
    return rank


class LinearMatroid(Matroid):
    """Column matroid of an ``r x n`` matrix over GF(p); column ``j`` is element ``j+1``."""

    def __init__(self, p: int, matrix, cache: bool | None = None):
        if p < 2 or p > 2**31 or any(p % q == 0 for q in range(2, int(p**0.5) + 1)):
            raise MatroidError(f"field order {p} is not a supported prime")
        A = np.array(matrix, dtype=np.int64)
        if A.ndim != 2:
            raise MatroidError("matrix must be two-dimensional")
        self.p = p
        self.matrix = A % p
        super().__init__(range(1, A.shape[1] + 1), cache=cache)
        self.name = f"linear(GF({p}),{A.shape[0]}x{A.shape[1]})"

    def _rank(self, X):
        if not X:
            return 0
        cols = [e - 1 for e in sorted(X)]
        return gf_rank(self.matrix[:, cols], self.p)


# Ten 0/1 vectors of length 5 with exactly three ones, over GF(2).
R10_MATRIX = np.array(
    [[1 if i in S else 0 for S in itertools.combinations(range(5), 3)] for i in range(5)],
    dtype=np.int64,
)


def r10() -> LinearMatroid:
    M = LinearMatroid(2, R10_MATRIX)
    M.name = "R10"
    return M


def fano() -> LinearMatroid:
    """F_7: the seven nonzero vectors of GF(2)^3."""
    cols = [[(k >> i) & 1 for i in range(3)] for k in range(1, 8)]
    M = LinearMatroid(2, np.array(cols).T)
    M.name = "F7"
    return M


class SparsePavingMatroid(Matroid):
    """Rank-r sparse paving matroid on ``1..n`` given by its circuit-hyperplanes."""

    def __init__(self, r: int, n: int, hyperplanes=(), cache: bool | None = None):
        if not 0 <= r <= n:
            raise MatroidError(f"need 0 <= r <= n, got r={r}, n={n}")
        hs = []
        for H in hyperplanes:
            H = frozenset(H)
            if len(H) != r or not H <= frozenset(range(1, n + 1)):
                raise MatroidError(f"hyperplane {sorted(H)} is not an {r}-subset of 1..{n}")
            hs.append(H)
        hset = frozenset(hs)
        if len(hset) != len(hs):
            raise MatroidError("repeated hyperplane")
        for H1, H2 in itertools.combinations(hs, 2):
            if len(H1 & H2) > r - 2:
                raise MatroidError(
                    f"hyperplanes {sorted(H1)} and {sorted(H2)} meet in more than r-2 elements"
                )
        super().__init__(range(1, n + 1), cache=False if cache is None else cache)
        self.r, self.n = r, n
        self.hyperplanes = hset
        self.name = f"sparsepaving(r={r},n={n},h={len(hset)})"

    def _rank(self, X):
        k = len(X)
        if k < self.r:
            return k
        if k == self.r and X in self.hyperplanes:
            return self.r - 1
        return self.r


class RankFunctionMatroid(Matroid):
    """Matroid from an explicit rank callable (axioms are the caller's problem)."""

    def __init__(self, ground, rank_fn: Callable[[frozenset], int], name="custom", cache=None):
        super().__init__(ground, cache=cache)
        self._fn = rank_fn
        self.name = name

    def _rank(self, X):
        return self._fn(X)


# -- views ---------------------------------------------------------------


class Minor(Matroid):
    """``M / C \\ D`` on ``E - C - D`` with rank ``r(X | C) - r(C)``."""

    def __init__(self, parent: Matroid, contract=(), delete=()):
        C = parent._check(contract)
        D = parent._check(delete)
        if C & D:
            raise MatroidError(f"contract and delete sets overlap on {sorted(C & D)}")
        super().__init__(parent.ground - C - D, cache=parent._cache is not None)
        # flatten nested minors so rank calls hit the underlying oracle once
        if isinstance(parent, Minor):
            C = C | parent.contracted
            D = D | parent.deleted
            parent = parent.parent
        self.parent = parent
        self.contracted = C
        self.deleted = D
        self._rC = parent._r(C)
        self.name = f"{parent.name}/{len(C)}\\{len(D)}"

    def _rank(self, X):
        return self.parent._r(X | self.contracted) - self._rC


def minor(M: Matroid, contract=(), delete=()) -> Minor:
    return Minor(M, contract, delete)


class Dual(Matroid):
    def __init__(self, parent: Matroid):
        super().__init__(parent.ground, cache=parent._cache is not None)
        self.parent = parent
        self.name = f"{parent.name}*"

    def _rank(self, X):
        P = self.parent
        return len(X) + P._r(P.ground - X) - P.full_rank


def dual(M: Matroid) -> Matroid:
    if isinstance(M, Dual):
        return M.parent
    if isinstance(M, UniformMatroid):
        return UniformMatroid(M.n - M.r, M.n)
    return Dual(M)


class Truncation(Matroid):
    """``T(M)``: rank capped at ``r(M) - 1``."""

    def __init__(self, parent: Matroid):
        if parent.full_rank < 1:
            raise MatroidError("cannot truncate a rank-0 matroid")
        super().__init__(parent.ground, cache=parent._cache is not None)
        self.parent = parent
        self.cap = parent.full_rank - 1
        self.name = f"T({parent.name})"

    def _rank(self, X):
        return min(self.parent._r(X), self.cap)


def truncate(M: Matroid) -> Truncation:
    return Truncation(M)


class DirectSum(Matroid):
    """``M1 + M2``.  If the ground sets overlap, ``M2`` is shifted past ``max(E1)``.

    ``maps[i]`` sends each element of the sum to its label in summand ``i``.
    """

    def __init__(self, M1: Matroid, M2: Matroid):
        shift = 0
        if M1.ground & M2.ground:
            shift = max(M1.ground)
        self.summands = (M1, M2)
        self.maps = (
            {e: e for e in M1.ground},
            {e + shift: e for e in M2.ground},
        )
        self.parts = tuple(frozenset(m) for m in self.maps)
        super().__init__(self.parts[0] | self.parts[1],
                         cache=M1._cache is not None and M2._cache is not None)
        self.name = f"({M1.name}+{M2.name})"

    def _rank(self, X):
        total = 0
        for M, m, part in zip(self.summands, self.maps, self.parts):
            total += M._r(frozenset(m[e] for e in X & part))
        return total


def direct_sum(M1: Matroid, M2: Matroid) -> DirectSum:
    return DirectSum(M1, M2)


def simplify(M: Matroid) -> tuple[Minor, dict[frozenset, int]]:
    """si(M): drop loops, keep the smallest label of each parallel class."""
    classes = M.parallel_classes()
    reps = {cls: min(cls) for cls in classes}
    S = M.restrict(reps.values())
    S.name = f"si({M.name})"
    return S, reps


def rank(M: Matroid, X) -> int:
    return M.rank(X)


def closure(M: Matroid, X) -> frozenset:
    return M.closure(X)
