"""Algorithm transformations: restriction, lift, projection, perturbation
chains and composition along full tree-decompositions.

Each wrapper is itself an ``OnlineAlgorithm``.  Wrappers forward arrivals to
their inner algorithms in arrival order, so every inner algorithm still sees
its elements in uniformly random order.
"""
from __future__ import annotations

import itertools
import json
import math
from dataclasses import asdict, dataclass, field

import numpy as np

from .algorithms import ClassicalSecretary, Nothing, OnlineAlgorithm, ThresholdGreedy
from .connectivity import (
    LambdaWitness,
    PerturbationStep,
    TreeDecomposition,
    connectivity,
    is_full,
    lemma_lambda_witness,
    normalize_leaf,
    thickness,
)
from .enumeration import density
from .errors import MatroidError
from .matroid import ENUMERATION_CAP, Matroid, same_rank_function

E_PLUS_1 = math.e + 1
HEADS_PROBABILITY = math.e / (math.e + 1)

_ghost_serial = itertools.count(1)


class RestrictWrap(OnlineAlgorithm):
    """Run ``inner`` (built for ground ``E``) on a stream over ``R``.

    Elements of ``E - R`` are injected as weight-0 ghosts at uniformly random
    positions of the inner stream; accepting a ghost has no effect outside.
    Ghosts lose every tie against real arrivals.
    """

    def __init__(self, inner: OnlineAlgorithm, R):
        R = frozenset(R)
        if not R <= inner.ground:
            raise MatroidError("restriction set must be inside the inner ground set")
        super().__init__(R)
        self.inner = inner
        self.ghosts = sorted(inner.ground - R)
        self.finite_coins = inner.finite_coins
        self.name = f"restrict({inner.name})"
        serial = next(_ghost_serial)
        g = len(self.ghosts)
        self._ghost_priority = [-(1 + serial) - j / (g + 1) for j in range(g)]

    def start(self, coins):
        self.inner.start(coins)
        ghosts = list(self.ghosts)
        # uniform interleaving: slot by slot, a ghost with prob ghosts_left / slots_left
        real_left = len(self.ground)
        ghost_left = len(ghosts)
        before = []
        run = 0
        while real_left:
            if ghost_left and coins.bernoulli(ghost_left / (ghost_left + real_left)):
                run += 1
                ghost_left -= 1
            else:
                before.append(run)
                run = 0
                real_left -= 1
        order = []
        for _ in range(len(ghosts) - ghost_left):
            order.append(ghosts.pop(coins.choice(len(ghosts))))
        self._before = before
        self._ghost_order = order
        self._next_real = 0
        self._next_ghost = 0
        self.ghost_picks = []

    def offer(self, element, weight, priority):
        k = self._before[self._next_real]
        self._next_real += 1
        for _ in range(k):
            j = self._next_ghost
            self._next_ghost += 1
            g = self._ghost_order[j]
            if self.inner.offer(g, 0.0, self._ghost_priority[j]):
                self.ghost_picks.append(g)
        return self.inner.offer(element, weight, priority)


def restrict_wrap(alg: OnlineAlgorithm, R) -> OnlineAlgorithm:
    R = frozenset(R)
    if R == alg.ground:
        return alg
    if not R:
        return Nothing(())
    return RestrictWrap(alg, R)


class Extend(OnlineAlgorithm):
    """Accept the same as ``inner`` and reject everything outside its ground set."""

    def __init__(self, inner: OnlineAlgorithm, ground):
        super().__init__(ground)
        if not inner.ground <= self.ground:
            raise MatroidError("extension must contain the inner ground set")
        self.inner = inner
        self.finite_coins = inner.finite_coins
        self.name = inner.name

    def start(self, coins):
        self.inner.start(coins)

    def offer(self, element, weight, priority):
        if element in self.inner.ground:
            return self.inner.offer(element, weight, priority)
        return False


class LiftWrap(OnlineAlgorithm):
    """Algorithm for ``N = L \\ x`` from ``alg_M`` for ``M = L / x``.

    The other members of ``x``'s parallel class are loops of ``M``; a
    classical secretary picks at most one of them.  All arrivals are also
    forwarded to ``alg_M`` so its stream stays complete, and its picks outside
    the parallel class are taken.
    """

    claim = "max(e, 2c)"

    def __init__(self, L: Matroid, x, alg_M: OnlineAlgorithm):
        if x not in L.ground or L.is_loop(x):
            raise MatroidError(f"{x} must be a non-loop of the ambient matroid")
        self.L, self.x = L, x
        self.N = L.delete([x])
        self.M = L.contract([x])
        if alg_M.ground != self.M.ground:
            raise MatroidError("inner algorithm must be bound to L / x")
        super().__init__(self.N.ground)
        self.inner = alg_M
        self.side = L.parallel_class(x) - {x}
        self.secretary = ClassicalSecretary(ground=self.side) if self.side else None
        self.finite_coins = alg_M.finite_coins
        self.name = f"lift({alg_M.name})"

    @staticmethod
    def bound(c: float) -> float:
        return max(math.e, 2 * c)

    def start(self, coins):
        self.inner.start(coins)
        if self.secretary is not None:
            self.secretary.start(coins)
        self.side_pick = []
        self.inner_picks = []

    def offer(self, element, weight, priority):
        if element in self.side:
            self.inner.offer(element, weight, priority)
            if self.secretary.offer(element, weight, priority):
                self.side_pick.append(element)
                return True
            return False
        if self.inner.offer(element, weight, priority):
            self.inner_picks.append(element)
            return True
        return False


def lift_wrap(L: Matroid, x, alg_M: OnlineAlgorithm) -> LiftWrap:
    return LiftWrap(L, x, alg_M)


class ProjectWrap(OnlineAlgorithm):
    """Algorithm for ``M \\ Lp`` with output independent in ``N = P / x``.

    ``M = P \\ x`` and ``Lp`` are the loops of ``N``.  One coin: with
    probability e/(e+1) run a classical secretary over ``N \\ Lp``; otherwise
    run ``alg`` and keep only those of its picks that stay independent in
    ``N`` (the rest are hired in pretence only).
    """

    claim = "(e+1)c"

    def __init__(self, P: Matroid, x, alg: OnlineAlgorithm):
        if x not in P.ground or P.is_loop(x):
            raise MatroidError(f"{x} must be a non-loop of the ambient matroid")
        self.P, self.x = P, x
        self.N = P.contract([x])
        self.M = P.delete([x])
        self.loops = self.N.loops()
        ground = self.M.ground - self.loops
        if alg.ground != ground:
            raise MatroidError("inner algorithm must be bound to (P \\ x) minus the loops of P / x")
        super().__init__(ground)
        self.inner = alg
        self.secretary = ClassicalSecretary(ground=ground) if ground else None
        self.finite_coins = alg.finite_coins
        self.name = f"project({alg.name})"

    @staticmethod
    def bound(c: float) -> float:
        return E_PLUS_1 * c

    def start(self, coins):
        self.heads = coins.bernoulli(HEADS_PROBABILITY)
        if self.heads:
            if self.secretary is not None:
                self.secretary.start(coins)
        else:
            self.inner.start(coins)
        self.kept = frozenset()
        self.virtual = []

    def offer(self, element, weight, priority):
        if self.heads:
            return self.secretary.offer(element, weight, priority)
        if not self.inner.offer(element, weight, priority):
            return False
        self.virtual.append(element)
        S = self.kept | {element}
        if self.N._r(S) == len(S):
            self.kept = S
            return True
        return False


def project_wrap(P: Matroid, x, alg: OnlineAlgorithm) -> ProjectWrap:
    return ProjectWrap(P, x, alg)


def _chain_matches(A: Matroid, B: Matroid, rng=None, samples: int = 2000) -> bool:
    if A.ground != B.ground:
        return False
    if len(A) <= ENUMERATION_CAP:
        return same_rank_function(A, B)
    rng = rng or np.random.default_rng(0)
    E = sorted(A.ground)
    for _ in range(samples):
        X = frozenset(e for e, m in zip(E, rng.random(len(E)) < 0.5) if m)
        if A._r(X) != B._r(X):
            return False
    return True


def perturb_wrap(steps, alg: OnlineAlgorithm) -> OnlineAlgorithm:
    """Carry ``alg`` (for the source of ``steps[0]``) along a chain of lifts and
    projections to an algorithm for the target of the last step.

    Projection steps first restrict away the new loops, then extend the
    result back to the full ground set by rejecting those loops.
    """
    steps = list(steps)
    for i, step in enumerate(steps):
        if i == 0:
            if alg.ground != step.source.ground:
                raise MatroidError("step 0: algorithm ground set differs from the source")
        elif not _chain_matches(steps[i - 1].target, step.source):
            raise MatroidError(f"step {i}: source does not match the previous target")
    for step in steps:
        if step.direction == "lift":
            alg = LiftWrap(step.ambient, step.x, alg)
        else:
            target = step.target
            loops = target.loops()
            inner = restrict_wrap(alg, target.ground - loops)
            alg = Extend(ProjectWrap(step.ambient, step.x, inner), target.ground)
    alg.perturbation_distance = len(steps)
    return alg


def multi_project_wrap(chain, alg: OnlineAlgorithm) -> OnlineAlgorithm:
    """Iterate ``project_wrap`` along a chain of single-element projections.

    ``chain`` is a ``LambdaWitness`` or a list of projection steps.  ``alg``
    is bound to the first source.  The result is bound to the final target
    minus its loops, and its output is independent in the final target.
    """
    steps = chain.steps() if isinstance(chain, LambdaWitness) else list(chain)
    for i, step in enumerate(steps):
        if step.direction != "projection":
            raise MatroidError(f"step {i} is not a projection")
        if i == 0 and alg.ground != step.source.ground:
            raise MatroidError("algorithm ground set differs from the first source")
    for step in steps:
        loops = step.target.loops()
        alg = ProjectWrap(step.ambient, step.x, restrict_wrap(alg, alg.ground - loops))
    alg.projections = len(steps)
    return alg


class Union(OnlineAlgorithm):
    """Run algorithms on disjoint ground sets side by side; take all their picks."""

    def __init__(self, parts):
        parts = [p for p in parts if p.ground]
        ground = frozenset().union(*(p.ground for p in parts))
        if sum(len(p.ground) for p in parts) != len(ground):
            raise MatroidError("union parts must have disjoint ground sets")
        super().__init__(ground)
        self.parts = parts
        self.route = {e: p for p in parts for e in p.ground}
        self.finite_coins = all(p.finite_coins for p in parts)
        self.name = "union(" + ",".join(p.name for p in parts) + ")"

    def start(self, coins):
        for p in self.parts:
            p.start(coins)

    def offer(self, element, weight, priority):
        return self.route[element].offer(element, weight, priority)


# -- tree composition ----------------------------------------------------


@dataclass
class CompositionPlan:
    """Audit trail of a tree composition.

    ``leaf_constant`` is the competitive constant assumed for every leaf
    algorithm (``None`` when unknown); ``thickness`` is k; the root claim is
    ``leaf_constant * (e+1)**k``.
    """

    thickness: int
    leaf_constant: float | None = None
    peels: list = field(default_factory=list)
    base: dict | None = None

    @property
    def factor(self) -> float:
        return E_PLUS_1 ** self.thickness

    @property
    def root_claim(self) -> float | None:
        if self.leaf_constant is None:
            return None
        return self.leaf_constant * self.factor

    def vertices(self) -> list:
        out = [p["leaf"] for p in self.peels]
        if self.base is not None:
            out.append(self.base["vertex"])
        return out

    def to_dict(self) -> dict:
        d = asdict(self)
        d["factor"] = self.factor
        d["root_claim"] = self.root_claim
        return d

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True, default=_jsonable)


def _jsonable(obj):
    if isinstance(obj, (set, frozenset)):
        return sorted(obj)
    return str(obj)


def tree_compose(M: Matroid, td: TreeDecomposition, factory, leaf_constant=None,
                 rng: np.random.Generator | None = None, check: bool = True):
    """Compose leaf algorithms along a full tree-decomposition.

    ``factory(matroid, vertex, label)`` must return an algorithm bound to
    ``matroid``, which is ``M' | cl(X_v)`` for the matroid ``M'`` current at
    that stage.  Leaves are peeled in the order of ``td.vertices``.

    Returns ``(algorithm, plan)``.
    """
    td.validate(M)
    if not is_full(M, td):
        raise MatroidError("tree-decomposition is not full")
    plan = CompositionPlan(thickness(M, td), leaf_constant)
    alg = _compose(M, td, factory, plan, rng, check)
    return alg, plan


def _build_leaf(factory, N: Matroid, v, label):
    if not N.ground:
        return Nothing(())
    try:
        alg = factory(N, v, label)
    except Exception as exc:
        raise MatroidError(f"leaf factory failed at vertex {v!r}: {exc}") from exc
    if alg.ground != N.ground:
        raise MatroidError(f"leaf algorithm at vertex {v!r} is not bound to M|cl(X_v)")
    return alg


def _compose(M, td, factory, plan, rng, check):
    if len(td.vertices) == 1:
        v = td.vertices[0]
        plan.base = {"vertex": v, "size": len(M)}
        return _build_leaf(factory, M, v, td.labels.get(v))
    leaf = next(v for v in td.vertices if len(td.neighbors(v)) == 1)
    u = td.neighbors(leaf)[0]
    lam_before = connectivity(M, td.parts[leaf])
    td, moved = normalize_leaf(M, td, leaf, check=check)
    X = td.parts[leaf]
    entry = {
        "leaf": leaf,
        "neighbor": u,
        "moved": sorted(moved),
        "lambda_before": lam_before,
        "lambda_after": connectivity(M, X),
    }
    parts = []
    if X:
        closure = M.closure(X)
        inner = _build_leaf(factory, M.restrict(closure), leaf, td.labels.get(leaf))
        inner = restrict_wrap(inner, X)
        witness = lemma_lambda_witness(M, X, rng)
        alg_leaf = multi_project_wrap(witness, inner)
        if alg_leaf.ground != X:
            raise MatroidError(f"M/(E - X) has loops at leaf {leaf!r}; normalisation failed")
        parts.append(alg_leaf)
        entry.update(I1=len(witness.I1), I2=len(witness.I2), t=witness.t,
                     closure_size=len(closure))
        if plan.leaf_constant is not None:
            entry["leaf_claim"] = plan.leaf_constant * E_PLUS_1 ** witness.t
    else:
        entry.update(I1=0, I2=0, t=0, closure_size=0)
    plan.peels.append(entry)
    rest = M.delete(X)
    sub = td.without(leaf)
    if check:
        assert is_full(rest, sub), "peeling a leaf broke fullness"
    parts.insert(0, _compose(rest, sub, factory, plan, rng, check))
    return Union(parts)


REGULAR_LABELS = ("graphic", "cographic", "r10")


def regular_leaf_factory(N: Matroid, vertex, label):
    # graphic and cographic leaves use the threshold-greedy stand-in
    return ThresholdGreedy(N)


def regular_compose(decomposition, leaf_constant=None, factory=regular_leaf_factory,
                    rng=None, check: bool = True):
    """Compose along a supplied regular-matroid decomposition.

    ``decomposition`` is a ``Decomposition`` (see ``msl.fileformat``) or a
    path to a decomposition file.  The decomposition must be full, of
    thickness at most 2, with every part labelled graphic, cographic or r10;
    r10 parts must have density exactly 2.  The composed algorithm is finally
    restricted to the decomposition's target set.
    """
    from .fileformat import Decomposition, load_decomposition

    if not isinstance(decomposition, Decomposition):
        decomposition = load_decomposition(decomposition)
    M, td = decomposition.matroid, decomposition.td
    td.validate(M)
    for v in td.vertices:
        label = td.labels.get(v)
        if label not in REGULAR_LABELS:
            raise MatroidError(f"vertex {v!r} has label {label!r}, expected one of {REGULAR_LABELS}")
        if label == "r10":
            part = M.restrict(M.closure(td.parts[v]))
            d = density(part)
            if d != 2:
                raise MatroidError(f"r10 part at vertex {v!r} has density {d}, expected 2")
    k = thickness(M, td)
    if k > 2:
        raise MatroidError(f"thickness {k} exceeds 2")
    alg, plan = tree_compose(M, td, factory, leaf_constant, rng, check)
    target = decomposition.target if decomposition.target is not None else M.ground
    return restrict_wrap(alg, target), plan
