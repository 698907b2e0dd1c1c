"""Homomorphism validation, enumeration, classification and factorization."""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import lru_cache
from typing import Sequence

from zexact.algebra import (
    FiniteAlgebra,
    Homomorphism,
    _index,
    closure,
    find_hom_violation,
    same_signature,
    subalgebra,
)
from zexact.errors import BudgetExceeded, TableError

DEFAULT_BUDGET = 10**9


@dataclass(frozen=True)
class HomCheck:
    ok: bool
    symbol: str | None = None
    args: tuple = ()

    def __bool__(self):
        return self.ok


def is_hom(mapping: Sequence[int], A: FiniteAlgebra, B: FiniteAlgebra) -> HomCheck:
    same_signature(A, B)
    if len(mapping) != A.size:
        raise TableError(f"map has length {len(mapping)}, source has size {A.size}")
    if any(not 0 <= v < B.size for v in mapping):
        raise TableError("map entry out of range of the target")
    bad = find_hom_violation(mapping, A, B)
    if bad is None:
        return HomCheck(True)
    return HomCheck(False, bad[0], tuple(bad[1]))


class _Search:
    """Backtracking over partial maps with forced-value propagation.

    Constants are seeded first; every assignment is closed under the
    operations (images of generated elements are forced) before the next
    free choice, which is always the smallest unassigned source element.
    """

    def __init__(self, A, B, budget, injective=False):
        self.A, self.B = A, B
        self.nA, self.nB = A.size, B.size
        self.budget = budget
        self.nodes = 0
        self.injective = injective
        self.ops = [
            (arity, ta, B.table(sym)) for sym, arity, ta in A.iter_ops() if arity > 0
        ]
        self.results: list[tuple[int, ...]] = []

    def _assign(self, m, used, order, x, y):
        """Assign x -> y and propagate; False on conflict."""
        queue = [(x, y)]
        nA, nB = self.nA, self.nB
        while queue:
            x, y = queue.pop()
            cur = m[x]
            if cur >= 0:
                if cur != y:
                    return False
                continue
            if self.injective:
                if y in used:
                    return False
                used.add(y)
            m[x] = y
            order.append(x)
            for arity, ta, tb in self.ops:
                if arity == 1:
                    queue.append((ta[x], tb[y]))
                elif arity == 2:
                    for w in order:
                        mw = m[w]
                        queue.append((ta[x * nA + w], tb[y * nB + mw]))
                        if w != x:
                            queue.append((ta[w * nA + x], tb[mw * nB + y]))
                else:
                    for args in itertools.product(order, repeat=arity):
                        if x not in args:
                            continue
                        queue.append(
                            (ta[_index(args, nA)], tb[_index([m[a] for a in args], nB)])
                        )
        return True

    def run(self):
        m = [-1] * self.nA
        used: set[int] = set()
        order: list[int] = []
        for sym in self.A.signature.constants:
            if not self._assign(m, used, order, self.A.constant(sym), self.B.constant(sym)):
                return []
        self._descend(m, used, order)
        return sorted(self.results)

    def _descend(self, m, used, order):
        try:
            x = m.index(-1)
        except ValueError:
            self.results.append(tuple(m))
            return
        for y in range(self.nB):
            self.nodes += 1
            if self.nodes > self.budget:
                raise BudgetExceeded(
                    f"hom search {self.A!r} -> {self.B!r} exceeded {self.budget} nodes"
                )
            m2, used2, order2 = list(m), set(used), list(order)
            if self._assign(m2, used2, order2, x, y):
                self._descend(m2, used2, order2)


def enumerate_maps(A: FiniteAlgebra, B: FiniteAlgebra, budget: int = DEFAULT_BUDGET, injective: bool = False):
    same_signature(A, B)
    return _Search(A, B, budget, injective).run()


@lru_cache(maxsize=8192)
def _maps_cached(A, B, budget):
    return tuple(enumerate_maps(A, B, budget))


def enumerate_homs(A: FiniteAlgebra, B: FiniteAlgebra, budget: int = DEFAULT_BUDGET) -> list[Homomorphism]:
    """All homomorphisms A -> B in lexicographic order of their maps."""
    return [Homomorphism(A, B, m, check=False) for m in _maps_cached(A, B, budget)]


@dataclass(frozen=True)
class Classification:
    injective: bool
    surjective: bool

    @property
    def bijective(self) -> bool:
        return self.injective and self.surjective


def classify(h: Homomorphism) -> Classification:
    return Classification(h.is_injective(), h.is_surjective())


@dataclass(frozen=True)
class Factorization:
    epi: Homomorphism
    mono: Homomorphism

    @property
    def middle(self) -> FiniteAlgebra:
        return self.epi.target


def image_factorize(h: Homomorphism) -> Factorization:
    middle, mono = subalgebra(h.target, h.image())
    where = {e: i for i, e in enumerate(mono.map)}
    epi = Homomorphism(h.source, middle, tuple(where[v] for v in h.map), check=False)
    return Factorization(epi, mono)


def restrict(h: Homomorphism, source_inclusion: Homomorphism | None = None, target_inclusion: Homomorphism | None = None) -> Homomorphism:
    """``h`` precomposed with a source inclusion and corestricted through a target inclusion.

    Raises TableError when the image escapes the target subalgebra.
    """
    src_map = source_inclusion.map if source_inclusion is not None else range(h.source.size)
    values = [h.map[s] for s in src_map]
    source = source_inclusion.source if source_inclusion is not None else h.source
    if target_inclusion is None:
        return Homomorphism(source, h.target, tuple(values), check=False)
    where = {e: i for i, e in enumerate(target_inclusion.map)}
    missing = [v for v in values if v not in where]
    if missing:
        raise TableError(f"image escapes the target subalgebra at element {missing[0]}")
    return Homomorphism(source, target_inclusion.source, tuple(where[v] for v in values), check=False)


def hom_exists(A: FiniteAlgebra, B: FiniteAlgebra, budget: int = DEFAULT_BUDGET) -> bool:
    return bool(_maps_cached(A, B, budget))


def _is_constant_generated(A: FiniteAlgebra) -> bool:
    return len(closure(A)) == A.size


def find_iso(A: FiniteAlgebra, B: FiniteAlgebra, budget: int = DEFAULT_BUDGET) -> Homomorphism | None:
    same_signature(A, B)
    if A.size != B.size:
        return None
    if _is_constant_generated(A) and _is_constant_generated(B):
        # at most one hom each way between constant-generated algebras
        there, back = enumerate_homs(A, B, budget), enumerate_homs(B, A, budget)
        if there and back and there[0].is_bijective():
            return there[0]
        return None
    maps = _Search(A, B, budget, injective=True).run()
    if not maps:
        return None
    return Homomorphism(A, B, maps[0], check=False)
