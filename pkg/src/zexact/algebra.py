"""
Finite algebras over signatures with constants.

Carriers are the indices ``0..size-1`` and every operation is a flat,
row-major table.  Algebras, homomorphisms and congruences are immutable and
hashable, so they can be used as cache keys by the engines built on top.
"""

from __future__ import annotations

import itertools
from dataclasses import InitVar, dataclass, field
from typing import Callable, Iterable, Mapping, Sequence, Union

from scipy.cluster.hierarchy import DisjointSet

from zexact.errors import (
    BoundExceeded,
    CompositionError,
    NotACongruence,
    NotAHomomorphism,
    SignatureError,
    SignatureMismatch,
    TableError,
)

DEFAULT_SIZE_BOUND = 16

Term = Union[str, tuple]


@dataclass(frozen=True)
class Signature:
    name: str
    operations: tuple[tuple[str, int], ...]

    def __post_init__(self):
        ops = tuple((str(s), int(a)) for s, a in self.operations)
        object.__setattr__(self, "operations", ops)
        symbols = [s for s, _ in ops]
        if len(set(symbols)) != len(symbols):
            raise SignatureError(f"duplicate operation symbols in signature {self.name!r}")
        if any(a < 0 for _, a in ops):
            raise SignatureError("arities must be non-negative")
        if not any(a == 0 for _, a in ops):
            raise SignatureError(f"signature {self.name!r} has no constant symbol")

    @property
    def symbols(self) -> tuple[str, ...]:
        return tuple(s for s, _ in self.operations)

    @property
    def constants(self) -> tuple[str, ...]:
        return tuple(s for s, a in self.operations if a == 0)

    def arity(self, symbol: str) -> int:
        for s, a in self.operations:
            if s == symbol:
                return a
        raise SignatureError(f"unknown symbol {symbol!r} in signature {self.name!r}")


# -- terms and equations ---------------------------------------------------


def term_variables(term: Term) -> list[str]:
    out: list[str] = []

    def walk(t):
        if isinstance(t, str):
            if t not in out:
                out.append(t)
        else:
            for arg in t[1:]:
                walk(arg)

    walk(term)
    return out


def normalize_term(term) -> Term:
    """Lists (as read from JSON) become tuples; variables stay strings."""
    if isinstance(term, str):
        return term
    if isinstance(term, (list, tuple)) and term and isinstance(term[0], str):
        return (term[0],) + tuple(normalize_term(t) for t in term[1:])
    raise SignatureError(f"malformed term {term!r}")


def term_to_json(term: Term):
    if isinstance(term, str):
        return term
    return [term[0]] + [term_to_json(t) for t in term[1:]]


def format_term(term: Term) -> str:
    if isinstance(term, str):
        return term
    if len(term) == 1:
        return term[0]
    return f"{term[0]}({', '.join(format_term(t) for t in term[1:])})"


@dataclass(frozen=True)
class Equation:
    lhs: Term
    rhs: Term

    def __post_init__(self):
        object.__setattr__(self, "lhs", normalize_term(self.lhs))
        object.__setattr__(self, "rhs", normalize_term(self.rhs))

    @property
    def variables(self) -> list[str]:
        vs = term_variables(self.lhs)
        vs += [v for v in term_variables(self.rhs) if v not in vs]
        return vs

    def __str__(self):
        return f"{format_term(self.lhs)} = {format_term(self.rhs)}"


@dataclass(frozen=True)
class VarietyPreset:
    signature: Signature
    axioms: tuple[Equation, ...]

    def __post_init__(self):
        object.__setattr__(self, "axioms", tuple(self.axioms))
        for eq in self.axioms:
            self._check_term(eq.lhs)
            self._check_term(eq.rhs)

    def _check_term(self, term):
        if isinstance(term, str):
            return
        sym, args = term[0], term[1:]
        if self.signature.arity(sym) != len(args):
            raise SignatureError(
                f"symbol {sym!r} used with {len(args)} arguments, "
                f"declared arity {self.signature.arity(sym)}"
            )
        for a in args:
            self._check_term(a)

    @property
    def name(self) -> str:
        return self.signature.name


# -- algebras --------------------------------------------------------------


def _index(args: Sequence[int], n: int) -> int:
    i = 0
    for a in args:
        i = i * n + a
    return i


@dataclass(frozen=True, eq=False)
class FiniteAlgebra:
    signature: Signature
    size: int
    tables: tuple[tuple[int, ...], ...]
    id: str = ""

    def __post_init__(self):
        n = self.size
        if n < 1:
            raise TableError("carrier must be nonempty")
        tables = tuple(tuple(int(v) for v in t) for t in self.tables)
        if len(tables) != len(self.signature.operations):
            raise TableError(
                f"expected {len(self.signature.operations)} tables, got {len(tables)}"
            )
        ops = {}
        for (sym, arity), t in zip(self.signature.operations, tables):
            if len(t) != n**arity:
                raise TableError(f"table for {sym!r} has {len(t)} entries, expected {n**arity}")
            for pos, v in enumerate(t):
                if not 0 <= v < n:
                    raise TableError(f"table for {sym!r} has entry {v} out of range at {pos}")
            ops[sym] = (arity, t)
        object.__setattr__(self, "tables", tables)
        object.__setattr__(self, "_ops", ops)
        object.__setattr__(self, "_key", (self.signature, n, tables))
        object.__setattr__(self, "_hash", hash((self.signature, n, tables)))

    @classmethod
    def from_functions(
        cls,
        signature: Signature,
        size: int,
        functions: Mapping[str, Callable[..., int]],
        id: str = "",
    ) -> "FiniteAlgebra":
        tables = []
        for sym, arity in signature.operations:
            fn = functions[sym]
            if arity == 0:
                tables.append((fn() if callable(fn) else fn,))
            else:
                tables.append(
                    tuple(fn(*args) for args in itertools.product(range(size), repeat=arity))
                )
        return cls(signature, size, tuple(tables), id)

    def __eq__(self, other):
        if not isinstance(other, FiniteAlgebra):
            return NotImplemented
        return self._hash == other._hash and self._key == other._key

    def __hash__(self):
        return self._hash

    def __repr__(self):
        label = self.id or "anon"
        return f"FiniteAlgebra({label!r}, {self.signature.name}, size={self.size})"

    def with_id(self, id: str) -> "FiniteAlgebra":
        return FiniteAlgebra(self.signature, self.size, self.tables, id)

    @property
    def elements(self) -> range:
        return range(self.size)

    def table(self, symbol: str) -> tuple[int, ...]:
        return self._ops[symbol][1]

    def op(self, symbol: str, *args: int) -> int:
        arity, t = self._ops[symbol]
        if len(args) != arity:
            raise SignatureError(f"{symbol!r} takes {arity} arguments")
        return t[_index(args, self.size)]

    def constant(self, symbol: str) -> int:
        return self._ops[symbol][1][0]

    def constant_values(self) -> set[int]:
        return {self._ops[s][1][0] for s in self.signature.constants}

    def nested_table(self, symbol: str):
        """Table as nested lists (a bare int for constants)."""
        arity, t = self._ops[symbol]
        n = self.size

        def build(prefix_index, depth):
            if depth == arity:
                return t[prefix_index]
            return [build(prefix_index * n + a, depth + 1) for a in range(n)]

        return build(0, 0)

    def iter_ops(self):
        """Yield ``(symbol, arity, flat_table)`` in signature order."""
        for sym, arity in self.signature.operations:
            yield sym, arity, self._ops[sym][1]


def trivial_algebra(signature: Signature, id: str = "1") -> FiniteAlgebra:
    return FiniteAlgebra(
        signature, 1, tuple((0,) for _ in signature.operations), id
    )


def same_signature(*algebras: FiniteAlgebra) -> Signature:
    sig = algebras[0].signature
    for alg in algebras[1:]:
        if alg.signature != sig:
            raise SignatureMismatch(
                f"signature {alg.signature.name!r} differs from {sig.name!r}"
            )
    return sig


# -- homomorphisms ---------------------------------------------------------


def find_hom_violation(mapping: Sequence[int], A: FiniteAlgebra, B: FiniteAlgebra):
    """First ``(symbol, args)`` where ``mapping`` fails to commute, else None.

    Constants are checked before the other operations so that a broken
    constant is always the reported witness.
    """
    n = A.size
    ops = list(A.iter_ops())
    for sym, arity, t in ops:
        if arity == 0 and mapping[t[0]] != B.constant(sym):
            return sym, ()
    for sym, arity, t in ops:
        if arity == 0:
            continue
        tb = B.table(sym)
        for pos, args in enumerate(itertools.product(range(n), repeat=arity)):
            img = [mapping[a] for a in args]
            if mapping[t[pos]] != tb[_index(img, B.size)]:
                return sym, args
    return None


@dataclass(frozen=True, eq=False)
class Homomorphism:
    source: FiniteAlgebra
    target: FiniteAlgebra
    map: tuple[int, ...]
    check: InitVar[bool] = True

    def __post_init__(self, check):
        m = tuple(int(x) for x in self.map)
        object.__setattr__(self, "map", m)
        if check:
            if self.source.signature != self.target.signature:
                raise SignatureMismatch("homomorphism endpoints have different signatures")
            if len(m) != self.source.size:
                raise TableError(f"map has length {len(m)}, source has size {self.source.size}")
            if any(not 0 <= x < self.target.size for x in m):
                raise TableError("map entry out of range of the target")
            bad = find_hom_violation(m, self.source, self.target)
            if bad is not None:
                raise NotAHomomorphism(*bad)
        object.__setattr__(self, "_hash", hash((self.source, self.target, m)))

    @classmethod
    def identity(cls, A: FiniteAlgebra) -> "Homomorphism":
        return cls(A, A, tuple(range(A.size)), check=False)

    def __eq__(self, other):
        if not isinstance(other, Homomorphism):
            return NotImplemented
        return (
            self._hash == other._hash
            and self.map == other.map
            and self.source == other.source
            and self.target == other.target
        )

    def __hash__(self):
        return self._hash

    def __repr__(self):
        return f"Homomorphism({self.source.id or '?'} -> {self.target.id or '?'}, {list(self.map)})"

    def __call__(self, x: int) -> int:
        return self.map[x]

    def __matmul__(self, other: "Homomorphism") -> "Homomorphism":
        return compose(self, other)

    def image(self) -> frozenset[int]:
        return frozenset(self.map)

    def is_injective(self) -> bool:
        return len(set(self.map)) == len(self.map)

    def is_surjective(self) -> bool:
        return len(set(self.map)) == self.target.size

    def is_bijective(self) -> bool:
        return self.source.size == self.target.size and self.is_injective()


def compose(g: Homomorphism, f: Homomorphism) -> Homomorphism:
    """``g ∘ f``."""
    if f.target != g.source:
        raise CompositionError(
            f"cannot compose: {f.target!r} is not the source {g.source!r}"
        )
    return Homomorphism(f.source, g.target, tuple(g.map[x] for x in f.map), check=False)


def compose_all(*arrows: Homomorphism) -> Homomorphism:
    """Compose in target-to-source order: ``compose_all(h, g, f) = h∘g∘f``."""
    out = arrows[-1]
    for h in reversed(arrows[:-1]):
        out = compose(h, out)
    return out


# -- model checking --------------------------------------------------------


def _compile(term: Term, alg: FiniteAlgebra, slots: Mapping[str, int]):
    if isinstance(term, str):
        i = slots[term]
        return lambda env: env[i]
    sym, args = term[0], term[1:]
    t = alg.table(sym)
    fs = [_compile(a, alg, slots) for a in args]
    n = alg.size
    if not fs:
        c = t[0]
        return lambda env: c
    if len(fs) == 1:
        f0 = fs[0]
        return lambda env: t[f0(env)]
    if len(fs) == 2:
        f0, f1 = fs
        return lambda env: t[f0(env) * n + f1(env)]
    return lambda env: t[_index([f(env) for f in fs], n)]


@dataclass(frozen=True)
class ModelReport:
    valid: bool
    axiom: Equation | None = None
    assignment: dict | None = None

    def __bool__(self):
        return self.valid


def check_model(alg: FiniteAlgebra, variety: VarietyPreset) -> ModelReport:
    if alg.signature != variety.signature:
        raise SignatureMismatch(
            f"algebra signature {alg.signature.name!r} is not {variety.signature.name!r}"
        )
    for eq in variety.axioms:
        names = eq.variables
        slots = {v: i for i, v in enumerate(names)}
        lhs = _compile(eq.lhs, alg, slots)
        rhs = _compile(eq.rhs, alg, slots)
        for env in itertools.product(range(alg.size), repeat=len(names)):
            if lhs(env) != rhs(env):
                return ModelReport(False, eq, dict(zip(names, env)))
    return ModelReport(True)


# -- subalgebras and products ----------------------------------------------


def subalgebra(A: FiniteAlgebra, elements: Iterable[int], id: str = "") -> tuple[FiniteAlgebra, Homomorphism]:
    """Induced subalgebra on a closed subset, with its inclusion."""
    elems = sorted(set(elements))
    where = {e: i for i, e in enumerate(elems)}
    k = len(elems)
    tables = []
    for sym, arity, t in A.iter_ops():
        out = []
        for args in itertools.product(elems, repeat=arity):
            r = t[_index(args, A.size)]
            if r not in where:
                raise TableError(f"subset is not closed under {sym!r} at {args}")
            out.append(where[r])
        tables.append(tuple(out))
    S = FiniteAlgebra(A.signature, k, tuple(tables), id)
    return S, Homomorphism(S, A, tuple(elems), check=False)


def closure(A: FiniteAlgebra, seeds: Iterable[int] = ()) -> frozenset[int]:
    """Smallest subset containing seeds and the constants, closed under all operations."""
    S = set(seeds) | A.constant_values()
    if any(not 0 <= s < A.size for s in S):
        raise TableError("seed outside the carrier")
    frontier = set(S)
    ops = [(arity, t) for _, arity, t in A.iter_ops() if arity > 0]
    while frontier:
        new = set()
        current = sorted(S)
        for arity, t in ops:
            for args in itertools.product(current, repeat=arity):
                if frontier.isdisjoint(args):
                    continue
                r = t[_index(args, A.size)]
                if r not in S:
                    new.add(r)
        S |= new
        frontier = new
    return frozenset(S)


def generate_subalgebra(A: FiniteAlgebra, seeds: Iterable[int] = (), id: str = ""):
    return subalgebra(A, closure(A, seeds), id)


def product_of(algebras: Sequence[FiniteAlgebra], id: str = "") -> tuple[FiniteAlgebra, list[Homomorphism]]:
    """Cartesian product with lexicographically ordered carrier and its projections."""
    if not algebras:
        raise ValueError("product of an empty family needs a signature; use trivial_algebra")
    sig = same_signature(*algebras)
    sizes = [B.size for B in algebras]
    tuples = list(itertools.product(*(range(s) for s in sizes)))
    where = {t: i for i, t in enumerate(tuples)}
    tables = []
    for sym, arity in sig.operations:
        comp = [B.table(sym) for B in algebras]
        out = []
        for args in itertools.product(tuples, repeat=arity):
            res = tuple(
                comp[j][_index([a[j] for a in args], sizes[j])] for j in range(len(algebras))
            )
            out.append(where[res])
        tables.append(tuple(out))
    P = FiniteAlgebra(sig, len(tuples), tuple(tables), id)
    projections = [
        Homomorphism(P, B, tuple(t[j] for t in tuples), check=False)
        for j, B in enumerate(algebras)
    ]
    return P, projections


def product(A: FiniteAlgebra, B: FiniteAlgebra, id: str = ""):
    P, (pa, pb) = product_of([A, B], id or (f"{A.id}x{B.id}" if A.id and B.id else ""))
    return P, pa, pb


def pair_index(A: FiniteAlgebra, B: FiniteAlgebra, a: int, b: int) -> int:
    return a * B.size + b


# -- congruences -----------------------------------------------------------


def canonical_blocks(labels: Sequence) -> tuple[int, ...]:
    """Relabel so block numbers appear in order of their least element."""
    seen: dict = {}
    out = []
    for x in labels:
        if x not in seen:
            seen[x] = len(seen)
        out.append(seen[x])
    return tuple(out)


@dataclass(frozen=True)
class Congruence:
    algebra: FiniteAlgebra
    blocks: tuple[int, ...]
    check: InitVar[bool] = True

    def __post_init__(self, check):
        blocks = canonical_blocks(self.blocks)
        object.__setattr__(self, "blocks", blocks)
        if len(blocks) != self.algebra.size:
            raise TableError("block map must cover the carrier")
        if check:
            bad = compatibility_violation(self.algebra, blocks)
            if bad is not None:
                raise NotACongruence(*bad)

    @classmethod
    def identity(cls, A: FiniteAlgebra) -> "Congruence":
        return cls(A, tuple(range(A.size)), check=False)

    @classmethod
    def full(cls, A: FiniteAlgebra) -> "Congruence":
        return cls(A, (0,) * A.size, check=False)

    @classmethod
    def kernel(cls, h: Homomorphism) -> "Congruence":
        """Kernel pair of a homomorphism as a partition of its source."""
        return cls(h.source, h.map, check=False)

    @property
    def num_blocks(self) -> int:
        return max(self.blocks) + 1

    def related(self, a: int, b: int) -> bool:
        return self.blocks[a] == self.blocks[b]

    def classes(self) -> list[list[int]]:
        out: list[list[int]] = [[] for _ in range(self.num_blocks)]
        for x, b in enumerate(self.blocks):
            out[b].append(x)
        return out

    def refines(self, other: "Congruence") -> bool:
        """True when every block of self lies inside a block of other."""
        return all(other.blocks[x] == other.blocks[c[0]] for c in self.classes() for x in c)

    def sort_key(self):
        return (self.num_blocks, self.blocks)


def compatibility_violation(A: FiniteAlgebra, blocks: Sequence[int]):
    """Witness ``(symbol, args, position, replacement)`` that breaks compatibility, or None."""
    rep: dict[int, int] = {}
    for x, b in enumerate(blocks):
        rep.setdefault(b, x)
    n = A.size
    for sym, arity, t in A.iter_ops():
        for pos, args in enumerate(itertools.product(range(n), repeat=arity)):
            r = blocks[t[pos]]
            for i, a in enumerate(args):
                m = rep[blocks[a]]
                if m == a:
                    continue
                other = args[:i] + (m,) + args[i + 1 :]
                if blocks[t[_index(other, n)]] != r:
                    return sym, args, i, m
    return None


def generate_congruence(A: FiniteAlgebra, pairs: Iterable[tuple[int, int]]) -> Congruence:
    """Smallest congruence identifying every given pair (union-find closure)."""
    n = A.size
    ds = DisjointSet(range(n))
    for a, b in pairs:
        ds.merge(a, b)
    ops = [(arity, t) for _, arity, t in A.iter_ops() if arity > 0]
    changed = True
    while changed:
        changed = False
        for arity, t in ops:
            for pos, args in enumerate(itertools.product(range(n), repeat=arity)):
                r = t[pos]
                for i, a in enumerate(args):
                    root = ds[a]
                    if root == a:
                        continue
                    other = args[:i] + (root,) + args[i + 1 :]
                    if ds.merge(r, t[_index(other, n)]):
                        changed = True
    return Congruence(A, tuple(ds[x] for x in range(n)), check=False)


def congruence_join(theta: Congruence, psi: Congruence) -> Congruence:
    if theta.algebra != psi.algebra:
        raise SignatureMismatch("congruences live on different algebras")
    pairs = [(x, c[0]) for cong in (theta, psi) for c in cong.classes() for x in c[1:]]
    return generate_congruence(theta.algebra, pairs)


def enumerate_congruences(A: FiniteAlgebra, bound: int = DEFAULT_SIZE_BOUND) -> list[Congruence]:
    """All congruences of A, ordered by number of blocks then block map."""
    if A.size > bound:
        raise BoundExceeded(f"algebra of size {A.size} exceeds the bound {bound}")
    principals = {
        generate_congruence(A, [(a, b)]) for a in range(A.size) for b in range(a + 1, A.size)
    }
    found = {Congruence.identity(A)}
    for p in sorted(principals, key=Congruence.sort_key):
        found |= {congruence_join(c, p) for c in found}
    return sorted(found, key=Congruence.sort_key)


def quotient(A: FiniteAlgebra, theta: Congruence, id: str = "") -> tuple[FiniteAlgebra, Homomorphism]:
    if theta.algebra != A:
        raise SignatureMismatch("congruence belongs to a different algebra")
    bad = compatibility_violation(A, theta.blocks)
    if bad is not None:
        raise NotACongruence(*bad)
    reps = [c[0] for c in theta.classes()]
    k = len(reps)
    tables = []
    for _, arity, t in A.iter_ops():
        tables.append(
            tuple(
                theta.blocks[t[_index([reps[b] for b in args], A.size)]]
                for args in itertools.product(range(k), repeat=arity)
            )
        )
    Q = FiniteAlgebra(A.signature, k, tuple(tables), id)
    return Q, Homomorphism(A, Q, theta.blocks, check=False)
