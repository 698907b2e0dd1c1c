"""
Zero parts, the ideal of arrows factoring through zero objects, Z-kernels,
exactness, bounded Z-cokernel search and the zero-context checks.

A zero object is an algebra generated by its constants.  The zero part of
A is the constant closure inside A; an arrow ``f: A -> B`` factors through
a zero object exactly when its image lies in the zero part of B.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Sequence

from zexact.algebra import (
    FiniteAlgebra,
    Homomorphism,
    _index,
    closure,
    compose,
    enumerate_congruences,
    quotient,
    same_signature,
    subalgebra,
)
from zexact.errors import CompositionError, SignatureError
from zexact.homs import enumerate_homs, find_iso, hom_exists


@dataclass(frozen=True)
class ZeroPart:
    owner: FiniteAlgebra
    zero: FiniteAlgebra
    embedding: Homomorphism

    @property
    def elements(self) -> frozenset[int]:
        return frozenset(self.embedding.map)

    def index_of(self, a: int) -> int:
        return self.embedding.map.index(a)


@lru_cache(maxsize=4096)
def _zero_part(A: FiniteAlgebra) -> tuple[FiniteAlgebra, tuple[int, ...]]:
    Z, eps = subalgebra(A, closure(A))
    return Z, eps.map


def zero_part(A: FiniteAlgebra) -> ZeroPart:
    Z, elems = _zero_part(A)
    Z = Z.with_id(f"Z({A.id})" if A.id else "")
    return ZeroPart(A, Z, Homomorphism(Z, A, elems, check=False))


def is_zero_object(A: FiniteAlgebra) -> bool:
    return _zero_part(A)[0].size == A.size


def z_map(f: Homomorphism) -> Homomorphism:
    """Restriction of f to zero parts, ``Z(A) -> Z(B)``."""
    za, zb = zero_part(f.source), zero_part(f.target)
    where = {e: i for i, e in enumerate(zb.embedding.map)}
    return Homomorphism(za.zero, zb.zero, tuple(where[f.map[a]] for a in za.embedding.map), check=False)


def zero_parts_isomorphic(X: FiniteAlgebra, Y: FiniteAlgebra) -> bool:
    """``Z(X) ≅ Z(Y)``, decided by a hom each way (zero objects form a preorder)."""
    zx, zy = zero_part(X).zero, zero_part(Y).zero
    if hom_exists(zx, zy) and hom_exists(zy, zx):
        there = enumerate_homs(zx, zy)[0]
        if there.is_bijective():
            return True
    return find_iso(zx, zy) is not None


# -- the ideal N_Z ---------------------------------------------------------


@dataclass(frozen=True)
class NZWitness:
    arrow: Homomorphism
    chi: Homomorphism

    def check(self) -> bool:
        return compose(zero_part(self.arrow.target).embedding, self.chi) == self.arrow


def nz_membership(f: Homomorphism) -> NZWitness | None:
    zb = zero_part(f.target)
    where = {e: i for i, e in enumerate(zb.embedding.map)}
    if not all(v in where for v in f.map):
        return None
    chi = Homomorphism(f.source, zb.zero, tuple(where[v] for v in f.map), check=False)
    return NZWitness(f, chi)


def in_nz(f: Homomorphism) -> bool:
    return zero_part(f.target).elements.issuperset(f.map)


# -- Z-kernels -------------------------------------------------------------


@dataclass(frozen=True)
class ZKernel:
    arrow: Homomorphism
    kernel: FiniteAlgebra
    k: Homomorphism
    chi: Homomorphism

    @property
    def carrier(self) -> frozenset[int]:
        return frozenset(self.k.map)

    def mediate(self, e: Homomorphism) -> Homomorphism:
        """The unique φ with ``k∘φ = e``, for an arrow e with ``f∘e`` in N_Z."""
        where = {a: i for i, a in enumerate(self.k.map)}
        try:
            return Homomorphism(e.source, self.kernel, tuple(where[v] for v in e.map), check=False)
        except KeyError:
            raise ValueError("f∘e does not factor through the zero part") from None


def zkernel(f: Homomorphism) -> ZKernel:
    zb = zero_part(f.target)
    zel = zb.elements
    carrier = [a for a in range(f.source.size) if f.map[a] in zel]
    name = f"K({f.source.id})" if f.source.id else ""
    K, k = subalgebra(f.source, carrier, name)
    where = {e: i for i, e in enumerate(zb.embedding.map)}
    chi = Homomorphism(K, zb.zero, tuple(where[f.map[a]] for a in carrier), check=False)
    return ZKernel(f, K, k, chi)


@dataclass(frozen=True)
class Check:
    ok: bool
    reason: str = ""

    def __bool__(self):
        return self.ok


@dataclass(frozen=True)
class ExactSequence:
    """A composable pair ``K --k--> A --f--> B``; exactness is checked, not assumed."""

    k: Homomorphism
    f: Homomorphism

    def __post_init__(self):
        if self.k.target != self.f.source:
            raise CompositionError("codomain of k is not the domain of f")

    @classmethod
    def of(cls, f: Homomorphism) -> "ExactSequence":
        return cls(zkernel(f).k, f)

    def check(self) -> Check:
        return is_zexact(self.k, self.f)


def is_kernel_of(k: Homomorphism, f: Homomorphism) -> Check:
    """``k = Zker(f)`` up to the unique iso: k injective with image the Z-kernel carrier."""
    if k.target != f.source:
        raise CompositionError("codomain of k is not the domain of f")
    if not k.is_injective():
        return Check(False, "k is not injective")
    if k.image() != zkernel(f).carrier:
        return Check(False, "image of k differs from the Z-kernel of f")
    return Check(True)


def is_zexact(k: Homomorphism, f: Homomorphism) -> Check:
    if k.target != f.source:
        raise CompositionError("codomain of k is not the domain of f")
    if not f.is_surjective():
        return Check(False, "f is not surjective")
    return is_kernel_of(k, f)


# -- Z-cokernels -----------------------------------------------------------


@dataclass
class CandidateResult:
    q: Homomorphism
    ok: bool
    clause: str = ""
    probe: int | None = None
    factorizations: dict[int, Homomorphism] = field(default_factory=dict)

    def to_json(self):
        out = {"q": list(self.q.map), "target_size": self.q.target.size, "ok": self.ok}
        if not self.ok:
            out["clause"] = self.clause
            if self.probe is not None:
                out["probe"] = self.probe
        else:
            out["factorizations"] = {str(i): list(phi.map) for i, phi in sorted(self.factorizations.items())}
        return out


def check_zcokernel_candidate(f: Homomorphism, q: Homomorphism, probes: Sequence[Homomorphism]) -> CandidateResult:
    """Test q against the Z-cokernel property of f, relative to the probes."""
    if q.source != f.target:
        raise CompositionError("candidate does not start at the codomain of f")
    if not in_nz(compose(q, f)):
        return CandidateResult(q, False, "q∘f is not in N_Z")
    phis = {}
    for i, g in enumerate(probes):
        if g.source != q.source:
            raise CompositionError("probe does not start at the codomain of f")
        if not in_nz(compose(g, f)):
            continue
        matches = [phi for phi in enumerate_homs(q.target, g.target) if compose(phi, q) == g]
        if len(matches) != 1:
            clause = "no φ with φ∘q = g" if not matches else "φ with φ∘q = g is not unique"
            return CandidateResult(q, False, clause, i)
        phis[i] = matches[0]
    return CandidateResult(q, True, factorizations=phis)


@dataclass
class ZCokernelVerdict:
    found: bool
    q: Homomorphism | None
    factorizations: dict[int, Homomorphism]
    candidates: list[CandidateResult]
    scope: str = (
        "search covers quotient candidates of the codomain up to the size bound and "
        "tests the universal property only against the given probes"
    )

    def to_json(self):
        return {
            "found": self.found,
            "q": None if self.q is None else list(self.q.map),
            "candidates": [c.to_json() for c in self.candidates],
            "scope": self.scope,
            "verdict": (
                "Z-cokernel found among quotient candidates for these probes"
                if self.found
                else "no Z-cokernel among quotient candidates against these probes"
            ),
        }


def zcokernel_search(f: Homomorphism, bound: int, probes: Sequence[Homomorphism]) -> ZCokernelVerdict:
    if bound < 1:
        raise ValueError("bound must be positive")
    B = f.target
    if not B.signature.operations:
        raise SignatureError("empty signature")
    results = []
    for theta in enumerate_congruences(B):
        if theta.num_blocks > bound:
            continue
        _, q = quotient(B, theta)
        results.append(check_zcokernel_candidate(f, q, probes))
    for r in results:
        if r.ok:
            return ZCokernelVerdict(True, r.q, r.factorizations, results)
    return ZCokernelVerdict(False, None, {}, results)


# -- context checks --------------------------------------------------------


@dataclass
class ContextReport:
    ok: bool
    counterexample: dict | None = None
    checked: dict = field(default_factory=dict)

    def to_json(self):
        return {"ok": self.ok, "counterexample": self.counterexample, "checked": self.checked}


def _zero_members(catalog: Sequence[FiniteAlgebra]) -> list[FiniteAlgebra]:
    zs: list[FiniteAlgebra] = []
    for A in catalog:
        Z = A if is_zero_object(A) else zero_part(A).zero
        if Z not in zs:
            zs.append(Z)
    return zs


def verify_zero_context(catalog: Sequence[FiniteAlgebra]) -> ContextReport:
    """Check the three zero-context conditions exhaustively over a catalog.

    (i)   every injective hom from a zero object into A has image Z(A);
    (ii)  at most one hom from each zero object into each member;
    (iii) every hom from a zero object factors uniquely through every
          injective hom from a zero object into the same codomain.
    """
    if not catalog:
        raise ValueError("empty catalog")
    sig = same_signature(*catalog)
    if not sig.constants:
        raise SignatureError("signature has no constants")
    zeros = _zero_members(catalog)
    counts = {"i": 0, "ii": 0, "iii": 0}
    for A in catalog:
        zA = zero_part(A).elements
        monos = []
        for Z in zeros:
            homs = enumerate_homs(Z, A)
            counts["ii"] += 1
            if len(homs) > 1:
                return ContextReport(False, {"condition": "ii", "zero": Z.id, "algebra": A.id, "homs": [list(h.map) for h in homs]}, counts)
            for h in homs:
                if h.is_injective():
                    counts["i"] += 1
                    if h.image() != zA:
                        return ContextReport(False, {"condition": "i", "zero": Z.id, "algebra": A.id, "mono": list(h.map)}, counts)
                    monos.append(h)
        for z in monos:
            for Zp in zeros:
                for zp in enumerate_homs(Zp, A):
                    counts["iii"] += 1
                    phis = [phi for phi in enumerate_homs(Zp, z.source) if compose(z, phi) == zp]
                    if len(phis) != 1:
                        return ContextReport(
                            False,
                            {"condition": "iii", "algebra": A.id, "mono": list(z.map), "arrow": list(zp.map), "factorizations": len(phis)},
                            counts,
                        )
    return ContextReport(True, None, counts)


@dataclass
class InitialReport:
    initial: FiniteAlgebra | None
    certificates: dict[str, Homomorphism] = field(default_factory=dict)
    failing_target: FiniteAlgebra | None = None
    hom_count: int | None = None

    def to_json(self):
        return {
            "initial_size": None if self.initial is None else self.initial.size,
            "certificates": {k: list(h.map) for k, h in self.certificates.items()},
            "failing_target": None if self.failing_target is None else self.failing_target.id,
            "hom_count": self.hom_count,
        }


def product_zero_part(algebras: Sequence[FiniteAlgebra], id: str = "") -> FiniteAlgebra:
    """Z of a product, computed as the constant closure of tuples without building the product."""
    sig = same_signature(*algebras)
    comps = [{sym: (arity, t) for sym, arity, t in A.iter_ops()} for A in algebras]
    sizes = [A.size for A in algebras]

    def apply(sym, args):
        out = []
        for c, (comp, n) in enumerate(zip(comps, sizes)):
            arity, t = comp[sym]
            out.append(t[_index([a[c] for a in args], n)])
        return tuple(out)

    elems = {apply(sym, ()) for sym in sig.constants}
    frontier = set(elems)
    ops = [(sym, arity) for sym, arity in sig.operations if arity > 0]
    while frontier:
        current = sorted(elems)
        new = set()
        for sym, arity in ops:
            for args in itertools.product(current, repeat=arity):
                if frontier.isdisjoint(args):
                    continue
                r = apply(sym, args)
                if r not in elems:
                    new.add(r)
        elems |= new
        frontier = new
    carrier = sorted(elems)
    where = {e: i for i, e in enumerate(carrier)}
    tables = tuple(
        tuple(where[apply(sym, args)] for args in itertools.product(carrier, repeat=arity))
        for sym, arity in sig.operations
    )
    return FiniteAlgebra(sig, len(carrier), tables, id)


def initial_from_catalog(zlist: Sequence[FiniteAlgebra], targets: Sequence[FiniteAlgebra]) -> InitialReport:
    """Z of the product of the zero objects, certified initial against every target."""
    if not zlist:
        raise ValueError("empty list of zero objects")
    for Z in zlist:
        if not is_zero_object(Z):
            raise ValueError(f"{Z!r} is not generated by its constants")
    I = product_zero_part(list(zlist), "0")
    certs = {}
    for i, T in enumerate(targets):
        homs = enumerate_homs(I, T)
        if len(homs) != 1:
            return InitialReport(None, certs, T, len(homs))
        certs[T.id or str(i)] = homs[0]
    return InitialReport(I, certs)


def characteristic(R: FiniteAlgebra) -> int:
    """Additive order of 1 in a finite unitary ring."""
    one, zero = R.constant("1"), R.constant("0")
    x, n = one, 1
    while x != zero:
        x = R.op("+", x, one)
        n += 1
    return n

