"""Squares, binary pullbacks and commutativity checks over finite algebras."""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Sequence

from zexact.algebra import FiniteAlgebra, Homomorphism, _index, compose, same_signature
from zexact.errors import CompositionError, MalformedDiagram, NonCommutingError
from zexact.verdict import Status, Verdict, fails, holds, unmet
from zexact.zcore import z_map, zero_part, zkernel


@dataclass(frozen=True)
class Square:
    """
    ::

        A --f--> B
        |h       |l
        v        v
        C --g--> D
    """

    f: Homomorphism
    l: Homomorphism
    h: Homomorphism
    g: Homomorphism

    def __post_init__(self):
        if self.h.source != self.f.source or self.l.source != self.f.target:
            raise CompositionError("square arrows do not share their corners")
        if self.g.source != self.h.target or self.g.target != self.l.target:
            raise CompositionError("square arrows do not share their corners")

    def commutes(self) -> bool:
        return compose(self.l, self.f) == compose(self.g, self.h)

    def first_disagreement(self):
        for a in range(self.f.source.size):
            if self.l.map[self.f.map[a]] != self.g.map[self.h.map[a]]:
                return a
        return None


@dataclass(frozen=True)
class Pullback:
    g: Homomorphism
    l: Homomorphism
    P: FiniteAlgebra
    p_C: Homomorphism
    p_B: Homomorphism
    pairs: tuple[tuple[int, int], ...]

    def mediator(self, x: Homomorphism, y: Homomorphism) -> Homomorphism:
        """The unique ``<x, y>: X -> P`` for ``g∘x = l∘y``."""
        if x.source != y.source or x.target != self.g.source or y.target != self.l.source:
            raise CompositionError("mediator legs do not match the cospan")
        if compose(self.g, x) != compose(self.l, y):
            raise NonCommutingError("g∘x differs from l∘y")
        where = {p: i for i, p in enumerate(self.pairs)}
        return Homomorphism(x.source, self.P, tuple(where[(x.map[t], y.map[t])] for t in range(x.source.size)), check=False)

    @property
    def square(self) -> Square:
        return Square(self.p_B, self.l, self.p_C, self.g)


def pullback(g: Homomorphism, l: Homomorphism, id: str = "") -> Pullback:
    """Pairs of C×B agreeing in D, ordered lexicographically."""
    if g.target != l.target:
        raise CompositionError("cospan legs have different codomains")
    C, B = g.source, l.source
    same_signature(C, B)
    pairs = tuple((c, b) for c in range(C.size) for b in range(B.size) if g.map[c] == l.map[b])
    where = {p: i for i, p in enumerate(pairs)}
    tables = []
    for sym, arity, tc in C.iter_ops():
        tb = B.table(sym)
        out = []
        for args in itertools.product(pairs, repeat=arity):
            c = tc[_index([p[0] for p in args], C.size)]
            b = tb[_index([p[1] for p in args], B.size)]
            out.append(where[(c, b)])
        tables.append(tuple(out))
    P = FiniteAlgebra(C.signature, len(pairs), tuple(tables), id)
    p_C = Homomorphism(P, C, tuple(p[0] for p in pairs), check=False)
    p_B = Homomorphism(P, B, tuple(p[1] for p in pairs), check=False)
    return Pullback(g, l, P, p_C, p_B, pairs)


@dataclass(frozen=True)
class PullbackCheck:
    ok: bool
    collision: tuple[int, int] | None = None
    missing: tuple[int, int] | None = None

    def __bool__(self):
        return self.ok

    def to_json(self):
        return {"pullback": self.ok, "collision": self.collision, "missing": self.missing}


def _pullback_witness(hm, fm, gm, lm) -> PullbackCheck:
    """Is ``a -> (h(a), f(a))`` a bijection onto the pairs with ``g(c) = l(b)``?"""
    seen: dict[tuple[int, int], int] = {}
    for a, key in enumerate(zip(hm, fm)):
        if key in seen:
            return PullbackCheck(False, collision=(seen[key], a))
        seen[key] = a
    by_d: dict[int, list[int]] = {}
    for b, d in enumerate(lm):
        by_d.setdefault(d, []).append(b)
    for c, d in enumerate(gm):
        for b in by_d.get(d, ()):
            if (c, b) not in seen:
                return PullbackCheck(False, missing=(c, b))
    return PullbackCheck(True)


def is_pullback(s: Square) -> PullbackCheck:
    """Compare A with the pairs of C×B agreeing in D, without building the pullback algebra."""
    if not s.commutes():
        raise NonCommutingError(f"square does not commute at {s.first_disagreement()}")
    return _pullback_witness(s.h.map, s.f.map, s.g.map, s.l.map)


def induced_kernel_map(s: Square) -> Homomorphism:
    """The map ``Zker(f) -> Zker(g)`` induced by h (back face of the kernel cube)."""
    kf, kg = zkernel(s.f), zkernel(s.g)
    return kg.mediate(compose(s.h, kf.k))


def kernels_along_pullback(s: Square, mode: str = "forward") -> Verdict:
    if mode not in ("forward", "converse"):
        raise ValueError(f"unknown mode {mode!r}")
    if not s.commutes():
        raise NonCommutingError(f"square does not commute at {s.first_disagreement()}")
    zl = z_map(s.l)
    cert = {"mode": mode, "f": list(s.f.map), "l": list(s.l.map), "h": list(s.h.map), "g": list(s.g.map), "z_l": list(zl.map)}
    if mode == "forward":
        pb = is_pullback(s)
        cert["pullback"] = pb.to_json()
        if not pb:
            return unmet("square is not a pullback", **cert)
        if not zl.is_bijective():
            return unmet("Z(l) is not an isomorphism", **cert)
    else:
        if not s.f.is_surjective():
            return unmet("f is not surjective", **cert)
        if not zl.is_bijective():
            return unmet("Z(l) is not an isomorphism", **cert)
    phi = induced_kernel_map(s)
    cert.update(phi=list(phi.map), zker_f=sorted(zkernel(s.f).carrier), zker_g=sorted(zkernel(s.g).carrier))
    if mode == "forward":
        if phi.is_bijective():
            return holds("induced map Zker(f) -> Zker(g) is bijective", **cert)
        return fails("induced map Zker(f) -> Zker(g) is not bijective", **cert)
    if not phi.is_bijective():
        return unmet("induced kernel map is not bijective", **cert)
    pb = is_pullback(s)
    cert["pullback"] = pb.to_json()
    if pb:
        return holds("square is a pullback", **cert)
    return fails("square is not a pullback", **cert)


# -- general diagrams ------------------------------------------------------


@dataclass(frozen=True)
class Arrow:
    source: str
    target: str
    hom: Homomorphism


@dataclass
class Diagram:
    objects: dict[str, FiniteAlgebra]
    arrows: dict[str, Arrow]
    relations: list[tuple[list[str], list[str]]] = field(default_factory=list)

    def __post_init__(self):
        for name, arr in self.arrows.items():
            if arr.source not in self.objects or arr.target not in self.objects:
                raise MalformedDiagram(f"arrow {name!r} has an unknown endpoint")
            if arr.hom.source != self.objects[arr.source] or arr.hom.target != self.objects[arr.target]:
                raise MalformedDiagram(f"arrow {name!r} does not match its endpoint objects")

    def endpoints(self, path: list[str]) -> tuple[str, str]:
        """(source, target) object names of a non-empty path."""
        for name in path:
            if name not in self.arrows:
                raise MalformedDiagram(f"unknown arrow {name!r}")
        for later, earlier in zip(path, path[1:]):
            if self.arrows[earlier].target != self.arrows[later].source:
                raise MalformedDiagram(f"path {path} does not compose at {earlier!r} -> {later!r}")
        return self.arrows[path[-1]].source, self.arrows[path[0]].target

    def evaluate(self, path: list[str], obj: str | None = None) -> list[int]:
        if not path:
            return list(range(self.objects[obj].size))
        m = list(range(self.arrows[path[-1]].hom.source.size))
        for name in reversed(path):
            hm = self.arrows[name].hom.map
            m = [hm[x] for x in m]
        return m


@dataclass(frozen=True)
class CommuteCheck:
    ok: bool
    relation: int | None = None
    element: int | None = None

    def __bool__(self):
        return self.ok


def check_commutes(d: Diagram) -> CommuteCheck:
    for i, (p, q) in enumerate(d.relations):
        if not p and not q:
            raise MalformedDiagram(f"relation {i} has two identity paths")
        if p and q:
            sp, tp = d.endpoints(p)
            sq, tq = d.endpoints(q)
            if (sp, tp) != (sq, tq):
                raise MalformedDiagram(f"relation {i} compares paths with different endpoints")
            obj = sp
        else:
            obj, tgt = d.endpoints(p or q)
            if obj != tgt:
                raise MalformedDiagram(f"relation {i} equates a non-endo path with an identity")
        vp, vq = d.evaluate(p, obj), d.evaluate(q, obj)
        for x, (a, b) in enumerate(zip(vp, vq)):
            if a != b:
                return CommuteCheck(False, i, x)
    return CommuteCheck(True)


# -- mono characterization -------------------------------------------------


def mono_sides(f: Homomorphism) -> tuple[bool, bool]:
    """(f injective, Zker(f) equals ε_A as a subobject of A)."""
    return f.is_injective(), zkernel(f).carrier == zero_part(f.source).elements


def mono_characterization(f: Homomorphism) -> Verdict:
    """When Z(f) is bijective, f is injective exactly when its Z-kernel is ε_A."""
    injective, kernel_is_eps = mono_sides(f)
    zf = z_map(f)
    cert = {"map": list(f.map), "z_f": list(zf.map), "zker": sorted(zkernel(f).carrier), "injective": injective, "zker_is_eps": kernel_is_eps}
    if not zf.is_bijective():
        return unmet("Z(f) is not bijective", **cert)
    if injective == kernel_is_eps:
        return holds("f is injective exactly when Zker(f) = ε_A", **cert)
    return fails("injectivity and Zker(f) = ε_A disagree", **cert)


# -- exhaustive scans over a catalog ---------------------------------------


def _hom_table(catalog):
    from zexact.homs import enumerate_homs

    return {(i, j): enumerate_homs(A, B) for i, A in enumerate(catalog) for j, B in enumerate(catalog)}


def commuting_squares(catalog: Sequence[FiniteAlgebra], homs=None):
    """Every commuting square whose four corners are catalog members."""
    n = len(catalog)
    homs = homs or _hom_table(catalog)
    for ia in range(n):
        for idd in range(n):
            upper: dict[tuple[int, ...], list] = {}
            for ib in range(n):
                for f in homs[ia, ib]:
                    for l in homs[ib, idd]:
                        upper.setdefault(tuple(l.map[x] for x in f.map), []).append((f, l))
            for ic in range(n):
                for h in homs[ia, ic]:
                    for g in homs[ic, idd]:
                        key = tuple(g.map[x] for x in h.map)
                        for f, l in upper.get(key, ()):
                            yield Square(f, l, h, g)


@dataclass
class ScanReport:
    checked: int = 0
    held: int = 0
    failed: int = 0
    unmet: int = 0
    failures: list = field(default_factory=list)

    def record(self, v: Verdict):
        self.checked += 1
        if v.status is Status.HOLDS:
            self.held += 1
        elif v.status is Status.FAILS:
            self.failed += 1
            self.failures.append(v.to_json())
        else:
            self.unmet += 1

    def to_json(self):
        return {"checked": self.checked, "held": self.held, "failed": self.failed, "unmet": self.unmet, "failures": self.failures}


def scan_kernel_squares(catalog: Sequence[FiniteAlgebra], mode: str) -> ScanReport:
    report = ScanReport()
    for s in commuting_squares(catalog):
        report.record(kernels_along_pullback(s, mode))
    return report


def scan_pasting(catalog: Sequence[FiniteAlgebra]) -> ScanReport:
    """Pullback pasting with a surjective bottom-left arrow.

    For each commuting square (2) ``B -g-> C`` over ``B' -g'-> C'`` and each
    surjection ``f': A' -> B'`` in the catalog, (1) is taken to be the
    canonical pullback of ``f'`` along ``b``; whenever (1)+(2) is a pullback,
    (2) must be one.
    """
    homs = _hom_table(catalog)
    report = ScanReport()
    index = {A: i for i, A in enumerate(catalog)}
    for s2 in commuting_squares(catalog, homs):
        b = s2.h
        ib = index[b.target]
        for ia in range(len(catalog)):
            for fp in homs[ia, ib]:
                if not fp.is_surjective():
                    continue
                # (1) is the canonical pullback of f' along b: pairs (x, y) with f'(x) = b(y)
                pairs = [(x, y) for x in range(fp.source.size) for y in range(b.source.size) if fp.map[x] == b.map[y]]
                top = [s2.f.map[y] for _, y in pairs]
                left = [x for x, _ in pairs]
                bottom = [s2.g.map[v] for v in fp.map]
                if not _pullback_witness(left, top, bottom, s2.l.map):
                    report.record(unmet("(1)+(2) is not a pullback"))
                    continue
                inner = is_pullback(s2)
                cert = {"g": list(s2.f.map), "b": list(b.map), "c": list(s2.l.map), "g'": list(s2.g.map), "f'": list(fp.map)}
                report.record(holds("(2) is a pullback", **cert) if inner else fails("(2) is not a pullback", **cert))
    return report
