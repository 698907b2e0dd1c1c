"""
Verifiers for the short five lemma, the pullback/mono lemma, the
regular-epi transfer lemma and the three nine lemmas, plus the
congruence-pair grid generator.

Every verifier rechecks its hypotheses from the raw tables and answers
with a three-valued :class:`~zexact.verdict.Verdict`.
"""

from __future__ import annotations

from dataclasses import dataclass

from zexact.algebra import (
    Congruence,
    FiniteAlgebra,
    Homomorphism,
    compose,
    congruence_join,
    quotient,
)
from zexact.diagrams import Square, is_pullback
from zexact.errors import MalformedDiagram
from zexact.homs import restrict
from zexact.verdict import Verdict, fails, holds, unmet
from zexact.zcore import (
    Check,
    ExactSequence,
    in_nz,
    is_kernel_of,
    is_zexact,
    zero_parts_isomorphic,
    zkernel,
)

MODES = ("iso", "regepi", "mono")


def _mode_property(h: Homomorphism, mode: str) -> bool:
    if mode == "iso":
        return h.is_bijective()
    if mode == "regepi":
        return h.is_surjective()
    if mode == "mono":
        return h.is_injective()
    raise ValueError(f"unknown mode {mode!r}")


def _require(cond: bool, message: str):
    if not cond:
        raise MalformedDiagram(message)


def _same(x: FiniteAlgebra, y: FiniteAlgebra, what: str):
    _require(x == y, f"objects do not match at {what}")


def _commutes(p: Homomorphism, q: Homomorphism, what: str):
    _require(p == q, f"square {what} does not commute")


# -- ladders ---------------------------------------------------------------


@dataclass(frozen=True)
class LadderDiagram:
    """
    ::

        K  --k-->  A  --f-->  B
        |u         |a         |b
        K' --k'--> A' --f'--> B'
    """

    top: ExactSequence
    bottom: ExactSequence
    u: Homomorphism
    a: Homomorphism
    b: Homomorphism

    def __post_init__(self):
        k, f, kp, fp = self.k, self.f, self.kp, self.fp
        _same(self.u.source, k.source, "K")
        _same(self.u.target, kp.source, "K'")
        _same(self.a.source, f.source, "A")
        _same(self.a.target, fp.source, "A'")
        _same(self.b.source, f.target, "B")
        _same(self.b.target, fp.target, "B'")
        _commutes(compose(self.a, k), compose(kp, self.u), "a∘k = k'∘u")
        _commutes(compose(self.b, f), compose(fp, self.a), "b∘f = f'∘a")

    @property
    def k(self):
        return self.top.k

    @property
    def f(self):
        return self.top.f

    @property
    def kp(self):
        return self.bottom.k

    @property
    def fp(self):
        return self.bottom.f

    def left_square(self) -> Square:
        return Square(self.k, self.a, self.u, self.kp)

    def arrows(self) -> dict[str, Homomorphism]:
        return {"k": self.k, "f": self.f, "k'": self.kp, "f'": self.fp, "u": self.u, "a": self.a, "b": self.b}

    def maps(self) -> dict[str, list[int]]:
        return {name: list(h.map) for name, h in self.arrows().items()}


def verify_short_five(d: LadderDiagram, mode: str = "iso") -> Verdict:
    if mode not in MODES:
        raise ValueError(f"unknown mode {mode!r}")
    cert = {"mode": mode, "maps": d.maps()}
    top = is_zexact(d.k, d.f)
    if not top:
        return unmet(f"top row is not Z-exact: {top.reason}", **cert)
    bottom = is_zexact(d.kp, d.fp)
    if not bottom:
        return unmet(f"bottom row is not Z-exact: {bottom.reason}", **cert)
    for name in ("u", "b"):
        if not _mode_property(getattr(d, name), mode):
            return unmet(f"{name} does not satisfy the {mode} hypothesis", **cert)
    if _mode_property(d.a, mode):
        return holds(f"a satisfies the {mode} conclusion", **cert)
    return fails(f"a does not satisfy the {mode} conclusion", **cert)


def pb_mono_sides(d: LadderDiagram) -> tuple[bool, bool]:
    """(left square is a pullback, b is injective)."""
    return bool(is_pullback(d.left_square())), d.b.is_injective()


def verify_pb_iff_mono(d: LadderDiagram) -> Verdict:
    left, b_mono = pb_mono_sides(d)
    cert = {"maps": d.maps(), "left_pullback": left, "b_injective": b_mono}
    top = is_zexact(d.k, d.f)
    if not top:
        return unmet(f"top row is not Z-exact: {top.reason}", **cert)
    kp = is_kernel_of(d.kp, d.fp)
    if not kp:
        return unmet(f"k' is not the Z-kernel of f': {kp.reason}", **cert)
    if not zero_parts_isomorphic(d.f.target, d.fp.target):
        return unmet("Z(B) and Z(B') are not isomorphic", **cert)
    if left == b_mono:
        return holds("left square is a pullback exactly when b is injective", **cert)
    return fails("biconditional broken", **cert)


# -- grids -----------------------------------------------------------------

GRID_ARROWS = {
    "k": "k", "k'": "kp", "k''": "kpp",
    "f": "f", "f'": "fp", "f''": "fpp",
    "u": "u", "u'": "up",
    "a": "a", "a'": "ap",
    "b": "b", "b'": "bp",
}


@dataclass(frozen=True)
class Grid3x3:
    """
    ::

        K --u--> K' --u'--> K''
        |k       |k'        |k''
        A --a--> A' --a'--> A''
        |f       |f'        |f''
        B --b--> B' --b'--> B''
    """

    k: Homomorphism
    kp: Homomorphism
    kpp: Homomorphism
    f: Homomorphism
    fp: Homomorphism
    fpp: Homomorphism
    u: Homomorphism
    up: Homomorphism
    a: Homomorphism
    ap: Homomorphism
    b: Homomorphism
    bp: Homomorphism

    def __post_init__(self):
        _same(self.k.source, self.u.source, "K")
        _same(self.kp.source, self.u.target, "K'")
        _same(self.kp.source, self.up.source, "K'")
        _same(self.kpp.source, self.up.target, "K''")
        for col, row, name in ((self.k, self.a, "A"), (self.kp, self.ap, "A'")):
            _same(col.target, row.source, name)
        _same(self.kpp.target, self.ap.target, "A''")
        _same(self.k.target, self.f.source, "A")
        _same(self.kp.target, self.fp.source, "A'")
        _same(self.kpp.target, self.fpp.source, "A''")
        _same(self.a.target, self.fp.source, "A'")
        _same(self.f.target, self.b.source, "B")
        _same(self.fp.target, self.b.target, "B'")
        _same(self.fp.target, self.bp.source, "B'")
        _same(self.fpp.target, self.bp.target, "B''")
        _commutes(compose(self.a, self.k), compose(self.kp, self.u), "a∘k = k'∘u")
        _commutes(compose(self.ap, self.kp), compose(self.kpp, self.up), "a'∘k' = k''∘u'")
        _commutes(compose(self.b, self.f), compose(self.fp, self.a), "b∘f = f'∘a")
        _commutes(compose(self.bp, self.fp), compose(self.fpp, self.ap), "b'∘f' = f''∘a'")

    def objects(self) -> dict[str, FiniteAlgebra]:
        return {
            "K": self.k.source, "K'": self.kp.source, "K''": self.kpp.source,
            "A": self.k.target, "A'": self.kp.target, "A''": self.kpp.target,
            "B": self.f.target, "B'": self.fp.target, "B''": self.fpp.target,
        }

    def arrows(self) -> dict[str, Homomorphism]:
        return {name: getattr(self, attr) for name, attr in GRID_ARROWS.items()}

    def sizes(self) -> tuple[int, ...]:
        objs = self.objects()
        return tuple(objs[n].size for n in ("K", "K'", "K''", "A", "A'", "A''", "B", "B'", "B''"))

    def rows(self) -> dict[int, tuple[Homomorphism, Homomorphism]]:
        return {1: (self.u, self.up), 2: (self.a, self.ap), 3: (self.b, self.bp)}

    def columns(self) -> dict[int, tuple[Homomorphism, Homomorphism]]:
        return {1: (self.k, self.f), 2: (self.kp, self.fp), 3: (self.kpp, self.fpp)}

    def regepi_portion(self) -> "LowerGrid":
        """The transfer lemma's diagram read off this grid; its conclusion is about u'."""
        return LowerGrid(
            f=self.up, a=self.kp, b=self.kpp,
            kp=self.a, fp=self.ap, u=self.f,
            ap=self.fp, bp=self.fpp,
            kpp=self.b, fpp=self.bp,
        )

    @classmethod
    def from_arrows(cls, arrows: dict[str, Homomorphism]) -> "Grid3x3":
        missing = [n for n in GRID_ARROWS if n not in arrows]
        if missing:
            raise MalformedDiagram(f"grid is missing arrows {missing}")
        return cls(**{attr: arrows[name] for name, attr in GRID_ARROWS.items()})


PORTION_ARROWS = {
    "f": "f", "a": "a", "b": "b",
    "k'": "kp", "f'": "fp", "u": "u",
    "a'": "ap", "b'": "bp",
    "k''": "kpp", "f''": "fpp",
}


@dataclass(frozen=True)
class LowerGrid:
    """
    ::

                   A  --f-->  B
                   |a         |b
        K' --k'--> A' --f'--> B'
        |u         |a'        |b'
        K''--k''-> A''--f''-> B''
    """

    f: Homomorphism
    a: Homomorphism
    b: Homomorphism
    kp: Homomorphism
    fp: Homomorphism
    u: Homomorphism
    ap: Homomorphism
    bp: Homomorphism
    kpp: Homomorphism
    fpp: Homomorphism

    def __post_init__(self):
        _same(self.f.source, self.a.source, "A")
        _same(self.f.target, self.b.source, "B")
        _same(self.kp.target, self.a.target, "A'")
        _same(self.fp.source, self.a.target, "A'")
        _same(self.fp.target, self.b.target, "B'")
        _same(self.u.source, self.kp.source, "K'")
        _same(self.u.target, self.kpp.source, "K''")
        _same(self.ap.source, self.a.target, "A'")
        _same(self.ap.target, self.kpp.target, "A''")
        _same(self.bp.source, self.b.target, "B'")
        _same(self.fpp.source, self.ap.target, "A''")
        _same(self.fpp.target, self.bp.target, "B''")
        _commutes(compose(self.b, self.f), compose(self.fp, self.a), "b∘f = f'∘a")
        _commutes(compose(self.ap, self.kp), compose(self.kpp, self.u), "a'∘k' = k''∘u")
        _commutes(compose(self.bp, self.fp), compose(self.fpp, self.ap), "b'∘f' = f''∘a'")

    def arrows(self) -> dict[str, Homomorphism]:
        return {name: getattr(self, attr) for name, attr in PORTION_ARROWS.items()}

    def objects(self) -> dict[str, FiniteAlgebra]:
        return {
            "A": self.f.source, "B": self.f.target,
            "K'": self.kp.source, "A'": self.kp.target, "B'": self.fp.target,
            "K''": self.kpp.source, "A''": self.kpp.target, "B''": self.fpp.target,
        }

    @classmethod
    def from_arrows(cls, arrows: dict[str, Homomorphism]) -> "LowerGrid":
        missing = [n for n in PORTION_ARROWS if n not in arrows]
        if missing:
            raise MalformedDiagram(f"portion is missing arrows {missing}")
        return cls(**{attr: arrows[name] for name, attr in PORTION_ARROWS.items()})


def _maps(arrows: dict[str, Homomorphism]) -> dict[str, list[int]]:
    return {name: list(h.map) for name, h in arrows.items()}


def verify_regepi_transfer(g: LowerGrid) -> Verdict:
    cert = {"maps": _maps(g.arrows())}
    for name, (k, f) in {"row K'": (g.kp, g.fp), "row K''": (g.kpp, g.fpp), "column a": (g.a, g.ap), "column b": (g.b, g.bp)}.items():
        c = is_zexact(k, f)
        if not c:
            return unmet(f"{name} is not Z-exact: {c.reason}", **cert)
    objs = g.objects()
    if not (zero_parts_isomorphic(objs["B'"], objs["B''"]) and zero_parts_isomorphic(objs["B''"], objs["A''"])):
        return unmet("Z(B') ≅ Z(B'') ≅ Z(A'') fails", **cert)
    if not g.u.is_surjective():
        return unmet("u is not surjective", **cert)
    if g.f.is_surjective():
        return holds("f is surjective", **cert)
    return fails("f is not surjective", **cert)


NINE_CONCLUSION = {"a": 3, "b": 1, "c": 2}
NINE_ROWS_ASSUMED = {"a": (1, 2), "b": (2, 3), "c": (1, 3)}


def standing_hypotheses(g: Grid3x3) -> Check:
    for i, (k, f) in g.columns().items():
        c = is_zexact(k, f)
        if not c:
            return Check(False, f"column {i} is not Z-exact: {c.reason}")
    objs = g.objects()
    if not zero_parts_isomorphic(objs["B'"], objs["B''"]):
        return Check(False, "Z(B') and Z(B'') are not isomorphic")
    if not zero_parts_isomorphic(objs["B''"], objs["A''"]):
        return Check(False, "Z(B'') and Z(A'') are not isomorphic")
    return Check(True)


def nine_conclusion(g: Grid3x3, variant: str) -> Check:
    i = NINE_CONCLUSION[variant]
    return is_zexact(*g.rows()[i])


def verify_nine(g: Grid3x3, variant: str) -> Verdict:
    if variant not in NINE_CONCLUSION:
        raise ValueError(f"unknown variant {variant!r}")
    cert = {"variant": variant, "maps": _maps(g.arrows()), "sizes": list(g.sizes())}
    standing = standing_hypotheses(g)
    if not standing:
        return unmet(standing.reason, **cert)
    if variant == "a" and not zero_parts_isomorphic(g.f.target, g.fp.target):
        return unmet("Z(B) and Z(B') are not isomorphic", **cert)
    if variant == "c" and not in_nz(compose(g.ap, g.a)):
        return unmet("a'∘a does not factor through a zero object", **cert)
    rows = g.rows()
    for i in NINE_ROWS_ASSUMED[variant]:
        c = is_zexact(*rows[i])
        if not c:
            return unmet(f"row {i} is not Z-exact: {c.reason}", **cert)
    i = NINE_CONCLUSION[variant]
    concl = is_zexact(*rows[i])
    if concl:
        return holds(f"row {i} is Z-exact", **cert)
    return fails(f"row {i} is not Z-exact: {concl.reason}", **cert)


# -- grid generation -------------------------------------------------------


@dataclass
class GridBuild:
    grid: Grid3x3 | None
    rejections: list[str]

    @property
    def accepted(self) -> bool:
        return self.grid is not None and not self.rejections


def _induced(q_coarse: Homomorphism, fine: Congruence, fine_quotient: FiniteAlgebra) -> Homomorphism:
    """Map out of A/fine induced by a surjection whose kernel contains fine."""
    return Homomorphism(fine_quotient, q_coarse.target, tuple(q_coarse.map[c[0]] for c in fine.classes()), check=False)


def build_grid(Ap: FiniteAlgebra, theta: Congruence, psi: Congruence) -> GridBuild:
    """Assemble the grid and run every filter, recording which ones reject it."""
    App, ap = quotient(Ap, theta, "A''")
    Bp, fp = quotient(Ap, psi, "B'")
    Bpp, q = quotient(Ap, congruence_join(theta, psi), "B''")
    bp = _induced(q, psi, Bp)
    fpp = _induced(q, theta, App)

    za = zkernel(ap)
    a = za.k
    zb = zkernel(bp)
    b = zb.k
    f = restrict(fp, source_inclusion=a, target_inclusion=b)
    kp = zkernel(fp).k
    kpp = zkernel(fpp).k
    k = zkernel(f).k
    u = restrict(a, source_inclusion=k, target_inclusion=kp)
    up = restrict(ap, source_inclusion=kp, target_inclusion=kpp)

    rejections = []
    try:
        grid = Grid3x3(k=k, kp=kp, kpp=kpp, f=f, fp=fp, fpp=fpp, u=u, up=up, a=a, ap=ap, b=b, bp=bp)
    except MalformedDiagram as exc:
        return GridBuild(None, [f"squares: {exc}"])
    for i, (kk, ff) in grid.columns().items():
        c = is_zexact(kk, ff)
        if not c:
            rejections.append(f"column {i}: {c.reason}")
    for i in (2, 3):
        c = is_zexact(*grid.rows()[i])
        if not c:
            rejections.append(f"row {i}: {c.reason}")
    objs = grid.objects()
    if not (zero_parts_isomorphic(objs["B'"], objs["B''"]) and zero_parts_isomorphic(objs["B''"], objs["A''"])):
        rejections.append("zero parts: Z(B') ≅ Z(B'') ≅ Z(A'') fails")
    return GridBuild(grid, rejections)


def generate_grid(Ap: FiniteAlgebra, theta: Congruence, psi: Congruence) -> Grid3x3 | None:
    built = build_grid(Ap, theta, psi)
    return built.grid if built.accepted else None

