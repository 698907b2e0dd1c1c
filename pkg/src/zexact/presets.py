"""Builtin varieties and the concrete algebras their catalogs are made of."""

from __future__ import annotations

from zexact.algebra import Equation, FiniteAlgebra, Signature, VarietyPreset, trivial_algebra


def _eq(lhs, rhs):
    return Equation(lhs, rhs)


x, y, z = "x0", "x1", "x2"

RING1_SIG = Signature("ring1", (("+", 2), ("-", 1), ("*", 2), ("0", 0), ("1", 0)))


def _add(a, b):
    return ("+", a, b)


def _mul(a, b):
    return ("*", a, b)


RING1 = VarietyPreset(
    RING1_SIG,
    (
        _eq(_add(_add(x, y), z), _add(x, _add(y, z))),
        _eq(_add(x, y), _add(y, x)),
        _eq(_add(x, ("0",)), x),
        _eq(_add(x, ("-", x)), ("0",)),
        _eq(_mul(_mul(x, y), z), _mul(x, _mul(y, z))),
        _eq(_mul(("1",), x), x),
        _eq(_mul(x, ("1",)), x),
        _eq(_mul(x, _add(y, z)), _add(_mul(x, y), _mul(x, z))),
        _eq(_mul(_add(x, y), z), _add(_mul(x, z), _mul(y, z))),
    ),
)

BOOL_SIG = Signature("bool", (("or", 2), ("and", 2), ("not", 1), ("0", 0), ("1", 0)))


def _lattice_axioms():
    j = lambda a, b: ("or", a, b)  # noqa: E731
    m = lambda a, b: ("and", a, b)  # noqa: E731
    return (
        _eq(j(x, y), j(y, x)),
        _eq(m(x, y), m(y, x)),
        _eq(j(j(x, y), z), j(x, j(y, z))),
        _eq(m(m(x, y), z), m(x, m(y, z))),
        _eq(j(x, m(x, y)), x),
        _eq(m(x, j(x, y)), x),
        _eq(j(x, ("0",)), x),
        _eq(m(x, ("1",)), x),
    )


BOOL = VarietyPreset(
    BOOL_SIG,
    _lattice_axioms()
    + (
        _eq(("and", x, ("or", y, z)), ("or", ("and", x, y), ("and", x, z))),
        _eq(("or", x, ("not", x)), ("1",)),
        _eq(("and", x, ("not", x)), ("0",)),
    ),
)

HEYTING_SIG = Signature("heyting", (("or", 2), ("and", 2), ("imp", 2), ("0", 0), ("1", 0)))

HEYTING = VarietyPreset(
    HEYTING_SIG,
    _lattice_axioms()
    + (
        _eq(("imp", x, x), ("1",)),
        _eq(("and", x, ("imp", x, y)), ("and", x, y)),
        _eq(("and", y, ("imp", x, y)), y),
        _eq(("imp", x, ("and", y, z)), ("and", ("imp", x, y), ("imp", x, z))),
    ),
)

MV_SIG = Signature("mv", (("oplus", 2), ("neg", 1), ("0", 0), ("1", 0)))


def _op(a, b):
    return ("oplus", a, b)


def _neg(a):
    return ("neg", a)


MV = VarietyPreset(
    MV_SIG,
    (
        _eq(_op(_op(x, y), z), _op(x, _op(y, z))),
        _eq(_op(x, y), _op(y, x)),
        _eq(_op(x, ("0",)), x),
        _eq(_neg(_neg(x)), x),
        _eq(_op(x, _neg(("0",))), _neg(("0",))),
        _eq(_op(_neg(_op(_neg(x), y)), y), _op(_neg(_op(_neg(y), x)), x)),
        _eq(("1",), _neg(("0",))),
    ),
)

PRESETS: dict[str, VarietyPreset] = {p.name: p for p in (RING1, BOOL, HEYTING, MV)}


def get_preset(name: str) -> VarietyPreset:
    try:
        return PRESETS[name]
    except KeyError:
        raise KeyError(f"unknown preset {name!r}; known: {', '.join(PRESETS)}") from None


# -- concrete algebras -----------------------------------------------------


def zmod(n: int) -> FiniteAlgebra:
    """The ring of integers modulo n (n = 1 gives the zero ring)."""
    if n == 1:
        return trivial_algebra(RING1_SIG)
    return FiniteAlgebra.from_functions(
        RING1_SIG,
        n,
        {
            "+": lambda a, b: (a + b) % n,
            "-": lambda a: (-a) % n,
            "*": lambda a, b: (a * b) % n,
            "0": 0,
            "1": 1 % n,
        },
        f"Z{n}",
    )


def boolean_power(k: int) -> FiniteAlgebra:
    """2^k with elements encoded as k-bit masks."""
    if k == 0:
        return trivial_algebra(BOOL_SIG)
    top = (1 << k) - 1
    return FiniteAlgebra.from_functions(
        BOOL_SIG,
        1 << k,
        {
            "or": lambda a, b: a | b,
            "and": lambda a, b: a & b,
            "not": lambda a: top & ~a,
            "0": 0,
            "1": top,
        },
        "2" if k == 1 else f"2^{k}",
    )


def heyting_chain(n: int) -> FiniteAlgebra:
    """The n-element chain 0 < 1 < ... < n-1 as a Heyting algebra."""
    if n == 1:
        return trivial_algebra(HEYTING_SIG)
    return FiniteAlgebra.from_functions(
        HEYTING_SIG,
        n,
        {
            "or": max,
            "and": min,
            "imp": lambda a, b: n - 1 if a <= b else b,
            "0": 0,
            "1": n - 1,
        },
        f"C{n}",
    )


def lukasiewicz_chain(n: int) -> FiniteAlgebra:
    """The n-element MV-chain {0, 1/(n-1), ..., 1}, element i standing for i/(n-1)."""
    if n == 1:
        return trivial_algebra(MV_SIG)
    top = n - 1
    return FiniteAlgebra.from_functions(
        MV_SIG,
        n,
        {
            "oplus": lambda a, b: min(top, a + b),
            "neg": lambda a: top - a,
            "0": 0,
            "1": top,
        },
        f"L{n}",
    )
