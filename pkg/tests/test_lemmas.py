import pytest

from oracles import boolean_grid_sizes_naive, preimage_scan
from zexact.algebra import Congruence, Homomorphism, compose, product
from zexact.errors import MalformedDiagram
from zexact.homs import enumerate_homs
from zexact.lemmas import (
    Grid3x3,
    LadderDiagram,
    LowerGrid,
    build_grid,
    generate_grid,
    pb_mono_sides,
    standing_hypotheses,
    verify_nine,
    verify_pb_iff_mono,
    verify_regepi_transfer,
    verify_short_five,
)
from zexact.presets import boolean_power, zmod
from zexact.verdict import Status
from zexact.zcore import ExactSequence

B3 = boolean_power(3)
# kernels of the projections of 2^3 onto bits {0,1} and bits {1,2}
THETA = Congruence(B3, tuple(x & 3 for x in range(8)))
PSI = Congruence(B3, tuple((x >> 1) & 3 for x in range(8)))


def identity_ladder(f: Homomorphism) -> LadderDiagram:
    row = ExactSequence.of(f)
    ident = Homomorphism.identity
    return LadderDiagram(row, row, ident(row.k.source), ident(f.source), ident(f.target))


def z2_over_one() -> LadderDiagram:
    Z2, one = zmod(2), zmod(1)
    to1 = enumerate_homs(Z2, one)[0]
    top = ExactSequence(Homomorphism.identity(Z2), Homomorphism.identity(Z2))
    bottom = ExactSequence(Homomorphism.identity(one), Homomorphism.identity(one))
    return LadderDiagram(top, bottom, to1, to1, to1)


@pytest.mark.parametrize("mode", ["iso", "regepi", "mono"])
def test_identity_ladder_holds(mode):
    f = enumerate_homs(B3, boolean_power(2))[4]
    assert verify_short_five(identity_ladder(f), mode).status is Status.HOLDS


def test_identity_ladder_pb_mono():
    d = identity_ladder(enumerate_homs(zmod(4), zmod(2))[0])
    assert pb_mono_sides(d) == (True, True)
    assert verify_pb_iff_mono(d).status is Status.HOLDS


def test_short_five_unknown_mode():
    with pytest.raises(ValueError):
        verify_short_five(identity_ladder(Homomorphism.identity(zmod(2))), "epi")


def test_regepi_ladder_from_quotients():
    # columns 2 and 3 of the generated grid as rows; rungs u', a', b' are quotient maps
    g = generate_grid(B3, THETA, PSI)
    d = LadderDiagram(ExactSequence(g.kp, g.fp), ExactSequence(g.kpp, g.fpp), g.up, g.ap, g.bp)
    assert g.up.is_surjective() and g.bp.is_surjective()
    assert verify_short_five(d, "regepi").status is Status.HOLDS
    # a' is not injective, so the iso and mono versions do not apply
    assert verify_short_five(d, "iso").status is Status.UNMET


def test_z2_over_one_essentiality():
    d = z2_over_one()
    left, b_mono = pb_mono_sides(d)
    # square (1) is a pullback but b: Z/2 -> 1 is not injective
    assert left and not b_mono
    v = verify_pb_iff_mono(d)
    assert v.status is Status.UNMET
    assert "Z(B)" in v.reason


def test_ladder_must_commute():
    f = enumerate_homs(B3, boolean_power(2))[4]
    row = ExactSequence.of(f)
    other = enumerate_homs(B3, B3)
    bad = next(h for h in other if compose(f, h) != f)
    with pytest.raises(MalformedDiagram):
        LadderDiagram(row, row, Homomorphism.identity(row.k.source), bad, Homomorphism.identity(f.target))


def test_ladder_object_mismatch():
    f = enumerate_homs(B3, boolean_power(2))[4]
    row = ExactSequence.of(f)
    with pytest.raises(MalformedDiagram):
        LadderDiagram(row, row, Homomorphism.identity(B3), Homomorphism.identity(B3), Homomorphism.identity(f.target))


# -- grids -----------------------------------------------------------------


def test_boolean_grid_sizes():
    assert boolean_grid_sizes_naive() == (2, 4, 4, 4, 8, 4, 4, 4, 2)
    g = generate_grid(B3, THETA, PSI)
    assert g is not None
    assert g.sizes() == (2, 4, 4, 4, 8, 4, 4, 4, 2)


@pytest.mark.parametrize("variant", ["a", "b", "c"])
def test_boolean_grid_nine(variant):
    g = generate_grid(B3, THETA, PSI)
    assert verify_nine(g, variant).status is Status.HOLDS


def test_boolean_grid_top_row():
    g = generate_grid(B3, THETA, PSI)
    assert g.up.is_surjective()
    carrier = preimage_scan(g.up.map, g.up.source, g.up.target)
    assert carrier == set(g.u.image())


def test_boolean_grid_regepi_portion():
    g = generate_grid(B3, THETA, PSI)
    portion = g.regepi_portion()
    assert isinstance(portion, LowerGrid)
    assert portion.f == g.up and portion.f.is_surjective()
    assert verify_regepi_transfer(portion).status is Status.HOLDS


@pytest.mark.parametrize("variant", ["a", "b", "c"])
def test_trivial_grid(variant):
    one = zmod(1)
    g = generate_grid(one, Congruence.identity(one), Congruence.identity(one))
    assert g is not None and set(g.sizes()) == {1}
    assert verify_nine(g, variant).status is Status.HOLDS
    assert verify_regepi_transfer(g.regepi_portion()).status is Status.HOLDS


@pytest.mark.parametrize("Ap", [B3, zmod(6), product(zmod(2), zmod(4))[0]], ids=lambda A: A.id)
def test_identity_congruence_grid(Ap):
    g = generate_grid(Ap, Congruence.identity(Ap), Congruence.identity(Ap))
    assert g is not None
    # the B row collapses onto zero parts
    assert g.f.target.size == g.kp.source.size
    for v in "abc":
        assert verify_nine(g, v).status is Status.HOLDS


def test_f2xf2_grid_decision():
    P, p1, p2 = product(zmod(2), zmod(2))
    built = build_grid(P, Congruence.kernel(p1), Congruence.kernel(p2))
    # B'' is the one-element ring whose zero part differs from Z(B') = Z/2
    assert not built.accepted
    assert built.rejections == ["zero parts: Z(B') ≅ Z(B'') ≅ Z(A'') fails"]
    assert built.grid.sizes() == (4, 4, 2, 4, 4, 2, 2, 2, 1)
    assert standing_hypotheses(built.grid).ok is False
    assert verify_nine(built.grid, "b").status is Status.UNMET


def test_grid_from_arrows_roundtrip_and_missing():
    g = generate_grid(B3, THETA, PSI)
    assert Grid3x3.from_arrows(g.arrows()) == g
    arrows = g.arrows()
    del arrows["u'"]
    with pytest.raises(MalformedDiagram):
        Grid3x3.from_arrows(arrows)


def test_grid_rejects_non_commuting_square():
    g = generate_grid(B3, THETA, PSI)
    arrows = dict(g.arrows())
    # any other hom K' -> K'' breaks a'∘k' = k''∘u'
    swaps = [h for h in enumerate_homs(g.up.source, g.up.target) if h != g.up]
    arrows["u'"] = swaps[0]
    with pytest.raises(MalformedDiagram):
        Grid3x3.from_arrows(arrows)


def test_nine_unknown_variant():
    g = generate_grid(B3, THETA, PSI)
    with pytest.raises(ValueError):
        verify_nine(g, "d")
