import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from oracles import homs_naive
from zexact.algebra import Homomorphism, compose, product
from zexact.errors import BudgetExceeded, CompositionError, NotAHomomorphism, SignatureMismatch, TableError
from zexact.homs import (
    classify,
    enumerate_homs,
    enumerate_maps,
    find_iso,
    hom_exists,
    image_factorize,
    is_hom,
    restrict,
)
from zexact.presets import boolean_power, heyting_chain, lukasiewicz_chain, zmod

F2xF2 = product(zmod(2), zmod(2), "f2xf2")[0]

PAIRS = [
    (F2xF2, zmod(2)),
    (zmod(2), F2xF2),
    (zmod(4), zmod(2)),
    (zmod(6), zmod(3)),
    (zmod(6), zmod(6)),
    (product(zmod(2), zmod(4))[0], zmod(4)),
    (boolean_power(2), boolean_power(3)),
    (boolean_power(3), boolean_power(2)),
    (heyting_chain(4), heyting_chain(3)),
    (heyting_chain(3), heyting_chain(5)),
    (lukasiewicz_chain(5), lukasiewicz_chain(3)),
    (lukasiewicz_chain(3), lukasiewicz_chain(5)),
]


@pytest.mark.parametrize("A, B", PAIRS, ids=lambda x: x.id)
def test_enumeration_matches_full_map_scan(A, B):
    fast = [h.map for h in enumerate_homs(A, B)]
    assert fast == sorted(homs_naive(A, B))


def test_projections_of_f2xf2():
    # frozen from the full map scan
    assert [h.map for h in enumerate_homs(F2xF2, zmod(2))] == [(0, 0, 1, 1), (0, 1, 0, 1)]


def test_pinned_hom_counts():
    # Boolean homs 2^m -> 2^n correspond to maps of atom sets n -> m
    assert len(enumerate_homs(boolean_power(3), boolean_power(3))) == 27
    # frozen from the full map scan
    assert len(enumerate_homs(boolean_power(3), boolean_power(2))) == 9
    assert len(enumerate_homs(zmod(2), zmod(4))) == 0
    assert len(enumerate_homs(heyting_chain(4), heyting_chain(3))) == 2


def test_is_hom_reports_constant_first():
    check = is_hom((1, 0), zmod(2), zmod(2))
    assert not check
    assert check.symbol in ("0", "1")


def test_is_hom_reports_operation_witness():
    # x -> 2x is additive on Z/4 but sends 1 to 2
    check = is_hom((0, 2, 0, 2), zmod(4), zmod(4))
    assert not check


def test_is_hom_length_and_range():
    with pytest.raises(TableError):
        is_hom((0,), zmod(2), zmod(2))
    with pytest.raises(TableError):
        is_hom((0, 5), zmod(2), zmod(2))


def test_is_hom_signature_mismatch():
    with pytest.raises(SignatureMismatch):
        is_hom((0, 1), zmod(2), boolean_power(1))


def test_homomorphism_constructor_validates():
    with pytest.raises(NotAHomomorphism) as exc:
        Homomorphism(zmod(2), zmod(2), (1, 0))
    assert exc.value.symbol in ("0", "1")


def test_budget_exceeded():
    with pytest.raises(BudgetExceeded):
        list(enumerate_maps(boolean_power(3), boolean_power(3), budget=3))


def test_classify():
    p1 = enumerate_homs(F2xF2, zmod(2))[0]
    c = classify(p1)
    assert c.surjective and not c.injective and not c.bijective
    c = classify(Homomorphism.identity(zmod(5)))
    assert c.bijective


def test_compose_mismatch():
    with pytest.raises(CompositionError):
        compose(Homomorphism.identity(zmod(2)), Homomorphism.identity(zmod(3)))


def test_image_factorization():
    h = enumerate_homs(boolean_power(2), boolean_power(3))[3]
    fac = image_factorize(h)
    assert compose(fac.mono, fac.epi) == h
    assert fac.epi.is_surjective() and fac.mono.is_injective()
    assert fac.middle.size == len(h.image())


def test_find_iso_crt():
    Z6 = zmod(6)
    P = product(zmod(2), zmod(3))[0]
    iso = find_iso(Z6, P)
    assert iso is not None and iso.is_bijective()
    assert find_iso(zmod(4), F2xF2) is None
    assert find_iso(zmod(3), zmod(4)) is None


def test_find_iso_between_constant_generated():
    assert find_iso(zmod(5), zmod(5)) == Homomorphism.identity(zmod(5))
    assert find_iso(boolean_power(1), boolean_power(1)) is not None


def test_hom_exists():
    assert hom_exists(zmod(4), zmod(2))
    assert not hom_exists(zmod(2), zmod(4))


def test_restrict_escaping_image():
    from zexact.algebra import subalgebra

    Z6 = zmod(6)
    _, inc = subalgebra(Z6, range(6))
    h = Homomorphism.identity(Z6)
    B = boolean_power(3)
    sub, sinc = subalgebra(B, [0, 7])
    with pytest.raises(TableError):
        restrict(Homomorphism.identity(B), target_inclusion=sinc)
    assert restrict(h, source_inclusion=inc) == h


@settings(max_examples=40, deadline=None)
@given(st.sampled_from(PAIRS), st.data())
def test_composites_are_homs(pair, data):
    A, B = pair
    fs = enumerate_homs(A, B)
    gs = enumerate_homs(B, B)
    if not fs or not gs:
        return
    f, g = data.draw(st.sampled_from(fs)), data.draw(st.sampled_from(gs))
    assert compose(g, f) in enumerate_homs(A, B)
