"""Acceptance suite: one check per criterion, each reported as a PASS/FAIL line.

Run with ``pytest tests/test_acceptance.py`` (the lines appear in the terminal
summary) or directly with ``python3 tests/test_acceptance.py``.
"""

import sys
import time
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from oracles import boolean_grid_sizes_naive, preimage_scan, zero_part_naive  # noqa: E402
from zexact.algebra import Congruence, Homomorphism, compose, product  # noqa: E402
from zexact.campaign import CampaignConfig, run_campaign  # noqa: E402
from zexact.catalog import build_catalog  # noqa: E402
from zexact.diagrams import Square, is_pullback, kernels_along_pullback, mono_characterization  # noqa: E402
from zexact.homs import enumerate_homs  # noqa: E402
from zexact.lemmas import LadderDiagram, generate_grid, pb_mono_sides, verify_pb_iff_mono  # noqa: E402
from zexact.presets import boolean_power, get_preset, zmod  # noqa: E402
from zexact.verdict import Status  # noqa: E402
from zexact.zcore import (  # noqa: E402
    ExactSequence,
    check_zcokernel_candidate,
    initial_from_catalog,
    verify_zero_context,
    z_map,
    zcokernel_search,
    zero_part,
    zero_parts_isomorphic,
    zkernel,
)

pytestmark = pytest.mark.acceptance

RESULTS: dict[int, tuple[bool, str]] = {}

CONTEXT_BOUNDS = {"bool": 8, "ring1": 8, "heyting": 5, "mv": 5}
SMALL_BOUNDS = {"bool": 8, "ring1": 8, "heyting": 8, "mv": 8}


def _catalog(preset, bound):
    return build_catalog(preset, bound).algebras


def _all_homs(cat):
    for A in cat:
        for B in cat:
            for f in enumerate_homs(A, B):
                yield f


# -- criteria --------------------------------------------------------------


def criterion_1():
    parts = []
    ok = True
    for preset, bound in CONTEXT_BOUNDS.items():
        r = verify_zero_context(_catalog(preset, bound))
        ok &= r.ok
        parts.append(f"{preset}: {'ok' if r.ok else r.counterexample}")
    return ok, "; ".join(parts)


def _additive_order_of_one(R):
    one, zero = R.constant("1"), R.constant("0")
    x, n = one, 1
    while x != zero:
        x, n = R.op("+", x, one), n + 1
    return n


def criterion_2():
    bool_sizes = [len(zero_part_naive(boolean_power(k))) for k in (1, 2, 3)]
    engine_bool = [zero_part(boolean_power(k)).zero.size for k in (1, 2, 3)]
    zn = all(zero_part(zmod(n)).elements == set(range(n)) for n in range(1, 9))
    rings = _catalog("ring1", 8)
    mismatches = 0
    for R in rings:
        for S in rings:
            same_char = _additive_order_of_one(R) == _additive_order_of_one(S)
            mismatches += zero_parts_isomorphic(R, S) != same_char
    ok = bool_sizes == engine_bool == [2, 2, 2] and zn and mismatches == 0
    return ok, f"Z(2^k) sizes {engine_bool}, Z(Z/n)=Z/n for n<=8: {zn}, {len(rings) ** 2} ring pairs with {mismatches} mismatches"


def criterion_3():
    homs = probes = bad = 0
    for preset, bound in SMALL_BOUNDS.items():
        cat = _catalog(preset, bound)
        into = {A: [e for C in cat for e in enumerate_homs(C, A)] for A in cat}
        for f in _all_homs(cat):
            homs += 1
            zk = zkernel(f)
            carrier = preimage_scan(f.map, f.source, f.target)
            if set(zk.carrier) != carrier or not zk.k.is_injective():
                bad += 1
                continue
            zb = zero_part_naive(f.target)
            for e in into[f.source]:
                probes += 1
                in_nz = all(f.map[x] in zb for x in e.map)
                factors = set(e.map) <= carrier
                if in_nz != factors:
                    bad += 1
                elif factors and compose(zk.k, zk.mediate(e)) != e:
                    bad += 1
    return bad == 0, f"{homs} homs, {probes} probe checks, {bad} discrepancies"


def _campaign(preset, variant, count):
    cfg = CampaignConfig(42, get_preset(preset), _catalog(preset, 8), count, variant)
    first, second = run_campaign(cfg), run_campaign(cfg)
    return first, first.dumps() == second.dumps()


def criterion_4():
    ok = True
    parts = []
    for preset in ("bool", "ring1"):
        for variant, count in (("iso-short-five", 200), ("regepi-short-five", 100), ("mono-short-five", 100)):
            r, same = _campaign(preset, variant, count)
            good = r.accepted >= count and r.failed == 0 and same
            ok &= good
            parts.append(f"{preset}/{variant}: {r.accepted} accepted, {r.failed} failed, repeatable={same}")
    return ok, "; ".join(parts)


def criterion_5():
    ok = True
    parts = []
    for preset in ("bool", "ring1"):
        for variant in "abc":
            r, same = _campaign(preset, variant, 100)
            good = r.accepted >= 100 and r.failed == 0 and same
            ok &= good
            parts.append(f"{preset}/{variant}: {r.accepted} accepted, {r.failed} failed")
    B3 = boolean_power(3)
    g = generate_grid(B3, Congruence(B3, tuple(x & 3 for x in range(8))), Congruence(B3, tuple((x >> 1) & 3 for x in range(8))))
    expected = boolean_grid_sizes_naive()
    pinned = (2, 4, 4, 4, 8, 4, 4, 4, 2)
    grid_ok = g is not None and g.sizes() == expected == pinned
    ok &= grid_ok
    parts.append(f"2^3 grid sizes {g.sizes() if g else None}")
    return ok, "; ".join(parts)


def criterion_6():
    Z4, Z2 = zmod(4), zmod(2)
    mod2 = enumerate_homs(Z4, Z2)[0]
    sq = Square(Homomorphism.identity(Z4), mod2, mod2, Homomorphism.identity(Z2))
    v = kernels_along_pullback(sq, "forward")
    sizes = (zkernel(sq.f).kernel.size, zkernel(sq.g).kernel.size)
    i = bool(is_pullback(sq)) and sizes == (4, 2) and v.status is Status.UNMET

    F, p1, p2 = product(Z2, Z2, "f2xf2")
    search = zcokernel_search(Homomorphism.identity(F), 16, [p1, p2])
    ii = not search.found and search.candidates and all(not c.ok and c.clause for c in search.candidates)

    iii = not check_zcokernel_candidate(Homomorphism.identity(F), p1, [p2]).ok

    one = zmod(1)
    to1 = enumerate_homs(Z2, one)[0]
    d = LadderDiagram(
        ExactSequence(Homomorphism.identity(Z2), Homomorphism.identity(Z2)),
        ExactSequence(Homomorphism.identity(one), Homomorphism.identity(one)),
        to1, to1, to1,
    )
    left, b_mono = pb_mono_sides(d)
    iv = verify_pb_iff_mono(d).status is Status.UNMET and left != b_mono
    flags = {"i": i, "ii": bool(ii), "iii": iii, "iv": iv}
    return all(flags.values()), ", ".join(f"({k}) {'ok' if v else 'FAIL'}" for k, v in flags.items())


def criterion_7():
    checked = bad = 0
    for preset, bound in SMALL_BOUNDS.items():
        for f in _all_homs(_catalog(preset, bound)):
            if not z_map(f).is_bijective():
                continue
            checked += 1
            k_is_eps = preimage_scan(f.map, f.source, f.target) == zero_part_naive(f.source)
            if f.is_injective() != k_is_eps or mono_characterization(f).status is not Status.HOLDS:
                bad += 1
    mod2 = enumerate_homs(zmod(4), zmod(2))[0]
    example = zkernel(mod2).k.is_bijective() and not mod2.is_injective() and not z_map(mod2).is_bijective()
    return bad == 0 and example, f"{checked} homs with bijective Z(f), {bad} violations; Z/4 -> Z/2 example {'ok' if example else 'FAIL'}"


def criterion_8():
    cat = _catalog("bool", 8)
    r = initial_from_catalog([boolean_power(0), boolean_power(1)], cat)
    unique = all(len(enumerate_homs(r.initial, X)) == 1 for X in cat) if r.initial else False
    certs = r.initial is not None and len(r.certificates) == len(cat)
    ok = r.initial is not None and r.initial.size == 2 and unique and certs
    return ok, f"initial size {r.initial.size if r.initial else None}, {len(r.certificates)} certificates for {len(cat)} algebras"


CRITERIA = {
    1: ("context conditions", criterion_1),
    2: ("zero-part facts", criterion_2),
    3: ("Z-kernel oracle equivalence", criterion_3),
    4: ("short five campaigns", criterion_4),
    5: ("nine lemma campaigns and pinned grid", criterion_5),
    6: ("counterexample regressions", criterion_6),
    7: ("mono characterization", criterion_7),
    8: ("initiality", criterion_8),
}


def line(n: int) -> str:
    ok, detail = RESULTS[n]
    return f"criterion {n} ({CRITERIA[n][0]}): {'PASS' if ok else 'FAIL'}: {detail}"


def evaluate(n: int) -> bool:
    start = time.perf_counter()
    ok, detail = CRITERIA[n][1]()
    RESULTS[n] = (bool(ok), f"{detail} [{time.perf_counter() - start:.1f}s]")
    print(line(n))
    return bool(ok)


@pytest.mark.parametrize("n", sorted(CRITERIA))
def test_criterion(n):
    assert evaluate(n), line(n)


if __name__ == "__main__":
    results = [evaluate(n) for n in sorted(CRITERIA)]
    sys.exit(0 if all(results) else 1)
