import pytest

from zexact.algebra import FiniteAlgebra
from zexact.catalog import Catalog, build_catalog, catalog_hash, fnv1a64, load_catalog_dir
from zexact.errors import ZexactError
from zexact.io import algebra_to_json, write_json
from zexact.presets import BOOL, RING1, zmod


def test_fnv1a64_reference_vectors():
    # published FNV-1a 64-bit test vectors
    assert fnv1a64(b"") == 0xCBF29CE484222325
    assert fnv1a64(b"a") == 0xAF63DC4C8601EC8C
    assert fnv1a64(b"foobar") == 0x85944171F73967E8


def test_ring_catalog_members():
    ids = [A.id for A in build_catalog("ring1", 8)]
    assert len(ids) == 11
    assert [A.size for A in build_catalog("ring1", 8)] == [1, 2, 3, 4, 5, 6, 7, 8, 4, 6, 8]


def test_other_catalogs():
    assert [A.size for A in build_catalog("bool", 8)] == [1, 2, 4, 8]
    assert [A.size for A in build_catalog("heyting", 5)] == [1, 2, 3, 4, 5]
    assert [A.size for A in build_catalog("mv", 5)] == [1, 2, 3, 4, 5]


def test_catalog_errors():
    with pytest.raises(ValueError):
        build_catalog("bool", 0)
    with pytest.raises(KeyError):
        build_catalog("group", 4)


def test_catalog_rejects_non_models():
    tables = list(zmod(2).tables)
    tables[RING1.signature.symbols.index("+")] = (0, 0, 0, 0)
    with pytest.raises(ZexactError):
        Catalog(RING1, [FiniteAlgebra(RING1.signature, 2, tuple(tables))])


def test_hash_is_stable_and_sensitive():
    cat = build_catalog("bool", 8)
    assert cat.digest() == catalog_hash(list(build_catalog("bool", 8)))
    assert len(cat.digest()) == 16
    assert cat.digest() != build_catalog("bool", 4).digest()
    assert catalog_hash([zmod(2)]) != catalog_hash([zmod(2).with_id("other")])


def test_helpers():
    cat = build_catalog("ring1", 6)
    assert set(cat.by_id()) == {A.id for A in cat}
    assert all(A.size <= 3 for A in cat.up_to(3))
    assert len(cat) == len(cat.algebras)


def test_load_catalog_dir(tmp_path):
    for A in build_catalog("bool", 4):
        write_json(tmp_path / f"{A.size}.json", algebra_to_json(A))
    cat = load_catalog_dir(tmp_path, BOOL)
    assert sorted(A.size for A in cat) == [1, 2, 4]
    assert all(p.endswith(".json") for p in cat.provenance)
    with pytest.raises(ZexactError):
        load_catalog_dir(tmp_path / "empty", BOOL)
