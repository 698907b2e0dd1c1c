"""Builtin catalogs of small algebras for each preset, and catalog hashing."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path

from zexact.algebra import FiniteAlgebra, VarietyPreset, check_model, product, trivial_algebra
from zexact.errors import ZexactError
from zexact.presets import boolean_power, get_preset, heyting_chain, lukasiewicz_chain, zmod

FNV_OFFSET = 0xCBF29CE484222325
FNV_PRIME = 0x100000001B3


def fnv1a64(data: bytes) -> int:
    h = FNV_OFFSET
    for byte in data:
        h ^= byte
        h = (h * FNV_PRIME) & 0xFFFFFFFFFFFFFFFF
    return h


@dataclass
class Catalog:
    preset: VarietyPreset
    algebras: list[FiniteAlgebra]
    provenance: list[str] = field(default_factory=lambda: ["builtin"])

    def __post_init__(self):
        for A in self.algebras:
            report = check_model(A, self.preset)
            if not report:
                raise ZexactError(
                    f"{A.id or A!r} violates {report.axiom} at {report.assignment}"
                )

    def __iter__(self):
        return iter(self.algebras)

    def __len__(self):
        return len(self.algebras)

    def by_id(self) -> dict[str, FiniteAlgebra]:
        return {A.id: A for A in self.algebras}

    def up_to(self, size: int) -> list[FiniteAlgebra]:
        return [A for A in self.algebras if A.size <= size]

    def digest(self) -> str:
        return catalog_hash(self.algebras)


def catalog_hash(algebras) -> str:
    from zexact.io import algebra_to_json

    blob = json.dumps([algebra_to_json(A) for A in algebras], sort_keys=True, separators=(",", ":"))
    return f"{fnv1a64(blob.encode('utf-8')):016x}"


def _ring_catalog(bound):
    algs = [zmod(1)]
    algs += [zmod(n) for n in range(2, bound + 1)]
    for m in range(2, bound + 1):
        for n in range(m, bound + 1):
            if m * n <= bound:
                algs.append(product(zmod(m), zmod(n))[0])
    return algs


def _bool_catalog(bound):
    algs = [boolean_power(0)]
    k = 1
    while 2**k <= bound:
        algs.append(boolean_power(k))
        k += 1
    return algs


def build_catalog(preset_name: str, bound: int) -> Catalog:
    if bound < 1:
        raise ValueError("catalog bound must be at least 1")
    preset = get_preset(preset_name)
    if preset_name == "ring1":
        algs = _ring_catalog(bound)
    elif preset_name == "bool":
        algs = _bool_catalog(bound)
    elif preset_name == "heyting":
        algs = [trivial_algebra(preset.signature)] + [heyting_chain(n) for n in range(2, bound + 1)]
    elif preset_name == "mv":
        algs = [trivial_algebra(preset.signature)] + [lukasiewicz_chain(n) for n in range(2, bound + 1)]
    else:
        raise KeyError(f"no builtin catalog for preset {preset_name!r}")
    return Catalog(preset, algs)


def load_catalog_dir(path, preset: VarietyPreset) -> Catalog:
    from zexact.io import parse_algebra_file

    files = sorted(Path(path).glob("*.json"))
    if not files:
        raise ZexactError(f"no algebra files in {path}")
    algs = [parse_algebra_file(p, {preset.name: preset.signature}) for p in files]
    return Catalog(preset, algs, [str(p) for p in files])
