"""
Seeded campaigns: generate many small ladders or grids, run the matching
verifier on each, and aggregate the verdicts into a deterministic report.

Attempt ``i`` of a campaign draws from ``random.Random(f"{seed}:{i}")`` so
each attempt is reproducible on its own and the report depends only on the
config and the catalog bytes.
"""

from __future__ import annotations

import json
import random
from collections import Counter
from dataclasses import dataclass, field
from typing import Sequence

from zexact.algebra import (
    Congruence,
    FiniteAlgebra,
    Homomorphism,
    VarietyPreset,
    closure,
    compose,
    enumerate_congruences,
    quotient,
    subalgebra,
)
from zexact.catalog import catalog_hash
from zexact.errors import MalformedDiagram, TableError, ZexactError
from zexact.homs import enumerate_homs
from zexact.lemmas import (
    LadderDiagram,
    build_grid,
    nine_conclusion,
    verify_nine,
    verify_pb_iff_mono,
    verify_regepi_transfer,
    verify_short_five,
)
from zexact.verdict import Status, Verdict
from zexact.zcore import ExactSequence, zkernel

NINE_VARIANTS = ("a", "b", "c")
LADDER_VARIANTS = ("iso-short-five", "regepi-short-five", "mono-short-five", "pb-mono")
VARIANTS = NINE_VARIANTS + LADDER_VARIANTS + ("regepi-transfer",)
DEFAULT_STRATEGY = {
    "iso-short-five": "hom",
    "regepi-short-five": "quotient",
    "mono-short-five": "sub",
    "pb-mono": "hom",
}
STRATEGIES = ("hom", "quotient", "sub", "auto")


def normalize_variant(variant: str, mode: str | None = None) -> str:
    """Accept ``a``/``b``/``c``, ``nine-a``, ``short-five`` (with a mode) and the full names."""
    v = variant.strip().lower()
    if v.startswith("nine-"):
        v = v[5:]
    if v in ("short-five", "short5"):
        v = f"{mode or 'iso'}-short-five"
    if v in ("iso", "regepi", "mono"):
        v = f"{v}-short-five"
    if v == "transfer":
        v = "regepi-transfer"
    if v not in VARIANTS:
        raise ValueError(f"unknown campaign variant {variant!r}; expected one of {', '.join(VARIANTS)}")
    return v


@dataclass
class CampaignConfig:
    seed: int
    preset: VarietyPreset
    catalog: Sequence[FiniteAlgebra]
    count: int
    variant: str
    strategy: str = "auto"
    max_attempts: int | None = None

    def __post_init__(self):
        if self.count < 1:
            raise ValueError("campaign count must be at least 1")
        if not self.catalog:
            raise ZexactError("campaign catalog is empty")
        self.variant = normalize_variant(self.variant)
        if self.strategy not in STRATEGIES:
            raise ValueError(f"unknown strategy {self.strategy!r}")
        if self.max_attempts is None:
            self.max_attempts = 200 * self.count

    @property
    def resolved_strategy(self) -> str:
        if self.variant in NINE_VARIANTS or self.variant == "regepi-transfer":
            return "congruence-pair"
        if self.strategy == "auto":
            return DEFAULT_STRATEGY[self.variant]
        return self.strategy


@dataclass
class Instance:
    """One generated input: either a verifier verdict or a rejection reason."""

    key: str
    verdict: Verdict | None = None
    rejection: str | None = None
    conclusion_held: bool | None = None


class _Context:
    def __init__(self, catalog):
        self.catalog = list(catalog)
        self._congs: dict[int, list[Congruence]] = {}

    def congruences(self, i: int) -> list[Congruence]:
        if i not in self._congs:
            self._congs[i] = enumerate_congruences(self.catalog[i])
        return self._congs[i]

    def congruences_of(self, A: FiniteAlgebra) -> list[Congruence]:
        for i, B in enumerate(self.catalog):
            if B == A:
                return self.congruences(i)
        return enumerate_congruences(A)


def _bucket(reason: str) -> str:
    return reason.split(":", 1)[0].strip()


def _blocks(c: Congruence) -> str:
    return "".join(map(str, c.blocks)) if max(c.blocks, default=0) < 10 else ",".join(map(str, c.blocks))


# -- ladder construction ---------------------------------------------------


def ladder_from(a: Homomorphism, theta_p: Congruence, theta: Congruence) -> LadderDiagram:
    """Exact ladder over ``a`` with bottom row ``A' -> A'/theta_p`` and top row ``A -> A/theta``.

    ``theta`` must be contained in the kernel of ``A -> A'/theta_p``.
    """
    A, Ap = a.source, a.target
    Bp, fp = quotient(Ap, theta_p, "B'")
    B, f = quotient(A, theta, "B")
    via = compose(fp, a)
    b = Homomorphism(B, Bp, tuple(via.map[c[0]] for c in theta.classes()))
    return _ladder_over(a, f, fp, b)


def _ladder_over(a, f, fp, b) -> LadderDiagram:
    zk, zkp = zkernel(f), zkernel(fp)
    u = zkp.mediate(compose(a, zk.k))
    return LadderDiagram(ExactSequence(zk.k, f), ExactSequence(zkp.k, fp), u, a, b)


def _refining(ctx: _Context, A: FiniteAlgebra, h: Homomorphism) -> list[Congruence]:
    ker = Congruence.kernel(h)
    return [c for c in ctx.congruences_of(A) if c.refines(ker)]


def _random_sub(rng: random.Random, Ap: FiniteAlgebra) -> Homomorphism:
    seeds = [x for x in range(Ap.size) if rng.random() < 0.5 / max(1, Ap.size.bit_length())]
    _, inc = subalgebra(Ap, sorted(closure(Ap, seeds)), "A")
    return inc


def _draw_rung(rng: random.Random, ctx: _Context, strategy: str) -> tuple[Homomorphism, str]:
    n = len(ctx.catalog)
    if strategy == "quotient":
        i = rng.randrange(n)
        Ap_src = ctx.catalog[i]
        phi = rng.choice(ctx.congruences(i))
        Q, q = quotient(Ap_src, phi, "A'")
        return q, f"{Ap_src.id}/[{_blocks(phi)}]"
    if strategy == "sub":
        j = rng.randrange(n)
        inc = _random_sub(rng, ctx.catalog[j])
        return inc, f"sub{sorted(inc.map)}<{ctx.catalog[j].id}"
    i, j = rng.randrange(n), rng.randrange(n)
    homs = enumerate_homs(ctx.catalog[i], ctx.catalog[j])
    if not homs:
        return None, f"{ctx.catalog[i].id}->{ctx.catalog[j].id}"
    a = rng.choice(homs)
    return a, f"{ctx.catalog[i].id}->{ctx.catalog[j].id}:{list(a.map)}"


def _ladder_attempt(rng: random.Random, ctx: _Context, cfg: CampaignConfig) -> Instance:
    strategy = cfg.resolved_strategy
    if strategy == "auto":
        strategy = rng.choice(("hom", "quotient", "sub"))
    a, key = _draw_rung(rng, ctx, strategy)
    if a is None:
        return Instance(key, rejection="no homomorphism between the drawn algebras")
    Ap = a.target
    if cfg.variant == "pb-mono" and rng.random() < 0.5:
        # bottom map need not be surjective for this lemma
        j = rng.randrange(len(ctx.catalog))
        outs = enumerate_homs(Ap, ctx.catalog[j])
        if not outs:
            return Instance(key, rejection="no homomorphism out of A'")
        fp = rng.choice(outs)
        via = compose(fp, a)
        theta = rng.choice(_refining(ctx, a.source, via))
        B, f = quotient(a.source, theta, "B")
        b = Homomorphism(B, fp.target, tuple(via.map[c[0]] for c in theta.classes()))
        key += f"|f'={list(fp.map)}|theta=[{_blocks(theta)}]"
        d = _ladder_over(a, f, fp, b)
        return Instance(key, verify_pb_iff_mono(d))
    theta_p = rng.choice(ctx.congruences_of(Ap))
    _, fp = quotient(Ap, theta_p)
    theta = rng.choice(_refining(ctx, a.source, compose(fp, a)))
    key += f"|theta'=[{_blocks(theta_p)}]|theta=[{_blocks(theta)}]"
    try:
        d = ladder_from(a, theta_p, theta)
    except (MalformedDiagram, TableError) as exc:
        return Instance(key, rejection=f"ladder: {exc}")
    if cfg.variant == "pb-mono":
        return Instance(key, verify_pb_iff_mono(d))
    return Instance(key, verify_short_five(d, cfg.variant.split("-")[0]))


# -- grid construction -----------------------------------------------------


def _grid_attempt(rng: random.Random, ctx: _Context, cfg: CampaignConfig) -> Instance:
    i = rng.randrange(len(ctx.catalog))
    Ap = ctx.catalog[i]
    congs = ctx.congruences(i)
    theta, psi = rng.choice(congs), rng.choice(congs)
    key = f"{Ap.id}|theta=[{_blocks(theta)}]|psi=[{_blocks(psi)}]"
    try:
        built = build_grid(Ap, theta, psi)
    except (MalformedDiagram, TableError) as exc:
        return Instance(key, rejection=f"construction: {exc}")
    if not built.accepted:
        reason = built.rejections[0]
        held = None
        if built.grid is not None and all(r.startswith("zero parts") for r in built.rejections):
            if cfg.variant == "regepi-transfer":
                held = built.grid.up.is_surjective()
            else:
                held = bool(nine_conclusion(built.grid, cfg.variant))
        return Instance(key, rejection=reason, conclusion_held=held)
    if cfg.variant == "regepi-transfer":
        return Instance(key, verify_regepi_transfer(built.grid.regepi_portion()))
    return Instance(key, verify_nine(built.grid, cfg.variant))


# -- driver ----------------------------------------------------------------


def attempt(cfg: CampaignConfig, i: int, ctx: _Context | None = None) -> Instance:
    rng = random.Random(f"{cfg.seed}:{i}")
    ctx = ctx or _Context(cfg.catalog)
    if cfg.variant in NINE_VARIANTS or cfg.variant == "regepi-transfer":
        return _grid_attempt(rng, ctx, cfg)
    return _ladder_attempt(rng, ctx, cfg)


@dataclass
class CampaignReport:
    data: dict = field(default_factory=dict)

    @property
    def failed(self) -> int:
        return self.data["counters"]["failed"]

    @property
    def accepted(self) -> int:
        return self.data["counters"]["accepted"]

    @property
    def complete(self) -> bool:
        return self.data["complete"]

    def to_json(self) -> dict:
        return self.data

    def dumps(self) -> str:
        return json.dumps(self.data, sort_keys=True, indent=2, ensure_ascii=False) + "\n"


def run_campaign(cfg: CampaignConfig) -> CampaignReport:
    ctx = _Context(cfg.catalog)
    counters = Counter(attempted=0, accepted=0, held=0, failed=0, hypotheses_unmet=0, rejected=0)
    rejections: Counter = Counter()
    unmet_reasons: Counter = Counter()
    explore = Counter(zero_part_rejected=0, conclusion_held=0, conclusion_failed=0)
    failures = []
    distinct = set()
    i = 0
    while counters["accepted"] < cfg.count and i < cfg.max_attempts:
        inst = attempt(cfg, i, ctx)
        counters["attempted"] += 1
        if inst.verdict is None:
            counters["rejected"] += 1
            rejections[_bucket(inst.rejection)] += 1
            if inst.conclusion_held is not None:
                explore["zero_part_rejected"] += 1
                explore["conclusion_held" if inst.conclusion_held else "conclusion_failed"] += 1
        elif inst.verdict.status is Status.UNMET:
            counters["hypotheses_unmet"] += 1
            unmet_reasons[_bucket(inst.verdict.reason)] += 1
        else:
            counters["accepted"] += 1
            distinct.add(inst.key)
            if inst.verdict.status is Status.HOLDS:
                counters["held"] += 1
            else:
                counters["failed"] += 1
                failures.append({"attempt": i, "instance": inst.key, "verdict": inst.verdict.to_json()})
        i += 1
    data = {
        "seed": cfg.seed,
        "preset": cfg.preset.name,
        "variant": cfg.variant,
        "strategy": cfg.resolved_strategy,
        "count": cfg.count,
        "max_attempts": cfg.max_attempts,
        "catalog": [A.id for A in cfg.catalog],
        "catalog_hash": catalog_hash(cfg.catalog),
        "counters": dict(counters, distinct_accepted=len(distinct)),
        "rejections": dict(rejections),
        "unmet_reasons": dict(unmet_reasons),
        "exploratory": dict(explore),
        "failures": failures,
        "complete": counters["accepted"] >= cfg.count,
    }
    return CampaignReport(data)
