import pytest

from zexact.campaign import VARIANTS, CampaignConfig, attempt, normalize_variant, run_campaign
from zexact.catalog import build_catalog
from zexact.errors import ZexactError
from zexact.presets import get_preset


def config(variant, preset="bool", count=20, seed=42, bound=8, **kw):
    return CampaignConfig(seed, get_preset(preset), build_catalog(preset, bound).algebras, count, variant, **kw)


@pytest.mark.parametrize("variant", VARIANTS)
def test_campaign_meets_count_without_failures(variant):
    r = run_campaign(config(variant))
    c = r.to_json()["counters"]
    assert r.complete and r.failed == 0
    assert c["accepted"] == c["held"] + c["failed"] >= 20
    assert c["attempted"] == c["accepted"] + c["hypotheses_unmet"] + c["rejected"]
    assert 1 <= c["distinct_accepted"] <= c["accepted"]


@pytest.mark.parametrize("variant", ["iso", "b", "pb-mono"])
def test_campaign_bytes_are_deterministic(variant):
    first = run_campaign(config(variant, "ring1")).dumps()
    second = run_campaign(config(variant, "ring1")).dumps()
    assert first == second


def test_attempts_depend_only_on_seed_and_index():
    cfg = config("c")
    assert attempt(cfg, 7).key == attempt(cfg, 7).key
    other = config("c", seed=43)
    keys = {attempt(cfg, i).key for i in range(20)}
    assert keys != {attempt(other, i).key for i in range(20)}


def test_report_fields():
    data = run_campaign(config("a", count=5)).to_json()
    assert data["seed"] == 42 and data["variant"] == "a"
    assert data["strategy"] == "congruence-pair"
    assert len(data["catalog_hash"]) == 16
    assert data["catalog"] == [A.id for A in build_catalog("bool", 8).algebras]
    assert set(data) >= {"rejections", "unmet_reasons", "exploratory", "failures", "complete", "max_attempts"}


def test_attempt_budget_exhaustion_marks_incomplete():
    r = run_campaign(config("b", count=50, max_attempts=3))
    assert not r.complete
    assert r.to_json()["counters"]["attempted"] == 3


def test_count_must_be_positive():
    with pytest.raises(ValueError):
        config("b", count=0)


def test_empty_catalog():
    with pytest.raises(ZexactError):
        CampaignConfig(42, get_preset("bool"), [], 5, "b")


def test_unknown_strategy():
    with pytest.raises(ValueError):
        config("iso", strategy="random")


@pytest.mark.parametrize(
    "given, mode, expected",
    [
        ("b", None, "b"),
        ("nine-c", None, "c"),
        ("short-five", "mono", "mono-short-five"),
        ("short-five", None, "iso-short-five"),
        ("regepi", None, "regepi-short-five"),
        ("transfer", None, "regepi-transfer"),
        (" PB-Mono ", None, "pb-mono"),
    ],
)
def test_normalize_variant(given, mode, expected):
    assert normalize_variant(given, mode) == expected


def test_normalize_variant_rejects_unknown():
    with pytest.raises(ValueError):
        normalize_variant("ten")


def test_strategy_resolution():
    assert config("iso").resolved_strategy == "hom"
    assert config("regepi").resolved_strategy == "quotient"
    assert config("mono").resolved_strategy == "sub"
    assert config("mono", strategy="quotient").resolved_strategy == "quotient"
    assert config("transfer").resolved_strategy == "congruence-pair"
