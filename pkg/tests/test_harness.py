import json
import random

import pytest

from equalisers import harness
from equalisers.harness import (
    CAMPAIGNS,
    CampaignReport,
    TrialConfig,
    random_hom,
    random_subgroup,
    random_word,
    replay,
    run_appendixA_restriction,
    run_campaign,
    run_inertness_sampling,
    run_sd_invariant_campaign,
    run_theoremA_campaign,
    verify_induced_pair,
)
from equalisers.morphisms import Homomorphism, identity_map, is_injective
from equalisers.stallings import fold, intersect, trivial_subgroup
from equalisers.words import Alphabet, parse_word

AB = Alphabet("ab")
XY = Alphabet("xy")
XYZ = Alphabet("xyz")
X1 = Alphabet(["x'", "y'"])


def hom(dom, cod, images):
    return Homomorphism.from_strings(dom, cod, images)


def induced_data():
    g = hom(XYZ, AB, ["aaaa", "Abba", "aba"])
    h = hom(XYZ, AB, ["bb", "aaaaaa", "baaa"])
    g2 = hom(X1, AB, ["aa", "Aba"])
    h2 = hom(X1, AB, ["b", "aaa"])
    iota = hom(XYZ, X1, ["x' x'", "y' y'", "x' y'"])
    tau = identity_map(AB)
    return iota, tau, g, h, g2, h2


def test_induced_pair_holds():
    assert verify_induced_pair(*induced_data())


def test_induced_pair_trivial_case():
    g = hom(XY, AB, ["ab", "b"])
    h = hom(XY, AB, ["a", "bb"])
    assert verify_induced_pair(identity_map(XY), identity_map(AB), g, h, g, h)


def test_induced_pair_fails_under_every_single_image_change():
    iota, tau, g, h, g2, h2 = induced_data()
    g2_bad = hom(X1, AB, ["aa", "b"])
    assert not verify_induced_pair(iota, tau, g, h, g2_bad, h2)
    data = dict(zip("iota tau g h g2 h2".split(), induced_data()))
    for name in ("g", "h", "g2", "h2", "iota"):
        f = data[name]
        for i in range(len(f.domain)):
            imgs = list(f.images)
            imgs[i] = imgs[i] * f.codomain.generator(0)
            changed = dict(data)
            changed[name] = Homomorphism(f.domain, f.codomain, imgs)
            if name == "iota" and not is_injective(changed[name]):
                continue
            assert not verify_induced_pair(*changed.values()), (name, i)


def test_induced_pair_requires_injective_embeddings():
    iota, tau, g, h, g2, h2 = induced_data()
    with pytest.raises(ValueError):
        verify_induced_pair(iota, hom(AB, AB, ["a", "1"]), g, h, g2, h2)


def test_inertness_examples():
    H = fold([parse_word(AB, "a"), parse_word(AB, "bb")], AB)
    K = fold([parse_word(AB, "ab")], AB)
    assert intersect(H, K).rank() <= K.rank() == 1
    assert intersect(H, trivial_subgroup(AB)).rank() == 0


def test_random_generators_respect_bounds():
    rng = random.Random(3)
    for _ in range(200):
        w = random_word(rng, AB, 5)
        assert len(w) <= 5 and w.alphabet == AB
        assert random_word(rng, AB, 5, 1).codes
        G = random_subgroup(rng, AB, 4)
        assert G.rank() <= 3
    f = random_hom(rng, XY, AB, 4, injective=True)
    assert is_injective(f) and all(len(w) <= 4 for w in f.images)
    f = random_hom(rng, XY, AB, 4, injective=False)
    assert not is_injective(f)


def test_trial_config_validation():
    with pytest.raises(ValueError):
        TrialConfig(trials=0)
    with pytest.raises(ValueError):
        TrialConfig(radius=-1)


@pytest.mark.parametrize("name", sorted(CAMPAIGNS))
def test_every_campaign_passes_a_short_run(name):
    report = run_campaign(name, TrialConfig(seed=11, trials=10))
    assert report.status == "pass", report.failures
    assert report.note


def test_named_runners():
    cfg = TrialConfig(seed=2, trials=5)
    for fn, name in [
        (run_inertness_sampling, "inertness-rank2"),
        (run_theoremA_campaign, "theoremA"),
        (run_appendixA_restriction, "appendixA-restriction"),
        (run_sd_invariant_campaign, "sd-invariants"),
    ]:
        rep = fn(cfg)
        assert rep.property == name and rep.passed


def test_reports_are_deterministic():
    cfg = TrialConfig(seed=5, trials=15)
    a = json.dumps(run_campaign("theoremA", cfg).to_dict(), sort_keys=True)
    b = json.dumps(run_campaign("theoremA", cfg).to_dict(), sort_keys=True)
    assert a == b


def test_unknown_campaign():
    with pytest.raises(KeyError):
        run_campaign("no-such-property")


def test_failures_replay_in_isolation(monkeypatch):
    # a planted bug: every trial whose first draw is small "fails"
    def flaky(rng, cfg):
        x = rng.random()
        return f"x={x}", (["planted"] if x < 0.3 else [])

    monkeypatch.setitem(CAMPAIGNS, "planted", flaky)
    cfg = TrialConfig(seed=9, trials=40)
    report = run_campaign("planted", cfg)
    assert report.status == "fail" and report.failures
    for f in report.failures:
        again = replay("planted", f["seed"], f["trial"], cfg)
        assert again == f
    passing = {t for t in range(40)} - {f["trial"] for f in report.failures}
    assert all(replay("planted", 9, t, cfg) is None for t in passing)


def test_crashing_trials_are_failures(monkeypatch):
    def boom(rng, cfg):
        raise RuntimeError("kaput")

    monkeypatch.setitem(CAMPAIGNS, "boom", boom)
    report = run_campaign("boom", TrialConfig(trials=2))
    assert len(report.failures) == 2
    assert "kaput" in report.failures[0]["problems"][0]


def test_campaign_report_dict():
    d = CampaignReport("p", 3).to_dict()
    assert d["status"] == "pass" and d["failures"] == [] and d["trials"] == 3
    assert harness.REFUTATION_NOTE in d["note"]
