"""Seeded property campaigns over random instances.

Each campaign checks a proven statement on sampled inputs, so any failure
points at this code rather than at the mathematics.  A trial draws all its
randomness from ``random.Random(f"{name}:{seed}:{trial}")``; failures record
the seed and trial index and can be replayed alone with :func:`replay`.
"""
from __future__ import annotations

import random
import traceback
from dataclasses import asdict, dataclass, field
from typing import Callable

from . import stallings
from .equaliser import (
    CANDIDATE,
    EXACT,
    NOT_FG,
    TRIVIAL,
    WHOLE,
    classify_rank2,
    enumerate_equaliser,
    fixed_points_bounded,
    in_equaliser,
    solve_retract_pipeline,
)
from .morphisms import Homomorphism, apply, compose, identity_map, image, is_injective, restrict
from .stable_domain import build_phi, sd_iterate
from .stallings import fold, intersect
from .words import Alphabet, Word, _inv, _mul, iter_reduced_words

__all__ = [
    "TrialConfig",
    "CampaignReport",
    "CAMPAIGNS",
    "run_campaign",
    "replay",
    "random_word",
    "random_hom",
    "random_subgroup",
    "verify_induced_pair",
    "run_inertness_sampling",
    "run_theoremA_campaign",
    "run_appendixA_restriction",
    "run_sd_invariant_campaign",
]

REFUTATION_NOTE = "every checked statement is a theorem; a failure is a bug in this package"


@dataclass(frozen=True)
class TrialConfig:
    seed: int = 0
    trials: int = 100
    max_word_len: int = 4
    max_rank: int = 3
    radius: int = 6
    max_iter: int = 5

    def __post_init__(self):
        for name in ("trials", "max_word_len", "max_rank", "radius", "max_iter"):
            if getattr(self, name) <= 0:
                raise ValueError(f"{name} must be positive")


@dataclass
class CampaignReport:
    property: str
    trials: int
    failures: list[dict] = field(default_factory=list)
    note: str = REFUTATION_NOTE

    @property
    def status(self) -> str:
        return "fail" if self.failures else "pass"

    @property
    def passed(self) -> bool:
        return not self.failures

    def to_dict(self) -> dict:
        d = asdict(self)
        d["status"] = self.status
        return d


# -- random instances ------------------------------------------------------------


def random_word(rng: random.Random, alphabet: Alphabet, max_len: int, min_len: int = 0) -> Word:
    """Uniform length in [min_len, max_len], then a uniform reduced word of that length."""
    n = len(alphabet)
    length = rng.randint(min_len, max_len)
    codes: list[int] = []
    letters = [c for i in range(1, n + 1) for c in (i, -i)]
    while len(codes) < length:
        c = rng.choice(letters)
        if codes and c == -codes[-1]:
            continue
        codes.append(c)
    return Word._raw(alphabet, tuple(codes))


def random_hom(rng, domain: Alphabet, codomain: Alphabet, max_len: int, injective: bool | None = None, tries: int = 500) -> Homomorphism:
    """Random map by generator images; ``injective`` selects a pool by rejection."""
    for _ in range(tries):
        f = Homomorphism(domain, codomain, [random_word(rng, codomain, max_len) for _ in domain])
        if injective is None or is_injective(f) == injective:
            return f
    raise RuntimeError("rejection sampling for a homomorphism did not succeed")


def random_subgroup(rng, alphabet: Alphabet, max_len: int, max_gens: int = 3) -> stallings.SubgroupGraph:
    k = rng.randint(1, max_gens)
    return fold([random_word(rng, alphabet, max_len, 1) for _ in range(k)], alphabet)


def _reduced_rank(G) -> int:
    return max(G.rank() - 1, 0)


AB = Alphabet("ab")
XY = Alphabet("xy")
ABC = Alphabet("abc")


# -- trials --------------------------------------------------------------------
# A trial returns (instance description, list of problems).


def _trial_fold_confluence(rng, cfg):
    alphabet = rng.choice([AB, ABC])
    gens = [random_word(rng, alphabet, 8) for _ in range(rng.randint(1, 4))]
    shuffled = gens[:]
    rng.shuffle(shuffled)
    G1 = fold(gens, alphabet, rng=random.Random(rng.random()))
    G2 = fold(shuffled, alphabet, rng=random.Random(rng.random()))
    G0 = fold(gens, alphabet)
    problems = []
    if not (G0 == G1 == G2):
        problems.append("fold orders gave different graphs")
    return f"gens={[str(w) for w in gens]}", problems


def _products(gens, max_factors, max_len):
    """Reduced words of length <= max_len among products of <= max_factors generators."""
    letters = [w.codes for w in gens] + [_inv(w.codes) for w in gens]
    out = {()}
    level = [((), -1)]
    for _ in range(max_factors):
        nxt = []
        for acc, last in level:
            for j, piece in enumerate(letters):
                if last >= 0 and (j - last) % len(letters) == len(gens):
                    continue  # g followed by g^-1
                w = _mul(acc, piece)
                nxt.append((w, j))
                if len(w) <= max_len:
                    out.add(w)
        level = nxt
    return out


def _trial_membership(rng, cfg):
    G = random_subgroup(rng, AB, cfg.max_word_len, min(3, cfg.max_rank))
    gens = [w for w in G.generators if w]
    factors = 8 if len(gens) <= 2 else 6
    brute = _products(gens, factors, 6)
    problems = []
    for w in iter_reduced_words(AB, 6):
        m = G.member(w)
        if w.codes in brute and not m:
            problems.append(f"{w} is a product of generators but member() is false")
        if m:
            expr = G.express(w)
            back = apply(Homomorphism(G.gen_alphabet, AB, list(G.generators)), expr)
            if back != w:
                problems.append(f"express({w}) = {expr} substitutes to {back}")
    return f"gens={[str(w) for w in G.generators]}", problems


def _trial_intersection(rng, cfg):
    G = random_subgroup(rng, AB, cfg.max_word_len)
    H = random_subgroup(rng, AB, cfg.max_word_len)
    I = intersect(G, H)
    problems = []
    for w in iter_reduced_words(AB, 6):
        if I.member(w) != (G.member(w) and H.member(w)):
            problems.append(f"membership of {w} disagrees")
            break
    return f"G={G!r} H={H!r}", problems


def _trial_hanna_neumann(rng, cfg):
    alphabet = rng.choice([AB, ABC])
    G = random_subgroup(rng, alphabet, cfg.max_word_len + 2)
    H = random_subgroup(rng, alphabet, cfg.max_word_len + 2)
    I = intersect(G, H)
    problems = []
    if _reduced_rank(I) > _reduced_rank(G) * _reduced_rank(H):
        problems.append(f"reduced ranks {_reduced_rank(I)} > {_reduced_rank(G)}*{_reduced_rank(H)}")
    return f"G={G!r} H={H!r}", problems


def _trial_inertness(rng, cfg):
    alphabet = rng.choice([AB, ABC])
    while True:
        H = fold([random_word(rng, alphabet, cfg.max_word_len + 2, 1) for _ in range(2)], alphabet)
        if H.rank() == 2:
            break
    K = random_subgroup(rng, alphabet, cfg.max_word_len + 2)
    I = intersect(H, K)
    problems = []
    if I.rank() > K.rank():
        problems.append(f"rank(H∩K) = {I.rank()} > rank(K) = {K.rank()}")
    return f"H={H!r} K={K!r}", problems


def _ball_subgroup(words, alphabet):
    return fold(words, alphabet)


def _trial_rank_two(rng, cfg):
    kind = rng.choice(["injective", "mixed", "none"])
    size = rng.choice([2, 2, 3])
    while True:
        if kind == "injective":
            flags = [True] * size
        elif kind == "none":
            flags = [False] * size
        else:
            flags = [True] + [False] + [rng.random() < 0.5 for _ in range(size - 2)]
        maps = [random_hom(rng, AB, XY, cfg.max_word_len, injective=f) for f in flags]
        if len({m.images for m in maps}) == len(maps):
            break
    desc = f"{kind}: {maps}"
    problems = []
    rep = classify_rank2(maps, radius=cfg.radius, max_iter=cfg.max_iter)
    for w in rep.basis + rep.witnesses:
        if not in_equaliser(maps, w):
            problems.append(f"emitted word {w} is not equalised")
    ball = [w for w in enumerate_equaliser(maps[0], maps[1], cfg.radius) if in_equaliser(maps, w)]
    ball_rank = _ball_subgroup(ball, AB).rank()
    if kind == "injective":
        if ball_rank > 2 or rep.rank > 2:
            problems.append(f"rank bound 2 violated: ball {ball_rank}, report {rep.rank}")
    elif kind == "mixed":
        if ball_rank > 1 or rep.rank > 1:
            problems.append(f"rank bound 1 violated: ball {ball_rank}, report {rep.rank}")
        if rep.verdict not in (EXACT, TRIVIAL):
            problems.append(f"mixed set should be solved exactly, got {rep.verdict}")
    else:
        if rep.verdict != NOT_FG:
            problems.append(f"expected not-finitely-generated, got {rep.verdict}")
        a, b = AB.generators()
        if not in_equaliser(maps, a * b * ~a * ~b):
            problems.append("commutator witness is not equalised")
    if rep.exact:
        sub = rep.subgroup()
        mine = [w for w in iter_reduced_words(AB, cfg.radius) if sub.member(w)]
        if mine != ball:
            problems.append("exact basis disagrees with enumeration ball")
    elif rep.verdict == CANDIDATE:
        sub = rep.subgroup()
        if any(not in_equaliser(maps, w) for w in iter_reduced_words(AB, min(cfg.radius, 4)) if sub.member(w)):
            problems.append("candidate contains a non-equalised word")
    return desc, problems


def _k_ball(K, radius):
    """Elements of K of length <= radius, via closed reduced paths at the basepoint."""
    out = []
    alphabet = K.alphabet
    letters = [c for i in range(1, len(alphabet) + 1) for c in (i, -i)]

    def walk(v, codes):
        if v == 0:
            out.append(codes)
        if len(codes) == radius:
            return
        last = codes[-1] if codes else 0
        for c in letters:
            if c == -last:
                continue
            w = K.neighbour(v, c)
            if w is not None:
                walk(w, codes + (c,))

    walk(0, ())
    return {Word._raw(alphabet, c) for c in out}


def _trial_restriction(rng, cfg):
    g = random_hom(rng, AB, XY, cfg.max_word_len)
    h = random_hom(rng, AB, XY, cfg.max_word_len)
    K = random_subgroup(rng, AB, cfg.max_word_len, min(3, cfg.max_rank))
    r = cfg.radius
    lhs = {w for w in _k_ball(K, r) if apply(g, w) == apply(h, w)}
    gK, basis = restrict(g, K)
    hK, _ = restrict(h, K)
    sub = Homomorphism(gK.domain, AB, basis)
    rhs = set()
    for u in enumerate_equaliser(gK, hK, r):
        w = apply(sub, u)
        if len(w) <= r:
            rhs.add(w)
    problems = []
    if lhs != rhs:
        diff = sorted(lhs ^ rhs)[:3]
        problems.append(f"balls differ, e.g. {[str(w) for w in diff]}")
    return f"g={g} h={h} K={K!r}", problems


def _trial_sd_invariants(rng, cfg):
    g = random_hom(rng, XY, AB, cfg.max_word_len, injective=True)
    h = random_hom(rng, XY, AB, cfg.max_word_len, injective=True)
    problems = []
    trace = sd_iterate(g, h, cfg.max_iter)
    eq_ball = enumerate_equaliser(g, h, cfg.radius)
    im_g = image(g)
    its = trace.iterates
    for i, H in enumerate(its):
        if i + 1 < len(its):
            nxt = its[i + 1]
            if not stallings.includes(H, nxt):
                problems.append(f"H_{i+1} is not inside H_{i}")
            lhs = image(g, nxt)
            rhs = intersect(im_g, image(h, H))
            if lhs != rhs:
                problems.append(f"g(H_{i+1}) != im(g) ∩ h(H_{i})")
        for w in eq_ball:
            if not H.member(w):
                problems.append(f"equaliser element {w} missing from H_{i}")
                break
    if trace.stabilized:
        sd = trace.sd
        if not stallings.includes(image(h, sd), image(g, sd)):
            problems.append("g(SD) is not inside h(SD)")
        phi, B = build_phi(g, h, sd)
        for x, y in zip(B.words, phi.images):
            back = apply(Homomorphism(phi.domain, XY, list(B.words)), y)
            if apply(h, back) != apply(g, x):
                problems.append(f"h(phi({x})) != g({x})")
        ball_rank = fold(eq_ball, XY).rank()
        if ball_rank > sd.rank():
            problems.append(f"equaliser ball rank {ball_rank} > rank(SD) {sd.rank()}")
        if sd.rank() > len(XY):
            problems.append(f"rank(SD) = {sd.rank()} exceeds |domain| with rank-two images")
    return f"g={g} h={h} status={trace.status} ranks={trace.ranks}", problems


# -- free-factor instances for the retract pipeline --------------------------------


def _random_automorphism(rng, alphabet: Alphabet, moves: int) -> tuple[Homomorphism, Homomorphism]:
    """A product of elementary Nielsen moves and its inverse."""
    n = len(alphabet)
    alpha = identity_map(alphabet)
    alpha_inv = identity_map(alphabet)
    for _ in range(moves):
        i, j = rng.sample(range(n), 2)
        e = rng.choice((1, -1))
        right = rng.random() < 0.5
        gens = alphabet.generators()
        xj = gens[j] if e > 0 else ~gens[j]
        fwd, bwd = gens[:], gens[:]
        if right:
            fwd[i] = gens[i] * xj
            bwd[i] = gens[i] * ~xj
        else:
            fwd[i] = xj * gens[i]
            bwd[i] = ~xj * gens[i]
        step = Homomorphism(alphabet, alphabet, fwd)
        step_inv = Homomorphism(alphabet, alphabet, bwd)
        alpha = compose(alpha, step)
        alpha_inv = compose(step_inv, alpha_inv)
    return alpha, alpha_inv


def free_factor_pair(rng, domain: Alphabet = XY, codomain: Alphabet = ABC, moves: int = 2):
    """Injective g, h whose images are free factors of the codomain, with retractions."""
    n, m = len(domain), len(codomain)
    out = []
    for _ in range(2):
        alpha, alpha_inv = _random_automorphism(rng, codomain, rng.randint(0, moves))
        chosen = rng.sample(range(m), n)
        gens = codomain.generators()
        g = Homomorphism(domain, codomain, [apply(alpha, gens[k]) for k in chosen])
        kill = Homomorphism(codomain, codomain,
                            [gens[k] if k in chosen else codomain.identity() for k in range(m)])
        rho = compose(alpha, compose(kill, alpha_inv))
        out.append((g, rho))
    (g, rho_g), (h, rho_h) = out
    return g, h, rho_g, rho_h


def _trial_retract(rng, cfg):
    g, h, rho_g, rho_h = free_factor_pair(rng)
    problems = []
    if g == h:
        return f"g=h={g}", problems
    rep = solve_retract_pipeline(g, h, rho_g, rho_h, radius=cfg.radius)
    n = len(g.domain)
    for w in rep.basis:
        if apply(g, w) != apply(h, w):
            problems.append(f"emitted word {w} is not equalised")
    if image(g) != image(h):
        trace = sd_iterate(g, h, n + 2)
        if not trace.stabilized or trace.index > n:
            problems.append(f"no stabilisation within {n} steps: {trace.status} {trace.index}")
        if rep.rank >= n:
            problems.append(f"rank {rep.rank} not below {n}")
        if trace.stabilized and rep.verdict == CANDIDATE:
            phi, B = build_phi(g, h, trace.sd)
            fixed = fixed_points_bounded(phi, cfg.radius).basis().words
            back = Homomorphism(phi.domain, g.domain, list(B.words))
            bridged = fold([apply(back, w) for w in fixed], g.domain)
            if bridged != rep.subgroup():
                problems.append("candidate differs from translated fixed points of phi")
    if rep.exact and rep.verdict != WHOLE:
        E = rep.subgroup()
        ball = enumerate_equaliser(g, h, min(cfg.radius, 6))
        mine = [w for w in iter_reduced_words(g.domain, min(cfg.radius, 6)) if E.member(w)]
        if ball != mine:
            problems.append("exact basis disagrees with enumeration ball")
        for _ in range(10):
            K = random_subgroup(rng, g.domain, cfg.max_word_len)
            if intersect(E, K).rank() > K.rank():
                problems.append(f"equaliser not inert against K={K!r}")
    return f"g={g} h={h} verdict={rep.verdict} basis={[str(w) for w in rep.basis]}", problems


# -- induced pairs ----------------------------------------------------------------------


def verify_induced_pair(iota: Homomorphism, tau: Homomorphism, g: Homomorphism, h: Homomorphism, g2: Homomorphism, h2: Homomorphism) -> bool:
    """True when g2∘iota = tau∘g and h2∘iota = tau∘h, with iota, tau injective."""
    if not (is_injective(iota) and is_injective(tau)):
        raise ValueError("iota and tau must be injective")
    return compose(g2, iota) == compose(tau, g) and compose(h2, iota) == compose(tau, h)


# -- registry ---------------------------------------------------------------------------

Trial = Callable[[random.Random, TrialConfig], tuple[str, list[str]]]

CAMPAIGNS: dict[str, Trial] = {
    "fold-confluence": _trial_fold_confluence,
    "membership-oracle": _trial_membership,
    "intersection-membership": _trial_intersection,
    "hanna-neumann": _trial_hanna_neumann,
    "inertness-rank2": _trial_inertness,
    "theoremA": _trial_rank_two,
    "appendixA-restriction": _trial_restriction,
    "sd-invariants": _trial_sd_invariants,
    "retract-pipeline": _trial_retract,
}


def _run_trial(name: str, cfg: TrialConfig, trial: int) -> dict | None:
    rng = random.Random(f"{name}:{cfg.seed}:{trial}")
    try:
        desc, problems = CAMPAIGNS[name](rng, cfg)
    except Exception as exc:  # a crash is a failure too
        desc, problems = "(instance construction or solver raised)", [
            f"{type(exc).__name__}: {exc}",
            traceback.format_exc(limit=3).strip().splitlines()[-1],
        ]
    if problems:
        return {"seed": cfg.seed, "trial": trial, "instance": desc, "problems": problems}
    return None


def run_campaign(name: str, cfg: TrialConfig = TrialConfig()) -> CampaignReport:
    if name not in CAMPAIGNS:
        raise KeyError(f"unknown property {name!r}; known: {sorted(CAMPAIGNS)}")
    report = CampaignReport(name, cfg.trials)
    for t in range(cfg.trials):
        fail = _run_trial(name, cfg, t)
        if fail is not None:
            report.failures.append(fail)
    return report


def replay(name: str, seed: int, trial: int, cfg: TrialConfig = TrialConfig()) -> dict | None:
    """Re-run one trial; returns its failure record or None."""
    cfg = TrialConfig(seed, 1, cfg.max_word_len, cfg.max_rank, cfg.radius, cfg.max_iter)
    return _run_trial(name, cfg, trial)


def run_inertness_sampling(cfg: TrialConfig = TrialConfig()) -> CampaignReport:
    return run_campaign("inertness-rank2", cfg)


def run_theoremA_campaign(cfg: TrialConfig = TrialConfig()) -> CampaignReport:
    return run_campaign("theoremA", cfg)


def run_appendixA_restriction(cfg: TrialConfig = TrialConfig()) -> CampaignReport:
    return run_campaign("appendixA-restriction", cfg)


def run_sd_invariant_campaign(cfg: TrialConfig = TrialConfig()) -> CampaignReport:
    return run_campaign("sd-invariants", cfg)
