"""Equaliser solvers.

Every report passes a soundness gate before it is returned: each basis and
witness word is re-evaluated under all the maps involved.  ``exact-basis``
(and exact ``trivial`` / ``whole-group``) verdicts are emitted only by
routes that carry a completeness argument:

* cyclic images: Eq(g, h) <= g^-1(im g ∩ im h) = <w>, and g(w)^n = h(w)^n
  forces g(w) = h(w) because roots are unique in free groups;
* stable-domain pipeline: Eq(g, h) = Fix(phi) <= phi^∞, so when phi acts as
  the identity on phi^∞ the equaliser is phi^∞ itself.

Everything else is a ``sound-candidate``: a subgroup verified to lie inside
the equaliser, built from a bounded search.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Mapping, Optional, Sequence

from . import stallings
from .morphisms import (
    Homomorphism,
    MapSet,
    apply,
    basis_map,
    identity_map,
    image,
    is_injective,
)
from .stable_domain import (
    build_phi,
    restrict_endomorphism,
    sd_iterate,
    stable_image,
)
from .stallings import SubgroupGraph, fold, intersect
from .words import Word, _mul, letter_key, shortlex_key

__all__ = [
    "EqualiserReport",
    "WrongSolver",
    "HypothesisNotVerified",
    "InternalContradiction",
    "SoundnessViolation",
    "EXACT",
    "CANDIDATE",
    "NOT_FG",
    "TRIVIAL",
    "WHOLE",
    "DEFAULT_RADIUS",
    "enumerate_equaliser",
    "in_equaliser",
    "fixed_points_bounded",
    "solve_cyclic_case",
    "solve_injective_pair",
    "classify_rank2",
    "verify_retraction",
    "solve_retract_pipeline",
    "solve_set",
]

EXACT = "exact-basis"
CANDIDATE = "sound-candidate"
NOT_FG = "not-finitely-generated"
TRIVIAL = "trivial"
WHOLE = "whole-group"

DEFAULT_RADIUS = 8
PIPELINE_MAX_ITER = 8


class WrongSolver(ValueError):
    pass


class HypothesisNotVerified(ValueError):
    pass


class InternalContradiction(RuntimeError):
    """A proven bound or termination guarantee failed: an implementation bug."""


class SoundnessViolation(AssertionError):
    pass


@dataclass
class EqualiserReport:
    verdict: str
    basis: list[Word]
    maps: tuple[Homomorphism, ...]
    provenance: str
    witnesses: list[Word] = field(default_factory=list)
    radius: Optional[int] = None
    notes: list[str] = field(default_factory=list)

    @property
    def exact(self) -> bool:
        return self.verdict in (EXACT, TRIVIAL, WHOLE)

    @property
    def domain(self):
        return self.maps[0].domain

    def subgroup(self) -> SubgroupGraph:
        return fold(self.basis, self.domain)

    @property
    def rank(self) -> int:
        return len(self.basis)


def in_equaliser(maps: Sequence[Homomorphism], w: Word) -> bool:
    first = apply(maps[0], w)
    return all(apply(f, w) == first for f in maps[1:])


def _report(maps, verdict, words, provenance, witnesses=(), radius=None, notes=()) -> EqualiserReport:
    maps = tuple(maps)
    domain = maps[0].domain
    sub = fold(list(words), domain)
    basis = list(sub.basis().words)
    for w in basis + list(witnesses):
        if not in_equaliser(maps, w):
            raise SoundnessViolation(f"{w} is not equalised by all maps ({provenance})")
    if verdict in (EXACT, TRIVIAL, WHOLE):
        if sub.is_trivial():
            verdict = TRIVIAL
        elif sub.is_whole():
            verdict = WHOLE
        else:
            verdict = EXACT
    return EqualiserReport(verdict, basis, maps, provenance, list(witnesses), radius, list(notes))


# -- bounded enumeration ------------------------------------------------------


def enumerate_equaliser(g: Homomorphism, h: Homomorphism, radius: int = DEFAULT_RADIUS) -> list[Word]:
    """All reduced words of length <= radius with g(w) = h(w), in shortlex order."""
    if g.domain != h.domain or g.codomain != h.codomain:
        raise ValueError("g and h must share domain and codomain")
    n = len(g.domain)
    letters = sorted([c for i in range(1, n + 1) for c in (i, -i)], key=letter_key)
    gimg = {c: g._apply_codes((c,)) for c in letters}
    himg = {c: h._apply_codes((c,)) for c in letters}
    found: list[tuple[int, ...]] = [()]

    def walk(prefix, gw, hw):
        if len(prefix) == radius:
            return
        last = prefix[-1] if prefix else 0
        for c in letters:
            if c == -last:
                continue
            g2 = _mul(gw, gimg[c])
            h2 = _mul(hw, himg[c])
            p2 = prefix + (c,)
            if g2 == h2:
                found.append(p2)
            walk(p2, g2, h2)

    walk((), (), ())
    found.sort(key=shortlex_key)
    return [Word._raw(g.domain, w) for w in found]


def fixed_points_bounded(phi: Homomorphism, radius: int = DEFAULT_RADIUS) -> SubgroupGraph:
    """Fold of all fixed words of length <= radius.  Sound, not complete."""
    return fold(enumerate_equaliser(phi, identity_map(phi.domain), radius), phi.domain)


# -- exact cyclic-image solver --------------------------------------------------


def solve_cyclic_case(g: Homomorphism, h: Homomorphism) -> EqualiserReport:
    """Eq(g, h) for g injective and h with cyclic (or trivial) image."""
    if not is_injective(g):
        raise WrongSolver("g must be injective")
    im_h = image(h)
    if im_h.rank() > 1:
        raise WrongSolver("h must have cyclic or trivial image")
    C = stallings.preimage(g, im_h)
    provenance = "cyclic-image solver"
    if C.is_trivial():
        return _report((g, h), TRIVIAL, [], provenance, notes=["g^-1(im g ∩ im h) is trivial"])
    (w,) = C.basis().words
    if apply(g, w) == apply(h, w):
        return _report((g, h), EXACT, [w], provenance, notes=["rank <= 1"])
    return _report((g, h), TRIVIAL, [], provenance, notes=[f"g^-1(im g ∩ im h) = <{w}> but g({w}) != h({w})"])


# -- stable-domain pipeline ------------------------------------------------------


def _translate(words, basis_words, target_alphabet) -> list[Word]:
    sub = basis_map(basis_words, target_alphabet)
    return [apply(sub, Word._raw(sub.domain, w.codes)) for w in words]


def _fixed_subgroup(phi: Homomorphism, radius: int) -> tuple[list[Word], bool]:
    """Fixed subgroup of an endomorphism: exact for the identity, bounded search otherwise."""
    if phi.is_identity():
        return phi.domain.generators(), True
    return list(fixed_points_bounded(phi, radius).basis().words), False


def _pipeline(g: Homomorphism, h: Homomorphism, radius: int, max_iter: int, strict: bool):
    """Run SD -> phi -> phi^∞ -> Fix.  Returns (words, exact, notes) or None.

    With ``strict`` a failure to stabilise raises InternalContradiction,
    otherwise None is returned.
    """
    n = len(g.domain)
    trace = sd_iterate(g, h, max_iter)
    if not trace.stabilized:
        if strict:
            raise InternalContradiction(f"stable domain did not stabilise within {max_iter - 1} steps")
        return None
    if strict and trace.index > n:
        raise InternalContradiction(f"stable domain stabilised at index {trace.index} > {n}")
    sd = trace.sd
    phi, B = build_phi(g, h, sd)
    notes = [f"SD stabilised at index {trace.index} with rank {sd.rank()}"]
    si = stable_image(phi, max(max_iter, len(B) + 2))
    if not si.stabilized:
        if strict:
            raise InternalContradiction("stable image did not stabilise")
        return None
    stable = si.sd
    psi, B2 = restrict_endomorphism(phi, stable)
    if strict and image(phi, stable) != stable:
        raise InternalContradiction("phi does not act as an automorphism on its stable image")
    notes.append(f"stable image of phi has rank {stable.rank()}")
    if psi.is_identity():
        words = _translate(B2.words, B.words, g.domain)
        notes.append("phi is the identity on its stable image")
        return words, True, notes
    fixed = fixed_points_bounded(phi, radius).basis().words
    notes.append("fixed points of phi searched to the given radius")
    return _translate(fixed, B.words, g.domain), False, notes


def solve_injective_pair(g: Homomorphism, h: Homomorphism, radius: int = DEFAULT_RADIUS, max_iter: int = PIPELINE_MAX_ITER) -> EqualiserReport:
    """Eq(g, h) for injective g, h via stable domains, falling back to enumeration."""
    if not (is_injective(g) and is_injective(h)):
        raise WrongSolver("both maps must be injective")
    if g == h:
        return _report((g, h), WHOLE, g.domain.generators(), "identical maps")
    res = _pipeline(g, h, radius, max_iter, strict=False)
    if res is None:
        words = enumerate_equaliser(g, h, radius)
        return _report((g, h), CANDIDATE, words, "bounded-enumeration", radius=radius,
                       notes=[f"stable domain did not stabilise within {max_iter} iterates"])
    words, exact, notes = res
    if exact:
        return _report((g, h), EXACT, words, "stable-domain pipeline", notes=notes)
    return _report((g, h), CANDIDATE, words, "stable-domain pipeline", radius=radius, notes=notes)


# -- retractions ----------------------------------------------------------------


def verify_retraction(rho: Homomorphism, H: SubgroupGraph, ambient: SubgroupGraph | None = None) -> bool:
    """Check that rho maps ``ambient`` (default: everything) into H and fixes H."""
    if rho.domain != rho.codomain or rho.domain != H.alphabet:
        return False
    if ambient is None:
        if not stallings.includes(H, image(rho)):
            return False
    else:
        if not stallings.includes(ambient, H):
            return False
        if not stallings.includes(H, image(rho, ambient)):
            return False
    return all(apply(rho, w) == w for w in H.basis().words)


def solve_retract_pipeline(g: Homomorphism, h: Homomorphism, rho_g: Homomorphism, rho_h: Homomorphism, radius: int = DEFAULT_RADIUS) -> EqualiserReport:
    """Eq(g, h) when im g and im h are retracts of the subgroup they generate.

    ``rho_g`` and ``rho_h`` are endomorphisms of the codomain whose
    restrictions to that join are the retractions; they are verified here.
    """
    if not (is_injective(g) and is_injective(h)):
        raise HypothesisNotVerified("both maps must be injective")
    im_g, im_h = image(g), image(h)
    join = fold(list(g.images) + list(h.images), g.codomain)
    if not verify_retraction(rho_g, im_g, join):
        raise HypothesisNotVerified("rho_g is not a retraction of the join onto im g")
    if not verify_retraction(rho_h, im_h, join):
        raise HypothesisNotVerified("rho_h is not a retraction of the join onto im h")
    n = len(g.domain)
    maps = (g, h)
    if g == h:
        return _report(maps, WHOLE, g.domain.generators(), "identical maps")
    if im_g == im_h:
        # SD is everything and Eq(g, h) = Fix(h^-1 g)
        phi, B = build_phi(g, h, stallings.whole_group(g.domain))
        fixed, exact = _fixed_subgroup(phi, radius)
        words = _translate(fixed, B.words, g.domain)
        verdict = EXACT if exact else CANDIDATE
        rep = _report(maps, verdict, words, "retract pipeline (equal images)",
                      radius=None if exact else radius, notes=["im g = im h: equaliser is Fix(h^-1 g)"])
        if rep.rank > n:
            raise InternalContradiction(f"rank {rep.rank} exceeds {n}")
        return rep
    words, exact, notes = _pipeline(g, h, radius, n + 2, strict=True)
    rep = _report(maps, EXACT if exact else CANDIDATE, words, "retract pipeline",
                  radius=None if exact else radius, notes=notes + [f"rank < {n}"])
    if rep.rank >= n:
        raise InternalContradiction(f"rank {rep.rank} is not below {n} although im g != im h")
    return rep


# -- sets of maps -----------------------------------------------------------------


def _solve_pair(g: Homomorphism, f: Homomorphism, g_inj: bool, f_inj: bool, radius: int, max_iter: int, hint=None) -> EqualiserReport:
    if g_inj and image(f).rank() <= 1:
        return solve_cyclic_case(g, f)
    if f_inj and image(g).rank() <= 1:
        return solve_cyclic_case(f, g)
    if g_inj and f_inj:
        if hint is not None:
            return solve_retract_pipeline(g, f, hint[0], hint[1], radius)
        return solve_injective_pair(g, f, radius, max_iter)
    words = enumerate_equaliser(g, f, radius)
    return _report((g, f), CANDIDATE, words, "bounded-enumeration", radius=radius)


def solve_set(S, hints: Mapping[int, tuple[Homomorphism, Homomorphism]] | None = None, radius: int = DEFAULT_RADIUS, max_iter: int = PIPELINE_MAX_ITER) -> EqualiserReport:
    """Eq(S) as the intersection of Eq(d, f) over f in S, for a distinguished d.

    ``hints`` maps an index j to retractions (rho_d, rho_j) enabling the
    retract pipeline for the pair (d, S[j]).  The distinguished map is the
    first injective one, else ``S[0]``.
    """
    S = S if isinstance(S, MapSet) else MapSet(S)
    maps = S.maps
    hints = dict(hints or {})
    inj = [is_injective(f) for f in maps]
    d = inj.index(True) if any(inj) else 0
    pairs = []
    for j, f in enumerate(maps):
        if j == d:
            continue
        pairs.append(_solve_pair(maps[d], f, inj[d], inj[j], radius, max_iter, hints.get(j)))

    notes = list(pairs[0].notes) if len(pairs) == 1 else []
    # an exact cyclic (or trivial) pair pins Eq(S) down: any subgroup of <w>
    # that is an equaliser is <w> or 1, since equalisers are closed under roots
    for rep in pairs:
        if rep.exact and rep.rank <= 1:
            if rep.rank == 0 or in_equaliser(maps, rep.basis[0]):
                return _report(maps, EXACT, rep.basis, f"set solver via {rep.provenance}",
                               notes=["Eq(S) <= cyclic exact pair equaliser", "rank <= 1"])
            return _report(maps, TRIVIAL, [], f"set solver via {rep.provenance}",
                           notes=[f"{rep.basis[0]} is not equalised by every map"])

    acc = pairs[0].subgroup()
    for rep in pairs[1:]:
        acc = intersect(acc, rep.subgroup())
    exact = all(rep.exact for rep in pairs)
    radius_used = None if exact else radius
    provenance = "set solver: " + ", ".join(sorted({rep.provenance for rep in pairs}))
    return _report(maps, EXACT if exact else CANDIDATE, acc.basis().words, provenance,
                   radius=radius_used, notes=notes)


def _commutator(domain) -> Word:
    a, b = domain.generators()
    return a * b * ~a * ~b


def classify_rank2(S, radius: int = DEFAULT_RADIUS, max_iter: int = PIPELINE_MAX_ITER) -> EqualiserReport:
    """Equaliser of a set of at least two distinct maps out of a rank-two free group.

    All injective: rank <= 2.  Mixed: rank <= 1 (solved exactly).  No
    injective map: Eq(S) is a non-trivial normal subgroup of infinite index,
    hence not finitely generated; [a, b] is returned as witness.
    """
    S = S if isinstance(S, MapSet) else MapSet(S)
    if len(S.domain) != 2:
        raise WrongSolver("domain must have rank two")
    inj = [is_injective(f) for f in S]
    if not any(inj):
        c = _commutator(S.domain)
        return _report(S.maps, NOT_FG, [], "no injective map: normal subgroup of infinite index",
                       witnesses=[c], notes=["[a, b] lies in every kernel"])
    rep = solve_set(S, radius=radius, max_iter=max_iter)
    bound = 2 if all(inj) else 1
    if rep.rank > bound:
        raise InternalContradiction(f"rank {rep.rank} exceeds {bound}")
    rep.notes.append(f"rank <= {bound}")
    return rep
