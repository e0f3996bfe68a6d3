"""Stable domains of pairs of free group homomorphisms.

For ``g, h: F(Σ) -> F(Δ)`` the iterates are ``H_0 = F(Σ)`` and
``H_{i+1} = g^-1(g(H_i) ∩ h(H_i))``; the stable domain is their
intersection.  With ``g`` injective every iterate is finitely generated and
computable, but the chain need not become constant, so iteration is capped.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

from . import stallings
from .morphisms import Homomorphism, apply, identity_map, image, is_injective
from .stallings import Basis, SubgroupGraph, fold, intersect, preimage
from .words import Alphabet, Word

__all__ = [
    "SDTrace",
    "InvalidStableDomain",
    "NotInvariant",
    "UnsupportedMap",
    "SymmetryReport",
    "sd_iterate",
    "build_phi",
    "stable_image",
    "acts_as_automorphism",
    "restrict_endomorphism",
    "sd_symmetry_check",
    "DEFAULT_MAX_ITER",
]

DEFAULT_MAX_ITER = 20

STABILIZED = "stabilized"
CAP_REACHED = "cap-reached"
UNSUPPORTED = "unsupported"


class InvalidStableDomain(ValueError):
    pass


class NotInvariant(ValueError):
    pass


class UnsupportedMap(ValueError):
    pass


@dataclass
class SDTrace:
    """Iterates ``H_0, H_1, ...`` of a stable-domain computation.

    ``index`` is the stabilisation index when ``status == "stabilized"``
    (then ``iterates[index] == iterates[index + 1]``) and the cap otherwise.
    """

    g: Homomorphism
    h: Homomorphism
    iterates: list[SubgroupGraph] = field(default_factory=list)
    status: str = CAP_REACHED
    index: Optional[int] = None
    reason: str = ""

    @property
    def stabilized(self) -> bool:
        return self.status == STABILIZED

    @property
    def sd(self) -> Optional[SubgroupGraph]:
        if self.status != STABILIZED:
            return None
        return self.iterates[self.index]

    @property
    def ranks(self) -> list[int]:
        return [H.rank() for H in self.iterates]


def _step(g: Homomorphism, h: Homomorphism, H: SubgroupGraph) -> SubgroupGraph:
    return preimage(g, intersect(image(g, H), image(h, H)))


def sd_iterate(g: Homomorphism, h: Homomorphism, max_iter: int = DEFAULT_MAX_ITER) -> SDTrace:
    """Compute iterates until two consecutive ones agree or ``max_iter`` graphs exist."""
    if g.domain != h.domain or g.codomain != h.codomain:
        raise ValueError("g and h must share domain and codomain")
    if max_iter < 1:
        raise ValueError("max_iter must be positive")
    trace = SDTrace(g, h)
    if not is_injective(g):
        trace.status = UNSUPPORTED
        trace.reason = "g is not injective; the iterates need not be finitely generated"
        return trace
    H = stallings.whole_group(g.domain)
    trace.iterates.append(H)
    while len(trace.iterates) < max_iter:
        nxt = _step(g, h, H)
        trace.iterates.append(nxt)
        if nxt == H:
            trace.status = STABILIZED
            trace.index = len(trace.iterates) - 2
            return trace
        H = nxt
    trace.status = CAP_REACHED
    trace.index = max_iter
    return trace


def _pull_back_through(h_on_basis: list[Word], codomain: Alphabet, targets: list[Word], fresh: Alphabet, what: str) -> list[Word]:
    """Write each target as a word in the fresh symbols standing for ``h_on_basis``."""
    img = fold(h_on_basis, codomain)
    out = []
    for t in targets:
        if not img.member(t):
            raise InvalidStableDomain(f"{t} is not in {what}")
        out.append(Word._raw(fresh, img.express(t).codes))
    return out


def build_phi(g: Homomorphism, h: Homomorphism, sd: SubgroupGraph, prefix: str = "s") -> tuple[Homomorphism, Basis]:
    """The endomorphism x -> h^-1(g(x)) of ``sd``, over a fresh alphabet.

    Fresh generator ``s_i`` stands for ``basis.words[i-1]``.  Requires
    g(sd) <= h(sd) and h injective.
    """
    if not is_injective(h):
        raise UnsupportedMap("h must be injective to invert it on its image")
    if sd.alphabet != g.domain:
        raise ValueError("sd must be a subgroup of the domain")
    B = sd.basis()
    fresh = Alphabet.fresh(len(B), prefix)
    h_b = [apply(h, w) for w in B.words]
    g_b = [apply(g, w) for w in B.words]
    images = _pull_back_through(h_b, h.codomain, g_b, fresh, "h(sd)")
    return Homomorphism(fresh, fresh, images), B


def stable_image(phi: Homomorphism, max_iter: int = DEFAULT_MAX_ITER) -> SDTrace:
    """Stable image of an injective endomorphism, as SD(id, phi)."""
    if phi.domain != phi.codomain:
        raise ValueError("phi must be an endomorphism")
    trace = sd_iterate(identity_map(phi.domain), phi, max_iter)
    if trace.status == STABILIZED and not is_injective(phi):
        # SD(id, phi) is still the stable image, but callers rely on injectivity
        trace.status = UNSUPPORTED
        trace.reason = "phi is not injective"
    return trace


def _check_invariant(phi: Homomorphism, G: SubgroupGraph) -> SubgroupGraph:
    if G.alphabet != phi.domain or phi.domain != phi.codomain:
        raise ValueError("phi must be an endomorphism of G's ambient group")
    img = image(phi, G)
    if not stallings.includes(G, img):
        raise NotInvariant("phi does not map G into itself")
    return img


def acts_as_automorphism(phi: Homomorphism, G: SubgroupGraph) -> bool:
    """True when phi maps the invariant subgroup G onto itself."""
    if not is_injective(phi):
        raise UnsupportedMap("phi must be injective")
    return _check_invariant(phi, G) == G


def restrict_endomorphism(phi: Homomorphism, G: SubgroupGraph, prefix: str = "v") -> tuple[Homomorphism, Basis]:
    """phi restricted to an invariant subgroup G, over G's own basis."""
    _check_invariant(phi, G)
    B = G.basis()
    fresh = Alphabet.fresh(len(B), prefix)
    over_basis = fold(B.words, G.alphabet)  # annotations in terms of B itself
    images = [Word._raw(fresh, over_basis.express(apply(phi, w)).codes) for w in B.words]
    return Homomorphism(fresh, fresh, images), B


@dataclass
class SymmetryReport:
    conclusive: bool
    sd_equal: Optional[bool] = None
    phi_gh_automorphism: Optional[bool] = None
    phi_hg_automorphism: Optional[bool] = None
    reason: str = ""

    @property
    def biconditional_holds(self) -> Optional[bool]:
        if not self.conclusive:
            return None
        return self.sd_equal == (self.phi_gh_automorphism and self.phi_hg_automorphism)


def sd_symmetry_check(g: Homomorphism, h: Homomorphism, max_iter: int = DEFAULT_MAX_ITER) -> SymmetryReport:
    if not (is_injective(g) and is_injective(h)):
        return SymmetryReport(False, reason="both maps must be injective")
    t1 = sd_iterate(g, h, max_iter)
    t2 = sd_iterate(h, g, max_iter)
    if not (t1.stabilized and t2.stabilized):
        return SymmetryReport(False, reason="a stable domain did not stabilise within the cap")
    sd1, sd2 = t1.sd, t2.sd
    phi1, _ = build_phi(g, h, sd1)
    phi2, _ = build_phi(h, g, sd2)
    whole1 = stallings.whole_group(phi1.domain)
    whole2 = stallings.whole_group(phi2.domain)
    auto1 = acts_as_automorphism(phi1, whole1)
    auto2 = acts_as_automorphism(phi2, whole2)
    return SymmetryReport(True, sd1 == sd2, auto1, auto2)
