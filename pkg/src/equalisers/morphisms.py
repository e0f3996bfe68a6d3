"""Homomorphisms of free groups, stored as tables of generator images."""
from __future__ import annotations

from typing import Iterable, Mapping, Sequence

from . import stallings
from .words import Alphabet, AlphabetMismatch, Word, _inv, _mul, parse_word

__all__ = [
    "Homomorphism",
    "MapSet",
    "apply",
    "compose",
    "is_injective",
    "restrict",
    "image",
    "identity_map",
    "basis_map",
]


class Homomorphism:
    """A map F(domain) -> F(codomain) given by one image word per generator."""

    __slots__ = ("domain", "codomain", "images", "_inv_images")

    def __init__(self, domain: Alphabet, codomain: Alphabet, images: Sequence[Word]):
        images = tuple(images)
        if len(images) != len(domain):
            raise ValueError(f"expected {len(domain)} images, got {len(images)}")
        for w in images:
            if w.alphabet != codomain:
                raise AlphabetMismatch(f"image {w!r} is not over {codomain!r}")
        self.domain = domain
        self.codomain = codomain
        self.images = images
        self._inv_images = tuple(_inv(w.codes) for w in images)

    @classmethod
    def from_strings(cls, domain, codomain, images) -> "Homomorphism":
        """Convenience constructor.

        ``domain``/``codomain`` may be alphabets or iterables of names;
        ``images`` is either a sequence of word strings or a mapping from
        domain generator names to word strings.
        """
        if not isinstance(domain, Alphabet):
            domain = Alphabet(domain)
        if not isinstance(codomain, Alphabet):
            codomain = Alphabet(codomain)
        if isinstance(images, Mapping):
            missing = [s for s in domain if s not in images]
            if missing:
                raise ValueError(f"no image given for {missing}")
            images = [images[s] for s in domain]
        return cls(domain, codomain, [parse_word(codomain, s) for s in images])

    def __call__(self, w: Word) -> Word:
        return apply(self, w)

    def _apply_codes(self, codes: Iterable[int]) -> tuple[int, ...]:
        acc: tuple[int, ...] = ()
        imgs, invs = self.images, self._inv_images
        for c in codes:
            acc = _mul(acc, imgs[c - 1].codes if c > 0 else invs[-c - 1])
        return acc

    def __eq__(self, other: object) -> bool:
        return (
            isinstance(other, Homomorphism)
            and self.domain == other.domain
            and self.codomain == other.codomain
            and self.images == other.images
        )

    def __hash__(self) -> int:
        return hash((self.domain, self.codomain, self.images))

    def __repr__(self) -> str:
        parts = ", ".join(f"{s}->{w}" for s, w in zip(self.domain, self.images))
        return f"Homomorphism({parts})"

    def is_identity(self) -> bool:
        return self.domain == self.codomain and all(
            w.codes == (i + 1,) for i, w in enumerate(self.images)
        )


def identity_map(alphabet: Alphabet) -> Homomorphism:
    return Homomorphism(alphabet, alphabet, alphabet.generators())


def apply(f: Homomorphism, w: Word) -> Word:
    if w.alphabet != f.domain:
        raise AlphabetMismatch(f"{w.alphabet!r} is not the domain {f.domain!r}")
    return Word._raw(f.codomain, f._apply_codes(w.codes))


def compose(f: Homomorphism, g: Homomorphism) -> Homomorphism:
    """``f ∘ g``: apply g first, then f."""
    if g.codomain != f.domain:
        raise AlphabetMismatch(f"cannot compose: {g.codomain!r} is not {f.domain!r}")
    return Homomorphism(g.domain, f.codomain, [apply(f, w) for w in g.images])


def image(f: Homomorphism, K: stallings.SubgroupGraph | None = None) -> stallings.SubgroupGraph:
    """Stallings graph of f(K); the whole image when K is omitted."""
    if K is None:
        return stallings.fold(f.images, f.codomain)
    if K.alphabet != f.domain:
        raise AlphabetMismatch(f"{K.alphabet!r} is not the domain {f.domain!r}")
    return stallings.fold([apply(f, w) for w in K.basis().words], f.codomain)


def is_injective(f: Homomorphism) -> bool:
    # Hopfian: the images freely generate im(f) iff its rank is |domain|
    return image(f).rank() == len(f.domain)


def restrict(f: Homomorphism, K: stallings.SubgroupGraph, prefix: str = "u") -> tuple[Homomorphism, list[Word]]:
    """f restricted to K, as a map out of a fresh free group on K's basis.

    Returns the restricted map and the basis (as domain words); fresh
    generator ``u_i`` corresponds to ``basis[i-1]``.
    """
    if K.alphabet != f.domain:
        raise AlphabetMismatch(f"{K.alphabet!r} is not the domain {f.domain!r}")
    b = list(K.basis().words)
    fresh = Alphabet.fresh(len(b), prefix)
    return Homomorphism(fresh, f.codomain, [apply(f, w) for w in b]), b


def basis_map(words: Sequence[Word], alphabet: Alphabet, prefix: str = "u") -> Homomorphism:
    """The substitution u_i -> words[i-1]; translates fresh-alphabet words back."""
    return Homomorphism(Alphabet.fresh(len(words), prefix), alphabet, list(words))


class MapSet:
    """A finite list of distinct homomorphisms with a common domain and codomain."""

    def __init__(self, maps: Iterable[Homomorphism]):
        maps = list(maps)
        if len(maps) < 2:
            raise ValueError("a map set needs at least two maps")
        d, c = maps[0].domain, maps[0].codomain
        for f in maps:
            if f.domain != d or f.codomain != c:
                raise AlphabetMismatch("maps in a set must share domain and codomain")
        for i in range(len(maps)):
            for j in range(i):
                if maps[i].images == maps[j].images:
                    raise ValueError(f"maps {j} and {i} are equal")
        self.maps = tuple(maps)
        self.domain = d
        self.codomain = c

    def __iter__(self):
        return iter(self.maps)

    def __len__(self) -> int:
        return len(self.maps)

    def __getitem__(self, i: int) -> Homomorphism:
        return self.maps[i]
