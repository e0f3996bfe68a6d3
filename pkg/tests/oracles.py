"""Deliberately naive reference implementations used as test oracles.

Nothing here imports the package's algorithms; words are plain strings in
the compact syntax (lowercase generator, uppercase inverse).
"""
from __future__ import annotations

import itertools


def naive_reduce(s: str) -> str:
    """Cancel adjacent inverse pairs until none remain."""
    changed = True
    while changed:
        changed = False
        for i in range(len(s) - 1):
            x, y = s[i], s[i + 1]
            if x != y and x.lower() == y.lower():
                s = s[:i] + s[i + 2:]
                changed = True
                break
    return s


def naive_inverse(s: str) -> str:
    return "".join(ch.swapcase() for ch in reversed(s))


def naive_mul(*words: str) -> str:
    return naive_reduce("".join(words))


def naive_power(s: str, k: int) -> str:
    if k < 0:
        return naive_power(naive_inverse(s), -k)
    return naive_reduce(s * k)


def all_reduced(letters: str, max_len: int) -> list[str]:
    """Every reduced word of length <= max_len, by brute force over strings."""
    alphabet = letters + letters.upper()
    out = []
    for n in range(max_len + 1):
        for t in itertools.product(alphabet, repeat=n):
            s = "".join(t)
            if naive_reduce(s) == s:
                out.append(s)
    return out


def naive_substitute(images: dict[str, str], s: str) -> str:
    parts = []
    for ch in s:
        w = images[ch.lower()]
        parts.append(w if ch.islower() else naive_inverse(w))
    return naive_reduce("".join(parts))


def brute_subgroup_ball(gens: list[str], max_factors: int, max_len: int) -> set[str]:
    """Reduced products of at most max_factors generators, kept if short enough."""
    pieces = [g for g in gens if g] + [naive_inverse(g) for g in gens if g]
    seen = {""}
    frontier = {""}
    for _ in range(max_factors):
        nxt = set()
        for acc in frontier:
            for p in pieces:
                nxt.add(naive_mul(acc, p))
        frontier = nxt - seen
        seen |= nxt
    return {w for w in seen if len(w) <= max_len}


class NaiveGraph:
    """Stallings folding by repeated search for a conflict and relabelling.

    Quadratic and obviously correct; used to cross-check the union-find engine.
    """

    def __init__(self, gens: list[str]):
        self.edges = set()  # (u, letter, v) with lowercase letter
        n = 1
        for g in gens:
            g = naive_reduce(g)
            if not g:
                continue
            prev = 0
            for i, ch in enumerate(g):
                nxt = 0 if i == len(g) - 1 else n
                if nxt:
                    n += 1
                if ch.islower():
                    self.edges.add((prev, ch, nxt))
                else:
                    self.edges.add((nxt, ch.lower(), prev))
                prev = nxt
        self._fold()
        self._core()

    def _fold(self):
        while True:
            conflict = None
            for e1 in self.edges:
                for e2 in self.edges:
                    if e1 != e2 and e1[1] == e2[1]:
                        if e1[0] == e2[0]:
                            conflict = (e1[2], e2[2])
                        elif e1[2] == e2[2]:
                            conflict = (e1[0], e2[0])
                        if conflict:
                            break
                if conflict:
                    break
            if conflict is None:
                return
            keep, drop = sorted(conflict)
            ren = lambda v: keep if v == drop else v
            self.edges = {(ren(u), a, ren(v)) for u, a, v in self.edges}

    def _core(self):
        while True:
            deg = {}
            for u, _, v in self.edges:
                deg[u] = deg.get(u, 0) + 1
                deg[v] = deg.get(v, 0) + 1
            leaves = {v for v, d in deg.items() if d == 1 and v != 0}
            if not leaves:
                return
            self.edges = {e for e in self.edges if e[0] not in leaves and e[2] not in leaves}

    @property
    def vertices(self) -> set:
        vs = {0}
        for u, _, v in self.edges:
            vs.update((u, v))
        return vs

    def rank(self) -> int:
        return len(self.edges) - len(self.vertices) + 1

    def accepts(self, s: str) -> bool:
        v = 0
        for ch in s:
            if ch.islower():
                nxt = [e[2] for e in self.edges if e[0] == v and e[1] == ch]
            else:
                nxt = [e[0] for e in self.edges if e[2] == v and e[1] == ch.lower()]
            if not nxt:
                return False
            v = nxt[0]
        return v == 0
