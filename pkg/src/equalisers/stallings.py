"""Stallings graphs of finitely generated subgroups.

A :class:`SubgroupGraph` is a folded, pointed core graph.  Vertices are
numbered ``0 .. n-1`` in breadth-first order from the basepoint ``0``
(neighbours visited in the letter order a, a^-1, b, b^-1, ...), so two
graphs represent the same subgroup exactly when their vertex counts and
sorted edge lists coincide.

Every edge carries an annotation: a word in the symbols ``g1 .. gk`` of the
generators the graph was folded from.  Substituting the generators into the
product of annotations along a closed path at the basepoint gives back the
label of that path, which is what :func:`express` relies on.
"""
from __future__ import annotations

import random
from collections import deque
from dataclasses import dataclass
from typing import Iterable, Sequence

from .words import Alphabet, AlphabetMismatch, Word, _inv, _mul, letter_key

__all__ = [
    "SubgroupGraph",
    "Basis",
    "NotAMember",
    "UnsupportedPreimage",
    "fold",
    "member",
    "express",
    "basis",
    "rank",
    "intersect",
    "includes",
    "equal",
    "preimage",
    "to_dot",
    "whole_group",
    "trivial_subgroup",
]


class NotAMember(ValueError):
    pass


class UnsupportedPreimage(ValueError):
    """Preimage under a non-injective map: the kernel is not finitely generated."""


@dataclass(frozen=True)
class Basis:
    words: tuple[Word, ...]
    via: tuple[tuple[int, int, int], ...]  # non-tree edges, one per basis word

    def __len__(self) -> int:
        return len(self.words)

    def __iter__(self):
        return iter(self.words)


class SubgroupGraph:
    """Folded pointed core graph; immutable once built.

    Use :func:`fold` or :func:`intersect` to construct one.
    """

    __slots__ = (
        "alphabet", "n_vertices", "edges", "generators", "gen_alphabet",
        "annotations", "_out", "_tree", "_basis",
    )

    def __init__(self, alphabet, n_vertices, edges, generators, gen_alphabet, annotations, tree):
        self.alphabet: Alphabet = alphabet
        self.n_vertices: int = n_vertices
        self.edges: tuple[tuple[int, int, int], ...] = edges
        self.generators: tuple[Word, ...] = generators
        self.gen_alphabet: Alphabet = gen_alphabet
        self.annotations: tuple[tuple[int, ...], ...] = annotations
        self._tree = tree
        out: list[dict[int, tuple[int, int]]] = [dict() for _ in range(n_vertices)]
        for idx, (s, g, d) in enumerate(edges):
            out[s][g + 1] = (d, idx)
            out[d][-(g + 1)] = (s, idx)
        self._out = out
        self._basis: Basis | None = None

    # structural identity is the subgroup itself
    def _key(self):
        return (self.alphabet, self.n_vertices, self.edges)

    def __eq__(self, other: object) -> bool:
        return isinstance(other, SubgroupGraph) and self._key() == other._key()

    def __hash__(self) -> int:
        return hash(self._key())

    def __repr__(self) -> str:
        words = ", ".join(str(w) for w in self.basis().words)
        return f"<SubgroupGraph rank={self.rank()} vertices={self.n_vertices} <{words}>>"

    def __contains__(self, w: Word) -> bool:
        return self.member(w)

    def rank(self) -> int:
        return len(self.edges) - self.n_vertices + 1

    def is_trivial(self) -> bool:
        return not self.edges

    def is_whole(self) -> bool:
        return self.n_vertices == 1 and len(self.edges) == len(self.alphabet)

    def neighbour(self, v: int, code: int) -> int | None:
        hit = self._out[v].get(code)
        return None if hit is None else hit[0]

    def member(self, w: Word) -> bool:
        if w.alphabet != self.alphabet:
            raise AlphabetMismatch(f"{w.alphabet!r} vs {self.alphabet!r}")
        v = 0
        out = self._out
        for c in w.codes:
            hit = out[v].get(c)
            if hit is None:
                return False
            v = hit[0]
        return v == 0

    def express(self, w: Word) -> Word:
        if w.alphabet != self.alphabet:
            raise AlphabetMismatch(f"{w.alphabet!r} vs {self.alphabet!r}")
        v = 0
        acc: tuple[int, ...] = ()
        for c in w.codes:
            hit = self._out[v].get(c)
            if hit is None:
                raise NotAMember(f"{w} is not in the subgroup")
            v, idx = hit
            ann = self.annotations[idx]
            acc = _mul(acc, ann if c > 0 else _inv(ann))
        if v != 0:
            raise NotAMember(f"{w} is not in the subgroup")
        return Word._raw(self.gen_alphabet, acc)

    def basis(self) -> Basis:
        if self._basis is None:
            self._basis = _spanning_tree_basis(self)
        return self._basis

    def degree(self, v: int) -> int:
        return len(self._out[v])


# -- folding ----------------------------------------------------------------


class _Folder:
    """Union-find over vertices with a worklist of same-label conflicts.

    ``off[v]`` is a generator-symbol word whose value is t(parent) t(v)^-1,
    where t(v) is the label of the reference path from the basepoint to v.
    """

    def __init__(self, rng: random.Random | None = None):
        self.parent: list[int] = []
        self.off: list[tuple[int, ...]] = []
        self.adj: list[dict[int, int]] = []
        self.edges: list[tuple[int, int, int, tuple[int, ...]]] = []
        self.work: list[tuple[int, int, int]] = []
        self.rng = rng
        self.new_vertex()  # basepoint

    def new_vertex(self) -> int:
        self.parent.append(len(self.parent))
        self.off.append(())
        self.adj.append({})
        return len(self.parent) - 1

    def find(self, v: int) -> tuple[int, tuple[int, ...]]:
        path = []
        while self.parent[v] != v:
            path.append(v)
            v = self.parent[v]
        root = v
        # compress, recomputing offsets from the top down
        acc: tuple[int, ...] = ()
        for u in reversed(path):
            acc = _mul(acc, self.off[u])
            self.parent[u] = root
            self.off[u] = acc
        return root, acc if path else ()

    def traverse(self, eid: int, code: int) -> tuple[int, tuple[int, ...]]:
        s, _, d, ann = self.edges[eid]
        rs, ds = self.find(s)
        rd, dd = self.find(d)
        eff = _mul(_mul(ds, ann), _inv(dd))
        if code > 0:
            return rd, eff
        return rs, _inv(eff)

    def _insert(self, root: int, code: int, eid: int) -> None:
        table = self.adj[root]
        other = table.get(code)
        if other is None:
            table[code] = eid
        else:
            self.work.append((other, eid, code))

    def add_edge(self, s: int, gen: int, d: int, ann: tuple[int, ...]) -> None:
        eid = len(self.edges)
        self.edges.append((s, gen, d, ann))
        rs, _ = self.find(s)
        rd, _ = self.find(d)
        self._insert(rs, gen + 1, eid)
        self._insert(rd, -(gen + 1), eid)

    def run(self) -> None:
        while self.work:
            if self.rng is not None:
                i = self.rng.randrange(len(self.work))
                self.work[i], self.work[-1] = self.work[-1], self.work[i]
            e1, e2, code = self.work.pop()
            v1, a1 = self.traverse(e1, code)
            v2, a2 = self.traverse(e2, code)
            if v1 == v2:
                continue
            delta = _mul(_inv(a1), a2)  # value t(v1) t(v2)^-1
            if v2 == 0 or (v1 != 0 and len(self.adj[v1]) < len(self.adj[v2])):
                child, par, off = v1, v2, _inv(delta)
            else:
                child, par, off = v2, v1, delta
            self.parent[child] = par
            self.off[child] = off
            moved = self.adj[child]
            self.adj[child] = {}
            for key, eid in moved.items():
                self._insert(par, key, eid)

    def result(self) -> tuple[int, list[tuple[int, int, int, tuple[int, ...]]]]:
        seen = {}
        for s, gen, d, ann in self.edges:
            rs, ds = self.find(s)
            rd, dd = self.find(d)
            key = (rs, gen, rd)
            if key not in seen:
                seen[key] = _mul(_mul(ds, ann), _inv(dd))
        return len(self.parent), [(s, g, d, a) for (s, g, d), a in seen.items()]


def _core(edges: Sequence[tuple]) -> list[tuple]:
    """Drop hanging trees: repeatedly remove non-base vertices of degree one."""
    edges = list(edges)
    alive = [True] * len(edges)
    incident: dict[int, list[int]] = {}
    for i, e in enumerate(edges):
        incident.setdefault(e[0], []).append(i)
        incident.setdefault(e[2], []).append(i)
    degree = {v: len(ids) for v, ids in incident.items()}
    stack = [v for v, k in degree.items() if k == 1 and v != 0]
    while stack:
        v = stack.pop()
        if degree[v] != 1:
            continue
        for i in incident[v]:
            if alive[i]:
                alive[i] = False
                s, _, d = edges[i][0], edges[i][1], edges[i][2]
                for u in (s, d):
                    degree[u] -= 1
                    if u != 0 and degree[u] == 1:
                        stack.append(u)
                break
    return [e for i, e in enumerate(edges) if alive[i]]


def _canonical(alphabet, raw_edges):
    """Relabel vertices breadth-first from 0; returns (n, edges, annotations, tree)."""
    out: dict[int, dict[int, tuple[int, int]]] = {0: {}}
    for idx, (s, g, d, _) in enumerate(raw_edges):
        out.setdefault(s, {})[g + 1] = (d, idx)
        out.setdefault(d, {})[-(g + 1)] = (s, idx)
    order = sorted({c for i in range(1, len(alphabet) + 1) for c in (i, -i)}, key=letter_key)
    label = {0: 0}
    tree_edges = set()
    queue = deque([0])
    while queue:
        v = queue.popleft()
        for c in order:
            hit = out[v].get(c)
            if hit is None:
                continue
            w, idx = hit
            if w not in label:
                label[w] = len(label)
                tree_edges.add(idx)
                queue.append(w)
    items = []
    for idx, (s, g, d, ann) in enumerate(raw_edges):
        items.append(((label[s], g, label[d]), ann, idx in tree_edges))
    items.sort(key=lambda t: t[0])
    edges = tuple(t[0] for t in items)
    anns = tuple(t[1] for t in items)
    tree = tuple(t[2] for t in items)
    return len(label), edges, anns, tree


def _assemble(alphabet, raw_edges, generators, gen_alphabet) -> SubgroupGraph:
    raw_edges = _core(raw_edges)
    n, edges, anns, tree = _canonical(alphabet, raw_edges)
    return SubgroupGraph(alphabet, n, edges, tuple(generators), gen_alphabet, anns, tree)


def _from_core_edges(alphabet: Alphabet, raw_edges: Iterable[tuple[int, int, int]]) -> SubgroupGraph:
    """Build a graph from an already folded edge set, using its own basis as generators."""
    raw = [(s, g, d, ()) for s, g, d in raw_edges]
    raw = _core(raw)
    n, edges, _, tree = _canonical(alphabet, raw)
    bare = SubgroupGraph(alphabet, n, edges, (), Alphabet(()), tuple(() for _ in edges), tree)
    b = bare.basis()
    gen_alphabet = Alphabet.fresh(len(b), "g")
    anns = []
    j = 0
    for in_tree in tree:
        if in_tree:
            anns.append(())
        else:
            j += 1
            anns.append((j,))
    return SubgroupGraph(alphabet, n, edges, b.words, gen_alphabet, tuple(anns), tree)


def _spanning_tree_basis(G: SubgroupGraph) -> Basis:
    # tree paths from the basepoint, following BFS tree edges
    prefix: dict[int, tuple[int, ...]] = {0: ()}
    queue = deque([0])
    tree_out: dict[int, list[tuple[int, int]]] = {}
    for (s, g, d), in_tree in zip(G.edges, G._tree):
        if in_tree:
            tree_out.setdefault(s, []).append((g + 1, d))
            tree_out.setdefault(d, []).append((-(g + 1), s))
    while queue:
        v = queue.popleft()
        for c, w in tree_out.get(v, ()):
            if w not in prefix:
                prefix[w] = prefix[v] + (c,)
                queue.append(w)
    words, via = [], []
    for (s, g, d), in_tree in zip(G.edges, G._tree):
        if in_tree:
            continue
        codes = _mul(_mul(prefix[s], (g + 1,)), _inv(prefix[d]))
        words.append(Word._raw(G.alphabet, codes))
        via.append((s, g, d))
    return Basis(tuple(words), tuple(via))


def fold(generators: Sequence[Word], alphabet: Alphabet | None = None, rng: random.Random | None = None) -> SubgroupGraph:
    """Stallings graph of the subgroup generated by ``generators``.

    ``alphabet`` is required when ``generators`` is empty.  Passing ``rng``
    randomises the order in which edges are inserted and folds are
    performed; the result does not depend on it.
    """
    generators = list(generators)
    if alphabet is None:
        if not generators:
            raise ValueError("alphabet required for an empty generating set")
        alphabet = generators[0].alphabet
    for w in generators:
        if w.alphabet != alphabet:
            raise AlphabetMismatch(f"{w.alphabet!r} vs {alphabet!r}")
    gen_alphabet = Alphabet.fresh(len(generators), "g")
    folder = _Folder(rng)
    petals = []
    for j, w in enumerate(generators, start=1):
        codes = w.codes
        if not codes:
            continue
        verts = [0] + [folder.new_vertex() for _ in range(len(codes) - 1)] + [0]
        for pos, c in enumerate(codes):
            ann = (j,) if pos == len(codes) - 1 else ()
            u, v = verts[pos], verts[pos + 1]
            if c > 0:
                petals.append((u, c - 1, v, ann))
            else:
                petals.append((v, -c - 1, u, _inv(ann)))
    if rng is not None:
        rng.shuffle(petals)
    for s, g, d, ann in petals:
        folder.add_edge(s, g, d, ann)
    folder.run()
    _, raw = folder.result()
    return _assemble(alphabet, raw, generators, gen_alphabet)


def whole_group(alphabet: Alphabet) -> SubgroupGraph:
    return fold(alphabet.generators(), alphabet)


def trivial_subgroup(alphabet: Alphabet) -> SubgroupGraph:
    return fold([], alphabet)


def member(G: SubgroupGraph, w: Word) -> bool:
    return G.member(w)


def express(G: SubgroupGraph, w: Word) -> Word:
    """Spell ``w`` as a word in the symbols ``g1 .. gk`` of ``G.generators``."""
    return G.express(w)


def basis(G: SubgroupGraph) -> Basis:
    return G.basis()


def rank(G: SubgroupGraph) -> int:
    return G.rank()


def intersect(G: SubgroupGraph, H: SubgroupGraph) -> SubgroupGraph:
    """Pullback of two Stallings graphs, restricted to the basepoint component and cored."""
    if G.alphabet != H.alphabet:
        raise AlphabetMismatch(f"{G.alphabet!r} vs {H.alphabet!r}")
    ids = {(0, 0): 0}
    queue = deque([(0, 0)])
    edges = []
    n = len(G.alphabet)
    codes = [c for i in range(1, n + 1) for c in (i, -i)]
    while queue:
        p, q = queue.popleft()
        src = ids[(p, q)]
        for c in codes:
            a = G._out[p].get(c)
            if a is None:
                continue
            b = H._out[q].get(c)
            if b is None:
                continue
            tgt = (a[0], b[0])
            if tgt not in ids:
                ids[tgt] = len(ids)
                queue.append(tgt)
            if c > 0:
                edges.append((src, c - 1, ids[tgt]))
    return _from_core_edges(G.alphabet, edges)


def includes(G: SubgroupGraph, H: SubgroupGraph) -> bool:
    """True when H is a subgroup of G."""
    if G.alphabet != H.alphabet:
        raise AlphabetMismatch(f"{G.alphabet!r} vs {H.alphabet!r}")
    return all(G.member(w) for w in H.basis().words)


def equal(G: SubgroupGraph, H: SubgroupGraph) -> bool:
    return G == H


def preimage(g, A: SubgroupGraph) -> SubgroupGraph:
    """Graph of g^-1(A) for an injective homomorphism ``g``."""
    if A.alphabet != g.codomain:
        raise AlphabetMismatch(f"{A.alphabet!r} vs {g.codomain!r}")
    img = fold(g.images, g.codomain)
    if img.rank() != len(g.domain):
        raise UnsupportedPreimage(
            "preimage needs an injective map; the kernel is not finitely generated"
        )
    B = intersect(A, img)
    # generator symbol g_i of img stands for domain generator x_i
    pulled = [Word._raw(g.domain, img.express(w).codes) for w in B.basis().words]
    return fold(pulled, g.domain)


def to_dot(G: SubgroupGraph, name: str = "subgroup") -> str:
    lines = [f"digraph {name} {{", "  rankdir=LR;", "  node [shape=circle];"]
    for v in range(G.n_vertices):
        if v == 0:
            lines.append('  0 [shape=doublecircle, label="0*"];')
        else:
            lines.append(f"  {v};")
    for s, g, d in G.edges:
        lines.append(f'  {s} -> {d} [label="{G.alphabet.symbols[g]}"];')
    lines.append("}")
    return "\n".join(lines) + "\n"
