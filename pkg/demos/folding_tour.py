"""A walk through Stallings graphs: folding, membership, bases and pullbacks."""
from equalisers import Alphabet, fold, intersect, parse_word, to_dot

F = Alphabet("ab")


def sub(*gens):
    return fold([parse_word(F, g) for g in gens], F)


# ab and abb already generate everything: a = (ab)b^-1 and b = (ab)^-1 abb
G = sub("ab", "abb")
print("<ab, abb> is the whole group:", G.is_whole())
print("b written in the generators:", G.express(parse_word(F, "b")))

# <a^2, b> has two vertices and rank two
H = sub("aa", "b")
print(f"<a^2, b>: {H.n_vertices} vertices, {len(H.edges)} edges, rank {H.rank()}")
print(to_dot(H))

# index two subgroup: Nielsen-Schreier predicts rank 2*(2-1)+1 = 3
print("rank of <a^2, b^2, ab>:", sub("aa", "bb", "ab").rank())

# pullbacks compute intersections
I = intersect(sub("aa", "b"), sub("a", "bb"))
print("<a^2, b> meets <a, b^2> in", [str(w) for w in I.basis().words])
print("<ab> meets <a^2, b^2> trivially:", intersect(sub("ab"), sub("aa", "bb")).is_trivial())


def reduced_rank(K):
    return max(K.rank() - 1, 0)


# the strengthened Hanna Neumann bound on a pair of index-two subgroups
A, B = sub("aa", "b", "aBa"), sub("bb", "a", "bAb")
C = intersect(A, B)
print(f"reduced ranks: {reduced_rank(C)} <= {reduced_rank(A)} * {reduced_rank(B)}")
