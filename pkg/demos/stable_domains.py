"""Stable domains: one pair that settles quickly and one that never does."""
from equalisers import Alphabet, Homomorphism, build_phi, sd_iterate, sd_symmetry_check

XY, ABC, AB = Alphabet("xy"), Alphabet("abc"), Alphabet("ab")

# both images are free factors of F(a, b, c); the chain settles after one step
g = Homomorphism.from_strings(XY, ABC, ["a", "b"])
h = Homomorphism.from_strings(XY, ABC, ["a", "c"])
trace = sd_iterate(g, h)
print("status:", trace.status, "at index", trace.index)
print("SD basis:", [str(w) for w in trace.sd.basis().words])
phi, basis = build_phi(g, h, trace.sd)
print("phi = h^-1 g on SD is the identity:", phi.is_identity())

# squaring different letters: H_i = <x, y^(2^i)> shrinks forever
g = Homomorphism.from_strings(XY, AB, ["aa", "b"])
h = Homomorphism.from_strings(XY, AB, ["a", "bb"])
trace = sd_iterate(g, h, max_iter=6)
print("\nstatus:", trace.status)
for i, H in enumerate(trace.iterates):
    print(f"  H_{i} = <{', '.join(str(w) for w in H.basis().words)}>  ({H.n_vertices} vertices)")

# the same pair read the other way round cannot be compared under a finite cap
report = sd_symmetry_check(g, h, max_iter=5)
print("symmetry check conclusive:", report.conclusive, "-", report.reason)

# a non-injective g has a kernel that is not finitely generated
g = Homomorphism.from_strings(XY, AB, ["ab", "1"])
h = Homomorphism.from_strings(XY, AB, ["aa", "bb"])
trace = sd_iterate(g, h)
print("\nnon-injective g:", trace.status, "-", trace.reason)
