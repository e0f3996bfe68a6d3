"""Equalisers of maps out of F(a, b), and the retract pipeline."""
from equalisers import (
    Alphabet,
    Homomorphism,
    classify_rank2,
    identity_map,
    solve_retract_pipeline,
    solve_set,
)

AB, XY, ABC = Alphabet("ab"), Alphabet("xy"), Alphabet("abc")


def hom(dom, cod, images):
    return Homomorphism.from_strings(dom, cod, images)


def show(label, rep):
    basis = ", ".join(str(w) for w in rep.basis) or "-"
    extra = f" witnesses {[str(w) for w in rep.witnesses]}" if rep.witnesses else ""
    radius = f" (searched to radius {rep.radius})" if rep.radius is not None else ""
    print(f"{label:32} {rep.verdict:24} <{basis}>{radius}{extra}")


ident = hom(AB, XY, ["x", "y"])
show("swap the letters", classify_rank2([ident, hom(AB, XY, ["y", "x"])]))
show("invert b", classify_rank2([ident, hom(AB, XY, ["x", "Y"])]))
show("shear a -> xy", classify_rank2([hom(AB, XY, ["xy", "y"]), ident]))
show("collapse onto y", classify_rank2([ident, hom(AB, XY, ["y", "1"])]))
show("kill b", classify_rank2([ident, hom(AB, XY, ["x", "1"])]))
show("two non-injective maps", classify_rank2([hom(AB, XY, ["x", "1"]), hom(AB, XY, ["xx", "1"])]))

# three maps: the exact pair pins the answer down
maps = [ident, hom(AB, XY, ["x", "1"]), hom(AB, XY, ["x", "yy"])]
show("three maps", solve_set(maps))

# retractions are checked before they are trusted
g = hom(XY, ABC, ["a", "b"])
h = hom(XY, ABC, ["a", "c"])
rho_g = hom(ABC, ABC, ["a", "b", "1"])
rho_h = hom(ABC, ABC, ["a", "1", "c"])
rep = solve_retract_pipeline(g, h, rho_g, rho_h)
show("retract pipeline", rep)
for note in rep.notes:
    print("   ", note)
show("identical maps", solve_retract_pipeline(g, g, identity_map(ABC), identity_map(ABC)))
