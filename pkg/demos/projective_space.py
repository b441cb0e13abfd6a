"""
Projective space, three ways
============================

"""

# the catalog has projective spaces of every dimension
from torfan import catalog_fan, FormalGroupLaw
from torfan.sralgebra import equivariant_presentation, ordinary_presentation, graded_rank

fan = catalog_fan("pn:2")
print(fan.rays)

# equivariantly there is one relation: the product of all the ray variables
print(equivariant_presentation(fan).render())

# killing the characters leaves one variable and its cube
for selector in ("additive", "mult:1", "mult:2"):
    F = FormalGroupLaw.from_selector(selector, 6)
    pres = ordinary_presentation(fan, F)
    print(selector, [str(r) for r in pres.relations],
          [graded_rank(pres, d) for d in range(4)])

# with the parameter left free, the relation is still x^3
F = FormalGroupLaw.from_selector("mult:v", 6)
print(ordinary_presentation(catalog_fan("pn:3"), F).render())
