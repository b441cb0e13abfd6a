"""
The hexagon: degree-6 del Pezzo surface
=======================================

Six rays, six cones.  The divisors are three lines ``L1, L2, L3`` and three
exceptional curves ``E1, E2, E3``.
"""

import itertools

from torfan import catalog_fan, FormalGroupLaw
from torfan.fan import minimal_nonfaces, picard_presentation
from torfan.sralgebra import (
    OrdinaryModel, SRRing, character_class, graded_rank, ideal_membership,
)

fan = catalog_fan("dp6")
print(list(zip(fan.labels, fan.rays)))

# the nine pairs of rays that span no cone
print([fan.cone_name(S) for S in minimal_nonfaces(fan)])

# Picard group from the Smith normal form
print(picard_presentation(fan))

# characters as formal combinations of divisors
F = FormalGroupLaw.from_selector("mult:v", 4)
R = SRRing(fan, 4, F.params)
print(character_class(R, F, (1, 0)))

# exceptional curves are disjoint, so their formal sum is the plain sum
x = {lab: R.gen(i) for i, lab in enumerate(fan.labels)}
print(F.formal_sum(x["E1"], x["E2"]))

# non-equivariant model over Z: eliminate one cone's variables
F = FormalGroupLaw.additive(6)
model = OrdinaryModel(fan, F)
pres = model.presentation()
print(pres.render())
print("ranks:", [graded_rank(pres, d) for d in range(4)])

# l = L1 + E2 + E3 satisfies l^2 = -E_i^2 and l E_i = 0
y = {lab: model.source.gen(i) for i, lab in enumerate(fan.labels)}
ell = model.eliminate(y["L1"] + y["E2"] + y["E3"]).into(model.free)
es = [model.eliminate(y[f"E{i}"]).into(model.free) for i in (1, 2, 3)]
for name, f in [("l^2 + E1^2", ell * ell + es[0] ** 2), ("l E2", ell * es[1]),
                ("E1 E3", es[0] * es[2]), ("l^2", ell * ell)]:
    print(name, "vanishes:", ideal_membership(f, pres.relations, 6))
