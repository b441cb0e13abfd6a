"""
Blowing up a fixed point
========================

"""

from torfan import catalog_fan, FormalGroupLaw
from torfan.blowup import make_blowup, check_push_pull

F = FormalGroupLaw.from_selector("mult:v", 6)

# the plane: subdivide cone(x1,x2) with the ray E = (1,1)
ctx = make_blowup(catalog_fan("pn:2"), (0, 1), F)
print(ctx.fan.labels, ctx.fan.max_cones)

# push forward powers of the exceptional class
xE = ctx.exceptional_class
for t in range(1, 4):
    print(f"pi_*(E^{t}) =", ctx.pushforward(xE ** t))

# pull back then push forward gives back what we started with
f = ctx.source.gen(0) ** 2 + 3 * ctx.source.gen(2)
print(ctx.pushforward(ctx.pullback(f)) == f)

print(check_push_pull(ctx, count=20))

# in dimension three the push-forward comes from the recursion
ctx3 = make_blowup(catalog_fan("pn:3"), (0, 1, 2), F)
x = ctx3.target.gens()
print(ctx3.pushforward(x[4]))
print(ctx3.pushforward(x[0] * x[4]))
print(ctx3.pushforward(x[0] * x[1] * x[4]))

# setting v = 0 gives the Chow-ring answer: E^3 is a point
chow = ctx3.specialize({"v": 0})
print(chow.pushforward(chow.exceptional_class ** 3))
