"""Pull-back and push-forward along the blow-up of a torus-invariant center.

The blow-up of ``X_Sigma`` along the orbit closure of a cone ``sigma`` is
the star subdivision ``Sigma'`` with exceptional ray ``E``.  For a law of
the form ``F(x, y) = x + y - v x y``:

* ``pi^*`` is the algebra map ``x_rho -> x_rho +_F x_E`` for ``rho`` in
  ``sigma`` and ``x_rho -> x_rho`` otherwise;
* ``pi_*`` is the module map over ``pi^*`` fixed by ``pi_*(1) = 1``.

``pi_*`` of a face monomial ``m * x^s * x_E^t`` (with ``m`` free of
``sigma`` and ``E``) is ``m * P(s, t)``.  ``P`` is computed by a memoized
rewriting recursion.  Every step follows from the projection formula
together with ``x_sigma = 0`` on ``Sigma'`` and
``x_a = pi^*(x_a) -_F x_E = (pi^*(x_a) - x_E) / (1 - v x_E)``:

* ``P(1_S, 0) = x_S`` for a proper subset ``S`` of ``sigma``;
* ``P(s, t) = x_b P(s, t-1)`` when the support of ``s`` is ``sigma - {b}``;
* ``P(1_S, t) = x_a P(1_S, t-1) - P(1_{S+a}, t-1) + v P(1_{S+a}, t)``;
* ``P(s, t) = sum_j v^j (x_a P(s-e_a, t+j) - P(s-e_a, t+1+j))`` if
  ``s_a >= 2``.

Images never have lower degree than their source, so everything is exact
in the truncated rings.  For a two-dimensional center the closed forms
are used unless the recursion is requested explicitly.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field

from .errors import DomainError, StructuralError, UnderdeterminedError, UnsupportedError
from .fan import Fan, minimal_nonfaces, star_subdivision, validate_fan
from .fgl import FormalGroupLaw
from .series import Series
from .sralgebra import SRRing, random_series

__all__ = [
    "BlowupContext",
    "PushPullReport",
    "make_blowup",
    "pullback",
    "pushforward",
    "check_push_pull",
]

SEED_NOTE = (
    "push-forward seeded with pi_*(x_S) = x_S for every proper subset S "
    "of the center; consistency is checked by check_push_pull"
)


class BlowupContext:
    """Blow-up data: base fan, center, subdivided fan and the law ``F``."""

    def __init__(self, fan: Fan, center, F: FormalGroupLaw, label: str = "E",
                 N: int = None, strict: bool = True, method: str = "auto"):
        v = F.multiplicative_parameter
        if v is None:
            raise UnsupportedError(
                "push-forward needs a law of the form x + y - v x y; got " + F.variant
            )
        if method not in ("auto", "closed", "recursion"):
            raise ValueError(f"unknown push-forward method {method!r}")
        self.base = fan
        self.center = fan.cone(center)
        if len(self.center) < 2:
            raise DomainError("the center must have at least two rays")
        self.fan, self.exceptional = star_subdivision(fan, self.center, label)
        report = validate_fan(self.fan, strict=strict)
        if not report.ok:
            raise StructuralError(f"subdivided fan is invalid: {report}")
        self.F = F
        self.v = v
        self.N = F.N if N is None else N
        self.method = method
        self.source = SRRing(fan, self.N, F.params)
        self.target = SRRing(self.fan, self.N, F.params)
        self.notes = {"center": fan.cone_name(self.center), "exceptional": self.fan.labels[-1]}
        if len(self.center) >= 3:
            self.notes["push_forward_seeds"] = SEED_NOTE
        if method == "closed" and len(self.center) != 2:
            raise UnsupportedError("closed forms exist only for two-dimensional centers")
        xE = self.target.gen(self.exceptional)
        self._pull = []
        for i in range(fan.nrays):
            x = self.target.gen(i)
            self._pull.append(F.formal_sum(x, xE) if i in self.center else x)
        self._memo = {}
        self._check_ideal()

    def _check_ideal(self):
        for S in minimal_nonfaces(self.base):
            img = self.target.one()
            for i in S:
                img = img * self._pull[i]
            if img:
                raise StructuralError(
                    f"pull-back of x_{self.base.cone_name(S)} is {img}, not zero"
                )

    @property
    def exceptional_class(self) -> Series:
        return self.target.gen(self.exceptional)

    def specialize(self, assignment, target=None) -> "BlowupContext":
        return BlowupContext(
            self.base, self.center, self.F.specialize(assignment, target),
            self.fan.labels[-1], self.N, strict=False, method=self.method,
        )

    # -- maps -----------------------------------------------------------
    def pullback(self, f: Series) -> Series:
        if f.ring != self.source:
            raise StructuralError("element does not live on the base fan")
        return f.substitute(self._pull, self.target)

    def pushforward(self, f: Series) -> Series:
        if f.ring != self.target:
            raise StructuralError("element does not live on the subdivided fan")
        out = self.source.zero()
        center = self.center
        for mono, c in f.items():
            t = mono[self.exceptional]
            s = tuple(mono[i] for i in center)
            rest = list(mono[: self.exceptional])
            for i in center:
                rest[i] = 0
            out = out + self.push_monomial(s, t).mul_monomial(tuple(rest), c)
        return out

    def push_monomial(self, s, t: int) -> Series:
        """``pi_*(x_sigma^s x_E^t)`` with ``s`` indexed by the center's rays."""
        s = tuple(s)
        if len(s) != len(self.center) or min(s, default=0) < 0 or t < 0:
            raise DomainError(f"bad exponent data {s}, {t}")
        if sum(s) + t > self.N:
            return self.source.zero()
        if self.method != "recursion" and len(self.center) == 2:
            return self._closed(s, t)
        return self._recurse(s, t)

    # -- closed forms (two-dimensional center) --------------------------
    def _closed(self, s, t):
        R = self.source
        v = self.v
        a, b = self.center
        xa, xb = R.gen(a), R.gen(b)
        if s == (0, 0):
            if t == 0:
                return R.one()
            out = R.zero()
            for i in range(1, t + 1):
                out = out + (xa ** (t + 1 - i) * xb ** i).scale(v)
            for i in range(1, t):
                out = out - xa ** (t - i) * xb ** i
            return out
        if s[0] and s[1]:
            raise UnderdeterminedError(f"x^{s} x_E^{t} is not a face monomial of the subdivided fan")
        if s[1]:
            xa, xb = xb, xa
        k = max(s)
        return xa * xb ** t * self.F.formal_difference(xa, xb) ** (k - 1)

    # -- rewriting recursion --------------------------------------------
    def _recurse(self, s, t):
        key = (s, t)
        hit = self._memo.get(key)
        if hit is not None:
            return hit
        R = self.source
        center = self.center
        k = len(center)
        v = self.v
        support = [i for i in range(k) if s[i]]
        if sum(s) + t > self.N:
            out = R.zero()
        elif len(support) == k:
            raise UnderdeterminedError(
                f"x^{s} x_E^{t}: support is the whole center, which is not a face after subdivision"
            )
        elif t == 0 and max(s, default=0) <= 1:
            out = R.monomial(self._expand(s))
        elif t > 0 and len(support) == k - 1:
            b = next(i for i in range(k) if not s[i])
            out = R.gen(center[b]) * self._recurse(s, t - 1)
        elif max(s, default=0) <= 1:
            a = next(i for i in range(k) if not s[i])
            sa = tuple(1 if i == a else e for i, e in enumerate(s))
            out = (
                R.gen(center[a]) * self._recurse(s, t - 1)
                - self._recurse(sa, t - 1)
                + self._recurse(sa, t).scale(v)
            )
        else:
            a = next(i for i in range(k) if s[i] >= 2)
            lower = tuple(e - 1 if i == a else e for i, e in enumerate(s))
            xa = R.gen(center[a])
            out = R.zero()
            vj = R.params.one()
            j = 0
            while sum(lower) + t + j <= self.N:
                term = xa * self._recurse(lower, t + j) - self._recurse(lower, t + 1 + j)
                out = out + term.scale(vj)
                vj = vj * v
                j += 1
                if not vj:
                    break
        self._memo[key] = out
        return out

    def _expand(self, s):
        mono = [0] * self.base.nrays
        for i, e in zip(self.center, s):
            mono[i] = e
        return tuple(mono)


def make_blowup(fan: Fan, center, F: FormalGroupLaw, **kw) -> BlowupContext:
    return BlowupContext(fan, center, F, **kw)


def pullback(ctx: BlowupContext, f: Series) -> Series:
    return ctx.pullback(f)


def pushforward(ctx: BlowupContext, f: Series) -> Series:
    return ctx.pushforward(f)


@dataclass
class PushPullReport:
    checks: int = 0
    failures: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.failures

    def __str__(self):
        if self.ok:
            return f"push/pull: {self.checks} checks passed"
        lines = [f"push/pull: {len(self.failures)} of {self.checks} checks failed"]
        lines += [f"  {name}: {witness}" for name, witness in self.failures]
        return "\n".join(lines)


def check_push_pull(ctx: BlowupContext, samples=None, rng: random.Random = None,
                    count: int = 20) -> PushPullReport:
    """Projection formula, ``pi_* pi^* = id``, ``pi_*(1) = 1`` and
    ``pi_*(chi(x_E)) = 0`` on ``samples`` (pairs ``(f on Sigma, g on Sigma')``),
    or on ``count`` random pairs when no samples are given."""
    if samples is None:
        rng = rng or random.Random(0)
        samples = [
            (random_series(ctx.source, rng, 3, 5), random_series(ctx.target, rng, 3, 5))
            for _ in range(count)
        ]
    report = PushPullReport()

    def check(name, lhs, rhs, witness):
        report.checks += 1
        if lhs != rhs:
            report.failures.append((name, witness))

    check("pi_*(1) = 1", ctx.pushforward(ctx.target.one()), ctx.source.one(), "1")
    chiE = ctx.F.formal_inverse(ctx.exceptional_class)
    check("pi_*(chi(x_E)) = 0", ctx.pushforward(chiE), ctx.source.zero(), str(chiE))
    for f, g in samples:
        pf = ctx.pullback(f)
        check("pi_* pi^* = id", ctx.pushforward(pf), f, f"f = {f}")
        check(
            "projection formula",
            ctx.pushforward(pf * g),
            f * ctx.pushforward(g),
            f"f = {f}; g = {g}",
        )
    return report
