"""One-dimensional commutative formal group laws as truncated tables.

A law is stored as its coefficient table ``a[i, j]`` of
``F(x, y) = sum a[i, j] x^i y^j`` for ``1 <= i + j <= N``.  The formal
operations act on any host element with zero constant term whose ring
exposes ``zero``, ``one``, ``N`` and ring arithmetic; in this package the
hosts are :class:`~torfan.series.Series` (plain or Stanley-Reisner).

>>> from torfan.coefficients import ParamSpec
>>> from torfan.series import SeriesRing
>>> R = ParamSpec(("v",))
>>> F = FormalGroupLaw.multiplicative(R.gen("v"), N=4)
>>> z = SeriesRing(["z"], 4, R).gen("z")
>>> F.formal_inverse(z)
-z - v*z^2 - v^2*z^3 - v^3*z^4
"""

from __future__ import annotations

import json
import random
from dataclasses import dataclass, field
from typing import Mapping

from .coefficients import ZZ, CoeffElem, ParamSpec
from .errors import DomainError, StructuralError
from .series import Series, SeriesRing

__all__ = [
    "FormalGroupLaw",
    "AxiomReport",
    "build_table",
    "formal_sum",
    "formal_inverse",
    "int_multiple",
    "check_fgl_axioms",
    "change_of_coordinates",
    "random_associative",
    "DEFAULT_N",
]

DEFAULT_N = 6


@dataclass
class AxiomReport:
    passed: bool
    failures: list = field(default_factory=list)

    @property
    def first_failure(self):
        return self.failures[0] if self.failures else None

    def __str__(self):
        if self.passed:
            return "formal group law axioms: pass"
        lines = ["formal group law axioms: FAIL"]
        lines += [f"  {axiom} at {index}: {detail}" for axiom, index, detail in self.failures]
        return "\n".join(lines)


class FormalGroupLaw:
    """Truncated formal group law over a :class:`ParamSpec` ring."""

    def __init__(self, variant: str, table: Mapping, N: int, params: ParamSpec = ZZ, data=None):
        if N < 1:
            raise DomainError("truncation degree must be at least 1")
        self.variant = variant
        self.N = int(N)
        self.params = params
        self.data = dict(data or {})
        clean = {}
        for (i, j), c in table.items():
            if i < 0 or j < 0 or not 1 <= i + j:
                raise DomainError(f"bad table index {(i, j)}")
            if i + j > self.N:
                continue
            c = params.coerce(c)
            if c:
                clean[(int(i), int(j))] = c
        self.table = clean
        self._chi = None
        self._bivariate = None

    # -- construction ---------------------------------------------------
    @classmethod
    def additive(cls, N: int = DEFAULT_N, params: ParamSpec = ZZ):
        return cls("additive", {(1, 0): 1, (0, 1): 1}, N, params)

    @classmethod
    def multiplicative(cls, v, N: int = DEFAULT_N, params: ParamSpec = None):
        """``F(x, y) = x + y - v x y``; ``v`` need not be a unit."""
        v = _as_coeff(v, params)
        return cls("multiplicative", {(1, 0): 1, (0, 1): 1, (1, 1): -v}, N, v.spec, {"v": v})

    @classmethod
    def lorentz(cls, u2, N: int = DEFAULT_N, params: ParamSpec = None):
        """``F(x, y) = (x + y) / (1 + u2 x y)`` expanded as a geometric series."""
        u2 = _as_coeff(u2, params)
        table = {}
        k = 0
        while 2 * k + 1 <= N:
            c = (-u2) ** k
            table[(k + 1, k)] = c
            table[(k, k + 1)] = c
            k += 1
        return cls("lorentz", table, N, u2.spec, {"u2": u2})

    @classmethod
    def generic(cls, table: Mapping, N: int = DEFAULT_N, params: ParamSpec = ZZ):
        table = dict(table)
        table.setdefault((1, 0), 1)
        table.setdefault((0, 1), 1)
        return cls("generic", table, N, params)

    def with_truncation(self, N: int) -> "FormalGroupLaw":
        return FormalGroupLaw(self.variant, self.table, N, self.params, self.data)

    def specialize(self, assignment: Mapping, target: ParamSpec = None) -> "FormalGroupLaw":
        from .coefficients import _infer_target

        target = _infer_target(assignment, target)
        table = {k: c.specialize(assignment, target) for k, c in self.table.items()}
        data = {k: c.specialize(assignment, target) for k, c in self.data.items()}
        variant = self.variant
        if variant == "multiplicative" and not data["v"]:
            variant = "additive"
        return FormalGroupLaw(variant, table, self.N, target, data)

    # -- inspection -----------------------------------------------------
    def coefficient(self, i: int, j: int) -> CoeffElem:
        return self.table.get((i, j), self.params.zero())

    @property
    def multiplicative_parameter(self):
        """``v`` when ``F = x + y - v x y``, otherwise ``None``."""
        keys = set(self.table) - {(1, 1)}
        if keys != {(1, 0), (0, 1)}:
            return None
        if self.coefficient(1, 0) != 1 or self.coefficient(0, 1) != 1:
            return None
        return -self.coefficient(1, 1)

    def __eq__(self, other):
        return (
            isinstance(other, FormalGroupLaw)
            and self.N == other.N
            and self.params == other.params
            and self.table == other.table
        )

    def __hash__(self):
        return hash((self.N, self.params, frozenset(self.table.items())))

    def __repr__(self):
        return f"FormalGroupLaw({self.variant}, N={self.N}, R={self.params})"

    def as_series(self, ring: SeriesRing = None) -> Series:
        """``F(x, y)`` as an element of a bivariate ring."""
        if ring is None:
            if self._bivariate is None:
                self._bivariate = SeriesRing(("x", "y"), self.N, self.params)
            ring = self._bivariate
        return ring.from_terms({k: c for k, c in self.table.items()})

    # -- formal operations ----------------------------------------------
    def _host_check(self, *elems):
        ring = elems[0].ring
        for e in elems:
            if e.ring != ring:
                raise StructuralError("formal operations need operands in one ring")
            if e.constant_term():
                raise DomainError("formal operations need zero constant term")
        if ring.params != self.params:
            raise StructuralError(f"host coefficients {ring.params} differ from law's {self.params}")
        if ring.N > self.N:
            raise StructuralError(f"law truncated at {self.N} used in a ring truncated at {ring.N}")
        return ring

    def formal_sum(self, a: Series, b: Series) -> Series:
        """``a +_F b``."""
        ring = self._host_check(a, b)
        if self.variant == "additive" and set(self.table) == {(1, 0), (0, 1)}:
            return a + b
        N = ring.N
        oa, ob = a.order(), b.order()
        pa = _powers(a, N)
        pb = _powers(b, N)
        out = ring.zero()
        for (i, j), c in sorted(self.table.items()):
            if i + j > N:
                continue
            if (i and oa is None) or (j and ob is None):
                continue
            if (oa or 0) * i + (ob or 0) * j > N:
                continue
            if i >= len(pa) or j >= len(pb):
                continue
            out = out + (pa[i] * pb[j]).scale(c)
        return out

    def inverse_coefficients(self) -> list:
        """Coefficients ``c[0..N]`` of the formal inverse ``chi(z)``."""
        if self._chi is None:
            uni = SeriesRing(("z",), self.N, self.params)
            z = uni.gen(0)
            chi = -z
            for d in range(2, self.N + 1):
                r = self.formal_sum(z, chi).coefficient((d,))
                if r:
                    chi = chi - uni.monomial((d,), r)
            self._chi = [chi.coefficient((k,)) for k in range(self.N + 1)]
        return self._chi

    def formal_inverse(self, a: Series) -> Series:
        """``chi(a)``, the unique element with ``a +_F chi(a) = 0``."""
        ring = self._host_check(a)
        coeffs = self.inverse_coefficients()
        out = ring.zero()
        if a.order() is None:
            return out
        power = ring.one()
        for k in range(1, ring.N + 1):
            if a.order() * k > ring.N:
                break
            power = power * a
            if not power:
                break
            if coeffs[k]:
                out = out + power.scale(coeffs[k])
        return out

    def formal_difference(self, a: Series, b: Series) -> Series:
        """``a -_F b = a +_F chi(b)``."""
        return self.formal_sum(a, self.formal_inverse(b))

    def int_multiple(self, n: int, a: Series) -> Series:
        """``n ._F a``; negative ``n`` gives the inverse of ``|n| ._F a``."""
        ring = self._host_check(a)
        if n == 0:
            return ring.zero()
        if n < 0:
            return self.formal_inverse(self.int_multiple(-n, a))
        acc = a
        for _ in range(n - 1):
            acc = self.formal_sum(acc, a)
        return acc

    def formal_sum_all(self, elems, ring: SeriesRing) -> Series:
        out = ring.zero()
        for e in elems:
            out = self.formal_sum(out, e)
        return out

    # -- axioms ---------------------------------------------------------
    def check_axioms(self) -> AxiomReport:
        failures = []
        for (i, j), c in sorted(self.table.items()):
            if i < j and self.coefficient(j, i) != c:
                failures.append(
                    ("symmetry", (i, j), f"a[{i},{j}] = {c} but a[{j},{i}] = {self.coefficient(j, i)}")
                )
                break
        if self.coefficient(1, 0) != 1 or self.coefficient(0, 1) != 1:
            failures.append(("neutral", (1, 0), "linear coefficients must be 1"))
        else:
            for (i, j), c in sorted(self.table.items()):
                if (i == 0 or j == 0) and i + j >= 2:
                    failures.append(("neutral", (i, j), f"F(x, 0) != x: a[{i},{j}] = {c}"))
                    break
        tri = SeriesRing(("x", "y", "z"), self.N, self.params)
        x, y, z = tri.gens()
        left = self.formal_sum(x, self.formal_sum(y, z))
        right = self.formal_sum(self.formal_sum(x, y), z)
        diff = left - right
        if diff:
            mono, c = diff.terms[0]
            failures.append(("associativity", mono, f"F(x,F(y,z)) - F(F(x,y),z) has {c} at x^{mono}"))
        return AxiomReport(not failures, failures)

    # -- serialization --------------------------------------------------
    def to_json(self) -> dict:
        return {
            "N": self.N,
            "params": list(self.params.names),
            "invertible": sorted(self.params.invertible),
            "a": {f"{i},{j}": c.to_json() for (i, j), c in sorted(self.table.items())},
        }

    @classmethod
    def from_json(cls, data: Mapping, N: int = None) -> "FormalGroupLaw":
        names = data.get("params")
        if names is None:
            found = set()
            for entry in data["a"].values():
                for t in entry.get("terms", []):
                    found.update(t.get("exps", {}))
            names = sorted(found)
        params = ParamSpec(tuple(names), frozenset(data.get("invertible", ())))
        table = {}
        for key, entry in data["a"].items():
            i, j = (int(s) for s in key.split(","))
            table[(i, j)] = CoeffElem.from_json(entry, params)
        return cls.generic(table, N if N is not None else int(data.get("N", DEFAULT_N)), params)

    @classmethod
    def from_selector(cls, text: str, N: int = DEFAULT_N) -> "FormalGroupLaw":
        """Parse ``additive``, ``mult:v``, ``mult:2``, ``mult:unit:beta``,
        ``lorentz:u2`` or ``generic:<table.json>``."""
        kind, _, rest = text.partition(":")
        if kind == "additive" and not rest:
            return cls.additive(N)
        if kind in ("mult", "lorentz") and rest:
            unit = False
            if kind == "mult" and rest.startswith("unit:"):
                unit, rest = True, rest[len("unit:"):]
            value = _selector_value(rest, unit)
            return cls.multiplicative(value, N) if kind == "mult" else cls.lorentz(value, N)
        if kind == "generic" and rest:
            with open(rest) as fh:
                return cls.from_json(json.load(fh), N)
        raise DomainError(f"unrecognized formal group law selector {text!r}")


def _selector_value(text, unit):
    try:
        n = int(text)
    except ValueError:
        if not text.isidentifier():
            raise DomainError(f"bad parameter name {text!r}") from None
        spec = ParamSpec((text,), {text} if unit else ())
        return spec.gen(text)
    if unit and n not in (1, -1):
        raise DomainError(f"{n} is not a unit of ZZ")
    return ZZ.const(n)


def _as_coeff(x, params):
    if isinstance(x, CoeffElem):
        return x
    return (params or ZZ).const(int(x))


def _powers(a: Series, N: int) -> list:
    out = [a.ring.one()]
    o = a.order()
    if o is None:
        return out
    k = 1
    while o * k <= N:
        out.append(out[-1] * a)
        if not out[-1]:
            break
        k += 1
    return out


def build_table(variant: str, N: int = DEFAULT_N, **kw) -> FormalGroupLaw:
    if variant == "additive":
        return FormalGroupLaw.additive(N, kw.get("params", ZZ))
    if variant == "multiplicative":
        return FormalGroupLaw.multiplicative(kw["v"], N)
    if variant == "lorentz":
        return FormalGroupLaw.lorentz(kw["u2"], N)
    if variant == "generic":
        return FormalGroupLaw.generic(kw["table"], N, kw.get("params", ZZ))
    raise DomainError(f"unknown variant {variant!r}")


def formal_sum(F: FormalGroupLaw, a: Series, b: Series) -> Series:
    return F.formal_sum(a, b)


def formal_inverse(F: FormalGroupLaw, a: Series) -> Series:
    return F.formal_inverse(a)


def int_multiple(F: FormalGroupLaw, n: int, a: Series) -> Series:
    return F.int_multiple(n, a)


def check_fgl_axioms(F: FormalGroupLaw) -> AxiomReport:
    return F.check_axioms()


def _reversion(phi: Series) -> Series:
    ring = phi.ring
    z = ring.gen(0)
    psi = z
    for d in range(2, ring.N + 1):
        r = phi.substitute([psi], ring).coefficient((d,))
        if r:
            psi = psi - ring.monomial((d,), r)
    return psi


def change_of_coordinates(F: FormalGroupLaw, phi_coeffs: Mapping) -> FormalGroupLaw:
    """The conjugate law ``phi^-1(F(phi(x), phi(y)))``.

    ``phi_coeffs`` maps degrees ``k >= 2`` to coefficients of
    ``phi(z) = z + sum c_k z^k``; the leading 1 keeps ``phi`` invertible over
    any ring, so the result is again associative with the same ``R``.
    """
    uni = SeriesRing(("z",), F.N, F.params)
    phi = uni.gen(0) + uni.from_terms({(k,): c for k, c in phi_coeffs.items() if k >= 2})
    psi = _reversion(phi)
    biv = SeriesRing(("x", "y"), F.N, F.params)
    x, y = biv.gens()
    px = phi.substitute([x], biv)
    py = phi.substitute([y], biv)
    g = psi.substitute([F.formal_sum(px, py)], biv)
    return FormalGroupLaw.generic(dict(g.items()), F.N, F.params)


def random_associative(N: int = DEFAULT_N, rng: random.Random = None, base: FormalGroupLaw = None):
    """A random integral law built by conjugating ``base`` with a random
    strict coordinate change.  Default base: multiplicative with random v."""
    rng = rng or random.Random(0)
    if base is None:
        base = FormalGroupLaw.multiplicative(rng.randint(-3, 3), N)
    coeffs = {k: rng.randint(-2, 2) for k in range(2, N + 1)}
    return change_of_coordinates(base, coeffs)
