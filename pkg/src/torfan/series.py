"""Truncated multivariate power series over a coefficient ring.

A :class:`SeriesRing` is ``R[[x_1..x_k]]`` cut off above total degree
``N``.  It may carry a set of *admissible supports*: monomials whose
support is not in that set are identified with zero.  With supports taken
from the faces of a fan this is exactly the Stanley-Reisner quotient, and
without them it is the plain truncated power series ring used for
univariate and bivariate work.

These rings are the hosts of the formal group law operations: anything
with ``+``, ``*``, scalar multiplication, ``ring.zero()``, ``ring.one()``
and ``ring.N`` will do.
"""

from __future__ import annotations

from itertools import combinations_with_replacement
from typing import Iterable, Mapping, Sequence

from .coefficients import ZZ, CoeffElem, ParamSpec
from .errors import DomainError, StructuralError

__all__ = ["SeriesRing", "Series", "support_mask", "monomials_up_to"]


def support_mask(mono: Sequence[int]) -> int:
    mask = 0
    for i, e in enumerate(mono):
        if e:
            mask |= 1 << i
    return mask


def monomials_up_to(nvars: int, degree: int) -> list:
    """Exponent vectors of total degree <= ``degree``, graded lex order."""
    out = []
    for d in range(degree + 1):
        block = []
        for combo in combinations_with_replacement(range(nvars), d):
            m = [0] * nvars
            for i in combo:
                m[i] += 1
            block.append(tuple(m))
        block.sort(reverse=True)
        out.extend(block)
    return out


class SeriesRing:
    """``params[[labels]]`` truncated above degree ``N``.

    ``faces`` is ``None`` (every monomial allowed) or a collection of
    support bitmasks that are allowed to carry nonzero coefficients.
    """

    def __init__(self, labels: Iterable[str], N: int, params: ParamSpec = ZZ, faces=None):
        self.labels = tuple(labels)
        if len(set(self.labels)) != len(self.labels):
            raise DomainError(f"variable labels must be distinct: {self.labels}")
        if N < 0:
            raise DomainError("truncation degree must be nonnegative")
        self.N = int(N)
        self.params = params
        self.faces = None if faces is None else frozenset(faces)
        self._allowed = {}
        self._key = (self.labels, self.N, self.params, self.faces)

    @property
    def nvars(self) -> int:
        return len(self.labels)

    def __eq__(self, other):
        return isinstance(other, SeriesRing) and self._key == other._key

    def __hash__(self):
        return hash(self._key)

    def __repr__(self):
        kind = "SR" if self.faces is not None else "free"
        return f"SeriesRing({kind}, vars={list(self.labels)}, N={self.N}, R={self.params})"

    def allows(self, mono) -> bool:
        ok = self._allowed.get(mono)
        if ok is None:
            ok = sum(mono) <= self.N and (self.faces is None or support_mask(mono) in self.faces)
            self._allowed[mono] = ok
        return ok

    def index(self, label) -> int:
        if isinstance(label, int):
            if not 0 <= label < self.nvars:
                raise DomainError(f"variable index {label} out of range")
            return label
        try:
            return self.labels.index(label)
        except ValueError:
            raise DomainError(f"unknown variable {label!r}") from None

    # -- constructors ---------------------------------------------------
    def zero(self) -> "Series":
        return Series(self, {})

    def one(self) -> "Series":
        return self.const(1)

    def const(self, c) -> "Series":
        c = self.params.coerce(c)
        return Series(self, {(0,) * self.nvars: c} if c else {})

    def gen(self, label) -> "Series":
        i = self.index(label)
        m = [0] * self.nvars
        m[i] = 1
        return self.monomial(tuple(m))

    def gens(self) -> list:
        return [self.gen(i) for i in range(self.nvars)]

    def monomial(self, mono, coeff=1) -> "Series":
        mono = tuple(mono)
        if len(mono) != self.nvars or any(e < 0 for e in mono):
            raise DomainError(f"bad exponent vector {mono}")
        c = self.params.coerce(coeff)
        if not c or not self.allows(mono):
            return self.zero()
        return Series(self, {mono: c})

    def from_terms(self, terms: Mapping) -> "Series":
        """Build an element, dropping monomials the ring identifies with 0."""
        out = {}
        for mono, c in terms.items():
            mono = tuple(mono)
            if len(mono) != self.nvars:
                raise StructuralError(f"exponent vector {mono} has wrong length")
            c = self.params.coerce(c)
            if c and self.allows(mono):
                s = out[mono] + c if mono in out else c
                if s:
                    out[mono] = s
                else:
                    del out[mono]
        return Series(self, out)

    def with_params(self, params: ParamSpec) -> "SeriesRing":
        return SeriesRing(self.labels, self.N, params, self.faces)

    def with_truncation(self, N: int) -> "SeriesRing":
        return SeriesRing(self.labels, N, self.params, self.faces)

    def basis_monomials(self, degree: int = None) -> list:
        """Admissible monomials of degree <= ``degree`` (default ``N``)."""
        degree = self.N if degree is None else min(degree, self.N)
        return [m for m in monomials_up_to(self.nvars, degree) if self.allows(m)]


class Series:
    """Immutable element of a :class:`SeriesRing`."""

    __slots__ = ("ring", "_terms")

    def __init__(self, ring: SeriesRing, terms: dict):
        # trusted constructor: terms are already admissible and nonzero
        self.ring = ring
        self._terms = terms

    # -- access ---------------------------------------------------------
    def items(self):
        return self._terms.items()

    @property
    def terms(self) -> tuple:
        """Terms in graded lexicographic order."""
        return tuple(sorted(self._terms.items(), key=lambda t: (sum(t[0]), tuple(-e for e in t[0]))))

    def coefficient(self, mono) -> CoeffElem:
        return self._terms.get(tuple(mono), self.ring.params.zero())

    def constant_term(self) -> CoeffElem:
        return self.coefficient((0,) * self.ring.nvars)

    def order(self):
        """Lowest total degree present, ``None`` for zero."""
        if not self._terms:
            return None
        return min(sum(m) for m in self._terms)

    def degree(self):
        if not self._terms:
            return None
        return max(sum(m) for m in self._terms)

    def is_zero(self) -> bool:
        return not self._terms

    def __bool__(self):
        return bool(self._terms)

    def __len__(self):
        return len(self._terms)

    # -- arithmetic -----------------------------------------------------
    def _check(self, other):
        if other.ring != self.ring:
            raise StructuralError(f"mismatched rings {self.ring!r} and {other.ring!r}")

    def _lift(self, other):
        if isinstance(other, Series):
            self._check(other)
            return other
        if isinstance(other, (int, CoeffElem)):
            return self.ring.const(other)
        return None

    def __add__(self, other):
        other = self._lift(other)
        if other is None:
            return NotImplemented
        out = dict(self._terms)
        for m, c in other._terms.items():
            if m in out:
                s = out[m] + c
                if s:
                    out[m] = s
                else:
                    del out[m]
            else:
                out[m] = c
        return Series(self.ring, out)

    __radd__ = __add__

    def __neg__(self):
        return Series(self.ring, {m: -c for m, c in self._terms.items()})

    def __sub__(self, other):
        other = self._lift(other)
        if other is None:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        other = self._lift(other)
        if other is None:
            return NotImplemented
        return other + (-self)

    def scale(self, c) -> "Series":
        c = self.ring.params.coerce(c)
        if not c:
            return self.ring.zero()
        out = {}
        for m, a in self._terms.items():
            p = a * c
            if p:
                out[m] = p
        return Series(self.ring, out)

    def __mul__(self, other):
        if isinstance(other, (int, CoeffElem)):
            return self.scale(other)
        if not isinstance(other, Series):
            return NotImplemented
        self._check(other)
        ring = self.ring
        N = ring.N
        allows = ring.allows
        left = [(m, sum(m), c) for m, c in self._terms.items()]
        right = sorted(((m, sum(m), c) for m, c in other._terms.items()), key=lambda t: t[1])
        out = {}
        for m1, d1, c1 in left:
            budget = N - d1
            for m2, d2, c2 in right:
                if d2 > budget:
                    break
                m = tuple([a + b for a, b in zip(m1, m2)])
                if not allows(m):
                    continue
                p = c1 * c2
                if m in out:
                    s = out[m] + p
                    if s:
                        out[m] = s
                    else:
                        del out[m]
                elif p:
                    out[m] = p
        return Series(ring, out)

    def __rmul__(self, other):
        if isinstance(other, (int, CoeffElem)):
            return self.scale(other)
        return NotImplemented

    def __pow__(self, n: int):
        if n < 0:
            raise DomainError("negative powers are not supported")
        result = self.ring.one()
        base = self
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    def mul_monomial(self, mono, coeff=1) -> "Series":
        """Multiply by ``coeff * x^mono`` without building a Series for it."""
        ring = self.ring
        c = ring.params.coerce(coeff)
        out = {}
        for m, a in self._terms.items():
            new = tuple([x + y for x, y in zip(m, mono)])
            if ring.allows(new):
                p = a * c
                if p:
                    out[new] = p
        return Series(ring, out)

    def __eq__(self, other):
        if isinstance(other, (int, CoeffElem)):
            other = self.ring.const(other)
        if not isinstance(other, Series):
            return NotImplemented
        return self.ring == other.ring and self._terms == other._terms

    def __hash__(self):
        return hash((self.ring, frozenset(self._terms.items())))

    # -- structural maps ------------------------------------------------
    def truncate(self, degree: int) -> "Series":
        return Series(self.ring, {m: c for m, c in self._terms.items() if sum(m) <= degree})

    def homogeneous_part(self, degree: int) -> "Series":
        return Series(self.ring, {m: c for m, c in self._terms.items() if sum(m) == degree})

    def keep_support(self, mask: int) -> "Series":
        """Set every variable outside ``mask`` to zero."""
        return Series(
            self.ring, {m: c for m, c in self._terms.items() if support_mask(m) & ~mask == 0}
        )

    def map_coefficients(self, fn, ring: SeriesRing) -> "Series":
        if ring.labels != self.ring.labels:
            raise StructuralError("map_coefficients keeps the variables; use substitute")
        return ring.from_terms({m: fn(c) for m, c in self._terms.items()})

    def specialize(self, assignment: Mapping, target: ParamSpec = None) -> "Series":
        """Apply a coefficient specialization termwise."""
        from .coefficients import _infer_target

        target = _infer_target(assignment, target)
        ring = self.ring.with_params(target)
        return self.map_coefficients(lambda c: c.specialize(assignment, target), ring)

    def into(self, ring: SeriesRing) -> "Series":
        """Reinterpret the same terms in a ring with the same variables."""
        if ring.nvars != self.ring.nvars or ring.params != self.ring.params:
            raise StructuralError("target ring has different variables or coefficients")
        return ring.from_terms(self._terms)

    def substitute(self, images: Sequence["Series"], target: SeriesRing = None) -> "Series":
        """Evaluate at ``x_i -> images[i]``; images must have zero constant term
        unless the series is a polynomial."""
        if len(images) != self.ring.nvars:
            raise StructuralError("need one image per variable")
        if target is None:
            target = images[0].ring if images else self.ring
        for img in images:
            if img.ring != target:
                raise StructuralError("all images must live in the target ring")
        orders = [img.order() for img in images]
        powers = [{0: target.one()} for _ in images]

        def power(i, e):
            cache = powers[i]
            if e not in cache:
                k = max(cache)
                acc = cache[k]
                while k < e:
                    acc = acc * images[i]
                    k += 1
                    cache[k] = acc
            return cache[e]

        out = target.zero()
        for mono, c in self._terms.items():
            est = 0
            dead = False
            for i, e in enumerate(mono):
                if e:
                    if orders[i] is None:
                        dead = True
                        break
                    est += orders[i] * e
            if dead or est > target.N:
                continue
            term = None
            for i, e in enumerate(mono):
                if e:
                    p = power(i, e)
                    term = p if term is None else term * p
                    if not term:
                        break
            if term is None:
                term = target.one()
            if term:
                out = out + term.scale(c)
        return out

    # -- display / serialization ----------------------------------------
    def __repr__(self):
        return str(self)

    def __str__(self):
        if not self._terms:
            return "0"
        parts = []
        for m, c in self.terms:
            mono = "*".join(
                lab if e == 1 else f"{lab}^{e}" for lab, e in zip(self.ring.labels, m) if e
            )
            cs = str(c)
            if not mono:
                parts.append(cs)
            elif cs == "1":
                parts.append(mono)
            elif cs == "-1":
                parts.append("-" + mono)
            elif len(c._terms) == 1:
                parts.append(f"{cs}*{mono}")
            else:
                parts.append(f"({cs})*{mono}")
        out = parts[0]
        for p in parts[1:]:
            out += " - " + p[1:] if p.startswith("-") else " + " + p
        return out

    def to_json(self) -> list:
        return [
            {
                "monomial": {lab: e for lab, e in zip(self.ring.labels, m) if e},
                "coeff": c.to_json(),
            }
            for m, c in self.terms
        ]

    @classmethod
    def from_json(cls, data, ring: SeriesRing) -> "Series":
        terms = {}
        for entry in data:
            m = [0] * ring.nvars
            for lab, e in entry.get("monomial", {}).items():
                m[ring.index(lab)] = int(e)
            key = tuple(m)
            c = CoeffElem.from_json(entry["coeff"], ring.params)
            terms[key] = terms[key] + c if key in terms else c
        return ring.from_terms(terms)
