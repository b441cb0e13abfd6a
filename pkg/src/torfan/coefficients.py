"""Exact coefficient rings: integers extended by named (Laurent) parameters.

A :class:`ParamSpec` fixes the parameter names and which of them are
invertible; a :class:`CoeffElem` is an immutable element of
``Z[p_1, ..., p_k]`` with negative exponents allowed on invertible
parameters.  Typical rings are ``Z``, ``Z[v]``, ``Z[beta, beta^-1]`` and
``Z[u2]``.

>>> R = ParamSpec(("v",))
>>> v = R.gen("v")
>>> (1 - 2*v) * (1 + 2*v)
1 - 4*v^2
>>> (v**2 + v).specialize({"v": 2})
6
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Mapping, Union

from .errors import DomainError, StructuralError

__all__ = [
    "ParamSpec",
    "CoeffElem",
    "ZZ",
    "coeff_arith",
    "coeff_is_unit",
    "coeff_specialize",
]


@dataclass(frozen=True)
class ParamSpec:
    names: tuple = ()
    invertible: frozenset = field(default_factory=frozenset)

    def __post_init__(self):
        object.__setattr__(self, "names", tuple(self.names))
        object.__setattr__(self, "invertible", frozenset(self.invertible))
        if len(set(self.names)) != len(self.names):
            raise DomainError(f"parameter names must be distinct: {self.names}")
        extra = self.invertible - set(self.names)
        if extra:
            raise DomainError(f"invertible parameters not declared: {sorted(extra)}")

    def __len__(self):
        return len(self.names)

    def index(self, name: str) -> int:
        try:
            return self.names.index(name)
        except ValueError:
            raise DomainError(f"unknown parameter {name!r}") from None

    @property
    def _unit_exps(self):
        return (0,) * len(self.names)

    def zero(self) -> "CoeffElem":
        return CoeffElem._raw(self, {})

    def one(self) -> "CoeffElem":
        return CoeffElem._raw(self, {self._unit_exps: 1})

    def const(self, n: int) -> "CoeffElem":
        n = int(n)
        return CoeffElem._raw(self, {self._unit_exps: n} if n else {})

    def gen(self, name: str, power: int = 1) -> "CoeffElem":
        i = self.index(name)
        exps = [0] * len(self.names)
        exps[i] = power
        return CoeffElem(self, {tuple(exps): 1})

    def coerce(self, x) -> "CoeffElem":
        if isinstance(x, CoeffElem):
            if x.spec != self:
                raise StructuralError(f"coefficient over {x.spec} used in ring over {self}")
            return x
        if isinstance(x, int):
            return self.const(x)
        raise StructuralError(f"cannot coerce {type(x).__name__} into coefficient ring")

    def __str__(self):
        if not self.names:
            return "ZZ"
        gens = ", ".join(
            f"{n}, {n}^-1" if n in self.invertible else n for n in self.names
        )
        return f"ZZ[{gens}]"


ZZ = ParamSpec()


class CoeffElem:
    """Immutable element of a :class:`ParamSpec` ring.

    ``terms`` maps exponent vectors (one integer per parameter) to nonzero
    Python integers.
    """

    __slots__ = ("spec", "_terms", "_hash")

    def __init__(self, spec: ParamSpec, terms: Mapping = None):
        clean = {}
        k = len(spec.names)
        inv = [n in spec.invertible for n in spec.names]
        for exps, c in (terms or {}).items():
            exps = tuple(int(e) for e in exps)
            if len(exps) != k:
                raise StructuralError(f"exponent vector {exps} has wrong length for {spec}")
            for e, ok in zip(exps, inv):
                if e < 0 and not ok:
                    raise DomainError(f"negative exponent on non-invertible parameter in {exps}")
            c = int(c)
            if c:
                clean[exps] = clean.get(exps, 0) + c
                if not clean[exps]:
                    del clean[exps]
        self.spec = spec
        self._terms = clean
        self._hash = None

    @classmethod
    def _raw(cls, spec, terms):
        obj = cls.__new__(cls)
        obj.spec = spec
        obj._terms = terms
        obj._hash = None
        return obj

    # -- access ---------------------------------------------------------
    @property
    def terms(self):
        """Sorted ``(exponents, coefficient)`` pairs, lexicographic order."""
        return tuple(sorted(self._terms.items()))

    def is_zero(self) -> bool:
        return not self._terms

    def __bool__(self):
        return bool(self._terms)

    def is_constant(self) -> bool:
        return all(not any(e) for e in self._terms)

    def as_int(self) -> int:
        """The integer value of a constant element."""
        if not self._terms:
            return 0
        if not self.is_constant():
            raise DomainError(f"{self} is not an integer constant")
        return next(iter(self._terms.values()))

    # -- arithmetic -----------------------------------------------------
    def _other(self, other):
        if isinstance(other, CoeffElem):
            if other.spec != self.spec:
                raise StructuralError(f"mismatched coefficient rings {self.spec} and {other.spec}")
            return other
        if isinstance(other, int):
            return self.spec.const(other)
        return None

    def __add__(self, other):
        other = self._other(other)
        if other is None:
            return NotImplemented
        out = dict(self._terms)
        for e, c in other._terms.items():
            s = out.get(e, 0) + c
            if s:
                out[e] = s
            else:
                out.pop(e, None)
        return CoeffElem._raw(self.spec, out)

    __radd__ = __add__

    def __neg__(self):
        return CoeffElem._raw(self.spec, {e: -c for e, c in self._terms.items()})

    def __sub__(self, other):
        other = self._other(other)
        if other is None:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        other = self._other(other)
        if other is None:
            return NotImplemented
        return other + (-self)

    def __mul__(self, other):
        other = self._other(other)
        if other is None:
            return NotImplemented
        a, b = self._terms, other._terms
        if not a or not b:
            return CoeffElem._raw(self.spec, {})
        if not self.spec.names:
            return CoeffElem._raw(self.spec, {(): a[()] * b[()]})
        out = {}
        for e1, c1 in a.items():
            for e2, c2 in b.items():
                e = tuple(x + y for x, y in zip(e1, e2))
                s = out.get(e, 0) + c1 * c2
                if s:
                    out[e] = s
                else:
                    del out[e]
        return CoeffElem._raw(self.spec, out)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if n < 0:
            return self.inverse() ** (-n)
        result = self.spec.one()
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def __eq__(self, other):
        if isinstance(other, int):
            other = self.spec.const(other)
        if not isinstance(other, CoeffElem):
            return NotImplemented
        return self.spec == other.spec and self._terms == other._terms

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.spec, frozenset(self._terms.items())))
        return self._hash

    # -- units ----------------------------------------------------------
    def is_unit(self) -> bool:
        if len(self._terms) != 1:
            return False
        (exps, c), = self._terms.items()
        if c not in (1, -1):
            return False
        return all(e == 0 or n in self.spec.invertible for n, e in zip(self.spec.names, exps))

    def inverse(self) -> "CoeffElem":
        if not self.is_unit():
            raise DomainError(f"{self} is not a unit in {self.spec}")
        (exps, c), = self._terms.items()
        return CoeffElem._raw(self.spec, {tuple(-e for e in exps): c})

    # -- homomorphisms --------------------------------------------------
    def specialize(self, assignment: Mapping, target: ParamSpec = None) -> "CoeffElem":
        """Apply the ring map sending each parameter to ``assignment[name]``.

        Unassigned parameters map to the parameter of the same name in
        ``target``.  Invertible parameters must land on units.
        """
        target = _infer_target(assignment, target)
        images = []
        for name in self.spec.names:
            if name in assignment:
                img = target.coerce(assignment[name])
            elif name in target.names:
                img = target.gen(name)
            else:
                raise DomainError(f"parameter {name!r} is not assigned and absent from {target}")
            if name in self.spec.invertible and not img.is_unit():
                raise DomainError(f"invertible parameter {name!r} assigned non-unit {img}")
            images.append(img)
        result = target.zero()
        cache = {}
        for exps, c in self._terms.items():
            term = target.const(c)
            for i, e in enumerate(exps):
                if e:
                    key = (i, e)
                    if key not in cache:
                        cache[key] = images[i] ** e
                    term = term * cache[key]
            result = result + term
        return result

    # -- display / serialization ----------------------------------------
    def __repr__(self):
        return str(self)

    def __str__(self):
        if not self._terms:
            return "0"
        parts = []
        for exps, c in sorted(self._terms.items(), key=lambda t: (sum(t[0]), t[0])):
            mono = "*".join(
                n if e == 1 else f"{n}^{e}" for n, e in zip(self.spec.names, exps) if e
            )
            if not mono:
                parts.append(str(c))
            elif c == 1:
                parts.append(mono)
            elif c == -1:
                parts.append("-" + mono)
            else:
                parts.append(f"{c}*{mono}")
        out = parts[0]
        for p in parts[1:]:
            out += " - " + p[1:] if p.startswith("-") else " + " + p
        return out

    def to_json(self) -> dict:
        return {
            "terms": [
                {
                    "exps": {n: e for n, e in zip(self.spec.names, exps) if e},
                    "int": str(c),
                }
                for exps, c in self.terms
            ]
        }

    @classmethod
    def from_json(cls, data: Mapping, spec: ParamSpec) -> "CoeffElem":
        terms = {}
        for t in data.get("terms", []):
            exps = [0] * len(spec.names)
            for name, e in t.get("exps", {}).items():
                exps[spec.index(name)] = int(e)
            key = tuple(exps)
            terms[key] = terms.get(key, 0) + int(t["int"])
        return cls(spec, terms)


def _infer_target(assignment, target):
    if target is not None:
        return target
    for img in assignment.values():
        if isinstance(img, CoeffElem):
            return img.spec
    return ZZ


Coeff = Union[CoeffElem, int]


def coeff_arith(a: CoeffElem, b: CoeffElem, kind: str):
    """Dispatch ``add``, ``mul``, ``neg`` (of ``a``) or ``eq``."""
    if kind == "add":
        return a + b
    if kind == "mul":
        return a * b
    if kind == "neg":
        return -a
    if kind == "eq":
        if isinstance(b, CoeffElem) and a.spec != b.spec:
            raise StructuralError(f"mismatched coefficient rings {a.spec} and {b.spec}")
        return a == b
    raise ValueError(f"unknown operation {kind!r}")


def coeff_is_unit(a: CoeffElem) -> bool:
    return a.is_unit()


def coeff_specialize(a: CoeffElem, assignment: Mapping, target: ParamSpec = None) -> CoeffElem:
    return a.specialize(assignment, target)
