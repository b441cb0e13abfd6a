"""Formal group rings of smooth toric varieties.

The equivariant model is ``R[[x_rho : rho in Sigma(1)]] / I_Sigma`` where
``I_Sigma`` is generated by the square-free monomials over non-faces.  A
monomial lies in ``I_Sigma`` exactly when its support is not a face, so an
element is stored as its face-supported terms only (:class:`SRRing`).

Besides ring arithmetic this module provides restriction to cones, gluing
of compatible per-cone data, the action of characters, the passage to the
ordinary (non-equivariant) model by eliminating the variables of one
full-dimensional cone, and exact ideal-membership / rank computations in
truncated quotients over ``Z``.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Mapping

from .coefficients import ZZ, CoeffElem, ParamSpec
from .errors import DomainError, IncompatibleTupleError, StructuralError, UnsupportedError
from .fan import Fan, dual_basis, minimal_nonfaces, pairing
from .fgl import DEFAULT_N, FormalGroupLaw
from .lattice import HermiteLattice
from .series import Series, SeriesRing, monomials_up_to, support_mask

__all__ = [
    "SRRing",
    "SRSeries",
    "Presentation",
    "OrdinaryModel",
    "TruncatedQuotient",
    "sr_normalize",
    "sr_arith",
    "restrict_to_cone",
    "check_compatible",
    "glue_tuple",
    "character_class",
    "equivariant_presentation",
    "ordinary_eliminate",
    "ordinary_presentation",
    "ideal_membership",
    "graded_rank",
    "random_coefficient",
    "random_series",
]

SRSeries = Series


class SRRing(SeriesRing):
    """``params[[x_rho]] / I_Sigma`` truncated above degree ``N``."""

    def __init__(self, fan: Fan, N: int = DEFAULT_N, params: ParamSpec = ZZ):
        super().__init__(fan.labels, N, params, fan.face_masks)
        self.fan = fan

    def with_params(self, params):
        return SRRing(self.fan, self.N, params)

    def with_truncation(self, N):
        return SRRing(self.fan, N, self.params)

    def cone_mask(self, cone) -> int:
        return sum(1 << i for i in cone)


def sr_normalize(terms: Mapping, fan: Fan, N: int = DEFAULT_N, params: ParamSpec = ZZ) -> Series:
    """Drop non-face and over-degree monomials from raw ``{exps: coeff}``."""
    return SRRing(fan, N, params).from_terms(terms)


def sr_arith(a: Series, b: Series, kind: str) -> Series:
    if a.ring != b.ring:
        raise StructuralError("operands live in different Stanley-Reisner rings")
    if kind == "add":
        return a + b
    if kind == "mul":
        return a * b
    raise ValueError(f"unknown operation {kind!r}")


def restrict_to_cone(f: Series, cone) -> Series:
    """Set ``x_rho = 0`` for every ray outside ``cone``."""
    fan = f.ring.fan
    cone = fan.cone(cone)
    return f.keep_support(sum(1 << i for i in cone))


def _restrict_mask(f: Series, mask: int) -> Series:
    return f.keep_support(mask)


def check_compatible(tuple_: Mapping) -> None:
    """Raise :class:`IncompatibleTupleError` at the first disagreeing pair."""
    cones = list(tuple_)
    for i, a in enumerate(cones):
        for b in cones[i + 1:]:
            common = sum(1 << r for r in set(a) & set(b))
            fa = _restrict_mask(tuple_[a], common)
            fb = _restrict_mask(tuple_[b], common)
            if fa != fb:
                diff = fa - fb
                raise IncompatibleTupleError((a, b), diff.terms[0][0])


def glue_tuple(tuple_: Mapping, ring: SRRing = None) -> Series:
    """Glue per-maximal-cone series into a global element.

    ``tuple_`` maps each maximal cone to a series supported on it.  The
    result is the inclusion-exclusion sum over nonempty sets ``J`` of
    maximal cones of ``(-1)^(|J|+1)`` times the common restriction to the
    intersection of ``J``.
    """
    if ring is None:
        ring = next(iter(tuple_.values())).ring
    fan = ring.fan
    cones = list(fan.max_cones)
    if set(tuple_) != set(cones):
        raise DomainError("the tuple must have exactly one entry per maximal cone")
    for tau in cones:
        f = tuple_[tau]
        if f.ring != ring:
            raise StructuralError("tuple entries must live in one Stanley-Reisner ring")
        mask = sum(1 << i for i in tau)
        if any(support_mask(m) & ~mask for m, _ in f.items()):
            raise DomainError(f"entry for {fan.cone_name(tau)} is not supported on that cone")
    check_compatible({tau: tuple_[tau] for tau in cones})
    d = len(cones)
    if d > 20:
        raise UnsupportedError("inclusion-exclusion over more than 20 maximal cones")
    masks = [sum(1 << i for i in tau) for tau in cones]
    full = (1 << fan.nrays) - 1
    # weight of each intersection: sum of (-1)^(|J|+1) over J with that meet
    weights = {}
    first = {}
    for J in range(1, 1 << d):
        meet = full
        lowest = None
        for k in range(d):
            if J >> k & 1:
                meet &= masks[k]
                if lowest is None:
                    lowest = k
        sign = 1 if bin(J).count("1") % 2 else -1
        weights[meet] = weights.get(meet, 0) + sign
        first.setdefault(meet, lowest)
    out = ring.zero()
    for meet, w in sorted(weights.items()):
        if w:
            out = out + _restrict_mask(tuple_[cones[first[meet]]], meet).scale(w)
    return out


def restriction_tuple(f: Series) -> dict:
    """``{tau: f|tau}`` over the maximal cones: the image of ``f`` under
    the product of the cone projections."""
    return {tau: restrict_to_cone(f, tau) for tau in f.ring.fan.max_cones}


def character_class(where, F: FormalGroupLaw, alpha, free: bool = False) -> Series:
    """Image of ``x_alpha``: the formal sum of ``<alpha, v_rho> ._F x_rho``.

    With ``free=True`` the sum is formed in the power series ring on the
    rays without the Stanley-Reisner relations (a canonical lift).
    """
    ring = where if isinstance(where, SRRing) else SRRing(where, F.N, F.params)
    fan = ring.fan
    if free:
        ring = SeriesRing(fan.labels, ring.N, ring.params)
    if len(alpha) != fan.n:
        raise DomainError(f"character {alpha} has wrong rank for the fan")
    out = ring.zero()
    for i, v in enumerate(fan.rays):
        k = pairing(alpha, v)
        if k:
            out = F.formal_sum(out, F.int_multiple(k, ring.gen(i)))
    return out


# -- presentations -----------------------------------------------------------


@dataclass
class Presentation:
    """Variables and relation generators of a truncated quotient ring."""

    variables: tuple
    relations: list
    params: ParamSpec
    N: int
    notes: dict = field(default_factory=dict)

    @property
    def ring(self) -> SeriesRing:
        return SeriesRing(self.variables, self.N, self.params)

    def specialize(self, assignment: Mapping, target: ParamSpec = None) -> "Presentation":
        from .coefficients import _infer_target

        target = _infer_target(assignment, target)
        rels = [r.specialize(assignment, target) for r in self.relations]
        notes = dict(self.notes)
        notes["specialized"] = {k: str(v) for k, v in assignment.items()}
        return Presentation(self.variables, rels, target, self.N, notes)

    def render(self) -> str:
        lines = [f"variables ({len(self.variables)}): " + ", ".join(self.variables)]
        lines.append(f"relations ({len(self.relations)}):")
        lines += [f"  {r}" for r in self.relations]
        return "\n".join(lines)

    def to_json(self) -> dict:
        return {
            "variables": list(self.variables),
            "params": list(self.params.names),
            "invertible": sorted(self.params.invertible),
            "N": self.N,
            "relations": [r.to_json() for r in self.relations],
            "notes": self.notes,
        }


def equivariant_presentation(fan: Fan, F: FormalGroupLaw = None, N: int = None) -> Presentation:
    """Rays as variables, minimal non-face monomials as relations."""
    params = F.params if F is not None else ZZ
    N = N if N is not None else (F.N if F is not None else DEFAULT_N)
    free = SeriesRing(fan.labels, N, params)
    rels = []
    for S in minimal_nonfaces(fan):
        m = [0] * fan.nrays
        for i in S:
            m[i] = 1
        rels.append(free.monomial(tuple(m)))
    return Presentation(fan.labels, rels, params, N)


class OrdinaryModel:
    """Elimination of the variables of a full-dimensional cone ``tau``.

    Modulo the character relations, ``x_rho`` for ``rho`` in ``tau`` equals
    ``chi`` of the formal sum of ``<alpha_{tau,rho}, v_rho'> ._F x_rho'``
    over the remaining rays; substituting these images identifies the
    ordinary model with a quotient of the power series ring in the
    remaining variables.
    """

    def __init__(self, fan: Fan, F: FormalGroupLaw, tau=None, N: int = None):
        full = fan.full_dimensional_cones()
        if not full:
            raise UnsupportedError("the ordinary model needs a full-dimensional cone")
        tau = full[0] if tau is None else fan.cone(tau)
        if len(tau) != fan.n:
            raise DomainError(f"{fan.cone_name(tau)} is not full-dimensional")
        self.fan = fan
        self.F = F
        self.tau = tau
        self.N = F.N if N is None else N
        if self.N > F.N:
            raise StructuralError("formal group law is truncated below the model")
        self.source = SRRing(fan, self.N, F.params)
        self.free_source = SeriesRing(fan.labels, self.N, F.params)
        self.others = [i for i in range(fan.nrays) if i not in tau]
        pos = {r: k for k, r in enumerate(self.others)}
        faces = set()
        for face in fan.faces:
            if not face & set(tau):
                faces.add(sum(1 << pos[r] for r in face))
        labels = [fan.labels[i] for i in self.others]
        self.ring = SeriesRing(labels, self.N, F.params, faces)
        self.free = SeriesRing(labels, self.N, F.params)
        duals = dual_basis(fan, tau)
        images = [None] * fan.nrays
        for r in self.others:
            images[r] = self.ring.gen(pos[r])
        for rho in tau:
            acc = self.ring.zero()
            for r in self.others:
                k = pairing(duals[rho], fan.rays[r])
                if k:
                    acc = F.formal_sum(acc, F.int_multiple(k, images[r]))
            images[rho] = F.formal_inverse(acc)
        self.images = images

    def eliminate(self, f: Series) -> Series:
        """Image of ``f`` in the ordinary model.

        ``f`` may live in the Stanley-Reisner ring or in the free power
        series ring on the rays.  On the former the result is determined
        only modulo the relations of :meth:`presentation`, since non-face
        monomials have already been discarded.
        """
        if f.ring not in (self.source, self.free_source):
            raise StructuralError("element does not belong to this model's source ring")
        return f.substitute(self.images, self.ring)

    def presentation(self) -> Presentation:
        lifted = [img.into(self.free) for img in self.images]
        rels = []
        for S in minimal_nonfaces(self.fan):
            r = self.free.one()
            for i in S:
                r = r * lifted[i]
            rels.append(r)
        notes = {"eliminated_cone": self.fan.cone_name(self.tau)}
        return Presentation(self.free.labels, rels, self.F.params, self.N, notes)


def ordinary_eliminate(f: Series, tau, F: FormalGroupLaw) -> Series:
    return OrdinaryModel(f.ring.fan, F, tau, f.ring.N).eliminate(f)


def ordinary_presentation(fan: Fan, F: FormalGroupLaw, tau=None, N: int = None) -> Presentation:
    return OrdinaryModel(fan, F, tau, N).presentation()


# -- exact quotients over Z --------------------------------------------------


def _int_terms(f) -> list:
    out = []
    for m, c in (f.items() if isinstance(f, Series) else f):
        if not isinstance(c, int):
            if c.spec.names:
                raise UnsupportedError("parameters present: specialize to ZZ first")
            c = c.as_int()
        out.append((tuple(m), c))
    return out


class TruncatedQuotient:
    """``Z[x_1..x_k] / (relations + deg > N)`` as an explicit lattice.

    The ideal in degrees ``<= N`` is the Z-span of all ``g * m`` truncated
    at ``N``; it is stored in Hermite form so membership is exact.
    """

    def __init__(self, relations, N: int, nvars: int):
        self.N = N
        self.nvars = nvars
        self.monomials = monomials_up_to(nvars, N)
        self.index = {m: k for k, m in enumerate(self.monomials)}
        self.lattice = HermiteLattice()
        for g in relations:
            terms = [(m, c) for m, c in _int_terms(g) if sum(m) <= N]
            if not terms:
                continue
            if any(len(m) != nvars for m, _ in terms):
                raise StructuralError("relation has the wrong number of variables")
            low = min(sum(m) for m, _ in terms)
            for shift in self.monomials:
                if sum(shift) + low > N:
                    continue
                row = {}
                for m, c in terms:
                    mm = tuple(a + b for a, b in zip(m, shift))
                    if sum(mm) <= N:
                        row[self.index[mm]] = c
                self.lattice.add(row)

    @property
    def rank(self) -> int:
        """Rank of the quotient as an abelian group (torsion ignored)."""
        return len(self.monomials) - self.lattice.rank

    def vector(self, f) -> dict:
        vec = {}
        for m, c in _int_terms(f):
            if sum(m) <= self.N:
                vec[self.index[m]] = c
        return vec

    def contains(self, f) -> bool:
        return self.lattice.contains(self.vector(f))


@lru_cache(maxsize=64)
def _quotient(key, N, nvars):
    return TruncatedQuotient([list(k) for k in key], N, nvars)


def _freeze(relations) -> tuple:
    return tuple(tuple(sorted(_int_terms(g))) for g in relations)


def quotient(relations, N: int, nvars: int) -> TruncatedQuotient:
    return _quotient(_freeze(relations), N, nvars)


def ideal_membership(f, relations, N: int) -> bool:
    """Is ``f`` zero in ``Z[x] / (relations)`` truncated above degree ``N``?"""
    nvars = f.ring.nvars if isinstance(f, Series) else len(next(iter(f))[0])
    return quotient(relations, N, nvars).contains(f)


def graded_rank(presentation: Presentation, d: int) -> int:
    """Rank of the degree-``d`` graded piece of the truncated quotient."""
    if presentation.params.names:
        raise UnsupportedError("parameters present: specialize to ZZ first")
    if d < 0:
        return 0
    if d > presentation.N:
        raise DomainError(f"degree {d} exceeds the presentation's truncation {presentation.N}")
    k = len(presentation.variables)
    hi = quotient(presentation.relations, d, k).rank
    lo = quotient(presentation.relations, d - 1, k).rank if d else 0
    return hi - lo


# -- sampling ----------------------------------------------------------------


def random_coefficient(params: ParamSpec, rng: random.Random, bound: int = 3) -> CoeffElem:
    if not params.names:
        c = 0
        while not c:
            c = rng.randint(-bound, bound)
        return params.const(c)
    out = params.zero()
    while not out:
        for _ in range(rng.randint(1, 2)):
            exps = tuple(
                rng.randint(-1 if n in params.invertible else 0, 2) for n in params.names
            )
            out = out + CoeffElem(params, {exps: rng.randint(-bound, bound)})
    return out


def random_series(ring: SeriesRing, rng: random.Random, max_degree: int = 4, nterms: int = 6,
                  bound: int = 3, augmented: bool = False) -> Series:
    """Random element supported on admissible monomials of low degree."""
    monos = ring.basis_monomials(max_degree)
    if augmented:
        monos = [m for m in monos if sum(m)]
    picks = rng.sample(monos, min(nterms, len(monos)))
    return ring.from_terms({m: random_coefficient(ring.params, rng, bound) for m in picks})
