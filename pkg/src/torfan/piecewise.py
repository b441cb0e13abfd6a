"""Piecewise polynomial and piecewise exponential functions on a fan.

A function is stored as one piece per maximal cone ``tau``, written in the
coordinates dual to the rays of ``tau``: a point ``p = sum c_rho v_rho`` of
``tau`` has coordinate ``c_rho = <alpha_{tau,rho}, p>``.

* polynomial mode: an integer polynomial in ``a_rho`` (standing for ``c_rho``);
* exponential mode: an integer Laurent polynomial in ``t_rho = e^{c_rho}``.

Pieces are ``CoeffElem`` values over a per-cone ``ParamSpec``, so exact
arithmetic and restriction come for free.  ``to_piecewise`` realizes the
ring maps ``x_rho -> phi_rho`` (additive law) and ``x_rho -> 1 - e^{phi_rho}``
(multiplicative law with ``v = 1``) from the Stanley-Reisner model.
"""

from __future__ import annotations

import itertools
from math import comb

from .coefficients import ZZ, CoeffElem, ParamSpec
from .errors import DomainError, StructuralError, UnsupportedError
from .fan import Fan, dual_basis, pairing
from .fgl import FormalGroupLaw
from .lattice import rank
from .series import Series

__all__ = [
    "PiecewiseFunc",
    "courant_function",
    "to_piecewise",
    "pw_check_eval",
    "cone_params",
    "locate",
    "to_u_coordinates",
    "injectivity_rank",
]

MODES = ("polynomial", "exponential")


def _coord(mode: str, label: str) -> str:
    return ("a_" if mode == "polynomial" else "t_") + label


def cone_params(fan: Fan, cone, mode: str) -> ParamSpec:
    names = tuple(_coord(mode, fan.labels[i]) for i in cone)
    inv = frozenset(names) if mode == "exponential" else frozenset()
    return ParamSpec(names, inv)


def to_u_coordinates(piece: CoeffElem, N: int) -> CoeffElem:
    """Rewrite an exponential piece with ``t = 1 - u`` and drop ``u``-degree > N."""
    names = tuple("u_" + n[2:] for n in piece.spec.names)
    spec = ParamSpec(names)
    k = len(names)
    out = {}
    for exps, c in piece.terms:
        acc = {(0,) * k: c}
        for i, e in enumerate(exps):
            # (1 - u)^e as a power series, e may be negative
            series = [
                (-1) ** j * comb(e, j) if e >= 0 else comb(-e + j - 1, j)
                for j in range(N + 1)
            ]
            nxt = {}
            for m, a in acc.items():
                room = N - sum(m)
                for j in range(room + 1):
                    if series[j]:
                        mm = m[:i] + (m[i] + j,) + m[i + 1:]
                        nxt[mm] = nxt.get(mm, 0) + a * series[j]
            acc = nxt
        for m, a in acc.items():
            out[m] = out.get(m, 0) + a
    return CoeffElem(spec, {m: a for m, a in out.items() if a})


def _truncate_poly(piece: CoeffElem, N: int) -> CoeffElem:
    return CoeffElem(piece.spec, {m: c for m, c in piece.terms if sum(m) <= N})


class PiecewiseFunc:
    """A function on the support of ``fan``, one piece per maximal cone.

    ``N`` records the truncation of the element it came from; equality of
    functions is compared in degrees ``<= N`` (in ``u = 1 - t`` for
    exponential pieces), ``None`` meaning exact.
    """

    def __init__(self, fan: Fan, mode: str, pieces: dict, N: int = None):
        if mode not in MODES:
            raise ValueError(f"mode must be one of {MODES}")
        if set(pieces) != set(fan.max_cones):
            raise DomainError("need exactly one piece per maximal cone")
        for tau, p in pieces.items():
            if p.spec != cone_params(fan, tau, mode):
                raise StructuralError(f"piece on {fan.cone_name(tau)} uses the wrong coordinates")
        self.fan = fan
        self.mode = mode
        self.pieces = dict(pieces)
        self.N = N

    def piece(self, tau) -> CoeffElem:
        return self.pieces[self.fan.cone(tau)]

    # -- arithmetic -----------------------------------------------------
    def _combine(self, other, op):
        if not isinstance(other, PiecewiseFunc):
            return NotImplemented
        if other.fan != self.fan or other.mode != self.mode:
            raise StructuralError("piecewise functions on different fans or modes")
        N = _min_none(self.N, other.N)
        return PiecewiseFunc(
            self.fan, self.mode, {t: op(p, other.pieces[t]) for t, p in self.pieces.items()}, N
        )

    def __add__(self, other):
        return self._combine(other, lambda a, b: a + b)

    def __sub__(self, other):
        return self._combine(other, lambda a, b: a - b)

    def __mul__(self, other):
        return self._combine(other, lambda a, b: a * b)

    def canonical(self, tau) -> CoeffElem:
        p = self.pieces[tau]
        if self.N is None:
            return p
        if self.mode == "exponential":
            return to_u_coordinates(p, self.N)
        return _truncate_poly(p, self.N)

    def __eq__(self, other):
        if not isinstance(other, PiecewiseFunc):
            return NotImplemented
        if other.fan != self.fan or other.mode != self.mode:
            return False
        N = _min_none(self.N, other.N)
        a = PiecewiseFunc(self.fan, self.mode, self.pieces, N)
        b = PiecewiseFunc(self.fan, self.mode, other.pieces, N)
        return all(a.canonical(t) == b.canonical(t) for t in self.pieces)

    __hash__ = None

    # -- restriction and compatibility ----------------------------------
    def restrict(self, tau, face) -> CoeffElem:
        """The piece on ``tau`` restricted to its face ``face``."""
        fan = self.fan
        tau = fan.cone(tau)
        face = tuple(sorted(face))
        if not set(face) <= set(tau):
            raise DomainError(f"{fan.cone_name(face)} is not a face of {fan.cone_name(tau)}")
        target = cone_params(fan, face, self.mode)
        drop = 0 if self.mode == "polynomial" else 1
        assignment = {
            _coord(self.mode, fan.labels[i]): (target.gen(_coord(self.mode, fan.labels[i]))
                                               if i in face else target.const(drop))
            for i in tau
        }
        p = self.pieces[tau].specialize(assignment, target)
        if self.N is None:
            return p
        if self.mode == "exponential":
            return to_u_coordinates(p, self.N)
        return _truncate_poly(p, self.N)

    def compatibility_failures(self) -> list:
        """Pairs of maximal cones whose pieces disagree on the common face."""
        bad = []
        cones = list(self.fan.max_cones)
        for i, a in enumerate(cones):
            for b in cones[i + 1:]:
                face = tuple(sorted(set(a) & set(b)))
                if self.restrict(a, face) != self.restrict(b, face):
                    bad.append((a, b))
        return bad

    def is_compatible(self) -> bool:
        return not self.compatibility_failures()

    # -- evaluation -----------------------------------------------------
    def __call__(self, point) -> CoeffElem:
        if self.mode != "polynomial":
            raise UnsupportedError("only piecewise polynomials take integer values at points")
        tau, coords = locate(self.fan, point)
        p = self.pieces[tau]
        return p.specialize({n: ZZ.const(c) for n, c in zip(p.spec.names, coords)}, ZZ)

    def __str__(self):
        head = f"piecewise {self.mode} function on {len(self.pieces)} maximal cones"
        if self.N is not None:
            head += f" (degree <= {self.N})"
        lines = [head]
        for tau in self.fan.max_cones:
            lines.append(f"  {self.fan.cone_name(tau)}: {self.pieces[tau]}")
        return "\n".join(lines)

    def __repr__(self):
        return f"<PiecewiseFunc {self.mode} on {len(self.pieces)} cones>"


def locate(fan: Fan, point) -> tuple:
    """A full-dimensional cone containing ``point`` and its coordinates there."""
    point = tuple(point)
    if len(point) != fan.n:
        raise DomainError(f"point {point} has the wrong rank")
    for tau in fan.full_dimensional_cones():
        duals = dual_basis(fan, tau)
        coords = [pairing(duals[r], point) for r in tau]
        if min(coords, default=0) >= 0:
            return tau, coords
    raise DomainError(f"point {point} is outside the support of the fan")


def _min_none(a, b):
    if a is None:
        return b
    if b is None:
        return a
    return min(a, b)


def courant_function(fan: Fan, rho) -> PiecewiseFunc:
    """The piecewise linear ``phi_rho``: 1 at ``v_rho``, 0 at the other rays."""
    rho = rho if isinstance(rho, int) else fan.ray_index(rho)
    pieces = {}
    for tau in fan.max_cones:
        spec = cone_params(fan, tau, "polynomial")
        pieces[tau] = spec.gen(_coord("polynomial", fan.labels[rho])) if rho in tau else spec.zero()
    return PiecewiseFunc(fan, "polynomial", pieces)


def _check_law(mode: str, F: FormalGroupLaw):
    v = F.multiplicative_parameter
    if F.params.names:
        raise DomainError("piecewise functions need integer coefficients; specialize first")
    if mode == "polynomial" and v != 0:
        raise DomainError("polynomial mode needs the additive law")
    if mode == "exponential" and v != 1:
        raise DomainError("exponential mode needs the multiplicative law with v = 1")


def to_piecewise(f: Series, mode: str, F: FormalGroupLaw) -> PiecewiseFunc:
    """Image of an element of the Stanley-Reisner model of ``fan``."""
    if mode not in MODES:
        raise ValueError(f"mode must be one of {MODES}")
    _check_law(mode, F)
    fan = f.ring.fan
    if f.ring.params.names:
        raise DomainError("piecewise functions need integer coefficients; specialize first")
    pieces = {}
    for tau in fan.max_cones:
        spec = cone_params(fan, tau, mode)
        images = {}
        for i in tau:
            g = spec.gen(_coord(mode, fan.labels[i]))
            images[i] = g if mode == "polynomial" else spec.one() - g
        mask = sum(1 << i for i in tau)
        acc = spec.zero()
        for mono, c in f.items():
            if any(e and not mask >> i & 1 for i, e in enumerate(mono)):
                continue
            term = spec.const(c.as_int())
            for i, e in enumerate(mono):
                if e:
                    term = term * images[i] ** e
            acc = acc + term
        pieces[tau] = acc
    return PiecewiseFunc(fan, mode, pieces, f.ring.N)


def pw_check_eval(pf: PiecewiseFunc, point) -> CoeffElem:
    """Value at a lattice point, after checking the pieces are compatible."""
    bad = pf.compatibility_failures()
    if bad:
        a, b = bad[0]
        raise DomainError(
            f"pieces on {pf.fan.cone_name(a)} and {pf.fan.cone_name(b)} disagree"
        )
    return pf(point)


def injectivity_rank(fan: Fan, degree: int = 3, radius: int = 3):
    """Rank of the evaluation matrix of face monomials of degree ``<= degree``
    mapped to piecewise polynomials, evaluated on the lattice points of the
    box ``[-radius, radius]^n`` inside the support.  Returns ``(rank, count)``;
    the images are independent exactly when the two agree."""
    from .sralgebra import SRRing

    ring = SRRing(fan, max(degree, 1))
    F = FormalGroupLaw.additive(ring.N)
    monos = ring.basis_monomials(degree)
    points = []
    for p in itertools.product(range(-radius, radius + 1), repeat=fan.n):
        try:
            locate(fan, p)
        except DomainError:
            continue
        points.append(p)
    rows = []
    for m in monos:
        pf = to_piecewise(ring.monomial(m), "polynomial", F)
        rows.append([pf(p).as_int() for p in points])
    return rank(rows), len(monos)
