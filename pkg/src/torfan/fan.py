"""Smooth fans: combinatorics, duals, divisors, Picard groups, subdivision.

A :class:`Fan` is given by primitive ray generators in ``Z^n`` and its
maximal cones as sets of ray indices.  Smooth cones are simplicial, so
every subset of a maximal cone's rays spans a face and the face poset is
a simplicial complex on the rays.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations
from math import gcd

from .errors import DomainError
from .lattice import (
    SnfResult,
    integer_inverse,
    smith_normal_form,
    strictly_separable,
)

__all__ = [
    "Fan",
    "FanReport",
    "PicardGroup",
    "validate_fan",
    "minimal_nonfaces",
    "dual_basis",
    "char_divisor_map",
    "picard_presentation",
    "star_subdivision",
    "projective_space",
    "del_pezzo_6",
    "hirzebruch",
    "projective_line",
    "single_cone",
    "catalog_fan",
    "CATALOG",
]


class Fan:
    """Simplicial fan in ``Z^n`` given by rays and maximal cones."""

    def __init__(self, rays, max_cones, labels=None, dim=None):
        self.rays = tuple(tuple(int(x) for x in r) for r in rays)
        if dim is None:
            if not self.rays:
                raise DomainError("a fan without rays needs an explicit dimension")
            dim = len(self.rays[0])
        self.n = int(dim)
        self.max_cones = tuple(tuple(sorted(set(int(i) for i in c))) for c in max_cones)
        for c, orig in zip(self.max_cones, max_cones):
            if len(c) != len(list(orig)):
                raise DomainError(f"cone {list(orig)} repeats a ray")
            for i in c:
                if not 0 <= i < len(self.rays):
                    raise DomainError(f"cone {list(orig)} refers to missing ray {i}")
        if labels is None:
            labels = [f"r{i + 1}" for i in range(len(self.rays))]
        self.labels = tuple(labels)
        if len(self.labels) != len(self.rays) or len(set(self.labels)) != len(self.labels):
            raise DomainError("labels must be distinct, one per ray")
        faces = set()
        for c in self.max_cones:
            for k in range(len(c) + 1):
                faces.update(frozenset(s) for s in combinations(c, k))
        self.faces = frozenset(faces)
        self.face_masks = frozenset(sum(1 << i for i in f) for f in faces)

    @property
    def nrays(self) -> int:
        return len(self.rays)

    def __eq__(self, other):
        return isinstance(other, Fan) and (self.n, self.rays, self.max_cones, self.labels) == (
            other.n,
            other.rays,
            other.max_cones,
            other.labels,
        )

    def __hash__(self):
        return hash((self.n, self.rays, self.max_cones, self.labels))

    def __repr__(self):
        return f"Fan(n={self.n}, rays={len(self.rays)}, max_cones={len(self.max_cones)})"

    def is_face(self, rays) -> bool:
        return frozenset(rays) in self.faces

    def ray_index(self, label) -> int:
        if isinstance(label, int):
            return label
        try:
            return self.labels.index(label)
        except ValueError:
            raise DomainError(f"unknown ray {label!r}") from None

    def cone(self, rays) -> tuple:
        """Canonical cone tuple from indices or labels; must be a face."""
        c = tuple(sorted(self.ray_index(r) for r in rays))
        if not self.is_face(c):
            raise DomainError(f"{self.cone_name(c)} is not a cone of the fan")
        return c

    def cone_name(self, cone) -> str:
        return "cone(" + ",".join(self.labels[i] for i in cone) + ")"

    def full_dimensional_cones(self) -> list:
        return [c for c in self.max_cones if len(c) == self.n]

    def cones(self, dim: int = None) -> list:
        """All faces (or those of one dimension) in a deterministic order."""
        out = sorted((tuple(sorted(f)) for f in self.faces), key=lambda c: (len(c), c))
        return [c for c in out if dim is None or len(c) == dim]

    # -- serialization --------------------------------------------------
    def to_json(self) -> dict:
        return {
            "dim": self.n,
            "rays": [list(r) for r in self.rays],
            "max_cones": [list(c) for c in self.max_cones],
            "labels": list(self.labels),
        }

    @classmethod
    def from_json(cls, data) -> "Fan":
        try:
            return cls(data["rays"], data["max_cones"], data.get("labels"), data.get("dim"))
        except (KeyError, TypeError) as exc:
            raise DomainError(f"malformed fan description: {exc}") from exc


@dataclass
class FanReport:
    problems: list = field(default_factory=list)
    strict: bool = True

    @property
    def ok(self) -> bool:
        return not self.problems

    def __str__(self):
        mode = "strict" if self.strict else "trusted"
        if self.ok:
            return f"fan valid ({mode})"
        return f"fan INVALID ({mode}):\n" + "\n".join("  " + p for p in self.problems)


def validate_fan(fan: Fan, strict: bool = True) -> FanReport:
    report = FanReport(strict=strict)
    bad = report.problems
    for i, r in enumerate(fan.rays):
        if len(r) != fan.n:
            bad.append(f"ray {fan.labels[i]} has length {len(r)}, expected {fan.n}")
            continue
        if not r or gcd(*r) != 1:
            bad.append(f"ray {fan.labels[i]} = {list(r)} is not primitive")
    seen = {}
    for i, r in enumerate(fan.rays):
        if r in seen:
            bad.append(f"rays {fan.labels[seen[r]]} and {fan.labels[i]} coincide")
        seen.setdefault(r, i)
    used = set().union(*fan.max_cones) if fan.max_cones else set()
    for i in range(fan.nrays):
        if i not in used:
            bad.append(f"ray {fan.labels[i]} lies in no maximal cone")
    if bad:
        return report
    for c in fan.max_cones:
        if len(c) > fan.n:
            bad.append(f"{fan.cone_name(c)} has more rays than the lattice rank")
            continue
        if c and smith_normal_form([fan.rays[i] for i in c]).diagonal != [1] * len(c):
            bad.append(f"{fan.cone_name(c)} is not smooth")
    for a, b in combinations(fan.max_cones, 2):
        if set(a) <= set(b) or set(b) <= set(a):
            bad.append(f"{fan.cone_name(a)} and {fan.cone_name(b)} are nested")
    if bad or not strict:
        return report
    for a, b in combinations(fan.max_cones, 2):
        common = set(a) & set(b)
        ok = strictly_separable(
            [fan.rays[i] for i in a if i not in common],
            [fan.rays[i] for i in b if i not in common],
            [fan.rays[i] for i in common],
            fan.n,
        )
        if not ok:
            bad.append(
                f"{fan.cone_name(a)} and {fan.cone_name(b)} do not meet along a common face"
            )
    return report


def minimal_nonfaces(fan: Fan) -> list:
    """Inclusion-minimal ray sets spanning no cone, by increasing size."""
    out = []
    level = [()]
    for k in range(1, fan.n + 2):
        nxt = []
        for F in level:
            for r in range(F[-1] + 1 if F else 0, fan.nrays):
                S = F + (r,)
                if fan.is_face(S):
                    nxt.append(S)
                elif all(fan.is_face(S[:j] + S[j + 1:]) for j in range(k)):
                    out.append(S)
        level = nxt
    return out


def dual_basis(fan: Fan, cone) -> dict:
    """``{ray: alpha}`` with ``<alpha_rho, v_rho'> = delta`` on a full cone."""
    cone = tuple(cone)
    if len(cone) != fan.n:
        raise DomainError(f"{fan.cone_name(cone)} is not full-dimensional")
    V = [list(fan.rays[i]) for i in cone]
    try:
        inv = integer_inverse(V)
    except ValueError:
        raise DomainError(f"{fan.cone_name(cone)} is not smooth") from None
    return {rho: tuple(inv[j][k] for j in range(fan.n)) for k, rho in enumerate(cone)}


def pairing(alpha, v) -> int:
    return sum(a * b for a, b in zip(alpha, v))


def char_divisor_map(fan: Fan) -> list:
    """Integer matrix with row ``rho`` equal to ``v_rho``: column ``j`` lists
    the multiplicities of ``D_rho`` in ``div(e_j^*)``."""
    return [list(r) for r in fan.rays]


@dataclass
class PicardGroup:
    torsion: list
    free_rank: int
    coordinate_map: list
    injective: bool
    snf: SnfResult

    def coordinates(self, divisor) -> tuple:
        """Class of ``sum n_rho D_rho`` (torsion parts reduced)."""
        out = []
        for row, mod in zip(self.coordinate_map, self.torsion + [0] * self.free_rank):
            c = sum(a * b for a, b in zip(row, divisor))
            out.append(c % mod if mod else c)
        return tuple(out)

    def __str__(self):
        parts = [f"Z/{a}" for a in self.torsion] + (["Z^%d" % self.free_rank] if self.free_rank else [])
        group = " + ".join(parts) if parts else "0"
        note = "" if self.injective else " (character map not injective)"
        return f"Pic = {group}; free rank {self.free_rank}, torsion {self.torsion or 'none'}{note}"


def picard_presentation(fan: Fan) -> PicardGroup:
    M = char_divisor_map(fan)
    m = fan.nrays
    if m == 0:
        return PicardGroup([], 0, [], True, SnfResult([], [], []))
    snf = smith_normal_form(M)
    diag = snf.diagonal
    s = snf.rank
    torsion_rows, torsion = [], []
    for i in range(s):
        if diag[i] != 1:
            torsion.append(diag[i])
            torsion_rows.append(snf.U[i])
    free_rows = [snf.U[i] for i in range(s, m)]
    return PicardGroup(torsion, m - s, torsion_rows + free_rows, s == fan.n, snf)


def star_subdivision(fan: Fan, sigma, label: str = "E"):
    """Insert the ray ``sum_{rho in sigma} v_rho``; returns ``(fan', index)``.

    Maximal cones containing ``sigma`` are each replaced by the ``|sigma|``
    cones obtained by swapping one ray of ``sigma`` for the new ray.
    """
    sigma = fan.cone(sigma)
    if len(sigma) < 2:
        raise DomainError("the center of a star subdivision needs at least two rays")
    new = len(fan.rays)
    v = tuple(sum(fan.rays[i][k] for i in sigma) for k in range(fan.n))
    while label in fan.labels:
        label = label + "'"
    cones = []
    for tau in fan.max_cones:
        if set(sigma) <= set(tau):
            for rho in sigma:
                cones.append(tuple(sorted([i for i in tau if i != rho] + [new])))
        else:
            cones.append(tau)
    return Fan(fan.rays + (v,), cones, fan.labels + (label,), fan.n), new


# -- catalog ----------------------------------------------------------------


def projective_space(n: int) -> Fan:
    rays = [tuple(int(i == j) for j in range(n)) for i in range(n)]
    rays.append(tuple(-1 for _ in range(n)))
    cones = list(combinations(range(n + 1), n))
    return Fan(rays, cones, [f"x{i + 1}" for i in range(n + 1)], n)


def projective_line() -> Fan:
    return Fan([(1,), (-1,)], [(0,), (1,)], ["x1", "x2"], 1)


def del_pezzo_6() -> Fan:
    rays = [(0, 1), (1, 1), (1, 0), (0, -1), (-1, -1), (-1, 0)]
    labels = ["L1", "E3", "L2", "E1", "L3", "E2"]
    cones = [(i, (i + 1) % 6) for i in range(6)]
    return Fan(rays, cones, labels, 2)


def hirzebruch(r: int) -> Fan:
    rays = [(1, 0), (0, 1), (-1, r), (0, -1)]
    return Fan(rays, [(0, 1), (1, 2), (2, 3), (3, 0)], ["u1", "u2", "u3", "u4"], 2)


def single_cone(n: int) -> Fan:
    rays = [tuple(int(i == j) for j in range(n)) for i in range(n)]
    return Fan(rays, [tuple(range(n))], [f"x{i + 1}" for i in range(n)], n)


CATALOG = ("p1", "pn:2", "pn:3", "dp6", "hirzebruch:1", "cone:2")


def catalog_fan(name: str) -> Fan:
    kind, _, arg = name.partition(":")
    try:
        if kind == "pn":
            return projective_space(int(arg))
        if kind == "hirzebruch":
            return hirzebruch(int(arg))
        if kind == "cone":
            return single_cone(int(arg))
    except ValueError:
        raise DomainError(f"bad catalog parameter in {name!r}") from None
    if name == "dp6":
        return del_pezzo_6()
    if name == "p1":
        return projective_line()
    raise DomainError(f"unknown catalog fan {name!r}")
