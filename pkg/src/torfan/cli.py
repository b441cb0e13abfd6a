"""``torfan`` command-line interface.

Every command prints a short metadata header (fan, formal group law,
truncation, specialization) followed by its result; ``--format json``
emits one JSON document instead.  Exit codes: 0 success, 1 a check
failed, 2 usage error, 3 the fan/element/law could not be parsed or
validated.
"""

from __future__ import annotations

import argparse
import json
import os
import random
import sys

from .blowup import check_push_pull, make_blowup
from .coefficients import ParamSpec
from .errors import IncompatibleTupleError, TorfanError
from .fan import (
    CATALOG,
    Fan,
    catalog_fan,
    dual_basis,
    minimal_nonfaces,
    picard_presentation,
    validate_fan,
)
from .fgl import DEFAULT_N, FormalGroupLaw
from .piecewise import courant_function, pw_check_eval, to_piecewise
from .series import Series
from .sralgebra import (
    OrdinaryModel,
    SRRing,
    character_class,
    equivariant_presentation,
    glue_tuple,
    graded_rank,
    ideal_membership,
    random_series,
    restriction_tuple,
)

EXIT_OK, EXIT_CHECK, EXIT_USAGE, EXIT_PARSE = 0, 1, 2, 3


class ParseFailure(Exception):
    """Input could not be parsed or validated (exit status 3)."""


class CheckFailure(Exception):
    """A requested check failed (exit status 1)."""

    def __init__(self, message, result=None):
        super().__init__(message)
        self.result = result


# -- input parsing -----------------------------------------------------------


def load_fan(source: str) -> Fan:
    """A fan from a JSON file or a catalog name, not yet validated."""
    if os.path.exists(source):
        try:
            with open(source) as fh:
                return Fan.from_json(json.load(fh))
        except (OSError, json.JSONDecodeError, TorfanError, ValueError) as exc:
            raise ParseFailure(f"{source}: {exc}") from exc
    try:
        return catalog_fan(source)
    except TorfanError as exc:
        raise ParseFailure(f"{source}: not a file and {exc}") from exc


def parse_fan(source: str, trusted: bool = False) -> Fan:
    """A fan from a JSON file or a catalog name, validated."""
    fan = load_fan(source)
    report = validate_fan(fan, strict=not trusted)
    if not report.ok:
        raise ParseFailure(f"{source}: invalid fan\n{report}")
    return fan


def parse_law(selector: str, N: int) -> FormalGroupLaw:
    try:
        return FormalGroupLaw.from_selector(selector, N)
    except (OSError, json.JSONDecodeError, TorfanError, ValueError, KeyError) as exc:
        raise ParseFailure(f"formal group law {selector!r}: {exc}") from exc


def parse_assignment(text: str, params: ParamSpec):
    """``v=1,u2=-3,beta=unit:b`` -> (assignment, target ParamSpec).

    Values are integers, a parameter name (kept symbolic) or ``unit:name``
    for an invertible parameter."""
    raw = {}
    for item in filter(None, (s.strip() for s in text.split(","))):
        name, sep, value = item.partition("=")
        if not sep or name not in params.names:
            raise ParseFailure(f"bad specialization {item!r}; parameters are {list(params.names)}")
        raw[name] = value.strip()
    keep = [n for n in params.names if n not in raw]
    inv = {n for n in keep if n in params.invertible}
    for value in raw.values():
        sym = value[5:] if value.startswith("unit:") else value
        if not _is_int(value) and sym.isidentifier():
            if sym not in keep:
                keep.append(sym)
            if value.startswith("unit:"):
                inv.add(sym)
    target = ParamSpec(tuple(keep), frozenset(inv))
    assignment = {}
    for name, value in raw.items():
        if _is_int(value):
            assignment[name] = target.const(int(value))
        else:
            sym = value[5:] if value.startswith("unit:") else value
            if not sym.isidentifier():
                raise ParseFailure(f"bad specialization value {value!r}")
            assignment[name] = target.gen(sym)
    return assignment, target


def _is_int(s: str) -> bool:
    try:
        int(s)
    except ValueError:
        return False
    return True


def parse_cone(text: str, fan: Fan) -> tuple:
    idx = []
    for tok in filter(None, (s.strip() for s in text.split(","))):
        try:
            idx.append(int(tok) if _is_int(tok) else fan.ray_index(tok))
        except TorfanError as exc:
            raise ParseFailure(str(exc)) from exc
    try:
        return fan.cone(idx)
    except TorfanError as exc:
        raise ParseFailure(f"cone {text!r}: {exc}") from exc


def parse_element(path: str, ring) -> Series:
    try:
        with open(path) as fh:
            return Series.from_json(json.load(fh), ring)
    except (OSError, json.JSONDecodeError, TorfanError, ValueError, KeyError, TypeError) as exc:
        raise ParseFailure(f"element {path}: {exc}") from exc


def truncation(args) -> int:
    if args.truncate is not None:
        N = args.truncate
    else:
        env = os.environ.get("TORFAN_TRUNCATE")
        try:
            N = int(env) if env else DEFAULT_N
        except ValueError:
            raise ParseFailure(f"TORFAN_TRUNCATE={env!r} is not an integer") from None
    if N < 1:
        raise ParseFailure("truncation degree must be at least 1")
    return N


# -- context shared by the commands -------------------------------------------


class Request:
    def __init__(self, args):
        self.args = args
        self.N = truncation(args)
        self.meta = {"command": args.command, "N": self.N}
        self._fan = None
        self._law = None

    @property
    def fan(self) -> Fan:
        if self._fan is None:
            if not self.args.fan:
                raise ParseFailure("--fan is required for this command")
            self._fan = parse_fan(self.args.fan, self.args.trusted)
            self.meta["fan"] = self.args.fan
        return self._fan

    def law(self, default="additive") -> FormalGroupLaw:
        if self._law is None:
            selector = self.args.fgl or default
            law = parse_law(selector, self.N)
            self.meta["fgl"] = selector
            if self.args.specialize:
                assignment, target = parse_assignment(self.args.specialize, law.params)
                law = law.specialize(assignment, target)
                self.meta["specialize"] = self.args.specialize
            self._law = law
        return self._law

    def unspecialized_law(self, default="additive") -> FormalGroupLaw:
        selector = self.args.fgl or default
        self.meta["fgl"] = selector
        return parse_law(selector, self.N)


# -- commands ------------------------------------------------------------------


def cmd_validate(req):
    args = req.args
    if not args.fan:
        raise ParseFailure("--fan is required for this command")
    fan = load_fan(args.fan)
    req.meta["fan"] = args.fan
    report = validate_fan(fan, strict=not args.trusted)
    result = {
        "valid": report.ok,
        "strict": report.strict,
        "rays": len(fan.rays),
        "max_cones": len(fan.max_cones),
        "problems": list(report.problems),
    }
    text = str(report)
    if not report.ok:
        raise CheckFailure(text, result)
    return result, text


def cmd_model(req):
    fan, law = req.fan, req.law()
    pres = equivariant_presentation(fan, law, req.N)
    return pres.to_json(), pres.render()


def cmd_ordinary(req):
    fan, law = req.fan, req.law()
    tau = parse_cone(req.args.tau, fan) if req.args.tau else None
    try:
        model = OrdinaryModel(fan, law, tau, req.N)
    except TorfanError as exc:
        raise CheckFailure(str(exc)) from exc
    pres = model.presentation()
    result = pres.to_json()
    text = pres.render()
    if not law.params.names:
        top = min(req.N, fan.n + 1)
        ranks = [graded_rank(pres, d) for d in range(top + 1)]
        result["graded_ranks"] = ranks
        text += "\ngraded ranks (degree 0.." + str(top) + "): " + " ".join(map(str, ranks))
    return result, text


def cmd_pic(req):
    pic = picard_presentation(req.fan)
    result = {
        "torsion": pic.torsion,
        "free_rank": pic.free_rank,
        "injective": pic.injective,
        "coordinate_map": pic.coordinate_map,
    }
    lines = [str(pic), "divisor -> Pic coordinates:"]
    for i, lab in enumerate(req.fan.labels):
        unit = [int(j == i) for j in range(req.fan.nrays)]
        lines.append(f"  D_{lab} -> {list(pic.coordinates(unit))}")
    return result, "\n".join(lines)


def _elements(req, ring, rng):
    if req.args.element:
        return [parse_element(p, ring) for p in req.args.element]
    return [random_series(ring, rng, min(4, req.N)) for _ in range(req.args.samples)]


def cmd_glue_check(req):
    fan, law = req.fan, req.law()
    ring = SRRing(fan, req.N, law.params)
    rng = random.Random(req.args.seed)
    failures = []
    elems = _elements(req, ring, rng)
    for k, f in enumerate(elems):
        tup = restriction_tuple(f)
        try:
            g = glue_tuple(tup, ring)
        except IncompatibleTupleError as exc:
            failures.append({"element": k, "reason": str(exc)})
            continue
        if g != f:
            failures.append({"element": k, "reason": "glue(restrictions(f)) != f"})
        elif restriction_tuple(g) != tup:
            failures.append({"element": k, "reason": "restrict(glue(t)) != t"})
    result = {"elements": len(elems), "failures": failures}
    text = f"glue-check: {len(elems)} elements, {len(failures)} failures"
    if failures:
        raise CheckFailure(text + "".join(f"\n  #{f['element']}: {f['reason']}" for f in failures), result)
    return result, text


def cmd_blowup(req):
    fan, law = req.fan, req.law(default="mult:v")
    if not req.args.center:
        raise ParseFailure("--center is required")
    center = parse_cone(req.args.center, fan)
    try:
        ctx = make_blowup(fan, center, law, N=req.N, strict=not req.args.trusted)
    except TorfanError as exc:
        raise CheckFailure(str(exc)) from exc
    req.meta.update(ctx.notes)
    apply = req.args.apply
    if apply:
        if not req.args.element or len(req.args.element) != 1:
            raise ParseFailure("--apply needs exactly one --element")
        ring = ctx.source if apply == "pullback" else ctx.target
        f = parse_element(req.args.element[0], ring)
        try:
            g = ctx.pullback(f) if apply == "pullback" else ctx.pushforward(f)
        except TorfanError as exc:
            raise CheckFailure(str(exc)) from exc
        return {"element": g.to_json(), "fan": ctx.fan.to_json()}, str(g)
    report = check_push_pull(ctx, rng=random.Random(req.args.seed), count=req.args.samples)
    sub = ctx.fan
    lines = [
        "subdivided fan:",
        "  rays: " + ", ".join(f"{lab}={list(v)}" for lab, v in zip(sub.labels, sub.rays)),
        "  maximal cones: " + ", ".join(sub.cone_name(c) for c in sub.max_cones),
        str(report),
    ]
    result = {
        "fan": sub.to_json(),
        "checks": report.checks,
        "failures": [{"check": a, "witness": b} for a, b in report.failures],
    }
    if not report.ok:
        raise CheckFailure("\n".join(lines), result)
    return result, "\n".join(lines)


def cmd_specialize(req):
    fan = req.fan
    law = req.unspecialized_law()
    if not req.args.element or len(req.args.element) != 1:
        raise ParseFailure("specialize needs exactly one --element")
    if not req.args.specialize:
        raise ParseFailure("specialize needs --specialize")
    f = parse_element(req.args.element[0], SRRing(fan, req.N, law.params))
    assignment, target = parse_assignment(req.args.specialize, law.params)
    req.meta["specialize"] = req.args.specialize
    try:
        g = f.specialize(assignment, target)
    except TorfanError as exc:
        raise CheckFailure(str(exc)) from exc
    return {"element": g.to_json()}, str(g)


def cmd_piecewise(req):
    fan = req.fan
    mode = req.args.mode
    law = req.law(default="additive" if mode == "polynomial" else "mult:1")
    if req.args.ray:
        try:
            pf = courant_function(fan, req.args.ray if not _is_int(req.args.ray) else int(req.args.ray))
        except TorfanError as exc:
            raise ParseFailure(str(exc)) from exc
    elif req.args.element:
        f = parse_element(req.args.element[0], SRRing(fan, req.N, law.params))
        try:
            pf = to_piecewise(f, mode, law)
        except TorfanError as exc:
            raise CheckFailure(str(exc)) from exc
    else:
        raise ParseFailure("piecewise needs --ray or --element")
    bad = pf.compatibility_failures()
    result = {
        "mode": pf.mode,
        "pieces": {fan.cone_name(t): str(p) for t, p in pf.pieces.items()},
        "compatible": not bad,
    }
    text = str(pf)
    if req.args.point:
        point = tuple(int(s) for s in req.args.point.split(","))
        try:
            value = pw_check_eval(pf, point)
        except TorfanError as exc:
            raise CheckFailure(str(exc)) from exc
        result["value"] = str(value)
        text += f"\nvalue at {list(point)}: {value}"
    if bad:
        raise CheckFailure(text + "\nincompatible pieces", result)
    return result, text


def _selftest_fan(name, N, rng):
    """``(check name, passed)`` pairs for one catalog fan."""
    out = []
    fan = catalog_fan(name)
    out.append(("valid", validate_fan(fan, strict=True).ok))
    out.append(("json round trip", Fan.from_json(json.loads(json.dumps(fan.to_json()))) == fan))
    ring = SRRing(fan, N)
    ok = True
    for S in minimal_nonfaces(fan):
        prod = ring.one()
        for i in S:
            prod = prod * ring.gen(i)
        ok &= prod.is_zero()
    out.append(("non-face monomials vanish", ok))
    samples = [random_series(ring, rng, min(4, N)) for _ in range(5)]
    out.append(("glue inverts restriction", all(glue_tuple(restriction_tuple(f), ring) == f for f in samples)))
    law = FormalGroupLaw.multiplicative(1, N)
    out.append(("formal group law axioms", law.check_axioms().passed))
    full = fan.full_dimensional_cones()
    if full:
        model = OrdinaryModel(fan, law, full[0], N)
        duals = dual_basis(fan, full[0])
        sring = SRRing(fan, N, law.params)
        exact = all(
            model.eliminate(character_class(sring, law, a, free=True)).is_zero()
            for a in duals.values()
        )
        out.append(("eliminated characters vanish", exact))
        rels = model.presentation().relations
        ok = all(
            ideal_membership(model.eliminate(character_class(sring, law, a)).into(model.free), rels, N)
            for a in duals.values()
        )
        out.append(("eliminated characters lie in the relations", ok))
    return out


def cmd_selftest(req):
    names = CATALOG if req.args.catalog is None else [s for s in req.args.catalog.split(",") if s]
    rng = random.Random(req.args.seed)
    rows = []
    for name in names:
        try:
            checks = _selftest_fan(name, req.N, rng)
        except TorfanError as exc:
            raise ParseFailure(f"{name}: {exc}") from exc
        rows += [(name, c, ok) for c, ok in checks]
    failed = [r for r in rows if not r[2]]
    lines = [f"{'PASS' if ok else 'FAIL'} {name}: {c}" for name, c, ok in rows]
    lines.append(f"selftest: {len(rows)} checks, {len(failed)} failed")
    result = {
        "checks": len(rows),
        "failed": [{"fan": n, "check": c} for n, c, _ in failed],
        "passed": not failed,
    }
    if failed:
        raise CheckFailure("\n".join(lines), result)
    return result, "\n".join(lines)


COMMANDS = {
    "validate": (cmd_validate, "validate a fan"),
    "model": (cmd_model, "equivariant presentation"),
    "ordinary": (cmd_ordinary, "ordinary (non-equivariant) presentation"),
    "pic": (cmd_pic, "Picard group via Smith normal form"),
    "glue-check": (cmd_glue_check, "check gluing of cone restrictions"),
    "blowup": (cmd_blowup, "star subdivision with pull-back / push-forward"),
    "specialize": (cmd_specialize, "specialize the coefficients of an element"),
    "piecewise": (cmd_piecewise, "piecewise polynomial / exponential functions"),
    "selftest": (cmd_selftest, "run built-in checks on catalog fans"),
}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--fan", help="fan JSON file or catalog name (" + ", ".join(CATALOG) + ")")
    common.add_argument("--fgl", help="additive | mult:v | mult:<int> | mult:unit:beta | lorentz:u2 | generic:<file>")
    common.add_argument("--truncate", type=int, help=f"truncation degree N (default $TORFAN_TRUNCATE or {DEFAULT_N})")
    common.add_argument("--specialize", help="parameter assignments, e.g. v=1")
    common.add_argument("--format", choices=("text", "json"), default="text")
    common.add_argument("--trusted", action="store_true", help="skip the convexity part of fan validation")
    common.add_argument("--element", action="append", help="element JSON file (repeatable)")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--samples", type=int, default=10)

    parser = argparse.ArgumentParser(
        prog="torfan", description="Formal group rings of smooth toric varieties."
    )
    sub = parser.add_subparsers(dest="command", required=True)
    parsers = {}
    for name, (_, help_) in COMMANDS.items():
        parsers[name] = sub.add_parser(name, parents=[common], help=help_)
    parsers["ordinary"].add_argument("--tau", help="full-dimensional cone to eliminate (indices or labels)")
    parsers["blowup"].add_argument("--center", help="cone to blow up, e.g. 0,1")
    parsers["blowup"].add_argument("--apply", choices=("pullback", "pushforward"))
    parsers["piecewise"].add_argument("--mode", choices=("polynomial", "exponential"), default="polynomial")
    parsers["piecewise"].add_argument("--ray", help="Courant function of this ray")
    parsers["piecewise"].add_argument("--point", help="evaluate at a lattice point, e.g. 2,1")
    parsers["selftest"].add_argument("--catalog", help="comma-separated catalog subset (default: all)")
    return parser


def _header(meta) -> str:
    keys = ("command", "fan", "fgl", "specialize", "N", "center", "exceptional", "push_forward_seeds")
    return "\n".join(f"# {k}: {meta[k]}" for k in keys if k in meta)


def run(argv=None, out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    fn = COMMANDS[args.command][0]
    req = None
    status, result, text, error = EXIT_OK, None, "", None
    try:
        req = Request(args)
        result, text = fn(req)
    except ParseFailure as exc:
        status, error = EXIT_PARSE, ("parse", str(exc))
    except CheckFailure as exc:
        status, error, result = EXIT_CHECK, ("check", str(exc)), exc.result
    except TorfanError as exc:
        status, error = EXIT_CHECK, (type(exc).__name__, str(exc))
    meta = req.meta if req else {"command": args.command}
    if args.format == "json":
        doc = {"meta": meta, "status": status}
        if result is not None:
            doc["result"] = result
        if error:
            doc["error"] = {"kind": error[0], "message": error[1]}
        out.write(json.dumps(doc, indent=2, sort_keys=True) + "\n")
    else:
        if status == EXIT_PARSE:
            err.write(f"torfan: error: {error[1]}\n")
        else:
            out.write(_header(meta) + "\n")
            out.write((error[1] if error else text) + "\n")
            if error and error[0] != "check":
                err.write(f"torfan: {error[0]}: {error[1]}\n")
    return status


def main(argv=None):
    sys.exit(run(argv))


if __name__ == "__main__":
    main()
