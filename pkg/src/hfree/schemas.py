"""Declarative specs for modules and pipeline requests, and the pure runners
turning validated requests into structured reports.

The HTTP service and the command line are both thin clients of the runners
here; a report is a plain JSON-ready dict that also carries its own rendered
human-readable table under the "human" key, so identical requests produce
byte-identical output everywhere.
"""

from __future__ import annotations

import random
from fractions import Fraction
from typing import Literal, Optional, Union

from pydantic import BaseModel, Field, TypeAdapter

from .algebras import Weight, build_algebra, finite_irrep, make_automorphism
from .families import (
    certify_almost_coherent,
    deg_identity_check,
    deg_linear_independence,
    deg_table,
)
from .modules import (
    FreeHModule,
    dual_module,
    exponential_module,
    exponential_partner_verma,
    from_sp2n_M0,
    tensor_finite,
    twist,
    validate_bracket,
)
from .polys import PolyMatrix, parse_poly, rat
from .windows import almost_equivalent, default_probe_catalog, weighting


class AlgebraSpec(BaseModel):
    family: Literal["A", "C"]
    n: int = Field(ge=1, le=6)


class ModuleSpec(BaseModel):
    algebra: AlgebraSpec
    constructor: Literal["m0", "exponential", "verma", "twist", "tensor", "dual"]
    params: dict = Field(default_factory=dict)


class ModuleDump(BaseModel):
    """A previously built module: action matrices in canonical text form."""

    algebra: AlgebraSpec
    rank: int = Field(ge=1)
    action: dict[str, list[list[str]]]
    meta: dict = Field(default_factory=dict)


ModuleSource = Union[ModuleSpec, ModuleDump]

_SOURCE_ADAPTER = TypeAdapter(ModuleSource)


class WindowSpec(BaseModel):
    base: list[str]
    radius: int = Field(default=6, ge=1, le=8)


class BuildRequest(BaseModel):
    spec: ModuleSource


class CertifyRequest(BaseModel):
    spec: ModuleSource
    window: WindowSpec
    probes: Optional[list[str]] = None


class CompareRequest(BaseModel):
    left: ModuleSource
    right: ModuleSource
    window: WindowSpec
    right_base: Optional[list[str]] = None
    probes: Optional[list[str]] = None


class DegreesRequest(BaseModel):
    algebra: AlgebraSpec
    weights: Optional[list[list[str]]] = None
    count: int = Field(default=10, ge=1, le=60)
    seed: int = 0


# ---------------------------------------------------------------------------
# spec -> core objects


def algebra_from(spec: AlgebraSpec):
    return build_algebra(spec.family, spec.n)


def _rats(values):
    return tuple(rat(v) for v in values)


def _weight(algebra, values):
    coords = _rats(values)
    if len(coords) != algebra.n:
        raise ValueError(
            "weight needs %d coordinates, got %d" % (algebra.n, len(coords))
        )
    return Weight(coords)


def _module_from_dump(dump: ModuleDump):
    algebra = algebra_from(dump.algebra)
    n = algebra.n
    action = {}
    for lab, grid in dump.action.items():
        entries = [[parse_poly(cell, n) for cell in row] for row in grid]
        action[lab] = PolyMatrix(len(grid), len(grid[0]) if grid else 0, n, entries)
    return FreeHModule(algebra, dump.rank, action, dump.meta)


def module_from(spec: ModuleSource):
    if isinstance(spec, ModuleDump):
        return _module_from_dump(spec)
    algebra = algebra_from(spec.algebra)
    params = spec.params
    kind = spec.constructor
    try:
        if kind == "m0":
            if spec.algebra.family != "C":
                raise ValueError("the m0 constructor lives over sp(2n)")
            return from_sp2n_M0(spec.algebra.n)
        if kind == "exponential":
            if spec.algebra.family != "A":
                raise ValueError("exponential modules live over sl(n+1)")
            return exponential_module(
                _rats(params["b"]),
                _weight(algebra, params["lambda"]),
                frozenset(int(i) for i in params.get("S", [])),
            )
        if kind == "verma":
            if spec.algebra.family != "A":
                raise ValueError("parabolic Verma partners live over sl(n+1)")
            return exponential_partner_verma(
                algebra, _rats(params["b"]), _weight(algebra, params["lambda"])
            )
        base = module_from(_SOURCE_ADAPTER.validate_python(params["base"]))
        if base.algebra is not algebra:
            raise ValueError("nested spec uses a different algebra")
        if kind == "twist":
            param = params.get("param")
            auto = make_automorphism(
                algebra, params["kind"], _rats(param) if param is not None else None
            )
            return twist(base, auto)
        if kind == "tensor":
            rep = finite_irrep(algebra, tuple(int(c) for c in params["rep"]))
            return tensor_finite(base, rep)
        return dual_module(base)
    except KeyError as missing:
        raise ValueError(
            "constructor %r requires parameter %s" % (kind, missing)
        ) from None


def checked_module(spec: ModuleSource):
    """Like module_from, but a dump must additionally pass the exact bracket
    relations; constructive specs are trusted to their constructors."""
    module = module_from(spec)
    if isinstance(spec, ModuleDump) and not validate_bracket(module).passed:
        raise ValueError("module dump fails the exact bracket relations")
    return module


def probe_selection(algebra, names):
    catalog = default_probe_catalog(algebra)
    if names is None:
        return catalog
    by_name = dict(catalog)
    unknown = [nm for nm in names if nm not in by_name]
    if unknown:
        raise ValueError(
            "unknown probes %s; available: %s"
            % (", ".join(unknown), ", ".join(nm for nm, _ in catalog))
        )
    return [(nm, by_name[nm]) for nm in names]


def _plain(value):
    if isinstance(value, Fraction):
        return str(value)
    if isinstance(value, dict):
        return {str(k): _plain(v) for k, v in value.items()}
    if isinstance(value, (frozenset, set)):
        return [_plain(v) for v in sorted(value)]
    if isinstance(value, (list, tuple)):
        return [_plain(v) for v in value]
    return value


# ---------------------------------------------------------------------------
# runners


def run_build(req: BuildRequest):
    module = module_from(req.spec)
    report = validate_bracket(module)
    failures = [
        {
            "relation": rel if isinstance(rel, str) else "[%s, %s]" % rel,
            "residual": residual.text_grid(),
        }
        for rel, residual in report.failures()
    ]
    out = {
        "command": "build",
        "ok": report.passed,
        "config": req.model_dump(),
        "module": {
            "algebra": req.spec.algebra.model_dump(),
            "rank": module.rank,
            "meta": _plain(module.meta),
            "action": {
                lab: [[p.text() for p in row] for row in mat.entries]
                for lab, mat in sorted(module.action.items())
            },
        },
        "bracket": {"passed": report.passed, "failures": failures},
    }
    out["human"] = _render_build(out)
    return out


def run_certify(req: CertifyRequest):
    module = checked_module(req.spec)
    algebra = module.algebra
    window = weighting(module, _weight(algebra, req.window.base), req.window.radius)
    probes = probe_selection(algebra, req.probes)
    certificate = certify_almost_coherent(window, probes)
    out = {
        "command": "certify",
        "ok": certificate.passed,
        "config": req.model_dump(),
        "window": {
            "base": [str(c) for c in window.base.coords],
            "radius": req.window.radius,
            "slots": len(window.valid_slots()),
        },
        "certificate": certificate.report(),
    }
    out["human"] = _render_certify(out)
    return out


def run_compare(req: CompareRequest):
    if req.left.algebra != req.right.algebra:
        raise ValueError("modules to compare must share an algebra")
    left = checked_module(req.left)
    right = checked_module(req.right)
    algebra = left.algebra
    base = _weight(algebra, req.window.base)
    right_base = base if req.right_base is None else _weight(algebra, req.right_base)
    w1 = weighting(left, base, req.window.radius)
    w2 = weighting(right, right_base, req.window.radius)
    probes = probe_selection(algebra, req.probes)
    verdict = almost_equivalent(w1, w2, probes)
    out = {
        "command": "compare",
        "ok": verdict.equivalent,
        "config": req.model_dump(),
        "window": {
            "base": [str(c) for c in base.coords],
            "right_base": [str(c) for c in right_base.coords],
            "radius": req.window.radius,
        },
        "verdict": verdict.report(),
    }
    out["human"] = _render_compare(out)
    return out


def run_degrees(req: DegreesRequest):
    algebra = algebra_from(req.algebra)
    n = algebra.n
    if req.weights is not None:
        weights = [_weight(algebra, row) for row in req.weights]
    else:
        rng = random.Random(req.seed)
        count = max(req.count, n)
        seen = []
        while len(seen) < count:
            cand = tuple(Fraction(rng.randint(0, 4)) for _ in range(n))
            if cand not in seen:
                seen.append(cand)
        weights = [Weight(c) for c in seen]
    rows = []
    for lam in weights:
        rows.append(
            {
                "weight": [str(c) for c in lam.coords],
                "degrees": deg_table(algebra, lam),
                "identity": "ok" if deg_identity_check(algebra, lam) else "fail",
            }
        )
    rank = deg_linear_independence(algebra, weights)
    ok = rank == n and all(r["identity"] == "ok" for r in rows)
    out = {
        "command": "degrees",
        "ok": ok,
        "config": req.model_dump(),
        "rows": rows,
        "independence_rank": rank,
    }
    out["human"] = _render_degrees(out)
    return out


# ---------------------------------------------------------------------------
# human-readable rendering


def _table(headers, rows):
    widths = [len(h) for h in headers]
    for row in rows:
        for i, cell in enumerate(row):
            widths[i] = max(widths[i], len(cell))
    fmt = "  ".join("%%-%ds" % w for w in widths)
    lines = [fmt % tuple(headers), fmt % tuple("-" * w for w in widths)]
    lines.extend(fmt % tuple(row) for row in rows)
    return "\n".join(lines)


def _render_build(out):
    spec = out["config"]["spec"]
    lines = [
        "build %s over %s%d: rank %d"
        % (
            spec.get("constructor", "dump"),
            spec["algebra"]["family"],
            spec["algebra"]["n"],
            out["module"]["rank"],
        ),
        "bracket relations: %s" % ("PASS" if out["bracket"]["passed"] else "FAIL"),
    ]
    for failure in out["bracket"]["failures"]:
        lines.append("  residual %s: %s" % (failure["relation"], failure["residual"]))
    rows = [
        (lab, "; ".join(", ".join(row) for row in grid))
        for lab, grid in out["module"]["action"].items()
    ]
    lines.append(_table(("label", "action matrix"), rows))
    return "\n".join(lines) + "\n"


def _render_certify(out):
    cert = out["certificate"]
    lines = [
        "certify window base=(%s) radius=%d: %d slots"
        % (", ".join(out["window"]["base"]), out["window"]["radius"], out["window"]["slots"]),
        "degree %d, %s" % (cert["degree"], "PASS" if out["ok"] else "FAIL"),
    ]
    rows = [(name, poly) for name, poly in sorted(cert["traces"].items())]
    lines.append(_table(("probe", "fitted trace polynomial"), rows))
    for name, slots in sorted(cert["failures"].items()):
        lines.append(
            "  no exact fit for %s at slots %s"
            % (name, "; ".join("(%s)" % ", ".join(s) for s in slots))
        )
    if cert["exceptional"]:
        lines.append(
            "  dimension outliers at %s"
            % "; ".join("(%s)" % ", ".join(s) for s in cert["exceptional"])
        )
    return "\n".join(lines) + "\n"


def _render_compare(out):
    verdict = out["verdict"]
    lines = [
        "compare at base=(%s) radius=%d" % (", ".join(out["window"]["base"]), out["window"]["radius"]),
        "almost-equivalent (%s): %s, threshold %d"
        % (verdict["label"], "YES" if verdict["equivalent"] else "NO", verdict["threshold"]),
        "probes: %s" % ", ".join(verdict["probes"]),
    ]
    if verdict["exceptional"]:
        lines.append(
            "exceptional slots: %s"
            % "; ".join("(%s)" % ", ".join(s) for s in verdict["exceptional"])
        )
    else:
        lines.append("exceptional slots: none")
    return "\n".join(lines) + "\n"


def _render_degrees(out):
    n = out["config"]["algebra"]["n"]
    headers = ("weight",) + tuple("deg_%d" % k for k in range(1, n + 1)) + ("identity",)
    rows = [
        ("(%s)" % ", ".join(r["weight"]),)
        + tuple(str(d) for d in r["degrees"])
        + (r["identity"],)
        for r in out["rows"]
    ]
    lines = [
        _table(headers, rows),
        "linear independence rank: %d of %d" % (out["independence_rank"], n),
    ]
    return "\n".join(lines) + "\n"
