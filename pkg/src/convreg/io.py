"""Instance files and report formatting.

Instance files are JSON with rationals written as strings ("3/4", "-2").
The parser keeps the source line of every object, array and string so
that each validation error names both the line and the field.
"""
from __future__ import annotations

import csv
import io as _io
import json
import json.decoder
import json.scanner
import math
import os
import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from . import linalg as la
from .errors import DimensionError, EmptySetError, InstanceError
from .polyhedra import HPolyhedron, Row, VPolyhedron
from .sets import Ball, Collection, GeneratedCone, NormContext, ShrinkingIntervalFamily


@dataclass(frozen=True)
class Instance:
    collection: Collection
    points: tuple = ()
    seed: int = 0
    samples: int = 10_000


# ---------------------------------------------------------------------------
# JSON with source lines
# ---------------------------------------------------------------------------

class _Str(str):
    line = None


class _Dict(dict):
    line = None


class _List(list):
    line = None


def _loads_with_lines(text: str):
    def line_of(pos: int) -> int:
        return text.count("\n", 0, pos) + 1

    dec = json.JSONDecoder()

    def parse_object(s_and_end, strict, scan_once, object_hook, object_pairs_hook, memo=None):
        start = s_and_end[1] - 1
        value, end = json.decoder.JSONObject(s_and_end, strict, scan_once, object_hook,
                                             object_pairs_hook, memo)
        out = _Dict(value)
        out.line = line_of(start)
        return out, end

    def parse_array(s_and_end, scan_once):
        start = s_and_end[1] - 1
        value, end = json.decoder.JSONArray(s_and_end, scan_once)
        out = _List(value)
        out.line = line_of(start)
        return out, end

    def parse_string(s, end, strict):
        value, new_end = json.decoder.scanstring(s, end, strict)
        out = _Str(value)
        out.line = line_of(end - 1)
        return out, new_end

    dec.parse_object = parse_object
    dec.parse_array = parse_array
    dec.parse_string = parse_string
    dec.scan_once = json.scanner.py_make_scanner(dec)
    try:
        return dec.decode(text)
    except json.JSONDecodeError as exc:
        raise InstanceError(f"invalid JSON: {exc.msg}", exc.lineno) from None


def _line(node, parent=None):
    line = getattr(node, "line", None)
    return line if line is not None else getattr(parent, "line", None)


# ---------------------------------------------------------------------------
# field readers
# ---------------------------------------------------------------------------

def _rat(node, field: str, parent=None) -> Fraction:
    if isinstance(node, bool) or not isinstance(node, (str, int)):
        raise InstanceError("expected a rational as a string such as \"3/4\"", _line(node, parent), field)
    try:
        return Fraction(node)
    except (ValueError, ZeroDivisionError):
        raise InstanceError(f"invalid rational {node!r}", _line(node, parent), field) from None


def _vector(node, field: str, dim: int | None, parent=None) -> tuple:
    if not isinstance(node, list):
        raise InstanceError("expected a list of rationals", _line(node, parent), field)
    v = tuple(_rat(x, f"{field}[{k}]", node) for k, x in enumerate(node))
    if dim is not None and len(v) != dim:
        raise InstanceError(f"expected {dim} entries, got {len(v)}", _line(node, parent), field)
    return v


def _get(node: dict, key: str, field: str, default=...):
    if key not in node:
        if default is ...:
            raise InstanceError("missing required field", _line(node), f"{field}.{key}" if field else key)
        return default
    return node[key]


def _int(node, field: str, parent=None) -> int:
    if isinstance(node, int) and not isinstance(node, bool):
        return node
    if isinstance(node, str) and node.strip().lstrip("-").isdigit():
        return int(node)
    raise InstanceError("expected an integer", _line(node, parent), field)


def _parse_set(node, field: str, dim: int):
    if not isinstance(node, dict):
        raise InstanceError("expected a set descriptor object", _line(node), field)
    kind = _get(node, "type", field)
    if kind == "hpoly":
        rows = _get(node, "rows", field)
        if not isinstance(rows, list):
            raise InstanceError("expected a list of rows", _line(rows, node), f"{field}.rows")
        out = []
        for k, r in enumerate(rows):
            f = f"{field}.rows[{k}]"
            if not isinstance(r, dict):
                raise InstanceError("expected a row object", _line(r, rows), f)
            a = _vector(_get(r, "a", f), f"{f}.a", dim, r)
            b = _rat(_get(r, "b", f), f"{f}.b", r)
            eq = _get(r, "eq", f, False)
            if not isinstance(eq, bool):
                raise InstanceError("expected true or false", _line(r), f"{f}.eq")
            out.append(Row(a, b, eq))
        return HPolyhedron(dim, tuple(out))
    if kind == "vpoly":
        pts = _get(node, "points", field)
        rays = _get(node, "rays", field, [])
        for name, lst in (("points", pts), ("rays", rays)):
            if not isinstance(lst, list):
                raise InstanceError("expected a list of vectors", _line(lst, node), f"{field}.{name}")
        points = [_vector(p, f"{field}.points[{k}]", dim, pts) for k, p in enumerate(pts)]
        if not points:
            raise InstanceError("a V-polyhedron needs at least one point", _line(pts, node),
                                f"{field}.points")
        return VPolyhedron.from_generators(dim, points,
                                           [_vector(r, f"{field}.rays[{k}]", dim, rays)
                                            for k, r in enumerate(rays)])
    if kind == "cone":
        gens = _get(node, "generators", field)
        if not isinstance(gens, list):
            raise InstanceError("expected a list of vectors", _line(gens, node), f"{field}.generators")
        return GeneratedCone.of(dim, [_vector(g, f"{field}.generators[{k}]", dim, gens)
                                      for k, g in enumerate(gens)])
    if kind == "ball":
        center = _vector(_get(node, "center", field), f"{field}.center", dim, node)
        radius = _rat(_get(node, "radius", field), f"{field}.radius", node)
        if radius <= 0:
            raise InstanceError("radius must be positive", _line(node["radius"], node), f"{field}.radius")
        return Ball(center, radius)
    if kind == "shrinking_intervals":
        if dim != 1:
            raise InstanceError("the shrinking interval family lives in dimension 1", _line(node),
                                f"{field}.type")
        return ShrinkingIntervalFamily()
    raise InstanceError(f"unknown set type {kind!r}", _line(kind, node), f"{field}.type")


def parse_instance_text(text: str, name: str = "instance") -> Instance:
    root = _loads_with_lines(text)
    if not isinstance(root, dict):
        raise InstanceError("the instance must be a JSON object", 1)
    dim = _int(_get(root, "space_dim", ""), "space_dim", root)
    if dim < 1:
        raise InstanceError("space_dim must be positive", _line(root), "space_dim")
    norm_node = _get(root, "norm", "", {"kind": "l2", "mode": "exact", "tol": "0"})
    if not isinstance(norm_node, dict):
        raise InstanceError("expected an object", _line(norm_node, root), "norm")
    kind = _get(norm_node, "kind", "norm", "l2")
    mode = _get(norm_node, "mode", "norm", "exact")
    tol = _rat(_get(norm_node, "tol", "norm", "0"), "norm.tol", norm_node)
    if kind not in ("l1", "l2", "linf"):
        raise InstanceError(f"unknown norm kind {kind!r}", _line(kind, norm_node), "norm.kind")
    if mode not in ("exact", "float"):
        raise InstanceError(f"unknown mode {mode!r}", _line(mode, norm_node), "norm.mode")
    if tol < 0:
        raise InstanceError("tolerance must be nonnegative", _line(norm_node), "norm.tol")
    sets_node = _get(root, "sets", "")
    if not isinstance(sets_node, list) or not sets_node:
        raise InstanceError("expected a nonempty list of sets", _line(sets_node, root), "sets")
    sets = tuple(_parse_set(s, f"sets[{k}]", dim) for k, s in enumerate(sets_node))
    override = None
    if root.get("intersection_override") is not None:
        override = _parse_set(root["intersection_override"], "intersection_override", dim)
    pts_node = _get(root, "points_of_interest", "", [])
    if not isinstance(pts_node, list):
        raise InstanceError("expected a list of points", _line(pts_node, root), "points_of_interest")
    points = tuple(_vector(p, f"points_of_interest[{k}]", dim, pts_node)
                   for k, p in enumerate(pts_node))
    seed = _int(_get(root, "seed", "", 0), "seed", root)
    samples = _int(_get(root, "samples", "", 10_000), "samples", root)
    if samples < 1:
        raise InstanceError("samples must be positive", _line(root), "samples")
    inst_name = str(_get(root, "name", "", name))
    try:
        coll = Collection(dim, NormContext(kind, mode, tol), sets, override, inst_name)
    except DimensionError as exc:
        raise InstanceError(str(exc), _line(root), "sets") from None
    return Instance(coll, points, seed, samples)


def parse_instance(path, validate: bool = True) -> Instance:
    """Read and validate an instance file.

    Raises InstanceError for malformed input and EmptySetError when the
    sets do not intersect.
    """
    try:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise InstanceError(f"cannot read {path}: {exc.strerror}") from None
    name = os.path.splitext(os.path.basename(str(path)))[0]
    inst = parse_instance_text(text, name)
    if validate:
        try:
            inst.collection.validate()
        except ValueError as exc:
            if isinstance(exc, EmptySetError):
                raise
            raise InstanceError(str(exc), None, "intersection_override") from None
    return inst


# ---------------------------------------------------------------------------
# serialisation
# ---------------------------------------------------------------------------

def fmt(v) -> str:
    """Report cell: rationals as p/q, floats with 12 significant digits."""
    if v is None:
        return ""
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, Fraction):
        return str(v.numerator) if v.denominator == 1 else f"{v.numerator}/{v.denominator}"
    if isinstance(v, int):
        return str(v)
    if isinstance(v, float):
        if math.isinf(v):
            return "inf" if v > 0 else "-inf"
        if math.isnan(v):
            return "nan"
        return "%.12g" % v
    if isinstance(v, (tuple, list)):
        return ",".join(fmt(x) for x in v)
    return str(v)


def _rats(v) -> list[str]:
    return [fmt(la.as_fraction(x)) for x in v]


def set_to_dict(s) -> dict:
    if isinstance(s, HPolyhedron):
        return {"type": "hpoly",
                "rows": [{"a": _rats(r.a), "b": fmt(r.b), "eq": r.eq} for r in s.rows]}
    if isinstance(s, VPolyhedron):
        return {"type": "vpoly", "points": [_rats(p) for p in s.points],
                "rays": [_rats(r) for r in s.rays]}
    if isinstance(s, GeneratedCone):
        return {"type": "cone", "generators": [_rats(g) for g in s.rays]}
    if isinstance(s, Ball):
        return {"type": "ball", "center": _rats(s.center), "radius": fmt(s.radius)}
    if isinstance(s, ShrinkingIntervalFamily):
        return {"type": "shrinking_intervals"}
    raise TypeError(f"unknown set type {type(s).__name__}")


def instance_to_dict(inst: Instance) -> dict:
    c = inst.collection
    out = {
        "name": c.name,
        "space_dim": c.dim,
        "norm": {"kind": c.norm.kind, "mode": c.norm.mode, "tol": fmt(la.as_fraction(c.norm.tol))},
        "sets": [set_to_dict(s) for s in c.sets],
        "points_of_interest": [_rats(p) for p in inst.points],
        "seed": inst.seed,
        "samples": inst.samples,
    }
    if c.intersection_override is not None:
        out["intersection_override"] = set_to_dict(c.intersection_override)
    return out


_SCALAR_LIST = re.compile(r"\[\s*((?:\"[^\"\[\]]*\",?\s*)+)\]")


def dumps_json(obj) -> str:
    """Indented JSON with lists of scalars kept on one line."""
    text = json.dumps(obj, indent=2)
    text = _SCALAR_LIST.sub(lambda m: "[" + ", ".join(
        t.strip() for t in m.group(1).split(",") if t.strip()) + "]", text)
    return text + "\n"


def dumps_instance(inst: Instance) -> str:
    return dumps_json(instance_to_dict(inst))


# ---------------------------------------------------------------------------
# reports
# ---------------------------------------------------------------------------

CONSTANTS_HEADER = ["instance", "norm_kind", "mode", "lambda_N", "lambda_UN", "lambda_D",
                    "lambda_G", "gamma_lb", "gamma_ub", "bisect_tol", "samples", "seed"]
CHIP_HEADER = ["instance", "point", "chip", "chip_closure_variant", "strong_chip", "normal_chip",
               "normal_chip_constant", "weak_normal_chip", "witness"]
TRAJECTORY_HEADER = ["cycle", "error", "ratio"]


def _csv(header: Sequence[str], rows: Sequence[Sequence]) -> str:
    buf = _io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for r in rows:
        w.writerow([fmt(v) for v in r])
    return buf.getvalue()


def _num(v):
    """Constants as cells: INF as float inf, sampled floats as floats."""
    if v == math.inf:
        return math.inf
    return v


def constants_csv(c: Collection, report) -> str:
    row = [c.name, c.norm.kind, c.norm.mode, _num(report.lambda_N), _num(report.lambda_UN),
           _num(report.lambda_D), _num(report.lambda_G), float(report.gamma_lb),
           float(report.gamma_ub), report.bisect_tol, report.samples, report.seed]
    return _csv(CONSTANTS_HEADER, [row])


def chip_csv(c: Collection, reports) -> str:
    rows = [[c.name, r.point, r.chip, r.chip_closure_variant, r.strong_chip, r.normal_chip,
             _num(r.normal_chip_constant), r.weak_normal_chip, r.witness] for r in reports]
    return _csv(CHIP_HEADER, rows)


def trajectory_csv(traj) -> str:
    rows = [[0, traj.errors[0], None]]
    rows += [[k, traj.errors[k], traj.ratios[k - 1]] for k in range(1, len(traj.errors))]
    return _csv(TRAJECTORY_HEADER, rows)


def _md_value(v) -> str:
    if isinstance(v, dict):
        return "; ".join(f"{k}={_md_value(x)}" for k, x in v.items())
    if isinstance(v, (tuple, list)) and v and isinstance(v[0], (tuple, list)):
        return " ".join(f"({fmt(x)})" for x in v)
    if isinstance(v, (tuple, list)):
        return f"({fmt(v)})"
    return fmt(v)


def theorems_md(c: Collection, reports, descriptions: dict | None = None) -> str:
    lines = [f"# Theorem checks: {c.name}", "",
             f"norm: {c.norm.kind}, mode: {c.norm.mode}, sets: {len(c.sets)}, dimension: {c.dim}", ""]
    for r in reports:
        lines.append(f"## {r.theorem_id}: {r.status.upper()}")
        lines.append("")
        if descriptions and r.theorem_id in descriptions:
            lines.append(f"_{descriptions[r.theorem_id]}_")
            lines.append("")
        for k, v in r.details.items():
            lines.append(f"- {k}: {_md_value(v)}")
        if r.witness is not None:
            lines.append(f"- witness: {_md_value(r.witness)}")
        lines.append("")
    return "\n".join(lines)
