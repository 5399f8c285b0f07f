"""JSON interchange for spaces, measures, maps, tables, and hierarchies.

One rule everywhere: a string where a document is expected is a path to a
JSON file; a dict is the document itself.  Documents produced by the
command-line tool are wrapped in a report envelope ({"command", "version",
"params", "result"}); every loader unwraps that transparently, so a report
written by one command can feed the next.

Malformed documents (wrong JSON shape, missing keys) raise SchemaError.
Well-formed documents describing invalid objects (a matrix violating the
triangle inequality, rows that do not sum to 1) raise the domain errors of
the module that owns the object.
"""

from __future__ import annotations

import json
import math
import os
import tempfile

import numpy as np

from .covering import CoverHierarchy, CoverLevel
from .errors import SchemaError
from .measures import DiscreteMeasure
from .mechanisms import MechanismTable
from .spaces import FiniteMetricSpace, LipschitzMap, discrete_space, grid_space

# JSON has no infinity literal; reports spell it as this string.
INFINITY = "infinity"


def encode_value(v: float):
    """Float for JSON, with inf spelled as a string."""
    v = float(v)
    if math.isinf(v):
        return INFINITY if v > 0 else "-" + INFINITY
    return v


def decode_value(v) -> float:
    """Inverse of encode_value."""
    if v == INFINITY:
        return math.inf
    if v == "-" + INFINITY:
        return -math.inf
    if isinstance(v, (int, float)) and not isinstance(v, bool):
        return float(v)
    raise SchemaError(f"expected a number or {INFINITY!r}, got {v!r}")


def jsonable(obj):
    """Recursively convert numpy scalars/arrays and infinities to plain
    JSON-serializable Python values."""
    if isinstance(obj, dict):
        return {str(k): jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [jsonable(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return [jsonable(v) for v in obj.tolist()]
    if isinstance(obj, (np.floating, float)):
        return encode_value(float(obj))
    if isinstance(obj, (np.integer,)):
        return int(obj)
    if isinstance(obj, (np.bool_,)):
        return bool(obj)
    return obj


def load_doc(source) -> dict:
    """Resolve a path-or-dict into a bare document, unwrapping any report
    envelope so reports are directly reusable as inputs."""
    if isinstance(source, str):
        try:
            with open(source, "r", encoding="utf-8") as fh:
                doc = json.load(fh)
        except OSError as exc:
            raise SchemaError(f"cannot read {source}: {exc}") from exc
        except json.JSONDecodeError as exc:
            raise SchemaError(f"{source} is not valid JSON: {exc}") from exc
    else:
        doc = source
    if not isinstance(doc, dict):
        raise SchemaError(f"expected a JSON object, got {type(doc).__name__}")
    while "result" in doc and "command" in doc:
        doc = doc["result"]
        if not isinstance(doc, dict):
            raise SchemaError("report envelope holds a non-object result")
    return doc


def dump_doc(doc: dict) -> str:
    """Canonical serialization: sorted keys, two-space indent, trailing
    newline.  allow_nan=False so an accidental NaN fails loudly instead of
    producing invalid JSON."""
    return json.dumps(jsonable(doc), indent=2, sort_keys=True, allow_nan=False) + "\n"


def write_doc(path: str, doc: dict) -> None:
    """Atomic write: temp file in the target directory, then rename."""
    text = dump_doc(doc)
    directory = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(dir=directory, suffix=".tmp")
    try:
        with os.fdopen(fd, "w", encoding="utf-8") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _require(doc: dict, key: str, context: str):
    if key not in doc:
        raise SchemaError(f"{context} document is missing {key!r}")
    return doc[key]


def space_components(source) -> tuple:
    """(labels, dist matrix) from a space document, expanding the generator
    forms {"kind": "grid"|"discrete", "n": k}.  Returns raw parts so callers
    can run the full axiom validator before construction."""
    doc = load_doc(source)
    if "kind" in doc:
        kind = doc["kind"]
        n = _require(doc, "n", "space generator")
        if not isinstance(n, int) or isinstance(n, bool) or n < 1:
            raise SchemaError(f"generator size must be a positive integer, got {n!r}")
        if kind == "grid":
            s = grid_space(n)
        elif kind == "discrete":
            s = discrete_space(n)
        else:
            raise SchemaError(f"unknown space generator kind {kind!r}")
        return list(s.labels), np.array(s.dist)
    labels = _require(doc, "labels", "space")
    dist = _require(doc, "dist", "space")
    if not isinstance(labels, list) or not all(isinstance(x, str) for x in labels):
        raise SchemaError("space labels must be a list of strings")
    try:
        mat = np.array(dist, dtype=float)
    except (TypeError, ValueError) as exc:
        raise SchemaError(f"space dist is not a numeric matrix: {exc}") from exc
    if mat.ndim != 2:
        raise SchemaError(f"space dist must be a 2-d matrix, got {mat.ndim} dimension(s)")
    return labels, mat


def space_from_doc(source) -> FiniteMetricSpace:
    labels, mat = space_components(source)
    return FiniteMetricSpace(labels, mat)


def space_to_doc(space: FiniteMetricSpace) -> dict:
    return {
        "labels": list(space.labels),
        "dist": [[float(v) for v in row] for row in space.dist],
    }


def _labels_space(labels) -> FiniteMetricSpace:
    """Placeholder space over given labels (all distances 1).  Used when a
    table file is audited without an accompanying metric; fine for any
    operation that never reads distances."""
    labels = list(labels)
    n = len(labels)
    dist = np.ones((n, n)) - np.eye(n)
    return FiniteMetricSpace(labels, dist)


def measure_from_doc(source, space: FiniteMetricSpace | None = None) -> DiscreteMeasure:
    doc = load_doc(source)
    weights = _require(doc, "weights", "measure")
    if not isinstance(weights, dict):
        raise SchemaError("measure weights must be an object mapping label to number")
    if space is None:
        space = space_from_doc(_require(doc, "space", "measure"))
    return DiscreteMeasure(space, {k: float(v) for k, v in weights.items()})


def measure_to_doc(measure: DiscreteMeasure) -> dict:
    return {
        "space": space_to_doc(measure.space),
        "weights": {lab: float(w) for lab, w in zip(measure.space.labels, measure.values)},
    }


def map_from_doc(source) -> LipschitzMap:
    doc = load_doc(source)
    domain = space_from_doc(_require(doc, "domain", "map"))
    codomain = space_from_doc(_require(doc, "codomain", "map"))
    table = _require(doc, "table", "map")
    if not isinstance(table, dict):
        raise SchemaError("map table must be an object mapping input label to output label")
    declared = doc.get("lipschitz_c")
    if declared is not None:
        declared = float(declared)
    return LipschitzMap(domain, codomain, table, declared_constant=declared)


def map_to_doc(lmap: LipschitzMap) -> dict:
    return {
        "domain": space_to_doc(lmap.domain),
        "codomain": space_to_doc(lmap.codomain),
        "table": {x: lmap(x) for x in lmap.domain.labels},
        "lipschitz_c": float(lmap.constant),
    }


def table_from_doc(
    source,
    input_space: FiniteMetricSpace | None = None,
    output_space: FiniteMetricSpace | None = None,
) -> MechanismTable:
    """Load a mechanism table.  The file stores only label lists; callers
    that need real geometry (privacy audits need input distances, utility
    audits output distances) pass the spaces, which must list the same
    labels in the same order.  Omitted spaces default to all-ones
    placeholders over the file's labels."""
    doc = load_doc(source)
    inputs = _require(doc, "inputs", "table")
    outputs = _require(doc, "outputs", "table")
    rows = _require(doc, "rows", "table")
    for name, val in (("inputs", inputs), ("outputs", outputs)):
        if not isinstance(val, list) or not all(isinstance(x, str) for x in val):
            raise SchemaError(f"table {name} must be a list of strings")
    if not isinstance(rows, dict):
        raise SchemaError("table rows must be an object mapping input label to a row")
    if input_space is None:
        input_space = _labels_space(inputs)
    elif list(input_space.labels) != inputs:
        raise SchemaError("table inputs do not match the supplied input space's labels")
    if output_space is None:
        output_space = _labels_space(outputs)
    elif list(output_space.labels) != outputs:
        raise SchemaError("table outputs do not match the supplied output space's labels")
    missing = [x for x in inputs if x not in rows]
    if missing:
        raise SchemaError(f"table has no row for input {missing[0]!r}")
    known = set(inputs)
    extra = [x for x in rows if x not in known]
    if extra:
        raise SchemaError(f"table has a row for unknown input {extra[0]!r}")
    try:
        mat = np.array([rows[x] for x in inputs], dtype=float)
    except (TypeError, ValueError) as exc:
        raise SchemaError(f"table rows are not numeric arrays: {exc}") from exc
    if mat.ndim != 2 or mat.shape[1] != len(outputs):
        raise SchemaError("table rows must all have one probability per output label")
    return MechanismTable(input_space, output_space, mat)


def table_to_doc(mech: MechanismTable) -> dict:
    return {
        "inputs": list(mech.input_space.labels),
        "outputs": list(mech.output_space.labels),
        "rows": {
            x: [float(p) for p in mech.probs[i]]
            for i, x in enumerate(mech.input_space.labels)
        },
    }


def hierarchy_from_doc(source, space: FiniteMetricSpace) -> CoverHierarchy:
    doc = load_doc(source)
    levels_doc = _require(doc, "levels", "hierarchy")
    if not isinstance(levels_doc, list) or not levels_doc:
        raise SchemaError("hierarchy levels must be a nonempty list")
    levels = []
    for item in levels_doc:
        if not isinstance(item, dict):
            raise SchemaError("each hierarchy level must be an object")
        radius = float(_require(item, "radius", "hierarchy level"))
        centers = _require(item, "centers", "hierarchy level")
        if not isinstance(centers, list):
            raise SchemaError("hierarchy level centers must be a list of labels")
        levels.append(CoverLevel(radius=radius, centers=tuple(centers)))
    declared = doc.get("L")
    if declared is not None and declared != len(levels):
        raise SchemaError(f"hierarchy declares L={declared} but has {len(levels)} levels")
    return CoverHierarchy(space, levels)


def hierarchy_to_doc(hier: CoverHierarchy) -> dict:
    return {
        "L": hier.depth,
        "levels": [
            {"radius": float(lev.radius), "centers": list(lev.centers)}
            for lev in hier.levels
        ],
    }
