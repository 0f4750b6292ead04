"""System-description documents: one JSON document per system.

Schema (all kinds):
    {"system_id": str,
     "kind": "euclidean" | "cantor" | "sierpinski" | "otw" | "table",
     "parameters": {...},            # kind-specific, see below
     "dom_clopen": bool, "compact_space": bool}

Non-table kinds name a gallery family through parameters.family plus its
builder arguments; the flags are recorded for round-tripping but the builder
owns their actual values.  The table kind lists the system explicitly:

    parameters = {"points": ["3/4", "-1/2", ...],   # exact rationals
                  "mapping": {"0": 2, ...},          # index -> index
                  "resolution": "1/8"}               # optional

Table points live on the rational line with the absolute-value metric; they
are the brute-force test systems.
"""

from __future__ import annotations

import json
import os
import tempfile
from fractions import Fraction

from . import gallery
from .points import abs_metric, euclidean
from .system import make_table_system


class DescriptionError(ValueError):
    pass


def loads(text):
    doc = json.loads(text)
    return from_document(doc)


def load_path(path):
    with open(path) as fh:
        return from_document(json.load(fh))


def from_document(doc):
    """Build (gallery_entry_or_None, PartialSystem) from a description."""
    kind = doc.get("kind")
    params = dict(doc.get("parameters", {}))
    if kind == "table":
        return None, _table_from_params(doc.get("system_id", "table"), params, doc)
    family = params.pop("family", None) or doc.get("system_id")
    if family not in gallery.BUILDERS:
        raise DescriptionError("unknown system family: %r" % (family,))
    entry = gallery.build(family, **params)
    return entry, entry.system


def _table_from_params(system_id, params, doc):
    raw_pts = params.get("points")
    if not raw_pts:
        raise DescriptionError("table description needs points")
    pts = [euclidean(Fraction(v)) for v in raw_pts]
    mapping = {}
    for k, v in dict(params.get("mapping", {})).items():
        i, j = int(k), int(v)
        if not (0 <= i < len(pts) and 0 <= j < len(pts)):
            raise DescriptionError("mapping index out of range: %s -> %s" % (k, v))
        mapping[pts[i]] = pts[j]
    res = Fraction(params["resolution"]) if "resolution" in params else Fraction(0)
    return make_table_system(
        system_id,
        pts,
        mapping,
        abs_metric,
        dom_clopen=bool(doc.get("dom_clopen", True)),
        compact_space=bool(doc.get("compact_space", True)),
        resolution=res,
    )


def describe_gallery(entry):
    """Description document for a gallery system (round-trippable)."""
    return {
        "system_id": entry.id,
        "kind": entry.system.kind,
        "parameters": {"family": entry.id},
        "dom_clopen": entry.system.dom_clopen,
        "compact_space": entry.system.compact_space,
    }


def describe_table(sys):
    pts = list(sys.sample)
    idx = {p: i for i, p in enumerate(pts)}
    mapping = {
        str(i): idx[sys.apply(p)] for i, p in enumerate(pts) if sys.in_domain(p)
    }
    return {
        "system_id": sys.space_id,
        "kind": "table",
        "parameters": {
            "points": [str(p.coords[0]) for p in pts],
            "mapping": mapping,
            "resolution": str(sys.resolution),
        },
        "dom_clopen": sys.dom_clopen,
        "compact_space": sys.compact_space,
    }


def write_atomic(path, doc):
    """Write JSON via a temp file and rename, so readers never see partials."""
    directory = os.path.dirname(os.path.abspath(path)) or "."
    fd, tmp = tempfile.mkstemp(dir=directory, suffix=".tmp")
    try:
        with os.fdopen(fd, "w") as fh:
            json.dump(doc, fh, indent=2, sort_keys=True)
            fh.write("\n")
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise
