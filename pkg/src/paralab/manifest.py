"""YAML chart manifests (format version 1).

A manifest is a mapping with the keys ``version`` (must be 1), ``name``,
``epsilon``, ``coordinates``, optional ``domain``, ``metric``, ``phi``,
``xi``, ``eta``, and optional ``description`` and ``expected``.  Component
entries are expression strings (plain numbers are accepted too).  Metric
rows may stop at the diagonal; a full matrix must be symmetric.
"""

from __future__ import annotations

import os
import re

import numpy as np
import yaml

from .charts import StructuredChart
from .errors import ManifestError, ParseError, StructureError
from .expr import parse_expression
from .gallery import FAILS, HOLDS, MIXED, PROPERTIES

FORMAT_VERSION = 1
_KEYS = {
    "version", "name", "epsilon", "coordinates", "domain", "metric", "phi", "xi", "eta",
    "description", "expected",
}
_IDENT = re.compile(r"[A-Za-z_][A-Za-z_0-9]*\Z")


def _expr(value, coords, path):
    if isinstance(value, bool) or value is None:
        raise ManifestError(f"expected an expression, got {value!r}", path)
    if isinstance(value, (int, float)):
        value = repr(float(value))
    if not isinstance(value, str):
        raise ManifestError(f"expected an expression string, got {type(value).__name__}", path)
    try:
        return parse_expression(value, coords)
    except ParseError as exc:
        raise ManifestError(str(exc), path) from None


def _seq(doc, key, length=None):
    value = doc.get(key)
    if not isinstance(value, list):
        raise ManifestError("expected a list", key)
    if length is not None and len(value) != length:
        raise ManifestError(f"expected {length} entries, got {len(value)}", key)
    return value


def _number(value, path):
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ManifestError(f"expected a number, got {value!r}", path)
    return float(value)


def _domain(doc, coords):
    raw = doc.get("domain")
    n = len(coords)
    if raw is None:
        return ((-1.0, 1.0),) * n
    if isinstance(raw, dict):
        unknown = set(raw) - set(coords)
        if unknown:
            raise ManifestError(f"unknown coordinates {sorted(unknown)}", "domain")
        pairs = [raw.get(c, [-1.0, 1.0]) for c in coords]
        paths = [f"domain.{c}" for c in coords]
    elif isinstance(raw, list):
        if len(raw) != n:
            raise ManifestError(f"expected {n} intervals, got {len(raw)}", "domain")
        pairs = raw
        paths = [f"domain[{i}]" for i in range(n)]
    else:
        raise ManifestError("expected a mapping or a list of [lo, hi] pairs", "domain")
    out = []
    for pair, path in zip(pairs, paths):
        if not isinstance(pair, list) or len(pair) != 2:
            raise ManifestError("expected [lo, hi]", path)
        lo, hi = _number(pair[0], path), _number(pair[1], path)
        if not (np.isfinite(lo) and np.isfinite(hi) and lo < hi):
            raise ManifestError(f"empty or unbounded interval [{lo}, {hi}]", path)
        out.append((lo, hi))
    return tuple(out)


def _metric(doc, coords):
    n = len(coords)
    rows = _seq(doc, "metric", n)
    g = np.empty((n, n), dtype=object)
    given = np.zeros((n, n), dtype=bool)
    for i, row in enumerate(rows):
        if not isinstance(row, list) or len(row) not in (i + 1, n):
            raise ManifestError(f"row must have {i + 1} (lower triangle) or {n} entries", f"metric[{i}]")
        for j, value in enumerate(row):
            g[i, j] = _expr(value, coords, f"metric[{i}][{j}]")
            given[i, j] = True
    for i in range(n):
        for j in range(i + 1, n):
            if given[i, j]:
                if g[i, j] != g[j, i]:
                    raise ManifestError(
                        f"metric is not symmetric: {g[i, j]} vs metric[{j}][{i}] = {g[j, i]}",
                        f"metric[{i}][{j}]",
                    )
            g[i, j] = g[j, i]
    return g


def load_manifest(doc, source=None):
    """Build a :class:`StructuredChart` from a parsed manifest mapping."""
    try:
        return _load(doc)
    except ManifestError as exc:
        if source:
            raise ManifestError(f"{source}: {exc}") from None
        raise


def _load(doc):
    if not isinstance(doc, dict):
        raise ManifestError("manifest must be a mapping")
    unknown = set(doc) - _KEYS
    if unknown:
        raise ManifestError(f"unknown keys {sorted(unknown)}")
    if doc.get("version") != FORMAT_VERSION:
        raise ManifestError(f"unsupported version {doc.get('version')!r} (expected 1)", "version")
    name = doc.get("name")
    if not isinstance(name, str) or not name:
        raise ManifestError("expected a nonempty string", "name")
    eps = doc.get("epsilon")
    if isinstance(eps, bool) or eps not in (1, -1):
        raise ManifestError(f"must be 1 or -1, got {eps!r}", "epsilon")
    coords = _seq(doc, "coordinates")
    for i, c in enumerate(coords):
        if not isinstance(c, str) or not _IDENT.match(c):
            raise ManifestError(f"invalid coordinate name {c!r}", f"coordinates[{i}]")
    if len(set(coords)) != len(coords) or not coords:
        raise ManifestError("coordinate names must be nonempty and distinct", "coordinates")
    n = len(coords)
    domain = _domain(doc, coords)
    g = _metric(doc, coords)
    phi_rows = _seq(doc, "phi", n)
    phi = np.empty((n, n), dtype=object)
    for i, row in enumerate(phi_rows):
        if not isinstance(row, list) or len(row) != n:
            raise ManifestError(f"row must have {n} entries", f"phi[{i}]")
        for j, value in enumerate(row):
            phi[i, j] = _expr(value, coords, f"phi[{i}][{j}]")
    xi = np.array([_expr(v, coords, f"xi[{i}]") for i, v in enumerate(_seq(doc, "xi", n))], dtype=object)
    eta = np.array([_expr(v, coords, f"eta[{i}]") for i, v in enumerate(_seq(doc, "eta", n))], dtype=object)
    description = doc.get("description", "")
    if not isinstance(description, str):
        raise ManifestError("expected a string", "description")
    try:
        return StructuredChart(
            name=name, epsilon=int(eps), coords=tuple(coords), domain=domain,
            g=g, phi=phi, xi=xi, eta=eta, description=description,
        )
    except StructureError as exc:
        raise ManifestError(str(exc)) from None


def load_expected(doc):
    """Expected statuses listed in a manifest, as ``(property, status)`` pairs."""
    raw = doc.get("expected") or {}
    if not isinstance(raw, dict):
        raise ManifestError("expected a mapping of property: status", "expected")
    out = []
    for prop, status in raw.items():
        if prop not in PROPERTIES:
            raise ManifestError(f"unknown property {prop!r}", f"expected.{prop}")
        if status not in (HOLDS, FAILS, MIXED):
            raise ManifestError(f"status must be holds, fails or mixed, got {status!r}", f"expected.{prop}")
        out.append((prop, status))
    return tuple(out)


def read_manifest_file(path):
    """Parse a YAML manifest file into ``(chart, expected)``."""
    try:
        with open(path, encoding="utf-8") as fh:
            doc = yaml.safe_load(fh)
    except OSError as exc:
        raise ManifestError(f"cannot read manifest: {exc.strerror}", os.fspath(path)) from None
    except yaml.YAMLError as exc:
        raise ManifestError(f"invalid YAML: {exc}", os.fspath(path)) from None
    src = os.fspath(path)
    chart = load_manifest(doc, source=src)
    try:
        expected = load_expected(doc)
    except ManifestError as exc:
        raise ManifestError(f"{src}: {exc}") from None
    return chart, expected


def dump_manifest(chart, expected=()):
    """Manifest mapping for ``chart`` (lower-triangle metric rows)."""
    n = chart.dim
    doc = {
        "version": FORMAT_VERSION,
        "name": chart.name,
        "epsilon": chart.epsilon,
        "coordinates": list(chart.coords),
        "domain": {c: [lo, hi] for c, (lo, hi) in zip(chart.coords, chart.domain)},
        "metric": [[chart.g[i, j].to_source() for j in range(i + 1)] for i in range(n)],
        "phi": [[chart.phi[i, j].to_source() for j in range(n)] for i in range(n)],
        "xi": [f.to_source() for f in chart.xi],
        "eta": [f.to_source() for f in chart.eta],
    }
    if chart.description:
        doc["description"] = chart.description
    if expected:
        doc["expected"] = dict(expected)
    return doc


def dumps_manifest(chart, expected=()):
    return yaml.safe_dump(dump_manifest(chart, expected), sort_keys=False, default_flow_style=None)
