"""JSON file formats for channels, diagram environments and reports.

Complex numbers are ``[re, im]`` pairs and matrices are row-major nested
lists of them. A channel file looks like::

    {"kind": "choi", "dim_in": 2, "dim_out": 2, "data": [[[1, 0], ...], ...]}

with ``kind`` one of ``choi``, ``superop``, ``kraus`` (``data`` is then a
list of matrices) or ``unitary``. An environment file binds named boxes::

    {"tensors": {"f": {"data": [[...]], "dom": [2], "cod": [3]}}}
"""

import json

import numpy as np

from . import channels
from .diagram import Env
from .errors import ChoiscopeError, DimensionError

KINDS = ("choi", "superop", "kraus", "unitary")


class FormatError(ChoiscopeError):
    """Malformed file; ``where`` locates the problem (``line:col`` or a JSON path)."""

    def __init__(self, message, where=None):
        self.where = where
        super().__init__(f"{where}: {message}" if where else message)


def loads(text, source="<input>"):
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise FormatError(exc.msg, f"{source}:{exc.lineno}:{exc.colno}") from None


def load_json(path):
    try:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise FormatError(f"cannot read file: {exc.strerror}", str(path)) from None
    return loads(text, str(path))


def _number(x, where):
    if isinstance(x, bool) or not isinstance(x, (int, float)):
        raise FormatError(f"expected a number, got {json.dumps(x)}", where)
    return float(x)


def decode_matrix(obj, where="data"):
    if not isinstance(obj, list) or not obj:
        raise FormatError("expected a nonempty list of rows", where)
    rows = []
    for r, row in enumerate(obj):
        if not isinstance(row, list) or not row:
            raise FormatError("expected a nonempty list of [re, im] pairs", f"{where}[{r}]")
        vals = []
        for c, z in enumerate(row):
            pos = f"{where}[{r}][{c}]"
            if not isinstance(z, list) or len(z) != 2:
                raise FormatError("expected an [re, im] pair", pos)
            vals.append(complex(_number(z[0], pos + "[0]"), _number(z[1], pos + "[1]")))
        rows.append(vals)
    widths = {len(row) for row in rows}
    if len(widths) != 1:
        raise FormatError(f"ragged matrix with row lengths {sorted(widths)}", where)
    m = np.array(rows, dtype=np.complex128)
    if not np.all(np.isfinite(m)):
        raise FormatError("non-finite entry", where)
    return m


def encode_matrix(m):
    m = np.asarray(m, dtype=np.complex128)
    if m.ndim == 1:
        m = m.reshape(-1, 1)
    return [[[float(z.real), float(z.imag)] for z in row] for row in m]


def _dim(doc, key):
    if key not in doc:
        raise FormatError(f"missing field {key!r}", "$")
    v = doc[key]
    if isinstance(v, bool) or not isinstance(v, int) or v < 1:
        raise FormatError(f"{key} must be a positive integer, got {json.dumps(v)}", f"$.{key}")
    return v


def _expect_shape(m, shape, where):
    if m.shape != shape:
        raise DimensionError(f"{where}: expected shape {shape[0]}x{shape[1]}, got {m.shape[0]}x{m.shape[1]}")


def decode_channel(doc, normalized=False):
    """Build a :class:`~choiscope.channels.Channel` from a parsed channel file.

    Raises :class:`FormatError` for structural problems and
    :class:`DimensionError` when shapes disagree with the declared dims.
    ``normalized`` marks a density-scaled Choi matrix (``J / dim_in``).
    """
    if not isinstance(doc, dict):
        raise FormatError("top level must be an object", "$")
    kind = doc.get("kind")
    if kind not in KINDS:
        raise FormatError(f"kind must be one of {list(KINDS)}, got {json.dumps(kind)}", "$.kind")
    dim_in, dim_out = _dim(doc, "dim_in"), _dim(doc, "dim_out")
    if "data" not in doc:
        raise FormatError("missing field 'data'", "$")
    data = doc["data"]

    if kind == "kraus":
        if not isinstance(data, list) or not data:
            raise FormatError("kraus data must be a nonempty list of matrices", "$.data")
        ops = [decode_matrix(m, f"$.data[{k}]") for k, m in enumerate(data)]
        for k, f in enumerate(ops):
            _expect_shape(f, (dim_out, dim_in), f"$.data[{k}]")
        return channels.from_kraus(ops)
    m = decode_matrix(data, "$.data")
    if kind == "choi":
        n = dim_in * dim_out
        _expect_shape(m, (n, n), "$.data")
        return channels.Channel.from_choi(m, dim_in, dim_out, normalized=normalized)
    if kind == "superop":
        _expect_shape(m, (dim_out**2, dim_in**2), "$.data")
        return channels.Channel.from_superop(m, dim_in, dim_out)
    if dim_in != dim_out:
        raise DimensionError(f"unitary channel needs dim_in == dim_out, got {dim_in} and {dim_out}")
    _expect_shape(m, (dim_in, dim_in), "$.data")
    return channels.unitary_channel(m)


def read_channel(path, normalized=False):
    return decode_channel(load_json(path), normalized)


def encode_channel(c, kind="choi", tol=None):
    """Channel file document in representation ``kind`` (``choi``, ``superop`` or ``kraus``)."""
    doc = {"kind": kind, "dim_in": c.dim_a, "dim_out": c.dim_b}
    if kind == "choi":
        doc["data"] = encode_matrix(c.choi)
    elif kind == "superop":
        doc["data"] = encode_matrix(c.superop)
    elif kind == "kraus":
        ops = channels.kraus_decompose(c) if tol is None else channels.kraus_decompose(c, tol)
        doc["data"] = [encode_matrix(f) for f in ops]
    else:
        raise ValueError(f"cannot encode as {kind!r}")
    return doc


def decode_env(doc):
    if not isinstance(doc, dict) or not isinstance(doc.get("tensors"), dict):
        raise FormatError("environment must be an object with a 'tensors' object", "$")
    env = Env()
    for name, entry in doc["tensors"].items():
        where = f"$.tensors.{name}"
        if not isinstance(entry, dict) or "data" not in entry:
            raise FormatError("expected an object with 'data'", where)
        m = decode_matrix(entry["data"], where + ".data")
        dims = {}
        for key in ("dom", "cod"):
            v = entry.get(key)
            if v is not None and (not isinstance(v, list) or not all(isinstance(d, int) and not isinstance(d, bool) for d in v)):
                raise FormatError(f"{key} must be a list of integers", f"{where}.{key}")
            dims[key] = v
        env.bind(name, m, dims["dom"], dims["cod"])
    return env


def read_env(path):
    return decode_env(load_json(path))


def encode_env(bindings):
    """``{name: (matrix, dom, cod)}`` to an environment document."""
    return {
        "tensors": {
            name: {"data": encode_matrix(m), "dom": list(dom), "cod": list(cod)}
            for name, (m, dom, cod) in bindings.items()
        }
    }


def encode_report(report, version, seed, tol, pp_restarts):
    pp = report.pp
    witness = None
    if pp.witness is not None:
        witness = {
            "a": [[float(z.real), float(z.imag)] for z in pp.witness.a],
            "b": [[float(z.real), float(z.imag)] for z in pp.witness.b],
            "value": pp.witness.value,
        }
    return {
        "tool": "choiscope",
        "version": version,
        "seed": seed,
        "tol": {"rel": tol.rel, "abs": tol.abs},
        "pp_restarts": pp_restarts,
        "dim_in": report.dim_a,
        "dim_out": report.dim_b,
        "hp": {"holds": report.hp.holds, "margin": report.hp.margin},
        "tp": {"holds": report.tp.holds, "margin": report.tp.margin},
        "unital": {"holds": report.unital.holds, "margin": report.unital.margin},
        "cpp": {"holds": report.cpp.holds, "min_eigenvalue": report.cpp.margin},
        "pp": {
            "status": pp.status,
            "best_value": None if np.isnan(pp.best_value) else pp.best_value,
            "threshold": pp.threshold,
            "restarts": pp.restarts,
            "iterations": pp.iterations,
            "witness": witness,
        },
        "doubly_stochastic": report.doubly_stochastic,
        "choi_trace": report.choi_trace,
    }


def dumps(doc):
    return json.dumps(doc, indent=2, sort_keys=True) + "\n"
