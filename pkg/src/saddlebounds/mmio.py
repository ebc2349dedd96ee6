"""Matrix Market reader and writer for dense real matrices.

Handles coordinate and array formats with general or symmetric storage.
Values are written with 17 significant digits so float64 entries
round-trip exactly, and entries are emitted in a fixed column-major
order so output bytes are stable.
"""

import re

import numpy as np

from .errors import ParseError, StructureError

_TOKEN = re.compile(r"\S+")

_BANNER = "%%matrixmarket"
_FORMATS = ("coordinate", "array")
_FIELDS = ("real", "integer")
_SYMMETRIES = ("general", "symmetric")


def _tokens(line):
    """(text, 1-based column) for each whitespace-separated token."""
    return [(m.group(0), m.start() + 1) for m in _TOKEN.finditer(line)]


def _parse_int(text, lineno, column):
    try:
        return int(text)
    except ValueError:
        raise ParseError(f"expected an integer, got {text!r}", lineno, column) from None


def _parse_float(text, lineno, column):
    try:
        return float(text)
    except ValueError:
        raise ParseError(f"expected a number, got {text!r}", lineno, column) from None


def read_matrix_market(path):
    """Read a Matrix Market file into a dense float array."""
    with open(path, "r", encoding="ascii", errors="replace") as fh:
        lines = fh.read().splitlines()
    if not lines:
        raise ParseError("empty file", 1)

    header = _tokens(lines[0])
    if not header or header[0][0].lower() != _BANNER:
        raise ParseError("missing %%MatrixMarket banner", 1, 1)
    if len(header) != 5:
        raise ParseError(
            f"banner needs 5 tokens (banner, object, format, field, symmetry), got {len(header)}",
            1,
        )
    obj = header[1][0].lower()
    fmt = header[2][0].lower()
    field = header[3][0].lower()
    symmetry = header[4][0].lower()
    if obj != "matrix":
        raise ParseError(f"unsupported object {obj!r}", 1, header[1][1])
    if fmt not in _FORMATS:
        raise ParseError(f"unsupported format {fmt!r}", 1, header[2][1])
    if field not in _FIELDS:
        raise ParseError(f"unsupported field {field!r} (need real data)", 1, header[3][1])
    if symmetry not in _SYMMETRIES:
        raise ParseError(f"unsupported symmetry {symmetry!r}", 1, header[4][1])

    # skip comments, locate the size line
    idx = 1
    while idx < len(lines) and lines[idx].lstrip().startswith("%"):
        idx += 1
    if idx >= len(lines) or not lines[idx].strip():
        raise ParseError("missing size line", idx + 1)
    size_toks = _tokens(lines[idx])
    want = 3 if fmt == "coordinate" else 2
    if len(size_toks) != want:
        raise ParseError(
            f"size line needs {want} integers for {fmt} format, got {len(size_toks)}",
            idx + 1,
        )
    rows = _parse_int(size_toks[0][0], idx + 1, size_toks[0][1])
    cols = _parse_int(size_toks[1][0], idx + 1, size_toks[1][1])
    if rows <= 0 or cols <= 0:
        raise ParseError(f"matrix dimensions must be positive, got {rows} x {cols}", idx + 1)
    if symmetry == "symmetric" and rows != cols:
        raise ParseError(f"symmetric matrix must be square, got {rows} x {cols}", idx + 1)
    out = np.zeros((rows, cols))

    data_lines = []
    for off, line in enumerate(lines[idx + 1 :], start=idx + 2):
        if line.lstrip().startswith("%") or not line.strip():
            continue
        data_lines.append((off, line))

    if fmt == "coordinate":
        nnz = _parse_int(size_toks[2][0], idx + 1, size_toks[2][1])
        if len(data_lines) != nnz:
            raise ParseError(
                f"expected {nnz} entries, found {len(data_lines)}",
                data_lines[-1][0] if data_lines else idx + 1,
            )
        for lineno, line in data_lines:
            toks = _tokens(line)
            if len(toks) != 3:
                raise ParseError(f"entry needs 'row col value', got {len(toks)} tokens", lineno)
            i = _parse_int(toks[0][0], lineno, toks[0][1])
            j = _parse_int(toks[1][0], lineno, toks[1][1])
            v = _parse_float(toks[2][0], lineno, toks[2][1])
            if not 1 <= i <= rows:
                raise ParseError(f"row index {i} outside 1..{rows}", lineno, toks[0][1])
            if not 1 <= j <= cols:
                raise ParseError(f"column index {j} outside 1..{cols}", lineno, toks[1][1])
            out[i - 1, j - 1] = v
            if symmetry == "symmetric":
                out[j - 1, i - 1] = v
    else:
        if symmetry == "symmetric":
            coords = [(i, j) for j in range(cols) for i in range(j, rows)]
        else:
            coords = [(i, j) for j in range(cols) for i in range(rows)]
        if len(data_lines) != len(coords):
            raise ParseError(
                f"expected {len(coords)} values for a {rows} x {cols} {symmetry} array, "
                f"found {len(data_lines)}",
                data_lines[-1][0] if data_lines else idx + 1,
            )
        for (lineno, line), (i, j) in zip(data_lines, coords):
            toks = _tokens(line)
            if len(toks) != 1:
                raise ParseError(f"array entry needs one value per line, got {len(toks)}", lineno)
            v = _parse_float(toks[0][0], lineno, toks[0][1])
            out[i, j] = v
            if symmetry == "symmetric":
                out[j, i] = v
    return out


def format_matrix_market(array, symmetric=False, comment=None):
    """Render a dense matrix in coordinate format; symmetric storage
    keeps the lower triangle only."""
    arr = np.asarray(array, dtype=float)
    if arr.ndim != 2:
        raise StructureError(f"expected a 2-D matrix, got shape {arr.shape}")
    rows, cols = arr.shape
    if symmetric:
        if rows != cols:
            raise StructureError(f"symmetric output needs a square matrix, got {rows} x {cols}")
        if not np.array_equal(arr, arr.T):
            raise StructureError("symmetric output needs exactly symmetric entries")
    kind = "symmetric" if symmetric else "general"
    out = [f"%%MatrixMarket matrix coordinate real {kind}"]
    if comment:
        out.extend(f"% {c}" for c in str(comment).splitlines())
    entries = []
    for j in range(cols):
        start = j if symmetric else 0
        for i in range(start, rows):
            if arr[i, j] != 0.0:
                entries.append((i, j, arr[i, j]))
    out.append(f"{rows} {cols} {len(entries)}")
    out.extend(f"{i + 1} {j + 1} {v:.17g}" for i, j, v in entries)
    return "\n".join(out) + "\n"


def write_matrix_market(path, array, symmetric=False, comment=None):
    """Write a dense matrix to a coordinate-format Matrix Market file."""
    text = format_matrix_market(array, symmetric=symmetric, comment=comment)
    with open(path, "w", encoding="ascii") as fh:
        fh.write(text)
