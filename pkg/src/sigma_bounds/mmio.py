"""Matrix Market reader and writer.

Reads ``coordinate`` and ``array`` formats with ``real``, ``integer``,
``complex`` and ``pattern`` fields and ``general``, ``symmetric``,
``skew-symmetric`` and ``hermitian`` symmetry.  Symmetric storage is expanded
to full form, duplicate coordinates are summed, and indices are 1-based.

Writing always produces ``coordinate ... general``, with floats printed by
``repr`` so that a write/read cycle reproduces every entry bit for bit.
"""

from __future__ import annotations

import io
import os

import numpy as np

from .errors import MatrixMarketError
from .matrix import COMPLEX, Matrix

FORMATS = ("coordinate", "array")
FIELDS = ("real", "integer", "complex", "pattern")
SYMMETRIES = ("general", "symmetric", "skew-symmetric", "hermitian")


def _lines(source):
    if isinstance(source, (str, os.PathLike)):
        with open(source, encoding="utf-8") as fh:
            yield from enumerate(fh, start=1)
    else:
        yield from enumerate(source, start=1)


def _parse_header(line, lineno):
    tokens = line.split()
    if len(tokens) != 5 or tokens[0] != "%%MatrixMarket":
        raise MatrixMarketError("expected '%%MatrixMarket matrix <format> <field> <symmetry>'", lineno)
    obj, fmt, fld, sym = (t.lower() for t in tokens[1:])
    if obj != "matrix":
        raise MatrixMarketError(f"unsupported object {obj!r}", lineno)
    if fmt not in FORMATS:
        raise MatrixMarketError(f"unsupported format {fmt!r}", lineno)
    if fld not in FIELDS:
        raise MatrixMarketError(f"unsupported field {fld!r}", lineno)
    if sym not in SYMMETRIES:
        raise MatrixMarketError(f"unsupported symmetry {sym!r}", lineno)
    if fmt == "array" and fld == "pattern":
        raise MatrixMarketError("pattern field requires coordinate format", lineno)
    if sym == "hermitian" and fld != "complex":
        raise MatrixMarketError("hermitian symmetry requires complex field", lineno)
    return fmt, fld, sym


def _ints(tokens, count, lineno, what):
    if len(tokens) != count:
        raise MatrixMarketError(f"{what}: expected {count} integers, got {len(tokens)} tokens", lineno)
    try:
        return [int(t) for t in tokens]
    except ValueError:
        raise MatrixMarketError(f"{what}: non-integer token in {' '.join(tokens)!r}", lineno) from None


def _value(tokens, fld, lineno):
    n_expected = {"real": 1, "integer": 1, "complex": 2, "pattern": 0}[fld]
    if len(tokens) != n_expected:
        raise MatrixMarketError(f"expected {n_expected} value token(s) for {fld} field, got {len(tokens)}", lineno)
    try:
        if fld == "pattern":
            return 1.0
        if fld == "integer":
            return float(int(tokens[0]))
        if fld == "real":
            v = float(tokens[0])
        else:
            v = complex(float(tokens[0]), float(tokens[1]))
    except ValueError:
        raise MatrixMarketError(f"non-numeric token in {' '.join(tokens)!r}", lineno) from None
    if not np.isfinite(v):
        raise MatrixMarketError("non-finite value", lineno)
    return v


def read_matrix_market(source):
    """Parse a Matrix Market file (path or iterable of lines) into a canonical :class:`Matrix`."""
    it = _lines(source)
    header = None
    for lineno, line in it:
        header = _parse_header(line, lineno)
        break
    if header is None:
        raise MatrixMarketError("empty input", 1)
    fmt, fld, sym = header

    size = None
    entries = []  # (lineno, tokens)
    for lineno, line in it:
        stripped = line.strip()
        if not stripped or stripped.startswith("%"):
            continue
        tokens = stripped.split()
        if size is None:
            size = _ints(tokens, 3 if fmt == "coordinate" else 2, lineno, "size line")
            size_lineno = lineno
        else:
            entries.append((lineno, tokens))
    if size is None:
        raise MatrixMarketError("missing size line")
    m, n = size[0], size[1]
    if m < 1 or n < 1:
        raise MatrixMarketError(f"matrix dimensions must be positive, got {m}x{n}", size_lineno)
    if sym != "general" and m != n:
        raise MatrixMarketError(f"{sym} matrix must be square, got {m}x{n}", size_lineno)

    if fmt == "coordinate":
        rows, cols, vals = _coordinate_entries(entries, size[2], m, n, fld)
    else:
        rows, cols, vals = _array_entries(entries, m, n, fld, sym)

    rows, cols, vals = _expand_symmetry(rows, cols, vals, sym)
    return Matrix.from_coo(rows, cols, np.asarray(vals), (m, n))


def _coordinate_entries(entries, nnz, m, n, fld):
    if len(entries) != nnz:
        last = entries[-1][0] if entries else None
        raise MatrixMarketError(f"size line declares {nnz} entries, found {len(entries)}", last)
    rows, cols, vals = [], [], []
    for lineno, tokens in entries:
        i, j = _ints(tokens[:2], 2, lineno, "entry index")
        if not (1 <= i <= m and 1 <= j <= n):
            raise MatrixMarketError(f"index ({i}, {j}) out of bounds for {m}x{n} matrix", lineno)
        rows.append(i - 1)
        cols.append(j - 1)
        vals.append(_value(tokens[2:], fld, lineno))
    return rows, cols, vals


def _array_entries(entries, m, n, fld, sym):
    # column-major; symmetric variants store the lower triangle only
    if sym == "general":
        coords = [(i, j) for j in range(n) for i in range(m)]
    elif sym == "skew-symmetric":
        coords = [(i, j) for j in range(n) for i in range(j + 1, m)]
    else:
        coords = [(i, j) for j in range(n) for i in range(j, m)]
    if len(entries) != len(coords):
        last = entries[-1][0] if entries else None
        raise MatrixMarketError(f"array format expects {len(coords)} values, found {len(entries)}", last)
    rows, cols, vals = [], [], []
    for (i, j), (lineno, tokens) in zip(coords, entries):
        rows.append(i)
        cols.append(j)
        vals.append(_value(tokens, fld, lineno))
    return rows, cols, vals


def _expand_symmetry(rows, cols, vals, sym):
    if sym == "general":
        return rows, cols, vals
    out_r, out_c, out_v = list(rows), list(cols), list(vals)
    for i, j, v in zip(rows, cols, vals):
        if i == j:
            continue
        out_r.append(j)
        out_c.append(i)
        if sym == "symmetric":
            out_v.append(v)
        elif sym == "skew-symmetric":
            out_v.append(-v)
        else:
            out_v.append(np.conj(v))
    return out_r, out_c, out_v


def _fmt(x):
    return repr(float(x))


def write_matrix_market(matrix, target=None, comment=None):
    """Write ``matrix`` in coordinate general form.

    ``target`` may be a path or a text stream; with ``None`` the text is
    returned as a string.
    """
    buf = io.StringIO()
    fld = "complex" if matrix.mode == COMPLEX else "real"
    buf.write(f"%%MatrixMarket matrix coordinate {fld} general\n")
    if comment:
        for line in comment.splitlines():
            buf.write(f"% {line}\n")
    rows, cols, vals = matrix.triplets()
    m, n = matrix.shape
    buf.write(f"{m} {n} {len(vals)}\n")
    for i, j, v in zip(rows, cols, vals):
        if fld == "complex":
            buf.write(f"{i + 1} {j + 1} {_fmt(v.real)} {_fmt(v.imag)}\n")
        else:
            buf.write(f"{i + 1} {j + 1} {_fmt(v)}\n")
    text = buf.getvalue()
    if target is None:
        return text
    if isinstance(target, (str, os.PathLike)):
        with open(target, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        target.write(text)
    return None


def parse_matrix_market_text(text):
    return read_matrix_market(io.StringIO(text))
