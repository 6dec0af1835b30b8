"""Finite F2-matrix category: labeled sets, matrices, and finite tensor powers.

Objects are labeled finite sets; a matrix M with rows C and cols B represents
an F2-linear map  Fun(B, F2) -> Fun(C, F2)  by (Mf)(c) = sum_b M(c,b) f(b).
Composition is the usual product over F2, (NM)(d,b) = sum_c N(d,c) M(c,b).

The finite tensor power M^{tensor X} of a matrix by a labeled finite set X is
the matrix whose rows/cols are the function sets Fun(X, C) / Fun(X, B) and
whose entries are products  prod_{x in X} M(g(x), f(x)).  Everything here is
exact; rows are bit-packed into Python ints.
"""

from __future__ import annotations

import itertools

from .errors import LabelMismatchError, ParseError, SizeCapError

DEFAULT_ENTRY_CAP = 1 << 20


class LabeledSet:
    """An ordered finite set of distinct string labels."""

    def __init__(self, labels):
        labels = tuple(str(l) for l in labels)
        if len(set(labels)) != len(labels):
            dup = sorted({l for l in labels if labels.count(l) > 1})
            raise LabelMismatchError(f"duplicate labels in labeled set: {dup}")
        self.labels = labels
        self.index = {l: i for i, l in enumerate(labels)}

    def __len__(self):
        return len(self.labels)

    def __iter__(self):
        return iter(self.labels)

    def __contains__(self, label):
        return label in self.index

    def __eq__(self, other):
        return isinstance(other, LabeledSet) and self.labels == other.labels

    def __hash__(self):
        return hash(self.labels)

    def __repr__(self):
        return f"LabeledSet({list(self.labels)!r})"


def word_label(word):
    """Canonical string label for a tuple of labels (a function's value word).

    Single-character alphabets concatenate ("x","y") -> "xy"; otherwise the
    letters are comma-joined so the label stays unambiguous.
    """
    word = tuple(word)
    if all(len(l) == 1 for l in word):
        return "".join(word)
    return ",".join(word)


class F2Matrix:
    """A matrix over F2 with labeled rows and columns.

    `bits[i]` packs row i: bit j (1 << j) is the entry at column j.
    """

    def __init__(self, rows, cols, bits):
        if not isinstance(rows, LabeledSet):
            rows = LabeledSet(rows)
        if not isinstance(cols, LabeledSet):
            cols = LabeledSet(cols)
        bits = tuple(int(b) for b in bits)
        if len(bits) != len(rows):
            raise LabelMismatchError(
                f"row count {len(bits)} does not match row labels {len(rows)}")
        mask = (1 << len(cols)) - 1
        if any(b & ~mask for b in bits):
            raise LabelMismatchError("row bits exceed column count")
        self.rows = rows
        self.cols = cols
        self.bits = bits

    # -- construction helpers -------------------------------------------------

    @classmethod
    def from_entries(cls, rows, cols, entries):
        """Build from an iterable of (row_label, col_label) positions holding 1,
        or a dict {(row_label, col_label): 0/1}."""
        if not isinstance(rows, LabeledSet):
            rows = LabeledSet(rows)
        if not isinstance(cols, LabeledSet):
            cols = LabeledSet(cols)
        if isinstance(entries, dict):
            entries = [k for k, v in entries.items() if v % 2]
        bits = [0] * len(rows)
        for (r, c) in entries:
            if r not in rows:
                raise LabelMismatchError(f"unknown row label {r!r} (rows are {list(rows.labels)})")
            if c not in cols:
                raise LabelMismatchError(f"unknown col label {c!r} (cols are {list(cols.labels)})")
            bits[rows.index[r]] ^= 1 << cols.index[c]
        return cls(rows, cols, bits)

    @classmethod
    def from_rows(cls, rows, cols, row_lists):
        bits = []
        for row in row_lists:
            b = 0
            for j, v in enumerate(row):
                if v % 2:
                    b |= 1 << j
            bits.append(b)
        return cls(rows, cols, bits)

    def entry(self, row_label, col_label):
        return (self.bits[self.rows.index[row_label]]
                >> self.cols.index[col_label]) & 1

    def to_lists(self):
        n = len(self.cols)
        return [[(b >> j) & 1 for j in range(n)] for b in self.bits]

    def __eq__(self, other):
        return (isinstance(other, F2Matrix) and self.rows == other.rows
                and self.cols == other.cols and self.bits == other.bits)

    def __hash__(self):
        return hash((self.rows, self.cols, self.bits))

    def __repr__(self):
        body = "; ".join("".join(str(v) for v in row) for row in self.to_lists())
        return f"F2Matrix({list(self.rows.labels)}x{list(self.cols.labels)}: {body})"


def identity(obj):
    if not isinstance(obj, LabeledSet):
        obj = LabeledSet(obj)
    return F2Matrix(obj, obj, [1 << i for i in range(len(obj))])


def zero(rows, cols):
    if not isinstance(rows, LabeledSet):
        rows = LabeledSet(rows)
    if not isinstance(cols, LabeledSet):
        cols = LabeledSet(cols)
    return F2Matrix(rows, cols, [0] * len(rows))


def add(a, b):
    if a.rows != b.rows or a.cols != b.cols:
        raise LabelMismatchError(
            f"matrix sum needs equal shapes: {list(a.rows.labels)}x{list(a.cols.labels)} "
            f"vs {list(b.rows.labels)}x{list(b.cols.labels)}")
    return F2Matrix(a.rows, a.cols, [x ^ y for x, y in zip(a.bits, b.bits)])


def compose(n, m):
    """Matrix product NM over F2 (apply M first, then N).

    N's columns must equal M's rows as labeled sets.
    """
    if n.cols != m.rows:
        raise LabelMismatchError(
            f"cannot compose: left factor has cols {list(n.cols.labels)}, "
            f"right factor has rows {list(m.rows.labels)}")
    out = []
    for nb in n.bits:
        acc = 0
        b = nb
        while b:
            low = b & -b
            acc ^= m.bits[low.bit_length() - 1]
            b ^= low
        out.append(acc)
    return F2Matrix(n.rows, m.cols, out)


def apply(m, table):
    """Apply M to an F2 table on its columns; tables are support sets.

    `table` may be a set/frozenset/iterable of column labels (the support) or
    a dict {label: 0/1}.  Returns the support of M f as a frozenset of row
    labels.
    """
    if isinstance(table, dict):
        support = {k for k, v in table.items() if v % 2}
    else:
        support = set(table)
    unknown = support - set(m.cols.labels)
    if unknown:
        raise LabelMismatchError(
            f"table labels {sorted(unknown)} are not columns {list(m.cols.labels)}")
    fmask = 0
    for label in support:
        fmask |= 1 << m.cols.index[label]
    out = set()
    for i, row in enumerate(m.bits):
        if (row & fmask).bit_count() & 1:
            out.add(m.rows.labels[i])
    return frozenset(out)


def tensor_power_finite(m, x, max_entries=DEFAULT_ENTRY_CAP):
    """The finite tensor power M^{tensor X} for a labeled finite set X.

    Rows are Fun(X, C) and columns Fun(X, B), both enumerated in
    lexicographic order: positions follow X's label order, values follow the
    row/column label order of M.  The empty X gives the 1x1 identity on the
    single empty function.  Entry at (g, f) is prod_x M(g(x), f(x)).
    """
    if not isinstance(x, LabeledSet):
        x = LabeledSet(x)
    n = len(x)
    n_rows = len(m.rows) ** n
    n_cols = len(m.cols) ** n
    if n_rows * n_cols > max_entries:
        raise SizeCapError(
            f"tensor power would have {n_rows}x{n_cols} entries, over the cap {max_entries}")
    if n == 0:
        empty = LabeledSet([""])
        return F2Matrix(empty, empty, [1])

    col_words = list(itertools.product(range(len(m.cols)), repeat=n))
    row_words = itertools.product(range(len(m.rows)), repeat=n)
    ent = [[(m.bits[i] >> j) & 1 for j in range(len(m.cols))]
           for i in range(len(m.rows))]
    bits = []
    for g in row_words:
        rowbits = 0
        for jj, f in enumerate(col_words):
            for gi, fi in zip(g, f):
                if not ent[gi][fi]:
                    break
            else:
                rowbits |= 1 << jj
        bits.append(rowbits)
    rows = LabeledSet(word_label(tuple(m.rows.labels[i] for i in g))
                      for g in itertools.product(range(len(m.rows)), repeat=n))
    cols = LabeledSet(word_label(tuple(m.cols.labels[j] for j in f))
                      for f in col_words)
    return F2Matrix(rows, cols, bits)


def invert(m):
    """Inverse of a square F2 matrix by Gauss-Jordan, or None if singular."""
    n = len(m.rows)
    if n != len(m.cols):
        return None
    a = list(m.bits)
    inv = [1 << i for i in range(n)]
    for col in range(n):
        piv = None
        for r in range(col, n):
            if (a[r] >> col) & 1:
                piv = r
                break
        if piv is None:
            return None
        a[col], a[piv] = a[piv], a[col]
        inv[col], inv[piv] = inv[piv], inv[col]
        for r in range(n):
            if r != col and ((a[r] >> col) & 1):
                a[r] ^= a[col]
                inv[r] ^= inv[col]
    return F2Matrix(m.cols, m.rows, inv)


def rank(m):
    """Rank over F2 of the row space (row reduction on packed rows)."""
    rows = [b for b in m.bits if b]
    r = 0
    for col in range(len(m.cols)):
        piv = None
        for i in range(r, len(rows)):
            if (rows[i] >> col) & 1:
                piv = i
                break
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        for i in range(len(rows)):
            if i != r and ((rows[i] >> col) & 1):
                rows[i] ^= rows[r]
        r += 1
    return r


# -- text format ---------------------------------------------------------------
#
#   rows: c1 c2
#   cols: b1 b2
#   1 0
#   1 1
#
# Blank lines and #-comments are allowed anywhere.

def parse_matrix(text):
    rows = cols = None
    data = []
    data_lines = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if line.startswith("rows:"):
            rows = line[len("rows:"):].split()
            continue
        if line.startswith("cols:"):
            cols = line[len("cols:"):].split()
            continue
        if rows is None or cols is None:
            raise ParseError(f"line {lineno}: matrix data before rows:/cols: headers", line=lineno)
        vals = line.split()
        if len(vals) != len(cols):
            raise ParseError(
                f"line {lineno}: expected {len(cols)} entries, got {len(vals)}", line=lineno)
        try:
            row = [int(v) for v in vals]
        except ValueError:
            raise ParseError(f"line {lineno}: matrix entries must be 0/1", line=lineno)
        if any(v not in (0, 1) for v in row):
            raise ParseError(f"line {lineno}: matrix entries must be 0/1", line=lineno)
        data.append(row)
        data_lines.append(lineno)
    if rows is None or cols is None:
        raise ParseError("matrix file needs rows: and cols: headers", line=1)
    if len(data) != len(rows):
        raise ParseError(
            f"expected {len(rows)} data rows, got {len(data)}",
            line=data_lines[-1] if data_lines else 1)
    return F2Matrix.from_rows(LabeledSet(rows), LabeledSet(cols), data)


def dump_matrix(m):
    lines = ["rows: " + " ".join(m.rows.labels), "cols: " + " ".join(m.cols.labels)]
    for row in m.to_lists():
        lines.append(" ".join(str(v) for v in row))
    return "\n".join(lines) + "\n"
