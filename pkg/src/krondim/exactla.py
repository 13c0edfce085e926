"""Exact rational linear algebra over labeled dense matrices.

Entries are `fractions.Fraction` throughout; there is no floating point and
no epsilon anywhere in this module.  Rank and reduced row echelon form use
fraction-free (Bareiss) elimination on integer rows, strict linear
feasibility uses an exact simplex with Bland's rule.
"""

from fractions import Fraction
from math import gcd, lcm

from .errors import ArgumentError, LabelError

Rational = Fraction


def _as_fraction(v):
    if isinstance(v, Fraction):
        return v
    if isinstance(v, int):
        return Fraction(v)
    raise ArgumentError(f"matrix entries must be int or Fraction, got {type(v).__name__}")


class QMatrix:
    """Dense exact-rational matrix with labeled row and column index sets.

    Labels are opaque hashables; selection by label subset preserves the
    order of the subset given.  Instances are immutable by convention: all
    operations return new matrices.
    """

    __slots__ = ("row_labels", "col_labels", "entries", "_row_index", "_col_index")

    def __init__(self, entries, row_labels=None, col_labels=None):
        rows = [tuple(_as_fraction(v) for v in row) for row in entries]
        nrows = len(rows)
        ncols = len(rows[0]) if rows else 0
        if any(len(r) != ncols for r in rows):
            raise ArgumentError("ragged entry grid")
        if row_labels is None:
            row_labels = range(nrows)
        if col_labels is None:
            col_labels = range(ncols)
        self.row_labels = tuple(row_labels)
        self.col_labels = tuple(col_labels)
        if len(self.row_labels) != nrows or len(self.col_labels) != ncols:
            raise ArgumentError("label list lengths do not match entry grid")
        if len(set(self.row_labels)) != nrows or len(set(self.col_labels)) != ncols:
            raise ArgumentError("duplicate labels")
        self.entries = tuple(rows)
        self._row_index = {lab: i for i, lab in enumerate(self.row_labels)}
        self._col_index = {lab: j for j, lab in enumerate(self.col_labels)}

    # -- constructors ------------------------------------------------------

    @classmethod
    def identity(cls, labels):
        labels = tuple(labels) if not isinstance(labels, int) else tuple(range(labels))
        n = len(labels)
        one, zero = Fraction(1), Fraction(0)
        rows = [[one if i == j else zero for j in range(n)] for i in range(n)]
        return cls(rows, labels, labels)

    @classmethod
    def zeros(cls, row_labels, col_labels):
        row_labels, col_labels = tuple(row_labels), tuple(col_labels)
        z = Fraction(0)
        return cls([[z] * len(col_labels) for _ in row_labels], row_labels, col_labels)

    # -- basic access ------------------------------------------------------

    @property
    def shape(self):
        return (len(self.row_labels), len(self.col_labels))

    def entry(self, row_label, col_label):
        try:
            return self.entries[self._row_index[row_label]][self._col_index[col_label]]
        except KeyError as e:
            raise LabelError(*e.args) from None

    def row(self, label):
        try:
            return self.entries[self._row_index[label]]
        except KeyError as e:
            raise LabelError(*e.args) from None

    def column(self, label):
        try:
            j = self._col_index[label]
        except KeyError as e:
            raise LabelError(*e.args) from None
        return tuple(r[j] for r in self.entries)

    def has_col(self, label):
        return label in self._col_index

    def restrict_cols(self, labels):
        labels = tuple(labels)
        try:
            idx = [self._col_index[l] for l in labels]
        except KeyError as e:
            raise LabelError(*e.args) from None
        return QMatrix([[r[j] for j in idx] for r in self.entries], self.row_labels, labels)

    def restrict_rows(self, labels):
        labels = tuple(labels)
        try:
            idx = [self._row_index[l] for l in labels]
        except KeyError as e:
            raise LabelError(*e.args) from None
        return QMatrix([list(self.entries[i]) for i in idx], labels, self.col_labels)

    def transpose(self):
        n, m = self.shape
        return QMatrix([[self.entries[i][j] for i in range(n)] for j in range(m)],
                       self.col_labels, self.row_labels)

    def matmul(self, other):
        if self.col_labels != other.row_labels:
            raise LabelError("inner labels do not match")
        n, k = self.shape
        m = other.shape[1]
        out = []
        for i in range(n):
            a_row = self.entries[i]
            out.append([sum((a_row[t] * other.entries[t][j] for t in range(k)), Fraction(0))
                        for j in range(m)])
        return QMatrix(out, self.row_labels, other.col_labels)

    def scale(self, c):
        c = _as_fraction(c)
        return QMatrix([[c * v for v in row] for row in self.entries],
                       self.row_labels, self.col_labels)

    def add(self, other):
        if self.shape != other.shape:
            raise ArgumentError("shape mismatch")
        return QMatrix([[a + b for a, b in zip(r1, r2)]
                        for r1, r2 in zip(self.entries, other.entries)],
                       self.row_labels, self.col_labels)

    @staticmethod
    def stack_rows(mats):
        mats = list(mats)
        if not mats:
            raise ArgumentError("nothing to stack")
        cols = mats[0].col_labels
        if any(m.col_labels != cols for m in mats):
            raise LabelError("column labels differ across stacked blocks")
        labels, rows = [], []
        for k, m in enumerate(mats):
            for lab, row in zip(m.row_labels, m.entries):
                labels.append((k, lab))
                rows.append(list(row))
        return QMatrix(rows, labels, cols)

    def relabel(self, row_labels=None, col_labels=None):
        return QMatrix([list(r) for r in self.entries],
                       self.row_labels if row_labels is None else row_labels,
                       self.col_labels if col_labels is None else col_labels)

    def is_integer(self):
        return all(v.denominator == 1 for row in self.entries for v in row)

    def __eq__(self, other):
        return (isinstance(other, QMatrix)
                and self.row_labels == other.row_labels
                and self.col_labels == other.col_labels
                and self.entries == other.entries)

    def __hash__(self):
        return hash((self.row_labels, self.col_labels, self.entries))

    def __repr__(self):
        return f"QMatrix({len(self.row_labels)}x{len(self.col_labels)})"


# -- elimination -----------------------------------------------------------


def _integer_rows(M):
    """Rows of M scaled to integers (row scaling preserves rank and pivots)."""
    out = []
    for row in M.entries:
        d = 1
        for v in row:
            d = lcm(d, v.denominator)
        out.append([int(v * d) for v in row])
    return out


def rank(M):
    """Exact rank over the rationals; 0 for an empty matrix."""
    return _bareiss_rank(_integer_rows(M))


def _bareiss_rank(rows):
    """Fraction-free elimination on integer rows; returns the rank.

    One-step Bareiss: after pivot k the exact division by the previous
    pivot keeps all intermediates equal to minors of the input.
    """
    m = [list(r) for r in rows]
    nrows = len(m)
    ncols = len(m[0]) if nrows else 0
    prev = 1
    r = 0
    for c in range(ncols):
        if r == nrows:
            break
        piv = None
        for i in range(r, nrows):
            if m[i][c]:
                piv = i
                break
        if piv is None:
            continue
        if piv != r:
            m[piv], m[r] = m[r], m[piv]
        p = m[r][c]
        for i in range(r + 1, nrows):
            f = m[i][c]
            if f:
                row_i, row_r = m[i], m[r]
                for j in range(c + 1, ncols):
                    row_i[j] = (p * row_i[j] - f * row_r[j]) // prev
                row_i[c] = 0
            elif prev != p:
                row_i = m[i]
                for j in range(c + 1, ncols):
                    row_i[j] = (p * row_i[j]) // prev
        prev = p
        r += 1
    return r


def rref(M):
    """Unique reduced row echelon form of M and its pivot column labels.

    Forward elimination is fraction-free on integer-scaled rows; the final
    normalization back to true rationals happens only in the output.
    """
    rows = _integer_rows(M)
    nrows = len(rows)
    ncols = len(rows[0]) if nrows else 0
    m = [list(r) for r in rows]
    pivots = []
    prev = 1
    r = 0
    for c in range(ncols):
        if r == nrows:
            break
        piv = None
        for i in range(r, nrows):
            if m[i][c]:
                piv = i
                break
        if piv is None:
            continue
        if piv != r:
            m[piv], m[r] = m[r], m[piv]
        p = m[r][c]
        for i in range(r + 1, nrows):
            f = m[i][c]
            row_i, row_r = m[i], m[r]
            for j in range(c, ncols):
                row_i[j] = (p * row_i[j] - f * row_r[j]) // prev
        prev = p
        pivots.append(c)
        r += 1
    # back-elimination and normalization in exact rationals
    frac = [[Fraction(v) for v in row] for row in m]
    for k in range(len(pivots) - 1, -1, -1):
        c = pivots[k]
        p = frac[k][c]
        frac[k] = [v / p for v in frac[k]]
        for i in range(k):
            f = frac[i][c]
            if f:
                frac[i] = [a - f * b for a, b in zip(frac[i], frac[k])]
    zero = Fraction(0)
    for i in range(len(pivots), nrows):
        frac[i] = [zero] * ncols
    out = QMatrix(frac, M.row_labels, M.col_labels)
    return out, tuple(M.col_labels[c] for c in pivots)


# -- products --------------------------------------------------------------


def kronecker(A, B):
    """Kronecker product with pair labels: entry((i,k),(j,l)) = A(i,j)*B(k,l)."""
    row_labels = [(i, k) for i in A.row_labels for k in B.row_labels]
    col_labels = [(j, l) for j in A.col_labels for l in B.col_labels]
    rows = []
    for ar in A.entries:
        for br in B.entries:
            rows.append([a * b for a in ar for b in br])
    return QMatrix(rows, row_labels, col_labels)


def kron_column(a_col, b_col):
    """Column vector of the Kronecker product, as a tuple."""
    return tuple(a * b for a in a_col for b in b_col)


def khatri_rao(A, B, h):
    """Column-wise Kronecker product pairing column x of A with column h(x) of B.

    h must map every column label of A to a column label of B.
    """
    cols = []
    for x in A.col_labels:
        try:
            y = h[x]
        except KeyError:
            raise LabelError(f"h does not map column {x!r}") from None
        if not B.has_col(y):
            raise LabelError(f"h({x!r}) = {y!r} is not a column of B")
        cols.append(kron_column(A.column(x), B.column(y)))
    row_labels = [(i, k) for i in A.row_labels for k in B.row_labels]
    rows = [[col[i] for col in cols] for i in range(len(row_labels))]
    return QMatrix(rows, row_labels, A.col_labels)


# -- strict linear feasibility ----------------------------------------------


class StrictFeasibilityProblem:
    """Find u with <c, u> > 0 for every coefficient vector c, or decide none exists."""

    def __init__(self, constraints, unknowns):
        self.constraints = [tuple(_as_fraction(v) for v in c) for c in constraints]
        self.unknowns = unknowns
        for c in self.constraints:
            if len(c) != unknowns:
                raise ArgumentError("constraint length does not match unknown count")


def strict_feasible(problem):
    """Rational point satisfying every constraint strictly, or None.

    Decided exactly by maximizing a margin s subject to <c,u> >= s and
    s <= 1; the system is strictly feasible iff the optimum is positive.
    """
    cons = problem.constraints
    n = problem.unknowns
    if not cons:
        return tuple(Fraction(0) for _ in range(n))
    # variables: u = u+ - u- (2n columns), s (1 column); rows: <c,u> - s >= 0, s <= 1
    rows = []
    for c in cons:
        rows.append([v for v in c] + [-v for v in c] + [Fraction(-1)])
    ineq_ge = [Fraction(0)] * len(cons)
    opt, point = _simplex_max(rows, ineq_ge, objective_index=2 * n)
    if opt <= 0:
        return None
    u = tuple(point[i] - point[n + i] for i in range(n))
    for c in cons:
        if sum((ci * ui for ci, ui in zip(c, u)), Fraction(0)) <= 0:
            raise AssertionError("simplex returned a non-strict point")
    return u


def _simplex_max(ge_rows, ge_rhs, objective_index):
    """Maximize variable `objective_index` (shifted so s <= 1 is implicit).

    ge_rows/ge_rhs encode <row, z> >= rhs over nonnegative z except that the
    objective variable s is free; we substitute s = 1 - v with v >= 0 and
    minimize v, which makes z = 0, v = 1 an immediate feasible start.
    """
    ncols = len(ge_rows[0])
    # substitute s = 1 - v: row: a_z . z - s >= 0  ->  a_z . z + v >= 1
    rows = []
    for r in ge_rows:
        assert r[objective_index] == -1
        rows.append([v for i, v in enumerate(r) if i != objective_index] + [Fraction(1)])
    rhs = [Fraction(1) - b for b in ge_rhs]
    nvars = ncols  # z variables plus v at the end
    # standard form with surplus variables: a.x - w = rhs, w >= 0
    # initial basis: v large enough is not a vertex; use Big-M free approach via
    # phase-one with artificial variables instead.
    return _two_phase_min_v(rows, rhs, nvars)


def _two_phase_min_v(rows, rhs, nvars):
    """Minimize the last variable subject to rows . x >= rhs, x >= 0 (exact)."""
    m = len(rows)
    # tableau columns: x (nvars) | surplus (m) | artificial (m) | rhs
    width = nvars + 2 * m + 1
    T = []
    for i, (row, b) in enumerate(zip(rows, rhs)):
        t = [Fraction(0)] * width
        for j, v in enumerate(row):
            t[j] = v
        t[nvars + i] = Fraction(-1)
        if b < 0:  # normalize rhs nonnegative
            t = [-v for v in t]
            b = -b
        t[nvars + m + i] = Fraction(1)
        t[-1] = b
        T.append(t)
    basis = [nvars + m + i for i in range(m)]

    def pivot(T, basis, r, c):
        p = T[r][c]
        T[r] = [v / p for v in T[r]]
        for i in range(len(T)):
            if i != r and T[i][c]:
                f = T[i][c]
                T[i] = [a - f * b for a, b in zip(T[i], T[r])]
        basis[r] = c

    def solve(T, basis, cost, allowed):
        # Bland's rule: smallest-index entering and leaving columns.
        while True:
            z = [Fraction(0)] * width
            for i, b in enumerate(basis):
                cb = cost[b]
                if cb:
                    z = [a - cb * v for a, v in zip(z, T[i])]
            for j, cj in enumerate(cost):
                z[j] += cj
            enter = None
            for j in range(width - 1):
                if j in allowed and z[j] < 0:
                    enter = j
                    break
            if enter is None:
                obj = sum((cost[b] * T[i][-1] for i, b in enumerate(basis)), Fraction(0))
                return obj
            leave, best = None, None
            for i in range(m):
                if T[i][enter] > 0:
                    ratio = T[i][-1] / T[i][enter]
                    if best is None or ratio < best or (ratio == best and basis[i] < basis[leave]):
                        best, leave = ratio, i
            if leave is None:
                raise AssertionError("margin LP is bounded by construction")
            pivot(T, basis, leave, enter)

    allowed = set(range(nvars + 2 * m))
    cost1 = [Fraction(0)] * width
    for j in range(nvars + m, nvars + 2 * m):
        cost1[j] = Fraction(1)
    phase1 = solve(T, basis, cost1, allowed)
    if phase1 != 0:
        raise AssertionError("phase-one infeasible; the relaxed LP is always feasible")
    # drive artificials out of the basis where possible, then forbid them
    for i in range(m):
        if basis[i] >= nvars + m:
            for j in range(nvars + m):
                if T[i][j]:
                    pivot(T, basis, i, j)
                    break
    allowed = set(range(nvars + m))
    cost2 = [Fraction(0)] * width
    cost2[nvars - 1] = Fraction(1)  # minimize v
    vmin = solve(T, basis, cost2, allowed)
    x = [Fraction(0)] * nvars
    for i, b in enumerate(basis):
        if b < nvars:
            x[b] = T[i][-1]
    opt_s = Fraction(1) - vmin
    return opt_s, x[:-1]
