"""Kronecker product model specs and exact generic Jacobian rank.

The substitution t_i = exp(theta_i) turns every entry of the marginal
Jacobian into a Laurent monomial with integer exponents, so the maximum
Jacobian rank over real parameters equals the generic rank of an exact
rational matrix evaluated at random positive integer substitutions.
"""

import random
from dataclasses import dataclass
from fractions import Fraction

from .errors import ArgumentError, UnsupportedSpecError
from .exactla import QMatrix, kron_column, rank
from .hierarchical import HierarchicalSpec, build_signed_suffstat, build_suffstat, k_interaction

SUBSTITUTION_RANGE = 10 ** 6


class FactorSpec:
    """One factor of a Kronecker product model: a statistics matrix plus provenance.

    The realized matrix always contains a constant nonzero vector in its row
    span; hidden factors must additionally have pairwise distinct columns.
    """

    __slots__ = ("kind", "_matrix", "hier", "convention", "has_constant_row")

    def __init__(self, kind, matrix, hier=None, convention=None, has_constant_row=True):
        self.kind = kind
        self._matrix = matrix
        self.hier = hier
        self.convention = convention
        self.has_constant_row = has_constant_row

    @classmethod
    def from_matrix(cls, matrix):
        if not _ones_in_row_span(matrix):
            raise ArgumentError("factor matrix must contain the constant vector in its row span")
        return cls("raw", matrix)

    @classmethod
    def from_hierarchical(cls, spec, convention="01"):
        if not isinstance(spec, HierarchicalSpec):
            raise ArgumentError("expected a HierarchicalSpec")
        if convention == "01":
            m = build_suffstat(spec)
        elif convention == "pm1":
            m = build_signed_suffstat(spec)
        else:
            raise ArgumentError(f"unknown convention {convention!r}")
        return cls("hierarchical", m, hier=spec, convention=convention)

    @classmethod
    def identity(cls, k):
        if k < 1:
            raise ArgumentError("identity factor needs k >= 1")
        return cls("identity", QMatrix.identity(k))

    @property
    def matrix(self):
        return self._matrix

    @property
    def col_labels(self):
        return self._matrix.col_labels

    def rank(self):
        return rank(self._matrix)


def _ones_in_row_span(M):
    ones = QMatrix([[Fraction(1)] * len(M.col_labels)], ["__ones__"], M.col_labels)
    stacked = QMatrix(
        [list(r) for r in M.entries] + [list(ones.entries[0])],
        list(range(len(M.row_labels) + 1)), M.col_labels)
    return rank(stacked) == rank(M)


class KroneckerModelSpec:
    """Visible factor A over states X and hidden factor B over states Y."""

    __slots__ = ("visible", "hidden", "_rank_a", "_rank_b")

    def __init__(self, visible, hidden):
        if not isinstance(visible, FactorSpec) or not isinstance(hidden, FactorSpec):
            raise ArgumentError("visible and hidden must be FactorSpec instances")
        B = hidden.matrix
        cols = [B.column(y) for y in B.col_labels]
        if len(set(cols)) != len(cols):
            raise UnsupportedSpecError("hidden factor has repeated columns")
        self.visible = visible
        self.hidden = hidden
        self._rank_a = None
        self._rank_b = None

    @property
    def A(self):
        return self.visible.matrix

    @property
    def B(self):
        return self.hidden.matrix

    @property
    def visible_states(self):
        return self.A.col_labels

    @property
    def hidden_states(self):
        return self.B.col_labels

    def rank_a(self):
        if self._rank_a is None:
            self._rank_a = rank(self.A)
        return self._rank_a

    def rank_b(self):
        if self._rank_b is None:
            self._rank_b = rank(self.B)
        return self._rank_b

    def stat_row_labels(self):
        """Row labels of the factored statistics matrix F = A (x) B."""
        return [(i, k) for i in self.A.row_labels for k in self.B.row_labels]

    def stat_column(self, x, y):
        """Column F(x, y) = A_x (x) B_y as a tuple of Fractions."""
        return kron_column(self.A.column(x), self.B.column(y))


def expected_dim(spec):
    """min(rank(A) * rank(B) - 1, |X| - 1)."""
    return min(spec.rank_a() * spec.rank_b() - 1, len(spec.visible_states) - 1)


def mixture_spec(visible, k):
    """Model whose hidden factor is the k x k identity: the k-mixture of E_A."""
    if k < 1:
        raise ArgumentError("mixture needs k >= 1")
    return KroneckerModelSpec(visible, FactorSpec.identity(k))


def rbm_spec(n, m):
    """Binary restricted Boltzmann machine with n visible and m hidden units."""
    if n < 1 or m < 1:
        raise ArgumentError("need n, m >= 1")
    vis = FactorSpec.from_hierarchical(HierarchicalSpec([2] * n, k_interaction(n, 1)), "01")
    hid = FactorSpec.from_hierarchical(HierarchicalSpec([2] * m, k_interaction(m, 1)), "01")
    return KroneckerModelSpec(vis, hid)


def jacobian_eval(spec, t):
    """Marginal Jacobian at the substitution t, as an exact rational matrix.

    Column x is sum_y (prod_i t_i^{F_i(x,y)}) F(x,y); its rank minus one lower
    bounds the model dimension and attains it for generic positive t.
    """
    rows_f = spec.stat_row_labels()
    if isinstance(t, dict):
        t = [t[lab] for lab in rows_f]
    t = [Fraction(v) for v in t]
    if len(t) != len(rows_f):
        raise ArgumentError(f"need one substitution value per statistics row ({len(rows_f)})")
    if any(v <= 0 for v in t):
        raise ArgumentError("substitution values must be strictly positive")
    A, B = spec.A, spec.B
    if not (A.is_integer() and B.is_integer()):
        raise UnsupportedSpecError("substitution requires integer statistics entries")
    xs = list(spec.visible_states)
    ys = list(spec.hidden_states)
    a_cols = {x: [int(v) for v in A.column(x)] for x in xs}
    b_cols = {y: [int(v) for v in B.column(y)] for y in ys}
    d = len(rows_f)
    # pure-integer arithmetic when no negative exponent and integer t can occur
    nonneg = (all(v >= 0 for c in a_cols.values() for v in c)
              and all(v >= 0 for c in b_cols.values() for v in c))
    int_path = nonneg and all(v.denominator == 1 for v in t)
    tvals = [v.numerator if int_path else v for v in t]
    one = 1 if int_path else Fraction(1)
    cols = []
    for x in xs:
        ax = a_cols[x]
        acc = [0 if int_path else Fraction(0)] * d
        for y in ys:
            by = b_cols[y]
            f = [ai * bj for ai in ax for bj in by]
            mono = one
            for ti, e in zip(tvals, f):
                if e == 1:
                    mono *= ti
                elif e:
                    mono *= ti ** e
            for i, fi in enumerate(f):
                if fi == 1:
                    acc[i] += mono
                elif fi:
                    acc[i] += mono * fi
        cols.append(acc)
    return QMatrix([[cols[j][i] for j in range(len(xs))] for i in range(d)], rows_f, xs)


@dataclass(frozen=True)
class RankCertificate:
    """Evidence for a generic-rank claim: per-trial substitutions and ranks."""

    trials: tuple            # (trial index, derived seed, t values, rank)
    best_rank: int
    sz_failure_bound: Fraction   # Schwartz-Zippel per-trial failure bound

    def best_trial(self):
        for tr in self.trials:
            if tr[3] == self.best_rank:
                return tr
        raise AssertionError("certificate lost its best trial")


def _trial_seed(seed, trial):
    return ((seed & 0xFFFFFFFFFFFFFFFF) << 32) | (trial & 0xFFFFFFFF)


def _sz_bound(spec, target_rank):
    """Degree/|S| bound on one trial missing the generic rank."""
    A, B = spec.A, spec.B
    max_deg = 0
    for x in spec.visible_states:
        ax = A.column(x)
        for y in spec.hidden_states:
            by = B.column(y)
            deg = sum(abs(int(ai * bj)) for ai in ax for bj in by)
            max_deg = max(max_deg, deg)
    return min(Fraction(1), Fraction(target_rank * max_deg, SUBSTITUTION_RANGE))


def generic_dim(spec, trials=3, seed=0):
    """Best Jacobian rank minus one over independent random substitutions.

    Substitution values are uniform integers in [1, 10^6]; identical seeds
    yield identical certificates.
    """
    if trials < 1:
        raise ArgumentError("need at least one trial")
    d = len(spec.stat_row_labels())
    records = []
    best = 0
    cap = expected_dim(spec) + 1
    for k in range(trials):
        ts = _trial_seed(seed, k)
        rng = random.Random(ts)
        t = tuple(rng.randint(1, SUBSTITUTION_RANGE) for _ in range(d))
        r = rank(jacobian_eval(spec, t))
        records.append((k, ts, t, r))
        best = max(best, r)
        if best == cap:
            break
    dim = best - 1
    if dim > expected_dim(spec):
        raise AssertionError("generic rank exceeded the expected dimension")
    cert = RankCertificate(tuple(records), best, _sz_bound(spec, cap))
    return dim, cert


@dataclass(frozen=True)
class MixtureBoundReport:
    n: int
    m: int
    rbm_dim: int
    mixture_dim: int
    strict: bool
    rbm_certificate: RankCertificate
    mixture_certificate: RankCertificate


def mixture_bound_check(n, m, trials=3, seed=0):
    """Check dim(RBM(n,m)) >= dim((m+1)-mixture of the n-bit independence model)."""
    if n < 1 or m < 1:
        raise ArgumentError("need n, m >= 1")
    rbm_dim, rbm_cert = generic_dim(rbm_spec(n, m), trials, seed)
    vis = FactorSpec.from_hierarchical(HierarchicalSpec([2] * n, k_interaction(n, 1)), "01")
    mix_dim, mix_cert = generic_dim(mixture_spec(vis, m + 1), trials, seed)
    if rbm_dim < mix_dim:
        raise AssertionError(f"dimension bound violated: RBM {rbm_dim} < mixture {mix_dim}")
    return MixtureBoundReport(n, m, rbm_dim, mix_dim, rbm_dim > mix_dim, rbm_cert, mix_cert)
