"""Inference functions, slicings, and explicit tropical lower-bound constructions.

A parameter matrix slices the visible configuration by the normal fan of the
hidden configuration; the rank of the resulting piecewise matrix lower
bounds the model dimension.  The constructions here realize the ball,
truncated, and echelon-grouped slicings with exact, certified magnitudes:
every "large enough" constant is computed from 1-norms and margins and the
claimed blocks are re-verified by running the inference function.
"""

import random
from dataclasses import dataclass
from fractions import Fraction
from itertools import product
from math import comb, lcm

from .errors import ArgumentError, PreconditionError, ResourceBudgetError
from .exactla import (QMatrix, StrictFeasibilityProblem, _bareiss_rank,
                      kron_column, rank, strict_feasible)
from .hierarchical import build_signed_suffstat


@dataclass(frozen=True)
class InferenceFunction:
    """Map from visible states to the argmax set of hidden states."""

    assignment: tuple  # ((x, frozenset of y), ...) in visible-state order

    @classmethod
    def from_dict(cls, d, order):
        return cls(tuple((x, frozenset(d[x])) for x in order))

    def as_dict(self):
        return {x: ys for x, ys in self.assignment}

    @property
    def generic(self):
        return all(len(ys) == 1 for _, ys in self.assignment)

    def singleton_map(self):
        if not self.generic:
            raise ArgumentError("inference function has ties")
        return {x: next(iter(ys)) for x, ys in self.assignment}

    def blocks(self, hidden_states):
        """Per-hidden-state inverse images; a partition iff generic."""
        out = {y: [] for y in hidden_states}
        for x, ys in self.assignment:
            for y in ys:
                out[y].append(x)
        return {y: tuple(v) for y, v in out.items()}


@dataclass(frozen=True)
class Slicing:
    """Partition of the visible states indexed by hidden states."""

    blocks: tuple      # ((y, (x, ...)), ...) in hidden-state order
    realizer: QMatrix | None = None

    @classmethod
    def from_inference(cls, h, hidden_states, realizer=None):
        bl = h.blocks(hidden_states)
        if sum(len(v) for v in bl.values()) != len(h.assignment):
            raise ArgumentError("ties present; blocks would overlap")
        return cls(tuple((y, bl[y]) for y in hidden_states), realizer)

    def block(self, y):
        for yy, xs in self.blocks:
            if yy == y:
                return xs
        raise ArgumentError(f"no block for hidden state {y!r}")


def infer(spec, theta):
    """Exact argmax inference function h(x) = argmax_y <Theta A_x, B_y>."""
    A, B = spec.A, spec.B
    if theta.col_labels != A.row_labels or theta.row_labels != B.row_labels:
        raise ArgumentError("parameter matrix labels do not match the factor matrices")
    U = theta.matmul(A)  # b x |X|
    ys = B.col_labels
    b_cols = {y: B.column(y) for y in ys}
    assign = {}
    for x in A.col_labels:
        u = U.column(x)
        best, arg = None, []
        for y in ys:
            s = sum((ui * bi for ui, bi in zip(u, b_cols[y])), Fraction(0))
            if best is None or s > best:
                best, arg = s, [y]
            elif s == best:
                arg.append(y)
        assign[x] = arg
    return InferenceFunction.from_dict(assign, A.col_labels)


def tropical_matrix(spec, theta):
    """Piecewise statistics matrix: column x averages A_x (x) B_y over y in h(x)."""
    h = infer(spec, theta).as_dict()
    A, B = spec.A, spec.B
    row_labels = spec.stat_row_labels()
    cols = []
    for x in A.col_labels:
        ys = sorted(h[x], key=lambda y: B.col_labels.index(y))
        acc = None
        for y in ys:
            col = kron_column(A.column(x), B.column(y))
            acc = col if acc is None else tuple(a + c for a, c in zip(acc, col))
        w = Fraction(1, len(ys))
        cols.append(tuple(w * v for v in acc))
    rows = [[c[i] for c in cols] for i in range(len(row_labels))]
    return QMatrix(rows, row_labels, A.col_labels)


@dataclass(frozen=True)
class TropicalCertificate:
    """A parameter matrix together with its recomputable tropical rank."""

    theta: QMatrix
    matrix: QMatrix
    rank: int

    @property
    def dim(self):
        return self.rank - 1


def certify(spec, theta):
    m = tropical_matrix(spec, theta)
    return TropicalCertificate(theta, m, rank(m))


# -- genericity: exact tie-breaking perturbation -----------------------------


def make_generic(spec, theta, seed=0, max_tries=32):
    """Perturb theta just enough to break all argmax ties.

    The perturbation eps*R uses an eps below every strict margin divided by
    the corresponding perturbation swing, so no already-strict comparison can
    flip; ties break for generic R.  Returns theta unchanged if already
    tie-free.
    """
    A, B = spec.A, spec.B
    h = infer(spec, theta)
    if h.generic:
        return theta
    ys = list(B.col_labels)
    b_cols = {y: B.column(y) for y in ys}
    a_cols = {x: A.column(x) for x in A.col_labels}

    def scores(th):
        U = th.matmul(A)
        return {(x, y): sum((ui * bi for ui, bi in zip(U.column(x), b_cols[y])), Fraction(0))
                for x in A.col_labels for y in ys}

    s0 = scores(theta)
    rng = random.Random(seed)
    for _ in range(max_tries):
        R = QMatrix([[rng.randint(-9, 9) for _ in theta.col_labels]
                     for _ in theta.row_labels], theta.row_labels, theta.col_labels)
        d = scores(R)
        eps_bound = None
        for x in A.col_labels:
            for i, y in enumerate(ys):
                for y2 in ys[i + 1:]:
                    margin = s0[(x, y)] - s0[(x, y2)]
                    if margin == 0:
                        continue
                    swing = d[(x, y)] - d[(x, y2)]
                    if margin > 0 and swing < 0:
                        cand = margin / (-swing)
                    elif margin < 0 and swing > 0:
                        cand = (-margin) / swing
                    else:
                        continue
                    if eps_bound is None or cand < eps_bound:
                        eps_bound = cand
        eps = Fraction(1) if eps_bound is None else eps_bound / 2
        theta2 = theta.add(R.scale(eps))
        if infer(spec, theta2).generic:
            return theta2
    raise AssertionError("could not break ties; perturbation family degenerate")


# -- interaction-ball machinery ----------------------------------------------


def _require_k_complete(hspec):
    if not hspec.interactions.is_k_complete(hspec.space.n):
        raise PreconditionError("visible interactions must be a complete k-interaction family")
    return hspec.interactions.max_order()


def _touching_count(n, k, e):
    """Number of nonempty interaction sets of order <= k meeting an e-set."""
    return sum(comb(n, j) - comb(n - e, j) for j in range(1, k + 1))


def ball_threshold(hspec, radius):
    """Exact signed-stats inner-product threshold separating a Hamming ball.

    With A the signed statistics matrix (a rows), <A_x, A_c> = a - 4*cnt(e)
    where e = d_H(x, c) and cnt is strictly increasing, so the midpoint
    between values at e = radius and e = radius + 1 gives a strict separator.
    """
    n = hspec.space.n
    k = hspec.interactions.max_order()
    a = sum(1 for _ in build_signed_suffstat(hspec).row_labels)
    if radius >= n:
        return a - 4 * _touching_count(n, k, n) - 1
    lo = _touching_count(n, k, radius)
    hi = _touching_count(n, k, radius + 1)
    return a - 2 * (lo + hi)


def construct_ball_slicing(hspec, centers, seed=0, genericize=True):
    """Realizer whose blocks contain the interaction balls at the given centers.

    The hidden factor is the |centers| x |centers| identity; the row for
    hidden state i is the signed statistics column of center i, so each ball
    state strictly prefers its own center.
    """
    from .dimension import FactorSpec, mixture_spec

    k = _require_k_complete(hspec)
    centers = [tuple(c) for c in centers]
    if not centers:
        raise ArgumentError("need at least one center")
    for c in centers:
        if not hspec.space.contains(c):
            raise ArgumentError(f"center {c} not in the state space")
    for i, c in enumerate(centers):
        for c2 in centers[i + 1:]:
            d = hspec.space.hamming(c, c2)
            if d < 2 * k + 1:
                raise PreconditionError(
                    f"centers {c} and {c2} at Hamming distance {d} < 2k+1 = {2 * k + 1}")
    A_s = build_signed_suffstat(hspec)
    theta = QMatrix([list(A_s.column(c)) for c in centers],
                    range(len(centers)), A_s.row_labels)
    spec = mixture_spec(FactorSpec.from_hierarchical(hspec, "pm1"), len(centers))
    if genericize:
        theta = make_generic(spec, theta, seed)
    h = infer(spec, theta)
    blocks = h.blocks(spec.hidden_states)
    for i, c in enumerate(centers):
        ball = set(hspec.space.hamming_ball(c, k))
        missing = ball - set(blocks[i])
        if missing:
            raise AssertionError(f"ball of center {c} escaped its block: {sorted(missing)}")
    return theta


def construct_cover_slicing(hspec, centers, seed=0, genericize=True):
    """Realizer whose blocks sit inside the interaction balls of a covering.

    Same nearest-center rule as construct_ball_slicing but for centers whose
    balls cover the space: each state lands within distance k of its winning
    center, so every block is contained in its ball and the piecewise matrix
    has independent columns blockwise.
    """
    from .dimension import FactorSpec, mixture_spec

    k = _require_k_complete(hspec)
    centers = [tuple(c) for c in centers]
    space = hspec.space
    for c in centers:
        if not space.contains(c):
            raise ArgumentError(f"center {c} not in the state space")
    uncovered = [x for x in space.states()
                 if all(space.hamming(x, c) > k for c in centers)]
    if uncovered:
        raise PreconditionError(
            f"balls do not cover the space; {len(uncovered)} states missed")
    A_s = build_signed_suffstat(hspec)
    theta = QMatrix([list(A_s.column(c)) for c in centers],
                    range(len(centers)), A_s.row_labels)
    spec = mixture_spec(FactorSpec.from_hierarchical(hspec, "pm1"), len(centers))
    if genericize:
        theta = make_generic(spec, theta, seed)
    blocks = infer(spec, theta).blocks(spec.hidden_states)
    for i, c in enumerate(centers):
        stray = set(blocks[i]) - set(space.hamming_ball(c, k))
        if stray:
            raise AssertionError(f"block of center {c} left its ball: {sorted(stray)}")
    return theta


def halfspace_realizer(hspec, center, radius):
    """2-row realizer splitting states into (outside, inside) a Hamming ball.

    Hidden state 0 wins exactly outside the radius-`radius` ball at `center`;
    hidden state 1 wins exactly inside.  Never ties.
    """
    _require_k_complete(hspec)
    center = tuple(center)
    if not hspec.space.contains(center):
        raise ArgumentError(f"center {center} not in the state space")
    A_s = build_signed_suffstat(hspec)
    tau = ball_threshold(hspec, radius)
    empty_row = ((), ())
    row_out = [Fraction(tau) if lab == empty_row else Fraction(0) for lab in A_s.row_labels]
    row_in = list(A_s.column(center))
    return QMatrix([row_out, row_in], range(2), A_s.row_labels)


# -- truncated slicings -------------------------------------------------------


def _point_slicing(A, theta):
    """Blocks of the identity-hidden slicing given by point rows of theta."""
    scores = theta.matmul(A)
    n = len(theta.row_labels)
    winner = {}
    for x in A.col_labels:
        col = scores.column(x)
        best = max(col)
        arg = [i for i, v in enumerate(col) if v == best]
        if len(arg) != 1:
            raise ArgumentError(f"realizer has a tie at visible state {x!r}")
        winner[x] = arg[0]
    return winner, scores


def truncate_slicing(A, theta_blocks, theta_half, c=None):
    """Refine an N-block slicing by a 2-block slicing: blocks D2&C_1..D2&C_N, D1.

    theta_blocks rows realize C_1..C_N and theta_half rows realize (D1, D2),
    all against the columns of A.  The scale c is certified sufficient when
    not supplied; the construction re-runs inference and checks the set
    algebra exactly.
    """
    if theta_blocks.col_labels != A.row_labels or theta_half.col_labels != A.row_labels:
        raise ArgumentError("realizer columns must be labeled by the rows of A")
    if len(theta_half.row_labels) != 2:
        raise ArgumentError("theta_half must have exactly two rows")
    winner, scores = _point_slicing(A, theta_blocks)
    N = len(theta_blocks.row_labels)
    half1, half2 = theta_half.entries
    delta = {}
    for x in A.col_labels:
        col = A.column(x)
        delta[x] = (sum((a * b for a, b in zip(half1, col)), Fraction(0))
                    - sum((a * b for a, b in zip(half2, col)), Fraction(0)))
    if any(v == 0 for v in delta.values()):
        raise ArgumentError("halfspace realizer has a tie")
    if c is None:
        c_min = Fraction(0)
        for x in A.col_labels:
            col = scores.column(x)
            if delta[x] > 0:             # x in D1: last block must beat every C_i
                for v in col:
                    c_min = max(c_min, v / delta[x])
            else:                        # x in D2: its C-winner must beat the last block
                c_min = max(c_min, -col[winner[x]] / (-delta[x]))
        c = c_min + 1
    else:
        c = Fraction(c)
        if c <= 0:
            raise ArgumentError("c must be positive")
    rows = []
    for i in range(N):
        rows.append([bi + c * h2 for bi, h2 in zip(theta_blocks.entries[i], half2)])
    rows.append([c * h1 for h1 in half1])
    theta_out = QMatrix(rows, range(N + 1), A.row_labels)
    # certify: re-run inference and compare against the exact set algebra
    winner_out, _ = _point_slicing(A, theta_out)
    for x in A.col_labels:
        want = N if delta[x] > 0 else winner[x]
        if winner_out[x] != want:
            raise ArgumentError(
                f"scale c={c} insufficient: state {x!r} lands in block "
                f"{winner_out[x]} instead of {want}")
    return theta_out


# -- independent hidden units (Hadamard products) -----------------------------


def stacked_identity(unit_sizes):
    """Statistics of independent hidden units: stacked per-unit indicators.

    Rows are (unit, value); columns are joint states; entry 1 iff the unit
    takes the value.  Row span is the unit-wise interaction space.
    """
    sizes = [int(s) for s in unit_sizes]
    if not sizes or any(s < 1 for s in sizes):
        raise ArgumentError("unit sizes must be positive")
    ys = list(product(*(range(s) for s in sizes)))
    row_labels = [(j, v) for j, s in enumerate(sizes) for v in range(s)]
    one, zero = Fraction(1), Fraction(0)
    rows = [[one if y[j] == v else zero for y in ys] for j, v in row_labels]
    return QMatrix(rows, row_labels, ys)


def stack_unit_realizers(thetas, unit_sizes):
    """Assemble per-unit realizers into one parameter matrix for the stacked model."""
    sizes = [int(s) for s in unit_sizes]
    if len(thetas) != len(sizes):
        raise ArgumentError("one realizer per unit required")
    rows, labels = [], []
    col_labels = thetas[0].col_labels
    for j, (th, s) in enumerate(zip(thetas, sizes)):
        if len(th.row_labels) != s:
            raise ArgumentError(f"unit {j} realizer has {len(th.row_labels)} rows, needs {s}")
        if th.col_labels != col_labels:
            raise ArgumentError("realizer column labels differ across units")
        for v in range(s):
            labels.append((j, v))
            rows.append(list(th.entries[v]))
    return QMatrix(rows, labels, col_labels)


def construct_hadamard_slicings(hspec, outer, inner, seed=0):
    """Per-hidden-unit realizers from nested ball systems, one unit per outer ball.

    outer: list of (center, radius) pairs; inner: per unit, the centers of its
    interaction balls.  Unit j gets |inner[j]| + 1 states: blocks are the
    outer-ball intersections with the inner ball slicing, plus the outer
    complement.  Raises unless either the disjoint-balls or the covering
    hypothesis set holds.
    """
    k = _require_k_complete(hspec)
    space = hspec.space
    outer = [(tuple(c), int(r)) for c, r in outer]
    inner = [[tuple(c) for c in cs] for cs in inner]
    if len(outer) != len(inner):
        raise ArgumentError("need one inner center list per outer ball")
    for j, ((oc, orad), ics) in enumerate(zip(outer, inner)):
        if not space.contains(oc):
            raise ArgumentError(f"outer center {oc} not in the state space")
        if not ics:
            raise ArgumentError(f"unit {j} needs at least one inner center")
        for i, c in enumerate(ics):
            for c2 in ics[i + 1:]:
                d = space.hamming(c, c2)
                if d < 2 * k + 1:
                    raise PreconditionError(
                        f"unit {j}: inner centers {c}, {c2} at distance {d} < {2 * k + 1}")
    disjoint_ok, why_d = _check_disjoint_hypotheses(space, k, outer, inner)
    cover_ok, why_c = _check_cover_hypotheses(space, k, outer, inner)
    if not (disjoint_ok or cover_ok):
        raise PreconditionError(
            "neither hypothesis set holds: " + "; ".join(why_d + why_c))
    A_s = build_signed_suffstat(hspec)
    thetas = []
    for j, ((oc, orad), ics) in enumerate(zip(outer, inner)):
        th_inner = construct_ball_slicing(hspec, ics, seed=seed + 101 * j)
        th_half = halfspace_realizer(hspec, oc, orad)
        thetas.append(truncate_slicing(A_s, th_inner, th_half))
    return thetas


def unit_halfspace_realizer(A, weights):
    """2-row unit realizer from an explicit weight vector over the rows of A.

    Hidden value 1 wins exactly where <weights, A_x> > 0.  This is the general
    2-block slicing the truncation lemma permits; ball/complement splits are
    the special case produced by halfspace_realizer.  Raises on ties.
    """
    w = [Fraction(v) for v in weights]
    if len(w) != len(A.row_labels):
        raise ArgumentError("need one weight per row of A")
    zero = [Fraction(0)] * len(w)
    th = QMatrix([zero, w], range(2), A.row_labels)
    _point_slicing(A, th)  # raises on ties
    return th


def _check_disjoint_hypotheses(space, k, outer, inner):
    why = []
    for i, (c1, r1) in enumerate(outer):
        for c2, r2 in outer[i + 1:]:
            if space.hamming(c1, c2) <= r1 + r2:
                why.append(f"outer balls at {c1} (r={r1}) and {c2} (r={r2}) intersect")
    for j, ((oc, orad), ics) in enumerate(zip(outer, inner)):
        for c in ics:
            if space.hamming(c, oc) + k > orad:
                why.append(f"unit {j}: inner ball at {c} is not inside the outer ball")
    return not why, why


def _check_cover_hypotheses(space, k, outer, inner):
    why = []
    uncovered = [x for x in space.states()
                 if all(space.hamming(x, c) > r for c, r in outer)]
    if uncovered:
        why.append(f"outer balls do not cover the space ({len(uncovered)} states missed)")
    for j, ((oc, orad), ics) in enumerate(zip(outer, inner)):
        miss = [x for x in space.hamming_ball(oc, orad)
                if all(space.hamming(x, c) > k for c in ics)]
        if miss:
            why.append(f"unit {j}: inner balls do not cover the outer ball")
    return not why, why


def hadamard_prediction(hspec, outer, inner, rank_a=None):
    """Predicted tropical dimension when a hypothesis set of the theorem holds."""
    from .dimension import FactorSpec

    k = hspec.interactions.max_order()
    space = hspec.space
    outer = [(tuple(c), int(r)) for c, r in outer]
    inner = [[tuple(c) for c in cs] for cs in inner]
    if rank_a is None:
        rank_a = rank(build_signed_suffstat(hspec))
    disjoint_ok, _ = _check_disjoint_hypotheses(space, k, outer, inner)
    if disjoint_ok:
        A_s = build_signed_suffstat(hspec)
        rest = [x for x in space.states()
                if all(space.hamming(x, c) > r for c, r in outer)]
        if rest and rank(A_s.restrict_cols(rest)) == rank_a:
            hidden_rank = 1 + sum(len(ics) for ics in inner)
            return hidden_rank * rank_a - 1
    cover_ok, _ = _check_cover_hypotheses(space, k, outer, inner)
    if cover_ok:
        return space.size - 1
    return None


# -- hierarchical hidden factors (echelon grouping) ---------------------------


def column_group_map(B):
    """Group hidden states by the last statistics row their column touches."""
    groups = {}
    for y in B.col_labels:
        col = B.column(y)
        last = max(i for i, v in enumerate(col) if v != 0)
        groups[y] = last
    return groups


def construct_rref_slicing(visible_hspec, hidden_hspec, centers, seed=0, genericize=True):
    """Realizer for a hierarchical hidden factor via geometrically scaled columns.

    Hidden columns are grouped by their last nonzero statistics row; group j
    is steered by a scaled separator centered at the j-th ball center, with
    scales grown past the total 1-norm of all earlier columns so the largest
    touched row decides the group.  The union of blocks over each group then
    contains the group's interaction ball.
    """
    from .dimension import FactorSpec, KroneckerModelSpec
    from .hierarchical import build_suffstat

    k = _require_k_complete(visible_hspec)
    centers = [tuple(c) for c in centers]
    space = visible_hspec.space
    B = build_suffstat(hidden_hspec)
    b = len(B.row_labels)
    if len(centers) != b:
        raise PreconditionError(f"need exactly rank(B) = {b} centers, got {len(centers)}")
    for c in centers:
        if not space.contains(c):
            raise ArgumentError(f"center {c} not in the state space")
    for i, c in enumerate(centers):
        for c2 in centers[i + 1:]:
            d = space.hamming(c, c2)
            if d < 2 * k + 1:
                raise PreconditionError(
                    f"centers {c} and {c2} at Hamming distance {d} < 2k+1 = {2 * k + 1}")
    A_s = build_signed_suffstat(visible_hspec)
    tau = ball_threshold(visible_hspec, k)
    empty_row = ((), ())
    # the empty-row entry replaces +1 by -tau so <A_x, col> = <A_x, A_c> - tau
    empty_idx = A_s.row_labels.index(empty_row)
    base_cols = []
    for c in centers:
        col = list(A_s.column(c))
        col[empty_idx] = Fraction(-tau)
        base_cols.append(col)
    kappas = []
    total = Fraction(0)
    for j in range(b):
        kappa = total + 1
        kappas.append(kappa)
        total += kappa * sum(abs(v) for v in base_cols[j])
    theta_rows = [[kappas[j] * v for v in base_cols[j]] for j in range(b)]
    theta = QMatrix(theta_rows, B.row_labels, A_s.row_labels)
    vis = FactorSpec.from_hierarchical(visible_hspec, "pm1")
    hid = FactorSpec.from_hierarchical(hidden_hspec, "01")
    spec = KroneckerModelSpec(vis, hid)
    if genericize:
        theta = make_generic(spec, theta, seed)
    groups = column_group_map(B)
    blocks = infer(spec, theta).blocks(spec.hidden_states)
    for j, c in enumerate(centers):
        union = set()
        for y, g in groups.items():
            if g == j:
                union.update(blocks[y])
        ball = set(space.hamming_ball(c, k))
        missing = ball - union
        if missing:
            raise AssertionError(
                f"group {j} union lost ball states of {c}: {sorted(missing)}")
    return theta


# -- realizability and the brute-force oracle ---------------------------------


def realizable(spec, h):
    """Exact parameter matrix realizing a singleton inference function, or None.

    Feasibility of <Theta A_x, B_h(x) - B_y> > 0 over all x and y != h(x) is
    decided by the exact margin LP.
    """
    if isinstance(h, InferenceFunction):
        h = h.singleton_map()
    A, B = spec.A, spec.B
    unknowns = [(kb, ia) for kb in B.row_labels for ia in A.row_labels]
    cons = []
    for x in A.col_labels:
        hx = h[x]
        if not B.has_col(hx):
            raise ArgumentError(f"h({x!r}) = {hx!r} is not a hidden state")
        a_col = A.column(x)
        b_win = B.column(hx)
        for y in B.col_labels:
            if y == hx:
                continue
            b_col = B.column(y)
            diff = [w - v for w, v in zip(b_win, b_col)]
            a_idx = {ia: a_col[i] for i, ia in enumerate(A.row_labels)}
            d_idx = {kb: diff[i] for i, kb in enumerate(B.row_labels)}
            cons.append([a_idx[ia] * d_idx[kb] for (kb, ia) in unknowns])
    point = strict_feasible(StrictFeasibilityProblem(cons, len(unknowns)))
    if point is None:
        return None
    nb, na = len(B.row_labels), len(A.row_labels)
    rows = [[point[i * na + j] for j in range(na)] for i in range(nb)]
    return QMatrix(rows, B.row_labels, A.row_labels)


@dataclass(frozen=True)
class BruteForceResult:
    dim: int
    witness: InferenceFunction
    realizer: QMatrix
    tie_sample_exceeded: bool
    enumerated: int


def brute_force_tropical_dim(spec, budget=10 ** 7, tie_samples=40, seed=0):
    """Exact maximum over realizable singleton inference functions.

    Enumerates all h: X -> Y, keeps those that pass the realizability LP, and
    maximizes the piecewise-matrix rank.  A random sample of (possibly tied)
    parameter matrices seeds the incumbent and guards against a tie cell
    beating every singleton cell, which is flagged if observed.
    """
    A, B = spec.A, spec.B
    xs, ys = list(A.col_labels), list(B.col_labels)
    nX, nY = len(xs), len(ys)
    if nY ** nX > budget:
        raise ResourceBudgetError(f"|Y|^|X| = {nY}^{nX} exceeds the budget {budget}")
    cols = {(x, y): _int_scaled(kron_column(A.column(x), B.column(y))) for x in xs for y in ys}
    d = len(A.row_labels) * len(B.row_labels)

    def rank_of(hvec):
        rows = [[cols[(x, ys[hvec[i]])][r] for i, x in enumerate(xs)] for r in range(d)]
        return _bareiss_rank(rows)

    # sampling phase: deterministic random parameter matrices
    rng = random.Random(seed)
    best_rank, best_h, best_theta = 0, None, None
    tie_best = 0
    for _ in range(tie_samples):
        theta = QMatrix([[Fraction(rng.randint(-99, 99)) for _ in A.row_labels]
                         for _ in B.row_labels], B.row_labels, A.row_labels)
        h = infer(spec, theta)
        if h.generic:
            hm = h.singleton_map()
            hvec = tuple(ys.index(hm[x]) for x in xs)
            r = rank_of(hvec)
            if r > best_rank:
                best_rank, best_h, best_theta = r, h, theta
        else:
            tie_best = max(tie_best, rank(tropical_matrix(spec, theta)))

    # full enumeration; LP only for candidates beating the incumbent
    candidates = []
    enumerated = 0
    for hvec in product(range(nY), repeat=nX):
        enumerated += 1
        r = rank_of(hvec)
        if r > best_rank:
            candidates.append((r, hvec))
    candidates.sort(key=lambda t: (-t[0], t[1]))
    for r, hvec in candidates:
        if r <= best_rank:
            break
        hm = {x: ys[hvec[i]] for i, x in enumerate(xs)}
        theta = realizable(spec, hm)
        if theta is not None:
            best_rank = r
            best_h = InferenceFunction.from_dict({x: [y] for x, y in hm.items()}, xs)
            best_theta = theta
    if best_h is None:
        # every sampled theta tied and nothing beat rank 0: fall back to any h
        for hvec in product(range(nY), repeat=nX):
            hm = {x: ys[hvec[i]] for i, x in enumerate(xs)}
            theta = realizable(spec, hm)
            if theta is not None:
                best_rank = rank_of(hvec)
                best_h = InferenceFunction.from_dict({x: [y] for x, y in hm.items()}, xs)
                best_theta = theta
                break
        else:
            raise AssertionError("no singleton inference function is realizable")
    return BruteForceResult(best_rank - 1, best_h, best_theta,
                            tie_best > best_rank, enumerated)


def _int_scaled(col):
    """Integer rescale of a rational column (column scaling preserves rank)."""
    den = 1
    for v in col:
        den = lcm(den, v.denominator)
    return [int(v * den) for v in col]
