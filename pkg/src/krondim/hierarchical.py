"""Product state spaces, interaction complexes, and their statistics matrices.

Two sufficient-statistics conventions coexist: the 0/1 indicator matrix
(`build_suffstat`, rows over nonzero partial states) and the +1/-1 matrix
(`build_signed_suffstat`, rows over full partial states).  Both span the same
function space; slicing constructions use the signed one because its columns
satisfy an exact inner-product/Hamming-distance identity.
"""

from fractions import Fraction
from itertools import combinations, product

from .errors import ArgumentError
from .exactla import QMatrix, rank


class StateSpace:
    """Product of finite per-variable state sets {0..card-1}, variables 1-based."""

    __slots__ = ("cardinalities",)

    def __init__(self, cardinalities):
        cards = tuple(int(c) for c in cardinalities)
        if not cards or any(c < 1 for c in cards):
            raise ArgumentError("need n >= 1 variables, each with cardinality >= 1")
        self.cardinalities = cards

    @property
    def n(self):
        return len(self.cardinalities)

    @property
    def size(self):
        s = 1
        for c in self.cardinalities:
            s *= c
        return s

    def states(self):
        """All states in mixed-radix order, variable 1 most significant."""
        return product(*(range(c) for c in self.cardinalities))

    def contains(self, x):
        return (len(x) == self.n
                and all(0 <= xi < c for xi, c in zip(x, self.cardinalities)))

    def hamming(self, x, y):
        return sum(1 for a, b in zip(x, y) if a != b)

    def hamming_ball(self, center, radius):
        return [x for x in self.states() if self.hamming(x, center) <= radius]

    def ball_size(self, radius):
        """Cardinality of any radius-r ball (center independent)."""
        total = 0
        for j in range(min(radius, self.n) + 1):
            for lam in combinations(range(self.n), j):
                p = 1
                for i in lam:
                    p *= self.cardinalities[i] - 1
                total += p
        return total

    def __eq__(self, other):
        return isinstance(other, StateSpace) and self.cardinalities == other.cardinalities

    def __hash__(self):
        return hash(self.cardinalities)

    def __repr__(self):
        return f"StateSpace{self.cardinalities}"


class InteractionSet:
    """Inclusion-closed family of subsets of {1..n}, stored as sorted tuples.

    Non-closed input is rejected rather than silently closed.
    """

    __slots__ = ("subsets",)

    def __init__(self, subsets):
        fam = set()
        for s in subsets:
            t = tuple(sorted(set(int(i) for i in s)))
            if any(i < 1 for i in t):
                raise ArgumentError("variable indices are 1-based positive integers")
            fam.add(t)
        if () not in fam:
            raise ArgumentError("interaction set must contain the empty set")
        for t in fam:
            for i in range(len(t)):
                if t[:i] + t[i + 1:] not in fam:
                    raise ArgumentError(
                        f"not inclusion-closed: {t} present but {t[:i] + t[i + 1:]} missing")
        self.subsets = tuple(sorted(fam, key=lambda t: (len(t), t)))

    def __contains__(self, s):
        return tuple(sorted(s)) in set(self.subsets)

    def __iter__(self):
        return iter(self.subsets)

    def __len__(self):
        return len(self.subsets)

    def __eq__(self, other):
        return isinstance(other, InteractionSet) and self.subsets == other.subsets

    def __hash__(self):
        return hash(self.subsets)

    def max_order(self):
        return max(len(t) for t in self.subsets)

    def is_k_complete(self, n):
        """True iff this is exactly { lam subset of [n] : |lam| <= k } for k = max order."""
        k = self.max_order()
        return self == k_interaction(n, k)


def k_interaction(n, k):
    """All subsets of {1..n} of size at most k."""
    if not 0 <= k <= n:
        raise ArgumentError(f"need 0 <= k <= n, got k={k}, n={n}")
    subs = []
    for j in range(k + 1):
        subs.extend(combinations(range(1, n + 1), j))
    return InteractionSet(subs)


class HierarchicalSpec:
    """A product state space together with an interaction family on its variables."""

    __slots__ = ("space", "interactions")

    def __init__(self, space, interactions):
        if not isinstance(space, StateSpace):
            space = StateSpace(space)
        if not isinstance(interactions, InteractionSet):
            interactions = InteractionSet(interactions)
        for lam in interactions:
            if any(i > space.n for i in lam):
                raise ArgumentError(f"interaction {lam} mentions a variable beyond n={space.n}")
        self.space = space
        self.interactions = interactions

    def __eq__(self, other):
        return (isinstance(other, HierarchicalSpec)
                and self.space == other.space and self.interactions == other.interactions)

    def __hash__(self):
        return hash((self.space, self.interactions))


def _row_order(pairs):
    return sorted(pairs, key=lambda p: (len(p[0]), p[0], p[1]))


def build_suffstat(spec):
    """0/1 statistics matrix: rows (lam, partial state over nonzero alphabets).

    The empty interaction contributes the all-ones first row; the full matrix
    has independent rows, so its rank equals its row count.
    """
    cards = spec.space.cardinalities
    row_labels = [((), ())]
    for lam in spec.interactions:
        if not lam:
            continue
        alphabets = [range(1, cards[i - 1]) for i in lam]
        row_labels.extend(_row_order((lam, val) for val in product(*alphabets)))
    # keep deterministic global order: empty first, then by (|lam|, lam, value)
    row_labels = [((), ())] + _row_order(l for l in row_labels if l != ((), ()))
    states = list(spec.space.states())
    one, zero = Fraction(1), Fraction(0)
    rows = []
    for lam, val in row_labels:
        if not lam:
            rows.append([one] * len(states))
        else:
            idx = [i - 1 for i in lam]
            rows.append([one if tuple(x[i] for i in idx) == val else zero for x in states])
    return QMatrix(rows, row_labels, states)


def build_signed_suffstat(spec):
    """+1/-1 statistics matrix: rows (lam, partial state over full alphabets).

    Column inner products satisfy <A_x, A_x'> = a - 2*d_H(A_x, A_x') with a
    the row count, which drives the ball-slicing constructions.
    """
    cards = spec.space.cardinalities
    pairs = []
    for lam in spec.interactions:
        alphabets = [range(cards[i - 1]) for i in lam]
        pairs.extend((lam, val) for val in product(*alphabets))
    row_labels = _row_order(pairs)
    states = list(spec.space.states())
    one, minus = Fraction(1), Fraction(-1)
    rows = []
    for lam, val in row_labels:
        idx = [i - 1 for i in lam]
        rows.append([one if tuple(x[i] for i in idx) == val else minus for x in states])
    return QMatrix(rows, row_labels, states)


def dim_V(spec):
    """Dimension of the interaction function space = rank of the stats matrix."""
    total = 1
    for lam in spec.interactions:
        if not lam:
            continue
        p = 1
        for i in lam:
            p *= spec.space.cardinalities[i - 1] - 1
        total += p
    return total


def lambda_ball(spec, center):
    """States whose disagreement set with the center lies in the interaction family."""
    center = tuple(center)
    if not spec.space.contains(center):
        raise ArgumentError(f"center {center} not in the state space")
    fam = set(spec.interactions.subsets)
    out = []
    for x in spec.space.states():
        diff = tuple(i + 1 for i, (a, b) in enumerate(zip(x, center)) if a != b)
        if diff in fam:
            out.append(x)
    return out


def indicator_expansion(spec, lam, target):
    """Coefficients over the 0/1 stats rows reproducing the cylinder indicator.

    Returns the coefficient list c (aligned with build_suffstat row order) with
    c . A = indicator of { x : x_lam = target }, by inclusion-exclusion over
    lam* <= lam' <= lam with sign (-1)^{|lam' \\ lam*|}.
    """
    lam = tuple(sorted(lam))
    if lam not in spec.interactions:
        raise ArgumentError(f"{lam} is not in the interaction family")
    target = tuple(target)
    if len(target) != len(lam):
        raise ArgumentError("target must assign one value per variable in lam")
    for v, i in zip(target, lam):
        if not 0 <= v < spec.space.cardinalities[i - 1]:
            raise ArgumentError(f"target value {v} out of range for variable {i}")
    tdict = dict(zip(lam, target))
    lam_star = tuple(i for i in lam if tdict[i] != 0)
    coeffs = {}
    rest = [i for i in lam if i not in lam_star]
    for r in range(len(rest) + 1):
        for extra in combinations(rest, r):
            lam_p = tuple(sorted(lam_star + extra))
            sign = (-1) ** len(extra)
            alphabets = [range(1, spec.space.cardinalities[i - 1]) for i in lam_p]
            for val in product(*alphabets):
                vd = dict(zip(lam_p, val))
                if all(vd[i] == tdict[i] for i in lam_star):
                    coeffs[(lam_p, val)] = coeffs.get((lam_p, val), 0) + sign
    A = build_suffstat(spec)
    return [Fraction(coeffs.get(lab, 0)) for lab in A.row_labels]


def check_full_rank_ball(spec, center):
    """Executable witness that the stats matrix restricted to a ball has full rank."""
    A = build_suffstat(spec)
    ball = lambda_ball(spec, center)
    return rank(A.restrict_cols(ball)) == dim_V(spec)
