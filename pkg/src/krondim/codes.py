"""Hamming-ball packings, coverings, and the classical cardinality bounds.

Greedy constructions are deterministic so that the codes they emit can seed
reproducible slicing constructions.  Distances on mixed-cardinality spaces
count disagreeing coordinates; the closed-form bounds are exposed only for
uniform q-ary cubes.
"""

from dataclasses import dataclass, field
from fractions import Fraction
from math import comb

from .errors import ArgumentError, ResourceBudgetError
from .hierarchical import StateSpace


@dataclass(frozen=True)
class Code:
    """A set of centers with an exactly verified packing or covering property."""

    space: StateSpace
    centers: tuple
    kind: str             # "packing" | "covering"
    parameter: int        # min distance d for packing, radius k for covering
    short: bool = False   # greedy_pack could not reach a requested size

    def __post_init__(self):
        for c in self.centers:
            if not self.space.contains(c):
                raise ArgumentError(f"center {c} not in the state space")
        if self.kind == "packing":
            d = self.parameter
            for i, c in enumerate(self.centers):
                for c2 in self.centers[i + 1:]:
                    dist = self.space.hamming(c, c2)
                    if dist < d:
                        raise ArgumentError(
                            f"centers {c}, {c2} at distance {dist} < required {d}")
        elif self.kind == "covering":
            k = self.parameter
            for x in self.space.states():
                if all(self.space.hamming(x, c) > k for c in self.centers):
                    raise ArgumentError(f"state {x} not covered within radius {k}")
        else:
            raise ArgumentError(f"unknown code kind {self.kind!r}")

    def __len__(self):
        return len(self.centers)


def greedy_pack(space, k, want=None):
    """Lexicographic greedy packing with radius-k balls (min distance 2k+1).

    On a q-ary cube the result meets the Gilbert-Varshamov bound.  If `want`
    centers are requested and greedy cannot reach that many, the achieved
    code is returned flagged short.
    """
    if not isinstance(space, StateSpace):
        space = StateSpace(space)
    if k < 0:
        raise ArgumentError("radius must be nonnegative")
    d = 2 * k + 1
    centers = []
    for x in space.states():
        if all(space.hamming(x, c) >= d for c in centers):
            centers.append(x)
            if want is not None and len(centers) == want:
                break
    short = want is not None and len(centers) < want
    return Code(space, tuple(centers), "packing", d, short)


def greedy_cover(space, k):
    """Greedy set cover by radius-k balls; coverage verified exactly."""
    if not isinstance(space, StateSpace):
        space = StateSpace(space)
    if k < 0:
        raise ArgumentError("radius must be nonnegative")
    states = list(space.states())
    uncovered = set(states)
    centers = []
    while uncovered:
        best, best_gain = None, -1
        for c in states:
            gain = sum(1 for x in uncovered if space.hamming(x, c) <= k)
            if gain > best_gain:
                best, best_gain = c, gain
        centers.append(best)
        uncovered = {x for x in uncovered if space.hamming(x, best) > k}
    return Code(space, tuple(centers), "covering", k)


def _check_qnd(q, n, d):
    if q < 2:
        raise ArgumentError("need alphabet size q >= 2")
    if not 1 <= d <= n:
        raise ArgumentError("need 1 <= d <= n")


def ball_size(q, n, r):
    return sum(comb(n, j) * (q - 1) ** j for j in range(r + 1))


def gv_bound(q, n, d):
    """Gilbert-Varshamov lower bound on the maximum code size, as an exact rational."""
    _check_qnd(q, n, d)
    return Fraction(q ** n, sum(comb(n, j) * (q - 1) ** j for j in range(d)))


def is_prime_power(q):
    if q < 2:
        return False
    p = 2
    m = q
    while p * p <= m:
        if m % p == 0:
            while m % p == 0:
                m //= p
            return m == 1
        p += 1
    return True  # q itself prime


def gv_prime_power_bound(q, n, d):
    """Prime-power Gilbert-Varshamov bound (attained by linear codes)."""
    _check_qnd(q, n, d)
    if not is_prime_power(q):
        raise ArgumentError(f"{q} is not a prime power")
    s = sum(comb(n - 1, j) * (q - 1) ** j for j in range(d - 1))
    e = 0
    while q ** (e + 1) <= s:
        e += 1
    return q ** (n - 1 - e)


def sphere_packing_bound(q, n, d):
    """Hamming upper bound q^n / |ball of radius floor((d-1)/2)|, exact rational."""
    _check_qnd(q, n, d)
    t = (d - 1) // 2
    return Fraction(q ** n, ball_size(q, n, t))


def nested_ball_pack(space, k, l):
    """Greedy radius-k packing whose balls all fit inside the radius-l ball at 0.

    Candidate centers lie within distance l-k of the origin and are tried in
    far-first order (decreasing distance, then lexicographic); the achieved
    count always meets ceil(|K(l-k)| / |K(2k)|) because any maximal packing
    of the candidate region is also a radius-2k covering of it.
    """
    if not isinstance(space, StateSpace):
        space = StateSpace(space)
    n = space.n
    if not 0 <= k <= l <= n:
        raise ArgumentError("need 0 <= k <= l <= n")
    origin = tuple(0 for _ in range(n))
    cands = [x for x in space.states() if space.hamming(x, origin) <= l - k]
    cands.sort(key=lambda x: (-space.hamming(x, origin), x))
    d = 2 * k + 1
    centers = []
    for x in cands:
        if all(space.hamming(x, c) >= d for c in centers):
            centers.append(x)
    lower = -(-space.ball_size(l - k) // space.ball_size(min(2 * k, n)))
    if len(centers) < lower:
        raise AssertionError(
            f"greedy packed {len(centers)} balls, below the guaranteed {lower}")
    return Code(space, tuple(sorted(centers)), "packing", d)


def brute_force_max_code(space, d, budget=2 ** 16):
    """Exact maximum packing size via branch-and-bound clique search.

    Codes are translation invariant coordinate-wise, so the search is rooted
    at the origin; a greedy-coloring bound prunes branches.
    """
    if not isinstance(space, StateSpace):
        space = StateSpace(space)
    if d < 1:
        raise ArgumentError("need minimum distance >= 1")
    if space.size > budget:
        raise ResourceBudgetError(f"|X| = {space.size} exceeds the budget {budget}")
    if d == 1:
        return space.size
    states = list(space.states())
    origin = states[0]
    # root the search at the origin: any code translates to one containing it
    verts = [x for x in states if space.hamming(x, origin) >= d]
    nv = len(verts)
    adj = [0] * nv
    for i in range(nv):
        for j in range(i + 1, nv):
            if space.hamming(verts[i], verts[j]) >= d:
                adj[i] |= 1 << j
                adj[j] |= 1 << i
    best = 0

    def color_bound(cand_mask):
        """Greedy coloring: number of color classes bounds the clique size."""
        order = []
        m = cand_mask
        while m:
            b = m & -m
            order.append(b.bit_length() - 1)
            m ^= b
        colors = []
        count = 0
        for v in order:
            placed = False
            for ci in range(len(colors)):
                if not (colors[ci] & (1 << v)):
                    # v non-adjacent to everything in the class
                    if not (adj[v] & colors[ci]):
                        colors[ci] |= 1 << v
                        placed = True
                        break
            if not placed:
                colors.append(1 << v)
                count += 1
        return len(colors)

    def expand(cand_mask, size):
        nonlocal best
        if cand_mask == 0:
            best = max(best, size)
            return
        if size + bin(cand_mask).count("1") <= best:
            return
        if size + color_bound(cand_mask) <= best:
            return
        m = cand_mask
        while m:
            b = m & -m
            v = b.bit_length() - 1
            m ^= b
            if size + bin(cand_mask).count("1") <= best:
                return
            expand(cand_mask & adj[v], size + 1)
            cand_mask ^= b
    full = (1 << nv) - 1
    expand(full, 1)
    return best
