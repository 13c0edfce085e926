"""Reusable verification batteries behind the `verify` command and the tests.

Each battery returns a plain report dict with deterministic contents for a
given seed; the CLI serializes these directly.
"""

import random
from fractions import Fraction
from itertools import combinations

from .codes import greedy_pack
from .dimension import (FactorSpec, KroneckerModelSpec, expected_dim, generic_dim,
                        mixture_bound_check, mixture_spec, rbm_spec)
from .exactla import QMatrix, rank
from .hierarchical import (HierarchicalSpec, InteractionSet, StateSpace,
                           build_signed_suffstat, check_full_rank_ball, dim_V,
                           k_interaction, lambda_ball)
from .tropical import (brute_force_tropical_dim, construct_ball_slicing, infer,
                       truncate_slicing, _point_slicing)


def rbm_table(n_max=6, m_max=6, trials=3, seed=0):
    """Generic dimension of every binary RBM up to (n_max, m_max) vs the closed form."""
    rows = []
    all_pass = True
    for n in range(1, n_max + 1):
        for m in range(1, m_max + 1):
            formula = min(2 ** n - 1, (n + 1) * (m + 1) - 1)
            spec = rbm_spec(n, m)
            exp = expected_dim(spec)
            generic, _ = generic_dim(spec, trials, seed)
            ok = generic == formula
            all_pass &= ok
            rows.append({"n": n, "m": m, "expected": exp, "generic": generic,
                         "formula": formula, "verdict": "PASS" if ok else "FAIL"})
    return {"table": rows, "all_pass": all_pass}


def mixture_bound(n, m, trials=3, seed=0):
    rep = mixture_bound_check(n, m, trials, seed)
    return {"n": n, "m": m, "rbm_dim": rep.rbm_dim, "mixture_dim": rep.mixture_dim,
            "relation": "strict" if rep.strict else "tight", "all_pass": True}


# -- randomized lemma batteries ----------------------------------------------


def _random_inclusion_closed(rng, n):
    """Downward closure of a few random generator subsets."""
    fam = {()}
    for _ in range(rng.randint(1, 3)):
        size = rng.randint(1, n)
        gen = tuple(sorted(rng.sample(range(1, n + 1), size)))
        for r in range(len(gen) + 1):
            fam.update(combinations(gen, r))
    return InteractionSet(fam)


def full_ball_battery(count=50, seed=0):
    """Stats matrix restricted to an interaction ball always has full rank."""
    rng = random.Random(seed)
    cases, failures = [], 0
    for _ in range(count):
        n = rng.randint(2, 5)
        cards = [rng.choice([2, 2, 2, 3]) for _ in range(n)]
        spec = HierarchicalSpec(cards, _random_inclusion_closed(rng, n))
        center = tuple(rng.randrange(c) for c in cards)
        ok = check_full_rank_ball(spec, center)
        ok = ok and len(lambda_ball(spec, center)) == dim_V(spec)
        failures += not ok
        cases.append({"cards": cards, "interactions": [list(t) for t in spec.interactions],
                      "center": list(center), "verdict": "PASS" if ok else "FAIL"})
    return {"battery": "full-ball-rank", "count": count, "failures": failures,
            "cases": cases, "all_pass": failures == 0}


def ball_containment_battery(count=20, seed=0):
    """Ball-slicing blocks contain their interaction balls, across random configs."""
    rng = random.Random(seed)
    cases, failures = [], 0
    done = 0
    while done < count:
        n = rng.randint(2, 5)
        k = rng.choice([1, 1, 1, 2])
        if 2 * k >= n:
            continue
        cards = [rng.choice([2, 2, 3]) for _ in range(n)]
        space = StateSpace(cards)
        want = rng.randint(2, 3)
        code = greedy_pack(space, k, want=want)
        if len(code) < 2:
            continue
        hspec = HierarchicalSpec(cards, k_interaction(n, k))
        centers = list(code.centers)
        theta = construct_ball_slicing(hspec, centers, seed=rng.randrange(2 ** 30))
        spec = mixture_spec(FactorSpec.from_hierarchical(hspec, "pm1"), len(centers))
        blocks = infer(spec, theta).blocks(spec.hidden_states)
        ok = all(set(space.hamming_ball(c, k)) <= set(blocks[i])
                 for i, c in enumerate(centers))
        failures += not ok
        cases.append({"cards": cards, "k": k, "centers": [list(c) for c in centers],
                      "verdict": "PASS" if ok else "FAIL"})
        done += 1
    return {"battery": "ball-containment", "count": count, "failures": failures,
            "cases": cases, "all_pass": failures == 0}


def _random_singleton_realizer(rng, A, nrows):
    for _ in range(100):
        th = QMatrix([[rng.randint(-4, 4) for _ in A.row_labels] for _ in range(nrows)],
                     range(nrows), A.row_labels)
        try:
            winner, _ = _point_slicing(A, th)
        except Exception:
            continue
        return th, winner
    raise AssertionError("could not draw a tie-free realizer")


def truncation_battery(count=20, seed=0):
    """Truncated slicings produce exactly the set algebra D2&C_1..D2&C_N, D1."""
    rng = random.Random(seed)
    cases, failures = [], 0
    for _ in range(count):
        nrows = rng.randint(3, 4)
        ncols = rng.randint(5, 8)
        rows = [[1] * ncols] + [[rng.randint(-4, 4) for _ in range(ncols)]
                                for _ in range(nrows - 1)]
        A = QMatrix(rows, range(nrows), range(ncols))
        N = rng.randint(2, 3)
        th_blocks, winner_blocks = _random_singleton_realizer(rng, A, N)
        th_half, winner_half = _random_singleton_realizer(rng, A, 2)
        th_out = truncate_slicing(A, th_blocks, th_half)
        winner_out, _ = _point_slicing(A, th_out)
        ok = True
        for x in A.col_labels:
            want = N if winner_half[x] == 0 else winner_blocks[x]
            ok &= winner_out[x] == want
        failures += not ok
        cases.append({"ncols": ncols, "N": N, "verdict": "PASS" if ok else "FAIL"})
    return {"battery": "truncated-slicing", "count": count, "failures": failures,
            "cases": cases, "all_pass": failures == 0}


def _random_nonsingular(rng, labels):
    n = len(labels)
    while True:
        Q = QMatrix([[rng.randint(-3, 3) for _ in range(n)] for _ in range(n)],
                    labels, labels)
        if rank(Q) == n:
            return Q


def invariance_battery(count=10, seed=0):
    """Model and tropical dimensions are invariant under row-span-preserving maps."""
    rng = random.Random(seed)
    hs = HierarchicalSpec([2, 2], k_interaction(2, 1))
    vis = FactorSpec.from_hierarchical(hs, "pm1")
    base_spec = mixture_spec(vis, 2)
    base_oracle = brute_force_tropical_dim(base_spec, seed=seed).dim
    base_generic, _ = generic_dim(base_spec, trials=5, seed=seed)
    cases, failures = [], 0
    for i in range(count):
        Q = _random_nonsingular(rng, base_spec.A.row_labels)
        A2 = Q.matmul(base_spec.A)
        spec2 = mixture_spec(FactorSpec.from_matrix(A2), 2)
        o2 = brute_force_tropical_dim(spec2, seed=seed).dim
        g2, _ = generic_dim(spec2, trials=5, seed=seed)
        # nonsingular Qb always has distinct columns, so Qb.B = Qb stays a valid hidden factor
        Qb = _random_nonsingular(rng, base_spec.B.row_labels)
        B2 = Qb.matmul(base_spec.B)
        spec3 = KroneckerModelSpec(vis, FactorSpec.from_matrix(B2))
        o3 = brute_force_tropical_dim(spec3, seed=seed).dim
        ok = o2 == base_oracle and o3 == base_oracle and g2 == base_generic
        failures += not ok
        cases.append({"trial": i, "oracle_rowmap": o2, "oracle_hiddenmap": o3,
                      "generic_rowmap": g2, "verdict": "PASS" if ok else "FAIL"})
    return {"battery": "invariance", "count": count, "failures": failures,
            "base": {"oracle": base_oracle, "generic": base_generic},
            "cases": cases, "all_pass": failures == 0}


def lemma_suite(seed=0, full_ball=50, containment=20, truncation=20, invariance=10):
    parts = [
        full_ball_battery(full_ball, seed),
        ball_containment_battery(containment, seed + 1),
        truncation_battery(truncation, seed + 2),
        invariance_battery(invariance, seed + 3),
    ]
    return {"batteries": parts, "all_pass": all(p["all_pass"] for p in parts)}
