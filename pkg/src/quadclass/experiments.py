"""Desk-scale density experiments over congruence families of discriminants.

Each experiment walks an arithmetic progression D = m (mod N), computes
exact class data for the qualifying fundamental discriminants, and reports
checkpointed counts and ratios against the classical target constants:

* ``nh_average``            average of 3^r3 over S+; limit 4/3 (Nakagawa-Horie).
* ``indivisibility_density`` fraction of S+ with 3 not dividing h; liminf >= 5/6.
* ``pair_experiment``       densities of L, L_t and their intersection inside
                            the progression; liminf bounds 5/pi^2 and
                            (10 - pi^2)/pi^2.
* ``lambda_survey``         certificates that lambda_3 vanishes for both
                            Q(sqrt(D)) and Q(sqrt(D+t)) (Iwasawa's criterion:
                            3 inert and 3 not dividing h).
* ``imaginary_density``     fraction of S- with 3 not dividing h; liminf >= 1/2.

Set conventions follow the definitions the constants come from: S and the
L-sets count D <= X inside the progression, while S+ and S- count
fundamental discriminants with |D| strictly below X. Each report names the
denominator its ratios use.

Per-discriminant work is pure and fans out to a process pool (``jobs``);
aggregation sorts by discriminant, so reports are byte-identical for any
worker count. An optional ``cache`` mapping D -> ClassGroupInfo is consulted
before computing and extended in place.
"""

from __future__ import annotations

import math
import sys
from bisect import bisect_left, bisect_right
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from typing import Iterator

from .arith import Discriminant, kronecker, mobius, sieve_squarefree
from .arith import smallest_prime_factors
from .families import LEVEL_LAMBDA, LEVEL_NH, LEVEL_THEOREM, CongruenceFamily
from .forms import ClassGroupInfo, _core_info

__all__ = [
    "DensityReport",
    "DiscriminantSets",
    "Lambda3Certificate",
    "TARGET_IMAGINARY_INDIVISIBLE",
    "TARGET_INDIVISIBLE",
    "TARGET_NH_AVERAGE",
    "TARGET_PAIR_INTERSECTION",
    "TARGET_SET_DENSITY",
    "compute_class_infos",
    "enumerate_s_plus",
    "imaginary_density",
    "indivisibility_density",
    "lambda_survey",
    "nh_average",
    "pair_experiment",
]

TARGET_NH_AVERAGE = 4.0 / 3.0
TARGET_INDIVISIBLE = 5.0 / 6.0
TARGET_SET_DENSITY = 5.0 / math.pi**2
TARGET_PAIR_INTERSECTION = (10.0 - math.pi**2) / math.pi**2
TARGET_IMAGINARY_INDIVISIBLE = 0.5

LAMBDA3_VERDICT = "lambda3(Q(sqrt(D))) = lambda3(Q(sqrt(D+t))) = 0"

# Smallest-prime-factor tables above this limit are not worth their memory;
# factorization then falls back to trial division.
_SPF_CAP = 1 << 26


# ----------------------------------------------------------------------
# report data types
# ----------------------------------------------------------------------

@dataclass(frozen=True)
class DiscriminantSets:
    """Counts of the progression sets at one checkpoint."""

    x: int
    family: CongruenceFamily
    S: int
    S_plus: int
    L: int | None = None
    L_t: int | None = None
    L_cap_Lt: int | None = None

    def __post_init__(self):
        if self.S_plus > self.S or self.S_plus < 0:
            raise AssertionError(f"set counts inconsistent at x={self.x}")
        if self.L is not None and self.L_t is not None:
            low = min(self.L, self.L_t)
            if not (0 <= (self.L_cap_Lt or 0) <= low <= self.S_plus):
                raise AssertionError(f"set chain violated at x={self.x}")


@dataclass(frozen=True)
class Checkpoint:
    x: int
    sets: DiscriminantSets
    ratio_L: float | None = None
    ratio_Lt: float | None = None
    ratio_intersection: float | None = None
    indivisible_ratio: float | None = None  # over S_plus / S_minus
    nh_average: float | None = None
    lemma_lhs: float | None = None  # 2 * #{r3 = 0} / |S+|
    lemma_rhs: float | None = None  # 3 - running average of 3^r3
    no_data: bool = False


@dataclass(frozen=True)
class DensityReport:
    """Checkpointed counts and ratios, with the target constant attached."""

    experiment: str
    family: CongruenceFamily
    denominator: str  # "S", "S_plus", or "S_minus"
    target_bound: float
    target_bounds: dict
    checkpoints: list

    def __post_init__(self):
        xs = [c.x for c in self.checkpoints]
        if xs != sorted(set(xs)):
            raise AssertionError("checkpoints must be strictly increasing")
        for c in self.checkpoints:
            for r in (c.ratio_L, c.ratio_Lt, c.ratio_intersection, c.indivisible_ratio):
                if r is not None and not 0.0 <= r <= 1.0:
                    raise AssertionError(f"ratio {r} outside [0, 1] at x={c.x}")
            if c.nh_average is not None and c.nh_average < 1.0:
                raise AssertionError(f"average of 3^r3 below 1 at x={c.x}")


@dataclass(frozen=True)
class Lambda3Certificate:
    """Witness that 3 is inert and 3 does not divide h for D and D + t.

    All four constraint fields are recomputed from scratch at emission time;
    the verdict then follows from Iwasawa's criterion and is never computed
    directly.
    """

    D: Discriminant
    t: int
    legendre_D: int
    legendre_Dt: int
    h_D_mod3: int
    h_Dt_mod3: int
    verdict: str = LAMBDA3_VERDICT


# ----------------------------------------------------------------------
# bulk class-group computation
# ----------------------------------------------------------------------

_worker_spf = None


def _pool_init(limit):
    global _worker_spf
    _worker_spf = smallest_prime_factors(limit) if limit else None


def _pool_chunk(chunk):
    spf = _worker_spf
    return [(d,) + _core_info(d, spf) for d in chunk]


def _spf_limit(ds):
    limit = 4
    for d in ds:
        limit = max(limit, d // 4 + 2 if d > 0 else -d // 3 + 2)
    return limit if limit <= _SPF_CAP else 0


def _trusted(d: int) -> Discriminant:
    # Only called on values that already passed the fundamental-discriminant
    # filters; bypasses re-validation.
    return Discriminant(d, "positive" if d > 0 else "negative", "odd" if d % 4 == 1 else "even")


def compute_class_infos(ds, *, jobs: int = 1, cache: dict | None = None,
                        progress: bool = False) -> dict[int, ClassGroupInfo]:
    """Class data for every fundamental discriminant in ds, cache-aware.

    Results are keyed by discriminant; the cache mapping (if given) is
    extended in place. Output is independent of ``jobs``.
    """
    wanted = sorted(set(ds))
    if cache is None:
        cache = {}
    todo = [d for d in wanted if d not in cache]
    if todo:
        rows = []
        if jobs <= 1:
            limit = _spf_limit(todo)
            spf = smallest_prime_factors(limit) if limit else None
            for i, d in enumerate(todo, 1):
                rows.append((d,) + _core_info(d, spf))
                if progress and i % 2000 == 0:
                    print(f"class groups: {i}/{len(todo)}", file=sys.stderr)
        else:
            limit = _spf_limit(todo)
            size = max(1, -(-len(todo) // (jobs * 8)))
            chunks = [todo[i : i + size] for i in range(0, len(todo), size)]
            with ProcessPoolExecutor(max_workers=jobs, initializer=_pool_init,
                                     initargs=(limit,)) as pool:
                done = 0
                for part in pool.map(_pool_chunk, chunks):
                    rows.extend(part)
                    done += len(part)
                    if progress:
                        print(f"class groups: {done}/{len(todo)}", file=sys.stderr)
        for d, h_plus, h, un, r3 in rows:
            cache[d] = ClassGroupInfo(_trusted(d), h_plus, h, un, 3**r3, r3)
    return {d: cache[d] for d in wanted}


# ----------------------------------------------------------------------
# progression scans
# ----------------------------------------------------------------------

def _require_family(family, min_level=LEVEL_NH):
    if not isinstance(family, CongruenceFamily):
        raise ValueError(f"expected a validated CongruenceFamily, got {family!r}")
    order = (LEVEL_NH, LEVEL_THEOREM, LEVEL_LAMBDA)
    if order.index(family.level) < order.index(min_level):
        raise ValueError(f"family level {family.level!r} is below required {min_level!r}")
    return family


def _checkpoints(checkpoints, x):
    if x < 1:
        raise ValueError("need x >= 1")
    if checkpoints is None:
        cps = [c for c in (10**3, 10**4, 10**5, 10**6) if c < x]
        cps.append(x)
        return cps
    cps = list(checkpoints)
    if cps != sorted(set(cps)) or not cps or cps[0] < 1 or cps[-1] > x:
        raise ValueError("checkpoints must be strictly increasing, within [1, x]")
    return cps


def _is_fundamental_pos(d, sf):
    # sf[i] is the squarefree flag of i + 1.
    r = d & 3
    if r == 1:
        return d != 1 and bool(sf[d - 1])
    if r == 0:
        q = d >> 2
        return q % 4 in (2, 3) and bool(sf[q - 1])
    return False


def _is_fundamental_neg(d, sf):
    if d % 4 == 1:
        return bool(sf[-d - 1])
    if d % 4 == 0:
        q = d // 4  # negative; q % 4 is reduced into [0, 4)
        return q % 4 in (2, 3) and bool(sf[-q - 1])
    return False


def _count_progression(m, N, c):
    # #{D : 1 <= D <= c, D = m (mod N)} with m already in [1, N]
    return (c - m) // N + 1 if c >= m else 0


def enumerate_s_plus(x: int, family: CongruenceFamily) -> Iterator[Discriminant]:
    """Fundamental discriminants 0 < D < x with D = m (mod N), ascending."""
    _require_family(family)
    if x <= family.m:
        return
    sf = sieve_squarefree(1, x - 1).squarefree_flags
    for d in range(family.m, x, family.N):
        if _is_fundamental_pos(d, sf):
            yield _trusted(d)


def _real_family_members(x, family):
    """Fundamental progression members 0 < D <= x, as a sorted int list."""
    if x < family.m:
        return []
    sf = sieve_squarefree(1, x).squarefree_flags
    return [d for d in range(family.m, x + 1, family.N) if _is_fundamental_pos(d, sf)]


# ----------------------------------------------------------------------
# experiments
# ----------------------------------------------------------------------

def _prefix(values):
    out = [0]
    acc = 0
    for v in values:
        acc += v
        out.append(acc)
    return out


def nh_average(x: int, family: CongruenceFamily, checkpoints=None, *,
               jobs: int = 1, cache: dict | None = None, progress: bool = False) -> DensityReport:
    """Running average of 3^r3 over S+(X, m, N); the limit constant is 4/3."""
    _require_family(family)
    cps = _checkpoints(checkpoints, x)
    fund = _real_family_members(x, family)
    infos = compute_class_infos(fund, jobs=jobs, cache=cache, progress=progress)
    tor = _prefix([infos[d].three_torsion_count for d in fund])
    points = []
    for c in cps:
        k = bisect_left(fund, c)  # S+ counts strictly below the checkpoint
        s = _count_progression(family.m, family.N, c)
        sets = DiscriminantSets(c, family, s, k)
        if k == 0:
            points.append(Checkpoint(x=c, sets=sets, no_data=True))
        else:
            points.append(Checkpoint(x=c, sets=sets, nh_average=tor[k] / k))
    return DensityReport("nh-average", family, "S_plus", TARGET_NH_AVERAGE,
                         {"nh_average": TARGET_NH_AVERAGE}, points)


def indivisibility_density(x: int, family: CongruenceFamily, checkpoints=None, *,
                           jobs: int = 1, cache: dict | None = None,
                           progress: bool = False) -> DensityReport:
    """Fraction of S+ with h(D) not divisible by 3; liminf bound 5/6.

    Also reports both sides of the counting inequality
    2 * #{r3 = 0} / |S+| >= 3 - avg(3^r3), which is asserted exactly on the
    integer counts (pointwise 3^r >= 3 - 2*[r = 0]).
    """
    _require_family(family)
    cps = _checkpoints(checkpoints, x)
    fund = _real_family_members(x, family)
    infos = compute_class_infos(fund, jobs=jobs, cache=cache, progress=progress)
    tor = _prefix([infos[d].three_torsion_count for d in fund])
    zero = _prefix([1 if infos[d].r3 == 0 else 0 for d in fund])
    points = []
    for c in cps:
        k = bisect_left(fund, c)
        s = _count_progression(family.m, family.N, c)
        if k == 0:
            points.append(Checkpoint(x=c, sets=DiscriminantSets(c, family, s, k), no_data=True))
            continue
        if not 2 * zero[k] >= 3 * k - tor[k]:  # pragma: no cover
            raise AssertionError(f"counting inequality violated at x={c}")
        sets = DiscriminantSets(c, family, s, k, L=zero[k])
        points.append(Checkpoint(
            x=c, sets=sets,
            indivisible_ratio=zero[k] / k,
            ratio_L=zero[k] / k,
            nh_average=tor[k] / k,
            lemma_lhs=2 * zero[k] / k,
            lemma_rhs=3 - tor[k] / k,
        ))
    return DensityReport("indivisibility", family, "S_plus", TARGET_INDIVISIBLE,
                         {"indivisible_ratio": TARGET_INDIVISIBLE}, points)


def _pair_data(x, family, jobs, cache, progress):
    m, N, t = family.m, family.N, family.t
    sf = sieve_squarefree(1, x + t).squarefree_flags
    prog = list(range(m, x + 1, N))
    # Progression members are 1 mod 4 at theorem level, so squarefree members
    # (other than 1) are fundamental, and so are their t-shifts.
    in_l_base = [d != 1 and bool(sf[d - 1]) for d in prog]
    in_lt_base = [bool(sf[d + t - 1]) for d in prog]
    need = sorted({d for d, f in zip(prog, in_l_base) if f}
                  | {d + t for d, f in zip(prog, in_lt_base) if f})
    infos = compute_class_infos(need, jobs=jobs, cache=cache, progress=progress)
    in_l = [f and infos[d].h % 3 != 0 for d, f in zip(prog, in_l_base)]
    in_lt = [f and infos[d + t].h % 3 != 0 for d, f in zip(prog, in_lt_base)]
    fund = [_is_fundamental_pos(d, sf) for d in prog]
    return prog, infos, in_l, in_lt, fund


def _pair_checkpoints(x, family, cps, prog, in_l, in_lt, fund):
    pre_l = _prefix([int(v) for v in in_l])
    pre_lt = _prefix([int(v) for v in in_lt])
    pre_cap = _prefix([int(a and b) for a, b in zip(in_l, in_lt)])
    pre_cup = _prefix([int(a or b) for a, b in zip(in_l, in_lt)])
    pre_fund = _prefix([int(v) for v in fund])
    points = []
    for c in cps:
        k = bisect_right(prog, c)  # the L-sets count D <= checkpoint
        s = _count_progression(family.m, family.N, c)
        if s != k:  # pragma: no cover
            raise AssertionError("progression count mismatch")
        if s == 0:
            sets = DiscriminantSets(c, family, 0, 0, L=0, L_t=0, L_cap_Lt=0)
            points.append(Checkpoint(x=c, sets=sets, no_data=True))
            continue
        l, lt, cap, cup = pre_l[k], pre_lt[k], pre_cap[k], pre_cup[k]
        if cap != l + lt - cup:  # pragma: no cover
            raise AssertionError(f"inclusion-exclusion violated at x={c}")
        sets = DiscriminantSets(c, family, s, pre_fund[k], L=l, L_t=lt, L_cap_Lt=cap)
        points.append(Checkpoint(x=c, sets=sets, ratio_L=l / s, ratio_Lt=lt / s,
                                 ratio_intersection=cap / s))
    return points


def pair_experiment(x: int, family: CongruenceFamily, checkpoints=None, *,
                    jobs: int = 1, cache: dict | None = None,
                    progress: bool = False) -> DensityReport:
    """Densities of L, L_t and L with L_t shifted, inside the progression.

    L collects D <= X in the progression that are squarefree with
    3 not dividing h(D); L_t asks the same of D + t. Ratios use |S(X)|;
    the liminf bounds are 5/pi^2 for each set and (10 - pi^2)/pi^2 for the
    intersection, and the inclusion-exclusion identity is asserted exactly
    at every checkpoint.
    """
    _require_family(family, LEVEL_THEOREM)
    cps = _checkpoints(checkpoints, x)
    prog, _, in_l, in_lt, fund = _pair_data(x, family, jobs, cache, progress)
    points = _pair_checkpoints(x, family, cps, prog, in_l, in_lt, fund)
    return DensityReport("pairs", family, "S", TARGET_PAIR_INTERSECTION,
                         {"ratio_L": TARGET_SET_DENSITY,
                          "ratio_Lt": TARGET_SET_DENSITY,
                          "ratio_intersection": TARGET_PAIR_INTERSECTION}, points)


def lambda_survey(x: int, family: CongruenceFamily, checkpoints=None, *,
                  jobs: int = 1, cache: dict | None = None,
                  progress: bool = False) -> tuple[list[Lambda3Certificate], DensityReport]:
    """Certificates of vanishing lambda_3 for the pairs in L(X) with L_t(X).

    For each member D of the intersection, rechecks from scratch that D and
    D + t are squarefree, that the Legendre symbols of D and D + t mod 3 both
    equal -1 (forced by the congruences; a failure signals a bug), and that 3
    divides neither class number. Each certificate then witnesses
    lambda_3 = 0 for both fields by Iwasawa's criterion.
    """
    _require_family(family, LEVEL_LAMBDA)
    cps = _checkpoints(checkpoints, x)
    t = family.t
    prog, infos, in_l, in_lt, fund = _pair_data(x, family, jobs, cache, progress)
    points = _pair_checkpoints(x, family, cps, prog, in_l, in_lt, fund)
    certs = []
    for d, a, b in zip(prog, in_l, in_lt):
        if not (a and b):
            continue
        if mobius(d) == 0 or mobius(d + t) == 0:  # pragma: no cover
            raise RuntimeError(f"membership recheck failed for D={d}")
        leg_d = kronecker(d, 3)
        leg_dt = kronecker(d + t, 3)
        if leg_d != -1 or leg_dt != -1:
            raise RuntimeError(f"Legendre symbol of certified D={d} is not -1; "
                               "family congruences are broken")
        h_d = infos[d].h % 3
        h_dt = infos[d + t].h % 3
        if h_d == 0 or h_dt == 0:  # pragma: no cover
            raise RuntimeError(f"class number recheck failed for D={d}")
        certs.append(Lambda3Certificate(infos[d].D, t, leg_d, leg_dt, h_d, h_dt))
    report = DensityReport("lambda", family, "S", TARGET_PAIR_INTERSECTION,
                           {"ratio_L": TARGET_SET_DENSITY,
                            "ratio_Lt": TARGET_SET_DENSITY,
                            "ratio_intersection": TARGET_PAIR_INTERSECTION}, points)
    return certs, report


def imaginary_density(x: int, family: CongruenceFamily, checkpoints=None, *,
                      jobs: int = 1, cache: dict | None = None,
                      progress: bool = False) -> DensityReport:
    """Fraction of S-(X, m, N) with 3 not dividing h; liminf bound 1/2.

    S- collects the fundamental discriminants -X < D < 0 in the progression;
    h is the class number of the imaginary field of discriminant D.
    """
    _require_family(family)
    cps = _checkpoints(checkpoints, x)
    m, N = family.m, family.N
    lo = -x + 1
    first = lo + (m - lo) % N
    prog = list(range(first, 0, N))  # ascending, all negative
    sf = sieve_squarefree(1, x).squarefree_flags if x > 1 else None
    fund = [d for d in prog if _is_fundamental_neg(d, sf)] if prog else []
    infos = compute_class_infos(fund, jobs=jobs, cache=cache, progress=progress)
    # Work in |D| ascending order so prefix sums align with growing X.
    fund_abs = sorted(-d for d in fund)
    indiv = _prefix([1 if infos[-a].h % 3 != 0 else 0 for a in fund_abs])
    points = []
    for c in cps:
        k = bisect_left(fund_abs, c)  # |D| < c
        s = _count_neg_progression(m, N, c)
        sets = DiscriminantSets(c, family, s, k, L=indiv[k] if k else None)
        if k == 0:
            points.append(Checkpoint(x=c, sets=sets, no_data=True))
        else:
            points.append(Checkpoint(x=c, sets=sets, indivisible_ratio=indiv[k] / k,
                                     ratio_L=indiv[k] / k))
    return DensityReport("imaginary", family, "S_minus", TARGET_IMAGINARY_INDIVISIBLE,
                         {"indivisible_ratio": TARGET_IMAGINARY_INDIVISIBLE}, points)


def _count_neg_progression(m, N, c):
    # #{D : -c < D < 0, D = m (mod N)}
    lo = -c + 1
    if lo >= 0:
        return 0
    first = lo + (m - lo) % N
    return len(range(first, 0, N))
