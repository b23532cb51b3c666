"""Exact elementary number theory: Moebius function, squarefree sieving,
Kronecker symbols, fundamental discriminants, and counts of squarefree
integers in arithmetic progressions compared against their main term.

Everything here is integer-exact; floats appear only in main-term and
relative-error fields of :class:`SquarefreeAPCount`.
"""

from __future__ import annotations

import math
from bisect import bisect_right
from dataclasses import dataclass

import numpy as np

__all__ = [
    "Discriminant",
    "NotFundamental",
    "SieveWindow",
    "SquarefreeAPCount",
    "WindowTooLarge",
    "classify_discriminant",
    "count_squarefree_in_ap",
    "is_fundamental_discriminant",
    "is_squarefree",
    "kronecker",
    "mobius",
    "primes_upto",
    "sieve_squarefree",
    "smallest_prime_factors",
]

# Sieve windows larger than this many cells are refused (see sieve_squarefree).
DEFAULT_MAX_CELLS = 1 << 27


# ----------------------------------------------------------------------
# primes and factorization helpers
# ----------------------------------------------------------------------

_primes: list[int] = []
_prime_limit = 0


def primes_upto(n: int) -> list[int]:
    """All primes <= n, ascending. The sieve result is cached and grown on demand."""
    global _primes, _prime_limit
    if n > _prime_limit:
        limit = max(n, 2 * _prime_limit, 1 << 10)
        flags = np.ones(limit + 1, dtype=bool)
        flags[:2] = False
        for p in range(2, math.isqrt(limit) + 1):
            if flags[p]:
                flags[p * p :: p] = False
        _primes = np.flatnonzero(flags).tolist()
        _prime_limit = limit
    return _primes[: bisect_right(_primes, n)]


def smallest_prime_factors(limit: int) -> list[int]:
    """spf[n] = smallest prime factor of n for 2 <= n <= limit (spf[0] = spf[1] = 0).

    Used by callers that factor many small integers in bulk.
    """
    spf = np.zeros(limit + 1, dtype=np.int64)
    for p in range(2, math.isqrt(limit) + 1):
        if spf[p] == 0:
            spf[p * p :: p][spf[p * p :: p] == 0] = p
    rest = np.flatnonzero(spf == 0)
    spf[rest] = rest  # primes (and 0, 1 which we zero out below)
    spf[:2] = 0
    return spf.tolist()


def _factorize(n: int, spf: list[int] | None = None) -> list[tuple[int, int]]:
    """Prime factorization of n >= 1 as (p, e) pairs, ascending in p.

    Trial division by sieved primes up to sqrt(n); adequate for desk-scale
    n <= 10**9. A smallest-prime-factor table accelerates the bulk paths.
    """
    out = []
    if spf is not None and n < len(spf):
        while n > 1:
            p = spf[n]
            e = 0
            while n % p == 0:
                n //= p
                e += 1
            out.append((p, e))
        return out
    for p in primes_upto(math.isqrt(n)):
        if p * p > n:
            break
        if n % p == 0:
            e = 0
            while n % p == 0:
                n //= p
                e += 1
            out.append((p, e))
    if n > 1:
        out.append((n, 1))
    return out


# ----------------------------------------------------------------------
# Moebius function and squarefree tests
# ----------------------------------------------------------------------

def mobius(n: int) -> int:
    """Moebius function of n >= 1 via complete factorization."""
    if n < 1:
        raise ValueError("mobius is defined on positive integers")
    if n == 1:
        return 1
    result = 1
    for p in primes_upto(math.isqrt(n)):
        if p * p > n:
            break
        if n % p == 0:
            n //= p
            if n % p == 0:
                return 0
            result = -result
    if n > 1:
        result = -result
    return result


def is_squarefree(n: int) -> bool:
    """True iff no prime square divides n (n >= 1).

    Deliberately scans square divisors directly rather than reusing
    mobius(), so the two routes can be checked against each other.
    """
    if n < 1:
        raise ValueError("is_squarefree is defined on positive integers")
    if n & 3 == 0:
        return False
    for p in primes_upto(math.isqrt(n)):
        pp = p * p
        if pp > n:
            break
        if n % pp == 0:
            return False
    return True


class WindowTooLarge(ValueError):
    """Raised when a sieve window would exceed the configured memory bound."""


@dataclass(frozen=True, eq=False)
class SieveWindow:
    """Squarefree flags for the inclusive integer window [lo, hi].

    ``squarefree_flags[i]`` is set iff ``lo + i`` is squarefree.
    """

    lo: int
    hi: int
    squarefree_flags: np.ndarray

    def flag(self, n: int) -> bool:
        if not self.lo <= n <= self.hi:
            raise IndexError(f"{n} outside window [{self.lo}, {self.hi}]")
        return bool(self.squarefree_flags[n - self.lo])

    def count(self) -> int:
        return int(self.squarefree_flags.sum())


def sieve_squarefree(lo: int, hi: int, max_cells: int = DEFAULT_MAX_CELLS) -> SieveWindow:
    """Squarefree flags on [lo, hi] by striking multiples of p**2, p <= sqrt(hi).

    Cost is quasi-linear in the window length plus a prime sieve up to
    sqrt(hi); memory is one byte per window cell.
    """
    if not 1 <= lo <= hi:
        raise ValueError("need 1 <= lo <= hi")
    cells = hi - lo + 1
    if cells > max_cells:
        raise WindowTooLarge(f"window of {cells} cells exceeds bound {max_cells}")
    flags = np.ones(cells, dtype=bool)
    for p in primes_upto(math.isqrt(hi)):
        q = p * p
        start = ((lo + q - 1) // q) * q
        if start <= hi:
            flags[start - lo :: q] = False
    return SieveWindow(lo, hi, flags)


# ----------------------------------------------------------------------
# Kronecker symbol
# ----------------------------------------------------------------------

def kronecker(a: int, n: int) -> int:
    """Kronecker symbol (a / n), fully general: n may be negative, even, or zero.

    Restricted to odd prime n it is the Legendre symbol.
    """
    if n == 0:
        return 1 if a in (1, -1) else 0
    result = 1
    if n < 0:
        n = -n
        if a < 0:
            result = -1
    if n & 1 == 0:
        if a & 1 == 0:
            return 0
        twos = (n & -n).bit_length() - 1
        n >>= twos
        if twos & 1 and a % 8 in (3, 5):
            result = -result
    # n is now odd and positive: Jacobi with quadratic reciprocity.
    a %= n
    while a:
        while a & 1 == 0:
            a >>= 1
            if n % 8 in (3, 5):
                result = -result
        a, n = n, a
        if a & 3 == 3 and n & 3 == 3:
            result = -result
        a %= n
    return result if n == 1 else 0


# ----------------------------------------------------------------------
# fundamental discriminants
# ----------------------------------------------------------------------

REASON_NOT_0_OR_1_MOD_4 = "not-0-or-1-mod-4"
REASON_NOT_SQUAREFREE_CORE = "not-squarefree-core"
REASON_PERFECT_SQUARE = "perfect-square"
REASON_IS_ONE = "is-one"


class NotFundamental(ValueError):
    """Rejection of a non-fundamental discriminant, carrying a reason code."""

    def __init__(self, d: int, reason: str):
        super().__init__(f"{d} is not a fundamental discriminant ({reason})")
        self.d = d
        self.reason = reason


@dataclass(frozen=True)
class Discriminant:
    """A validated fundamental discriminant.

    ``parity_class`` is "odd" for squarefree values = 1 mod 4 and "even" for
    values 4*m' with m' squarefree and = 2, 3 mod 4. Construct through
    :func:`classify_discriminant`; direct construction skips validation.
    """

    value: int
    sign: str  # "positive" | "negative"
    parity_class: str  # "odd" | "even"


def classify_discriminant(d: int) -> Discriminant:
    """Validate d as a fundamental discriminant or raise :class:`NotFundamental`.

    d = 1 is rejected (the unit field is not a quadratic field) and positive
    perfect squares are rejected (no indefinite form theory exists for them).
    """
    if d == 1:
        raise NotFundamental(d, REASON_IS_ONE)
    if d > 0 and math.isqrt(d) ** 2 == d:
        raise NotFundamental(d, REASON_PERFECT_SQUARE)
    r = d % 4
    if r == 1:
        if not is_squarefree(abs(d)):
            raise NotFundamental(d, REASON_NOT_SQUAREFREE_CORE)
        parity = "odd"
    elif r == 0:
        q = d // 4
        if q == 0 or q % 4 not in (2, 3) or not is_squarefree(abs(q)):
            raise NotFundamental(d, REASON_NOT_SQUAREFREE_CORE)
        parity = "even"
    else:
        raise NotFundamental(d, REASON_NOT_0_OR_1_MOD_4)
    return Discriminant(d, "positive" if d > 0 else "negative", parity)


def is_fundamental_discriminant(d: int) -> bool:
    try:
        classify_discriminant(d)
    except NotFundamental:
        return False
    return True


# ----------------------------------------------------------------------
# squarefree integers in arithmetic progressions
# ----------------------------------------------------------------------

@dataclass(frozen=True)
class SquarefreeAPCount:
    """Count of squarefree m <= x with m = l (mod k), against its main term.

    ``main_term`` is (6 / (k pi^2)) * prod_{p | k} (1 - p^-2)^-1 * x; the
    error term carries no explicit constant, so only the empirical
    ``relative_error`` |count - main_term| / main_term is reported.
    """

    x: int
    k: int
    l: int
    count: int
    main_term: float
    relative_error: float


def count_squarefree_in_ap(x: int, k: int, l: int, max_cells: int = DEFAULT_MAX_CELLS) -> SquarefreeAPCount:
    """Exact count of squarefree integers m <= x, m = l (mod k), gcd(k, l) = 1."""
    if x < 1:
        raise ValueError("need x >= 1")
    if k < 1:
        raise ValueError("need k >= 1")
    l = (l - 1) % k + 1  # normalize the residue into [1, k]
    if math.gcd(k, l) != 1:
        raise ValueError(f"gcd(k, l) = {math.gcd(k, l)} != 1 violates the coprimality hypothesis")
    window = sieve_squarefree(1, x, max_cells)
    count = int(window.squarefree_flags[l - 1 :: k].sum())
    prod = 1.0
    for p, _ in _factorize(k):
        prod *= 1.0 / (1.0 - 1.0 / (p * p))
    main = 6.0 / (k * math.pi**2) * prod * x
    rel = abs(count - main) / main
    return SquarefreeAPCount(x, k, l, count, main, rel)
