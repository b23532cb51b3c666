"""Class groups of quadratic fields through binary quadratic forms.

All arithmetic is exact. Conventions:

* definite forms (D < 0): a > 0; reduced means |b| <= a <= c with b >= 0
  whenever |b| = a or a = c; each class has exactly one reduced form.
* indefinite forms (D > 0, nonsquare): reduced means 0 < b < sqrt(D) and
  sqrt(D) - b < 2|a| < sqrt(D) + b, decided exactly by comparing squares;
  the reduction step `rho` permutes the reduced forms into cycles, and the
  number of cycles is the narrow class number h+.
* class representatives are canonicalized to the lexicographically least
  (a, b, c) of their cycle, so equality of classes is equality of tuples.

The narrow class group and the ideal class group have the same odd part
(their index is 1 or 2), so 3-torsion counts computed on cycles are the
3-torsion counts of the ideal class group; the wide class number h is
recovered from h+ and the norm of the fundamental unit.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple

from .arith import Discriminant, _factorize, classify_discriminant, kronecker, smallest_prime_factors

__all__ = [
    "ClassGroupInfo",
    "ClassRep",
    "Form",
    "UNIT_NORM_NOT_APPLICABLE",
    "analytic_h_imaginary",
    "class_group_info",
    "compose",
    "enumerate_classes",
    "is_reduced",
    "principal_class",
    "reduce_form",
    "rho",
    "three_torsion_count",
    "unit_norm",
]

UNIT_NORM_NOT_APPLICABLE = 0


class Form(NamedTuple):
    """Integer binary quadratic form a x^2 + b x y + c y^2 with cached discriminant."""

    a: int
    b: int
    c: int
    D: int

    @classmethod
    def make(cls, a: int, b: int, c: int) -> "Form":
        D = b * b - 4 * a * c
        if a == 0:
            raise ValueError("form must have a != 0")
        if D >= 0 and math.isqrt(abs(D)) ** 2 == D:
            raise ValueError(f"discriminant {D} is a perfect square; no form theory here")
        if D < 0 and a < 0:
            raise ValueError("negative-discriminant forms must be positive definite (a > 0)")
        return cls(a, b, c, D)


@dataclass(frozen=True, eq=False)
class ClassRep:
    """A form class, canonicalized to the least (a, b, c) of its rho-cycle.

    Two ClassReps are equal iff their canonical forms are equal; for D < 0
    every cycle is a singleton and cycle_length is 1.
    """

    canonical_form: Form
    cycle_length: int

    def __eq__(self, other):
        return isinstance(other, ClassRep) and self.canonical_form == other.canonical_form

    def __hash__(self):
        return hash(self.canonical_form)

    def __repr__(self):
        a, b, c, D = self.canonical_form
        return f"ClassRep(({a}, {b}, {c}), D={D}, cycle={self.cycle_length})"


# ----------------------------------------------------------------------
# reduction, on raw (a, b, c) triples
# ----------------------------------------------------------------------

def _is_reduced_neg(a, b, c):
    ab = -b if b < 0 else b
    if ab > a or a > c:
        return False
    if b < 0 and (ab == a or a == c):
        return False
    return True


def _is_reduced_pos(a, b, c, D):
    # 0 < b < sqrt(D), sqrt(D) - b < 2|a| < sqrt(D) + b, via integer squares.
    if b <= 0 or b * b >= D:
        return False
    t = 2 * a if a > 0 else -2 * a
    u = t + b
    if u * u <= D:  # need sqrt(D) < 2|a| + b
        return False
    v = t - b
    if v >= 0 and v * v >= D:  # need 2|a| - b < sqrt(D)
        return False
    return True


def _reduce_neg(a, b, c):
    # Classical definite reduction: translate b into (-a, a], swap when a > c,
    # resolving boundary signs via the half-open translation range.
    while True:
        if not -a < b <= a:
            r = (a - b) // (2 * a)
            c += (a * r + b) * r
            b += 2 * a * r
        if a > c or (a == c and b < 0):
            a, b, c = c, -b, a
        else:
            return a, b, c


def _rho(a, b, c, D, fl):
    # One reduction step: (a, b, c) -> (c, r, (r^2 - D) / (4c)) where r is the
    # unique integer with r = -b (mod 2|c|) and sqrt(D) - 2|c| < r < sqrt(D).
    # fl = isqrt(D); the window is exact because sqrt(D) is irrational.
    s = 2 * c if c > 0 else -2 * c
    r = fl - (fl + b) % s
    return c, r, (r * r - D) // (4 * c)


def _reduce_pos(a, b, c, D, fl):
    # |c| shrinks by roughly sqrt(D) per step until it is below sqrt(D),
    # after which at most a few more steps land in the reduced set.
    while not _is_reduced_pos(a, b, c, D):
        a, b, c = _rho(a, b, c, D, fl)
    return a, b, c


def _cycle_of(form, D, fl):
    cyc = [form]
    f = _rho(*form, D, fl)
    while f != form:
        cyc.append(f)
        f = _rho(*f, D, fl)
    return cyc


# ----------------------------------------------------------------------
# public single-form operations
# ----------------------------------------------------------------------

def _coerce_disc(d) -> Discriminant:
    if isinstance(d, Discriminant):
        return d
    return classify_discriminant(d)


def is_reduced(f: Form) -> bool:
    """Reduction test per the conventions in the module docstring."""
    if f.D < 0:
        return _is_reduced_neg(f.a, f.b, f.c)
    return _is_reduced_pos(f.a, f.b, f.c, f.D)


def rho(f: Form) -> Form:
    """One indefinite reduction step; a bijection on the reduced forms of D."""
    if f.D < 0:
        raise ValueError("rho is defined for positive (indefinite) discriminants only")
    fl = math.isqrt(f.D)
    a, b, c = _rho(f.a, f.b, f.c, f.D, fl)
    return Form(a, b, c, f.D)


def reduce_form(f: Form) -> ClassRep:
    """Reduce f to its class representative.

    D < 0: the unique reduced form (a singleton cycle). D > 0: iterate rho
    to a reduced form, traverse its cycle, and canonicalize to the least
    (a, b, c) of the cycle.
    """
    if f.D < 0:
        a, b, c = _reduce_neg(f.a, f.b, f.c)
        return ClassRep(Form(a, b, c, f.D), 1)
    fl = math.isqrt(f.D)
    start = _reduce_pos(f.a, f.b, f.c, f.D, fl)
    cyc = _cycle_of(start, f.D, fl)
    a, b, c = min(cyc)
    return ClassRep(Form(a, b, c, f.D), len(cyc))


# ----------------------------------------------------------------------
# class enumeration
# ----------------------------------------------------------------------

def _divisors(n, spf):
    divs = [1]
    for p, e in _factorize(n, spf):
        grown = list(divs)
        pk = 1
        for _ in range(e):
            pk *= p
            grown.extend(d * pk for d in divs)
        divs = grown
    return divs


def _reduced_forms_neg(d, spf=None):
    # Scan 0 <= b, 3b^2 <= |d|, b = d (mod 2); factor (b^2 - d)/4 = a*c.
    out = []
    b = d & 1
    while 3 * b * b <= -d:
        n = (b * b - d) >> 2
        for a in _divisors(n, spf):
            if a < b or (b == 0 and a < 1) or a * a > n:
                continue
            c = n // a
            out.append((a, b, c))
            if 0 < b < a < c:
                out.append((a, -b, c))
        b += 2
    return out


def _reduced_forms_pos(d, fl, spf=None):
    # Scan 0 < b <= isqrt(d), b = d (mod 2); each divisor pair of (d - b^2)/4
    # inside the window yields a positive-a form and its negative-a mirror.
    out = []
    for b in range(2 - (d & 1), fl + 1, 2):
        n = (d - b * b) >> 2
        if n == 0:
            continue
        lo2 = fl - b + 1  # window for 2|a|: lo2 <= 2|a| <= hi2, exact
        hi2 = fl + b
        for v in _divisors(n, spf):
            vv = 2 * v
            if lo2 <= vv <= hi2:
                w = n // v
                out.append((v, b, -w))
                out.append((-v, b, w))
    return out


def _classes_pos(d, fl, spf=None):
    """All rho-cycles of reduced forms of d > 0: list of (canonical, length)."""
    forms = _reduced_forms_pos(d, fl, spf)
    seen = set()
    classes = []
    for f in forms:
        if f in seen:
            continue
        cyc = _cycle_of(f, d, fl)
        seen.update(cyc)
        classes.append((min(cyc), len(cyc)))
    classes.sort()
    return classes


def enumerate_classes(D) -> list[ClassRep]:
    """All form classes of a fundamental discriminant, sorted by canonical form.

    The list length is the class number h for D < 0 and the narrow class
    number h+ for D > 0.
    """
    disc = _coerce_disc(D)
    d = disc.value
    if d < 0:
        forms = sorted(_reduced_forms_neg(d))
        return [ClassRep(Form(a, b, c, d), 1) for (a, b, c) in forms]
    fl = math.isqrt(d)
    return [ClassRep(Form(*f, d), n) for f, n in _classes_pos(d, fl)]


def principal_class(D) -> ClassRep:
    """The identity class: the class of (1, b0, (b0^2 - D)/4), b0 = D mod 2."""
    disc = _coerce_disc(D)
    d = disc.value
    b0 = d & 1
    return reduce_form(Form(1, b0, (b0 * b0 - d) >> 2, d))


# ----------------------------------------------------------------------
# composition
# ----------------------------------------------------------------------

def _xgcd(x, y):
    """(g, u, v) with u*x + v*y = g = gcd(x, y) >= 0."""
    old_r, r = x, y
    old_s, s = 1, 0
    old_t, t = 0, 1
    while r:
        q = old_r // r
        old_r, r = r, old_r - q * r
        old_s, s = s, old_s - q * s
        old_t, t = t, old_t - q * t
    if old_r < 0:
        return -old_r, -old_s, -old_t
    return old_r, old_s, old_t


def _compose_raw(f1, f2):
    # Dirichlet composition. With e = gcd(a1, a2, (b1 + b2)/2) the composite
    # has first coefficient a1*a2/e^2; the middle coefficient solves the
    # standard simultaneous congruences. Exactness of the final division is
    # invariant under the choice of residue representative r.
    a1, b1, c1 = f1
    a2, b2, c2 = f2
    if abs(a1) > abs(a2):
        a1, b1, c1, a2, b2, c2 = a2, b2, c2, a1, b1, c1
    s = (b1 + b2) >> 1
    n = b2 - s
    if a2 % a1 == 0:
        y1 = 0
        d = a1 if a1 > 0 else -a1
    else:
        d, u, _ = _xgcd(a2, a1)
        y1 = u
    if s % d == 0:
        y2 = -1
        x2 = 0
        d1 = d
    else:
        d1, u, v = _xgcd(s, d)
        x2 = u
        y2 = -v
    v1 = a1 // d1
    v2 = a2 // d1
    r = (y1 * y2 * n - x2 * c2) % v1
    b3 = b2 + 2 * v2 * r
    a3 = v1 * v2
    num = c2 * d1 + r * (b2 + v2 * r)
    c3, rem = divmod(num, v1)
    if rem:  # pragma: no cover
        raise AssertionError("composition produced a non-integral form")
    return a3, b3, c3


def compose(x: ClassRep, y: ClassRep) -> ClassRep:
    """Gauss composition of form classes (exact, arbitrary precision)."""
    fx, fy = x.canonical_form, y.canonical_form
    if fx.D != fy.D:
        raise ValueError(f"cannot compose classes of discriminants {fx.D} and {fy.D}")
    a, b, c = _compose_raw((fx.a, fx.b, fx.c), (fy.a, fy.b, fy.c))
    return reduce_form(Form(a, b, c, fx.D))


# ----------------------------------------------------------------------
# 3-torsion, unit norm, assembled invariants
# ----------------------------------------------------------------------

def _cube_is_principal(f, principal, d, fl):
    sq = _compose_raw(f, f)
    if d < 0:
        sq = _reduce_neg(*sq)
        cb = _reduce_neg(*_compose_raw(sq, f))
        return cb == principal
    sq = _reduce_pos(*sq, d, fl)
    cb = _reduce_pos(*_compose_raw(sq, f), d, fl)
    return min(_cycle_of(cb, d, fl)) == principal


def _three_torsion_neg(d, forms, principal):
    # Lagrange: a nontrivial 3-torsion element needs 3 | h. Classes come in
    # inverse pairs (a, b, c) <-> (a, -b, c) with the same cube-triviality,
    # so only b >= 0 forms are cubed.
    if len(forms) % 3 != 0:
        return 1
    count = 0
    for a, b, c in forms:
        if b < 0:
            continue
        if _cube_is_principal((a, b, c), principal, d, 0):
            count += 2 if 0 < b < a < c else 1
    return count


def _three_torsion_pos(d, fl, classes, principal):
    if len(classes) % 3 != 0:
        return 1
    count = 0
    for f, _ in classes:
        if _cube_is_principal(f, principal, d, fl):
            count += 1
    return count


def three_torsion_count(D) -> int:
    """#{classes x : x*x*x = principal}; always a power of 3 (it is 3^r3).

    For D > 0 this counts in the narrow class group, which has the same
    3-torsion as the ideal class group.
    """
    disc = _coerce_disc(D)
    d = disc.value
    if d < 0:
        forms = _reduced_forms_neg(d)
        principal = _reduce_neg(1, d & 1, ((d & 1) - d) >> 2)
        count = _three_torsion_neg(d, forms, principal)
    else:
        fl = math.isqrt(d)
        classes = _classes_pos(d, fl)
        b0 = d & 1
        principal = min(_cycle_of(_reduce_pos(1, b0, (b0 * b0 - d) >> 2, d, fl), d, fl))
        count = _three_torsion_pos(d, fl, classes, principal)
    r3 = _log3(count)
    if 3**r3 != count:  # pragma: no cover
        raise AssertionError(f"3-torsion count {count} is not a power of 3")
    return count


def _log3(n):
    r = 0
    while n >= 3:
        n //= 3
        r += 1
    return r


def unit_norm(D) -> int:
    """Norm (+1 or -1) of the fundamental unit of the real field of discriminant D.

    Computed as (-1)^period of the continued fraction of sqrt(D/4) when
    D = 0 (mod 4) and of (1 + sqrt(D))/2 when D = 1 (mod 4); the period is
    detected by repetition of the exact (P, Q) recurrence state.
    """
    disc = _coerce_disc(D)
    d = disc.value
    if d < 0:
        raise ValueError("unit_norm is defined for positive discriminants only")
    return -1 if _cf_period(d) & 1 else 1


def _cf_period(d):
    if d & 3 == 0:
        p, q, n = 0, 1, d >> 2
    else:
        p, q, n = 1, 2, d
    fl = math.isqrt(n)
    seen = {}
    step = 0
    while (p, q) not in seen:
        seen[(p, q)] = step
        a = (p + fl) // q
        p = a * q - p
        q = (n - p * p) // q
        step += 1
    return step - seen[(p, q)]


@dataclass(frozen=True)
class ClassGroupInfo:
    """Per-discriminant class data.

    unit_norm is 0 (UNIT_NORM_NOT_APPLICABLE) for D < 0. For D > 0,
    h = h_plus when the fundamental unit has norm -1 and h_plus/2 otherwise;
    three_torsion_count = 3**r3 in all cases.
    """

    D: Discriminant
    h_plus: int
    h: int
    unit_norm: int
    three_torsion_count: int
    r3: int


def _core_info(d, spf=None):
    """(h_plus, h, unit_norm, r3) for a trusted fundamental discriminant d."""
    if d < 0:
        forms = _reduced_forms_neg(d, spf)
        principal = _reduce_neg(1, d & 1, ((d & 1) - d) >> 2)
        h = len(forms)
        tt = _three_torsion_neg(d, forms, principal)
        return h, h, UNIT_NORM_NOT_APPLICABLE, _log3(tt)
    fl = math.isqrt(d)
    classes = _classes_pos(d, fl, spf)
    b0 = d & 1
    principal = min(_cycle_of(_reduce_pos(1, b0, (b0 * b0 - d) >> 2, d, fl), d, fl))
    h_plus = len(classes)
    tt = _three_torsion_pos(d, fl, classes, principal)
    un = -1 if _cf_period(d) & 1 else 1
    if un == 1:
        if h_plus & 1:  # pragma: no cover
            raise AssertionError(f"unit norm +1 with odd narrow class number for D={d}")
        h = h_plus >> 1
    else:
        h = h_plus
    return h_plus, h, un, _log3(tt)


def class_group_info(D) -> ClassGroupInfo:
    """Assembled class-group invariants of a fundamental discriminant."""
    disc = _coerce_disc(D)
    h_plus, h, un, r3 = _core_info(disc.value)
    return ClassGroupInfo(disc, h_plus, h, un, 3**r3, r3)


# ----------------------------------------------------------------------
# analytic class number (imaginary): independent oracle
# ----------------------------------------------------------------------

def analytic_h_imaginary(D) -> int:
    """Exact class number of an imaginary field from the finite character sum
    h = w / (2|D|) * |sum_{a=1}^{|D|-1} kronecker(D, a) * a|.

    Shares nothing with the form-based route; used to cross-check it.
    """
    disc = _coerce_disc(D)
    d = disc.value
    if d >= 0:
        raise ValueError("analytic_h_imaginary needs a negative discriminant")
    w = 6 if d == -3 else 4 if d == -4 else 2
    m = -d
    spf = smallest_prime_factors(m) if m > 4 else None
    chi = [0] * m
    chi[1 % m] = 1
    total = 0
    for a in range(2, m):
        p = spf[a] if spf else a
        if p == a:
            chi[a] = kronecker(d, a)
        else:
            chi[a] = chi[p] * chi[a // p]
        total += chi[a] * a
    total += 1  # the a = 1 term
    num = w * abs(total)
    h, rem = divmod(num, 2 * m)
    if rem or h == 0:
        raise AssertionError(f"analytic class number formula failed for D={d}")
    return h
