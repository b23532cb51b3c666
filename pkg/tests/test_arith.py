import math
import random

import pytest
import sympy

from quadclass import arith


def brute_squarefree(n):
    return all(n % (k * k) for k in range(2, math.isqrt(n) + 1))


class TestMobius:
    @pytest.mark.parametrize("n,expected", [(1, 1), (4, 0), (6, 1), (30, -1), (45, 0), (229, -1)])
    def test_examples(self, n, expected):
        assert arith.mobius(n) == expected

    def test_rejects_nonpositive(self):
        with pytest.raises(ValueError):
            arith.mobius(0)

    def test_against_sympy(self):
        rng = random.Random(7)
        for n in list(range(1, 2000)) + [rng.randrange(1, 10**9) for _ in range(300)]:
            assert arith.mobius(n) == sympy.mobius(n), n


class TestSquarefree:
    @pytest.mark.parametrize("n,expected", [(1, True), (45, False), (229, True), (4, False)])
    def test_examples(self, n, expected):
        assert arith.is_squarefree(n) is expected

    def test_matches_mobius_up_to_1e5(self):
        for n in range(1, 10**5 + 1):
            assert arith.is_squarefree(n) == (arith.mobius(n) != 0), n

    def test_matches_brute_force(self):
        rng = random.Random(11)
        for n in [rng.randrange(1, 10**6) for _ in range(500)]:
            assert arith.is_squarefree(n) == brute_squarefree(n), n


class TestSieve:
    def test_window_1_to_10(self):
        w = arith.sieve_squarefree(1, 10)
        assert [n for n in range(1, 11) if w.flag(n)] == [1, 2, 3, 5, 6, 7, 10]

    def test_singleton_windows(self):
        assert arith.sieve_squarefree(49, 49).flag(49) is False
        assert arith.sieve_squarefree(1, 1).flag(1) is True

    def test_pointwise_agreement_on_random_windows(self):
        rng = random.Random(13)
        for _ in range(1000):
            lo = rng.randrange(1, 10**5)
            hi = lo + rng.randrange(0, 60)
            w = arith.sieve_squarefree(lo, hi)
            for n in range(lo, hi + 1):
                assert w.flag(n) == arith.is_squarefree(n), (lo, hi, n)

    def test_window_too_large(self):
        with pytest.raises(arith.WindowTooLarge):
            arith.sieve_squarefree(1, 10**7, max_cells=10**6)

    def test_bad_bounds(self):
        with pytest.raises(ValueError):
            arith.sieve_squarefree(5, 4)
        with pytest.raises(ValueError):
            arith.sieve_squarefree(0, 4)


class TestKronecker:
    @pytest.mark.parametrize("a,n,expected", [
        (2, 3, -1),      # Legendre case: 2 is not a square mod 3
        (6, 3, 0),
        (3, 8, -1),
        (-1, 3, -1),
        (-1, -1, -1),
        (5, -1, 1),
        (1, 0, 1),
        (2, 0, 0),
    ])
    def test_examples(self, a, n, expected):
        assert arith.kronecker(a, n) == expected

    def test_identity_top_argument(self):
        for n in (-12, -7, -2, -1, 1, 2, 3, 8, 15, 30):
            assert arith.kronecker(1, n) == 1

    def test_against_sympy(self):
        rng = random.Random(17)
        for _ in range(3000):
            a = rng.randrange(-500, 501)
            n = rng.randrange(-500, 501)
            assert arith.kronecker(a, n) == sympy.kronecker_symbol(a, n), (a, n)

    def test_multiplicative_in_top_argument(self):
        rng = random.Random(19)
        for _ in range(10**4):
            a = rng.randrange(-300, 301)
            b = rng.randrange(-300, 301)
            n = rng.randrange(-300, 301)
            assert arith.kronecker(a * b, n) == arith.kronecker(a, n) * arith.kronecker(b, n)

    def test_period_3(self):
        # (a/3) depends only on a mod 3
        for a in range(-50, 200):
            assert arith.kronecker(a, 3) == arith.kronecker(a % 3, 3)


class TestClassifyDiscriminant:
    def test_accepts(self):
        d = arith.classify_discriminant(5)
        assert (d.value, d.sign, d.parity_class) == (5, "positive", "odd")
        d = arith.classify_discriminant(12)
        assert (d.sign, d.parity_class) == ("positive", "even")
        d = arith.classify_discriminant(-23)
        assert (d.sign, d.parity_class) == ("negative", "odd")
        d = arith.classify_discriminant(-4)
        assert (d.sign, d.parity_class) == ("negative", "even")

    @pytest.mark.parametrize("d,reason", [
        (9, arith.REASON_PERFECT_SQUARE),
        (1, arith.REASON_IS_ONE),
        (45, arith.REASON_NOT_SQUAREFREE_CORE),
        (16, arith.REASON_PERFECT_SQUARE),
        (20, arith.REASON_NOT_SQUAREFREE_CORE),  # 20/4 = 5 = 1 mod 4
        (7, arith.REASON_NOT_0_OR_1_MOD_4),
        (-6, arith.REASON_NOT_0_OR_1_MOD_4),
        (0, arith.REASON_NOT_SQUAREFREE_CORE),
    ])
    def test_rejections_reasons(self, d, reason):
        with pytest.raises(arith.NotFundamental) as err:
            arith.classify_discriminant(d)
        assert err.value.reason == reason

    def test_matches_brute_predicate(self):
        def brute(d):
            if d in (0, 1):
                return False
            if d > 0 and math.isqrt(d) ** 2 == d:
                return False
            if d % 4 == 1:
                return brute_squarefree(abs(d))
            if d % 4 == 0:
                q = d // 4
                return q % 4 in (2, 3) and brute_squarefree(abs(q))
            return False

        for d in range(-10**4, 10**4 + 1):
            assert arith.is_fundamental_discriminant(d) == brute(d), d


class TestSquarefreeInAP:
    def test_examples(self):
        assert arith.count_squarefree_in_ap(100, 4, 1).count == 20
        assert arith.count_squarefree_in_ap(10, 1, 1).count == 7

    def test_against_direct_enumeration(self):
        rng = random.Random(23)
        for _ in range(60):
            x = rng.randrange(50, 3000)
            k = rng.randrange(1, 30)
            coprime = [l for l in range(1, k + 1) if math.gcd(k, l) == 1]
            l = rng.choice(coprime)
            expected = sum(1 for m in range(l, x + 1, k) if brute_squarefree(m))
            assert arith.count_squarefree_in_ap(x, k, l).count == expected, (x, k, l)

    def test_main_term_constant(self):
        res = arith.count_squarefree_in_ap(10**6, 12, 5)
        # product over p | 12: (1 - 1/4)^-1 (1 - 1/9)^-1 = 3/2
        assert res.main_term == pytest.approx(6 / (12 * math.pi**2) * 1.5 * 10**6)
        assert res.relative_error == abs(res.count - res.main_term) / res.main_term
        assert res.relative_error <= 0.02

    def test_residue_classes_partition_all_squarefree(self):
        x, k = 5000, 12
        total = arith.sieve_squarefree(1, x).count()
        parts = 0
        for l in range(1, k + 1):
            if math.gcd(k, l) == 1:
                parts += arith.count_squarefree_in_ap(x, k, l).count
            else:
                w = arith.sieve_squarefree(1, x)
                parts += int(w.squarefree_flags[l - 1 :: k].sum())
        assert parts == total

    def test_rejects_noncoprime(self):
        with pytest.raises(ValueError):
            arith.count_squarefree_in_ap(100, 6, 3)

    def test_residue_normalization(self):
        a = arith.count_squarefree_in_ap(500, 7, 3)
        b = arith.count_squarefree_in_ap(500, 7, 10)
        assert a.count == b.count
