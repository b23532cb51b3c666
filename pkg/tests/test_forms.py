import itertools
import math
import random

import pytest

from quadclass import arith, forms
from quadclass.forms import ClassRep, Form


def fundamental_range(lo, hi):
    return [d for d in range(lo, hi) if d and arith.is_fundamental_discriminant(d)]


def transformed(f, rng, steps=6):
    """Apply a random word in the SL2(Z) generators to a form."""
    a, b, c = f.a, f.b, f.c
    for _ in range(steps):
        if rng.random() < 0.5:
            k = rng.randrange(-3, 4)
            # (x, y) -> (x + k y, y)
            a, b, c = a, b + 2 * a * k, a * k * k + b * k + c
        else:
            # (x, y) -> (-y, x)
            a, b, c = c, -b, a
    return Form(a, b, c, f.D)


class TestFormConstruction:
    def test_caches_discriminant(self):
        f = Form.make(1, 1, 6)
        assert f.D == -23

    def test_rejects_square_discriminant(self):
        with pytest.raises(ValueError):
            Form.make(1, 5, 6)  # D = 1
        with pytest.raises(ValueError):
            Form.make(1, 3, 0)  # D = 9

    def test_rejects_negative_definite(self):
        with pytest.raises(ValueError):
            Form.make(-1, 0, -1)

    def test_rejects_zero_a(self):
        with pytest.raises(ValueError):
            Form.make(0, 2, 3)


class TestIsReduced:
    @pytest.mark.parametrize("abc,expected", [
        ((1, 1, 6), True),
        ((3, 1, 2), False),   # a > c
        ((2, -1, 3), True),
        ((2, -2, 3), False),  # boundary |b| = a needs b >= 0
        ((2, 2, 3), True),
    ])
    def test_definite(self, abc, expected):
        assert forms.is_reduced(Form.make(*abc)) is expected

    @pytest.mark.parametrize("abc,expected", [
        ((1, 1, -1), True),    # D = 5
        ((-1, 1, 1), True),
        ((1, 3, -3), True),    # D = 21
        ((5, 11, 5), False),   # b^2 > D
        ((1, 1, -5), False),   # D = 21, window fails
    ])
    def test_indefinite(self, abc, expected):
        assert forms.is_reduced(Form.make(*abc)) is expected


class TestRho:
    def test_example_d5(self):
        f = Form.make(1, 1, -1)
        assert tuple(forms.rho(f))[:3] == (-1, 1, 1)
        assert forms.rho(forms.rho(f)) == f  # cycle length 2

    def test_rejects_definite(self):
        with pytest.raises(ValueError):
            forms.rho(Form.make(1, 1, 6))

    def test_preserves_discriminant_and_reducedness(self):
        # rho restricted to the reduced forms is a bijection: every reduced
        # form has exactly one rho-image and one rho-preimage, both reduced.
        rng = random.Random(31)
        pool = []
        for d in fundamental_range(2, 600):
            pool.extend(forms.Form(*t, d) for t in forms._reduced_forms_pos(d, math.isqrt(d)))
        sample = rng.sample(pool, min(10**4, len(pool)))
        for f in sample:
            g = forms.rho(f)
            assert g.D == f.D
            assert forms.is_reduced(g)

    def test_bijection_on_reduced_forms(self):
        for d in fundamental_range(2, 500):
            fl = math.isqrt(d)
            reduced = set(forms._reduced_forms_pos(d, fl))
            images = {forms._rho(*f, d, fl) for f in reduced}
            assert images == reduced, d


class TestReduce:
    def test_already_reduced_definite_is_fixed(self):
        for abc in [(1, 1, 6), (2, -1, 3), (2, 1, 3), (1, 0, 1)]:
            f = Form.make(*abc)
            rep = forms.reduce_form(f)
            assert rep.canonical_form == f and rep.cycle_length == 1

    def test_definite_example(self):
        rep = forms.reduce_form(Form.make(4, 5, 3))
        assert tuple(rep.canonical_form)[:3] == (2, -1, 3)

    def test_indefinite_example_d21(self):
        # (5, 11, 5) reduces into the cycle {(-1, 3, 3), (3, 3, -1)}, which is
        # not the principal cycle of D = 21 (the narrow group has order 2).
        rep = forms.reduce_form(Form.make(5, 11, 5))
        assert rep == ClassRep(Form(-1, 3, 3, 21), 2)
        assert rep.cycle_length == 2
        assert rep != forms.principal_class(21)

    def test_class_invariant_under_sl2(self):
        rng = random.Random(37)
        discs = fundamental_range(-300, 300)
        for _ in range(400):
            d = rng.choice(discs)
            reps = forms.enumerate_classes(d)
            base = rng.choice(reps).canonical_form
            moved = transformed(base, rng)
            assert moved.D == d
            assert forms.reduce_form(moved) == forms.reduce_form(base)


class TestEnumerateClasses:
    def test_d_minus_23(self):
        got = [tuple(r.canonical_form)[:3] for r in forms.enumerate_classes(-23)]
        assert got == [(1, 1, 6), (2, -1, 3), (2, 1, 3)]

    def test_d5_single_cycle(self):
        reps = forms.enumerate_classes(5)
        assert len(reps) == 1 and reps[0].cycle_length == 2
        assert reps[0] == forms.reduce_form(Form.make(1, 1, -1))

    def test_d229(self):
        assert len(forms.enumerate_classes(229)) == 3

    @pytest.mark.parametrize("d,h", [(-3, 1), (-4, 1), (-47, 5), (-163, 1), (-239, 15)])
    def test_known_imaginary_class_numbers(self, d, h):
        assert len(forms.enumerate_classes(d)) == h

    def test_rejects_non_fundamental(self):
        with pytest.raises(arith.NotFundamental):
            forms.enumerate_classes(9)


class TestPrincipalAndCompose:
    def test_principal_examples(self):
        assert forms.principal_class(5) == forms.reduce_form(Form.make(1, 1, -1))
        assert forms.principal_class(-4).canonical_form == Form(1, 0, 1, -4)
        assert forms.principal_class(12) == forms.reduce_form(Form.make(1, 0, -3))

    def test_identity_law_d_minus_23(self):
        pr = forms.principal_class(-23)
        for x in forms.enumerate_classes(-23):
            assert forms.compose(pr, x) == x

    def test_cyclic_cube_d_minus_23(self):
        c2 = forms.reduce_form(Form.make(2, 1, 3))
        sq = forms.compose(c2, c2)
        assert tuple(sq.canonical_form)[:3] == (2, -1, 3)
        assert forms.compose(sq, c2) == forms.principal_class(-23)

    @pytest.mark.parametrize("d", [-23, 229, 32009])
    def test_commutative(self, d):
        reps = forms.enumerate_classes(d)
        for x, y in itertools.combinations(reps, 2):
            assert forms.compose(x, y) == forms.compose(y, x)

    def test_rejects_mismatched_discriminants(self):
        with pytest.raises(ValueError):
            forms.compose(forms.principal_class(5), forms.principal_class(12))


class TestGroupLaws:
    """Exhaustive group checks through multiplication tables, |D| < 2000."""

    def _table(self, d):
        classes = forms.enumerate_classes(d)
        idx = {c: i for i, c in enumerate(classes)}
        # composing never leaves the class set and never changes D
        table = []
        for x in classes:
            row = []
            for y in classes:
                z = forms.compose(x, y)
                assert z.canonical_form.D == d
                row.append(idx[z])
            table.append(row)
        return classes, idx, table

    def test_group_laws_exhaustive(self):
        for d in fundamental_range(-2000, 2000):
            classes, idx, table = self._table(d)
            k = len(classes)
            e = idx[forms.principal_class(d)]
            assert all(table[e][j] == j for j in range(k)), d
            for i in range(k):
                f = classes[i].canonical_form
                inv = idx[forms.reduce_form(Form(f.a, -f.b, f.c, f.D))]
                assert table[i][inv] == e, d
            for i in range(k):
                for j in range(i, k):
                    assert table[i][j] == table[j][i], d
            for i in range(k):
                for j in range(k):
                    tij = table[i][j]
                    for l in range(k):
                        assert table[tij][l] == table[i][table[j][l]], d
            # 3-torsion against the brute-force table count
            tt = sum(1 for i in range(k) if table[table[i][i]][i] == e)
            assert tt == forms.three_torsion_count(d), d


class TestThreeTorsion:
    @pytest.mark.parametrize("d,tt", [(5, 1), (229, 3), (32009, 9), (-23, 3), (-3299, 9)])
    def test_examples(self, d, tt):
        assert forms.three_torsion_count(d) == tt

    def test_always_power_of_three(self):
        for d in fundamental_range(-400, 400):
            tt = forms.three_torsion_count(d)
            while tt % 3 == 0:
                tt //= 3
            assert tt == 1, d


class TestUnitNorm:
    @pytest.mark.parametrize("d,norm", [(5, -1), (8, -1), (12, 1), (13, -1), (21, 1), (229, -1)])
    def test_examples(self, d, norm):
        assert forms.unit_norm(d) == norm

    def test_rejects_negative(self):
        with pytest.raises(ValueError):
            forms.unit_norm(-23)

    def test_against_principal_cycle_predicate(self):
        # norm -1 iff some form in the principal cycle has a = -1
        for d in fundamental_range(2, 3000):
            fl = math.isqrt(d)
            b0 = d & 1
            start = forms._reduce_pos(1, b0, (b0 * b0 - d) >> 2, d, fl)
            cyc = forms._cycle_of(start, d, fl)
            predicate = any(a == -1 for a, _, _ in cyc)
            assert (forms.unit_norm(d) == -1) == predicate, d


class TestClassGroupInfo:
    @pytest.mark.parametrize("d,h_plus,h,un,r3", [
        (-23, 3, 3, 0, 1),
        (229, 3, 3, -1, 1),
        (12, 2, 1, 1, 0),
        (5, 1, 1, -1, 0),
        (32009, 9, 9, -1, 2),
    ])
    def test_examples(self, d, h_plus, h, un, r3):
        info = forms.class_group_info(d)
        assert (info.h_plus, info.h, info.unit_norm, info.r3) == (h_plus, h, un, r3)
        assert info.three_torsion_count == 3**r3

    def test_parity_link(self):
        for d in fundamental_range(2, 3000):
            info = forms.class_group_info(d)
            if info.unit_norm == 1:
                assert info.h_plus % 2 == 0 and info.h == info.h_plus // 2
            else:
                assert info.h == info.h_plus
            assert (info.h % 3 == 0) == (info.h_plus % 3 == 0), d


class TestAnalyticImaginary:
    @pytest.mark.parametrize("d,h", [(-23, 3), (-4, 1), (-3, 1), (-7, 1), (-47, 5)])
    def test_examples(self, d, h):
        assert forms.analytic_h_imaginary(d) == h

    def test_rejects_positive(self):
        with pytest.raises(ValueError):
            forms.analytic_h_imaginary(229)

    def test_agrees_with_form_count_to_2000(self):
        for d in fundamental_range(-2000, 0):
            assert forms.analytic_h_imaginary(d) == len(forms.enumerate_classes(d)), d
