#!/usr/bin/env python3
"""A tour of exact class-group computation with binary quadratic forms.

Run:  python3 demos/01_class_groups.py
"""

from quadclass import arith, forms
from quadclass.forms import Form

print("=" * 64)
print("Fundamental discriminants")
print("=" * 64)
for d in (5, 12, -23, 9, 45, 1):
    try:
        disc = arith.classify_discriminant(d)
        print(f"  {d:>4}  ->  {disc.sign}, {disc.parity_class} type")
    except arith.NotFundamental as e:
        print(f"  {d:>4}  ->  rejected: {e.reason}")

print()
print("=" * 64)
print("Imaginary quadratic: D = -23")
print("=" * 64)
print("Each class of positive definite forms has a unique reduced")
print("representative with |b| <= a <= c:")
for rep in forms.enumerate_classes(-23):
    a, b, c, _ = rep.canonical_form
    print(f"  ({a}, {b}, {c})")
print("so h(-23) =", forms.class_group_info(-23).h)
print("The finite character sum gives the same number independently:",
      forms.analytic_h_imaginary(-23))

print()
print("Composition makes the classes a group. Squaring (2, 1, 3):")
c2 = forms.reduce_form(Form.make(2, 1, 3))
sq = forms.compose(c2, c2)
print("  (2, 1, 3) o (2, 1, 3) =", tuple(sq.canonical_form)[:3])
print("  cube is the principal class:",
      forms.compose(sq, c2) == forms.principal_class(-23))
print("Every element is 3-torsion here, so 3^r3 =", forms.three_torsion_count(-23))

print()
print("=" * 64)
print("Real quadratic: D = 229, the smallest with h = 3")
print("=" * 64)
print("Reduced indefinite forms fall into rho-cycles; the number of cycles")
print("is the narrow class number h+.")
for rep in forms.enumerate_classes(229):
    a, b, c, _ = rep.canonical_form
    print(f"  cycle of ({a}, {b}, {c}), length {rep.cycle_length}")
info = forms.class_group_info(229)
print(f"h+ = {info.h_plus}, fundamental unit norm = {info.unit_norm}, "
      f"so h = {info.h}, and r3 = {info.r3}")

print()
print("When the unit norm is +1 the narrow group is twice the class group:")
info12 = forms.class_group_info(12)
print(f"  D = 12: h+ = {info12.h_plus}, norm = {info12.unit_norm}, h = {info12.h}")

print()
print("D = 32009 is the smallest real discriminant with 3-rank 2:")
print("  3-torsion count =", forms.three_torsion_count(32009),
      " (r3 =", forms.class_group_info(32009).r3, ")")

print()
print("=" * 64)
print("Watching a reduction cycle, D = 21")
print("=" * 64)
f = Form.make(5, 11, 5)
print("start:", tuple(f)[:3], "reduced?", forms.is_reduced(f))
rep = forms.reduce_form(f)
print("lands in the cycle of", tuple(rep.canonical_form)[:3],
      "(cycle length", rep.cycle_length, ")")
g = rep.canonical_form
for i in range(rep.cycle_length + 1):
    print(f"  rho^{i}:", tuple(g)[:3])
    g = forms.rho(g)
