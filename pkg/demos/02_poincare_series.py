"""Walkthrough: equivariant Poincare series and quotient Betti numbers.

The series of a momentum level is computed by subtracting, from the series
1/(1-t^2)^r of the contractible ambient space, the shifted series of every
non-minimal critical component; each of those is itself a level of a
smaller action, so the recursion bottoms out.  At regular values the
result is a polynomial: the Betti numbers of the symplectic quotient.
"""

from momentmorse import (
    betti_numbers,
    equivariant_series,
    is_regular_value,
    series_text,
    validate_spec,
)

# 1. The rank-2 action on C^3: the quotient at (0,0) is a two-sphere.
c3 = validate_spec(2, [((1, 0), 1), ((0, 1), 1), ((1, -1), 1)], (-3, 1))
series = equivariant_series(c3, (0, 0))
print("T^2 on C^3, target (0,0):")
print("  regular:", is_regular_value(c3, (0, 0)))
print("  series: ", series_text(series))
print("  betti:  ", list(betti_numbers(c3, (0, 0))), "  (the two-sphere)")
print()

# 2. The circle acting on C^3 with all weights 1: the quotient at 1 is the
# complex projective plane, whose even Betti numbers are all 1.
cp2 = validate_spec(1, [((1,), 3)], (0,))
print("S^1 on C^3 with weights {1,1,1}, target 1:")
print("  series: ", series_text(equivariant_series(cp2, (1,))))
print("  betti:  ", list(betti_numbers(cp2, (1,))))
print()

# 3. The circle on C^2 with weights +1, -1: the zero level is a cone (not
# a manifold), the value is singular, and the series keeps a denominator
# because the stabilizer of the cone point is the whole circle.
cone = validate_spec(1, [((1,), 1), ((-1,), 1)], (0,))
print("S^1 on C^2 with weights {+1,-1}, target 0:")
print("  regular:", is_regular_value(cone, (0,)))
print("  series: ", series_text(equivariant_series(cone, (0,))))
print()

# 4. Weighted projective space flavour: weights {1, 2, 3}.  The quotient
# is an orbifold; over the rationals its Betti numbers still read off the
# series, and the palindrome reflects Poincare duality.
wps = validate_spec(1, [((1,), 1), ((2,), 1), ((3,), 1)], (0,))
print("S^1 on C^3 with weights {1,2,3}, target 6:")
print("  regular:", is_regular_value(wps, (6,)))
print("  series: ", series_text(equivariant_series(wps, (6,))))
print("  betti:  ", list(betti_numbers(wps, (6,))))
