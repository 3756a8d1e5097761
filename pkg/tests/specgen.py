"""Shared generator of random polarized specs with regular targets."""

import random
from fractions import Fraction as F

from momentmorse.exactlin import rational_rank
from momentmorse.poincare import is_regular_value
from momentmorse.weights import polarization_certificate, validate_spec


def random_polarized_spec(rng: random.Random):
    """A polarized spec with full-rank weights and a random regular target.

    Rank <= 3, at most 6 distinct weights, small multiplicities.  Targets
    are drawn as shift + positive rational combinations of the weights
    (hence on a nonempty level) and rejected until regular.
    """
    while True:
        r = rng.randint(1, 3)
        m = rng.randint(r, 6)
        eta = [rng.randint(1, 3) for _ in range(r)]
        weights = []
        seen = set()
        for _ in range(200):
            if len(weights) == m:
                break
            mu = tuple(rng.randint(-3, 3) for _ in range(r))
            if mu in seen or sum(a * b for a, b in zip(mu, eta)) <= 0:
                continue
            seen.add(mu)
            weights.append((mu, rng.randint(1, 2)))
        if len(weights) < max(r, 1):
            continue
        spec = validate_spec(r, weights, [rng.randint(-2, 2) for _ in range(r)])
        if rational_rank(spec.weight_vectors()) < r:
            continue
        if polarization_certificate(spec) is None:
            continue
        for _ in range(30):
            coeffs = [F(rng.randint(1, 9), rng.randint(1, 4))
                      for _ in spec.weights]
            xi = list(spec.shift)
            for c, w in zip(coeffs, spec.weights):
                xi = [x + c * e for x, e in zip(xi, w.weight)]
            if is_regular_value(spec, xi):
                return spec, tuple(xi)
