"""Seed-pinned random table systems for the property suites.

Points are distinct rationals on the line with the absolute-value metric, so
all counts and identities are exact; mappings are arbitrary partial self-maps
(optionally injective).  The same seed always produces the same systems.
"""

from __future__ import annotations

import random
from fractions import Fraction

from .points import abs_metric, euclidean
from .system import make_table_system


def random_table_system(rng, max_points=12, injective=False, name=None):
    n = rng.randint(3, max_points)
    positions = rng.sample(range(0, 8 * max_points), n)
    pts = [euclidean(Fraction(v, 4)) for v in sorted(positions)]
    mapping = {}
    targets = list(range(n))
    if injective:
        rng.shuffle(targets)
    for i, p in enumerate(pts):
        if rng.random() < 0.75:
            j = targets[i] if injective else rng.randrange(n)
            mapping[p] = pts[j]
    return make_table_system(
        name or ("table-%d" % rng.randrange(10**9)),
        pts,
        mapping,
        abs_metric,
        resolution=Fraction(1, 4),
    )


def random_systems(seed, count, max_points=12, injective_every=2):
    """Deterministic stream of systems; every `injective_every`-th one is an
    injective partial map (for identities that need injectivity)."""
    rng = random.Random(seed)
    out = []
    for i in range(count):
        inj = injective_every and i % injective_every == 0
        out.append(
            (
                random_table_system(
                    rng, max_points, injective=inj, name="table-%d-%d" % (seed, i)
                ),
                inj,
            )
        )
    return out


def random_window_draws(rng, sys, count, n_max=5):
    """Random (n, eps) pairs with eps spanning the system's distance range."""
    vals = sorted(p.coords[0] for p in sys.sample)
    diam = vals[-1] - vals[0]
    draws = []
    for _ in range(count):
        n = rng.randint(1, n_max)
        num = rng.randint(1, 16)
        den = rng.choice([8, 16, 32])
        eps = diam * Fraction(num, den)
        draws.append((n, eps))
    return draws
