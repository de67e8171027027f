"""Random instance generators shared by the property tests."""

from __future__ import annotations

import random

from stabreduce.cones import Fan, star_subdivision
from stabreduce.stacks import DiagonalizableGroup, ToricStack, stable_locus


def e(i: int, n: int) -> tuple[int, ...]:
    return tuple(int(j == i) for j in range(n))


def orthant(weights, torsion=(), torsion_weights=()) -> ToricStack:
    rows = [list(weights)] if isinstance(weights[0], int) else [list(r) for r in weights]
    n = len(rows[0])
    G = DiagonalizableGroup(n, tuple(map(tuple, rows)), tuple(torsion), tuple(map(tuple, torsion_weights)))
    return ToricStack(Fan.orthant(n), G)


def random_group(rng: random.Random, n: int, r: int, wmax: int = 2, torsion: bool = True) -> DiagonalizableGroup:
    rows = tuple(tuple(rng.randint(-wmax, wmax) for _ in range(n)) for _ in range(r))
    tors, tw = (), ()
    if torsion and rng.random() < 0.25:
        tors = (rng.choice([2, 3]),)
        tw = (tuple(rng.randint(0, tors[0] - 1) for _ in range(n)),)
    return DiagonalizableGroup(n, rows, tors, tw)


def random_stable_orthant(rng: random.Random, nmax: int = 4, rmax: int = 2, wmax: int = 2) -> ToricStack:
    """An orthant stack with a stable generic point and at least one unstable orbit when possible."""
    while True:
        n = rng.randint(1, nmax)
        r = rng.randint(1, rmax)
        X = ToricStack(Fan.orthant(n), random_group(rng, n, r, wmax))
        rep = stable_locus(X)
        if rep.classification == "not_stable":
            continue
        if len(rep.stable_cones) == len(X.fan.cones) and rng.random() < 0.8:
            continue
        return X


def random_fan_stack(rng: random.Random, nmax: int = 4, rmax: int = 2) -> ToricStack:
    """A smooth non-affine fan: subdivided orthant, with a random group."""
    n = rng.randint(2, nmax)
    F = Fan.orthant(n)
    for _ in range(rng.randint(1, 2)):
        F = star_subdivision(F, rng.choice([c for c in F.cones if len(c.rays) >= 2]))
    return ToricStack(F, random_group(rng, n, rng.randint(1, rmax)))
