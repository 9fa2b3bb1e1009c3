"""Seeded random instances.

All randomness comes from :class:`random.Random` seeded with an integer, and
probabilities are drawn from the grid 0.05, 0.10, ..., 0.95, so a seed gives
the same file on every platform.
"""

from __future__ import annotations

import random

from .model import CPNet, IncompleteCPNet, PCPNet, Structure

SHAPES = ("chain", "star", "balanced")
GRID = tuple(k / 20 for k in range(1, 20))


def var_names(n: int) -> tuple:
    return tuple(f"X{i + 1}" for i in range(n))


def shaped_structure(n: int, shape: str) -> Structure:
    if n < 1:
        raise ValueError("need at least one variable")
    if shape == "chain":
        parents = [()] + [(i - 1,) for i in range(1, n)]
    elif shape == "star":
        parents = [()] + [(0,)] * (n - 1)
    elif shape == "balanced":
        parents = [()] + [((i - 1) // 2,) for i in range(1, n)]
    else:
        raise ValueError(f"unknown shape {shape!r}; expected one of {', '.join(SHAPES)}")
    return Structure(var_names(n), tuple(parents))


def random_forest(rng: random.Random, n: int, root_prob: float = 0.25) -> Structure:
    """Each variable after the first picks an earlier parent, or none with ``root_prob``."""
    parents = [()]
    for i in range(1, n):
        parents.append(() if rng.random() < root_prob else (rng.randrange(i),))
    return Structure(var_names(n), tuple(parents))


def random_dag(rng: random.Random, n: int, max_parents: int = 2) -> Structure:
    parents = []
    for i in range(n):
        k = rng.randint(0, min(max_parents, i))
        parents.append(tuple(sorted(rng.sample(range(i), k))))
    return Structure(var_names(n), tuple(parents))


def random_pcpnet(rng: random.Random, s: Structure) -> PCPNet:
    return PCPNet(s, tuple(rng.choice(GRID) for _ in range(s.n_slots)))


def random_cpnet(rng: random.Random, s: Structure) -> CPNet:
    return CPNet(s, tuple(rng.randint(0, 1) for _ in range(s.n_slots)))


def random_incomplete(rng: random.Random, s: Structure, max_absent: int) -> IncompleteCPNet:
    table = [rng.randint(0, 1) for _ in range(s.n_slots)]
    for i in rng.sample(range(s.n_slots), rng.randint(0, min(max_absent, s.n_slots))):
        table[i] = None
    return IncompleteCPNet(s, tuple(table))


def random_outcome(rng: random.Random, n: int) -> tuple:
    return tuple(rng.randint(0, 1) for _ in range(n))


def random_pair(rng: random.Random, n: int, max_diff: int) -> tuple:
    """An outcome and a second one differing on 1..``max_diff`` variables."""
    o = random_outcome(rng, n)
    diff = set(rng.sample(range(n), rng.randint(1, min(max_diff, n))))
    return o, tuple(1 - v if i in diff else v for i, v in enumerate(o))


def generate(n: int, shape: str, kind: str, seed: int):
    rng = random.Random(seed)
    s = shaped_structure(n, shape)
    if kind == "pcp":
        return random_pcpnet(rng, s)
    if kind == "det":
        return random_cpnet(rng, s)
    raise ValueError(f"unknown kind {kind!r}; expected det or pcp")
