"""Seeded random presentations for sweeps and tests.

Each presentation is drawn for a target shape class (cycling through the
four classes), so any corpus of forty or more covers all of them. Draws that
land in a different class are retried with the same generator stream, which
keeps the output a pure function of the spec.
"""

import random
from dataclasses import dataclass

from .errors import InputError
from .regular import (
    BARE_RAY,
    FINITE,
    LARGE,
    LEAF,
    SHAPE_CLASSES,
    SMALL_INFINITE,
    Entry,
    Presentation,
    prune,
    shape_classify,
    validate,
)

_TRIES = 200


@dataclass(frozen=True)
class CorpusSpec:
    count: int
    max_nonterminals: int = 5
    max_children: int = 3
    max_subdiv: int = 3
    seed: int = 0
    shapes: tuple = SHAPE_CLASSES

    def __post_init__(self):
        if self.count < 0 or self.max_nonterminals < 1 or self.max_children < 2 or self.max_subdiv < 0:
            raise InputError("corpus spec needs count >= 0, max_nonterminals >= 1, max_children >= 2, max_subdiv >= 0")
        bad = set(self.shapes) - set(SHAPE_CLASSES)
        if bad or not self.shapes:
            raise InputError(f"unknown shape classes {sorted(bad)}")


def _sub(rng, spec):
    return rng.randint(0, spec.max_subdiv) if rng.random() < 0.35 else 0


def _draw(rng, spec, target):
    k = rng.randint(1, spec.max_nonterminals)
    names = [f"N{i}" for i in range(k)]
    prods = []
    for i, name in enumerate(names):
        later = names[i + 1:]
        if target == FINITE:
            pool = later
            n = rng.randint(0 if not later else 1, spec.max_children)
        elif target == BARE_RAY:
            # one entry each; the last one loops back somewhere
            pool = later or names
            n = 1
        elif target == SMALL_INFINITE:
            # branching only towards finite material, the ray part is unary
            pool = later or names[-1:]
            n = 1 if not later else rng.randint(1, spec.max_children)
        else:
            pool = names
            n = rng.randint(1, spec.max_children)
        entries = []
        for _ in range(n):
            if pool and rng.random() < 0.6:
                entries.append(Entry(rng.choice(pool), _sub(rng, spec)))
            else:
                entries.append(Entry(LEAF, _sub(rng, spec)))
        if target == BARE_RAY and i == k - 1:
            entries = [Entry(rng.choice(names), _sub(rng, spec))]
        if target == SMALL_INFINITE and i == k - 1:
            entries = [Entry(name, _sub(rng, spec))]
        prods.append((name, tuple(entries)))
    return prune(Presentation(names[0], tuple(prods)))


def corpus_generate(spec: CorpusSpec):
    """``spec.count`` valid presentations, deterministic for ``spec.seed``."""
    rng = random.Random(spec.seed)
    out = []
    for i in range(spec.count):
        target = spec.shapes[i % len(spec.shapes)]
        for _ in range(_TRIES):
            p = _draw(rng, spec, target)
            if validate(p) and shape_classify(p) == target:
                break
        else:
            raise InputError(f"could not draw a {target} presentation within the spec limits")
        out.append(p)
    return out
