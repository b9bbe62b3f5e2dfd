"""Random 2-XNF instance generation, optionally with a planted model."""

from __future__ import annotations

import random
from dataclasses import dataclass
from typing import Optional

from .gf2 import Lineral
from .xnf import XnfFormula


@dataclass
class GenSpec:
    n: int
    m: int
    force_sat: bool = False
    seed: int = 0


def random_lineral(rng: random.Random, n: int) -> Lineral:
    """Uniform draw from the nonconstant linerals: uniform nonzero support
    (by rejection) and a uniform constant bit."""
    mask = 0
    while mask == 0:
        mask = rng.getrandbits(n)
    return Lineral.from_enc((mask << 1) | rng.getrandbits(1))


def gen_random(spec: GenSpec) -> tuple[XnfFormula, Optional[tuple[int, ...]]]:
    """Each clause is two linerals drawn uniformly at random.  With
    force_sat a uniform assignment is drawn first and every unsatisfied
    clause gets the constant of one uniformly chosen lineral flipped, so
    the assignment is returned as a planted model of the output."""
    if spec.n < 1:
        raise ValueError("n must be >= 1")
    if spec.m < 0:
        raise ValueError("m must be >= 0")
    rng = random.Random(spec.seed)
    planted: Optional[tuple[int, ...]] = None
    if spec.force_sat:
        planted = tuple(rng.getrandbits(1) for _ in range(spec.n))
    clauses = []
    for _ in range(spec.m):
        pair = [random_lineral(rng, spec.n), random_lineral(rng, spec.n)]
        if planted is not None and not any(l.evaluate(planted) for l in pair):
            flip = rng.randrange(2)
            pair[flip] = pair[flip].negated()
        clauses.append(tuple(pair))
    return XnfFormula(spec.n, clauses), planted
