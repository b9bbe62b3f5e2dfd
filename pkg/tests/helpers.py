"""Shared fixtures and independent reference oracles for the test suite.

The reference routines here deliberately avoid the package's own fast
paths (bit-packed reduction, numpy enumeration) so that tests compare two
independent computations.
"""

from __future__ import annotations

from itertools import product

from xnfkit.gf2 import Lineral
from xnfkit.xnf import XnfFormula

# the seven-generator system of the worked example:
# (x1+1)x2, (x2+1)(x1+x3), (x2+1)x4, (x5+x2+1)(x1+x3),
# (x1+x3+1)(x1+x2+x3+1), (x4+1)x3, (x5+1)x4
RUNNING_EXAMPLE_XNF = """\
p xnf 5 7
1 -2 0
2 -1+3 0
2 -4 0
2+5 -1+3 0
1+3 1+2+3 0
4 -3 0
5 -4 0
"""

# 10-variable, 10-clause S-box listing
SBOX_XNF_LINES = [
    "p xnf 10 10",
    "-2 4+5+6 0",
    "2+3 -1+2+4+5+7 0",
    "-1 2+3+9 0",
    "-2+3 1+5+7 0",
    "-2 1+4+10 0",
    "-4 2+3+8 0",
    "1 -2+3+4+5+9 0",
    "2 -1+3+4+6 0",
    "2 -4+5+10 0",
    "4 2+3+5+8 0",
]
SBOX_XNF = "\n".join(SBOX_XNF_LINES) + "\n"


def lin(*support, c=0) -> Lineral:
    return Lineral(support, c)


def all_assignments(n):
    """Assignment tuples in lexicographic order."""
    return product((0, 1), repeat=n)


def eval_lineral(lineral: Lineral, a) -> int:
    val = lineral.const
    for v in lineral.support:
        val ^= a[v - 1]
    return val


def naive_models(formula: XnfFormula):
    """Pure-python model enumeration, independent of the numpy oracle."""
    out = []
    for a in all_assignments(formula.num_vars):
        ok = True
        for clause in formula.clauses:
            if not any(eval_lineral(l, a) for l in clause):
                ok = False
                break
        if ok:
            out.append(a)
    return out


def span_encs(gens) -> set[int]:
    """All elements of the span of the given linerals, by subset sums."""
    encs = [g.enc for g in gens]
    out = {0}
    for e in encs:
        out |= {x ^ e for x in out}
    return out


def zero_set(linerals, n) -> set[tuple]:
    """Assignments where every given lineral-polynomial vanishes."""
    out = set()
    for a in all_assignments(n):
        if all(eval_lineral(l, a) == 0 for l in linerals):
            out.add(a)
    return out


def gf2_rank(vecs) -> int:
    """Rank of integer bit-vectors over GF(2)."""
    piv: dict[int, int] = {}
    for r in vecs:
        while r:
            h = r.bit_length() - 1
            if h in piv:
                r ^= piv[h]
            else:
                piv[h] = r
                break
    return len(piv)


def projection_bijection_holds(models_out, n_base, expected_base) -> bool:
    """Projection of models_out to the first n_base coordinates must hit
    expected_base bijectively."""
    proj = [m[:n_base] for m in models_out]
    return len(proj) == len(set(proj)) and set(proj) == set(expected_base)
