"""Exhaustive XNF solving by full assignment enumeration.

Variable i maps to bit (n - i) of the assignment code, so ascending codes
enumerate assignment tuples in lexicographic order and the first satisfying
code is the lexicographically smallest model.
"""

from __future__ import annotations

import numpy as np

from .solver import SAT, UNSAT, SolveResult, SolveStats
from .xnf import XnfFormula

HARD_CAP = 32
_BLOCK = 1 << 18


def _clause_tables(formula: XnfFormula) -> list[list[tuple[int, int]]]:
    n = formula.num_vars
    tables = []
    for clause in formula.clauses:
        encoded = []
        for lin in clause:
            mask = 0
            bits = lin.enc >> 1
            v = 1
            while bits:
                if bits & 1:
                    mask |= 1 << (n - v)
                bits >>= 1
                v += 1
            encoded.append((mask, lin.enc & 1))
        tables.append(encoded)
    return tables


def _sat_vector(tables, codes: np.ndarray) -> np.ndarray:
    sat = np.ones(codes.shape, dtype=bool)
    for clause in tables:
        cval = np.zeros(codes.shape, dtype=bool)
        for mask, const in clause:
            parity = (np.bitwise_count(codes & np.uint64(mask)) & 1).astype(bool)
            cval |= ~parity if const else parity
        sat &= cval
    return sat


def _code_to_model(code: int, n: int) -> tuple[int, ...]:
    return tuple((code >> (n - i)) & 1 for i in range(1, n + 1))


def _check_cap(formula: XnfFormula) -> None:
    if formula.num_vars > HARD_CAP:
        raise ValueError(f"brute force capped at {HARD_CAP} variables")


def brute_force_solve(formula: XnfFormula) -> SolveResult:
    """First model in lexicographic order, or UNSAT."""
    _check_cap(formula)
    n = formula.num_vars
    tables = _clause_tables(formula)
    total = 1 << n
    start = 0
    while start < total:
        stop = min(start + _BLOCK, total)
        codes = np.arange(start, stop, dtype=np.uint64)
        sat = _sat_vector(tables, codes)
        hits = np.flatnonzero(sat)
        if hits.size:
            code = int(codes[hits[0]])
            return SolveResult(SAT, _code_to_model(code, n), SolveStats())
        start = stop
    return SolveResult(UNSAT, None, SolveStats())


def count_models(formula: XnfFormula) -> int:
    """Exact model count by enumeration."""
    _check_cap(formula)
    n = formula.num_vars
    tables = _clause_tables(formula)
    total = 1 << n
    count = 0
    start = 0
    while start < total:
        stop = min(start + _BLOCK, total)
        codes = np.arange(start, stop, dtype=np.uint64)
        count += int(_sat_vector(tables, codes).sum())
        start = stop
    return count


def enumerate_models(formula: XnfFormula) -> list[tuple[int, ...]]:
    """All models in lexicographic order (intended for small n)."""
    _check_cap(formula)
    n = formula.num_vars
    tables = _clause_tables(formula)
    total = 1 << n
    out = []
    start = 0
    while start < total:
        stop = min(start + _BLOCK, total)
        codes = np.arange(start, stop, dtype=np.uint64)
        sat = _sat_vector(tables, codes)
        for code in codes[sat]:
            out.append(_code_to_model(int(code), n))
        start = stop
    return out
