"""Exporters from 2-XNF to DIMACS CNF-XOR ('x' lines) and to plain CNF.

A two-lineral clause L1 v L2 becomes a binary clause on proxy variables
tied to the linerals by XOR constraints; single-literal linerals are used
directly.  Proxies are numbered after num_vars in deterministic clause
order and shared between linerals with equal support.  The plain CNF
export splits every XOR constraint with chaining variables until each
piece involves at most `cutting` variables, then expands each piece into
its 2^(k-1) sign-pattern clauses.
"""

from __future__ import annotations

from itertools import combinations

from .gf2 import Lineral
from .xnf import XnfFormula

# an export item is ("cnf", [signed literals]) or ("xor", lineral enc asserted true)
Items = list[tuple[str, object]]


def _support_bits(enc: int) -> list[int]:
    out = []
    bits = enc >> 1
    v = 1
    while bits:
        if bits & 1:
            out.append(v)
        bits >>= 1
        v += 1
    return out


def _cnfxor_items(formula: XnfFormula) -> tuple[int, Items]:
    if formula.max_clause_width > 2:
        raise ValueError("export requires a 2-XNF input")
    next_var = formula.num_vars
    proxy: dict[int, int] = {}  # support mask -> proxy variable
    items: Items = []

    def literal_for(lin: Lineral) -> int:
        nonlocal next_var
        sup = lin.enc & ~1
        if sup.bit_count() == 1:
            v = sup.bit_length() - 1
            return -v if lin.enc & 1 else v
        y = proxy.get(sup)
        if y is None:
            next_var += 1
            y = proxy[sup] = next_var
            # tie y <-> XOR(support): assert the lineral  1 + y + sum(support)
            items.append(("xor", sup | (1 << y) | 1))
        return -y if lin.enc & 1 else y

    for clause in formula.clauses:
        if not clause:
            items.append(("cnf", []))
        elif len(clause) == 1:
            lin = clause[0]
            if (lin.enc & ~1).bit_count() == 1:
                items.append(("cnf", [literal_for(lin)]))
            else:
                items.append(("xor", lin.enc))
        else:
            items.append(("cnf", [literal_for(clause[0]), literal_for(clause[1])]))
    return next_var, items


def _xor_line(enc: int) -> str:
    sup = _support_bits(enc)
    toks = [str(v) for v in sup]
    if enc & 1:
        toks[0] = "-" + toks[0]
    return "x " + " ".join(toks) + " 0"


def _cnf_line(lits: list[int]) -> str:
    return " ".join(str(l) for l in lits) + " 0" if lits else "0"


def export_cnfxor(formula: XnfFormula) -> str:
    """DIMACS CNF body with 'x'-prefixed XOR clauses; satisfiability is
    preserved with a projection bijection onto the original variables."""
    total, items = _cnfxor_items(formula)
    lines = [f"p cnf {total} {len(items)}"]
    for kind, payload in items:
        lines.append(_xor_line(payload) if kind == "xor" else _cnf_line(payload))
    return "\n".join(lines) + "\n"


def _split_xor(sup: list[int], rhs: int, next_var: int, cutting: int):
    """Chain an XOR(sup) = rhs constraint into pieces of width <= cutting."""
    pieces = []
    work = list(sup)
    while len(work) > cutting:
        chunk, work = work[: cutting - 1], work[cutting - 1 :]
        next_var += 1
        pieces.append((chunk + [next_var], 0))
        work = [next_var] + work
    pieces.append((work, rhs))
    return pieces, next_var


def _expand_xor(piece: list[int], rhs: int) -> list[list[int]]:
    """Direct CNF encoding of XOR(piece) = rhs: one clause per sign pattern
    with an even (rhs=1) or odd (rhs=0) number of negations."""
    want = (rhs ^ 1) & 1
    out = []
    k = len(piece)
    for negs in range(k + 1):
        if negs % 2 != want:
            continue
        for neg_set in combinations(range(k), negs):
            mask = set(neg_set)
            out.append([-piece[i] if i in mask else piece[i] for i in range(k)])
    return out


def export_cnf(formula: XnfFormula, cutting: int = 5) -> str:
    """Pure CNF export, equisatisfiable with a projection bijection."""
    if cutting < 3:
        raise ValueError("cutting number must be >= 3")
    total, items = _cnfxor_items(formula)
    clauses: list[list[int]] = []
    for kind, payload in items:
        if kind == "cnf":
            clauses.append(payload)
            continue
        enc = payload
        sup = _support_bits(enc)
        rhs = (enc & 1) ^ 1  # asserted lineral: XOR(support) = 1 + constant
        pieces, total = _split_xor(sup, rhs, total, cutting)
        for piece, piece_rhs in pieces:
            if not piece:
                if piece_rhs == 1:
                    clauses.append([])
                continue
            clauses.extend(_expand_xor(piece, piece_rhs))
    lines = [f"p cnf {total} {len(clauses)}"]
    lines.extend(_cnf_line(c) for c in clauses)
    return "\n".join(lines) + "\n"
