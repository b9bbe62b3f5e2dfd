"""Conversions into 2-XNF: k-XNF clause splitting, ANF lowering with fresh
product variables, quadratic-optimized lowering via substitution search,
relation sharing across a polynomial system, and vanishing quadrics of
point sets."""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from typing import Iterable, Optional, Sequence

from .anf import AnfPoly
from .gf2 import Lineral, kernel_basis
from .xnf import XnfClause, XnfFormula

DEFAULT_BUDGET = 1000
DEFAULT_SEED = 0xC0FFEE


@dataclass
class Quadratization:
    """Record of fresh product variables: substitutions[k] = (y, l1, l2)
    states that variable y was introduced as the product l1*l2."""

    base_vars: int
    substitutions: list[tuple[int, Lineral, Lineral]] = field(default_factory=list)

    @property
    def fresh_vars(self) -> int:
        return len(self.substitutions)

    @property
    def total_vars(self) -> int:
        return self.base_vars + len(self.substitutions)

    def map_lines(self) -> list[str]:
        return [
            f"y{y} = {l1.token()} * {l2.token()}" for y, l1, l2 in self.substitutions
        ]


def _product_clause(p: int, q: int) -> XnfClause:
    """XNF clause asserting the polynomial product p*q vanishes."""
    return (Lineral.from_enc(p ^ 1), Lineral.from_enc(q ^ 1))


def _unit_clause(p: int) -> XnfClause:
    """XNF clause asserting the linear polynomial p vanishes."""
    return (Lineral.from_enc(p ^ 1),)


def xnf_to_2xnf(formula: XnfFormula) -> XnfFormula:
    """Split every clause with more than two linerals using fresh variables.

    A clause L1 v L2 v ... v Ls becomes (Y v L3 v ... v Ls) plus the pair
    (Y v -L2), (-(Y + L1) v L2); repeated until all clauses have width <= 2.
    Each width-k clause consumes at most k-2 fresh variables.
    """
    next_var = formula.num_vars
    out: list[XnfClause] = []
    for clause in formula.clauses:
        work = list(clause)
        while len(work) > 2:
            l1, l2 = work[0], work[1]
            next_var += 1
            y = Lineral((next_var,))
            out.append((y, l2.negated()))
            out.append(((y + l1).negated(), l2))
            work = [y] + work[2:]
        out.append(tuple(work))
    return XnfFormula(next_var, out)


def lineral_product_anf(a: Lineral, b: Lineral) -> AnfPoly:
    """Expand the product of two linear polynomials to ANF (x*x = x)."""
    sa, sb = a.support, b.support
    terms: set[frozenset] = set()
    for i in sa:
        for j in sb:
            terms ^= {frozenset((i, j))}  # i == j collapses to the linear term
    if a.const:
        for j in sb:
            terms ^= {frozenset((j,))}
    if b.const:
        for i in sa:
            terms ^= {frozenset((i,))}
    if a.const and b.const:
        terms ^= {frozenset()}
    poly = AnfPoly.__new__(AnfPoly)
    poly.terms = frozenset(terms)
    return poly


def _quad_support(a: Lineral, b: Lineral) -> frozenset:
    """Quadratic terms of the product a*b."""
    terms: set[frozenset] = set()
    for i in a.support:
        for j in b.support:
            if i != j:
                terms ^= {frozenset((i, j))}
    return frozenset(terms)


def _linear_tail_clause(terms: frozenset) -> Optional[XnfClause]:
    """Unit clause for a residual polynomial of degree <= 1 (None if zero)."""
    enc = 0
    for t in terms:
        if len(t) == 0:
            enc ^= 1
        elif len(t) == 1:
            enc ^= 1 << next(iter(t))
        else:
            raise ValueError("residual polynomial is not linear")
    if enc == 0:
        return None
    if enc == 1:
        return ()  # the constant 1 must vanish: empty clause, unsatisfiable
    return _unit_clause(enc)


def anf_to_2xnf(
    f: AnfPoly, num_vars: Optional[int] = None
) -> tuple[list[XnfClause], Quadratization]:
    """Lower a Boolean polynomial to clauses by substituting variable pairs.

    Every term is peeled two-smallest-variables-first: t = x_a*x_b*s turns
    into y*s with the product pair recorded as y(x_b+1), x_b(x_a+y).  Terms
    are processed degree-descending, then lexicographically.  A polynomial
    that is a single term of degree two is emitted directly as a product
    clause without a fresh variable.
    """
    n = num_vars if num_vars is not None else max(f.variables(), default=0)
    if f.variables() and max(f.variables()) > n:
        raise ValueError("num_vars smaller than the polynomial's support")
    quad = Quadratization(n)
    clauses: list[XnfClause] = []
    single_product = len(f.terms) == 1 and f.degree() >= 2
    next_var = n
    tail: set[frozenset] = set()
    ordered = sorted(f.terms, key=lambda t: (-len(t), sorted(t)))
    for term in ordered:
        t = sorted(term)
        floor = 2 if single_product else 1
        while len(t) > floor:
            a, b = t[0], t[1]
            next_var += 1
            la, lb, y = Lineral((a,)), Lineral((b,)), Lineral((next_var,))
            quad.substitutions.append((next_var, la, lb))
            clauses.append(_product_clause(y.enc, lb.enc ^ 1))
            clauses.append(_product_clause(lb.enc, la.enc ^ y.enc))
            t = sorted(t[2:] + [next_var])
        if single_product:
            clauses.append(_product_clause(1 << t[0], 1 << t[1]))
        else:
            tail ^= {frozenset(t)}
    if not single_product:
        last = _linear_tail_clause(frozenset(tail))
        if last is not None:
            clauses.append(last)
    return clauses, quad


def find_substitution(
    f: AnfPoly, budget: int = DEFAULT_BUDGET, seed: int = DEFAULT_SEED
) -> tuple[Lineral, Lineral]:
    """Search for a pair (l1, l2) whose product cancels as many quadratic
    terms of f as possible.

    Candidates are seeded by the per-variable factorizations f = x_i*l_i + g_i
    and improved by randomized pairwise combining: the union of the first
    factors' supports times the intersection of the second factors' supports
    again yields a product supported inside f.  Ties are broken by fewer
    support variables, then by the lexicographically smallest pair.
    """
    quad = f.quadratic_terms()
    if not quad:
        raise ValueError("polynomial has no quadratic term")
    linear_vars = {next(iter(t)) for t in f.terms if len(t) == 1}
    cofactors: dict[int, int] = {}
    for t in quad:
        i, j = sorted(t)
        cofactors[i] = cofactors.get(i, 0) ^ (1 << j)
        cofactors[j] = cofactors.get(j, 0) ^ (1 << i)
    pool: list[tuple[int, int]] = []
    seen: set[tuple[int, int]] = set()

    def score(a: int, b: int) -> Optional[tuple[int, int, tuple[int, int]]]:
        cancelled = _quad_support(Lineral.from_enc(a), Lineral.from_enc(b))
        if not cancelled or not cancelled <= quad:
            return None
        support_size = (a >> 1).bit_count() + (b >> 1).bit_count()
        return (-len(cancelled), support_size, (a, b))

    best_key = None
    best_pair: Optional[tuple[int, int]] = None

    def offer(a: int, b: int) -> None:
        # factor order is free (the product identity is symmetric); keep the
        # smaller factor first for deterministic output
        nonlocal best_key, best_pair
        if a > b:
            a, b = b, a
        if (a, b) in seen:
            return
        s = score(a, b)
        if s is None:
            return
        seen.add((a, b))
        pool.append((a, b))
        if best_key is None or s < best_key:
            best_key = s
            best_pair = (a, b)

    for i in sorted(cofactors):
        ell = cofactors[i] | (1 if i in linear_vars else 0)
        offer(1 << i, ell)
    rng = random.Random(seed)
    for _ in range(budget):
        if len(pool) < 2:
            break
        a1, a2 = pool[rng.randrange(len(pool))]
        b1, b2 = pool[rng.randrange(len(pool))]
        if rng.getrandbits(1):
            a1, a2 = a2, a1
        if rng.getrandbits(1):
            b1, b2 = b2, b1
        m1 = a1 | b1  # union of supports, constant term included
        m2 = a2 & b2  # intersection of supports, constant term included
        if m1 <= 1 or m2 <= 1:
            continue
        offer(m1, m2)
    assert best_pair is not None
    return Lineral.from_enc(best_pair[0]), Lineral.from_enc(best_pair[1])


def qanf_to_2xnf(
    f: AnfPoly,
    num_vars: Optional[int] = None,
    budget: int = DEFAULT_BUDGET,
    seed: int = DEFAULT_SEED,
) -> tuple[list[XnfClause], Quadratization]:
    """Lower a quadratic polynomial with as few fresh variables as the
    substitution search manages: each round removes at least one quadratic
    term, so at most n-1 fresh variables are used in total."""
    if f.degree() > 2:
        raise ValueError("qanf_to_2xnf requires degree <= 2")
    n = num_vars if num_vars is not None else max(f.variables(), default=0)
    if f.variables() and max(f.variables()) > n:
        raise ValueError("num_vars smaller than the polynomial's support")
    quad = Quadratization(n)
    clauses, cur, next_var = _qanf_lower(f, n, quad, budget, random.Random(seed))
    tail = _linear_tail_clause(cur.terms)
    if tail is not None:
        clauses.append(tail)
    return clauses, quad


def _qanf_lower(
    f: AnfPoly,
    next_var: int,
    quad: Quadratization,
    budget: int,
    rng: random.Random,
) -> tuple[list[XnfClause], AnfPoly, int]:
    clauses: list[XnfClause] = []
    cur = f
    while cur.degree() == 2:
        l1, l2 = find_substitution(cur, budget, rng.randrange(1 << 30))
        before = len(cur.quadratic_terms())
        next_var += 1
        y = Lineral((next_var,))
        quad.substitutions.append((next_var, l1, l2))
        clauses.append(_product_clause(y.enc, l2.enc ^ 1))
        clauses.append(_product_clause(l2.enc, l1.enc ^ y.enc))
        cur = cur + lineral_product_anf(l1, l2) + AnfPoly([[next_var]])
        if len(cur.quadratic_terms()) >= before:
            raise RuntimeError("substitution failed to remove a quadratic term")
    return clauses, cur, next_var


def system_to_2xnf(
    polys: Sequence[AnfPoly],
    num_vars: Optional[int] = None,
    share_relations: bool = True,
    budget: int = DEFAULT_BUDGET,
    seed: int = DEFAULT_SEED,
) -> tuple[XnfFormula, Quadratization]:
    """Convert a polynomial system: the quadratic route for deg <= 2, the
    general route otherwise, with all substitutions pooled.

    With share_relations, substituted products are compared after sorting
    the factor pair; identical products y_i = l1*l2 = y_j yield the relation
    y_i + y_j, appended as a unit clause.
    """
    n = num_vars if num_vars is not None else max(
        (max(p.variables(), default=0) for p in polys), default=0
    )
    quad = Quadratization(n)
    rng = random.Random(seed)
    clauses: list[XnfClause] = []
    next_var = n
    for poly in polys:
        if max(poly.variables(), default=0) > n:
            raise ValueError("num_vars smaller than a polynomial's support")
        if poly.degree() <= 2:
            sub_quad = Quadratization(next_var)
            new_clauses, cur, next_var = _qanf_lower(
                poly, next_var, sub_quad, budget, rng
            )
            clauses.extend(new_clauses)
            tail = _linear_tail_clause(cur.terms)
            if tail is not None:
                clauses.append(tail)
            quad.substitutions.extend(sub_quad.substitutions)
        else:
            shifted, sub_quad = anf_to_2xnf(poly, num_vars=next_var)
            clauses.extend(shifted)
            quad.substitutions.extend(sub_quad.substitutions)
            next_var += sub_quad.fresh_vars
    if share_relations:
        first_of: dict[tuple[int, int], int] = {}
        for y, l1, l2 in quad.substitutions:
            key = (min(l1.enc, l2.enc), max(l1.enc, l2.enc))
            prev = first_of.get(key)
            if prev is None:
                first_of[key] = y
            else:
                clauses.append(_unit_clause((1 << prev) ^ (1 << y)))
    return XnfFormula(next_var, clauses), quad


def vanishing_quadrics(points: Sequence[Sequence[int]]) -> list[AnfPoly]:
    """Basis of the degree <= 2 polynomials vanishing on all given points,
    from the kernel of the evaluation matrix (columns 1, x_i, x_i x_j)."""
    if not points:
        raise ValueError("need at least one point")
    k = len(points[0])
    if k > 16:
        raise ValueError("vanishing_quadrics capped at 16 coordinates")
    monomials: list[tuple[int, ...]] = [()]
    monomials += [(i,) for i in range(1, k + 1)]
    monomials += [(i, j) for i in range(1, k + 1) for j in range(i + 1, k + 1)]
    rows = []
    for p in points:
        if len(p) != k:
            raise ValueError("points must have equal length")
        row = 0
        for idx, mono in enumerate(monomials):
            if all(p[v - 1] for v in mono):
                row |= 1 << idx
        rows.append(row)
    basis = kernel_basis(rows, len(monomials))
    polys = []
    for vec in basis:
        terms = [monomials[i] for i in range(len(monomials)) if (vec >> i) & 1]
        polys.append(AnfPoly(terms))
    return polys
