"""Graph-based DPLL solving of 2-XNF formulas.

The search keeps an implication graph structure, alternates cycle-removing
propagation with trivial-failed-lineral in-processing, and branches on a
decision (L0, L1): a pair of lineral sets such that every model satisfies
all of L0 or all of L1.  Backtracking restores a snapshot of the IGS.
"""

from __future__ import annotations

import gc
import time
from dataclasses import dataclass, field
from typing import Callable, Optional

from .gf2 import Lineral
from .igs import Igs, _descendant_encs, _sources, cr_ggcp, preprocess, tfls, trivial_igs
from .xnf import XnfFormula

SAT = "SAT"
UNSAT = "UNSAT"
TIMEOUT = "TIMEOUT"

_PATH_CAP = 1 << 62  # path counts saturate; only the argmax matters


@dataclass
class Decision:
    """Branch alternatives: insert all of l0, or on backtrack all of l1."""

    l0: list[Lineral]
    l1: list[Lineral]


@dataclass
class SolveStats:
    decisions: int = 0
    propagations: int = 0
    learned: int = 0
    peak_depth: int = 0
    seconds: float = 0.0


@dataclass
class SolverConfig:
    heuristic: str = "maxbottleneck"
    extended_igs: bool = False
    preprocess: bool = False
    edge_extension: bool = False
    use_tfls: bool = True
    timeout: Optional[float] = None
    check_decisions: bool = False  # enumerate decision completeness (tests only)


@dataclass
class SolveResult:
    status: str
    model: Optional[tuple[int, ...]] = None
    stats: SolveStats = field(default_factory=SolveStats)


def verify_model(formula: XnfFormula, assignment) -> bool:
    """True iff every clause has a lineral evaluating to 1 under assignment."""
    if len(assignment) != formula.num_vars:
        raise ValueError(
            f"assignment length {len(assignment)} != num_vars {formula.num_vars}"
        )
    amask = 0
    for i, bit in enumerate(assignment):
        if bit:
            amask |= 1 << (i + 1)
    for clause in formula.clauses:
        sat = False
        for lin in clause:
            val = (lin.enc & 1) ^ (((lin.enc & ~1) & amask).bit_count() & 1)
            if val:
                sat = True
                break
        if not sat:
            return False
    return True


# -- decision heuristics ---------------------------------------------------


def _paths_from(succ: dict[int, set[int]], order: list[int]) -> dict[int, int]:
    p: dict[int, int] = {}
    for v in reversed(order):
        total = 1
        for w in succ[v]:
            total += p[w]
        p[v] = total if total < _PATH_CAP else _PATH_CAP
    return p


def _paths_to(succ: dict[int, set[int]], order: list[int]) -> dict[int, int]:
    q = {v: 1 for v in order}
    for v in order:
        qv = q[v]
        for w in succ[v]:
            total = q[w] + qv
            q[w] = total if total < _PATH_CAP else _PATH_CAP
    return q


def _require_graph(igs: Igs) -> tuple[list[int], list[int]]:
    if not igs.succ:
        raise ValueError("decision heuristics need a nonempty implication graph")
    from .igs import _ordered

    return _ordered(igs, "decision heuristics need an acyclic graph")


def _decide_maxreach_enc(igs: Igs) -> tuple[list[int], list[int]]:
    order, sources = _require_graph(igs)
    if sources is None:
        sources = _sources(igs)
    succ = igs.succ
    p = _paths_from(succ, order)
    best = sources[0]
    best_p = p[best]
    for u in sources[1:]:
        pu = p[u]
        if pu > best_p or (pu == best_p and u < best):
            best, best_p = u, pu
    return _descendant_encs(igs, best), [best ^ 1]


def _decide_maxbottleneck_enc(igs: Igs) -> tuple[list[int], list[int]]:
    order, _sources = _require_graph(igs)
    succ = igs.succ
    p = _paths_from(succ, order)
    # skew symmetry mirrors every path, so the number of paths ending at u
    # equals the number starting at u+1 and one sweep scores everything
    best = order[0]
    best_score = p[best] + p[best ^ 1]
    for u in order:
        score = p[u] + p[u ^ 1]
        if score > best_score or (score == best_score and u < best):
            best, best_score = u, score
    return _descendant_encs(igs, best), _descendant_encs(igs, best ^ 1)


def _decide_maxpath_enc(igs: Igs) -> tuple[list[int], list[int]]:
    order, _sources = _require_graph(igs)
    succ = igs.succ
    length: dict[int, int] = {}
    nxt: dict[int, Optional[int]] = {}
    for v in reversed(order):
        best_w = None
        best_len = 0
        for w in succ[v]:
            lw = length[w]
            if lw > best_len or (lw == best_len and best_w is not None and w < best_w):
                best_len = lw
                best_w = w
        length[v] = 1 + best_len
        nxt[v] = best_w
    start = order[0]
    best_len = length[start]
    for u in order:
        lu = length[u]
        if lu > best_len or (lu == best_len and u < start):
            start, best_len = u, lu
    path = [start]
    while nxt[path[-1]] is not None:
        path.append(nxt[path[-1]])
    l0 = [path[0] ^ f for f in path[1:]]
    return l0, [path[0] ^ 1, path[-1]]


def decide_maxreach(igs: Igs) -> Decision:
    """Branch on the source with the most outgoing paths: (D_f, {f+1})."""
    l0, l1 = _decide_maxreach_enc(igs)
    return Decision([Lineral.from_enc(v) for v in l0], [Lineral.from_enc(v) for v in l1])


def decide_maxbottleneck(igs: Igs) -> Decision:
    """Branch on the vertex maximizing paths-through: (D_f, D_{f+1})."""
    l0, l1 = _decide_maxbottleneck_enc(igs)
    return Decision([Lineral.from_enc(v) for v in l0], [Lineral.from_enc(v) for v in l1])


def decide_maxpath(igs: Igs) -> Decision:
    """Collapse a longest path f1 -> ... -> fr into one guess:
    ({f1+fi : i >= 2}, {f1+1, fr})."""
    l0, l1 = _decide_maxpath_enc(igs)
    return Decision([Lineral.from_enc(v) for v in l0], [Lineral.from_enc(v) for v in l1])


_HEURISTICS: dict[str, Callable[[Igs], Decision]] = {
    "maxreach": decide_maxreach,
    "maxbottleneck": decide_maxbottleneck,
    "maxpath": decide_maxpath,
}

_HEURISTICS_ENC: dict[str, Callable[[Igs], tuple[list[int], list[int]]]] = {
    "maxreach": _decide_maxreach_enc,
    "maxbottleneck": _decide_maxbottleneck_enc,
    "maxpath": _decide_maxpath_enc,
}


def _assert_decision_complete(formula: XnfFormula, igs: Igs, decision: Decision) -> None:
    """Enumerate models of the current sub-ideal and check that each one
    satisfies all of L0 or all of L1 (desk-scale test hook)."""
    n = formula.num_vars
    rows = igs.lin.rows()
    for code in range(1 << n):
        a = tuple((code >> (n - i)) & 1 for i in range(1, n + 1))
        if not verify_model(formula, a):
            continue
        if any(r.evaluate(a) for r in rows):
            continue
        ok0 = all(l.evaluate(a) == 0 for l in decision.l0)
        ok1 = all(l.evaluate(a) == 0 for l in decision.l1)
        if not (ok0 or ok1):
            raise AssertionError(f"incomplete decision at model {a}")


def dpll_solve(formula: XnfFormula, config: Optional[SolverConfig] = None) -> SolveResult:
    """Decide satisfiability of a 2-XNF formula; SAT models are verified
    against the input before they are returned."""
    cfg = config or SolverConfig()
    if formula.max_clause_width > 2:
        raise ValueError("dpll_solve requires a 2-XNF input (use xnf_to_2xnf first)")
    try:
        heuristic = _HEURISTICS_ENC[cfg.heuristic]
    except KeyError:
        raise ValueError(f"unknown heuristic {cfg.heuristic!r}") from None
    # the search allocates heavily but never builds reference cycles;
    # keeping the generational collector out of the loop is a real win
    gc_was_enabled = gc.isenabled()
    if gc_was_enabled:
        gc.disable()
    try:
        return _search(formula, cfg, heuristic)
    finally:
        if gc_was_enabled:
            gc.enable()


def _search(formula: XnfFormula, cfg: SolverConfig, heuristic) -> SolveResult:
    stats = SolveStats()
    t0 = time.perf_counter()
    deadline = t0 + cfg.timeout if cfg.timeout is not None else None

    def finish(status: str, model=None) -> SolveResult:
        stats.seconds = time.perf_counter() - t0
        return SolveResult(status, model, stats)

    igs = trivial_igs(formula, extended=cfg.extended_igs)
    if cfg.preprocess:
        preprocess(igs, edge_extension=cfg.edge_extension, stats=stats)
    # alternatives: snapshots taken before applying L0, plus the pending L1
    trail: list[tuple[tuple, list[int]]] = []
    while True:
        if deadline is not None and time.perf_counter() > deadline:
            return finish(TIMEOUT)
        cr_ggcp(igs, stats)
        if not igs.lin.inconsistent and cfg.use_tfls:
            failed = tfls(igs)
            if failed:
                for f in failed:
                    if igs.lin.insert_enc(f.enc ^ 1):
                        stats.learned += 1
                continue
        if not igs.lin.inconsistent and not igs.succ:
            model = igs.lin.solve(formula.num_vars)
            if model is None or not verify_model(formula, model):
                raise RuntimeError("internal error: model failed verification")
            return finish(SAT, model)
        if igs.lin.inconsistent:
            if not trail:
                return finish(UNSAT)
            snap, l1 = trail.pop()
            igs.restore(snap)
            for e in l1:
                igs.lin.insert_enc(e)
            continue
        l0, l1 = heuristic(igs)
        if cfg.check_decisions and formula.num_vars <= 12:
            decision = Decision(
                [Lineral.from_enc(v) for v in l0], [Lineral.from_enc(v) for v in l1]
            )
            _assert_decision_complete(formula, igs, decision)
        stats.decisions += 1
        trail.append((igs.snapshot(), l1))
        if len(trail) > stats.peak_depth:
            stats.peak_depth = len(trail)
        lin_insert = igs.lin.insert_enc
        for e in l0:
            lin_insert(e)
