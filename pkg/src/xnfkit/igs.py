"""Implication graph structures and their propagation machinery.

An IGS is a triple (L, V, E): an interreduced linear system L plus a
directed graph whose vertices are labeled with linerals.  An edge (f, g)
records that the product (f+1)g lies in the formula's ideal, i.e. that
membership of f forces membership of g.  The graph is kept skew-symmetric
((f+1, g) in E implies (g+1, f) in E) and free of self-loops; vertices are
identified by their encoded label, so equal reduced labels merge.
"""

from __future__ import annotations

from typing import Iterable, Iterator, Optional

from .gf2 import LinSystem, Lineral, _echelon_high
from .xnf import XnfFormula


class Igs:
    """Implication graph structure (L, V, E) over ``num_vars`` variables."""

    __slots__ = (
        "num_vars",
        "lin",
        "succ",
        "reduced_mask",
        "clean",
        "order_cache",
        "desc_cache",
    )

    def __init__(self, num_vars: int, lin: Optional[LinSystem] = None):
        self.num_vars = num_vars
        self.lin = lin if lin is not None else LinSystem()
        # complement-closed adjacency: every endpoint and its partner are keys
        self.succ: dict[int, set[int]] = {}
        # propagation bookkeeping: labels are reduced w.r.t. the pivots in
        # reduced_mask, and `clean` records that one full ggcp pass has run
        self.reduced_mask = 0
        self.clean = False
        # (topological order, sources) of the current graph when known acyclic
        self.order_cache: Optional[tuple[list[int], list[int]]] = None
        # descendant bitsets over the topological order, filled by tfls
        self.desc_cache: Optional[tuple[list[int], dict[int, int]]] = None

    # -- basic structure ---------------------------------------------------

    def vertex_count(self) -> int:
        return len(self.succ)

    def edge_count(self) -> int:
        return sum(len(vs) for vs in self.succ.values())

    def edges(self) -> Iterator[tuple[int, int]]:
        for u, vs in self.succ.items():
            for v in vs:
                yield (u, v)

    def vertex_labels(self) -> list[Lineral]:
        return [Lineral.from_enc(v) for v in sorted(self.succ)]

    def add_edge_pair(self, u: int, v: int) -> None:
        """Add edge u -> v and its skew partner v+1 -> u+1 (no self-loops).

        Mutates the adjacency in place; construction and pre-processing
        only.  During search the graph is replaced wholesale by ggcp, which
        is what makes snapshots cheap shared references.
        """
        if u == v:
            return
        succ = self.succ
        for w in (u, v, u ^ 1, v ^ 1):
            if w not in succ:
                succ[w] = set()
        succ[u].add(v)
        succ[v ^ 1].add(u ^ 1)
        self.clean = False
        self.order_cache = None
        self.desc_cache = None

    def snapshot(self):
        # the adjacency dict is never mutated in place once propagation has
        # run (ggcp swaps in a fresh dict), so sharing the reference is safe
        return (
            self.lin.copy(),
            self.succ,
            self.reduced_mask,
            self.clean,
            self.order_cache,
            self.desc_cache,
        )

    def restore(self, snap) -> None:
        # a snapshot is restored at most once, so its linear system copy
        # can be adopted directly
        (
            self.lin,
            self.succ,
            self.reduced_mask,
            self.clean,
            self.order_cache,
            self.desc_cache,
        ) = snap

    # -- diagnostics -------------------------------------------------------

    def is_acyclic(self) -> bool:
        return _is_acyclic(self.succ)

    def is_sigma_reduced(self) -> bool:
        """No pivot of L occurs in any vertex label."""
        piv_mask = 0
        for p in self.lin.pivots:
            piv_mask |= p
        return all((v & piv_mask) == 0 for v in self.succ)

    def check_invariants(self) -> None:
        succ = self.succ
        for u, vs in succ.items():
            if (u ^ 1) not in succ:
                raise AssertionError(f"complement of vertex {u} missing")
            for v in vs:
                if u == v:
                    raise AssertionError(f"self-loop at {u}")
                if v not in succ:
                    raise AssertionError(f"edge target {v} not a vertex")
                if (u ^ 1) not in succ[v ^ 1]:
                    raise AssertionError(f"skew partner of ({u}, {v}) missing")

    def to_dot(self) -> str:
        def name(v: int) -> str:
            return str(v) if v <= 1 else Lineral.from_enc(v).token()

        lines = ["digraph igs {"]
        for u in sorted(self.succ):
            if not self.succ[u]:
                lines.append(f'  "{name(u)}";')
            for v in sorted(self.succ[u]):
                lines.append(f'  "{name(u)}" -> "{name(v)}";')
        lines.append("}")
        return "\n".join(lines) + "\n"


def trivial_igs(formula: XnfFormula, extended: bool = False) -> Igs:
    """Build the (extended) trivial IGS of a 2-XNF formula.

    Unit clauses feed the linear system; each two-lineral clause with
    product fg contributes edges (f+1, g), (g+1, f), and in the extended
    variant four further edges through f+g and f+g+1.
    """
    igs = Igs(formula.num_vars)
    lin = igs.lin
    for clause in formula.clauses:
        if len(clause) > 2:
            raise ValueError("trivial_igs requires a 2-XNF input")
        if not clause:
            lin.insert_enc(1)
            continue
        if len(clause) == 1:
            lin.insert_enc(clause[0].enc ^ 1)
            continue
        f = clause[0].enc ^ 1
        g = clause[1].enc ^ 1
        igs.add_edge_pair(f ^ 1, g)
        if extended:
            h = f ^ g
            igs.add_edge_pair(f ^ 1, h ^ 1)
            igs.add_edge_pair(h, g)
    return igs


def ggcp(igs: Igs, stats=None) -> Igs:
    """Graph Gaussian constraint propagation: reduce labels modulo L,
    harvest forced linerals, iterate until the linear system stabilizes.

    Returns the same Igs, now sigma-reduced.  Per edge (f, g) with reduced
    labels f', g': f'=0 forces g'; g'=1 forces f'+1; f'=g'+1 makes the
    product equal g', which is learned as linear; other constant or equal
    labels drop the edge; the rest are kept with reduced labels.

    Labels already reduced against the current pivots are not touched
    again: only vertices mentioning a pivot learned since the last pass are
    re-reduced, and edges between untouched vertices are kept outright.
    """
    lin = igs.lin
    while True:
        if lin.inconsistent:
            igs.succ = {}
            igs.reduced_mask = lin.pivot_mask
            igs.clean = True
            igs.order_cache = None
            igs.desc_cache = None
            return igs
        succ = igs.succ
        new_mask = lin.pivot_mask & ~igs.reduced_mask
        full = not igs.clean
        if not full and not new_mask:
            return igs
        if stats is not None:
            stats.propagations += 1
        # labels come in complement pairs and reduce(u+1) = reduce(u)+1, so
        # one reduction per pair suffices; identity reductions are omitted
        changed: dict[int, int] = {}
        reduce_enc = lin.reduce_enc
        probe_mask = lin.pivot_mask if full else new_mask
        for u in succ:
            if u & probe_mask and not u & 1:
                r = reduce_enc(u)
                changed[u] = r
                if (u ^ 1) in succ:
                    changed[u ^ 1] = r ^ 1
        for u in succ:
            if u & probe_mask and u & 1 and u not in changed:
                changed[u] = reduce_enc(u)
        if not changed and not full:
            igs.reduced_mask = lin.pivot_mask
            return igs
        learned: list[int] = []
        new_succ: dict[int, set[int]] = {}
        shared: set[int] = set()  # keys borrowing their bucket from succ
        changed_get = changed.get
        changed_keys = changed.keys()
        # raw construction may hold constant labels or complement edges that
        # only the full case analysis cleans up; borrow buckets only on
        # incremental passes, where the invariants already hold
        borrow = not full
        anomaly = False
        cand: list[int] = []  # endpoints of dropped edges (isolation checks)
        for u, vs in succ.items():
            ru = changed_get(u)
            if ru is None:
                if borrow and changed_keys.isdisjoint(vs):
                    # neither the vertex nor any target moved: borrow as-is
                    prev = new_succ.get(u)
                    if prev:
                        prev.update(vs)  # merged-in edges landed here first
                    else:
                        new_succ[u] = vs
                        shared.add(u)
                    continue
                ru = u
            if ru == 0:
                # a vanished source forces every nonzero target
                anomaly = True
                for v in vs:
                    rv = changed_get(v, v)
                    if rv != 0:
                        learned.append(rv)
                        cand.append(rv)
                continue
            if ru == 1:
                # products with a true source are trivially zero
                anomaly = True
                for v in vs:
                    cand.append(changed_get(v, v))
                continue
            rum = ru ^ 1
            # materialize the key even if every edge drops, so that kept
            # edges elsewhere always find their target's entry
            bucket = new_succ.get(ru)
            if bucket is None:
                bucket = new_succ[ru] = set()
            elif ru in shared:
                bucket = set(bucket)
                new_succ[ru] = bucket
                shared.discard(ru)
            for v in vs:
                rv = changed_get(v, v)
                if rv > 1 and rv != ru and rv != rum:
                    bucket.add(rv)
                elif rv == 1:
                    anomaly = True
                    learned.append(rum)
                    cand.append(ru)
                elif rv == rum:
                    anomaly = True
                    learned.append(rv)  # the edge encodes rv itself
                    cand.append(ru)
                    cand.append(rum)
                else:
                    anomaly = True  # zero target or label merge collapse
                    cand.append(ru)
        if anomaly:
            for x in cand:
                if x <= 1:
                    continue
                bx = new_succ.get(x)
                if bx is not None and not bx:
                    bm = new_succ.get(x ^ 1)
                    if bm is not None and not bm:
                        del new_succ[x]
                        del new_succ[x ^ 1]
        prev_order = igs.order_cache
        igs.succ = new_succ
        igs.reduced_mask = lin.pivot_mask
        igs.clean = True
        igs.order_cache = None
        igs.desc_cache = None
        if not anomaly and prev_order is not None and len(new_succ) == len(succ):
            # injective relabeling of all vertices: the shape is unchanged,
            # so the old topological order carries over
            old_order, old_sources = prev_order
            order = [changed_get(x, x) for x in old_order]
            sources = (
                None
                if old_sources is None
                else [changed_get(x, x) for x in old_sources]
            )
            igs.order_cache = (order, sources)
        if not learned:
            return igs
        grew = False
        for e in learned:
            if lin.insert_enc(e):
                grew = True
                if stats is not None:
                    stats.learned += 1
        if not grew:
            return igs


def _descendant_encs(igs: Igs, v: int) -> list[int]:
    """Sorted labels of D_v, decoded from the cached bitsets when present."""
    cache = igs.desc_cache
    if cache is not None:
        order, down = cache
        mask = down.get(v)
        if mask is not None:
            out = []
            while mask:
                low = mask & -mask
                out.append(order[low.bit_length() - 1])
                mask ^= low
            out.sort()
            return out
    return sorted(_reach(igs.succ, v))


def _reach(adj: dict[int, set[int]], start: int) -> set[int]:
    """Vertices reachable from start, including start itself."""
    seen = {start}
    frontier = [start]
    while frontier:
        nxt = []
        for u in frontier:
            for v in adj.get(u, ()):
                if v not in seen:
                    seen.add(v)
                    nxt.append(v)
        frontier = nxt
    return seen


def _predecessors(succ: dict[int, set[int]]) -> dict[int, set[int]]:
    pred: dict[int, set[int]] = {u: set() for u in succ}
    for u, vs in succ.items():
        for v in vs:
            pred[v].add(u)
    return pred


def _is_acyclic(succ: dict[int, set[int]]) -> bool:
    indeg = {u: 0 for u in succ}
    for vs in succ.values():
        for v in vs:
            indeg[v] += 1
    queue = [u for u, d in indeg.items() if d == 0]
    done = 0
    while queue:
        u = queue.pop()
        done += 1
        for v in succ[u]:
            indeg[v] -= 1
            if indeg[v] == 0:
                queue.append(v)
    return done == len(succ)


def scc_components_enc(succ: dict[int, set[int]]) -> list[list[int]]:
    """Strongly connected components (iterative Tarjan, deterministic order)."""
    index: dict[int, int] = {}
    low: dict[int, int] = {}
    onstack: set[int] = set()
    stack: list[int] = []
    comps: list[list[int]] = []
    counter = 0
    for root in sorted(succ):
        if root in index:
            continue
        index[root] = low[root] = counter
        counter += 1
        stack.append(root)
        onstack.add(root)
        work: list[tuple[int, Iterator[int]]] = [(root, iter(sorted(succ[root])))]
        while work:
            v, it = work[-1]
            pushed = False
            for w in it:
                if w not in index:
                    index[w] = low[w] = counter
                    counter += 1
                    stack.append(w)
                    onstack.add(w)
                    work.append((w, iter(sorted(succ[w]))))
                    pushed = True
                    break
                if w in onstack:
                    if index[w] < low[v]:
                        low[v] = index[w]
            if pushed:
                continue
            work.pop()
            if work:
                parent = work[-1][0]
                if low[v] < low[parent]:
                    low[parent] = low[v]
            if low[v] == index[v]:
                comp = []
                while True:
                    w = stack.pop()
                    onstack.discard(w)
                    comp.append(w)
                    if w == v:
                        break
                comps.append(comp)
    return comps


def _scc_learned_enc(succ: dict[int, set[int]]) -> tuple[list[list[int]], list[int], bool]:
    comps = scc_components_enc(succ)
    learned: list[int] = []
    for comp in comps:
        if len(comp) < 2:
            continue
        rep = min(comp)
        for f in comp:
            if f != rep:
                learned.append(rep ^ f)
    return comps, learned, len(comps) % 2 == 1


def scc_condense(igs: Igs) -> tuple[list[list[Lineral]], list[Lineral], bool]:
    """SCCs of the graph, the linerals f_1+f_i they force, and whether the
    component count is odd (which certifies unsatisfiability)."""
    comps, learned, odd = _scc_learned_enc(igs.succ)
    comp_labels = [[Lineral.from_enc(v) for v in sorted(c)] for c in comps]
    return comp_labels, [Lineral.from_enc(e) for e in learned], odd


def _try_topo(succ: dict[int, set[int]]) -> Optional[tuple[list[int], list[int]]]:
    """(topological order, sources), or None when the graph has a cycle."""
    indeg = {u: 0 for u in succ}
    for vs in succ.values():
        for v in vs:
            indeg[v] += 1
    stack = [u for u, d in indeg.items() if d == 0]
    sources = list(stack)
    order: list[int] = []
    while stack:
        u = stack.pop()
        order.append(u)
        for v in succ[u]:
            d = indeg[v] - 1
            indeg[v] = d
            if d == 0:
                stack.append(v)
    if len(order) != len(succ):
        return None
    return order, sources


def _topo_order_or_raise(succ: dict[int, set[int]], msg: str) -> list[int]:
    topo = _try_topo(succ)
    if topo is None:
        raise ValueError(msg)
    return topo[0]


def _ordered(igs: Igs, msg: str) -> tuple[list[int], Optional[list[int]]]:
    cache = igs.order_cache
    if cache is None:
        cache = _try_topo(igs.succ)
        if cache is None:
            raise ValueError(msg)
        igs.order_cache = cache
    return cache


def _sources(igs: Igs) -> list[int]:
    """Sources of the current graph, filling the lazy slot of the cache."""
    order, sources = igs.order_cache
    if sources is None:
        succ = igs.succ
        with_in = set()
        for vs in succ.values():
            with_in |= vs
        sources = [u for u in succ if u not in with_in]
        igs.order_cache = (order, sources)
    return sources


def cr_ggcp(igs: Igs, stats=None) -> Igs:
    """Alternate ggcp and SCC condensation until no cycle information is
    left; the result is sigma-reduced and acyclic.  An odd component count
    flags the system inconsistent immediately."""
    lin = igs.lin
    while True:
        ggcp(igs, stats)
        if lin.inconsistent:
            return igs
        if not igs.succ:
            return igs
        if igs.order_cache is None:
            igs.order_cache = _try_topo(igs.succ)
        if igs.order_cache is not None:
            # acyclic means all components are singletons; skew pairing
            # keeps their count even, so there is nothing to learn
            return igs
        _comps, learned, odd = _scc_learned_enc(igs.succ)
        if odd:
            lin.inconsistent = True
            igs.succ = {}
            igs.order_cache = None
            return igs
        for e in learned:
            if lin.insert_enc(e) and stats is not None:
                stats.learned += 1


def tfls(igs: Igs) -> list[Lineral]:
    """Trivial failed lineral search on an acyclic IGS.

    Returns every vertex f whose descendants contain a complementary pair
    {g, g+1} (including f -> f+1); for each returned f the lineral f+1
    belongs to the formula's ideal.  One reverse-topological sweep carries
    two bitsets per vertex, the descendant set D_f and its complement image
    {g+1 : g in D_f}; f has a witness pair exactly when they intersect.
    """
    succ = igs.succ
    if not succ:
        return []
    order, _sources = _ordered(igs, "tfls requires an acyclic implication graph")
    idx = {v: i for i, v in enumerate(order)}
    down: dict[int, int] = {}
    mirrored: dict[int, int] = {}
    failed: list[int] = []
    for u in reversed(order):
        d = 1 << idx[u]
        m = 1 << idx[u ^ 1]
        for v in succ[u]:
            d |= down[v]
            m |= mirrored[v]
        down[u] = d
        mirrored[u] = m
        if d & m:
            failed.append(u)
    igs.desc_cache = (order, down)
    failed.sort()
    return [Lineral.from_enc(e) for e in failed]


def _span_intersection(enc_a: Iterable[int], enc_b: Iterable[int]) -> list[int]:
    """Basis of span(A) intersect span(B) by elimination on stacked rows."""
    a = list(enc_a)
    b = list(enc_b)
    width = max((e.bit_length() for e in a + b), default=1)
    stacked = [(e << width) | e for e in a] + [e << width for e in b]
    piv = _echelon_high(stacked)
    mask = (1 << width) - 1
    return sorted(row & mask for h, row in piv.items() if h < width and row & mask)


def _shifted_meet_nonempty(enc_a: Iterable[int], enc_b: Iterable[int]) -> bool:
    """Whether span(A) meets 1 + span(B), i.e. 1 lies in span(A) + span(B)."""
    sys = LinSystem()
    for e in enc_a:
        sys.insert_enc(e)
    for e in enc_b:
        sys.insert_enc(e)
    return sys.inconsistent


def preprocess(igs: Igs, edge_extension: bool = False, stats=None) -> Igs:
    """Pre-processing: repeat { ggcp; learn a basis of every descendant-space
    intersection D(f) cap D(f+1); optionally extend edges from nonempty
    shifted meets } until a fixpoint is reached.

    With edge_extension, a pair f, g (g != f+1) whose spaces satisfy
    D(f) cap (1 + D(g)) != empty yields the product (f+1)(g+1) in the ideal,
    added as the edge pair (f, g+1), (g, f+1).  On acyclic graphs only
    source pairs are probed first; descendant pairs are examined only below
    intersecting sources.
    """
    while True:
        ggcp(igs, stats)
        if igs.lin.inconsistent or not igs.succ:
            return igs
        succ = igs.succ
        desc = {v: _reach(succ, v) for v in succ}
        progress = False
        for v in sorted(succ):
            if v > (v ^ 1):
                continue  # the intersection is symmetric in f and f+1
            basis = _span_intersection(desc[v], desc[v ^ 1])
            for e in basis:
                if igs.lin.insert_enc(e):
                    progress = True
                    if stats is not None:
                        stats.learned += 1
        if igs.lin.inconsistent:
            igs.succ = {}
            return igs
        if edge_extension:
            new_edges = _extension_edges(succ, desc)
            for u, v in new_edges:
                if v not in succ.get(u, ()):
                    igs.add_edge_pair(u, v)
                    progress = True
        if not progress:
            return igs


def _extension_edges(
    succ: dict[int, set[int]], desc: dict[int, set[int]]
) -> list[tuple[int, int]]:
    verts = sorted(succ)
    checked: set[tuple[int, int]] = set()
    out: list[tuple[int, int]] = []

    def probe(f: int, g: int) -> None:
        key = (f, g) if f <= g else (g, f)
        if key in checked or g == (f ^ 1):
            return
        checked.add(key)
        if _shifted_meet_nonempty(desc[f], desc[g]):
            out.append((f, g ^ 1))
            out.append((g, f ^ 1))

    if _is_acyclic(succ):
        pred = _predecessors(succ)
        sources = [u for u in verts if not pred[u]]
        for i, s in enumerate(sources):
            for t in sources[i:]:
                if t == (s ^ 1):
                    continue
                if _shifted_meet_nonempty(desc[s], desc[t]):
                    for f in sorted(desc[s]):
                        for g in sorted(desc[t]):
                            probe(f, g)
    else:
        for i, f in enumerate(verts):
            for g in verts[i:]:
                probe(f, g)
    return out


def descendants(igs: Igs, f: Lineral) -> tuple[list[Lineral], LinSystem]:
    """The descendant set D_f and its span as a linear system."""
    if f.enc not in igs.succ:
        raise ValueError("not a vertex of the graph")
    down = _reach(igs.succ, f.enc)
    span = LinSystem()
    for v in down:
        span.insert_enc(v)
    return [Lineral.from_enc(v) for v in sorted(down)], span
