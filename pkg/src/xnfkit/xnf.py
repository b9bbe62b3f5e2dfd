"""XNF formulas and the DIMACS-style .xnf file format.

Grammar: header ``p xnf <nvars> <nclauses>``; a clause is whitespace-separated
lineral tokens terminated by ``0``; a lineral token is literals joined by
``+`` with no interior whitespace (``-2``, ``4+5+6``, ``-1+2+4``); ``c``
lines are comments.  A ``p cnf`` header is accepted and parsed as plain CNF,
and ``x``-prefixed XOR-constraint lines are read back as unit XNF clauses.
"""

from __future__ import annotations

from typing import Iterable, Sequence

from .gf2 import Lineral

XnfClause = tuple[Lineral, ...]


class XnfParseError(ValueError):
    def __init__(self, msg: str, line: int):
        super().__init__(f"line {line}: {msg}")
        self.line = line


class XnfFormula:
    """A conjunction of XNF clauses (each a disjunction of linerals).

    Construction normalizes clauses: zero linerals are dropped from a clause
    (a clause of only zero linerals becomes the empty clause, meaning UNSAT)
    and clauses containing the constant-one lineral are dropped entirely
    (tautologies).  Every variable index must lie in [1, num_vars].
    """

    __slots__ = ("num_vars", "clauses", "declared_clause_count")

    def __init__(
        self,
        num_vars: int,
        clauses: Iterable[Sequence[Lineral]],
        declared_clause_count: int | None = None,
    ):
        if num_vars < 0:
            raise ValueError("num_vars must be >= 0")
        norm: list[XnfClause] = []
        for clause in clauses:
            kept = []
            tautology = False
            for lin in clause:
                if lin.enc == 0:
                    continue
                if lin.enc == 1:
                    tautology = True
                    break
                if lin.enc.bit_length() - 1 > num_vars:
                    raise ValueError(
                        f"variable x{lin.enc.bit_length() - 1} out of range (num_vars={num_vars})"
                    )
                kept.append(lin)
            if not tautology:
                norm.append(tuple(kept))
        self.num_vars = num_vars
        self.clauses = norm
        if declared_clause_count is None:
            declared_clause_count = len(norm)
        self.declared_clause_count = declared_clause_count

    @property
    def max_clause_width(self) -> int:
        return max((len(c) for c in self.clauses), default=0)

    def is_kxnf(self, k: int) -> bool:
        return self.max_clause_width <= k

    def has_empty_clause(self) -> bool:
        return any(not c for c in self.clauses)

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, XnfFormula)
            and self.num_vars == other.num_vars
            and self.clauses == other.clauses
        )

    def __hash__(self) -> int:
        return hash((self.num_vars, tuple(self.clauses)))

    def __repr__(self) -> str:
        return f"XnfFormula(num_vars={self.num_vars}, clauses={len(self.clauses)})"


def _parse_lineral_token(tok: str, num_vars: int, lineno: int) -> Lineral:
    try:
        lin = Lineral.from_token(tok)
    except ValueError as exc:
        raise XnfParseError(str(exc), lineno) from None
    top = lin.enc.bit_length() - 1
    if top > num_vars:
        raise XnfParseError(f"variable x{top} out of range (num_vars={num_vars})", lineno)
    return lin


def parse_xnf(text: str) -> XnfFormula:
    """Parse XNF (or DIMACS CNF / CNF-XOR) text into an XnfFormula."""
    num_vars = -1
    declared = -1
    clauses: list[list[Lineral]] = []
    raw_count = 0
    for lineno, line in enumerate(text.splitlines(), start=1):
        stripped = line.strip()
        if not stripped or stripped[0] == "c":
            continue
        toks = stripped.split()
        if toks[0] == "p":
            if num_vars >= 0:
                raise XnfParseError("duplicate header", lineno)
            if len(toks) != 4 or toks[1] not in ("xnf", "cnf"):
                raise XnfParseError("header must be 'p xnf <vars> <clauses>'", lineno)
            try:
                num_vars = int(toks[2])
                declared = int(toks[3])
            except ValueError:
                raise XnfParseError("non-numeric header counts", lineno) from None
            if num_vars < 0 or declared < 0:
                raise XnfParseError("negative header counts", lineno)
            continue
        if num_vars < 0:
            raise XnfParseError("clause before header", lineno)
        if toks[0] == "x":
            # XOR constraint line: the XOR of its literals is asserted true
            if toks[-1] != "0":
                raise XnfParseError("missing clause terminator", lineno)
            enc = 0
            for tok in toks[1:-1]:
                enc ^= _parse_lineral_token(tok, num_vars, lineno).enc
            clauses.append([Lineral.from_enc(enc)])
            raw_count += 1
            continue
        if toks[-1] != "0":
            raise XnfParseError("missing clause terminator", lineno)
        current: list[Lineral] = []
        for tok in toks:
            if tok == "0":
                clauses.append(current)
                raw_count += 1
                current = []
            else:
                current.append(_parse_lineral_token(tok, num_vars, lineno))
    if num_vars < 0:
        raise XnfParseError("missing header", 0)
    if raw_count != declared:
        raise XnfParseError(
            f"clause count mismatch: header declares {declared}, found {raw_count}", 0
        )
    return XnfFormula(num_vars, clauses, declared_clause_count=declared)


def write_xnf(formula: XnfFormula, comments: Iterable[str] = ()) -> str:
    """Serialize to .xnf text; inverse of parse_xnf up to normalization."""
    lines = [f"c {c}" for c in comments]
    lines.append(f"p xnf {formula.num_vars} {len(formula.clauses)}")
    for clause in formula.clauses:
        if clause:
            lines.append(" ".join(lin.token() for lin in clause) + " 0")
        else:
            lines.append("0")
    return "\n".join(lines) + "\n"


def clause_tokens(clause: XnfClause) -> str:
    return " ".join(lin.token() for lin in clause) + " 0" if clause else "0"
