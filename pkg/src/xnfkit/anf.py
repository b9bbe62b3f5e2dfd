"""Boolean polynomials in algebraic normal form (sets of square-free terms)."""

from __future__ import annotations

from typing import Iterable

Term = frozenset  # frozenset of variable indices; the empty term is the constant 1


class AnfPoly:
    """A Boolean polynomial as a GF(2)-sum of square-free terms."""

    __slots__ = ("terms",)

    def __init__(self, terms: Iterable[Iterable[int]] = ()):
        seen: set[Term] = set()
        for t in terms:
            term = frozenset(t)
            if any(v < 1 for v in term):
                raise ValueError("variable indices must be >= 1")
            seen ^= {term}  # GF(2): duplicate terms cancel
        self.terms = frozenset(seen)

    @classmethod
    def zero(cls) -> "AnfPoly":
        return cls()

    @classmethod
    def one(cls) -> "AnfPoly":
        return cls([()])

    @property
    def is_zero(self) -> bool:
        return not self.terms

    def degree(self) -> int:
        return max((len(t) for t in self.terms), default=0)

    def variables(self) -> set[int]:
        return set().union(*self.terms) if self.terms else set()

    def quadratic_terms(self) -> frozenset:
        return frozenset(t for t in self.terms if len(t) == 2)

    def __add__(self, other: "AnfPoly") -> "AnfPoly":
        out = AnfPoly.__new__(AnfPoly)
        out.terms = self.terms ^ other.terms
        return out

    def __mul__(self, other: "AnfPoly") -> "AnfPoly":
        acc: set[Term] = set()
        for s in self.terms:
            for t in other.terms:
                acc ^= {s | t}  # x^2 = x, duplicates cancel
        out = AnfPoly.__new__(AnfPoly)
        out.terms = frozenset(acc)
        return out

    def evaluate(self, assignment) -> int:
        val = 0
        for t in self.terms:
            prod = 1
            for v in t:
                if not assignment[v - 1]:
                    prod = 0
                    break
            val ^= prod
        return val

    def __eq__(self, other) -> bool:
        return isinstance(other, AnfPoly) and self.terms == other.terms

    def __hash__(self) -> int:
        return hash(self.terms)

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        keyed = sorted(self.terms, key=lambda t: (-len(t), sorted(t)))
        parts = []
        for t in keyed:
            parts.append("*".join(f"x{v}" for v in sorted(t)) if t else "1")
        return "+".join(parts)

    def __repr__(self) -> str:
        return f"AnfPoly({self})"


class AnfParseError(ValueError):
    def __init__(self, msg: str, line: int):
        super().__init__(f"line {line}: {msg}")
        self.line = line


def _parse_poly(text: str, lineno: int) -> AnfPoly:
    terms = []
    for raw in text.split("+"):
        raw = raw.strip()
        if not raw:
            raise AnfParseError("empty term", lineno)
        term = []
        for factor in raw.split("*"):
            factor = factor.strip()
            if factor == "1":
                continue
            if not factor.startswith("x") or not factor[1:].isdigit():
                raise AnfParseError(f"unknown token {factor!r}", lineno)
            v = int(factor[1:])
            if v < 1:
                raise AnfParseError(f"bad variable index in {factor!r}", lineno)
            term.append(v)
        terms.append(term)
    return AnfPoly(terms)


def parse_anf(text: str) -> list[AnfPoly]:
    """Parse one polynomial per line; '#' comments and blank lines ignored.

    Terms are joined by '+', variables within a term by '*', e.g.
    ``x1*x2+x3+1``.
    """
    polys = []
    for lineno, line in enumerate(text.splitlines(), start=1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        polys.append(_parse_poly(line, lineno))
    return polys


def write_anf(polys: Iterable[AnfPoly]) -> str:
    return "\n".join(str(p) for p in polys) + "\n"
