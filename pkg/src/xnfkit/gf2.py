"""Exact GF(2) arithmetic on linerals and interreduced linear systems.

A lineral is an XOR of literals; algebraically a linear Boolean polynomial
``c + x_{i_1} + ... + x_{i_t}``.  Linerals are encoded as Python ints with
bit 0 holding the constant and bit ``i`` holding variable ``x_i``, so that
addition over GF(2) is integer XOR.  The fixed term ordering takes the
smallest-index variable of a lineral as its leading term.
"""

from __future__ import annotations

from typing import Iterable, Iterator, Optional


def encode(support: Iterable[int], const: int = 0) -> int:
    """Encode a lineral from variable indices and a constant bit."""
    enc = const & 1
    for v in support:
        if v < 1:
            raise ValueError(f"variable index must be >= 1, got {v}")
        enc ^= 1 << v
    return enc


def leading_var(enc: int) -> int:
    """Smallest variable index in the support, or 0 for constant linerals."""
    bits = enc & ~1
    if not bits:
        return 0
    return (bits & -bits).bit_length() - 1


class Lineral:
    """An XOR of literals, i.e. a linear Boolean polynomial."""

    __slots__ = ("enc",)

    def __init__(self, support: Iterable[int] = (), const: int = 0):
        self.enc = encode(support, const)

    @classmethod
    def from_enc(cls, enc: int) -> "Lineral":
        lin = cls.__new__(cls)
        lin.enc = enc
        return lin

    @property
    def const(self) -> int:
        return self.enc & 1

    @property
    def support(self) -> tuple[int, ...]:
        bits = self.enc >> 1
        out = []
        v = 1
        while bits:
            if bits & 1:
                out.append(v)
            bits >>= 1
            v += 1
        return tuple(out)

    @property
    def is_zero(self) -> bool:
        return self.enc == 0

    @property
    def is_one(self) -> bool:
        return self.enc == 1

    @property
    def is_constant(self) -> bool:
        return self.enc <= 1

    @property
    def leading_var(self) -> int:
        return leading_var(self.enc)

    def __add__(self, other: "Lineral") -> "Lineral":
        return Lineral.from_enc(self.enc ^ other.enc)

    __xor__ = __add__

    def negated(self) -> "Lineral":
        """The lineral plus the constant 1 (logical negation)."""
        return Lineral.from_enc(self.enc ^ 1)

    def evaluate(self, assignment) -> int:
        """Value of the lineral at an assignment (index i-1 holds x_i)."""
        val = self.enc & 1
        bits = self.enc >> 1
        if bits.bit_length() > len(assignment):
            raise ValueError("assignment too short for lineral support")
        v = 0
        while bits:
            if bits & 1 and assignment[v]:
                val ^= 1
            bits >>= 1
            v += 1
        return val

    def token(self) -> str:
        """Textual form: variables ascending joined by '+', sign on the first
        literal when the constant bit is set, e.g. ``-1+2+4``."""
        sup = self.support
        if not sup:
            raise ValueError("constant lineral has no token form")
        s = "+".join(str(v) for v in sup)
        return "-" + s if self.enc & 1 else s

    @classmethod
    def from_token(cls, tok: str) -> "Lineral":
        """Parse a token like ``-1+2+4``; '-' on any literal flips the constant."""
        enc = 0
        for part in tok.split("+"):
            if part.startswith("-"):
                enc ^= 1
                part = part[1:]
            if not part.isdigit():
                raise ValueError(f"malformed lineral token {tok!r}")
            v = int(part)
            if v < 1:
                raise ValueError(f"variable index must be >= 1 in {tok!r}")
            enc ^= 1 << v
        return cls.from_enc(enc)

    def __eq__(self, other) -> bool:
        return isinstance(other, Lineral) and self.enc == other.enc

    def __hash__(self) -> int:
        return hash(self.enc)

    def __lt__(self, other: "Lineral") -> bool:
        return self.enc < other.enc

    def __le__(self, other: "Lineral") -> bool:
        return self.enc <= other.enc

    def __repr__(self) -> str:
        if self.enc == 0:
            return "Lineral<0>"
        if self.enc == 1:
            return "Lineral<1>"
        body = "+".join(f"x{v}" for v in self.support)
        if self.enc & 1:
            body += "+1"
        return f"Lineral<{body}>"


ZERO = Lineral.from_enc(0)
ONE = Lineral.from_enc(1)


class LinSystem:
    """An LT-interreduced system of linerals (reduced row echelon form).

    Rows are keyed by their pivot (the leading variable's bit); no pivot
    occurs in any other row.  The one lineral is representable: inserting 1,
    or anything that reduces to it, sets the ``inconsistent`` flag and from
    then on the constant bit reduces away (the span contains 1, so f and
    f+1 coincide modulo the system).
    """

    __slots__ = ("pivots", "pivot_mask", "inconsistent")

    def __init__(self, rows: Iterable[Lineral] = ()):
        self.pivots: dict[int, int] = {}
        self.pivot_mask = 0  # OR of all pivot bits, for cheap change tracking
        self.inconsistent = False
        for r in rows:
            self.insert(r)

    def copy(self) -> "LinSystem":
        other = LinSystem.__new__(LinSystem)
        other.pivots = dict(self.pivots)
        other.pivot_mask = self.pivot_mask
        other.inconsistent = self.inconsistent
        return other

    @property
    def dim(self) -> int:
        return len(self.pivots) + (1 if self.inconsistent else 0)

    def row_encs(self) -> list[int]:
        return [self.pivots[p] for p in sorted(self.pivots)]

    def rows(self) -> list[Lineral]:
        return [Lineral.from_enc(e) for e in self.row_encs()]

    def reduce_enc(self, x: int) -> int:
        """Normal remainder of an encoded lineral modulo the system."""
        pivots = self.pivots
        # rows carry no pivot but their own, so cancelling a pivot never
        # introduces another: one pass over the pivot bits suffices
        bits = x & self.pivot_mask
        while bits:
            lsb = bits & -bits
            x ^= pivots[lsb]
            bits &= bits - 1
        if self.inconsistent:
            x &= ~1
        return x

    def reduce(self, f: Lineral) -> Lineral:
        return Lineral.from_enc(self.reduce_enc(f.enc))

    def contains_enc(self, x: int) -> bool:
        return self.reduce_enc(x) == 0

    def contains(self, f: Lineral) -> bool:
        return self.contains_enc(f.enc)

    def insert_enc(self, x: int) -> bool:
        """Insert an encoded lineral; returns whether the span grew."""
        r = self.reduce_enc(x)
        if r == 0:
            return False
        if r == 1:
            self.inconsistent = True
            return True
        piv = (r & ~1) & -(r & ~1)
        pivots = self.pivots
        for p, row in pivots.items():
            if row & piv:
                pivots[p] = row ^ r
        pivots[piv] = r
        self.pivot_mask |= piv
        return True

    def insert(self, f: Lineral) -> bool:
        return self.insert_enc(f.enc)

    def solve(self, n: int) -> Optional[tuple[int, ...]]:
        """One point of the solution set with free variables fixed to 0,
        or None when the system is inconsistent."""
        if self.inconsistent:
            return None
        a = [0] * n
        for piv, row in self.pivots.items():
            v = piv.bit_length() - 1
            if v > n:
                raise ValueError(f"system mentions x{v} beyond n={n}")
            # non-pivot variables of the row are free, hence 0
            a[v - 1] = row & 1
        return tuple(a)

    def __len__(self) -> int:
        return len(self.pivots)

    def __repr__(self) -> str:
        if self.inconsistent:
            return "LinSystem<inconsistent>"
        return f"LinSystem<{', '.join(repr(r) for r in self.rows())}>"


def _echelon_high(rows: Iterable[int]) -> dict[int, int]:
    """Row echelon form keyed by highest set bit (used for span stacking)."""
    piv: dict[int, int] = {}
    for r in rows:
        while r:
            h = r.bit_length() - 1
            if h in piv:
                r ^= piv[h]
            else:
                piv[h] = r
                break
    return piv


def affine_meet(
    gens_a: Iterable[Lineral],
    gens_b: Iterable[Lineral],
    shift_a: bool = False,
    shift_b: bool = False,
) -> tuple[bool, Optional[list[Lineral]]]:
    """Intersect two (optionally 1-shifted) spans of linerals.

    Returns ``(nonempty, basis)``.  For the purely linear case the basis of
    the intersection subspace is computed by elimination on the stacked
    coefficient matrix; for shifted (affine) cases only emptiness is
    reported and the basis is None.
    """
    a_encs = [g.enc for g in gens_a]
    b_encs = [g.enc for g in gens_b]
    if shift_a and shift_b:
        # (1+U) meets (1+W) iff U meets W, which always holds at 0
        return True, None
    if shift_a or shift_b:
        # U meets (1+W) iff the constant 1 lies in U+W
        sys = LinSystem()
        for e in a_encs + b_encs:
            sys.insert_enc(e)
        return sys.inconsistent, None
    width = max((e.bit_length() for e in a_encs + b_encs), default=1)
    stacked = [(e << width) | e for e in a_encs] + [e << width for e in b_encs]
    piv = _echelon_high(stacked)
    mask = (1 << width) - 1
    basis = [Lineral.from_enc(row & mask) for h, row in piv.items() if h < width and row]
    basis.sort(key=lambda l: l.enc)
    return True, basis


def kernel_basis(rows: list[int], ncols: int) -> list[int]:
    """Basis of the right kernel of a GF(2) matrix given as row bitmasks."""
    work = list(rows)
    pivot_of_col: dict[int, int] = {}
    reduced: list[int] = []
    for r in work:
        for c, row in pivot_of_col.items():
            if (r >> c) & 1:
                r ^= row
        if r:
            c = (r & -r).bit_length() - 1
            for cc in list(pivot_of_col):
                if (pivot_of_col[cc] >> c) & 1:
                    pivot_of_col[cc] ^= r
            pivot_of_col[c] = r
    basis = []
    pivot_cols = set(pivot_of_col)
    for free in range(ncols):
        if free in pivot_cols:
            continue
        vec = 1 << free
        for c, row in pivot_of_col.items():
            if (row >> free) & 1:
                vec |= 1 << c
        basis.append(vec)
    return basis


def iter_span(gens: Iterable[Lineral]) -> Iterator[Lineral]:
    """Enumerate the full span of a small set of linerals (test helper)."""
    piv: dict[int, int] = {}
    basis: list[int] = []
    for g in gens:
        r = g.enc
        while r:
            h = r.bit_length() - 1
            if h in piv:
                r ^= piv[h]
            else:
                piv[h] = r
                basis.append(g.enc)
                break
    for mask in range(1 << len(basis)):
        acc = 0
        m = mask
        i = 0
        while m:
            if m & 1:
                acc ^= basis[i]
            m >>= 1
            i += 1
        yield Lineral.from_enc(acc)
