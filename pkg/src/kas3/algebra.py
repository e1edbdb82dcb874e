"""Exact univariate polynomials, GF(p) linear algebra and binary-code enumerators.

Coefficients are Python big integers throughout; nothing here ever rounds.
"""

from __future__ import annotations

import re
from typing import Iterable, Mapping, Sequence

from .errors import GuardExceeded, SchemaError, ToolkitError

WEIGHT_ENUM_MAX_DIM = 24
KERNEL_ENUM_MAX_CODEWORDS = 1 << 24


class Polynomial:
    """Sparse exact univariate polynomial: exponent -> big-integer coefficient.

    Exponents are non-negative integers and zero coefficients are never
    stored, so two polynomials are equal iff their coefficient maps are.
    Instances are treated as immutable values.
    """

    __slots__ = ("_coeffs",)

    def __init__(self, coeffs: Mapping[int, int] | int = 0):
        if isinstance(coeffs, int):
            coeffs = {0: coeffs} if coeffs else {}
        clean: dict[int, int] = {}
        for exp, coeff in coeffs.items():
            exp = int(exp)
            coeff = int(coeff)
            if exp < 0:
                raise ToolkitError(f"negative exponent {exp} not representable")
            if coeff:
                clean[exp] = coeff
        self._coeffs = clean

    @classmethod
    def monomial(cls, exponent: int, coefficient: int = 1) -> "Polynomial":
        return cls({exponent: coefficient})

    @classmethod
    def zero(cls) -> "Polynomial":
        return cls(0)

    @classmethod
    def one(cls) -> "Polynomial":
        return cls(1)

    def terms(self) -> list[tuple[int, int]]:
        """(exponent, coefficient) pairs in ascending exponent order."""
        return sorted(self._coeffs.items())

    def coefficient(self, exponent: int) -> int:
        return self._coeffs.get(exponent, 0)

    @property
    def is_zero(self) -> bool:
        return not self._coeffs

    def degree(self) -> int:
        if not self._coeffs:
            raise ToolkitError("zero polynomial has no degree")
        return max(self._coeffs)

    def __eq__(self, other) -> bool:
        if isinstance(other, Polynomial):
            return self._coeffs == other._coeffs
        if isinstance(other, int):
            return self._coeffs == ({0: other} if other else {})
        return NotImplemented

    def __hash__(self) -> int:
        return hash(frozenset(self._coeffs.items()))

    def __add__(self, other) -> "Polynomial":
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        merged = dict(self._coeffs)
        for exp, coeff in other._coeffs.items():
            merged[exp] = merged.get(exp, 0) + coeff
        return Polynomial(merged)

    __radd__ = __add__

    def __neg__(self) -> "Polynomial":
        return Polynomial({e: -c for e, c in self._coeffs.items()})

    def __sub__(self, other) -> "Polynomial":
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other) -> "Polynomial":
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return other + (-self)

    def __mul__(self, other) -> "Polynomial":
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        out: dict[int, int] = {}
        for e1, c1 in self._coeffs.items():
            for e2, c2 in other._coeffs.items():
                exp = e1 + e2
                out[exp] = out.get(exp, 0) + c1 * c2
        return Polynomial(out)

    __rmul__ = __mul__

    def __pow__(self, n: int) -> "Polynomial":
        if n < 0:
            raise ToolkitError("negative powers not supported")
        result = Polynomial.one()
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def __call__(self, x: int) -> int:
        return sum(c * x**e for e, c in self._coeffs.items())

    def __bool__(self) -> bool:
        return bool(self._coeffs)

    def __repr__(self) -> str:
        return f"Polynomial({self.to_text()!r})"

    def to_text(self) -> str:
        """Stable text form `c0 + c1*x^e1 + ...` with ascending exponents."""
        if not self._coeffs:
            return "0"
        parts: list[str] = []
        for exp, coeff in self.terms():
            mag = abs(coeff)
            if exp == 0:
                body = str(mag)
            elif mag == 1:
                body = f"x^{exp}"
            else:
                body = f"{mag}*x^{exp}"
            if not parts:
                parts.append(("-" if coeff < 0 else "") + body)
            else:
                parts.append(("- " if coeff < 0 else "+ ") + body)
        return " ".join(parts)

    @classmethod
    def from_text(cls, text: str) -> "Polynomial":
        return parse_polynomial(text)


def _coerce(value) -> "Polynomial":
    if isinstance(value, Polynomial):
        return value
    if isinstance(value, int):
        return Polynomial(value)
    return NotImplemented


_TERM_RE = re.compile(r"^(?:(\d+)\s*\*?\s*)?x(?:\^(\d+))?$|^(\d+)$")


def parse_polynomial(text: str) -> Polynomial:
    """Parse the text form accepted and produced by `Polynomial.to_text`."""
    s = text.strip()
    if not s:
        raise SchemaError("empty polynomial text")
    # re.split with a captured separator alternates term, sign, term, ...
    pieces = re.split(r"\s*([+-])\s*", s)
    sign = 1
    idx = 0
    if pieces[0] == "":
        if len(pieces) < 3:
            raise SchemaError(f"cannot parse polynomial {text!r}")
        sign = -1 if pieces[1] == "-" else 1
        idx = 2
    coeffs: dict[int, int] = {}
    while idx < len(pieces):
        match = _TERM_RE.match(pieces[idx].strip())
        if not match:
            raise SchemaError(f"cannot parse polynomial term {pieces[idx]!r}")
        if match.group(3) is not None:
            exp, coeff = 0, int(match.group(3))
        else:
            coeff = int(match.group(1)) if match.group(1) else 1
            exp = int(match.group(2)) if match.group(2) else 1
        coeffs[exp] = coeffs.get(exp, 0) + sign * coeff
        idx += 1
        if idx < len(pieces):
            if idx + 1 >= len(pieces):
                raise SchemaError(f"dangling sign in polynomial {text!r}")
            sign = -1 if pieces[idx] == "-" else 1
            idx += 1
    return Polynomial(coeffs)


def fold_enumerator(poly: Polynomial, e: int) -> Polynomial:
    """Collapse exponents i to (i mod e) / 2, merging coefficients.

    Every exponent carrying a nonzero coefficient must have an even residue
    mod `e`; an odd residue is an error naming the offending exponent rather
    than a silent guess.
    """
    if e <= 0:
        raise ToolkitError(f"fold modulus must be positive, got {e}")
    folded: dict[int, int] = {}
    for exp, coeff in poly.terms():
        residue = exp % e
        if residue % 2:
            raise ToolkitError(
                f"exponent {exp} has odd residue {residue} mod {e}; cannot halve"
            )
        half = residue // 2
        folded[half] = folded.get(half, 0) + coeff
    return Polynomial(folded)


def is_prime(p: int) -> bool:
    if p < 2:
        return False
    d = 2
    while d * d <= p:
        if p % d == 0:
            return False
        d += 1
    return True


def gf_p_rref(rows: Sequence[Sequence[int]], ncols: int, p: int) -> tuple[list[list[int]], list[int]]:
    """Row-reduce over GF(p) with leftmost-pivot order; returns (rref, pivot columns)."""
    if not is_prime(p):
        raise ToolkitError(f"{p} is not prime")
    work = [[v % p for v in row] for row in rows]
    for row in work:
        if len(row) != ncols:
            raise ToolkitError("ragged matrix")
    pivots: list[int] = []
    r = 0
    for col in range(ncols):
        pivot_row = next((i for i in range(r, len(work)) if work[i][col]), None)
        if pivot_row is None:
            continue
        work[r], work[pivot_row] = work[pivot_row], work[r]
        inv = pow(work[r][col], p - 2, p) if p > 2 else work[r][col]
        work[r] = [(v * inv) % p for v in work[r]]
        for i in range(len(work)):
            if i != r and work[i][col]:
                factor = work[i][col]
                work[i] = [(a - factor * b) % p for a, b in zip(work[i], work[r])]
        pivots.append(col)
        r += 1
        if r == len(work):
            break
    return work[:r], pivots


def gf_p_nullspace(rows: Sequence[Sequence[int]], ncols: int, p: int) -> list[tuple[int, ...]]:
    """Deterministic kernel basis of the matrix over GF(p) (one vector per free column)."""
    rref, pivots = gf_p_rref(rows, ncols, p)
    pivot_set = set(pivots)
    basis: list[tuple[int, ...]] = []
    for free in range(ncols):
        if free in pivot_set:
            continue
        vec = [0] * ncols
        vec[free] = 1
        for r, col in enumerate(pivots):
            vec[col] = (-rref[r][free]) % p
        basis.append(tuple(vec))
    return basis


class BinaryCode:
    """Binary linear code given by a full-rank k x n generator matrix over GF(2)."""

    __slots__ = ("k", "n", "rows")

    def __init__(self, n: int, rows: Iterable[int]):
        self.rows = tuple(int(r) for r in rows)
        self.n = int(n)
        self.k = len(self.rows)
        if self.n < 0:
            raise ToolkitError("code length must be non-negative")
        for row in self.rows:
            if row < 0 or row >> self.n:
                raise ToolkitError("generator row outside code length")
        if _gf2_rank(self.rows) != self.k:
            raise ToolkitError("generator rows are linearly dependent")

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[int]], n: int | None = None) -> "BinaryCode":
        if n is None:
            n = len(rows[0]) if rows else 0
        masks = []
        for row in rows:
            if len(row) != n:
                raise SchemaError("ragged generator matrix")
            mask = 0
            for j, bit in enumerate(row):
                if bit not in (0, 1):
                    raise SchemaError(f"generator entry {bit} is not a bit")
                mask |= bit << j
            masks.append(mask)
        return cls(n, masks)

    @classmethod
    def from_doc(cls, doc) -> "BinaryCode":
        try:
            k, n, rows = int(doc["k"]), int(doc["n"]), doc["rows"]
            if len(rows) != k:
                raise SchemaError(f"expected {k} generator rows, got {len(rows)}")
            return cls.from_rows(rows, n)
        except (KeyError, TypeError, ValueError) as exc:
            if isinstance(exc, ToolkitError):
                raise
            raise SchemaError(f"bad code document: {exc}") from exc

    def to_doc(self) -> dict:
        return {
            "k": self.k,
            "n": self.n,
            "rows": [[(row >> j) & 1 for j in range(self.n)] for row in self.rows],
        }


def _gf2_rank(masks: Sequence[int]) -> int:
    basis: list[int] = []
    for mask in masks:
        for b in basis:
            mask = min(mask, mask ^ b)
        if mask:
            basis.append(mask)
            basis.sort(reverse=True)
    return len(basis)


def weight_enumerator(code: BinaryCode) -> Polynomial:
    """Sum of x^weight over all 2^k codewords, by Gray-code span of the generators."""
    if code.k > WEIGHT_ENUM_MAX_DIM:
        raise GuardExceeded(
            f"code dimension {code.k} exceeds enumeration guard {WEIGHT_ENUM_MAX_DIM}"
        )
    counts: dict[int, int] = {0: 1}
    word = 0
    for i in range(1, 1 << code.k):
        flip = (i & -i).bit_length() - 1
        word ^= code.rows[flip]
        w = word.bit_count()
        counts[w] = counts.get(w, 0) + 1
    return Polynomial(counts)
