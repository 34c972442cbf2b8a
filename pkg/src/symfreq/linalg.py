"""Exact rational linear algebra: linear forms, matrices, reduced row echelon form.

All coefficients are `fractions.Fraction`, which keeps every value in canonical
form (positive denominator, gcd-reduced) after each operation.  The wire format
for a rational is the string "p/q", or just "p" when q = 1, with a leading "-"
for negatives; this is exactly what `str(Fraction)` produces.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping, NamedTuple

Rational = Fraction

S_SPACE = "S"
U_SPACE = "U"


def rat_to_str(q: Fraction) -> str:
    return str(Fraction(q))


def rat_from_str(s: str) -> Fraction:
    return Fraction(s.strip())


@dataclass(frozen=True)
class LinearForm:
    """A rational linear form over the S- or U-variables of a fixed modulus.

    For modulus m with m' = floor(m/2), both spaces hold m' - 1 coefficients:
    S-space covers indices 1..m'-1 and U-space covers 2..m' (index 1 of the
    U-space is excluded; that variable is identically zero by convention).
    """

    space: str
    m: int
    coeffs: tuple[Fraction, ...]

    def __post_init__(self):
        if self.space not in (S_SPACE, U_SPACE):
            raise ValueError(f"unknown space {self.space!r}")
        if self.m < 4:
            raise ValueError("linear forms need a modulus m >= 4")
        expected = self.m // 2 - 1
        coeffs = tuple(Fraction(c) for c in self.coeffs)
        if len(coeffs) != expected:
            raise ValueError(
                f"space {self.space} at m={self.m} needs {expected} coefficients, "
                f"got {len(coeffs)}"
            )
        object.__setattr__(self, "coeffs", coeffs)

    @property
    def first_index(self) -> int:
        return 1 if self.space == S_SPACE else 2

    @property
    def last_index(self) -> int:
        return self.first_index + len(self.coeffs) - 1

    @classmethod
    def zero(cls, space: str, m: int) -> "LinearForm":
        return cls(space, m, (Fraction(0),) * (m // 2 - 1))

    @classmethod
    def from_map(cls, space: str, m: int, coeffs: Mapping[int, Fraction]) -> "LinearForm":
        """Build a form from an {index: coefficient} mapping.

        U-space index 1 is dropped silently (the corresponding value is 0);
        any other out-of-range index is an error.
        """
        first = 1 if space == S_SPACE else 2
        vec = [Fraction(0)] * (m // 2 - 1)
        for idx, c in coeffs.items():
            idx = int(idx)
            if space == U_SPACE and idx == 1:
                continue
            if not first <= idx <= first + len(vec) - 1:
                raise ValueError(
                    f"index {idx} out of range {first}..{first + len(vec) - 1} "
                    f"for space {space} at m={m}"
                )
            vec[idx - first] += Fraction(c)
        return cls(space, m, tuple(vec))

    def coeff(self, index: int) -> Fraction:
        if not self.first_index <= index <= self.last_index:
            raise ValueError(f"index {index} out of range")
        return self.coeffs[index - self.first_index]

    def items(self) -> list[tuple[int, Fraction]]:
        """Nonzero (index, coefficient) pairs, index ascending."""
        first = self.first_index
        return [(first + i, c) for i, c in enumerate(self.coeffs) if c != 0]

    def is_zero(self) -> bool:
        return all(c == 0 for c in self.coeffs)


def form_add(a: LinearForm, b: LinearForm) -> LinearForm:
    if a.space != b.space or a.m != b.m:
        raise ValueError("cannot add forms from different spaces or moduli")
    return LinearForm(a.space, a.m, tuple(x + y for x, y in zip(a.coeffs, b.coeffs)))


def form_scale(a: LinearForm, c: Fraction) -> LinearForm:
    c = Fraction(c)
    return LinearForm(a.space, a.m, tuple(c * x for x in a.coeffs))


def form_to_json(form: LinearForm, provenance: str | None = None) -> dict:
    out: dict = {
        "m": form.m,
        "space": form.space,
        "coeffs": {str(i): rat_to_str(c) for i, c in form.items()},
    }
    if provenance is not None:
        out["provenance"] = provenance
    return out


def form_from_json(obj: Mapping) -> LinearForm:
    try:
        m = int(obj["m"])
        space = str(obj["space"])
        coeffs = {int(k): rat_from_str(str(v)) for k, v in obj["coeffs"].items()}
    except (KeyError, TypeError, ValueError) as exc:
        raise ValueError(f"malformed relation object: {exc}") from exc
    return LinearForm.from_map(space, m, coeffs)


@dataclass(frozen=True)
class RationalMatrix:
    rows: int
    cols: int
    entries: tuple[tuple[Fraction, ...], ...]

    def __post_init__(self):
        ent = tuple(tuple(Fraction(x) for x in row) for row in self.entries)
        if len(ent) != self.rows or any(len(r) != self.cols for r in ent):
            raise ValueError("entry grid does not match declared dimensions")
        object.__setattr__(self, "entries", ent)

    @classmethod
    def from_rows(cls, rows: Iterable[Iterable[Fraction]], cols: int | None = None) -> "RationalMatrix":
        ent = tuple(tuple(Fraction(x) for x in row) for row in rows)
        if ent:
            cols = len(ent[0])
        elif cols is None:
            cols = 0
        return cls(len(ent), cols, ent)

    def transpose(self) -> "RationalMatrix":
        ent = tuple(tuple(self.entries[r][c] for r in range(self.rows)) for c in range(self.cols))
        return RationalMatrix(self.cols, self.rows, ent)


class RrefResult(NamedTuple):
    matrix: RationalMatrix
    pivots: tuple[int, ...]
    rank: int


def rref(mat: RationalMatrix) -> RrefResult:
    """Reduced row echelon form over Q.

    Pivot selection is the first nonzero entry in column order; with exact
    arithmetic no pivoting heuristics are needed and the output is the unique
    RREF of the input.
    """
    rows = [list(r) for r in mat.entries]
    nr, nc = mat.rows, mat.cols
    pivots: list[int] = []
    r = 0
    for c in range(nc):
        if r == nr:
            break
        pr = next((i for i in range(r, nr) if rows[i][c] != 0), None)
        if pr is None:
            continue
        rows[r], rows[pr] = rows[pr], rows[r]
        pv = rows[r][c]
        rows[r] = [x / pv for x in rows[r]]
        for i in range(nr):
            if i != r and rows[i][c] != 0:
                f = rows[i][c]
                rows[i] = [a - f * b for a, b in zip(rows[i], rows[r])]
        pivots.append(c)
        r += 1
    return RrefResult(RationalMatrix.from_rows(rows, cols=nc), tuple(pivots), len(pivots))


def stack_forms(forms: Iterable[LinearForm]) -> RationalMatrix:
    """Coefficient vectors of the given forms as matrix rows."""
    forms = list(forms)
    if not forms:
        return RationalMatrix.from_rows([], cols=0)
    n = len(forms[0].coeffs)
    if any(len(f.coeffs) != n for f in forms):
        raise ValueError("forms of mixed length cannot be stacked")
    return RationalMatrix.from_rows([f.coeffs for f in forms], cols=n)
