"""Sparse truncated multivariate series over Laurent p-adic coefficients.

A TruncSeries in variables x_1, ..., x_nvars keeps only monomials whose
exponent vector is < cap in EVERY coordinate; everything past the cap is
dropped eagerly during arithmetic, so products of truncated series agree
with truncations of full products.  Coefficients are LaurentCoeff values
over one shared RamifiedRing.  Zero coefficients are never stored.
"""

from __future__ import annotations

from .valuations import LaurentCoeff, RamifiedRing


class TruncSeries:
    __slots__ = ("ring", "nvars", "cap", "coeffs")

    def __init__(self, ring: RamifiedRing, nvars: int, cap: int, coeffs=None):
        if nvars < 1:
            raise ValueError("need at least one variable")
        if cap < 1:
            raise ValueError("cap must be >= 1")
        self.ring = ring
        self.nvars = nvars
        self.cap = cap
        clean = {}
        for exps, c in (coeffs or {}).items():
            exps = tuple(int(e) for e in exps)
            if len(exps) != nvars:
                raise ValueError("exponent vector has wrong length")
            if any(e < 0 for e in exps):
                raise ValueError("negative exponents are not supported")
            if any(e >= cap for e in exps):
                continue
            if c.is_zero:
                continue
            if exps in clean:
                c = clean[exps] + c
                if c.is_zero:
                    del clean[exps]
                    continue
            clean[exps] = c
        self.coeffs = clean

    # ---- constructors -------------------------------------------------

    @classmethod
    def zero(cls, ring, nvars, cap) -> "TruncSeries":
        return cls(ring, nvars, cap, {})

    @classmethod
    def one(cls, ring, nvars, cap) -> "TruncSeries":
        return cls(ring, nvars, cap, {(0,) * nvars: LaurentCoeff.one(ring)})

    @classmethod
    def const(cls, ring, nvars, cap, coeff: LaurentCoeff) -> "TruncSeries":
        return cls(ring, nvars, cap, {(0,) * nvars: coeff})

    @classmethod
    def monomial(cls, ring, nvars, cap, exps, coeff: LaurentCoeff) -> "TruncSeries":
        return cls(ring, nvars, cap, {tuple(exps): coeff})

    @classmethod
    def variable(cls, ring, nvars, cap, i: int) -> "TruncSeries":
        """The series x_i, with variables numbered 1..nvars."""
        if not 1 <= i <= nvars:
            raise ValueError("variable index out of range")
        exps = tuple(1 if k == i - 1 else 0 for k in range(nvars))
        return cls.monomial(ring, nvars, cap, exps, LaurentCoeff.one(ring))

    # ---- structure ----------------------------------------------------

    def _compat(self, other: "TruncSeries"):
        if (
            self.ring != other.ring
            or self.nvars != other.nvars
            or self.cap != other.cap
        ):
            raise ValueError("series shapes differ (ring, nvars, cap must match)")

    @property
    def is_zero(self) -> bool:
        return not self.coeffs

    def coeff(self, exps) -> LaurentCoeff:
        return self.coeffs.get(tuple(exps), LaurentCoeff.zero(self.ring))

    def constant_term(self) -> LaurentCoeff:
        return self.coeff((0,) * self.nvars)

    def min_pi_exponent(self):
        """Smallest pi_exponent over stored coefficients; None when zero."""
        if not self.coeffs:
            return None
        return min(c.pi_exp for c in self.coeffs.values())

    # ---- arithmetic ---------------------------------------------------

    def __add__(self, other: "TruncSeries") -> "TruncSeries":
        self._compat(other)
        out = dict(self.coeffs)
        for exps, c in other.coeffs.items():
            if exps in out:
                s = out[exps] + c
                if s.is_zero:
                    del out[exps]
                else:
                    out[exps] = s
            else:
                out[exps] = c
        return TruncSeries(self.ring, self.nvars, self.cap, out)

    def __neg__(self) -> "TruncSeries":
        return TruncSeries(
            self.ring, self.nvars, self.cap,
            {e: -c for e, c in self.coeffs.items()},
        )

    def __sub__(self, other: "TruncSeries") -> "TruncSeries":
        return self + (-other)

    def __mul__(self, other: "TruncSeries") -> "TruncSeries":
        self._compat(other)
        cap = self.cap
        out = {}
        for ea, ca in self.coeffs.items():
            for eb, cb in other.coeffs.items():
                exps = tuple(a + b for a, b in zip(ea, eb))
                if any(e >= cap for e in exps):
                    continue
                c = ca * cb
                if exps in out:
                    c = out[exps] + c
                if c.is_zero:
                    out.pop(exps, None)
                else:
                    out[exps] = c
        return TruncSeries(self.ring, self.nvars, self.cap, out)

    def scale(self, coeff: LaurentCoeff) -> "TruncSeries":
        if coeff.is_zero:
            return TruncSeries.zero(self.ring, self.nvars, self.cap)
        return TruncSeries(
            self.ring, self.nvars, self.cap,
            {e: c * coeff for e, c in self.coeffs.items()},
        )

    def mul_pi_power(self, e: int) -> "TruncSeries":
        return self.scale(LaurentCoeff.pi_power(self.ring, e))

    def __pow__(self, e: int) -> "TruncSeries":
        if e < 0:
            raise ValueError("negative powers: use inverse()")
        result = TruncSeries.one(self.ring, self.nvars, self.cap)
        base = self
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    def inverse(self) -> "TruncSeries":
        """Geometric-series inverse; the constant term must be invertible."""
        c = self.constant_term()
        if c.is_zero:
            raise ValueError("constant term is zero (not invertible at this cap)")
        cinv = c.inverse()
        # self = c(1 + h), h with no constant term and h nilpotent mod cap
        h = (self - TruncSeries.const(self.ring, self.nvars, self.cap, c)).scale(cinv)
        result = TruncSeries.one(self.ring, self.nvars, self.cap)
        power = TruncSeries.one(self.ring, self.nvars, self.cap)
        bound = self.nvars * (self.cap - 1) + 1
        for _ in range(bound):
            power = (-power) * h
            if power.is_zero:
                break
            result = result + power
        return result.scale(cinv)

    # ---- twists and export ---------------------------------------------

    def frobenius_twist(self, q: int, i: int = 1) -> "TruncSeries":
        """Substitute x_k -> x_k^(q^i); monomials pushed past cap vanish."""
        if i < 0:
            raise ValueError("twist power must be >= 0")
        s = q ** i
        out = {}
        for exps, c in self.coeffs.items():
            new = tuple(e * s for e in exps)
            if any(e >= self.cap for e in new):
                continue
            if new in out:
                c = out[new] + c
                if c.is_zero:
                    del out[new]
                    continue
            out[new] = c
        return TruncSeries(self.ring, self.nvars, self.cap, out)

    def to_json_dict(self):
        terms = []
        for exps in sorted(self.coeffs):
            c = self.coeffs[exps]
            terms.append(
                {"exps": list(exps), "pi_exp": c.pi_exp, "digits": c.unit.digit_string()}
            )
        return {"nvars": self.nvars, "cap": self.cap, "terms": terms}

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, TruncSeries)
            and self.ring == other.ring
            and self.nvars == other.nvars
            and self.cap == other.cap
            and self.coeffs == other.coeffs
        )

    def __hash__(self):
        return hash((self.ring, self.nvars, self.cap, frozenset(self.coeffs.items())))

    def __repr__(self) -> str:
        if not self.coeffs:
            return "0"
        parts = []
        for exps in sorted(self.coeffs):
            c = self.coeffs[exps]
            mono = "*".join(
                f"x{k+1}^{e}" if e != 1 else f"x{k+1}"
                for k, e in enumerate(exps)
                if e
            )
            if c.pi_exp == 0 and c.unit == c.ring.one():
                parts.append(mono or "1")
            else:
                parts.append(f"({c!r})" + (f"*{mono}" if mono else ""))
        return " + ".join(parts)


class SeriesMatrix:
    """Rectangular matrix of TruncSeries sharing one (ring, nvars, cap)."""

    __slots__ = ("rows", "cols", "entries")

    def __init__(self, entries):
        self.entries = [list(row) for row in entries]
        self.rows = len(self.entries)
        if self.rows == 0:
            raise ValueError("empty matrix")
        self.cols = len(self.entries[0])
        first = self.entries[0][0]
        for row in self.entries:
            if len(row) != self.cols:
                raise ValueError("ragged matrix")
            for s in row:
                first._compat(s)

    @classmethod
    def identity(cls, ring, n, nvars, cap) -> "SeriesMatrix":
        one = TruncSeries.one(ring, nvars, cap)
        zero = TruncSeries.zero(ring, nvars, cap)
        return cls([[one if i == j else zero for j in range(n)] for i in range(n)])

    def __mul__(self, other: "SeriesMatrix") -> "SeriesMatrix":
        if self.cols != other.rows:
            raise ValueError("inner dimensions differ")
        out = []
        for i in range(self.rows):
            row = []
            for j in range(other.cols):
                acc = TruncSeries.zero(
                    self.entries[0][0].ring,
                    self.entries[0][0].nvars,
                    self.entries[0][0].cap,
                )
                for k in range(self.cols):
                    acc = acc + self.entries[i][k] * other.entries[k][j]
                row.append(acc)
            out.append(row)
        return SeriesMatrix(out)

    def frobenius_twist(self, q: int, i: int = 1) -> "SeriesMatrix":
        return SeriesMatrix(
            [[s.frobenius_twist(q, i) for s in row] for row in self.entries]
        )

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, SeriesMatrix)
            and self.entries == other.entries
        )

    def __repr__(self) -> str:
        body = ",\n ".join("[" + ", ".join(repr(s) for s in row) + "]" for row in self.entries)
        return f"SeriesMatrix(\n {body})"


def row_times_matrix(row, matrix: SeriesMatrix):
    """(row vector) . matrix, returning a list of TruncSeries."""
    row = list(row)
    if len(row) != matrix.rows:
        raise ValueError("row length must match matrix row count")
    out = []
    for j in range(matrix.cols):
        acc = TruncSeries.zero(row[0].ring, row[0].nvars, row[0].cap)
        for k in range(len(row)):
            acc = acc + row[k] * matrix.entries[k][j]
        out.append(acc)
    return out
