"""Period coordinates of the universal deformation, by displays.

The display of the universal deformation over the (n-1)-variable coordinate
patch has a structure matrix A with first row (x_1, pi x_2, ..., pi x_{n-1},
pi), ones/pi on the subdiagonal, and zeros elsewhere; A = C B factors it
through the constant matrix B (A at x = 0) and the unipotent C.  Iterating
the crystalline Frobenius produces a tuple f = (f_0, ..., f_{n-1}) of
truncated series, the projective period coordinates.

Two independent computations are provided: the one-row recurrence
(period_series) and the full matrix product e_0 . A A^(sigma) ...
A^(sigma^(k-1)) B^(-k) (period_series_product).  They must agree exactly.

All series arithmetic is eagerly truncated: at depth k the cap is q^k, and
every statement of the form "equals ... mod x^(q^k)" is an exact statement
about truncated objects.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .series import SeriesMatrix, TruncSeries
from .valuations import INF, LaurentCoeff, RamifiedRing, Val


def default_coeff_ring(p: int = 2, N: int = 16) -> RamifiedRing:
    """Unramified coefficient ring; pi = p at desk scale."""
    return RamifiedRing(p, 1, N)


def _check_q(ring: RamifiedRing, q: int) -> None:
    rest = q
    while rest % ring.p == 0:
        rest //= ring.p
    if rest != 1 or q < 2:
        raise ValueError(f"q = {q} is not a power of the ring prime {ring.p}")


def _ring_for(ring: RamifiedRing | None, q: int) -> RamifiedRing:
    """Default coefficient ring at the prime dividing q."""
    if ring is None:
        if q < 2:
            raise ValueError("q must be a prime power >= 2")
        p = next(c for c in range(2, q + 1) if q % c == 0)
        ring = default_coeff_ring(p)
    _check_q(ring, q)
    return ring


@dataclass(frozen=True)
class DisplayMatrices:
    """Structure matrices of the display: A = C B.

    f_shape is the support pattern shared by A and the Frobenius operator
    matrix of the display: the full first row plus the subdiagonal.
    """

    A: SeriesMatrix
    B: SeriesMatrix
    C: SeriesMatrix
    f_shape: frozenset


def display_matrices(n: int, q: int, cap: int, ring: RamifiedRing | None = None) -> DisplayMatrices:
    if n < 2:
        raise ValueError("need n >= 2")
    ring = _ring_for(ring, q)
    nv = n - 1
    zero = TruncSeries.zero(ring, nv, cap)
    one = TruncSeries.one(ring, nv, cap)
    pi = TruncSeries.const(ring, nv, cap, LaurentCoeff.pi_power(ring, 1))

    def x(i):
        return TruncSeries.variable(ring, nv, cap, i)

    A = [[zero for _ in range(n)] for _ in range(n)]
    B = [[zero for _ in range(n)] for _ in range(n)]
    C = [[one if i == j else zero for j in range(n)] for i in range(n)]

    A[0][0] = x(1)
    for j in range(1, n - 1):
        A[0][j] = pi * x(j + 1)
    A[0][n - 1] = pi
    B[0][n - 1] = pi
    A[1][0] = one
    B[1][0] = one
    for i in range(2, n):
        A[i][i - 1] = pi
        B[i][i - 1] = pi
    for j in range(1, n):
        C[0][j] = x(j)

    shape = frozenset({(0, j) for j in range(n)} | {(i, i - 1) for i in range(1, n)})
    return DisplayMatrices(SeriesMatrix(A), SeriesMatrix(B), SeriesMatrix(C), shape)


def b_inverse(n: int, cap: int, ring: RamifiedRing | None = None) -> SeriesMatrix:
    """Exact inverse of the constant matrix B (Laurent coefficients in pi)."""
    ring = ring or default_coeff_ring()
    nv = n - 1
    zero = TruncSeries.zero(ring, nv, cap)
    one = TruncSeries.one(ring, nv, cap)
    pinv = TruncSeries.const(ring, nv, cap, LaurentCoeff.pi_power(ring, -1))
    M = [[zero for _ in range(n)] for _ in range(n)]
    M[0][1] = one
    for j in range(1, n - 1):
        M[j][j + 1] = pinv
    M[n - 1][0] = pinv
    return SeriesMatrix(M)


@dataclass(frozen=True)
class PeriodTuple:
    n: int
    q: int
    depth: int
    cap: int
    f: tuple

    def to_json_dict(self):
        return {
            "n": self.n,
            "q": self.q,
            "depth": self.depth,
            "cap": self.cap,
            "f": [s.to_json_dict() for s in self.f],
        }


def period_series(n: int, q: int, depth: int, cap: int | None = None,
                  ring: RamifiedRing | None = None) -> PeriodTuple:
    """Period tuple by the one-row recurrence.

    Step k (b = k mod n) right-multiplies the row by B^b C^(sigma^k) B^(-b),
    which in coordinates is a single rank-one update driven by f_b.
    """
    if n < 2 or depth < 0:
        raise ValueError("need n >= 2 and depth >= 0")
    ring = _ring_for(ring, q)
    cap = cap if cap is not None else max(q ** depth, 1)
    nv = n - 1
    f = [TruncSeries.one(ring, nv, cap)] + [
        TruncSeries.zero(ring, nv, cap) for _ in range(n - 1)
    ]
    for k in range(depth):
        b = k % n
        e = q ** k

        def xpow(t):
            exps = tuple(e if s == t - 1 else 0 for s in range(nv))
            return TruncSeries.monomial(ring, nv, cap, exps, LaurentCoeff.one(ring))

        if b == 0:
            f0 = f[0]
            for i in range(1, n):
                f[i] = f[i] + xpow(i) * f0
        else:
            fb = f[b]
            for i in range(n):
                if i == b:
                    continue
                alpha = 0 if 1 <= i <= b - 1 else -1
                t = (n - b + i) % n
                f[i] = f[i] + (xpow(t) * fb).mul_pi_power(alpha)
    return PeriodTuple(n, q, depth, cap, tuple(f))


def period_series_product(n: int, q: int, depth: int, cap: int | None = None,
                          ring: RamifiedRing | None = None) -> PeriodTuple:
    """Oracle: first row of A A^(sigma) ... A^(sigma^(depth-1)) B^(-depth)."""
    if n < 2 or depth < 0:
        raise ValueError("need n >= 2 and depth >= 0")
    ring = _ring_for(ring, q)
    cap = cap if cap is not None else max(q ** depth, 1)
    disp = display_matrices(n, q, cap, ring)
    M = SeriesMatrix.identity(ring, n, n - 1, cap)
    for j in range(depth):
        M = M * disp.A.frobenius_twist(q, j)
    Binv = b_inverse(n, cap, ring)
    for _ in range(depth):
        M = M * Binv
    return PeriodTuple(n, q, depth, cap, tuple(M.entries[0]))


# ---------------------------------------------------------------------
# n = 2 continued fraction
# ---------------------------------------------------------------------

@dataclass(frozen=True)
class CF2Value:
    """A univariate Laurent value: series * x^x_exp, series cap-truncated."""

    series: TruncSeries
    x_exp: int

    def pi_table(self):
        """Sorted (absolute x exponent, pi exponent) pairs."""
        out = []
        for exps in sorted(self.series.coeffs):
            out.append((exps[0] + self.x_exp, self.series.coeffs[exps].pi_exp))
        return out


def period_cf2(q: int, depth: int, cap: int | None = None,
               ring: RamifiedRing | None = None) -> CF2Value:
    """n = 2 period coordinate as a continued fraction.

    Stage k uses entries x^(q^j), j = 2k down to 0, divided by pi for even j,
    outermost entry first.  Arithmetic is cap-truncated throughout, so the
    outermost entries vanish once their exponent reaches the cap; the result
    then agrees with pi f_0 / f_1 computed from period_series at the same cap.
    """
    if depth < 0:
        raise ValueError("depth must be >= 0")
    ring = _ring_for(ring, q)
    full = q ** (2 * depth)
    cap = cap if cap is not None else full
    if cap > full:
        raise ValueError("depth too small for requested cap")
    if depth == 0:
        # the stage-0 convergent is pi/x exactly; a cap of q^0 = 1 cannot
        # hold the monomial x in a denominator, so return it directly
        series = TruncSeries.const(ring, 1, cap, LaurentCoeff.pi_power(ring, 1))
        return CF2Value(series, -1)

    def entry(j):
        coeff = LaurentCoeff.pi_power(ring, -1 if j % 2 == 0 else 0)
        return TruncSeries.monomial(ring, 1, cap, (q ** j,), coeff)

    entries = [entry(j) for j in range(2 * depth, -1, -1)]
    one = TruncSeries.one(ring, 1, cap)
    zero = TruncSeries.zero(ring, 1, cap)
    h_prev, h = one, zero          # h_{-1} = 1, h_0 = 0 (leading term is 1/(a_1+...))
    k_prev, k = zero, one          # k_{-1} = 0, k_0 = 1
    for a in entries:
        h_prev, h = h, a * h + h_prev
        k_prev, k = k, a * k + k_prev
    if k.is_zero:
        raise ValueError("denominator vanished at this cap; increase cap or depth")
    d = min(exps[0] for exps in k.coeffs)
    unit = TruncSeries(ring, 1, cap, {(e[0] - d,): c for e, c in k.coeffs.items()})
    return CF2Value(h * unit.inverse(), -d)


def cf2_convention(q: int, depth: int = 1, ring: RamifiedRing | None = None) -> str:
    """Which normalization of the period ratio the continued fraction computes.

    Tries pi*f_0/f_1 and f_1/f_0 against period_cf2 at the same cap and
    returns the label of the match.
    """
    if depth < 1:
        raise ValueError("convention check needs depth >= 1")
    ring = _ring_for(ring, q)
    cap = q ** (2 * depth)
    guard, cf, pt = _guarded_cf2(q, depth, 2 * depth, ring, cap=cap)
    f0, f1 = pt.f
    bound = Val(Fraction(ring.N))

    def as_laurent(series):
        if series.is_zero:
            return None
        d = min(e[0] for e in series.coeffs)
        unit = TruncSeries(guard, 1, cap, {(e[0] - d,): c for e, c in series.coeffs.items()})
        return unit, d

    u1, d1 = as_laurent(f1)
    ratio_a = CF2Value(f0.mul_pi_power(1) * u1.inverse(), -d1)
    if ratio_a.x_exp == cf.x_exp and _agree_to(ratio_a.series, cf.series, bound):
        return "pi*f0/f1"
    u0, d0 = as_laurent(f0)
    ratio_b = CF2Value(f1 * u0.inverse(), -d0)
    if ratio_b.x_exp == cf.x_exp and _agree_to(ratio_b.series, cf.series, bound):
        return "f1/f0"
    raise ArithmeticError("continued fraction matches neither candidate ratio")


def _pi_span(*series_list) -> int:
    lows = [
        c.pi_exp
        for s in series_list
        for c in s.coeffs.values()
        if not c.is_zero
    ]
    return -min(0, min(lows, default=0))


def _agree_to(a: TruncSeries, b: TruncSeries, bound: Val) -> bool:
    diff = a - b
    return all(
        c.is_zero or c.valuation() >= bound for c in diff.coeffs.values()
    )


def _guarded_cf2(q, depth, pt_depth, ring, cap=None):
    """cf2 and period series recomputed with enough guard digits.

    Coefficients live in a fixed window of ring.N digits above their pi
    exponent; adding terms whose pi exponents differ erodes the top of the
    window, so deep compositions cannot be compared by raw digit equality.
    Products add pi-exponent floors, so twice the worst single-series span
    is enough headroom; the loop re-runs once if the first guess was short.
    """
    guard_digits = 2 * depth + 4
    for _ in range(2):
        guard = RamifiedRing(ring.p, ring.m, ring.N + guard_digits)
        pt = period_series(2, q, pt_depth, cap=cap, ring=guard)
        cf = period_cf2(q, depth, cap=pt.cap, ring=guard)
        needed = 2 * _pi_span(cf.series, pt.f[0], pt.f[1]) + 4
        if needed <= guard_digits:
            break
        guard_digits = needed
    return guard, cf, pt


def cf2_cross_check(q: int, depth: int, ring: RamifiedRing | None = None) -> bool:
    """cf2 * f_1 = pi * f_0 * x^(-x_exp), to the ring's digit precision.

    The identity is evaluated with guard digits covering the pi-exponent
    span of every factor, and the two sides must agree at each coefficient
    to valuation >= ring.N.
    """
    ring = _ring_for(ring, q)
    guard, cf, pt = _guarded_cf2(q, depth, depth, ring)
    lhs = cf.series * pt.f[1]
    rhs = pt.f[0] * TruncSeries.monomial(
        guard, 1, pt.cap, (-cf.x_exp,), LaurentCoeff.pi_power(guard, 1)
    )
    return _agree_to(lhs, rhs, Val(Fraction(ring.N)))


# ---------------------------------------------------------------------
# evaluation at exact points
# ---------------------------------------------------------------------

def evaluate_periods(pt: PeriodTuple, coords, point_ring: RamifiedRing):
    """Substitute exact coordinates into each f_i.

    coords: one RamifiedElement of point_ring per variable x_1..x_{n-1}.
    Returns a list of (Val, below_precision) pairs.  The common power
    pi^(e_min) of each component is pulled out exactly, so a finite answer
    is exact; an all-zero digit sum reports (INF, True) rather than lying.
    """
    coords = list(coords)
    if len(coords) != pt.n - 1:
        raise ValueError("need one coordinate per variable")
    for c in coords:
        if c.ring != point_ring:
            raise ValueError("coordinates must live in point_ring")
    out = []
    for comp in pt.f:
        if comp.is_zero:
            out.append((Val(INF), True))
            continue
        e_min = comp.min_pi_exponent()
        total = point_ring.zero()
        for exps, coeff in comp.coeffs.items():
            term = coeff.unit.embed(point_ring)
            term = term.shift_up(point_ring.m * (coeff.pi_exp - e_min))
            for c, e in zip(coords, exps):
                if e:
                    term = term * c ** e
            total = total + term
        v, flag = total.valuation_report()
        out.append((Val(e_min) + v, flag))
    return out


# ---------------------------------------------------------------------
# domains of the period map
# ---------------------------------------------------------------------

@dataclass(frozen=True)
class DomainReport:
    source: bool
    target_witness: tuple
    max_source_bound: Val | None
    min_target_bound: Val


def isomorphism_domains(n: int, q: int, vals) -> DomainReport:
    """Inequality system delimiting where the period map is an isomorphism.

    vals are v(x_1), ..., v(x_{n-1}) (rationals or INF); the boundary
    conventions are v(x_0) = v(pi) = 1 and v(x_n) = v(1) = 0.  The source
    condition is: for all 1 <= i <= n and 0 <= j <= n-1,

        (1 - v(x_i)) / (q^n (q^i - 1))  <  v(x_j) / (q^n - q^j).

    Infinite v(x_i) makes the left side -infinity (skip); infinite v(x_j)
    makes the right side +infinity (skip).  Both sides are always populated
    by the i = n and j = 0 conventions.
    """
    vals = [v if isinstance(v, Val) else Val(v) for v in vals]
    if len(vals) != n - 1:
        raise ValueError("need n-1 coordinate valuations")
    qn = q ** n
    lhs = []
    for i in range(1, n + 1):
        v = Val(0) if i == n else vals[i - 1]
        if v.is_inf:
            continue
        lhs.append(Fraction(1 - v.as_fraction(), qn * (q ** i - 1)))
    rhs = []
    for j in range(0, n):
        v = Val(1) if j == 0 else vals[j - 1]
        if v.is_inf:
            continue
        rhs.append(Fraction(v.as_fraction(), qn - q ** j))
    max_lhs = max(lhs)
    min_rhs = min(rhs)
    witness = tuple([Val(1)] + vals + [Val(0)])
    return DomainReport(
        source=max_lhs < min_rhs,
        target_witness=witness,
        max_source_bound=Val(max_lhs),
        min_target_bound=Val(min_rhs),
    )
