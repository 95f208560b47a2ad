"""Newton polygons of pi-divisible modules of height n.

A polygon here is the valuation profile of the pi-torsion of a height-n
module: slopes lambda_1 >= ... >= lambda_n > 0, slope lambda_j spanning the
abscissas q^(j-1)..q^j, total mass sum (q^j - q^(j-1)) lambda_j = 1.  From
coordinate valuations it arises as the lower convex hull of (1, 1), the
finite points (q^i, v(x_i)), and (q^n, 0); the convention v(x_0) = v(pi) = 1
anchors the left end.

Two distinguished loci:

  D ("good reduction of the canonical filtration"): every hull value at q^i
    is >= 1 - i/n, i.e. the polygon lies on or above the boundary polygon
    with vertices (q^i, 1 - i/n).
  H ("period map is injective on fibers"): lambda_1 / q^n < lambda_n.

Everything is exact Fraction arithmetic.
"""

from __future__ import annotations

from fractions import Fraction

from .valuations import Val


def _as_val(v) -> Val:
    return v if isinstance(v, Val) else Val(v)


class NewtonPolygon:
    __slots__ = ("n", "q", "slopes", "vertex_vals")

    def __init__(self, n: int, q: int, slopes):
        if n < 1 or q < 2:
            raise ValueError("need n >= 1 and q >= 2")
        slopes = tuple(s if isinstance(s, Fraction) else Fraction(s) for s in slopes)
        if len(slopes) != n:
            raise ValueError("need exactly n slopes")
        vv = [Fraction(1)]
        width = 1
        prev = None
        for s in slopes:
            if s <= 0:
                raise ValueError("slopes must be positive")
            if prev is not None and s > prev:
                raise ValueError("slopes must be non-increasing")
            prev = s
            vv.append(vv[-1] - s * (width * (q - 1)))
            width *= q
        if vv[-1] != 0:
            # mass sum (q^j - q^(j-1)) lambda_j differs from 1 exactly when
            # the right end misses zero
            raise ValueError(f"total mass is {1 - vv[-1]}, not 1")
        self.n = n
        self.q = q
        self.slopes = slopes
        self.vertex_vals = tuple(vv)

    def vertex_points(self):
        return [(self.q ** i, self.vertex_vals[i]) for i in range(self.n + 1)]

    def hull_value(self, x) -> Fraction:
        """Piecewise-linear hull value at abscissa x in [1, q^n]."""
        x = Fraction(x)
        if not 1 <= x <= self.q ** self.n:
            raise ValueError("abscissa outside [1, q^n]")
        for j in range(1, self.n + 1):
            left, right = self.q ** (j - 1), self.q ** j
            if x <= right:
                return self.vertex_vals[j - 1] - self.slopes[j - 1] * (x - left)
        raise AssertionError("unreachable")

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, NewtonPolygon)
            and (self.n, self.q, self.slopes) == (other.n, other.q, other.slopes)
        )

    def __hash__(self):
        return hash((self.n, self.q, self.slopes))

    def __repr__(self) -> str:
        body = ", ".join(str(s) for s in self.slopes)
        return f"NewtonPolygon(n={self.n}, q={self.q}, slopes=({body}))"

    def to_json_dict(self):
        return {
            "n": self.n,
            "q": self.q,
            "slopes": [{"num": s.numerator, "den": s.denominator} for s in self.slopes],
            "vertex_vals": [
                {"num": v.numerator, "den": v.denominator} for v in self.vertex_vals
            ],
            "in_D": in_gross_hopkins(self),
            "in_H": in_H(self),
            "boundary_indices": sorted(boundary_indices(self)),
        }


def _lower_hull(points):
    """Lower convex hull of x-sorted points; collinear interior points drop."""
    hull = []
    for p in points:
        while len(hull) >= 2:
            (x1, y1), (x2, y2) = hull[-2], hull[-1]
            if (x2 - x1) * (p[1] - y1) - (y2 - y1) * (p[0] - x1) <= 0:
                hull.pop()
            else:
                break
        hull.append(p)
    return hull


def polygon_from_vals(n: int, q: int, vals) -> NewtonPolygon:
    """Hull of (1,1), (q^i, v(x_i)) for finite entries, and (q^n, 0).

    vals has length n-1; INF entries contribute no point.  Each finite
    valuation must be positive, else the polygon degenerates (a unit
    coordinate forces a zero slope).
    """
    vals = [_as_val(v) for v in vals]
    if len(vals) != n - 1:
        raise ValueError("need n-1 coordinate valuations")
    points = [(1, Fraction(1))]  # integer abscissas q^i, already x-sorted
    for i, v in enumerate(vals, start=1):
        if v.is_inf:
            continue
        f = v.as_fraction()
        if f <= 0:
            raise ValueError("coordinate valuations must be positive (unit ball interior)")
        points.append((q ** i, f))
    points.append((q ** n, Fraction(0)))
    hull = _lower_hull(points)

    slopes = []
    seg = 0
    seg_slope = (hull[0][1] - hull[1][1]) / (hull[1][0] - hull[0][0])
    for j in range(1, n + 1):
        while hull[seg + 1][0] < q ** j:
            seg += 1
            seg_slope = (hull[seg][1] - hull[seg + 1][1]) / (
                hull[seg + 1][0] - hull[seg][0]
            )
        slopes.append(seg_slope)
    return NewtonPolygon(n, q, slopes)


def lambda_extremes(n: int, q: int, vals):
    """Closed forms for (lambda_1, lambda_n), bypassing the hull.

    lambda_1 = max over 1 <= i <= n of (1 - v(x_i)) / (q^i - 1),
    lambda_n = min over 0 <= j <= n-1 of v(x_j) / (q^n - q^j),
    with v(x_0) = 1 and v(x_n) = 0; INF entries drop out of both.
    """
    vals = [_as_val(v) for v in vals]
    if len(vals) != n - 1:
        raise ValueError("need n-1 coordinate valuations")
    lam1 = []
    for i in range(1, n + 1):
        v = Val(0) if i == n else vals[i - 1]
        if v.is_inf:
            continue
        lam1.append(Fraction(1 - v.as_fraction(), q ** i - 1))
    lamn = []
    for j in range(0, n):
        v = Val(1) if j == 0 else vals[j - 1]
        if v.is_inf:
            continue
        lamn.append(Fraction(v.as_fraction(), q ** n - q ** j))
    return max(lam1), min(lamn)


def in_gross_hopkins(poly: NewtonPolygon) -> bool:
    """Polygon lies on or above the boundary polygon (q^i, 1 - i/n)."""
    n = poly.n
    return all(poly.vertex_vals[i] >= Fraction(n - i, n) for i in range(n + 1))


def vals_in_gross_hopkins(n: int, vals) -> bool:
    """Coordinate form of the D condition: v(x_i) >= 1 - i/n for all i."""
    vals = [_as_val(v) for v in vals]
    for i, v in enumerate(vals, start=1):
        if not v.is_inf and v.as_fraction() < Fraction(n - i, n):
            return False
    return True


def boundary_indices(poly: NewtonPolygon) -> frozenset:
    """Indices 1 <= i <= n-1 where the hull touches (q^i, 1 - i/n) exactly."""
    n = poly.n
    return frozenset(
        i for i in range(1, n) if poly.vertex_vals[i] == Fraction(n - i, n)
    )


def in_H(poly: NewtonPolygon) -> bool:
    return poly.slopes[0] < poly.slopes[-1] * poly.q ** poly.n


def vals_in_H(n: int, q: int, vals) -> bool:
    lam1, lamn = lambda_extremes(n, q, vals)
    return lam1 < lamn * q ** n


def cm_polygon(n: int, q: int, e: int) -> NewtonPolygon:
    """Polygon of the module with multiplication by the degree-n field with
    ramification e (e | n): e slope blocks of length f = n/e, block k having
    slope 1 / (e (q^((k+1)f) - q^(kf))).

    e = n gives the boundary polygon of D; e = 1 the single-slope polygon.
    """
    if e < 1 or n % e != 0:
        raise ValueError("e must divide n")
    f = n // e
    slopes = []
    for k in range(e):
        s = Fraction(1, e * (q ** ((k + 1) * f) - q ** (k * f)))
        slopes.extend([s] * f)
    return NewtonPolygon(n, q, slopes)


def gh_boundary_polygon(n: int, q: int) -> NewtonPolygon:
    """Vertices (q^i, 1 - i/n): the fully ramified CM polygon."""
    return cm_polygon(n, q, n)


def torsion_valuations(poly: NewtonPolygon, k: int):
    """Valuation profile of the pi^k-torsion for a polygon in H.

    Level m contributes values lambda_j / q^(n(m-1)) with multiplicity
    (q^j - q^(j-1)) q^(n(m-1)); in H the levels do not interleave, which is
    what makes this the full sorted profile.  Returns (Val, multiplicity)
    pairs sorted by decreasing value; total count q^(nk) - 1.
    """
    if k < 1:
        raise ValueError("need k >= 1")
    if not in_H(poly):
        raise ValueError("torsion profile formula requires the polygon in H")
    q, n = poly.q, poly.n
    acc = {}
    for m in range(1, k + 1):
        scale = q ** (n * (m - 1))
        for j, lam in enumerate(poly.slopes, start=1):
            v = lam / scale
            acc[v] = acc.get(v, 0) + (q ** j - q ** (j - 1)) * scale
    return [(Val(v), acc[v]) for v in sorted(acc, reverse=True)]


# ---------------------------------------------------------------------
# rendering
# ---------------------------------------------------------------------

def render_ascii(poly: NewtonPolygon, width: int = 61, height: int = 21) -> str:
    """Character plot in log_q abscissa; '*' hull, '.' boundary polygon,
    '#' where they coincide."""
    bound = gh_boundary_polygon(poly.n, poly.q)
    grid = [[" "] * width for _ in range(height)]

    def plot(p, ch):
        # vertices at integer log_q abscissas, straight segments between
        for col in range(width):
            t = Fraction(col * p.n, width - 1)
            lo = min(int(t), p.n - 1)
            frac = t - lo
            y = p.vertex_vals[lo] + (p.vertex_vals[lo + 1] - p.vertex_vals[lo]) * frac
            row = height - 1 - int(round(float(y) * (height - 1)))
            row = min(max(row, 0), height - 1)
            cur = grid[row][col]
            grid[row][col] = "#" if cur not in (" ", ch) else ch

    plot(bound, ".")
    plot(poly, "*")
    lines = ["".join(r).rstrip() for r in grid]
    header = f"hull (*) vs boundary polygon (.) ; n={poly.n} q={poly.q}"
    return "\n".join([header] + lines)


def render_svg(poly: NewtonPolygon) -> str:
    """Deterministic SVG: hull polyline with the boundary polygon overlay."""
    bound = gh_boundary_polygon(poly.n, poly.q)
    W, H, PAD = 440, 320, 40

    def px(i):
        return PAD + Fraction(i * (W - 2 * PAD), poly.n)

    def py(v):
        return PAD + (1 - Fraction(v)) * (H - 2 * PAD)

    def pts(p):
        return " ".join(
            f"{float(px(i)):.2f},{float(py(p.vertex_vals[i])):.2f}"
            for i in range(p.n + 1)
        )

    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" viewBox="0 0 {W} {H}">',
        f'<rect width="{W}" height="{H}" fill="white"/>',
        f'<line x1="{PAD}" y1="{H-PAD}" x2="{W-PAD}" y2="{H-PAD}" stroke="black"/>',
        f'<line x1="{PAD}" y1="{PAD}" x2="{PAD}" y2="{H-PAD}" stroke="black"/>',
        f'<polyline points="{pts(bound)}" fill="none" stroke="gray" stroke-dasharray="6 4"/>',
        f'<polyline points="{pts(poly)}" fill="none" stroke="blue" stroke-width="2"/>',
    ]
    for i in range(poly.n + 1):
        parts.append(
            f'<circle cx="{float(px(i)):.2f}" cy="{float(py(poly.vertex_vals[i])):.2f}" r="3" fill="blue"/>'
        )
        parts.append(
            f'<text x="{float(px(i)):.2f}" y="{H - PAD + 16}" font-size="11" text-anchor="middle">q^{i}</text>'
        )
    for j, s in enumerate(poly.slopes, start=1):
        parts.append(
            f'<text x="{PAD + 8}" y="{PAD + 14 * j}" font-size="11">lambda_{j} = {s}</text>'
        )
    parts.append("</svg>")
    return "\n".join(parts)
