"""Canonical-subgroup quotients of Newton polygons and domain reduction.

The rank-q^i canonical subgroup of a module with polygon lambda_1 >= ... >=
lambda_n exists when lambda_i > lambda_{i+1}; it consists of 0 together with
the points of the i highest slope strata.  Quotienting by it transforms the
valuation profile of the pi-torsion in two ways:

  type A: surviving pi-torsion points of value lambda_j (j > i) map to
          points of value q^i lambda_j, in fibers of size q^i;
  type B: a kernel point z of value b acquires new pi-torsion above it; the
          valuations of the q^n solutions of [pi](y) = z are read off the
          lower hull of (0, b) and the source polygon's vertices, and each
          solution maps to a point of value q^i times its own.

Genericity (every type-B root value strictly below lambda_i) is asserted,
never assumed; ties raise NonGenericCollision.

All slope arithmetic is exact Fractions.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .polygon import (
    NewtonPolygon,
    boundary_indices,
    in_gross_hopkins,
    in_H,
)
from .valuations import INF, Val


class NonGenericCollision(ValueError):
    """A valuation tie the generic profile formulas cannot resolve."""


class BudgetExceeded(RuntimeError):
    """Reduction did not reach the good domain within the step budget."""


@dataclass(frozen=True)
class KernelType:
    """Isotypic shape of a pi^k-kernel: r_1 >= r_2 >= ... >= r_k >= 1.

    Level m of the kernel has rank q^(r_m); the height is sum(r).
    """

    r: tuple

    def __post_init__(self):
        r = tuple(int(x) for x in self.r)
        object.__setattr__(self, "r", r)
        if any(x < 1 for x in r):
            raise ValueError("kernel ranks must be >= 1")
        if any(r[m] < r[m + 1] for m in range(len(r) - 1)):
            raise ValueError("kernel ranks must be non-increasing")

    @property
    def k(self) -> int:
        return len(self.r)

    @property
    def height(self) -> int:
        return sum(self.r)


@dataclass(frozen=True)
class IsogenyStep:
    rank: int
    source: NewtonPolygon
    image: NewtonPolygon
    kernel_values: tuple
    image_values: tuple


def _division_profile(poly: NewtonPolygon, b: Fraction):
    """Valuations of the q^n solutions of [pi](y) = z with v(z) = b.

    Lower hull of (0, b) and the polygon's vertices; a hull segment of
    width w and descent slope s contributes w roots of valuation s.
    """
    points = [(Fraction(0), Fraction(b))] + [
        (Fraction(x), y) for x, y in poly.vertex_points()
    ]
    hull = [points[0]]
    for p in points[1:]:
        while len(hull) >= 2:
            (x1, y1), (x2, y2) = hull[-2], hull[-1]
            if (x2 - x1) * (p[1] - y1) - (y2 - y1) * (p[0] - x1) <= 0:
                hull.pop()
            else:
                break
        hull.append(p)
    roots = []
    for (x1, y1), (x2, y2) in zip(hull, hull[1:]):
        width = x2 - x1
        slope = (y1 - y2) / width
        if width:
            roots.append((slope, int(width)))
    return roots


def _polygon_from_value_multiset(n: int, q: int, values) -> NewtonPolygon:
    """Rebuild a polygon from q^n - 1 (value, mult) pairs.

    Values are sorted descending and must be constant on each block of size
    q^j - q^(j-1); a straddling value is a non-generic collision.
    """
    total = sum(m for _, m in values)
    if total != q ** n - 1:
        raise NonGenericCollision(f"image point count {total} != q^n - 1")
    flat = []
    for v, m in sorted(values, key=lambda t: t[0], reverse=True):
        flat.append((v, m))
    slopes = []
    idx, remaining = 0, 0
    current = None
    for j in range(1, n + 1):
        need = q ** j - q ** (j - 1)
        block_val = None
        while need:
            if remaining == 0:
                current, remaining = flat[idx]
                idx += 1
            if block_val is None:
                block_val = current
            elif current != block_val:
                raise NonGenericCollision(
                    "image values straddle a slope block boundary"
                )
            take = min(need, remaining)
            need -= take
            remaining -= take
        slopes.append(block_val)
    return NewtonPolygon(n, q, slopes)


def canonical_quotient(poly: NewtonPolygon, i: int) -> IsogenyStep:
    """Quotient by the rank-q^i canonical subgroup.

    Requires the strict rupture lambda_i > lambda_{i+1}; the kernel is
    {0} and the points of values lambda_1, ..., lambda_i.
    """
    n, q = poly.n, poly.q
    if not 1 <= i <= n - 1:
        raise ValueError("canonical rank i must satisfy 1 <= i <= n-1")
    if not poly.slopes[i - 1] > poly.slopes[i]:
        raise NonGenericCollision(
            f"no rupture at i={i}: lambda_{i} = lambda_{i+1}"
        )
    lam_i = poly.slopes[i - 1]
    qi = q ** i

    kernel = [(Val(INF), 1)]
    by_value = {}
    for j in range(1, i + 1):
        lam = poly.slopes[j - 1]
        by_value[lam] = by_value.get(lam, 0) + (q ** j - q ** (j - 1))
    for v in sorted(by_value, reverse=True):
        kernel.append((Val(v), by_value[v]))

    image = {}

    def add(value, mult):
        image[value] = image.get(value, 0) + mult

    # type A: surviving pi-torsion strata
    for j in range(i + 1, n + 1):
        mult = q ** j - q ** (j - 1)
        if mult % qi:
            raise NonGenericCollision("type A multiplicity not divisible by q^i")
        add(poly.slopes[j - 1] * qi, mult // qi)

    # type B: new torsion above each nonzero kernel point
    for b, m_b in by_value.items():
        for r, w in _division_profile(poly, b):
            if not r < lam_i:
                raise NonGenericCollision(
                    "division root value collides with the kernel stratum"
                )
            if (w * m_b) % qi:
                raise NonGenericCollision("type B multiplicity not divisible by q^i")
            add(r * qi, (w * m_b) // qi)

    values = tuple(sorted(image.items(), key=lambda t: t[0], reverse=True))
    new_poly = _polygon_from_value_multiset(n, q, values)
    # conservation: the image profile carries total mass 1 by construction
    mass = sum(v * m for v, m in values)
    assert mass == 1, mass
    return IsogenyStep(i, poly, new_poly, tuple(kernel), values)


def boundary_quotient_profile(poly: NewtonPolygon, i: int):
    """Closed-form image profile for a polygon in D (independent of the
    generic algorithm): {q^i lambda_j x (q^j - q^(j-1))/q^i : j > i} and
    {lambda_j / q^(n-i) x (q^j - q^(j-1)) q^(n-i) : j <= i}."""
    n, q = poly.n, poly.q
    if not 1 <= i <= n - 1:
        raise ValueError("rank i out of range")
    if not in_gross_hopkins(poly):
        raise ValueError("closed form is only valid on the good domain")
    out = {}
    for j in range(i + 1, n + 1):
        v = poly.slopes[j - 1] * q ** i
        out[v] = out.get(v, 0) + (q ** j - q ** (j - 1)) // q ** i
    for j in range(1, i + 1):
        v = poly.slopes[j - 1] / q ** (n - i)
        out[v] = out.get(v, 0) + (q ** j - q ** (j - 1)) * q ** (n - i)
    return tuple(sorted(out.items(), key=lambda t: t[0], reverse=True))


@dataclass(frozen=True)
class KernelImageReport:
    values: tuple
    sum_values: Fraction
    lower_bound: Fraction
    upper_bound: Fraction


def kernel_image_values(poly: NewtonPolygon, kt: KernelType, flags) -> KernelImageReport:
    """Valuation profile of f(M') for a pi^k-kernel of type kt.

    flags a_1 <= ... <= a_r (r = r_k, a_j >= j) selects which slope strata
    survive into f(M'); the values are lambda_{a_j} / q^(nk - height) with
    multiplicity q^j - q^(j-1).  Also reports the two bounding sums: any
    admissible M' must reach sum >= lower_bound, while on D the achievable
    sum is <= upper_bound; for k >= 2 upper < lower, certifying that no
    such submodule exists over the good domain.
    """
    n, q = poly.n, poly.q
    if not in_gross_hopkins(poly):
        raise ValueError("kernel image profile requires the polygon in D")
    if kt.r and kt.r[0] > n - 1:
        raise ValueError("kernel rank exceeds n-1")
    flags = tuple(int(a) for a in flags)
    r = kt.r[-1] if kt.r else 0
    if len(flags) != r:
        raise ValueError("need one flag per surviving rank")
    if any(flags[j] < flags[j - 1] for j in range(1, len(flags))):
        raise ValueError("flags must be non-decreasing")
    if any(a < j + 1 or a > n for j, a in enumerate(flags)):
        raise ValueError("flag a_j must satisfy j <= a_j <= n")
    if not kt.r:
        return KernelImageReport((), Fraction(0), Fraction(0), Fraction(0))
    k = kt.k
    gap = n * k - kt.height
    scale = q ** gap
    values = []
    total = Fraction(0)
    for j, a in enumerate(flags, start=1):
        v = poly.slopes[a - 1] / scale
        mult = q ** j - q ** (j - 1)
        values.append((v, mult))
        total += v * mult
    lower = Fraction(r, n * q ** (n - r))
    upper = Fraction(r, n * q ** (n + (k - 1) - r))
    return KernelImageReport(tuple(values), total, lower, upper)


def admissible_targets(poly: NewtonPolygon):
    """Ranks i whose canonical quotient stays on the boundary strata of D."""
    if not in_gross_hopkins(poly):
        raise ValueError("admissible targets are defined on the good domain")
    return tuple(sorted(boundary_indices(poly)))


@dataclass(frozen=True)
class ReduceResult:
    initial: NewtonPolygon
    final: NewtonPolygon
    steps: tuple
    trail: tuple


def reduce_to_domain(poly: NewtonPolygon, budget: int = 32) -> ReduceResult:
    """Iterate canonical quotients into D, trying the largest rupture first.

    A rupture index whose quotient hits a non-generic collision is skipped
    in favor of the next smaller one; only a polygon where every rupture
    collides raises.
    """
    steps = []
    trail = [poly]
    current = poly
    while not in_gross_hopkins(current):
        if len(steps) >= budget:
            raise BudgetExceeded(f"not in D after {budget} quotients")
        step = None
        collision = None
        for i in range(current.n - 1, 0, -1):
            if current.slopes[i - 1] > current.slopes[i]:
                try:
                    step = canonical_quotient(current, i)
                    break
                except NonGenericCollision as exc:
                    collision = exc
        if step is None:
            if collision is not None:
                raise collision
            # equal-slope polygons are always in D; defensive only
            raise NonGenericCollision("no rupture available outside D")
        steps.append(step.rank)
        current = step.image
        trail.append(current)
    return ReduceResult(poly, current, tuple(steps), tuple(trail))


@dataclass(frozen=True)
class DistinctnessCertificate:
    gap: int
    candidate_max: Fraction
    slope_min: Fraction
    holds: bool


def distinctness_certificate(poly: NewtonPolygon, kt: KernelType) -> DistinctnessCertificate:
    """Certificate that a pi-power kernel type cannot mimic pi-torsion.

    For a polygon in H and a type of height divisible by n, the candidate
    values lambda_a / q^gap (gap = nk - height, a positive multiple of n)
    all sit strictly below every slope: lambda_a / q^gap <= lambda_1 / q^n
    < lambda_n.  The image multiset can therefore never equal the original
    profile unless the kernel is pi-power itself.
    """
    n, q = poly.n, poly.q
    if not in_H(poly):
        raise ValueError("certificate requires the polygon in H")
    if kt.r and kt.r[0] > n - 1:
        raise ValueError("kernel rank exceeds n-1")
    if kt.height % n:
        raise ValueError("certificate applies to heights divisible by n")
    gap = n * kt.k - kt.height
    if gap < n:
        raise AssertionError("gap must be a positive multiple of n")
    candidate_max = poly.slopes[0] / q ** gap
    slope_min = poly.slopes[-1]
    holds = candidate_max <= poly.slopes[0] / q ** n < slope_min
    return DistinctnessCertificate(gap, candidate_max, slope_min, holds)
