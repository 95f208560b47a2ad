"""Polydisk cells over lattice vertices and their boundary gluing.

A cell carries a building vertex, a principal congruence level m >= 1, and
the polygon bound cutting out the good-reduction locus.  Its boundary
strata are indexed by nonzero proper subspaces E of pi^(-1)Lambda/Lambda
(coordinates taken in the canonical basis p^(-1) * cols).  Gluing a stratum
crosses to the vertex of the preimage lattice p^(-1)(E); the matched
stratum on the far side is the image of pi^(-1)Lambda, and gluing twice is
the identity on components.

The transition matrix of a glue step is the honest mod-p coordinate map
between the two pi-quotients; composing transitions along a 2-simplex and
comparing against the direct glue is the cocycle check.  All of it is exact
F_p linear algebra on canonical echelon forms.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd

from .building import (
    EDGE_HEIGHT_SIGN,
    BuildingVertex,
    Lattice,
    _lift_rows,
    make_vertex,
)
from .fqlin import (
    echelon_subspaces,
    gaussian_binomial,
    image_rows,
    kernel_basis,
    mat_mul,
    rref,
    span_contains,
    span_equal,
)
from .hecke import canonical_quotient
from .polygon import NewtonPolygon, gh_boundary_polygon


class LevelError(ValueError):
    """Congruence level too coarse for the requested boundary operation."""


@dataclass(frozen=True)
class Cell:
    vertex: BuildingVertex
    level: int
    constraint: NewtonPolygon


def make_cell(vertex: BuildingVertex, level: int) -> Cell:
    if level < 1:
        raise LevelError("cells require principal level >= 1")
    return Cell(vertex, level, gh_boundary_polygon(vertex.n, vertex.p))


@dataclass(frozen=True)
class BoundaryComponent:
    cell: Cell
    rank: int
    subspace: tuple  # echelon rows over F_p, dim = rank


def boundary_components(cell: Cell, rank: int):
    """All rank-dim boundary strata; count is the Gaussian binomial."""
    n, p = cell.vertex.n, cell.vertex.p
    if not 1 <= rank <= n - 1:
        raise ValueError("boundary rank must satisfy 1 <= rank <= n-1")
    if cell.level < 1:
        raise LevelError("boundary strata need level >= 1")
    return [
        BoundaryComponent(cell, rank, rows)
        for rows in echelon_subspaces(n, rank, p)
    ]


def full_flags(cell: Cell):
    """Complete flags E_1 < E_2 < ... < E_{n-1} of boundary subspaces."""
    n, p = cell.vertex.n, cell.vertex.p

    def extend(flag, d):
        if d == n:
            yield tuple(flag)
            return
        for rows in echelon_subspaces(n, d, p):
            if flag and not span_contains(rows, flag[-1], p):
                continue
            yield from extend(flag + [rows], d + 1)

    return list(extend([], 1))


def _vp_min(matrix_rows, p: int):
    best = None
    for row in matrix_rows:
        for x in row:
            if x == 0:
                continue
            v = 0
            num, den = x.numerator, x.denominator
            while num % p == 0:
                num //= p
                v += 1
            while den % p == 0:
                den //= p
                v -= 1
            if best is None or v < best:
                best = v
    return best


def _coords_matrix(target: Lattice, source: Lattice):
    """Columns of `source` in the basis of `target` (exact rationals)."""
    return [target.solve_coords(col) for col in source.cols]


def _mod_p_matrix(cols_of_coords, p: int):
    """Transpose column list into mod-p rows; entries must be p-integral."""
    n = len(cols_of_coords)
    rows = []
    for r in range(n):
        row = []
        for c in range(n):
            x = cols_of_coords[c][r]
            if x.denominator % p == 0:
                raise ArithmeticError("non-integral transition entry")
            row.append((x.numerator * pow(x.denominator, -1, p)) % p)
        rows.append(tuple(row))
    return tuple(rows)


@dataclass(frozen=True)
class GlueResult:
    component: BoundaryComponent
    transition: tuple  # n x n rows over F_p, kernel = source subspace


def glue_edge(b: BoundaryComponent) -> GlueResult:
    """Cross a boundary stratum to its matched stratum at the far vertex.

    The far lattice is Lambda' = Lambda + p^(-1) E; the congruence level m
    must satisfy p^m End(Lambda) c p End(Lambda') (two-sided stabilizer
    condition), which needs m >= 2 whenever the stratum is proper.
    """
    cell = b.cell
    vtx = cell.vertex
    lat, n, p = vtx.lat, vtx.n, vtx.p
    gens = [list(c) for c in lat.cols] + _lift_rows(lat, b.subspace, scale_exp=-1)
    far = Lattice.from_cols(p, gens)

    fwd = _coords_matrix(far, lat)      # B'^{-1} B
    bwd = _coords_matrix(lat, far)      # B^{-1} B'
    lvl = cell.level - 1 + (_vp_min(fwd, p) or 0) + (_vp_min(bwd, p) or 0)
    if lvl < 0:
        raise LevelError(
            f"level {cell.level} too coarse: stabilizer condition fails by p^{-lvl}"
        )

    T = _mod_p_matrix(fwd, p)
    if kernel_basis(T, p) != rref(b.subspace, p)[0]:
        raise ArithmeticError("transition kernel does not match the stratum")
    # image of T: its columns, echelonized as row vectors
    star = rref([tuple(row) for row in zip(*T)], p)[0]
    if len(star) != n - b.rank:
        raise ArithmeticError("transition image has wrong dimension")

    far_vertex = make_vertex(far, vtx.h + EDGE_HEIGHT_SIGN * b.rank)
    far_constraint = canonical_quotient(cell.constraint, b.rank).image
    far_cell = Cell(far_vertex, cell.level, far_constraint)
    return GlueResult(BoundaryComponent(far_cell, n - b.rank, star), T)


def cocycle_check(cell: Cell, inner, outer, corruption=None) -> bool:
    """Composing the inner glue then the quotient glue equals the direct glue.

    inner and outer are boundary subspaces of the same cell with
    span(inner) contained in span(outer).  Equal spans are the degenerate
    triangle: trivially true.  `corruption` (an invertible mod-p matrix)
    is inserted into the intermediate relabeling to exercise the negative
    direction; any nontrivial corruption must break the comparison.
    """
    p = cell.vertex.p
    inner_r = rref(inner, p)[0]
    outer_r = rref(outer, p)[0]
    if not span_contains(outer_r, inner_r, p):
        raise ValueError("inner stratum must sit inside the outer one")
    if inner_r == outer_r:
        return True

    direct = glue_edge(BoundaryComponent(cell, len(outer_r), outer_r))
    step1 = glue_edge(BoundaryComponent(cell, len(inner_r), inner_r))
    mid_cell = step1.component.cell
    relabel = step1.transition
    if corruption is not None:
        relabel = mat_mul(corruption, relabel, p)
    mid_sub = image_rows(relabel, outer_r, p)
    if len(mid_sub) != len(outer_r) - len(inner_r):
        return False
    if not span_contains(step1.component.subspace, mid_sub, p):
        return False
    step2 = glue_edge(BoundaryComponent(mid_cell, len(mid_sub), mid_sub))
    if step2.component.cell.vertex != direct.component.cell.vertex:
        return False
    composite = mat_mul(step2.transition, relabel, p)
    if kernel_basis(composite, p) != rref(outer_r, p)[0]:
        return False
    comp_image = rref([tuple(row) for row in zip(*composite)], p)[0]
    if comp_image != rref(list(direct.component.subspace), p)[0]:
        return False
    direct_T = direct.transition
    return composite == direct_T


@dataclass(frozen=True)
class GluedEdge:
    cell_a: int
    subspace_a: tuple
    cell_b: int
    subspace_b: tuple
    rank: int


@dataclass(frozen=True)
class CellComplex:
    level: int
    cells: tuple
    edges: tuple
    dangling: tuple

    def signature(self):
        """Relabeling-invariant summary for equivariance comparisons."""
        n = self.cells[0].vertex.n if self.cells else 0
        degree = []
        for ci in range(len(self.cells)):
            per_rank = tuple(
                sum(
                    1
                    for e in self.edges
                    if e.rank == r and ci in (e.cell_a, e.cell_b)
                )
                for r in range(1, n)
            )
            degree.append(per_rank)
        return (
            len(self.cells),
            len(self.edges),
            tuple(sorted(degree)),
            tuple(sorted(self.dangling_counts())),
        )

    def dangling_counts(self):
        counts = {}
        for ci, _, _ in self.dangling:
            counts[ci] = counts.get(ci, 0) + 1
        return list(counts.values())

    def to_json_dict(self):
        return {
            "level": self.level,
            "cells": [
                {
                    "vertex": c.vertex.json_dict(),
                    "constraint": c.constraint.to_json_dict(),
                }
                for c in self.cells
            ],
            "edges": [
                {
                    "a": e.cell_a,
                    "b": e.cell_b,
                    "rank": e.rank,
                    "subspace_a": [list(r) for r in e.subspace_a],
                    "subspace_b": [list(r) for r in e.subspace_b],
                }
                for e in self.edges
            ],
            "dangling": [
                {"cell": ci, "rank": r, "subspace": [list(x) for x in rows]}
                for ci, r, rows in self.dangling
            ],
        }


def assemble_complex(vertices, level: int = 2) -> CellComplex:
    """Cells over an explicit vertex set, glued along strata joining them.

    Each unordered glued pair of boundary components contributes one edge;
    strata whose far vertex falls outside the set are reported as dangling.
    """
    verts = sorted(set(vertices), key=lambda v: v.sort_key())
    index = {v: k for k, v in enumerate(verts)}
    cells = tuple(make_cell(v, level) for v in verts)
    edges = {}
    dangling = []
    for ci, cell in enumerate(cells):
        n = cell.vertex.n
        for rank in range(1, n):
            for comp in boundary_components(cell, rank):
                res = glue_edge(comp)
                far_v = res.component.cell.vertex
                if far_v not in index:
                    dangling.append((ci, rank, comp.subspace))
                    continue
                cj = index[far_v]
                key = frozenset(
                    {(ci, comp.subspace), (cj, res.component.subspace)}
                )
                if key in edges:
                    continue
                edges[key] = GluedEdge(
                    ci, comp.subspace, cj, res.component.subspace, min(rank, n - rank)
                )
    ordered = tuple(
        sorted(edges.values(), key=lambda e: (e.cell_a, e.cell_b, e.subspace_a))
    )
    return CellComplex(level, cells, ordered, tuple(dangling))


# ---------------------------------------------------------------------
# integral structure of a boundary stratum
# ---------------------------------------------------------------------

def integral_generators(n: int, i: int):
    """Generators (e_k, k) of the monoid {(a, b) : a(n-i) >= b n} over (1, 0).

    e_k = ceil(k n / (n - i)) for k = 1 .. (n-i)/gcd(n, i); the valuation
    e_k (1 - i/n) - k is >= 0 by construction and the list, together with
    (1, 0), generates the full saturated monoid.
    """
    if not 1 <= i <= n - 1:
        raise ValueError("need 1 <= i <= n-1")
    top = (n - i) // gcd(n, i)
    out = []
    for k in range(1, top + 1):
        e_k = -((-k * n) // (n - i))  # ceil
        assert e_k * (n - i) - k * n >= 0
        out.append((e_k, k))
    return out


def saturation_check(n: int, i: int, a_max: int | None = None) -> bool:
    """Brute force: the monoid generated by (1,0) and integral_generators
    covers every (a, b) with a(n-i) >= bn inside a box."""
    gens = [(1, 0)] + integral_generators(n, i)
    if a_max is None:
        a_max = 2 * max(e for e, _ in gens) + n
    b_max = (a_max * (n - i)) // n + 1
    reach = [[False] * (b_max + 1) for _ in range(a_max + 1)]
    reach[0][0] = True
    for ge, gk in gens:
        for a in range(a_max + 1):
            for b in range(b_max + 1):
                if a >= ge and b >= gk and reach[a - ge][b - gk]:
                    reach[a][b] = True
    for a in range(a_max + 1):
        for b in range(b_max + 1):
            expected = a * (n - i) >= b * n
            if expected != reach[a][b]:
                return False
    return True


@dataclass(frozen=True)
class ModelDescription:
    relations: tuple
    convex: bool

    def display(self):
        return [
            f"x_{i}^{b} = pi^{a} * T_{i}" for i, b, a in self.relations
        ]


def constraint_model(alphas, q: int) -> ModelDescription:
    """Local model x_i^(b_i) = pi^(a_i) T_i from vertex values a_i/b_i.

    Preconditions: 0 < alpha_i < 1.  The convex flag records whether the
    profile (1, alpha_1, ..., alpha_{n-1}, 0) over abscissas q^i is convex
    (non-increasing slopes), which is when the model is a cell.
    """
    alphas = [Fraction(a) for a in alphas]
    if any(not 0 < a < 1 for a in alphas):
        raise ValueError("vertex values must lie strictly between 0 and 1")
    rels = tuple(
        (i, a.denominator, a.numerator) for i, a in enumerate(alphas, start=1)
    )
    profile = [Fraction(1)] + alphas + [Fraction(0)]
    n = len(profile) - 1
    slopes = [
        (profile[j - 1] - profile[j]) / (q ** j - q ** (j - 1))
        for j in range(1, n + 1)
    ]
    convex = all(slopes[j] >= slopes[j + 1] for j in range(len(slopes) - 1))
    return ModelDescription(rels, convex)
