"""Command line front end.

One subcommand per toolkit area.  All output is deterministic: JSON is
dumped with sorted keys, DOT and SVG renderings are built from sorted
vertex and edge lists, so identical invocations produce identical bytes.

Exit codes: 0 on success, 1 on domain errors (collisions, budget or level
failures, bad valuations), 2 on usage errors (argparse's own convention).
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction

from . import building, cells, hecke, periods, polygon, wittlab
from .valuations import INF, Val


def _parse_rational(text: str) -> Fraction:
    try:
        return Fraction(text.strip())
    except (ValueError, ZeroDivisionError) as exc:
        raise ValueError(f"bad rational {text!r}") from exc


def _parse_vals(text: str, allow_inf: bool = False):
    out = []
    for piece in text.split(","):
        piece = piece.strip()
        if piece.lower() == "inf":
            if not allow_inf:
                raise ValueError("inf not allowed here")
            out.append(INF)
        else:
            out.append(_parse_rational(piece))
    return out


def _frac_obj(x) -> dict:
    if isinstance(x, Val):
        return x.json_obj()
    if x is INF:
        return {"inf": True}
    return {"num": x.numerator, "den": x.denominator}


def _value_mult_list(pairs):
    return [{"val": _frac_obj(v), "mult": m} for v, m in pairs]


def _emit(args, text: str) -> None:
    if getattr(args, "out", None):
        with open(args.out, "w") as fh:
            fh.write(text)
            if not text.endswith("\n"):
                fh.write("\n")
    else:
        print(text)


def _dump(args, obj) -> None:
    _emit(args, json.dumps(obj, indent=2, sort_keys=True))


# ---------------------------------------------------------------------
# subcommands
# ---------------------------------------------------------------------

def cmd_periods(args) -> int:
    pt = periods.period_series(args.n, args.q, args.depth)
    out = pt.to_json_dict()
    if args.product_check:
        other = periods.period_series_product(args.n, args.q, args.depth)
        out["product_matches"] = pt == other
    if args.cf2:
        if args.n != 2:
            raise ValueError("the continued fraction form needs n = 2")
        cf = periods.period_cf2(args.q, args.depth, cap=pt.cap)
        out["cf2"] = {
            "series": cf.series.to_json_dict(),
            "x_exp": cf.x_exp,
            "convention": periods.cf2_convention(args.q, max(args.depth, 1)),
            "cross_check": periods.cf2_cross_check(args.q, max(args.depth, 1)),
        }
    _dump(args, out)
    return 0


def cmd_polygon(args) -> int:
    if args.cm is not None:
        poly = polygon.cm_polygon(args.n, args.q, args.cm)
    else:
        if args.vals is None:
            raise ValueError("need --vals or --cm")
        poly = polygon.polygon_from_vals(args.n, args.q, _parse_vals(args.vals))
    if args.format == "ascii":
        _emit(args, polygon.render_ascii(poly))
    elif args.format == "svg":
        _emit(args, polygon.render_svg(poly))
    else:
        out = poly.to_json_dict()
        out["lambda_1"] = _frac_obj(poly.slopes[0])
        out["lambda_n"] = _frac_obj(poly.slopes[-1])
        if args.torsion:
            out["torsion"] = _value_mult_list(
                polygon.torsion_valuations(poly, args.torsion)
            )
        _dump(args, out)
    return 0


def cmd_hecke_quotient(args) -> int:
    poly = polygon.polygon_from_vals(args.n, args.q, _parse_vals(args.vals))
    step = hecke.canonical_quotient(poly, args.rank)
    _dump(args, {
        "rank": step.rank,
        "source": step.source.to_json_dict(),
        "image": step.image.to_json_dict(),
        "kernel_values": _value_mult_list(step.kernel_values),
        "image_values": _value_mult_list(step.image_values),
    })
    return 0


def cmd_hecke_reduce(args) -> int:
    poly = polygon.polygon_from_vals(args.n, args.q, _parse_vals(args.vals))
    res = hecke.reduce_to_domain(poly, budget=args.budget)
    _dump(args, {
        "initial": res.initial.to_json_dict(),
        "final": res.final.to_json_dict(),
        "steps": list(res.steps),
        "trail": [p.to_json_dict() for p in res.trail],
    })
    return 0


def _ball_with_edges(n: int, p: int, radius: int):
    verts = building.ball(building.standard_vertex(p, n), radius)
    members = set(verts)
    edges = []
    for v in verts:
        for w, i in building.out_edges(v):
            if w in members:
                edges.append((v, w, i))
    return verts, edges


def cmd_building(args) -> int:
    verts, edges = _ball_with_edges(args.n, args.p, args.radius)
    if args.format == "dot":
        _emit(args, building.to_dot(verts, edges))
    else:
        index = {v: k for k, v in enumerate(verts)}
        _dump(args, {
            "vertices": [v.json_dict() for v in verts],
            "edges": sorted(
                [index[a], index[b], i] for a, b, i in edges
            ),
        })
    return 0


def cmd_cells_complex(args) -> int:
    verts = building.ball(building.standard_vertex(args.p, args.n), args.radius)
    if args.lift:
        verts = list(verts) + [building.descent(v) for v in verts]
    cx = cells.assemble_complex(verts, level=args.level)
    if args.format == "dot":
        vs = [c.vertex for c in cx.cells]
        edges = [(vs[e.cell_a], vs[e.cell_b], e.rank) for e in cx.edges]
        _emit(args, building.to_dot(vs, edges))
    else:
        _dump(args, cx.to_json_dict())
    return 0


def cmd_cells_generators(args) -> int:
    gens = cells.integral_generators(args.n, args.i)
    _dump(args, {
        "n": args.n,
        "i": args.i,
        "generators": [[e, k] for e, k in gens],
        "saturated": cells.saturation_check(args.n, args.i),
    })
    return 0


def _witt_checks(max_n: int, qs):
    for q in qs:
        for N in range(1, max_n + 1):
            law = wittlab.witt_structure_polys(N, q)
            yield f"integral N={N} q={q}", wittlab.check_o_integrality(law)
            yield f"ghost-hom N={N} q={q}", wittlab.verify_ghost_homomorphism(law)
            yield f"teich-mult N={N} q={q}", wittlab.verify_teichmueller_mult(law)
            yield f"teich-scale N={N} q={q}", wittlab.verify_teichmueller_scale(law)
            yield f"FV=pi N={N} q={q}", wittlab.verify_fv_is_pi(law)
    rings = [
        ("dual-F2", wittlab.DualNumbers(2)),
        ("dual-F3", wittlab.DualNumbers(3)),
        ("F2[s]/s^4", wittlab.RamifiedNilpotents()),
        ("Z_(2)", wittlab.LocalIntegers(2)),
        ("Z_(3)", wittlab.LocalIntegers(3)),
    ]
    for name, ring in rings:
        yield f"opd-axioms {name}", wittlab.opd_axioms_hold(ring)
        samples = ring.sample_J()
        vec = tuple(samples[k % len(samples)] for k in range(3))
        round1 = wittlab.exp_opd(ring, wittlab.log_opd(ring, vec))
        round2 = wittlab.log_opd(ring, wittlab.exp_opd(ring, vec))
        ok = all(ring.eq(a, b) for a, b in zip(round1, vec))
        ok = ok and all(ring.eq(a, b) for a, b in zip(round2, vec))
        yield f"log/exp {name}", ok


def cmd_witt_selftest(args) -> int:
    import sympy as sp

    qs = [int(x) for x in args.q.split(",")]
    failures = 0
    lines = []
    for name, ok in _witt_checks(args.max_n, qs):
        lines.append(f"{'ok  ' if ok else 'FAIL'} {name}")
        failures += 0 if ok else 1
    for q in qs:
        law = wittlab.witt_structure_polys(args.max_n, q)
        lines.append(f"structure polynomials, q={q}, N={args.max_n}:")
        for fam, tag in ((law.sum_polys, "S"), (law.prod_polys, "P"),
                         (law.frob_polys, "F")):
            for i, poly in enumerate(fam):
                lines.append(f"  {tag}_{i} = {sp.sstr(sp.expand(poly))}")
    _emit(args, "\n".join(lines))
    return 1 if failures else 0


def cmd_selftest(args) -> int:
    lines = []
    failures = 0

    def record(name, ok):
        nonlocal failures
        lines.append(f"{'ok  ' if ok else 'FAIL'} {name}")
        failures += 0 if ok else 1

    pt = periods.period_series(2, 2, 2)
    record("periods recurrence = product",
           pt == periods.period_series_product(2, 2, 2))

    grid = [Fraction(a, 5) for a in range(1, 5)]
    ok = True
    for v1 in grid:
        poly = polygon.polygon_from_vals(2, 2, [v1])
        l1, ln = polygon.lambda_extremes(2, 2, [v1])
        ok = ok and (l1, ln) == (poly.slopes[0], poly.slopes[-1])
    record("polygon extremes = hull", ok)

    res = hecke.reduce_to_domain(polygon.polygon_from_vals(2, 3, [Fraction(3, 10)]))
    record("hecke reduce lands in D", polygon.in_gross_hopkins(res.final))

    sizes = [len(building.ball(building.standard_vertex(3, 2), r)) for r in range(3)]
    record("ball sizes (1,5,17)", sizes == [1, 5, 17])

    cx = cells.assemble_complex(building.ball(building.standard_vertex(3, 2), 1))
    record("cell complex (5,4)", (len(cx.cells), len(cx.edges)) == (5, 4))

    law = wittlab.witt_structure_polys(2, 2)
    import sympy as sp
    x0, x1 = law.xs
    y0, y1 = law.ys
    want = x1 + y1 - 2 / law.pi * x0 * y0
    record("witt S_1 at q=2", sp.expand(law.sum_polys[1] - want) == 0)

    _emit(args, "\n".join(lines))
    return 1 if failures else 0


# ---------------------------------------------------------------------
# parser
# ---------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    top = argparse.ArgumentParser(
        prog="lubintate",
        description="exact tools for period maps, polygon calculus, "
                    "lattice complexes, and ramified Witt vectors",
    )
    sub = top.add_subparsers(dest="command", required=True)

    sp_per = sub.add_parser("periods", help="period tuple by the matrix recurrence")
    sp_per.add_argument("--n", type=int, required=True)
    sp_per.add_argument("--q", type=int, required=True)
    sp_per.add_argument("--depth", type=int, required=True)
    sp_per.add_argument("--product-check", action="store_true",
                        help="cross-check against the matrix product oracle")
    sp_per.add_argument("--cf2", action="store_true",
                        help="attach the height-2 continued fraction value")
    sp_per.add_argument("--out")
    sp_per.set_defaults(func=cmd_periods)

    sp_poly = sub.add_parser("polygon", help="torsion polygon from valuations")
    sp_poly.add_argument("--n", type=int, required=True)
    sp_poly.add_argument("--q", type=int, required=True)
    sp_poly.add_argument("--vals", help="comma separated rationals v_1,..,v_{n-1}")
    sp_poly.add_argument("--cm", type=int, default=None,
                         help="build the block polygon with e | n blocks instead")
    sp_poly.add_argument("--torsion", type=int, default=0,
                         help="include valuations of the pi^k torsion")
    sp_poly.add_argument("--format", choices=("json", "ascii", "svg"),
                         default="json")
    sp_poly.add_argument("--out")
    sp_poly.set_defaults(func=cmd_polygon)

    sp_hecke = sub.add_parser("hecke", help="canonical subgroup operations")
    hsub = sp_hecke.add_subparsers(dest="hecke_command", required=True)
    hq = hsub.add_parser("quotient", help="single canonical quotient step")
    hq.add_argument("--n", type=int, required=True)
    hq.add_argument("--q", type=int, required=True)
    hq.add_argument("--vals", required=True)
    hq.add_argument("--rank", type=int, required=True)
    hq.add_argument("--out")
    hq.set_defaults(func=cmd_hecke_quotient)
    hr = hsub.add_parser("reduce", help="iterate quotients into the good domain")
    hr.add_argument("--n", type=int, required=True)
    hr.add_argument("--q", type=int, required=True)
    hr.add_argument("--vals", required=True)
    hr.add_argument("--budget", type=int, default=32)
    hr.add_argument("--out")
    hr.set_defaults(func=cmd_hecke_reduce)

    sp_bld = sub.add_parser("building", help="lattice-class ball with height tags")
    sp_bld.add_argument("--n", type=int, required=True)
    sp_bld.add_argument("--p", type=int, required=True)
    sp_bld.add_argument("--radius", type=int, default=1)
    sp_bld.add_argument("--format", choices=("json", "dot"), default="json")
    sp_bld.add_argument("--out")
    sp_bld.set_defaults(func=cmd_building)

    sp_cells = sub.add_parser("cells", help="polydisk cells and boundary gluing")
    csub = sp_cells.add_subparsers(dest="cells_command", required=True)
    cc = csub.add_parser("complex", help="assemble cells over a vertex ball")
    cc.add_argument("--n", type=int, required=True)
    cc.add_argument("--p", type=int, required=True)
    cc.add_argument("--radius", type=int, default=1)
    cc.add_argument("--level", type=int, default=2)
    cc.add_argument("--lift", action="store_true",
                    help="also include the height-shifted copy of the ball")
    cc.add_argument("--format", choices=("json", "dot"), default="json")
    cc.add_argument("--out")
    cc.set_defaults(func=cmd_cells_complex)
    cg = csub.add_parser("generators", help="monoid generators of a stratum")
    cg.add_argument("--n", type=int, required=True)
    cg.add_argument("--i", type=int, required=True)
    cg.add_argument("--out")
    cg.set_defaults(func=cmd_cells_generators)

    sp_witt = sub.add_parser("witt", help="ramified Witt vector laboratory")
    wsub = sp_witt.add_subparsers(dest="witt_command", required=True)
    ws = wsub.add_parser("selftest", help="structure polynomial and OPD checks")
    ws.add_argument("--max-n", type=int, default=2)
    ws.add_argument("--q", default="2")
    ws.add_argument("--out")
    ws.set_defaults(func=cmd_witt_selftest)

    st = sub.add_parser("selftest", help="fast cross-module smoke checks")
    st.add_argument("--out")
    st.set_defaults(func=cmd_selftest)
    return top


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (ValueError, ArithmeticError, RuntimeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
