"""Ramified Witt laws, divided-power model rings, Dieudonne slope data."""

import random
from fractions import Fraction

import pytest
import sympy as sp

from lubintate import wittlab as W
from lubintate.wittlab import (
    DualNumbers,
    LocalIntegers,
    RamifiedNilpotents,
    alternating_inverse,
    check_o_integrality,
    const_witt,
    delta_pi_exponent,
    dieudonne_O,
    eval_witt_op,
    exp_nilpotent_hom,
    exp_opd,
    log_opd,
    opd_axioms_hold,
    prime_power_split,
    scalar_witt_elems,
    teichmueller,
    verify_fv_is_pi,
    verify_ghost_homomorphism,
    verify_teichmueller_mult,
    verify_teichmueller_scale,
    verschiebung,
    witt_structure_polys,
)

ALL_RINGS = [DualNumbers(2), DualNumbers(3), RamifiedNilpotents(), LocalIntegers(2), LocalIntegers(3)]


def test_prime_power_split():
    assert prime_power_split(8) == (2, 3)
    assert prime_power_split(3) == (3, 1)
    assert prime_power_split(9) == (3, 2)
    with pytest.raises(ValueError):
        prime_power_split(6)
    with pytest.raises(ValueError):
        prime_power_split(1)


def test_structure_polys_low_degrees():
    law = witt_structure_polys(3, 2)
    x0, x1, y0, y1 = law.xs[0], law.xs[1], law.ys[0], law.ys[1]
    assert sp.expand(law.sum_polys[0] - (x0 + y0)) == 0
    assert sp.expand(law.prod_polys[0] - x0 * y0) == 0
    # the first carry: S_1 = x1 + y1 - (2/pi) x0 y0
    assert sp.expand(law.sum_polys[1] - (x1 + y1 - 2 * x0 * y0 / law.pi)) == 0


def test_ghost_homomorphism_and_integrality():
    for q, N in ((2, 3), (3, 3), (4, 2)):
        law = witt_structure_polys(N, q)
        assert verify_ghost_homomorphism(law), (q, N)
        assert check_o_integrality(law), (q, N)


def test_fv_and_teichmueller_identities():
    for q in (2, 3):
        law = witt_structure_polys(3, q)
        assert verify_fv_is_pi(law)
        assert verify_teichmueller_mult(law)
        assert verify_teichmueller_scale(law)


def test_const_witt_has_constant_ghosts():
    law = witt_structure_polys(3, 2)
    c = sp.Symbol("c")
    comps = const_witt(law, c)
    for i in range(3):
        assert sp.expand(law.ghost(comps, i) - c) == 0


def test_opd_axioms_on_model_rings():
    for ring in ALL_RINGS:
        assert opd_axioms_hold(ring), type(ring).__name__


def test_opd_negative_control():
    class BadGamma(DualNumbers):
        def gamma(self, a):
            # constant nonzero value breaks the scaling axiom
            return (0, 1)

    assert not opd_axioms_hold(BadGamma(3))


def test_delta_exponents():
    assert [delta_pi_exponent(2, k) for k in range(5)] == [0, 0, 1, 4, 11]
    assert [delta_pi_exponent(3, k) for k in range(5)] == [0, 0, 2, 10, 36]
    for q in (2, 3, 4):
        for k in range(7):
            assert delta_pi_exponent(q, k) >= 0


def test_log_exp_round_trip():
    rng = random.Random(5)
    for ring in ALL_RINGS:
        for _ in range(10):
            comps = tuple(rng.choice(ring.sample_J()) for _ in range(4))
            back = exp_opd(ring, log_opd(ring, comps))
            assert all(ring.eq(a, b) for a, b in zip(comps, back))
            fwd = log_opd(ring, exp_opd(ring, comps))
            assert all(ring.eq(a, b) for a, b in zip(comps, fwd))


def test_log_takes_witt_sum_to_componentwise_sum():
    rng = random.Random(6)
    for p in (2, 3):
        law = witt_structure_polys(3, p)
        for ring in (DualNumbers(p), LocalIntegers(p)):
            for _ in range(5):
                a = tuple(rng.choice(ring.sample_J()) for _ in range(3))
                b = tuple(rng.choice(ring.sample_J()) for _ in range(3))
                s = eval_witt_op(law, law.sum_polys, ring, x_elems=a, y_elems=b)
                la, lb, ls = log_opd(ring, a), log_opd(ring, b), log_opd(ring, s)
                assert all(ring.eq(ls[i], ring.add(la[i], lb[i])) for i in range(3))


def test_log_of_frobenius_shifts_and_multiplies_by_pi():
    rng = random.Random(7)
    for p in (2, 3):
        law = witt_structure_polys(3, p)
        for ring in (DualNumbers(p), LocalIntegers(p)):
            pi_elem = ring.o_image(Fraction(1), 1)
            for _ in range(5):
                w = tuple(rng.choice(ring.sample_J()) for _ in range(4))
                fw = eval_witt_op(law, law.frob_polys, ring, w_elems=w)
                lfw, lw = log_opd(ring, fw), log_opd(ring, w)
                assert all(
                    ring.eq(lfw[i], ring.mul(pi_elem, lw[i + 1])) for i in range(3)
                )


def test_log_of_verschiebung_is_shift():
    rng = random.Random(8)
    for ring in ALL_RINGS:
        for _ in range(5):
            w = tuple(rng.choice(ring.sample_J()) for _ in range(3))
            lvw = log_opd(ring, (ring.zero,) + w)
            lw = log_opd(ring, w)
            assert ring.eq(lvw[0], ring.zero)
            assert all(ring.eq(lvw[i + 1], lw[i]) for i in range(3))
    # symbolic form as well
    assert verschiebung((1, 2)) == (sp.Integer(0), 1, 2)


def test_log_of_teichmueller_product_scales_by_powers():
    rng = random.Random(9)
    for p in (2, 3):
        law = witt_structure_polys(3, p)
        ring = DualNumbers(p)
        for a_unit in ring.sample_B():
            wv = tuple(rng.choice(ring.sample_J()) for _ in range(3))
            te = (a_unit,) + (ring.zero,) * 2
            prod = eval_witt_op(law, law.prod_polys, ring, x_elems=te, y_elems=wv)
            lp, lw = log_opd(ring, prod), log_opd(ring, wv)
            for i in range(3):
                apow = ring.one
                for _ in range(p**i):
                    apow = ring.mul(apow, a_unit)
                assert ring.eq(lp[i], ring.mul(apow, lw[i]))


def test_log_of_scalar_product_is_scalar():
    rng = random.Random(10)
    for p in (2, 3):
        law = witt_structure_polys(3, p)
        ring = LocalIntegers(p)
        for c in (Fraction(2), Fraction(5), Fraction(1, 1 + p)):
            ce = ring.o_image(c, 0)
            sc = scalar_witt_elems(law, ring, c)
            for _ in range(3):
                wv = tuple(rng.choice(ring.sample_J()) for _ in range(3))
                prod = eval_witt_op(law, law.prod_polys, ring, x_elems=sc, y_elems=wv)
                lp, lw = log_opd(ring, prod), log_opd(ring, wv)
                assert all(ring.eq(lp[i], ring.mul(ce, lw[i])) for i in range(3))


def test_teichmueller_symbolic_shape():
    law = witt_structure_polys(3, 2)
    a = sp.Symbol("a")
    assert teichmueller(law, a) == (a, sp.Integer(0), sp.Integer(0))


def test_alternating_inverse_on_nilpotents():
    ring = RamifiedNilpotents()
    s = (0, 1, 0, 0)
    op = lambda x: ring.mul(s, x)
    inv = alternating_inverse(ring, op, s)
    assert inv == (0, 1, 1, 1)  # s + s^2 + s^3
    assert ring.eq(ring.add(inv, op(inv)), s)
    with pytest.raises(ArithmeticError, match="nilpotent"):
        alternating_inverse(ring, lambda x: x, ring.one, bound=8)


def test_exp_nilpotent_hom_corrects_by_pi_op():
    ring = RamifiedNilpotents()
    s = (0, 1, 0, 0)
    op = lambda x: ring.mul(s, x)
    f = lambda x: ring.mul(x, x)
    g = exp_nilpotent_hom(ring, f, op)
    for x in ring.sample_B():
        assert ring.eq(ring.add(g(x), op(g(x))), f(x))
    # zero correction operator returns f unchanged
    h = exp_nilpotent_hom(ring, f, lambda x: ring.zero)
    assert all(ring.eq(h(x), f(x)) for x in ring.sample_B())


def test_dieudonne_examples():
    lt = dieudonne_O(2, [[(0, 1), (2, 0)]])
    assert lt.slope == Fraction(1, 2) and lt.height == 2 and not lt.etale

    et = dieudonne_O(3, [[(1,)]])
    assert et.slope == 0 and et.etale
    assert et.phi_matrix == ((Fraction(1, 3),),)

    mult = dieudonne_O(3, [[(3,)]])
    assert mult.slope == 1 and not mult.etale

    two = dieudonne_O(3, [[(1,)], [(3,)]])
    assert two.height == 2 and two.height_o == 1
    assert two.slope == 0


def test_dieudonne_rejections():
    with pytest.raises(ValueError, match="F is not integral"):
        dieudonne_O(2, [[(Fraction(1, 2),)]])
    with pytest.raises(ValueError, match="V = p/F"):
        dieudonne_O(2, [[(4,)]])
    with pytest.raises(ValueError, match="invertible away"):
        dieudonne_O(2, [[(1,)], [(1,)]])
    with pytest.raises(ValueError, match="at least one"):
        dieudonne_O(2, [])
