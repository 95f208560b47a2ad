"""Ramified Witt vectors, divided-power logarithms, and Dieudonne slopes.

The structure polynomials for W_O (coefficient ring O with uniformizer pi
and residue field F_q, q = p^f) are solved symbolically from the ghost
components gh_i(x) = sum_j pi^j x_j^(q^(i-j)).  Over a torsion-free ring
the ghost map is injective, so every operator identity below (sum, product,
Frobenius, Verschiebung, Teichmueller) is certified by expanding the ghost
images.  Integrality of the solved polynomials cannot be read off term by
term (distinct pi-powers of one monomial can be non-integral separately yet
integral combined once pi^e = p); it is certified per monomial by reducing
the Laurent coefficient in pi modulo pi^e = p for each small ramification
index e and checking the resulting valuation.

The divided-power side: an ideal J with an operation gamma satisfying
pi*gamma(x) = x^q, gamma(ax) = a^q gamma(x), and the binomial addition rule
admits a componentwise logarithm log_i = sum_k delta_k(x_{i-k}) with
delta_k = pi^((q^k-1)/(q-1) - k) * gamma^k.  Three exact model rings
exercise it: dual numbers over F_p, F_2[s]/(s^4) with pi acting as s, and
the p-local integers with gamma(x) = x^p/p.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import comb

import sympy as sp


def prime_power_split(q: int):
    """q = p^f with p prime; returns (p, f) or raises."""
    if q < 2:
        raise ValueError("q must be a prime power >= 2")
    p = None
    for cand in range(2, q + 1):
        if q % cand == 0:
            p = cand
            break
    f = 0
    rest = q
    while rest % p == 0:
        rest //= p
        f += 1
    if rest != 1:
        raise ValueError(f"{q} is not a prime power")
    return p, f


def _vp(x: Fraction, p: int) -> int:
    if x == 0:
        raise ValueError("valuation of zero")
    v = 0
    num, den = x.numerator, x.denominator
    while num % p == 0:
        num //= p
        v += 1
    while den % p == 0:
        den //= p
        v -= 1
    return v


@dataclass(frozen=True)
class WittLaw:
    """Solved structure polynomials at truncation length N."""

    N: int
    q: int
    p: int
    f: int
    pi: sp.Symbol
    xs: tuple
    ys: tuple
    ws: tuple          # N+1 symbols, domain of Frobenius
    sum_polys: tuple
    prod_polys: tuple
    frob_polys: tuple  # length N, F_i in w_0 .. w_{i+1}

    def ghost(self, vec, i: int):
        return sp.expand(
            sum(self.pi ** j * vec[j] ** (self.q ** (i - j)) for j in range(i + 1))
        )


def _solve_from_ghosts(pi, q, targets, vec_len):
    """Components z with ghost_i(z) = targets[i], solved triangularly."""
    out = []
    for i in range(vec_len):
        rhs = targets[i] - sum(
            pi ** j * out[j] ** (q ** (i - j)) for j in range(i)
        )
        out.append(sp.expand(sp.expand(rhs) * pi ** (-i)))
    return out


@lru_cache(maxsize=None)
def witt_structure_polys(N: int, q: int) -> WittLaw:
    p, f = prime_power_split(q)
    pi = sp.Symbol("pi")
    xs = sp.symbols(f"x0:{N}")
    ys = sp.symbols(f"y0:{N}")
    ws = sp.symbols(f"w0:{N + 1}")

    def gh(vec, i):
        return sum(pi ** j * vec[j] ** (q ** (i - j)) for j in range(i + 1))

    sums = _solve_from_ghosts(pi, q, [gh(xs, i) + gh(ys, i) for i in range(N)], N)
    prods = _solve_from_ghosts(pi, q, [gh(xs, i) * gh(ys, i) for i in range(N)], N)
    frobs = _solve_from_ghosts(pi, q, [gh(ws, i + 1) for i in range(N)], N)
    return WittLaw(N, q, p, f, pi, tuple(xs), tuple(ys), tuple(ws),
                   tuple(sums), tuple(prods), tuple(frobs))


def _terms(expr):
    """Yield (Fraction coefficient, pi exponent, {symbol: exponent})."""
    for term in sp.Add.make_args(sp.expand(expr)):
        coeff, rest = term.as_coeff_Mul()
        c = Fraction(int(sp.numer(coeff)), int(sp.denom(coeff)))
        k = 0
        powers = {}
        for base, exp in rest.as_powers_dict().items():
            if base.is_Symbol and base.name == "pi":
                k = int(exp)
            elif base.is_Symbol:
                if int(exp) < 1:
                    raise ValueError(f"negative power of {base} in term {term}")
                powers[base.name] = int(exp)
            elif base == 1:
                continue
            else:
                raise ValueError(f"unexpected factor {base} in term {term}")
        yield c, k, powers


def check_o_integrality(law: WittLaw, ram_indices=(1, 2, 3, 4, 5, 6)) -> bool:
    """Every structure polynomial has O-integral coefficients.

    The coefficient of each x/y-monomial is a Laurent polynomial
    sum_k c_k * pi^k.  Termwise v_p(c_k) >= -k is too strong: the N = 3
    addition law contains -6*pi^-2 - 4*pi^-3 on x0^2*y0^2, integral for
    every ramification index only in combination.  So for each e in
    ram_indices the coefficient is reduced via pi^e = p into slots
    a_0..a_{e-1} (pi^k = p^m * pi^r with k = m*e + r), and integrality
    means min over nonzero slots of e*v_p(a_r) + r >= 0.  No cancellation
    hides across slots since their pi-exponents differ mod e.
    """
    for poly in law.sum_polys + law.prod_polys + law.frob_polys:
        per_mono: dict = {}
        for c, k, powers in _terms(poly):
            if c == 0:
                continue
            key = tuple(sorted(powers.items()))
            per_mono.setdefault(key, {})
            per_mono[key][k] = per_mono[key].get(k, 0) + c
        for coeffs in per_mono.values():
            for e in ram_indices:
                slots: dict = {}
                for k, c in coeffs.items():
                    m, r = divmod(k, e)
                    slots[r] = slots.get(r, 0) + c * Fraction(law.p) ** m
                vals = [e * _vp(a, law.p) + r for r, a in slots.items() if a != 0]
                if vals and min(vals) < 0:
                    return False
    return True


def verify_ghost_homomorphism(law: WittLaw) -> bool:
    """Ghost images of the solved polynomials match sum/product of ghosts."""
    for i in range(law.N):
        gs = law.ghost(law.sum_polys, i)
        if sp.expand(gs - law.ghost(law.xs, i) - law.ghost(law.ys, i)) != 0:
            return False
        gp = law.ghost(law.prod_polys, i)
        if sp.expand(gp - law.ghost(law.xs, i) * law.ghost(law.ys, i)) != 0:
            return False
        gf = law.ghost(law.frob_polys, i)
        target = sum(
            law.pi ** j * law.ws[j] ** (law.q ** (i + 1 - j)) for j in range(i + 2)
        )
        if sp.expand(gf - target) != 0:
            return False
    return True


def _subs_many(polys, mapping):
    return tuple(sp.expand(poly.subs(mapping, simultaneous=True)) for poly in polys)


def witt_add(law: WittLaw, a, b):
    m = {law.xs[i]: a[i] for i in range(law.N)}
    m.update({law.ys[i]: b[i] for i in range(law.N)})
    return _subs_many(law.sum_polys, m)


def witt_mul(law: WittLaw, a, b):
    m = {law.xs[i]: a[i] for i in range(law.N)}
    m.update({law.ys[i]: b[i] for i in range(law.N)})
    return _subs_many(law.prod_polys, m)


def witt_frobenius(law: WittLaw, w):
    """F on a length-(N+1) vector, producing length N."""
    m = {law.ws[i]: w[i] for i in range(law.N + 1)}
    return _subs_many(law.frob_polys, m)


def verschiebung(w):
    return (sp.Integer(0),) + tuple(w)


def teichmueller(law: WittLaw, a):
    return (a,) + (sp.Integer(0),) * (law.N - 1)


def const_witt(law: WittLaw, c, length: int | None = None):
    """The Witt vector with every ghost component equal to c."""
    n = law.N if length is None else length
    pi, q = law.pi, law.q
    return tuple(_solve_from_ghosts(pi, q, [sp.sympify(c)] * n, n))


def verify_fv_is_pi(law: WittLaw) -> bool:
    """F(V(w)) equals multiplication by the scalar pi, componentwise.

    Only this composition order is an identity: V(F(w)) differs from pi*w
    already over torsion-free rings.
    """
    w = sp.symbols(f"v0:{law.N}")  # colon form always yields a tuple
    fv = witt_frobenius(law, verschiebung(w))
    pi_scalar = const_witt(law, law.pi)
    m = {law.xs[i]: pi_scalar[i] for i in range(law.N)}
    m.update({law.ys[i]: w[i] for i in range(law.N)})
    pw = _subs_many(law.prod_polys, m)
    return all(sp.expand(fv[i] - pw[i]) == 0 for i in range(law.N))


def verify_teichmueller_mult(law: WittLaw) -> bool:
    a, b = sp.symbols("tei_a tei_b")
    prod = witt_mul(law, teichmueller(law, a), teichmueller(law, b))
    want = teichmueller(law, a * b)
    return all(sp.expand(prod[i] - want[i]) == 0 for i in range(law.N))


def verify_teichmueller_scale(law: WittLaw) -> bool:
    """[a] * w has components a^(q^i) * w_i."""
    a = sp.Symbol("tei_a")
    prod = witt_mul(law, teichmueller(law, a), law.ys)
    return all(
        sp.expand(prod[i] - a ** (law.q ** i) * law.ys[i]) == 0
        for i in range(law.N)
    )


# ---------------------------------------------------------------------
# exact model rings carrying a divided-power operation on an ideal
# ---------------------------------------------------------------------

class DualNumbers:
    """F_p[eps]/(eps^2) with J = (eps); the coefficient ring is Z_p (pi = p).

    gamma(b*eps) = b*eps: the unique choice with gamma(eps) = eps, and
    b^p = b makes the scaling axiom hold on the nose.
    """

    def __init__(self, p: int):
        self.p = p
        self.q = p
        self.e = 1
        self.zero = (0, 0)
        self.one = (1, 0)

    def add(self, a, b):
        return ((a[0] + b[0]) % self.p, (a[1] + b[1]) % self.p)

    def neg(self, a):
        return ((-a[0]) % self.p, (-a[1]) % self.p)

    def mul(self, a, b):
        return ((a[0] * b[0]) % self.p, (a[0] * b[1] + a[1] * b[0]) % self.p)

    def eq(self, a, b):
        return a == b

    def in_J(self, a):
        return a[0] == 0

    def gamma(self, a):
        if not self.in_J(a):
            raise ValueError("gamma only defined on J")
        return (0, a[1])

    def o_image(self, c: Fraction, k: int = 0):
        val = Fraction(c) * Fraction(self.p) ** k
        if val == 0:
            return self.zero
        if _vp(val, self.p) < 0:
            raise ValueError("not O-integral")
        if _vp(val, self.p) >= 1:
            return self.zero
        num, den = val.numerator, val.denominator
        return ((num * pow(den, -1, self.p)) % self.p, 0)

    def sample_J(self):
        return [(0, b) for b in range(self.p)]

    def sample_B(self):
        return [(a, b) for a in range(self.p) for b in range(self.p)]


class RamifiedNilpotents:
    """F_2[s]/(s^4) as an algebra over Z_2[2^(1/4)], pi acting as s.

    J = (s^2), gamma(a s^2 + b s^3) = a s^3: the divided fourth root of
    2 makes pi*gamma(x) = x^q = 0 and the addition rule exact, with pi J
    nonzero (pi * s^2 = s^3).
    """

    def __init__(self):
        self.p = 2
        self.q = 2
        self.e = 4
        self.zero = (0, 0, 0, 0)
        self.one = (1, 0, 0, 0)

    def add(self, a, b):
        return tuple((a[i] + b[i]) % 2 for i in range(4))

    def neg(self, a):
        return a

    def mul(self, a, b):
        out = [0, 0, 0, 0]
        for i in range(4):
            for j in range(4 - i):
                out[i + j] = (out[i + j] + a[i] * b[j]) % 2
        return tuple(out)

    def eq(self, a, b):
        return a == b

    def in_J(self, a):
        return a[0] == 0 and a[1] == 0

    def gamma(self, a):
        if not self.in_J(a):
            raise ValueError("gamma only defined on J")
        return (0, 0, 0, a[2])

    def o_image(self, c: Fraction, k: int = 0):
        c = Fraction(c)
        if c == 0:
            return self.zero
        a = _vp(c, 2)
        exp = 4 * a + k  # 2 maps to s^4 = 0, pi to s
        if exp < 0:
            raise ValueError("not O-integral")
        if exp >= 4:
            return self.zero
        out = [0, 0, 0, 0]
        out[exp] = 1  # odd unit part reduces to 1 mod 2
        return tuple(out)

    def sample_J(self):
        return [(0, 0, a, b) for a in range(2) for b in range(2)]

    def sample_B(self):
        return [t for t in itertools.product(range(2), repeat=4)]


class LocalIntegers:
    """Z_(p) with J = (p) and gamma(x) = x^p / p, all in exact rationals."""

    def __init__(self, p: int):
        self.p = p
        self.q = p
        self.e = 1
        self.zero = Fraction(0)
        self.one = Fraction(1)

    def _check(self, a):
        if a.denominator % self.p == 0:
            raise ValueError("not p-local")
        return a

    def add(self, a, b):
        return self._check(a + b)

    def neg(self, a):
        return -a

    def mul(self, a, b):
        return self._check(a * b)

    def eq(self, a, b):
        return a == b

    def in_J(self, a):
        return a == 0 or _vp(a, self.p) >= 1

    def gamma(self, a):
        if not self.in_J(a):
            raise ValueError("gamma only defined on J")
        return self._check(a ** self.p / self.p)

    def o_image(self, c: Fraction, k: int = 0):
        return self._check(Fraction(c) * Fraction(self.p) ** k)

    def sample_J(self):
        p = self.p
        return [Fraction(0), Fraction(p), Fraction(2 * p), Fraction(-p),
                Fraction(p, p + 1)]

    def sample_B(self):
        return [Fraction(0), Fraction(1), Fraction(-2), Fraction(1, self.p + 1)]


def opd_axioms_hold(ring) -> bool:
    """pi*gamma(x) = x^q, gamma(ax) = a^q gamma(x), and the addition rule."""
    q = ring.q
    pi_elem = ring.o_image(Fraction(1), 1)

    def power(x, k):
        out = ring.one
        for _ in range(k):
            out = ring.mul(out, x)
        return out

    for x in ring.sample_J():
        lhs = ring.mul(pi_elem, ring.gamma(x))
        if not ring.eq(lhs, power(x, q)):
            return False
        for a in ring.sample_B():
            if not ring.eq(ring.gamma(ring.mul(a, x)),
                           ring.mul(power(a, q), ring.gamma(x))):
                return False
    for x in ring.sample_J():
        for y in ring.sample_J():
            lhs = ring.gamma(ring.add(x, y))
            rhs = ring.add(ring.gamma(x), ring.gamma(y))
            for i in range(1, q):
                alpha = ring.o_image(Fraction(comb(q, i)), -1)
                term = ring.mul(alpha, ring.mul(power(x, i), power(y, q - i)))
                rhs = ring.add(rhs, term)
            if not ring.eq(lhs, rhs):
                return False
    return True


def delta_pi_exponent(q: int, k: int) -> int:
    """pi-exponent of delta_k = pi^((q^k - 1)/(q - 1) - k) gamma^k; >= 0."""
    return (q ** k - 1) // (q - 1) - k


def _delta(ring, k: int, x):
    out = x
    for _ in range(k):
        out = ring.gamma(out)
    return ring.mul(ring.o_image(Fraction(1), delta_pi_exponent(ring.q, k)), out)


def log_opd(ring, comps):
    """Componentwise logarithm W_O(J) -> J^N."""
    comps = list(comps)
    out = []
    for i in range(len(comps)):
        acc = ring.zero
        for k in range(i + 1):
            acc = ring.add(acc, _delta(ring, k, comps[i - k]))
        out.append(acc)
    return tuple(out)


def exp_opd(ring, comps):
    """Inverse of log_opd by triangular back substitution."""
    comps = list(comps)
    out = []
    for i in range(len(comps)):
        acc = comps[i]
        for k in range(1, i + 1):
            acc = ring.add(acc, ring.neg(_delta(ring, k, out[i - k])))
        out.append(acc)
    return tuple(out)


def eval_expr(expr, ring, env):
    """Evaluate a structure polynomial on ring elements.

    env maps symbol names to ring elements.  The Laurent coefficient of a
    monomial is folded under the ring's pi^e = p relation before it goes
    through ring.o_image: individual terms of an integral coefficient can
    be non-integral on their own (the N = 3 addition law has such terms),
    so mapping termwise would raise spuriously.
    """
    per_mono: dict = {}
    for c, k, powers in _terms(expr):
        if c == 0:
            continue
        key = tuple(sorted(powers.items()))
        per_mono.setdefault(key, {})
        per_mono[key][k] = per_mono[key].get(k, 0) + c
    total = ring.zero
    for key, coeffs in per_mono.items():
        slots: dict = {}
        for k, c in coeffs.items():
            m, r = divmod(k, ring.e)
            slots[r] = slots.get(r, 0) + Fraction(c) * Fraction(ring.p) ** m
        elem = ring.zero
        for r, a in sorted(slots.items()):
            if a != 0:
                elem = ring.add(elem, ring.o_image(a, r))
        for name, exp in key:
            for _ in range(exp):
                elem = ring.mul(elem, env[name])
        total = ring.add(total, elem)
    return total


def eval_witt_op(law: WittLaw, polys, ring, x_elems=None, y_elems=None, w_elems=None):
    env = {}
    if x_elems is not None:
        env.update({law.xs[i].name: x_elems[i] for i in range(len(x_elems))})
    if y_elems is not None:
        env.update({law.ys[i].name: y_elems[i] for i in range(len(y_elems))})
    if w_elems is not None:
        env.update({law.ws[i].name: w_elems[i] for i in range(len(w_elems))})
    return tuple(eval_expr(poly, ring, env) for poly in polys)


def scalar_witt_elems(law: WittLaw, ring, c: Fraction):
    """Images of const_witt(c) components in the model ring."""
    comps = const_witt(law, sp.Rational(c.numerator, c.denominator))
    env = {}
    return tuple(eval_expr(comp, ring, env) for comp in comps)


def alternating_inverse(ring, op, x, bound: int = 64):
    """sum_k (-1)^k op^k(x); inverts (id + op) when op is nilpotent."""
    acc = x
    term = x
    for _ in range(bound):
        term = ring.neg(op(term))
        if ring.eq(term, ring.zero):
            return acc
        acc = ring.add(acc, term)
    raise ArithmeticError("operator not nilpotent within bound")


def exp_nilpotent_hom(ring, f, pi_op, bound: int = 64):
    """Correct a map f by the alternating series of the nilpotent pi_op.

    Returns x -> sum_k (-1)^k pi_op^k(f(x)).  Composing the result with
    (id + pi_op) recovers f; with pi_op = 0 the correction vanishes and
    the result is f itself.
    """
    def corrected(x):
        return alternating_inverse(ring, pi_op, f(x), bound)

    return corrected


# ---------------------------------------------------------------------
# Dieudonne data with O-action
# ---------------------------------------------------------------------

def _smith_vp(rows, p: int):
    """v_p of the Smith invariants of a square matrix over Z_(p)."""
    m = [[Fraction(x) for x in row] for row in rows]
    n = len(m)
    for row in m:
        if len(row) != n:
            raise ValueError("matrix must be square")
    out = []
    size = n
    while size > 0:
        best = None
        for i in range(size):
            for j in range(size):
                if m[i][j] != 0:
                    v = _vp(m[i][j], p)
                    if best is None or v < best[0]:
                        best = (v, i, j)
        if best is None:
            raise ValueError("matrix is singular")
        v, bi, bj = best
        m[0], m[bi] = m[bi], m[0]
        for row in m:
            row[0], row[bj] = row[bj], row[0]
        piv = m[0][0]
        for i in range(1, size):
            factor = m[i][0] / piv
            m[i] = [m[i][j] - factor * m[0][j] for j in range(size)]
        for j in range(1, size):
            factor = m[0][j] / piv
            for i in range(size):
                m[i][j] -= factor * m[i][0]
        out.append(v)
        m = [row[1:] for row in m[1:]]
        size -= 1
    return sorted(out)


def _det(rows):
    m = [list(row) for row in rows]
    n = len(m)
    det = Fraction(1)
    for c in range(n):
        piv = None
        for r in range(c, n):
            if m[r][c] != 0:
                piv = r
                break
        if piv is None:
            return Fraction(0)
        if piv != c:
            m[c], m[piv] = m[piv], m[c]
            det = -det
        det *= m[c][c]
        inv = 1 / m[c][c]
        for r in range(c + 1, n):
            factor = m[r][c] * inv
            m[r] = [m[r][k] - factor * m[c][k] for k in range(n)]
    return det


@dataclass(frozen=True)
class DieudonneReport:
    height: int        # over Z_p
    height_o: int      # over O: height / f0
    slope: Fraction    # v_p(det phi_O) / height_o, in [0, 1]
    dim_o: Fraction
    etale: bool
    phi_pi_exp: int
    phi_matrix: tuple


def dieudonne_O(p: int, blocks, e: int = 1) -> DieudonneReport:
    """O-typical slope data from Frobenius blocks along the f0 embeddings.

    blocks[i] is F restricted to the i-th embedding component.  V = p/F
    must be integral everywhere and invertible away from the 0th component
    (Smith invariants exactly p there).  phi_O = pi * p^(-f0) * product of
    the blocks; its determinant valuation per unit of O-height is the slope.
    """
    f0 = len(blocks)
    if f0 < 1:
        raise ValueError("need at least one block")
    d = len(blocks[0])
    mats = [[[Fraction(x) for x in row] for row in blk] for blk in blocks]
    for idx, mat in enumerate(mats):
        if len(mat) != d or any(len(row) != d for row in mat):
            raise ValueError("blocks must be square of equal size")
        inv = _smith_vp(mat, p)
        if inv[0] < 0:
            raise ValueError(f"block {idx}: F is not integral")
        if inv[-1] > 1:
            raise ValueError(f"block {idx}: V = p/F is not integral")
        if idx != 0 and set(inv) != {1}:
            raise ValueError(
                f"block {idx}: V must be invertible away from component 0"
            )

    prod = [[Fraction(int(i == j)) for j in range(d)] for i in range(d)]
    for mat in mats:
        prod = [
            [sum(mat[i][k] * prod[k][j] for k in range(d)) for j in range(d)]
            for i in range(d)
        ]
    scale = Fraction(1, p ** f0)
    phi = tuple(tuple(scale * x for x in row) for row in prod)
    # pi*M <= phi_O(M): with phi_O = pi*phi this is Smith(phi) <= 0, which
    # follows from per-block V-integrality (p*F^-1 integral multiplies up).
    assert max(_smith_vp([list(r) for r in phi], p)) <= 0
    det = _det(phi)
    slope = (Fraction(d, e) + Fraction(_vp(det, p))) / d
    if not 0 <= slope <= 1:
        raise ValueError(f"slope {slope} outside [0, 1]")
    return DieudonneReport(
        height=f0 * d,
        height_o=d,
        slope=slope,
        dim_o=slope * d,
        etale=slope == 0,
        phi_pi_exp=1,
        phi_matrix=phi,
    )
