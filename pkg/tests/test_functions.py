import random
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from padic_loci import disks as dk
from padic_loci import functions as fn
from padic_loci import generate as gen
from padic_loci import padic as pa
from padic_loci import subsets as ss
from padic_loci.padic import FieldDescriptor
from padic_loci.reconstruction import offset_point

Q5 = FieldDescriptor(5)
ZERO = pa.zero(Q5)
A = pa.element(Q5, [(2, 1)])


def two_hole_domain():
    return ss.make_component(dk.open_disk(ZERO, 1),
                             [dk.closed_disk(A, 3), dk.closed_disk(pa.neg(A, 12), Fraction(5, 2))])


def domain_points(dom):
    out = []
    for D in dom.disks():
        for dv in (Fraction(1, 4), Fraction(1, 2), 1):
            t = D.cut + dv if D is dom.outer else D.cut - dv
            for u in (1, 2, 3):
                x = offset_point(D.center, t, u)
                if dom.contains(x):
                    out.append(x)
    return out


def agree(a, b, prec):
    return not pa.sub(a, b, prec).digits


@st.composite
def integral_functions(draw, dom):
    terms = {}
    poles = len(dom.holes) + 1
    for _ in range(draw(st.integers(1, 4))):
        pole = draw(st.integers(0, poles - 1))
        i = draw(st.integers(0 if pole == 0 else 1, 3))
        c = pa.from_int(Q5, draw(st.integers(1, 200)) * 5 ** draw(st.integers(0, 2)))
        terms[(pole, i)] = c
    return fn.BoundedFunction(dom, terms)


class TestBasis:
    def test_outer_monomial_is_scaled_coordinate(self):
        dom = two_hole_domain()
        f = fn.BoundedFunction(dom, {(0, 1): pa.one(Q5)})
        t0 = f.scales[0]
        for x in domain_points(dom):
            want = pa.div(pa.sub(x, pa.embed(ZERO, x.field)), pa.embed(t0, x.field), 30 * x.field.e)
            assert agree(fn.evaluate(f, x), want, 20 * x.field.e)

    def test_hole_monomial(self):
        dom = two_hole_domain()
        j = 1 + next(k for k, h in enumerate(dom.holes) if h.cut == 3)
        f = fn.BoundedFunction(dom, {(j, 2): pa.one(Q5)})
        t1 = f.scales[j]
        assert pa.valuation(t1) == 3
        for x in domain_points(dom):
            P = 30 * x.field.e
            w = pa.div(pa.embed(t1, x.field), pa.sub(x, pa.embed(A, x.field), P), P)
            assert agree(fn.evaluate(f, x), pa.mul(w, w, P), 20 * x.field.e)

    def test_scales_have_the_cut_valuation(self):
        t = fn.scale_element(Fraction(5, 2), Q5)
        assert pa.valuation(t) == Fraction(5, 2)


class TestNorms:
    @given(integral_functions(two_hole_domain()))
    def test_values_are_bounded_by_the_norm(self, f):
        nrm = fn.sup_norm(f)
        for x in domain_points(f.domain):
            y = fn.evaluate(f, x)
            if y.digits:
                assert pa.valuation(y) >= nrm

    @given(st.integers(0, 2), st.integers(1, 3), st.integers(1, 40))
    def test_witness_attains_monomial_size(self, pole, i, c):
        dom = two_hole_domain()
        f = fn.BoundedFunction(dom, {(pole, i): pa.from_int(Q5, c)})
        delta = Fraction(1, 8)
        x = fn.witness_point(f, pole, delta)
        y = fn.evaluate(f, x)
        assert pa.valuation(y) == fn.sup_norm(f) + i * delta

    def test_norm_by_pole(self):
        dom = two_hole_domain()
        f = fn.BoundedFunction(dom, {(0, 0): pa.from_int(Q5, 25), (1, 1): pa.from_int(Q5, 5),
                                     (2, 2): pa.one(Q5)})
        assert fn.norm_by_pole(f) == {0: 2, 1: 1, 2: 0}
        assert fn.sup_norm(f) == 0
        assert fn.is_integral(f)
        g = fn.BoundedFunction(dom, {(0, 1): pa.element(Q5, [(-1, 1)])})
        assert not fn.is_integral(g)


class TestProducts:
    @given(integral_functions(two_hole_domain()), integral_functions(two_hole_domain()))
    def test_product_agrees_pointwise(self, f, g):
        h = fn.mul(f, g)
        for x in domain_points(f.domain)[:6]:
            P = 20 * x.field.e
            want = pa.mul(fn.evaluate(f, x), fn.evaluate(g, x), P)
            assert agree(fn.evaluate(h, x), want, P - 4 * x.field.e)

    @given(integral_functions(two_hole_domain()), integral_functions(two_hole_domain()))
    def test_integral_functions_form_a_ring(self, f, g):
        assert fn.is_integral(fn.mul(f, g))
        assert fn.is_integral(fn.add(f, g))
        assert fn.sup_norm(fn.add(f, g)) >= min(fn.sup_norm(f), fn.sup_norm(g))

    def test_polar_parts_sum_back(self):
        dom = two_hole_domain()
        f = fn.BoundedFunction(dom, {(0, 0): pa.one(Q5), (0, 2): pa.from_int(Q5, 3),
                                     (1, 1): pa.one(Q5), (2, 3): pa.from_int(Q5, 7)})
        parts = fn.polar_parts(f)
        assert sorted(parts) == [0, 1, 2]
        total = parts[0]
        for j in (1, 2):
            total = fn.add(total, parts[j])
        assert total.terms.keys() == f.terms.keys()

    def test_random_domains(self):
        rng = random.Random(5)
        checked = 0
        for _ in range(300):
            X = gen.random_subset(rng, 5)
            for dom in X.components:
                if dom.outer is None or not dom.holes:
                    continue
                if any(D.center.field != Q5 for D in dom.disks()):
                    continue
                f = fn.BoundedFunction(dom, {(0, 1): pa.one(Q5), (1, 1): pa.one(Q5)})
                assert fn.is_integral(fn.mul(f, f))
                checked += 1
            if checked >= 5:
                break
        assert checked >= 5


class TestSerialization:
    def test_round_trip(self):
        dom = two_hole_domain()
        f = fn.BoundedFunction(dom, {(0, 2): pa.from_int(Q5, 3), (2, 1): pa.one(Q5)})
        g = fn.from_json(f.to_json())
        assert g.terms == f.terms and g.scales == f.scales and g.domain == f.domain

    @pytest.mark.parametrize("terms", [{(3, 1): None}, {(1, 0): None}])
    def test_bad_terms(self, terms):
        dom = two_hole_domain()
        with pytest.raises(fn.FunctionError):
            fn.BoundedFunction(dom, {k: pa.one(Q5) for k in terms})

    def test_projective_line_has_no_outer_powers(self):
        dom = ss.make_component(None, [dk.closed_disk(ZERO, 0)])
        with pytest.raises(fn.FunctionError):
            fn.BoundedFunction(dom, {(0, 1): pa.one(Q5)})
