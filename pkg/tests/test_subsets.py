import json
import random
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from padic_loci import disks as dk
from padic_loci import generate as gen
from padic_loci import padic as pa
from padic_loci import subsets as ss
from padic_loci.padic import FieldDescriptor

Q3, Q5 = FieldDescriptor(3), FieldDescriptor(5)


def annulus(base, a, b):
    zero = pa.zero(base)
    return ss.make_component(dk.open_disk(zero, a), [dk.closed_disk(zero, b)])


@st.composite
def random_subsets(draw):
    seed = draw(st.integers(0, 10 ** 6))
    p = draw(st.sampled_from([2, 3, 5]))
    return gen.random_subset(random.Random(seed), p)


def quadratic_unit(p):
    F = FieldDescriptor(p, 2)
    R = F.residue
    return F, next(a for a in R.nonzero() if R.level(a) == 2)


class TestComplexityValues:
    @pytest.mark.parametrize("p", [3, 5])
    def test_open_annulus(self, p):
        X = ss.make_subset(FieldDescriptor(p), [annulus(FieldDescriptor(p), 0, 1)])
        assert ss.complexity(X) == 2

    @pytest.mark.parametrize("p", [3, 5])
    def test_half_disk(self, p):
        Qp = FieldDescriptor(p)
        X = ss.make_subset(Qp, [ss.make_component(dk.open_disk(pa.zero(Qp), Fraction(1, 2)))])
        assert ss.complexity(X) == 2

    def test_empty(self):
        X = ss.empty(Q5)
        assert ss.complexity(X) == 0
        assert not ss.member(X, pa.zero(Q5))
        assert ss.validate(X) == []

    def test_conjugate_pair(self):
        F, c = quadratic_unit(5)
        a = pa.element(F, [(3, c)])
        comp = ss.make_component(dk.open_disk(a, 4))
        orbit = ss.conjugate_components(comp, Q5)
        assert len(orbit) == 2
        X = ss.make_subset(Q5, orbit)
        parts = ss.irreducible_decomposition(X)
        assert len(parts) == 1 and len(parts[0].components) == 2
        assert ss.component_field(parts[0].components[0], Q5) == F
        assert ss.complexity(X) == 2
        assert ss.complexity_by_parts(X) == [2]


class TestValidation:
    def test_overlapping_components(self):
        zero = pa.zero(Q5)
        X = ss.make_subset(Q5, [ss.make_component(dk.open_disk(zero, 0)),
                                ss.make_component(dk.open_disk(zero, 1))])
        assert ss.validate(X)

    def test_hole_outside(self):
        zero = pa.zero(Q5)
        comp = ss.make_component(dk.open_disk(zero, 1), [dk.closed_disk(pa.one(Q5), 2)])
        assert ss.validate(ss.make_subset(Q5, [comp]))

    def test_missing_conjugate(self):
        F, c = quadratic_unit(5)
        comp = ss.make_component(dk.open_disk(pa.element(F, [(3, c)]), 4))
        X = ss.make_subset(Q5, [comp])
        assert ss.validate(X)
        with pytest.raises(ss.InvalidSubset):
            ss.irreducible_decomposition(X)

    def test_check_raises(self):
        zero = pa.zero(Q5)
        X = ss.make_subset(Q5, [ss.make_component(dk.open_disk(zero, 0)),
                                ss.make_component(dk.open_disk(zero, 0))])
        with pytest.raises(ss.InvalidSubset):
            ss.check(X)

    def test_projective_line(self):
        comp = ss.make_component(None, [dk.closed_disk(pa.zero(Q5), 0)])
        X = ss.make_subset(Q5, [comp])
        assert ss.validate(X) == []
        assert ss.member(X, pa.element(Q5, [(-1, 1)]))
        assert not ss.member(X, pa.zero(Q5))


class TestSerialization:
    def test_round_trip(self):
        X = ss.make_subset(Q5, [annulus(Q5, Fraction(1, 2), 2)])
        assert ss.loads(ss.dumps(X)) == X
        assert ss.loads(ss.dumps(X, indent=2)) == X

    @pytest.mark.parametrize("obj, where", [
        ({"schema": "nope"}, "$.schema"),
        ({"schema": ss.SCHEMA, "base": {"p": 5}, "components": [{}]}, "$.components[0]"),
        ({"schema": ss.SCHEMA, "base": {"p": 5}, "extra": 1}, "unknown fields"),
        ({"schema": ss.SCHEMA, "base": {"p": 5},
          "components": [{"outer": {"center": {"field": {"p": 5}, "digits": []}}}]}, "cut"),
    ])
    def test_schema_errors_name_the_path(self, obj, where):
        with pytest.raises(ss.SchemaError) as info:
            ss.from_json(obj)
        assert where in str(info.value)

    @given(random_subsets())
    def test_random_round_trip(self, X):
        assert ss.loads(ss.dumps(X)) == X
        assert json.loads(ss.dumps(X))["schema"] == ss.SCHEMA


class TestInvariants:
    @given(random_subsets())
    def test_complexity_bounds_component_count(self, X):
        assert ss.complexity(X) >= len(X.components)

    @given(random_subsets())
    def test_additivity_over_irreducible_parts(self, X):
        assert ss.complexity(X) == sum(ss.complexity_by_parts(X))
        assert sum(ss.complexity(P) for P in ss.irreducible_decomposition(X)) == ss.complexity(X)

    @given(random_subsets(), st.sampled_from([2, 3]))
    def test_unramified_base_change(self, X, f):
        F = FieldDescriptor(X.base.p, f)
        assert ss.complexity(X, F) == ss.complexity(X, X.base)

    @given(random_subsets())
    def test_ramified_base_change_does_not_increase(self, X):
        p = X.base.p
        if p == 2:
            return
        E = FieldDescriptor(p, 1, 2)
        assert ss.complexity(X, E) <= ss.complexity(X)

    @given(random_subsets(), st.integers(0, 2 ** 16))
    def test_approximations(self, X, mask):
        rng = random.Random(mask)
        comps = []
        for c in X.components:
            if rng.random() < 0.3:
                continue
            comps.append(ss.make_component(c.outer, [h for h in c.holes if rng.random() < 0.6]))
        Y = ss.make_subset(X.base, comps)
        assert ss.is_approximation(Y, X)
        if Y == X:
            assert ss.complexity(Y) == ss.complexity(X)
        else:
            assert ss.complexity(Y) < ss.complexity(X)

    def test_not_an_approximation(self):
        X = ss.make_subset(Q5, [annulus(Q5, 0, 1)])
        Y = ss.make_subset(Q5, [annulus(Q5, 0, 2)])
        assert not ss.is_approximation(Y, X)

    def test_denominators_of_circular_sets(self):
        rng = random.Random(2024)
        for _ in range(100):
            p = rng.choice([2, 3, 5])
            X = gen.random_circular_subset(rng, p)
            total = 0
            for comp in X.components:
                for D in comp.disks():
                    total += D.cut.denominator
            assert ss.complexity(X) == total


class TestParts:
    def test_outer_and_circular(self):
        F, c = quadratic_unit(5)
        ring = annulus(Q5, 0, 1)
        far = ss.make_component(dk.open_disk(pa.element(F, [(3, c)]), 4))
        comps = [ring] + ss.conjugate_components(far, Q5)
        X = ss.make_subset(Q5, comps)
        assert ss.circular_part(X) == ss.make_subset(Q5, [ring])
        outer = ss.outer_part(X)
        assert all(not comp.holes for comp in outer.components)
        assert len(outer.components) == 3

    def test_finest_cut(self):
        X = ss.make_subset(Q5, [annulus(Q5, Fraction(1, 3), Fraction(7, 2))])
        assert ss.finest_cut(X) == Fraction(7, 2)
        assert ss.finest_cut(ss.empty(Q5)) is None
