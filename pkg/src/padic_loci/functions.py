"""Bounded analytic functions on a connected standard subset, truncated.

On X = D(a_0, > r_0) minus the closed disks D(a_j, >= r_j), a bounded function
is a convergent series

    f(x) = sum_i c_{i,0} u^i + sum_j sum_{i >= 1} c_{i,j} w_j^i,
    u = (x - a_0) / t_0,  w_j = t_j / (x - a_j),  v_p(t_j) = r_j,

and its sup-norm is the largest |c_{i,j}|.  Here only finitely many
coefficients are stored.
"""

from dataclasses import dataclass, field
from fractions import Fraction

from . import padic as pa
from . import subsets as ss
from .padic import FieldDescriptor, INF
from .residue import residue_field


class FunctionError(ValueError):
    pass


DEFAULT_DIGITS = 40


def scale_element(cut, field):
    """pi_e^(cut e), an element of valuation cut; e is the least ramification
    index that is a multiple of field.e and makes cut e an integer."""
    cut = Fraction(cut)
    e = pa._lcm(cut.denominator, field.e)
    F = FieldDescriptor(field.p, 1, e)
    return pa.minimal_form(pa.PadicElement(F, ((int(cut * e), 1),)))


@dataclass
class BoundedFunction:
    domain: ss.Component
    terms: dict                      # (pole, i) -> PadicElement; pole 0 is the outer disk
    scales: tuple = ()               # t_0 (outer, None for P1), then t_1.. for the holes
    digits: int = DEFAULT_DIGITS     # working precision, in digits of the ambient field
    ambient: FieldDescriptor = field(default=None)

    def __post_init__(self):
        n_holes = len(self.domain.holes)
        if not self.scales:
            self.scales = default_scales(self.domain)
        if len(self.scales) != n_holes + 1:
            raise FunctionError("need one scale for the outer disk and one per hole")
        clean = {}
        for (pole, i), c in self.terms.items():
            if not 0 <= pole <= n_holes:
                raise FunctionError("pole index %d out of range" % pole)
            if i < 0 or (pole > 0 and i == 0):
                raise FunctionError("bad exponent %d for pole %d" % (i, pole))
            if pole == 0 and i > 0 and self.domain.outer is None:
                raise FunctionError("no positive powers on the projective line")
            if c.digits or c.precision is not None:
                clean[(pole, int(i))] = c
        self.terms = clean
        F = self.ambient or _base_field(self.domain, self.scales)
        for c in self.terms.values():
            F = pa.compositum(F, c.field)
        self.ambient = F

    def coefficient(self, pole, i):
        c = self.terms.get((pole, i))
        return c if c is not None else pa.zero(self.ambient)

    @property
    def precision(self):
        return self.digits * self.ambient.e

    def to_json(self):
        return {
            "domain": self.domain.to_json(),
            "field": self.ambient.to_json(),
            "scales": [None if t is None else t.to_json() for t in self.scales],
            "terms": [{"pole": pole, "i": i, "coeff": c.to_json()}
                      for (pole, i), c in sorted(self.terms.items())],
        }


def _base_field(domain, scales):
    F = None
    for D in domain.disks():
        F = D.center.field if F is None else pa.compositum(F, D.center.field)
    for t in scales:
        if t is not None:
            F = t.field if F is None else pa.compositum(F, t.field)
    if F is None:
        raise FunctionError("cannot infer a field for a constant function on P1")
    return F


def default_scales(domain):
    out = []
    if domain.outer is None:
        out.append(None)
    else:
        out.append(scale_element(domain.outer.cut, domain.outer.center.field))
    for h in domain.holes:
        out.append(scale_element(h.cut, h.center.field))
    return tuple(out)


def from_json(obj):
    from .subsets import from_json as subset_from_json
    wrapper = {"schema": ss.SCHEMA, "base": obj["field"], "components": [obj["domain"]]}
    domain = subset_from_json(wrapper).components[0]
    scales = tuple(None if t is None else pa.PadicElement.from_json(t)
                   for t in obj.get("scales", [])) or ()
    terms = {}
    for term in obj.get("terms", []):
        terms[(int(term["pole"]), int(term["i"]))] = pa.PadicElement.from_json(term["coeff"])
    return BoundedFunction(domain, terms, scales, ambient=FieldDescriptor.from_json(obj["field"]))


def constant(domain, c):
    return BoundedFunction(domain, {(0, 0): c})


def sup_norm(f):
    """The sup-norm in valuation form: min v_p of the coefficients (INF for 0)."""
    vals = [pa.valuation(c) for c in f.terms.values() if c.digits]
    return min(vals) if vals else INF


def norm_by_pole(f):
    """Valuation form of the norm of each polar part f_j (j = 0 is the outer part)."""
    out = {}
    for (pole, _), c in f.terms.items():
        if c.digits:
            v = pa.valuation(c)
            out[pole] = min(out.get(pole, INF), v)
    return out


def is_integral(f):
    """All coefficients in the valuation ring."""
    return all(pa.valuation(c) >= 0 for c in f.terms.values() if c.digits)


def _ambient_with(f, x):
    return pa.compositum(f.ambient, x.field)


def evaluate(f, x):
    """f(x) for x in the domain, summed at the function's working precision."""
    if not f.domain.contains(x):
        raise FunctionError("point outside the domain")
    L = _ambient_with(f, x)
    prec = f.digits * L.e
    xx = pa.embed(x, L)
    total = pa.zero(L)
    holes = f.domain.holes
    powers = {}

    def base_value(pole):
        if pole == 0:
            a, t = f.domain.outer.center, f.scales[0]
            return pa.div(pa.sub(xx, pa.embed(a, L), prec), pa.embed(t, L), prec)
        a, t = holes[pole - 1].center, f.scales[pole]
        return pa.div(pa.embed(t, L), pa.sub(xx, pa.embed(a, L), prec), prec)

    for (pole, i), c in sorted(f.terms.items()):
        if i == 0:
            term = pa.embed(c, L)
        else:
            if pole not in powers:
                powers[pole] = base_value(pole)
            term = pa.mul(pa.embed(c, L), pa.pow_int(powers[pole], i, prec), prec)
        total = pa.add(total, term, prec)
    return total


def add(f, g):
    _same_domain(f, g)
    L = pa.compositum(f.ambient, g.ambient)
    prec = min(f.digits, g.digits) * L.e
    terms = {k: pa.embed(c, L) for k, c in f.terms.items()}
    for k, c in g.terms.items():
        terms[k] = pa.add(terms[k], pa.embed(c, L), prec) if k in terms else pa.embed(c, L)
    return BoundedFunction(f.domain, terms, f.scales, min(f.digits, g.digits), L)


def _same_domain(f, g):
    if f.domain != g.domain or f.scales != g.scales:
        raise FunctionError("functions live on different domains or scales")


class _Reducer:
    """Rewrites products of basis monomials u^a and w_j^b in the basis.

    u w_j = t_j / t_0 + ((a_j - a_0) / t_0) w_j and, for j != k,
    w_j w_k = (t_k / (a_j - a_k)) w_j - (t_j / (a_j - a_k)) w_k.
    All these coefficients are integral on a valid domain.
    """

    def __init__(self, domain, scales, L, prec):
        self.L, self.prec = L, prec
        self.centers = [None if domain.outer is None else pa.embed(domain.outer.center, L)]
        self.centers += [pa.embed(h.center, L) for h in domain.holes]
        self.scales = [None if t is None else pa.embed(t, L) for t in scales]
        self.cache = {}

    def _div(self, a, b):
        return pa.div(a, b, self.prec)

    def mono(self, m1, m2):
        """Product of two monomials (pole, i) as a dict of monomials."""
        m1 = (0, 0) if m1[1] == 0 else m1
        m2 = (0, 0) if m2[1] == 0 else m2
        if m1 > m2:
            m1, m2 = m2, m1
        key = (m1, m2)
        got = self.cache.get(key)
        if got is not None:
            return got
        (j, a), (k, b) = m1, m2
        one = pa.one(self.L)
        if a == 0:
            out = {m2: one}
        elif b == 0:
            out = {m1: one}
        elif j == k:
            out = {(j, a + b): one}
        else:
            if j == 0:
                t0, tk, a0, ak = self.scales[0], self.scales[k], self.centers[0], self.centers[k]
                alpha = self._div(tk, t0)
                beta = self._div(pa.sub(ak, a0, self.prec), t0)
                lin = {(0, 0): alpha, (k, 1): beta}
            else:
                d = pa.sub(self.centers[j], self.centers[k], self.prec)
                lin = {(j, 1): self._div(self.scales[k], d),
                       (k, 1): pa.neg(self._div(self.scales[j], d), self.prec)}
            rest = self.mono((j, a - 1), (k, b - 1))
            out = {}
            for mono_r, cr in rest.items():
                for mono_l, cl in lin.items():
                    for mono_p, cp in self.mono(mono_r, mono_l).items():
                        term = pa.mul(pa.mul(cr, cl, self.prec), cp, self.prec)
                        out[mono_p] = pa.add(out[mono_p], term, self.prec) if mono_p in out else term
        self.cache[key] = out
        return out


def mul(f, g):
    """Product, rewritten in the basis (exact up to the working precision)."""
    _same_domain(f, g)
    L = pa.compositum(f.ambient, g.ambient)
    digits = min(f.digits, g.digits)
    prec = digits * L.e
    red = _Reducer(f.domain, f.scales, L, prec)
    out = {}
    for m1, c1 in f.terms.items():
        for m2, c2 in g.terms.items():
            c = pa.mul(pa.embed(c1, L), pa.embed(c2, L), prec)
            for m, cm in red.mono(m1, m2).items():
                term = pa.mul(c, cm, prec)
                out[m] = pa.add(out[m], term, prec) if m in out else term
    return BoundedFunction(f.domain, out, f.scales, digits, L)


def polar_parts(f):
    """The decomposition f = sum_j f_j by pole location (constants go to f_0)."""
    parts = {}
    for (pole, i), c in f.terms.items():
        parts.setdefault(pole, {})[(pole, i)] = c
    return {j: BoundedFunction(f.domain, t, f.scales, f.digits, f.ambient)
            for j, t in parts.items()}


def witness_point(f, pole, delta=Fraction(1, 8), attempts=64):
    """A domain point where the basis monomials of the given pole are near 1.

    The point sits at valuation delta inside the boundary circle of the outer
    disk (pole 0) or outside that of a hole, so |u| or |w_j| equals
    p^(-delta).  Residues are tried in order until the point avoids the holes.
    """
    from .reconstruction import offset_point
    dom = f.domain
    if pole == 0:
        if dom.outer is None:
            raise FunctionError("the projective line has no outer witness")
        center, v = dom.outer.center, dom.outer.cut + delta
    else:
        h = dom.holes[pole - 1]
        center, v = h.center, h.cut - delta
    for uf in (1, 2, 3):
        codes = list(residue_field(center.field.p, uf).nonzero())[:attempts]
        for u in codes:
            x = offset_point(center, v, u, uf)
            if dom.contains(x):
                return x
    raise FunctionError("no witness point found for pole %d" % pole)
