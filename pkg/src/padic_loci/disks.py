"""Rational disks {x : v_p(x - a) > cut} (open) and {>= cut} (closed)."""

import math
from dataclasses import dataclass
from fractions import Fraction

from . import padic as pa
from .padic import FieldDescriptor, PadicError, PrecisionError, INF
from .residue import multiplicative_order, residue_field


class DiskError(PadicError):
    pass


def as_fraction(x):
    if isinstance(x, Fraction):
        return x
    if isinstance(x, str):
        return Fraction(x.strip())
    return Fraction(x)


def fraction_text(x):
    x = Fraction(x)
    return str(x.numerator) if x.denominator == 1 else "%d/%d" % (x.numerator, x.denominator)


@dataclass(frozen=True)
class Disk:
    center: pa.PadicElement
    cut: Fraction
    closed: bool = False

    @property
    def kind(self):
        return "closed" if self.closed else "open"

    def __str__(self):
        op = ">=" if self.closed else ">"
        return "D(%s, %s %s)" % (self.center, op, fraction_text(self.cut))

    def sort_key(self):
        c = self.center
        f = c.field
        return (self.cut, self.closed, (f.f, f.e, f.zeta), c.digits)

    def to_json(self):
        return {"center": self.center.to_json(), "cut": fraction_text(self.cut),
                "kind": self.kind}

    @classmethod
    def from_json(cls, obj):
        kind = obj.get("kind", "open")
        if kind not in ("open", "closed"):
            raise DiskError("disk kind must be 'open' or 'closed', got %r" % (kind,))
        return make_disk(pa.PadicElement.from_json(obj["center"]), obj["cut"], kind)


def _keep_limit(cut, e, closed):
    """Digits with index below this limit determine the disk."""
    x = cut * e
    if closed:
        return math.ceil(x)
    return math.floor(x) + 1


def make_disk(center, cut, kind="open"):
    """Disk in canonical form: center truncated at the cut, minimal field."""
    if kind not in ("open", "closed"):
        raise DiskError("disk kind must be 'open' or 'closed'")
    cut = as_fraction(cut)
    closed = kind == "closed"
    limit = _keep_limit(cut, center.field.e, closed)
    if limit <= 0:
        c = pa.zero(center.field)
    else:
        c = pa.truncate(center, limit)
    return Disk(pa.minimal_form(c), cut, closed)


def open_disk(center, cut):
    return make_disk(center, cut, "open")


def closed_disk(center, cut):
    return make_disk(center, cut, "closed")


def contains(D, x):
    return pa.exceeds(x, D.center, D.cut, D.closed)


def _not_larger(D1, D2):
    """D1 has radius at most that of D2 (so D1 is inside D2 once they meet)."""
    if D1.cut != D2.cut:
        return D1.cut > D2.cut
    return (not D1.closed) or D2.closed


def disk_relation(D1, D2):
    """One of 'equal', 'disjoint', 'd1_inside_d2', 'd2_inside_d1'."""
    if D1 == D2:
        return "equal"
    if _not_larger(D1, D2):
        small, big, tag = D1, D2, "d1_inside_d2"
    else:
        small, big, tag = D2, D1, "d2_inside_d1"
    if not contains(big, small.center):
        return "disjoint"
    if _not_larger(big, small):
        return "equal"
    return tag


def disks_meet(D1, D2):
    return disk_relation(D1, D2) != "disjoint"


@dataclass(frozen=True)
class Affine:
    """x -> alpha * x + beta."""
    alpha: pa.PadicElement
    beta: pa.PadicElement


@dataclass(frozen=True)
class Inversion:
    """x -> 1 / (x - pole)."""
    pole: pa.PadicElement


def apply_map(m, x, precision=None):
    if isinstance(m, Affine):
        return pa.add(pa.mul(m.alpha, x, precision), m.beta, precision)
    return pa.div(pa.one(x.field), pa.sub(x, m.pole, precision), precision)


def mobius_image(D, m):
    if isinstance(m, Affine):
        if not m.alpha.digits:
            raise DiskError("affine map with zero (or unknown) scale")
        cut = D.cut + pa.valuation(m.alpha)
        F = pa.compositum(pa.compositum(D.center.field, m.alpha.field), m.beta.field)
        prec = pa.working_precision(F, max(cut, Fraction(0)) + abs(pa.valuation(m.alpha)))
        center = apply_map(m, D.center, prec)
        return make_disk(center, cut, D.kind)
    F = pa.compositum(D.center.field, m.pole.field)
    shifted = pa.sub(D.center, m.pole, pa.working_precision(F, D.cut))
    if not shifted.digits:
        raise DiskError("pole inside disk")
    v = pa.valuation(shifted)
    if v > D.cut or (D.closed and v >= D.cut):
        raise DiskError("pole inside disk")
    cut = D.cut - 2 * v
    prec = pa.working_precision(F, max(cut, Fraction(0)) + 2 * abs(v) + abs(D.cut))
    shifted = pa.sub(D.center, m.pole, prec)
    center = pa.div(pa.one(F), shifted, prec)
    return make_disk(center, cut, D.kind)


class _OrbitData:
    """Galois data of a center over a base, at the level of digit descriptions.

    An automorphism is described by (k, j): Frobenius exponent k (a multiple of
    the base residue degree) and pi -> zeta_r^j pi with zeta_r a primitive
    r-th root of unity, r = e / e_base.  Valuations of differences of two
    conjugates are read off term by term; cyclotomic differences contribute
    v_p(zeta_{p^s} - 1) = 1 / (p^(s-1) (p - 1)).
    """

    def __init__(self, center, base):
        C = pa.compositum(center.field, base)
        p = C.p
        self.p = p
        self.base = base
        self.r = C.e // base.e
        w = 1
        while self.r % (w * p) == 0:
            w *= p
        self.w = w
        self.t = self.r // w
        fc = C.f
        if self.t > 1:
            fc = fc * multiplicative_order(p, self.t) // math.gcd(fc, multiplicative_order(p, self.t))
        self.L = FieldDescriptor(p, fc, C.e, C.residue.embed(C.zeta, residue_field(p, fc)))
        self.R = self.L.residue
        self.x = pa.embed(center, self.L)
        self.eta = self.R.root_of_unity(self.t) if self.t > 1 else 1
        self.actions = [(k, j) for k in range(0, fc, base.f) for j in range(self.r)]

    def _residue(self, c, i, act):
        k, j = act
        R = self.R
        return R.mul(R.frobenius(c, k), R.pow(self.eta, (j % self.t) * i))

    def _wild_gap(self, i, a1, a2):
        w = self.w
        if w == 1:
            return INF
        d = ((a1[1] - a2[1]) * i) % w
        if d == 0:
            return INF
        order = w // math.gcd(w, d)
        s = 0
        while order > 1:
            order //= self.p
            s += 1
        return Fraction(1, self.p ** (s - 1) * (self.p - 1))

    def same_disk(self, a1, a2, cut, closed):
        """Whether the two conjugates lie in a common disk of the given cut."""
        e = self.L.e
        terms = []
        for i, c in self.x.digits:
            r1 = self._residue(c, i, a1)
            r2 = self._residue(c, i, a2)
            if r1 != r2:
                terms.append(Fraction(i, e))
            else:
                gap = self._wild_gap(i, a1, a2)
                if gap != INF:
                    terms.append(Fraction(i, e) + gap)
        bound = INF if self.x.precision is None else Fraction(self.x.precision, e)
        best = min(terms) if terms else INF
        if best >= bound:
            best = INF
        if best == INF:
            if bound == INF or bound > cut or (closed and bound >= cut):
                return True
            raise PrecisionError("center precision too low to separate conjugate disks")
        inside = best >= cut if closed else best > cut
        if inside:
            return True
        if terms.count(best) > 1 and self.w > 1:
            raise DiskError("wild orbit undeclared: cancelling terms at valuation %s" % best)
        return False

    def classes(self, cut, closed, inertia_only=False):
        acts = [a for a in self.actions if not inertia_only or a[0] == 0]
        reps = []
        for a in acts:
            if not any(self.same_disk(a, b, cut, closed) for b in reps):
                reps.append(a)
        return reps


def orbit_size(D, base):
    """Number of distinct G_base-conjugates of D."""
    return len(_OrbitData(D.center, base).classes(D.cut, D.closed))


def field_of_definition(D, base):
    data = _OrbitData(D.center, base)
    n = len(data.classes(D.cut, D.closed))
    e_rel = len(data.classes(D.cut, D.closed, inertia_only=True))
    f_rel = n // e_rel
    if f_rel * e_rel != n:
        raise DiskError("inconsistent orbit data for %s" % (D,))
    f = base.f * f_rel
    zeta = base.residue.embed(base.zeta, residue_field(base.p, f))
    return FieldDescriptor(base.p, f, base.e * e_rel, zeta)


def is_defined_over(D, base):
    return orbit_size(D, base) == 1


def conjugate_disks(D, base):
    """The G_base-orbit of D, realized with explicit conjugate centers."""
    if is_defined_over(D, base):
        return [D]
    out = []
    for c in pa.conjugates(D.center, base):
        Dc = make_disk(c, D.cut, D.kind)
        if Dc not in out:
            out.append(Dc)
    return out


def _ur_field(center, e):
    F = center.field
    f0 = F.zeta_level()
    return FieldDescriptor(F.p, f0, e, F.residue.restrict(F.zeta, residue_field(F.p, f0)))


def meets_unramified(D, e):
    """Whether D meets the maximal unramified extension of U(pi_e)."""
    d = pa.distance_to_field(D.center, _ur_field(D.center, e), unramified=True)
    return d >= D.cut if D.closed else d > D.cut


def min_ram_degree(D, base, limit=None):
    """Smallest s such that D meets an unramified extension of base(pi_{s e_base})."""
    if limit is None:
        limit = 4 * base.p ** 2
    if limit < D.center.field.e:
        limit = D.center.field.e
    for s in range(1, limit + 1):
        if meets_unramified(D, base.e * s):
            return s
    raise DiskError("candidate list exhausted for %s" % (D,))


def width_t(D, base, s):
    return (Fraction(s * s) * D.cut * base.e).denominator


def gamma_disk(D, base):
    """The per-disk complexity s * t, computed over D's field of definition."""
    F = field_of_definition(D, base)
    s = min_ram_degree(D, F)
    return s * width_t(D, F, s)


def find_point(D, base):
    """A point of D of small degree over base (D must be defined over base)."""
    F = field_of_definition(D, base)
    if F.degree_over(base) != 1:
        raise DiskError("%s is not defined over %s" % (D, base))
    s = min_ram_degree(D, base)
    K = _ur_field(D.center, base.e * s)
    K = pa.compositum(K, base)
    C = pa.compositum(D.center.field, K)
    x = pa.embed(D.center, C)
    r = C.e // K.e
    kept = []
    for i, c in x.digits:
        if i % r:
            break
        kept.append((i, c))
    y = pa.minimal_form(pa.PadicElement(C, tuple(kept)))
    point = pa.minimal_form(pa.e_part(y, K))
    if not contains(D, point):
        raise DiskError("point search failed for %s" % (D,))
    return point
