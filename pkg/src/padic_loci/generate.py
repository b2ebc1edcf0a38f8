"""Random standard subsets inside D(0,1)^-, for property tests and demos."""

import random
from fractions import Fraction

from . import disks as dk
from . import padic as pa
from . import subsets as ss
from .padic import FieldDescriptor


def small_fields(p):
    """Q_p and its family extensions of degree 2."""
    return [FieldDescriptor(p), FieldDescriptor(p, 2), FieldDescriptor(p, 1, 2)]


def random_cut(rng, lo, hi, max_den=4):
    """A rational in (lo, hi] with denominator at most max_den."""
    options = []
    for d in range(1, max_den + 1):
        n = int(lo * d) - 1
        while Fraction(n, d) <= hi:
            x = Fraction(n, d)
            if lo < x <= hi:
                options.append(x)
            n += 1
    return rng.choice(sorted(set(options))) if options else None


def random_center(rng, F, depth, density=0.5):
    """An exact element of positive valuation with digits below depth * e."""
    R = F.residue
    digits = []
    for i in range(1, int(depth * F.e) + 1):
        if rng.random() < density:
            digits.append((i, rng.randrange(1, R.q)))
    return pa.minimal_form(pa.element(F, digits))


def _orbit(comp, base):
    return ss.conjugate_components(comp, base)


def random_subset(rng, p, max_components=3, max_holes=3, max_den=4, max_cut=3,
                  max_complexity=8, attempts=60):
    """A random valid standard subset over Q_p.

    Component and hole counts stay at most max_components / max_holes and every
    cut has denominator at most max_den.  Centers live in fields of degree at
    most 2; each component is added with its whole Galois orbit.
    """
    base = FieldDescriptor(p)
    fields = small_fields(p)
    target = rng.randint(1, max_components)
    comps = []
    for _ in range(attempts):
        if len(comps) >= target:
            break
        F = rng.choice(fields)
        cut = random_cut(rng, Fraction(-1, 2), Fraction(max_cut) - 1, max_den)
        if cut is None:
            continue
        cut = max(cut, Fraction(0))
        center = random_center(rng, F, cut) if cut > 0 else pa.zero(base)
        outer = dk.open_disk(center, cut)
        holes = []
        for _ in range(rng.randint(0, max_holes)):
            hcut = random_cut(rng, cut, Fraction(max_cut), max_den)
            if hcut is None:
                continue
            G = rng.choice([F, center.field, base])
            hc = pa.add(pa.embed(center, pa.compositum(center.field, G)),
                        random_center(rng, pa.compositum(center.field, G), hcut + 1, 0.3))
            hc = pa.minimal_form(hc) if hc.precision is None else pa.truncate(hc, int(hcut * hc.field.e) + 2)
            H = dk.closed_disk(hc, hcut)
            if not dk.contains(outer, H.center):
                continue
            if any(dk.disk_relation(H, h) != "disjoint" for h in holes):
                continue
            holes.append(H)
        try:
            comp = ss.make_component(outer, holes)
            orbit = _orbit(comp, base)
        except pa.PadicError:
            continue
        if len(comps) + len(orbit) > max_components:
            continue
        trial = ss.make_subset(base, comps + orbit)
        try:
            if ss.validate(trial):
                continue
            if ss.complexity(trial) > max_complexity:
                continue
        except pa.PadicError:
            continue
        comps.extend(orbit)
    return ss.make_subset(base, comps)


def random_circular_subset(rng, p, max_annuli=3, max_den=4, max_cut=4):
    """A random union of annuli (and possibly a central disk) centered at 0."""
    base = FieldDescriptor(p)
    zero = pa.zero(base)
    points = set()
    count = 2 * rng.randint(1, max_annuli)
    while len(points) < count:
        c = random_cut(rng, Fraction(-1), Fraction(max_cut), max_den)
        points.add(max(c, Fraction(0)))
        if len(points) == 1 and rng.random() < 0.2:
            break
    cuts = sorted(points)
    comps = []
    for k in range(0, len(cuts), 2):
        outer = dk.open_disk(zero, cuts[k])
        if k + 1 < len(cuts):
            comps.append(ss.make_component(outer, [dk.closed_disk(zero, cuts[k + 1])]))
        else:
            comps.append(ss.make_component(outer))
    return ss.make_subset(base, comps)
