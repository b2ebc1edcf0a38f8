"""Standard subsets: finite disjoint unions of open disks (or P^1) minus closed disks."""

import json
from dataclasses import dataclass

from . import disks as dk
from . import padic as pa
from .padic import FieldDescriptor, PadicError

SCHEMA = "standard-subset/1"


class InvalidSubset(ValueError):
    def __init__(self, violations):
        self.violations = list(violations)
        super().__init__("; ".join(self.violations) or "invalid subset")


class SchemaError(ValueError):
    pass


@dataclass(frozen=True)
class Component:
    outer: object  # Disk, or None for the projective line
    holes: tuple = ()

    @property
    def bounded(self):
        return self.outer is not None

    def disks(self):
        return ([self.outer] if self.outer is not None else []) + list(self.holes)

    def contains(self, x):
        if self.outer is not None and not dk.contains(self.outer, x):
            return False
        return not any(dk.contains(h, x) for h in self.holes)

    def sort_key(self):
        head = (0,) if self.outer is None else (1, self.outer.sort_key())
        return head + tuple(h.sort_key() for h in self.holes)

    def __str__(self):
        s = "P1" if self.outer is None else str(self.outer)
        for h in self.holes:
            s += " \\ " + str(h)
        return s

    def to_json(self):
        return {"outer": "P1" if self.outer is None else self.outer.to_json(),
                "holes": [h.to_json() for h in self.holes]}


def make_component(outer, holes=()):
    holes = tuple(sorted(holes, key=lambda h: h.sort_key()))
    return Component(outer, holes)


@dataclass(frozen=True)
class StandardSubset:
    base: FieldDescriptor
    components: tuple = ()

    def __str__(self):
        if not self.components:
            return "{}"
        return " u ".join("(%s)" % c for c in self.components)

    def __iter__(self):
        return iter(self.components)

    def __len__(self):
        return len(self.components)

    def to_json(self):
        return {"schema": SCHEMA, "base": self.base.to_json(),
                "components": [c.to_json() for c in self.components]}


def make_subset(base, components=()):
    comps = tuple(sorted(components, key=lambda c: c.sort_key()))
    return StandardSubset(base, comps)


def empty(base):
    return StandardSubset(base, ())


def member(X, x):
    return any(c.contains(x) for c in X.components)


def _inside_some_hole(D, comp):
    return any(dk.disk_relation(D, h) in ("d1_inside_d2", "equal") for h in comp.holes)


def _components_disjoint(c1, c2):
    if c1.outer is None and c2.outer is None:
        return False
    if c1.outer is None:
        return _inside_some_hole(c2.outer, c1)
    if c2.outer is None:
        return _inside_some_hole(c1.outer, c2)
    rel = dk.disk_relation(c1.outer, c2.outer)
    if rel == "disjoint":
        return True
    if rel == "equal":
        return False
    if rel == "d1_inside_d2":
        return _inside_some_hole(c1.outer, c2)
    return _inside_some_hole(c2.outer, c1)


def _component_violations(k, comp):
    out = []
    if comp.outer is not None and comp.outer.closed:
        out.append("component %d: outer disk must be open" % k)
    for j, h in enumerate(comp.holes):
        if not h.closed:
            out.append("component %d hole %d: holes must be closed" % (k, j))
        if comp.outer is not None:
            rel = dk.disk_relation(h, comp.outer)
            if rel != "d1_inside_d2":
                out.append("component %d hole %d: not strictly inside the outer disk" % (k, j))
    for j in range(len(comp.holes)):
        for l in range(j + 1, len(comp.holes)):
            if dk.disk_relation(comp.holes[j], comp.holes[l]) != "disjoint":
                out.append("component %d holes %d and %d: not disjoint" % (k, j, l))
    return out


def validate(X, check_stability=True):
    """List of violated invariants (empty when X is a valid standard subset)."""
    out = []
    comps = X.components
    for k, comp in enumerate(comps):
        try:
            out.extend(_component_violations(k, comp))
        except PadicError as exc:
            out.append("component %d: %s" % (k, exc))
    for i in range(len(comps)):
        for j in range(i + 1, len(comps)):
            try:
                if not _components_disjoint(comps[i], comps[j]):
                    out.append("components %d and %d: not disjoint" % (i, j))
            except PadicError as exc:
                out.append("components %d and %d: %s" % (i, j, exc))
    if out or not check_stability:
        return out
    present = set(comps)
    for k, comp in enumerate(comps):
        try:
            conj = conjugate_components(comp, X.base)
        except PadicError as exc:
            out.append("component %d: %s" % (k, exc))
            continue
        for c in conj:
            if c not in present:
                out.append("component %d: Galois conjugate %s missing, set is not defined over %s"
                           % (k, c, X.base))
                break
    return out


def check(X):
    problems = validate(X)
    if problems:
        raise InvalidSubset(problems)
    return X


def conjugate_components(comp, base):
    """The G_base-orbit of a connected component, as canonical components."""
    disks = comp.disks()
    if all(dk.is_defined_over(D, base) for D in disks):
        return [comp]
    F = base
    for D in disks:
        F = pa.compositum(F, D.center.field)
    L, t, actions = pa.galois_actions(F, base)
    out = []
    for act in actions:
        moved = [dk.make_disk(pa.apply_action(D.center, L, t, act), D.cut, D.kind) for D in disks]
        if comp.outer is None:
            c = make_component(None, moved)
        else:
            c = make_component(moved[0], moved[1:])
        if c not in out:
            out.append(c)
    return out


def component_field(comp, base):
    """Field of definition of a connected component (that of its outer disk)."""
    if comp.outer is None:
        return base
    return dk.field_of_definition(comp.outer, base)


def irreducible_decomposition(X, base=None):
    """Partition of the components into G_base-orbits."""
    base = base or X.base
    remaining = list(X.components)
    parts = []
    while remaining:
        comp = remaining[0]
        try:
            orbit = conjugate_components(comp, base)
        except pa.WildConjugation as exc:
            raise PadicError("wild orbit undeclared: %s" % exc)
        missing = [c for c in orbit if c not in remaining]
        if missing:
            raise InvalidSubset(["Galois conjugate %s missing, set is not defined over %s"
                                 % (missing[0], base)])
        for c in orbit:
            remaining.remove(c)
        parts.append(make_subset(X.base, orbit))
    return parts


def complexity(X, base=None):
    """Sum of the per-disk complexities over all outer disks and holes."""
    base = base or X.base
    total = 0
    for comp in X.components:
        for D in comp.disks():
            total += dk.gamma_disk(D, base)
    return total


def complexity_by_parts(X, base=None):
    """Per irreducible part: [E_1:E] (gamma_{E_1}(outer) + sum gamma_{E_1}(holes))."""
    base = base or X.base
    out = []
    for part in irreducible_decomposition(X, base):
        rep = part.components[0]
        E1 = component_field(rep, base)
        local = sum(dk.gamma_disk(D, E1) for D in rep.disks())
        out.append(E1.degree_over(base) * local)
    return out


def outer_part(X):
    return make_subset(X.base, [make_component(c.outer) for c in X.components])


def _contains_zero(D):
    return dk.contains(D, pa.zero(D.center.field))


def circular_part(X):
    comps = []
    for c in X.components:
        if c.outer is not None and not _contains_zero(c.outer):
            continue
        holes = [h for h in c.holes if _contains_zero(h)]
        comps.append(make_component(c.outer, holes))
    return make_subset(X.base, comps)


def is_approximation(Y, X):
    """Y is obtained from X by dropping components and/or holes."""
    used = set()
    for cy in Y.components:
        match = None
        for k, cx in enumerate(X.components):
            if k not in used and cx.outer == cy.outer and set(cy.holes) <= set(cx.holes):
                match = k
                break
        if match is None:
            return False
        used.add(match)
    return True


def finest_cut(X):
    cuts = [D.cut for c in X.components for D in c.disks()]
    return max(cuts) if cuts else None


def dumps(X, indent=None):
    return json.dumps(X.to_json(), sort_keys=True, indent=indent,
                      separators=(",", ": ") if indent else (",", ":"))


def _path_error(path, msg):
    return SchemaError("%s: %s" % (path, msg))


def _disk_from(obj, path, closed_expected=None):
    if not isinstance(obj, dict):
        raise _path_error(path, "expected an object")
    for key in ("center", "cut"):
        if key not in obj:
            raise _path_error(path, "missing field %r" % key)
    unknown = set(obj) - {"center", "cut", "kind"}
    if unknown:
        raise _path_error(path, "unknown fields %s" % sorted(unknown))
    try:
        D = dk.Disk.from_json(obj)
    except (PadicError, ValueError, KeyError, TypeError, ZeroDivisionError) as exc:
        raise _path_error(path, str(exc))
    return D


def from_json(obj):
    if not isinstance(obj, dict):
        raise SchemaError("$: expected an object")
    if obj.get("schema") != SCHEMA:
        raise SchemaError("$.schema: expected %r, got %r" % (SCHEMA, obj.get("schema")))
    unknown = set(obj) - {"schema", "base", "components"}
    if unknown:
        raise SchemaError("$: unknown fields %s" % sorted(unknown))
    try:
        base = FieldDescriptor.from_json(obj["base"])
    except (KeyError, TypeError, ValueError) as exc:
        raise SchemaError("$.base: %s" % exc)
    comps = []
    raw = obj.get("components", [])
    if not isinstance(raw, list):
        raise SchemaError("$.components: expected a list")
    for k, c in enumerate(raw):
        path = "$.components[%d]" % k
        if not isinstance(c, dict) or "outer" not in c:
            raise _path_error(path, "expected an object with an 'outer' field")
        outer = None if c["outer"] == "P1" else _disk_from(c["outer"], path + ".outer")
        holes = [_disk_from(h, "%s.holes[%d]" % (path, j)) for j, h in enumerate(c.get("holes", []))]
        comps.append(make_component(outer, holes))
    return make_subset(base, comps)


def loads(text):
    return from_json(json.loads(text))
