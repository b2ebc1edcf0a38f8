"""Loci of crystalline deformation problems: bounds, radii and known examples.

A locus is the set of a_p in D(0,1)^- for which the semi-simplified reduction
of V_{k,a_p} is a given residual representation.  Nothing here computes such
reductions; the loci come from data files or from an external oracle.
"""

import json
import math
from dataclasses import dataclass
from fractions import Fraction
from importlib import resources

from . import disks as dk
from . import padic as pa
from . import subsets as ss
from .oracles import SyntheticOracle
from .padic import FieldDescriptor
from .residue import residue_field


class CrystallineError(ValueError):
    pass


class NotNice(CrystallineError):
    pass


class ExcludedCase(CrystallineError):
    pass


# residual representations

@dataclass(frozen=True)
class Character:
    """unr(u) * omega^n, with u a nonzero element of F_{p^f} (as a residue code)."""
    n: int
    u: int = 1
    f: int = 1

    def normalized(self, p):
        R = residue_field(p, self.f)
        d = R.level(self.u)
        return Character(self.n % (p - 1), R.restrict(self.u, residue_field(p, d)), d)

    def is_unramified(self, p):
        return self.n % (p - 1) == 0

    def to_json(self):
        return {"n": self.n, "u": self.u, "f": self.f}


def _char_ratio(p, a, b):
    """a / b as a character."""
    f = math.lcm(a.f, b.f)
    R = residue_field(p, f)
    ua = residue_field(p, a.f).embed(a.u, R)
    ub = residue_field(p, b.f).embed(b.u, R)
    return Character(a.n - b.n, R.mul(ua, R.inv(ub)), f).normalized(p)


@dataclass(frozen=True)
class Induced:
    """ind(omega_2^j) tensored with omega^n (irreducible)."""
    j: int
    n: int = 0

    def to_json(self):
        return {"type": "ind", "j": self.j, "n": self.n}


@dataclass(frozen=True)
class CharacterPair:
    """The semi-simple sum of two characters."""
    a: Character
    b: Character

    def to_json(self):
        return {"type": "sum", "a": self.a.to_json(), "b": self.b.to_json()}


@dataclass(frozen=True)
class Extension:
    """A non-split extension of the character quotient by the character sub."""
    quotient: Character
    sub: Character

    def semisimplification(self):
        return CharacterPair(self.quotient, self.sub)

    def to_json(self):
        return {"type": "ext", "quotient": self.quotient.to_json(), "sub": self.sub.to_json()}


def rbar_from_json(obj):
    kind = obj.get("type")
    if kind == "ind":
        return Induced(int(obj["j"]), int(obj.get("n", 0)))
    ch = lambda o: Character(int(o["n"]), int(o.get("u", 1)), int(o.get("f", 1)))
    if kind == "sum":
        return CharacterPair(ch(obj["a"]), ch(obj["b"]))
    if kind == "ext":
        return Extension(ch(obj["quotient"]), ch(obj["sub"]))
    raise CrystallineError("unknown residual representation type %r" % (kind,))


def rbar_label(r):
    if isinstance(r, Induced):
        s = "ind(w2^%d)" % r.j
        return s if r.n == 0 else "%s x w^%d" % (s, r.n)
    if isinstance(r, CharacterPair):
        return "%s + %s" % (_char_label(r.a), _char_label(r.b))
    return "ext(%s by %s)" % (_char_label(r.quotient), _char_label(r.sub))


def _char_label(c):
    return "unr(%d)w^%d" % (c.u, c.n) if c.f == 1 else "unr([%d] in F_p^%d)w^%d" % (c.u, c.f, c.n)


def is_nice_semisimple(p, r):
    """Not scalar, and for p = 3 not a sum of characters with ratio omega^(+-1)."""
    if isinstance(r, Extension):
        r = r.semisimplification()
    if isinstance(r, Induced):
        return True
    ratio = _char_ratio(p, r.a, r.b)
    if ratio.n == 0 and ratio.u == 1:
        return False
    if p == 3 and ratio.u == 1 and ratio.n in (1 % (p - 1), (-1) % (p - 1)):
        return False
    return True


def is_nice_extension(p, rho):
    """A non-split extension of alpha by beta with beta / alpha not in {1, omega}."""
    ratio = _char_ratio(p, rho.sub, rho.quotient)
    return not (ratio.u == 1 and ratio.n in (0, 1 % (p - 1)))


def base_field(p, r):
    """The unramified field generated by the unramified parts of r."""
    if isinstance(r, Induced):
        return FieldDescriptor(p)
    if isinstance(r, Extension):
        r = r.semisimplification()
    f = 1
    for c in (r.a, r.b):
        d = c.normalized(p).f
        f = math.lcm(f, d)
    return FieldDescriptor(p, f)


@dataclass(frozen=True)
class CrystallineProblem:
    p: int
    k: int
    rbar: object
    mu_aut: int = None
    rho: Extension = None

    def __post_init__(self):
        if self.k < 2:
            raise CrystallineError("weight k must be at least 2")

    @property
    def base(self):
        return base_field(self.p, self.rbar)

    def nice(self):
        if not is_nice_semisimple(self.p, self.rbar):
            return False
        return self.rho is None or is_nice_extension(self.p, self.rho)


def complexity_bound(problem):
    """The complexity bound licensed by the multiplicity mu_aut."""
    if not problem.nice():
        raise NotNice("not nice: %s admits no complexity bound" % rbar_label(problem.rbar))
    if problem.mu_aut is None:
        raise CrystallineError("mu_aut must be supplied")
    rho = problem.rho
    if rho is not None and rho.quotient.is_unramified(problem.p):
        return problem.mu_aut - 1
    return problem.mu_aut


def local_constancy_radius(p, k, v_ap=None):
    """Valuation threshold beyond which the reduction no longer changes.

    For a_p != 0 of valuation v_ap, any a_p' with v_p(a_p - a_p') above
    2 v_ap + floor(p (k-1) / (p-1)^2) gives the same reduction.  For a_p = 0
    (v_ap None) the threshold is floor((k-2) / (p-1)) on v_p(a_p') itself.
    """
    if k < 2:
        raise CrystallineError("weight k must be at least 2")
    if v_ap is None:
        return Fraction((k - 2) // (p - 1))
    return 2 * Fraction(v_ap) + (p * (k - 1)) // (p - 1) ** 2


def uniform_epsilon(p, k):
    """A locality radius valid on all of D(0,1)^-: floor(3p(k-1)/(p-1)^2)."""
    return Fraction((3 * p * (k - 1)) // (p - 1) ** 2)


def conjectural_epsilon(p, k):
    """floor((k-2)/(p+1)), observed on examples but not proven; label it as such."""
    return Fraction((k - 2) // (p + 1))


def unit_circle_part(problem):
    """The part of the locus on |x| = 1, a residue disk {x : x mod p = u}, or None."""
    rho = problem.rho
    p, k = problem.p, problem.k
    if rho is None or isinstance(problem.rbar, Induced):
        return None
    q = rho.quotient.normalized(p)
    s = rho.sub.normalized(p)
    if q.n != 0:
        return None
    f = math.lcm(q.f, s.f)
    R = residue_field(p, f)
    u = residue_field(p, q.f).embed(q.u, R)
    u_sub = residue_field(p, s.f).embed(s.u, R)
    if R.mul(u, u_sub) != 1:
        return None
    n = s.n
    if n != (k - 1) % (p - 1):
        return None
    if n in (0, 1) and u in (1, R.neg(1)):
        raise ExcludedCase("excluded case: n = %d with u = +-1" % n)
    F = FieldDescriptor(p, q.f)
    return dk.open_disk(pa.teichmuller(F, q.u), 0)


# known loci

@dataclass
class LocusFixture:
    id: str
    problem: CrystallineProblem
    locus: ss.StandardSubset
    complexity: int
    epsilon: Fraction

    def oracle(self):
        return SyntheticOracle(self.locus, self.epsilon)


FIXTURE_FIELDS = ("id", "p", "k", "rbar", "mu_aut", "complexity")


def locus_from_json(obj):
    """A standard subset from its JSON, ignoring fixture metadata if present."""
    if isinstance(obj, dict):
        obj = {k: v for k, v in obj.items() if k not in FIXTURE_FIELDS}
    return ss.from_json(obj)


def _fixture_from_json(obj, fid):
    missing = [key for key in FIXTURE_FIELDS[1:] if key not in obj]
    if missing:
        raise CrystallineError("fixture %s: missing fields %s" % (fid, missing))
    rbar = rbar_from_json(obj["rbar"])
    problem = CrystallineProblem(int(obj["p"]), int(obj["k"]), rbar, int(obj["mu_aut"]))
    locus = locus_from_json(obj)
    eps = uniform_epsilon(problem.p, problem.k)
    return LocusFixture(fid, problem, locus, int(obj["complexity"]), eps)


def fixture_files():
    root = resources.files("padic_loci") / "fixtures"
    return sorted((p for p in root.iterdir() if p.name.endswith(".json")), key=lambda p: p.name)


def fixture_suite():
    out = []
    for path in fixture_files():
        obj = json.loads(path.read_text())
        out.append(_fixture_from_json(obj, obj.get("id", path.name[:-5])))
    return out


def fixture(fid):
    for fx in fixture_suite():
        if fx.id == fid:
            return fx
    raise KeyError(fid)


def verify_fixture(fx):
    """Recompute the complexity and canonical form of a fixture; report mismatches."""
    report = {"id": fx.id, "problems": []}
    X = fx.locus
    violations = ss.validate(X)
    if violations:
        report["problems"].append("%s: invalid locus: %s" % (fx.id, violations[0]))
        report["ok"] = False
        return report
    c = ss.complexity(X, fx.problem.base)
    parts = ss.complexity_by_parts(X, fx.problem.base)
    report["complexity"] = c
    report["published"] = fx.complexity
    report["parts"] = parts
    if c != fx.complexity:
        report["problems"].append("%s: complexity %d differs from the published %d"
                                  % (fx.id, c, fx.complexity))
    if sum(parts) != c:
        report["problems"].append("%s: parts do not add up" % fx.id)
    again = ss.loads(ss.dumps(X))
    canonical = ss.make_subset(X.base, [ss.make_component(comp.outer, comp.holes) for comp in X.components])
    if again != X or canonical != X:
        report["problems"].append("%s: stored locus is not in canonical form" % fx.id)
    bound = complexity_bound(fx.problem)
    report["bound"] = bound
    if c > bound:
        report["problems"].append("%s: complexity %d exceeds the bound %d" % (fx.id, c, bound))
    report["ok"] = not report["problems"]
    return report


def external_oracle(spec, epsilon=None, timeout=30.0):
    """An oracle answered by another process or server over the wire protocol."""
    from .wire import open_oracle
    return open_oracle(spec, epsilon=epsilon, timeout=timeout)


def synthetic_oracle(X, epsilon=None):
    return SyntheticOracle(X, epsilon)
