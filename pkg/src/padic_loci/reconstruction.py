"""Reconstruction of a standard subset from finitely many membership queries.

The engine starts from the circular part around 0, then alternates between
searching for a point where the current approximation disagrees with the
oracle and refining the approximation around that point.  Every round
strictly increases the complexity, so at most m rounds are needed.
"""

import heapq
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations, product

from . import disks as dk
from . import padic as pa
from . import subsets as ss
from .padic import FieldDescriptor, INF
from .residue import MAX_ORDER, residue_field

DEFAULT_MAX_QUERIES = 1_000_000


class ReconstructionError(RuntimeError):
    pass


class BoundViolated(ReconstructionError):
    pass


class ResourceLimit(ReconstructionError):
    pass


class UnsupportedField(ReconstructionError):
    pass


def _lcm(a, b):
    return a // math.gcd(a, b) * b


def floor_log(q, n):
    """floor(log_q(n)) for integers q >= 2, n >= 1."""
    k, x = 0, q
    while x <= n:
        x *= q
        k += 1
    return k


# Farey grids

def farey_grid(m):
    """Sorted rationals in [0, 1] with denominator at most m."""
    if m < 1:
        raise ValueError("order must be at least 1")
    out = [Fraction(0)]
    a, b, c, d = 0, 1, 1, m
    while c <= m:
        out.append(Fraction(c, d))
        k = (m + b) // d
        a, b, c, d = c, d, k * c - a, k * d - b
    return out


def farey_range(lo, hi, m):
    """Rationals in [lo, hi] with denominator at most m, sorted."""
    base = farey_grid(m)
    out = []
    n = math.floor(lo)
    while n <= hi:
        for t in base[:-1]:
            x = n + t
            if lo <= x <= hi:
                out.append(x)
        n += 1
    return out


def simplest_between(a, b):
    """The rational with smallest denominator strictly between a < b."""
    a, b = Fraction(a), Fraction(b)
    if a >= b:
        raise ValueError("empty interval")
    # continued fraction descent: peel off the common integer part, invert
    whole = []
    while True:
        fl = math.floor(a)
        if fl + 1 < b:
            x = Fraction(fl + 1)
            break
        a, b = a - fl, b - fl
        whole.append(fl)
        if a == 0:
            x = Fraction(math.floor(1 / b) + 1)
            break
        a, b = 1 / b, 1 / a
    for fl in reversed(whole):
        x = fl + 1 / x
    return x


# budget functions

def psi0(p, m):
    return m if (m < p * p or p == 2) else m * m


phi0 = psi0


def psi1(p, q, m):
    if m <= 1:
        return 1
    return 2 * (m - 1) * psi0(p, m) * (1 + floor_log(q, m - 1))


def phi1(p, q, m):
    if m <= 1:
        return 1
    return phi0(p, m) * (1 + floor_log(q, m))


def psi(p, q, m):
    return max(s * psi1(p, q, m // s) for s in range(1, m + 1))


def phi(p, q, m):
    return max(s * phi1(p, q, m // s) for s in range(1, m + 1))


@dataclass
class QueryBudget:
    p: int
    q: int
    m: int
    psi0: list
    psi1: list
    psi: list
    phi0: list
    phi1: list
    phi: list
    epsilon: object = None
    query_count: int = 0

    @property
    def degree_cap(self):
        return max(self.psi[self.m], self.phi[self.m])

    def cap(self, mi):
        if mi < 1:
            return 1
        return max(self.psi[mi], self.phi[mi])

    def rows(self):
        names = ("psi0", "psi1", "psi", "phi0", "phi1", "phi")
        return [(n, getattr(self, n)[1:]) for n in names]


def budget(base, m, epsilon=None):
    if m < 1:
        raise ValueError("m must be at least 1")
    p, q = base.p, base.q
    rng = range(0, m + 1)
    return QueryBudget(
        p, q, m,
        [psi0(p, k) for k in rng], [psi1(p, q, k) for k in rng], [psi(p, q, k) if k else 0 for k in rng],
        [phi0(p, k) for k in rng], [phi1(p, q, k) for k in rng], [phi(p, q, k) if k else 0 for k in rng],
        epsilon)


# points

def offset_point(center, t, u=1, uf=1):
    """center with its digit at valuation t shifted by the residue u of F_{p^uf}.

    The result x satisfies v_p(x - center) = t exactly, and the residue of
    (x - center) / pi^(t e) is u, so distinct u give points pairwise at
    distance exactly t.
    """
    F = center.field
    t = Fraction(t)
    e = _lcm(F.e, t.denominator)
    f = _lcm(F.f, uf)
    R = residue_field(F.p, f)
    C = FieldDescriptor(F.p, f, e, F.residue.embed(F.zeta, R))
    x = pa.embed(center, C)
    j = int(t * e)
    digits = dict(x.digits)
    new = R.add(digits.get(j, 0), residue_field(F.p, uf).embed(u, R))
    if new:
        digits[j] = new
    else:
        digits.pop(j, None)
    return pa.minimal_form(pa.PadicElement(C, tuple(sorted(digits.items()))))


def point_enumerator(F, epsilon, limit=100_000):
    """One representative per open epsilon-disk meeting F in D(0,1)^-."""
    n = math.floor(Fraction(epsilon) * F.e)
    count = F.q ** max(n, 0)
    if count > limit:
        raise ResourceLimit("enumeration too large: %d points" % count)
    out = []
    R = range(F.q)
    for digs in product(R, repeat=max(n, 0)):
        out.append(pa.element(F, [(i + 1, c) for i, c in enumerate(digs)]))
    return out


def _orbit_minimal(R, idxs, codes, autos):
    """Whether codes is lexicographically smallest among its images."""
    for k, w in autos:
        image = tuple(R.mul(R.frobenius(c, k), R.pow(w, i)) for i, c in zip(idxs, codes))
        if image < codes:
            return False
    return True


def leading_orbit_size(F, i, c, base):
    """Number of G_base-conjugates of the residue disk of c * pi_F^i.

    Conjugation multiplies the leading term by Frobenius twists of c and by
    t-th roots of unity, t the tame part of the ramification that v(c pi^i)
    needs over base; wild roots of unity do not move the residue disk.
    """
    d = (Fraction(i, F.e) * base.e).denominator
    t = d
    while t % F.p == 0:
        t //= F.p
    R = F.residue
    level = R.level(R.pow(c, t))
    return t * (_lcm(level, base.f) // base.f)


class QueryLog:
    """Caching front end to an oracle that records every distinct query."""

    def __init__(self, oracle, base, max_queries=DEFAULT_MAX_QUERIES, jobs=1):
        self.oracle = oracle
        self.base = base
        self.max_queries = max_queries
        self.jobs = max(1, int(jobs or 1))
        self.cache = {}
        self.entries = []
        self.stage_caps = {}

    def __len__(self):
        return len(self.entries)

    def register_stage(self, name, cap):
        self.stage_caps[name] = max(cap, self.stage_caps.get(name, 0))

    def _record(self, x, key, answer, stage):
        self.cache[key] = answer
        self.entries.append({"point": x, "answer": answer, "stage": stage,
                             "degree": pa.degree_over(x, self.base)})

    def ask(self, x, stage):
        key = x.key()
        got = self.cache.get(key)
        if got is not None:
            return got
        if len(self.entries) >= self.max_queries:
            raise ResourceLimit("query budget of %d exhausted" % self.max_queries)
        answer = bool(self.oracle.query(x))
        self._record(x, key, answer, stage)
        return answer

    def ask_many(self, points, stage):
        if self.jobs == 1 or len(points) < 2:
            return [self.ask(x, stage) for x in points]
        fresh = []
        seen = set()
        for x in points:
            k = x.key()
            if k not in self.cache and k not in seen:
                seen.add(k)
                fresh.append((k, x))
        if len(self.entries) + len(fresh) > self.max_queries:
            raise ResourceLimit("query budget of %d exhausted" % self.max_queries)
        with ThreadPoolExecutor(max_workers=self.jobs) as pool:
            answers = list(pool.map(lambda kx: bool(self.oracle.query(kx[1])), fresh))
        for (k, x), a in zip(fresh, answers):
            self._record(x, k, a, stage)
        return [self.cache[x.key()] for x in points]

    def max_degree(self):
        return max((e["degree"] for e in self.entries), default=0)


@dataclass
class StageResult:
    runs: list
    minority: list = field(default_factory=list)


def runs_complexity(runs, e=1):
    """Complexity of a union of concentric annuli/disks given by runs (a, b)."""
    total = 0
    for a, b in runs:
        total += (Fraction(a) * e).denominator
        if b != INF:
            total += (Fraction(b) * e).denominator
    return total


def runs_to_components(center, runs):
    comps = []
    for a, b in runs:
        outer = dk.open_disk(center, a)
        holes = [] if b == INF else [dk.closed_disk(center, b)]
        comps.append(ss.make_component(outer, holes))
    return comps


class Reconstructor:
    def __init__(self, oracle, base, m, epsilon=None, max_queries=DEFAULT_MAX_QUERIES,
                 jobs=1):
        if m < 0:
            raise ValueError("m must be nonnegative")
        self.oracle = oracle
        self.base = base
        self.m = m
        eps = epsilon if epsilon is not None else getattr(oracle, "epsilon", None)
        self.v_eps = Fraction(1) if eps is None else Fraction(eps)
        if self.v_eps <= 0:
            raise ValueError("epsilon must be a positive valuation")
        self.budget = budget(base, max(m, 1), self.v_eps)
        self.log = QueryLog(oracle, base, max_queries, jobs)
        self.seeds = []
        self.history = []
        self.rounds = []

    # circular stages

    def circular_stage(self, center, lam0, m_loc, member, stage):
        """Circular part of a set around center inside D(center, > lam0).

        member(points, stage) answers membership, as a list, for the set
        being approximated.
        Returns the runs (a, b), a < b <= INF in v_p units, whose union of
        annuli D(center, >a) minus D(center, >=b) is the circular part.
        """
        F = center.field
        eF = F.e
        lam0 = Fraction(lam0)
        vcap = max(self.v_eps, lam0)
        if vcap == lam0:
            inner = member([center], stage)[0]
            return StageResult([(lam0, INF)] if inner else [])
        lo, hi = lam0 * eF, vcap * eF
        grid = farey_range(lo, hi, max(m_loc, 1))
        if grid[0] != lo:
            grid.insert(0, lo)
        if grid[-1] != hi:
            grid.append(hi)
        mids = [simplest_between(grid[k - 1], grid[k]) for k in range(1, len(grid))]
        dmax = max(x.denominator for x in grid[1:] + mids)
        kmax = 1 + floor_log(F.q, 2 * max(m_loc, 0) + 1)
        self.log.register_stage(stage, pa.degree_over(center, self.base) * dmax * kmax)

        probes = [offset_point(center, t / eF) for t in mids]
        *answers, inner = member(probes + [center], stage)
        n = len(grid) - 1
        circ = [False] * (n + 1)
        cand = []
        for k in range(1, n + 1):
            after = answers[k] if k < n else inner
            if answers[k - 1] and after:
                circ[k] = True
                cand.append(k)
        minority = []
        if cand:
            runs1 = self._runs(grid, answers, circ, inner)
            m1 = m_loc - runs_complexity(runs1)
            if m1 < 0:
                raise BoundViolated("circular part around %s needs complexity %d > %d"
                                    % (center, runs_complexity(runs1), m_loc))
            for k in cand:
                t = grid[k]
                if 2 * t.denominator > m1:
                    continue
                verdict, odd = self._vote(center, t / eF, m1, member, stage)
                circ[k] = verdict
                minority.extend(odd)
        runs = [(a / eF, b if b == INF else b / eF) for a, b in self._runs(grid, answers, circ, inner)]
        return StageResult(runs, minority)

    @staticmethod
    def _runs(grid, answers, circ, inner):
        n = len(grid) - 1
        pieces = []
        for k in range(1, n + 1):
            pieces.append(("A", k, answers[k - 1]))
            pieces.append(("C", k, circ[k]))
        pieces.append(("I", n, inner))
        runs = []
        start = None
        for kind, k, val in pieces:
            if val and start is None:
                start = grid[k - 1] if kind == "A" else grid[n]
            elif not val and start is not None:
                runs.append((start, grid[k]))
                start = None
        if start is not None:
            runs.append((start, INF))
        return runs

    def _vote(self, center, t, m1, member, stage):
        F = center.field
        n = 2 * m1 + 1
        k = 1 + floor_log(F.q, n)
        uf = F.f * k
        R = residue_field(F.p, uf)
        small = F.residue
        codes = [small.embed(c, R) for c in small.nonzero()]
        if len(codes) < n:
            taken = set(codes)
            codes += [c for c in R.nonzero() if c not in taken][: n - len(codes)]
        codes = codes[:n]
        points = [offset_point(center, t, u, uf) for u in codes]
        votes = member(points, stage)
        yes = sum(votes)
        verdict = yes > m1
        odd = [x for x, v in zip(points, votes) if v != verdict]
        return verdict, odd

    # oracle adapters

    def ask(self, points, stage):
        return self.log.ask_many(points, stage)

    # main loop

    def run(self):
        base = self.base
        res = self.circular_stage(pa.zero(base), Fraction(0), self.m, self.ask, "circular")
        self.seeds.extend(res.minority)
        X = ss.make_subset(base, runs_to_components(pa.zero(base), res.runs))
        c = ss.complexity(X)
        if c > self.m:
            raise BoundViolated("circular part already has complexity %d > %d" % (c, self.m))
        self.history.append(c)
        while c < self.m:
            found = self.search(X, self.m - c)
            if found is None:
                break
            point, tag = found
            X_new = self.refine(X, point, tag, self.m - c)
            problems = ss.validate(X_new, check_stability=False)
            if problems:
                raise BoundViolated("refinement contradicts the bound: %s" % problems[0])
            c_new = ss.complexity(X_new)
            self.rounds.append({"point": point, "tag": tag, "complexity": c_new})
            if c_new <= c:
                raise BoundViolated("refinement did not increase complexity (%d -> %d)" % (c, c_new))
            if c_new > self.m:
                raise BoundViolated("complexity %d exceeds the bound %d" % (c_new, self.m))
            X, c = X_new, c_new
            self.history.append(c)
        self._check_log(X)
        return X

    def _check_log(self, X):
        """Every recorded answer must agree with the result; otherwise the
        set needs more than m to describe."""
        for entry in self.log.entries:
            if ss.member(X, entry["point"]) != entry["answer"]:
                raise BoundViolated("answer at %s contradicts every set of complexity <= %d"
                                    % (entry["point"], self.m))

    # search

    def _disagrees(self, X, x, stage):
        answer = self.log.ask(x, stage)
        mine = ss.member(X, x)
        if answer != mine:
            return x, ("excess" if mine else "missing")
        return None

    def search(self, X, mi):
        stage = "search"
        seeds, self.seeds = self.seeds, []
        # seeds were queried while voting, so these answers come from the cache
        for x in seeds:
            got = self._disagrees(X, x, stage)
            if got:
                return got
        cap = self.budget.cap(mi)
        self.log.register_stage(stage, cap)
        for x in self._candidates(cap, mi):
            got = self._disagrees(X, x, stage)
            if got:
                return got
        return None

    def _fields(self, cap):
        out = []
        for deg in range(1, cap + 1):
            for e_rel in range(1, deg + 1):
                if deg % e_rel == 0:
                    out.append((deg // e_rel, e_rel))
        return out

    def _layer_size(self, f_rel, e_rel, n, k):
        """Rough number of orbit representatives in a layer, used for ordering."""
        q = self.base.p ** (self.base.f * f_rel)
        autos = f_rel * math.gcd(e_rel, q - 1)
        return Fraction(math.comb(n, k) * (q - 1) ** k, autos)

    def _candidates(self, cap, mi):
        """Candidate points, cheapest layers first.

        A layer is a field F of the family together with a digit count k; its
        points have exactly k nonzero digits below the locality depth.
        """
        base = self.base
        p = base.p
        heap = []
        for f_rel, e_rel in self._fields(cap):
            n = math.floor(self.v_eps * base.e * e_rel)
            if n >= 1:
                heapq.heappush(heap, (self._layer_size(f_rel, e_rel, n, 1),
                                      f_rel * e_rel, e_rel, f_rel, 1, n))
        yield pa.zero(base)
        while heap:
            size, deg, e_rel, f_rel, k, n = heapq.heappop(heap)
            if k < n:
                heapq.heappush(heap, (self._layer_size(f_rel, e_rel, n, k + 1),
                                      deg, e_rel, f_rel, k + 1, n))
            f = base.f * f_rel
            if p ** f > MAX_ORDER:
                raise UnsupportedField("unsupported field: residue field of size %d^%d needed" % (p, f))
            F = FieldDescriptor(p, f, base.e * e_rel,
                                base.residue.embed(base.zeta, residue_field(p, f)))
            yield from self._layer(F, k, n, mi)

    def _layer(self, F, k, n, mi):
        base = self.base
        R = F.residue
        eb = base.e
        e = F.e
        levels = [R.level(c) for c in range(R.q)]
        needed_f = F.f
        bf = _lcm(base.f, F.zeta_level())
        orbit_ok = {}
        autos = self._automorphisms(F)

        def lead_ok(i1, c1):
            key = (i1, c1)
            got = orbit_ok.get(key)
            if got is None:
                got = leading_orbit_size(F, i1, c1, base) <= mi
                orbit_ok[key] = got
            return got

        for i1 in range(1, n + 1):
            if (Fraction(i1, e) * eb).denominator > mi:
                continue
            for rest in combinations(range(i1 + 1, n + 1), k - 1):
                idxs = (i1,) + rest
                g = e
                for i in idxs:
                    g = math.gcd(g, i)
                if _lcm(e // g, eb) != e:
                    continue
                for c1 in R.nonzero():
                    if not lead_ok(i1, c1):
                        continue
                    for cs in product(R.nonzero(), repeat=k - 1):
                        fl = _lcm(bf, levels[c1])
                        for c in cs:
                            fl = _lcm(fl, levels[c])
                        if fl != needed_f:
                            continue
                        codes = (c1,) + cs
                        if autos and not _orbit_minimal(R, idxs, codes, autos):
                            continue
                        yield pa.PadicElement(F, tuple(zip(idxs, codes)))

    def _automorphisms(self, F):
        """Nontrivial automorphisms of F over the base that act digit by digit.

        These are Frobenius powers combined with pi -> omega pi, omega a root
        of unity of order prime to p; the oracle and every approximation are
        Galois-stable, so one point per orbit is enough.
        """
        base = self.base
        R = F.residue
        g = math.gcd(F.e // base.e, R.q - 1)
        omega = R.root_of_unity(g) if g > 1 else 1
        out = []
        for k in range(0, F.f, base.f):
            for j in range(g):
                if k or j:
                    out.append((k, R.pow(omega, j)))
        return out

    # refinement

    def refine(self, X, a, tag, mi):
        a = pa.minimal_form(a)
        if tag == "missing":
            return self._graft(X, a, mi)
        return self._carve_excess(X, a, mi)

    def _graft(self, X, a, mi):
        stage = "refine"

        def member(points, st):
            outside = [x for x in points if not ss.member(X, x)]
            got = dict(zip((x.key() for x in outside), self.ask(outside, st)))
            return [got.get(x.key(), False) for x in points]

        lam0 = pa.valuation(a)
        res = self.circular_stage(a, lam0, mi, member, stage)
        self.seeds.extend(res.minority)
        if not res.runs:
            raise BoundViolated("no component found around a disagreement point")
        new = []
        for comp in runs_to_components(a, res.runs):
            comp = self._absorb(X, comp)
            new.extend(ss.conjugate_components(comp, self.base))
        comps = list(X.components)
        for c in new:
            if c not in comps:
                comps.append(c)
        return ss.make_subset(self.base, comps)

    def _absorb(self, X, comp):
        """Carve holes for the current components that fall inside comp."""
        holes = list(comp.holes)
        for K in X.components:
            if K.outer is None:
                continue
            if dk.disk_relation(K.outer, comp.outer) != "d1_inside_d2":
                continue
            if any(dk.disk_relation(K.outer, h) == "d1_inside_d2" for h in holes):
                continue
            k = K.outer.center
            res = self.circular_stage(k, comp.outer.cut, self.m, self.ask, "carve")
            self.seeds.extend(res.minority)
            if not res.runs or res.runs[0][0] != comp.outer.cut or res.runs[0][1] == INF:
                raise BoundViolated("cannot separate an existing component from a new one")
            holes.append(dk.closed_disk(k, res.runs[0][1]))
        return ss.make_component(comp.outer, holes)

    def _carve_excess(self, X, a, mi):
        stage = "refine-excess"

        def member(points, st):
            inside = [x for x in points if ss.member(X, x)]
            got = dict(zip((x.key() for x in inside), self.ask(inside, st)))
            return [got.get(x.key(), True) for x in points]

        lam0 = pa.valuation(a)
        res = self.circular_stage(a, lam0, mi + 1, member, stage)
        self.seeds.extend(res.minority)
        if not res.runs or res.runs[0][0] != lam0 or res.runs[0][1] == INF:
            raise BoundViolated("no hole boundary found around an excess point")
        hole = dk.closed_disk(a, res.runs[0][1])
        comps = list(X.components)
        for H in dk.conjugate_disks(hole, self.base):
            for idx, comp in enumerate(comps):
                if comp.contains(H.center):
                    comps[idx] = ss.make_component(comp.outer, list(comp.holes) + [H])
                    break
            else:
                raise BoundViolated("excess hole lies outside the approximation")
        return ss.make_subset(self.base, comps)


@dataclass
class ReconstructionResult:
    subset: object
    log: QueryLog
    history: list
    rounds: list
    v_eps: Fraction

    @property
    def query_count(self):
        return len(self.log.entries)


def run_reconstruction(oracle, base, m, epsilon=None, max_queries=DEFAULT_MAX_QUERIES, jobs=1):
    """Reconstruct and keep the query log, round history and progress data."""
    engine = Reconstructor(oracle, base, m, epsilon, max_queries, jobs)
    X = engine.run()
    return ReconstructionResult(X, engine.log, engine.history, engine.rounds, engine.v_eps)


def reconstruct(oracle, base, m, epsilon=None, max_queries=DEFAULT_MAX_QUERIES, jobs=1):
    """The standard subset behind oracle, given a bound m on its complexity."""
    return run_reconstruction(oracle, base, m, epsilon, max_queries, jobs).subset


def circular_stage(oracle, base, m, v_cap):
    """Stand-alone circular stage around 0 (see Reconstructor.circular_stage)."""
    engine = Reconstructor(oracle, base, m, v_cap)
    res = engine.circular_stage(pa.zero(base), Fraction(0), m, engine.ask, "circular")
    return ss.make_subset(base, runs_to_components(pa.zero(base), res.runs))


def annulus_probe(oracle, lo, hi, base, center=None):
    """'in' or 'out' for the annulus lo < v_p(x - center) < hi, from one query.

    Valid for the whole annulus when no rational of denominator at most the
    complexity bound lies strictly between lo and hi.
    """
    center = center if center is not None else pa.zero(base)
    x = offset_point(center, simplest_between(lo, hi))
    return "in" if oracle.query(x) else "out"


def circle_decision(oracle, t, m1, base, center=None):
    """'in' or 'out' for the circle v_p(x - center) = t by a 2 m1 + 1 point vote."""
    center = center if center is not None else pa.zero(base)
    engine = Reconstructor(oracle, base, max(m1, 1), max(Fraction(t), Fraction(1)))
    verdict, _ = engine._vote(center, Fraction(t), m1, engine.ask, "circle")
    return "in" if verdict else "out"


def search_differences(oracle, X, base, m, epsilon=None, max_queries=DEFAULT_MAX_QUERIES):
    """First point (with tag 'missing' or 'excess') where X and oracle disagree, or None."""
    engine = Reconstructor(oracle, base, m, epsilon, max_queries)
    return engine.search(X, m - ss.complexity(X))


def refine(oracle, X, point, tag, base, m, epsilon=None, max_queries=DEFAULT_MAX_QUERIES):
    """Next approximation after a disagreement found by search_differences."""
    engine = Reconstructor(oracle, base, m, epsilon, max_queries)
    return engine.refine(X, point, tag, m - ss.complexity(X))
