"""Elements of the fields U_f(pi), pi^e = p * [zeta].

An element is a finite Teichmueller expansion sum [c_i] pi^i together with a
precision N: digits with index >= N are unknown.  precision None means the
expansion is exact, i.e. all later digits vanish.  Residues c_i are codes in
the residue field F_{p^f} (see residue.py).
"""

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from .residue import is_prime, multiplicative_order, residue_field

INF = math.inf
DEFAULT_VALUATION = 24
GUARD_DIGITS = 4


class PadicError(ValueError):
    pass


class FieldMismatch(PadicError):
    pass


class WildConjugation(PadicError):
    pass


class PrecisionError(ArithmeticError):
    pass


def _lcm(a, b):
    return a // math.gcd(a, b) * b


@dataclass(frozen=True)
class FieldDescriptor:
    p: int
    f: int = 1
    e: int = 1
    zeta: int = 1

    def __post_init__(self):
        if not is_prime(self.p):
            raise PadicError("%r is not prime" % (self.p,))
        if self.f < 1 or self.e < 1:
            raise PadicError("residue degree and ramification index must be positive")
        if not 0 < self.zeta < self.p ** self.f:
            raise PadicError("zeta must be a nonzero residue of F_%d" % self.p ** self.f)

    @property
    def q(self):
        return self.p ** self.f

    @property
    def residue(self):
        return residue_field(self.p, self.f)

    @property
    def label(self):
        head = "Q_%d" % self.q
        if self.e == 1:
            return head
        z = "" if self.zeta == 1 else "*[%d]" % self.zeta
        return "%s(pi^%d=%d%s)" % (head, self.e, self.p, z)

    def __str__(self):
        return self.label

    def zeta_level(self):
        return self.residue.level(self.zeta)

    def contains(self, other):
        if other.p != self.p or self.f % other.f or self.e % other.e:
            return False
        return other.residue.embed(other.zeta, self.residue) == self.zeta

    def degree_over(self, base):
        if not self.contains(base):
            raise FieldMismatch("%s does not contain %s" % (self, base))
        return (self.f // base.f) * (self.e // base.e)

    def eisenstein(self):
        """Coefficients (lowest first) of pi's minimal polynomial x^e - p[zeta]."""
        unram = FieldDescriptor(self.p, self.f, 1, self.zeta)
        lead = neg(mul(from_int(unram, self.p), teichmuller(unram, self.zeta)))
        return [lead] + [zero(unram)] * (self.e - 1) + [one(unram)]

    def to_json(self):
        return {"p": self.p, "f": self.f, "e": self.e, "zeta": self.zeta}

    @classmethod
    def from_json(cls, obj):
        return cls(int(obj["p"]), int(obj.get("f", 1)), int(obj.get("e", 1)),
                   int(obj.get("zeta", 1)))


def make_field(p, f=1, e=1, zeta=1):
    return FieldDescriptor(p, f, e, zeta)


@lru_cache(maxsize=None)
def compositum(a, b):
    """Smallest family field containing both a and b."""
    if a.p != b.p:
        raise FieldMismatch("no common field: different primes %d and %d" % (a.p, b.p))
    if a.contains(b):
        return a
    if b.contains(a):
        return b
    f = _lcm(a.f, b.f)
    big = residue_field(a.p, f)
    za = a.residue.embed(a.zeta, big)
    zb = b.residue.embed(b.zeta, big)
    if za != zb:
        raise FieldMismatch("no common field: %s and %s use different zeta" % (a, b))
    return FieldDescriptor(a.p, f, _lcm(a.e, b.e), za)


@dataclass(frozen=True)
class PadicElement:
    field: FieldDescriptor
    digits: tuple
    precision: object = None

    def __post_init__(self):
        last = None
        q = self.field.q
        for i, c in self.digits:
            if last is not None and i <= last:
                raise PadicError("digit indices must be strictly increasing")
            if not 0 < c < q:
                raise PadicError("digit residue %r out of range for F_%d" % (c, q))
            last = i
        if self.precision is not None and last is not None and last >= self.precision:
            raise PadicError("digit index beyond precision")

    @property
    def exact(self):
        return self.precision is None

    def is_zero(self):
        return not self.digits and self.precision is None

    def __str__(self):
        terms = []
        for i, c in self.digits:
            terms.append("[%d]pi^%d" % (c, i) if self.field.e > 1 else "[%d]%d^%d" % (c, self.field.p, i))
        if self.precision is not None:
            terms.append("O(pi^%d)" % self.precision)
        return " + ".join(terms) if terms else "0"

    def to_json(self):
        return {"field": self.field.to_json(),
                "digits": [[i, c] for i, c in self.digits],
                "precision": self.precision}

    @classmethod
    def from_json(cls, obj):
        field = FieldDescriptor.from_json(obj["field"])
        prec = obj.get("precision")
        return element(field, [(int(i), int(c)) for i, c in obj.get("digits", [])],
                       None if prec is None else int(prec))

    def key(self):
        a = minimal_form(self)
        f = a.field
        return (f.p, f.f, f.e, f.zeta, a.digits, a.precision)


def element(field, digits, precision=None):
    """Build an element, sorting digits and dropping zero residues."""
    ds = sorted((int(i), int(c)) for i, c in digits if c)
    for k in range(1, len(ds)):
        if ds[k][0] == ds[k - 1][0]:
            raise PadicError("repeated digit index %d" % ds[k][0])
    return PadicElement(field, tuple(ds), precision)


def zero(field):
    return PadicElement(field, ())


def one(field):
    return PadicElement(field, ((0, 1),))


def uniformizer(field):
    return PadicElement(field, ((1, 1),))


def teichmuller(field, residue, index=0):
    if residue == 0:
        return zero(field)
    return PadicElement(field, ((index, residue),))


def valuation(a):
    if a.digits:
        return Fraction(a.digits[0][0], a.field.e)
    if a.precision is None:
        return INF
    raise PrecisionError("indeterminate valuation: element is zero to precision %d" % a.precision)


@lru_cache(maxsize=1 << 16)
def embed(a, target):
    src = a.field
    if src == target:
        return a
    if not target.contains(src):
        raise FieldMismatch("no common field: %s does not embed in %s" % (src, target))
    r = target.e // src.e
    R, T = src.residue, target.residue
    digits = tuple((i * r, R.embed(c, T)) for i, c in a.digits)
    prec = None if a.precision is None else a.precision * r
    return PadicElement(target, digits, prec)


@lru_cache(maxsize=1 << 16)
def minimal_form(a):
    """Rewrite an exact element over the smallest family field containing it."""
    F = a.field
    if a.precision is not None:
        return a
    g = F.e
    for i, _ in a.digits:
        g = math.gcd(g, i)
    e = F.e // g
    R = F.residue
    fmin = F.zeta_level()
    for _, c in a.digits:
        fmin = _lcm(fmin, R.level(c))
    if e == F.e and fmin == F.f:
        return a
    small = FieldDescriptor(F.p, fmin, e, R.restrict(F.zeta, residue_field(F.p, fmin)))
    S = small.residue
    digits = tuple((i // g, R.restrict(c, S)) for i, c in a.digits)
    return PadicElement(small, digits, None)


def degree_over(a, base):
    F = compositum(minimal_form(a).field, base)
    return F.degree_over(base)


def same(a, b):
    """Exact equality of two elements as numbers with identical precision data."""
    return a.key() == b.key()


def _aligned(a, b):
    if a.field == b.field:
        return a, b
    C = compositum(a.field, b.field)
    return embed(a, C), embed(b, C)


def _prec_min(x, y):
    if x is None:
        return y
    if y is None:
        return x
    return min(x, y)


@lru_cache(maxsize=1 << 16)
def _residue_key(p, f, c):
    """A field-independent name for a residue: its level and value there."""
    R = residue_field(p, f)
    d = R.level(c)
    return d, R.restrict(c, residue_field(p, d))


def _keyed_digits(a, e):
    r = e // a.field.e
    F = a.field
    return [(i * r, _residue_key(F.p, F.f, c)) for i, c in a.digits]


def difference_index(a, b):
    """First index (at ramification lcm(e_a, e_b)) where a and b differ.

    Returns (index, e, bound): index is None when no difference is visible
    below bound, the common precision (None if both are exact).  Digits are
    compared through their smallest residue field, so no compositum is built.
    """
    A, B = a.field, b.field
    if A == B:
        e = A.e
        da, db = a.digits, b.digits
        bound = _prec_min(a.precision, b.precision)
    else:
        if A.p != B.p:
            raise FieldMismatch("no common field: different primes %d and %d" % (A.p, B.p))
        if _residue_key(A.p, A.f, A.zeta) != _residue_key(B.p, B.f, B.zeta):
            raise FieldMismatch("no common field: %s and %s use different zeta" % (A, B))
        e = _lcm(A.e, B.e)
        da, db = _keyed_digits(a, e), _keyed_digits(b, e)
        prec_a = None if a.precision is None else a.precision * (e // A.e)
        prec_b = None if b.precision is None else b.precision * (e // B.e)
        bound = _prec_min(prec_a, prec_b)
    n = min(len(da), len(db))
    idx = None
    for k in range(n):
        if da[k] != db[k]:
            idx = min(da[k][0], db[k][0])
            break
    else:
        if len(da) > n:
            idx = da[n][0]
        elif len(db) > n:
            idx = db[n][0]
    if idx is not None and bound is not None and idx >= bound:
        idx = None
    return idx, e, bound


def distance(a, b):
    """v_p(a - b), computed positionally."""
    idx, e, bound = difference_index(a, b)
    if idx is not None:
        return Fraction(idx, e)
    if bound is None:
        return INF
    raise PrecisionError("difference is zero to precision %d" % bound)


def exceeds(a, b, cut, closed=False):
    """Whether v_p(a - b) > cut (or >= cut when closed)."""
    idx, e, bound = difference_index(a, b)
    if idx is not None:
        v = Fraction(idx, e)
        return v >= cut if closed else v > cut
    if bound is None:
        return True
    v = Fraction(bound, e)
    if v > cut or (closed and v >= cut):
        return True
    raise PrecisionError("precision %d too low to compare at %s" % (bound, cut))


def working_precision(field, cut):
    """Index cap for computations that must resolve valuations up to cut."""
    return math.floor(Fraction(cut) * field.e) + 1 + GUARD_DIGITS


def default_precision(field):
    return DEFAULT_VALUATION * field.e


class _Ring:
    """O_F modulo p^M: vectors of e coefficients over W = Z[X]/(g, p^M)."""

    def __init__(self, F, M):
        self.F = F
        self.p = F.p
        self.f = F.f
        self.e = F.e
        self.M = M
        self.mod = F.p ** M
        self.g = [int(c) for c in F.residue.modulus]
        self._teich = {}
        self.zeta = self.teich(F.zeta)
        self.zeta_inv = self.teich(F.residue.inv(F.zeta))
        self.pz = self.wscale(self.zeta, F.p)
        self._pz_pow = [self.wone()]

    def wone(self):
        return (1,) + (0,) * (self.f - 1)

    def wzero(self):
        return (0,) * self.f

    def wadd(self, a, b):
        m = self.mod
        return tuple((x + y) % m for x, y in zip(a, b))

    def wsub(self, a, b):
        m = self.mod
        return tuple((x - y) % m for x, y in zip(a, b))

    def wscale(self, a, n):
        m = self.mod
        return tuple(x * n % m for x in a)

    def wmul(self, a, b):
        f, m, g = self.f, self.mod, self.g
        if f == 1:
            return (a[0] * b[0] % m,)
        prod = [0] * (2 * f - 1)
        for i, x in enumerate(a):
            if x:
                for j, y in enumerate(b):
                    prod[i + j] += x * y
        for k in range(2 * f - 2, f - 1, -1):
            c = prod[k]
            if c:
                for j in range(f):
                    prod[k - f + j] -= c * g[j]
        return tuple(x % m for x in prod[:f])

    def wpow(self, a, n):
        result = self.wone()
        while n:
            if n & 1:
                result = self.wmul(result, a)
            a = self.wmul(a, a)
            n >>= 1
        return result

    def teich(self, r):
        got = self._teich.get(r)
        if got is None:
            x = tuple(self.F.residue.coeffs(r))
            for _ in range(self.M):
                x = self.wpow(x, self.F.q)
            self._teich[r] = got = x
        return got

    def wresidue(self, a):
        return self.F.residue.from_coeffs([x % self.p for x in a])

    def pz_pow(self, k):
        while len(self._pz_pow) <= k:
            self._pz_pow.append(self.wmul(self._pz_pow[-1], self.pz))
        return self._pz_pow[k]

    def zero(self):
        return [self.wzero() for _ in range(self.e)]

    def from_digits(self, digits, s):
        A = self.zero()
        e = self.e
        for i, c in digits:
            k, r = divmod(i - s, e)
            A[r] = self.wadd(A[r], self.wmul(self.teich(c), self.pz_pow(k)))
        return A

    def add(self, A, B):
        return [self.wadd(x, y) for x, y in zip(A, B)]

    def sub(self, A, B):
        return [self.wsub(x, y) for x, y in zip(A, B)]

    def mul(self, A, B):
        e = self.e
        conv = [self.wzero() for _ in range(2 * e - 1)]
        for i, x in enumerate(A):
            if any(x):
                for j, y in enumerate(B):
                    if any(y):
                        conv[i + j] = self.wadd(conv[i + j], self.wmul(x, y))
        for k in range(2 * e - 2, e - 1, -1):
            if any(conv[k]):
                conv[k - e] = self.wadd(conv[k - e], self.wmul(conv[k], self.pz))
        return conv[:e]

    def inverse(self, U, n):
        """Inverse of a unit modulo pi^n by Newton iteration."""
        R = self.F.residue
        Z = self.zero()
        Z[0] = self.teich(R.inv(self.wresidue(U[0])))
        two = self.zero()
        two[0] = self.wscale(self.wone(), 2)
        good = 1
        while good < n:
            Z = self.mul(Z, self.sub(two, self.mul(U, Z)))
            good *= 2
        return Z

    def to_digits(self, A, s, count):
        A = list(A)
        p, e = self.p, self.e
        out = []
        for k in range(count):
            r = self.wresidue(A[0])
            if r:
                out.append((s + k, r))
                A[0] = self.wsub(A[0], self.teich(r))
            head = tuple(x // p for x in A[0])
            A = A[1:] + [self.wmul(head, self.zeta_inv)]
        return tuple(out)


_rings = {}


def _ring(F, count):
    M = count // F.e + 3
    key = (F, M)
    ring = _rings.get(key)
    if ring is None:
        if len(_rings) > 256:
            _rings.clear()
        ring = _rings[key] = _Ring(F, M)
    return ring


def _cap(F, precision):
    return default_precision(F) if precision is None else precision


def _result(F, s, P, combine, inputs):
    count = P - s
    if count <= 0:
        return PadicElement(F, (), P)
    ring = _ring(F, count)
    vecs = [ring.from_digits([d for d in x.digits if d[0] < P], t) for x, t in inputs]
    digits = ring.to_digits(combine(ring, *vecs), s, count)
    return PadicElement(F, digits, P)


def add(a, b, precision=None):
    return _add_sub(a, b, False, precision)


def sub(a, b, precision=None):
    return _add_sub(a, b, True, precision)


def _add_sub(a, b, negate, precision):
    a, b = _aligned(a, b)
    F = a.field
    if b.is_zero():
        return a
    if a.is_zero():
        return neg(b, precision) if negate else b
    P = _prec_min(a.precision, b.precision)
    ia = {i for i, _ in a.digits}
    if not negate and not any(i in ia for i, _ in b.digits):
        digits = tuple(sorted(a.digits + b.digits))
        if P is not None:
            digits = tuple(d for d in digits if d[0] < P)
        return PadicElement(F, digits, P)
    if P is None:
        P = _cap(F, precision)
    elif precision is not None:
        P = min(P, precision)
    s = min([d[0] for d in a.digits[:1] + b.digits[:1]] + [P])
    op = (lambda r, x, y: r.sub(x, y)) if negate else (lambda r, x, y: r.add(x, y))
    return _result(F, s, P, op, [(a, s), (b, s)])


def neg(a, precision=None):
    F = a.field
    if a.is_zero():
        return a
    if F.p != 2:
        R = F.residue
        return PadicElement(F, tuple((i, R.neg(c)) for i, c in a.digits), a.precision)
    P = a.precision if a.precision is not None else _cap(F, precision)
    if not a.digits:
        return PadicElement(F, (), P)
    s = a.digits[0][0]
    return _result(F, s, P, lambda r, x: r.sub(r.zero(), x), [(a, s)])


def _lead(a):
    return a.digits[0][0]


def mul(a, b, precision=None):
    a, b = _aligned(a, b)
    F = a.field
    if a.is_zero() or b.is_zero():
        return zero(F)
    if not a.digits or not b.digits:
        P = (a.precision if not a.digits else _lead(a)) + (b.precision if not b.digits else _lead(b))
        return PadicElement(F, (), P)
    sa, sb = _lead(a), _lead(b)
    ra = None if a.precision is None else a.precision - sa
    rb = None if b.precision is None else b.precision - sb
    rel = _prec_min(ra, rb)
    s = sa + sb
    if rel is None:
        if len(a.digits) == 1 and len(b.digits) == 1:
            return PadicElement(F, ((s, F.residue.mul(a.digits[0][1], b.digits[0][1])),))
        P = _cap(F, precision)
    else:
        P = s + rel
        if precision is not None:
            P = min(P, precision)
    return _result(F, s, P, lambda r, x, y: r.mul(x, y), [(a, sa), (b, sb)])


def div(a, b, precision=None):
    a, b = _aligned(a, b)
    F = a.field
    if not b.digits:
        if b.precision is None:
            raise ZeroDivisionError("division by zero")
        raise PrecisionError("divisor is zero to the known precision")
    if a.is_zero():
        return a
    if not a.digits:
        return PadicElement(F, (), a.precision - _lead(b))
    sa, sb = _lead(a), _lead(b)
    ra = None if a.precision is None else a.precision - sa
    rb = None if b.precision is None else b.precision - sb
    rel = _prec_min(ra, rb)
    s = sa - sb
    if rel is None:
        P = _cap(F, precision)
        rel = P - s
    else:
        P = s + rel
        if precision is not None:
            P = min(P, precision)
    if rel <= 0:
        return PadicElement(F, (), P)

    def combine(r, x, y):
        return r.mul(x, r.inverse(y, rel))
    return _result(F, s, P, combine, [(a, sa), (b, sb)])


def pow_int(a, n, precision=None):
    if n < 0:
        return div(one(a.field), pow_int(a, -n, precision), precision)
    result = one(a.field)
    base = a
    while n:
        if n & 1:
            result = mul(result, base, precision)
        base = mul(base, base, precision)
        n >>= 1
    return result


def from_int(field, n, precision=None):
    """The integer n as an element of field (inexact unless it terminates trivially)."""
    n = int(n)
    if n == 0:
        return zero(field)
    p, e = field.p, field.e
    v = 0
    while n % p == 0:
        n //= p
        v += 1
    s = v * e
    if n == 1 and field.zeta == 1:
        return PadicElement(field, ((s, 1),))
    if n == -1 and field.zeta == 1 and p != 2:
        return PadicElement(field, ((s, field.residue.neg(1)),))
    P = _cap(field, precision)
    if P <= s:
        return PadicElement(field, (), P)
    ring = _ring(field, P - s)
    A = ring.zero()
    A[0] = ring.wmul(ring.wscale(ring.wone(), n), ring.wpow(ring.zeta_inv, v))
    return PadicElement(field, ring.to_digits(A, s, P - s), P)


def from_fraction(field, x, precision=None):
    x = Fraction(x)
    num = from_int(field, x.numerator, precision)
    if x.denominator == 1:
        return num
    return div(num, from_int(field, x.denominator, precision), precision)


def truncate(a, index):
    """Keep digits with index < index; the result is exact."""
    if a.precision is not None and a.precision < index:
        raise PrecisionError("cannot truncate at %d: precision is %d" % (index, a.precision))
    return PadicElement(a.field, tuple(d for d in a.digits if d[0] < index))


def _closure(F, base):
    C = compositum(F, base)
    p = C.p
    e_rel = C.e // base.e
    w = 1
    while e_rel % (w * p) == 0:
        w *= p
    t = e_rel // w
    if w > 2 or (w == 2 and p != 2):
        raise WildConjugation("wild conjugation unsupported for ramification %d over %s" % (e_rel, base))
    fc = C.f
    if t > 1:
        fc = _lcm(fc, multiplicative_order(p, t))
    L = FieldDescriptor(p, fc, C.e, C.residue.embed(C.zeta, residue_field(p, fc)))
    return L, e_rel, t, w


def galois_actions(F, base):
    """Pairs (k, xi) describing the embeddings of F over base.

    k is the Frobenius exponent and xi = (j, sign) stands for the root of unity
    eta^j * sign, eta a primitive t-th root; pi maps to xi * pi.
    """
    L, e_rel, t, w = _closure(F, base)
    signs = (1, -1) if w == 2 else (1,)
    out = []
    for k in range(0, L.f, base.f):
        for j in range(t):
            for sgn in signs:
                out.append((k, j, sgn))
    return L, t, out


def apply_action(a, L, t, action):
    k, j, sgn = action
    x = embed(a, L)
    R = L.residue
    eta = R.root_of_unity(t) if t > 1 else 1
    digits = []
    for i, c in x.digits:
        digits.append((i, R.mul(R.frobenius(c, k), R.pow(eta, j * i))))
    y = PadicElement(L, tuple(digits), x.precision)
    if sgn == -1:
        even = PadicElement(L, tuple(d for d in y.digits if d[0] % 2 == 0), y.precision)
        odd = PadicElement(L, tuple(d for d in y.digits if d[0] % 2 == 1), y.precision)
        y = sub(even, odd)
    return y


def conjugates(a, base):
    """Distinct Galois conjugates of a over base, a itself first."""
    L, t, actions = galois_actions(a.field, base)
    seen = []
    keys = set()
    for act in actions:
        y = apply_action(a, L, t, act)
        y = minimal_form(y) if y.precision is None else y
        k = _orbit_key(y, L)
        if k not in keys:
            keys.add(k)
            seen.append(y)
    return seen


def _orbit_key(y, L):
    z = embed(y, L) if y.field != L else y
    return (z.digits, z.precision)


def e_part(a, base):
    """The base-part of a: its expansion cut at the first digit outside base."""
    C = compositum(a.field, base)
    if C.e != base.e:
        raise FieldMismatch("%s does not lie in an unramified extension of %s" % (a.field, base))
    x = embed(a, C)
    R, B = C.residue, base.residue
    kept = []
    for i, c in x.digits:
        if not R.in_subfield(c, base.f):
            return PadicElement(base, tuple(kept))
        kept.append((i, R.restrict(c, B)))
    return PadicElement(base, tuple(kept), x.precision)


def distance_to_field(a, target, unramified=False):
    """sup of v_p(a - x) over x in target (or its maximal unramified extension).

    For an inexact input without a visible obstruction the precision bound is
    returned, which is then only a lower bound.
    """
    C = compositum(a.field, target)
    x = embed(a, C)
    r = C.e // target.e
    R = C.residue
    for i, c in x.digits:
        if i % r or (not unramified and not R.in_subfield(c, target.f)):
            return Fraction(i, C.e)
    if x.precision is None:
        return INF
    return Fraction(x.precision, C.e)
