"""Finite fields F_{p^f} with compatible generators.

Elements are encoded as integers in [0, q): the base-p digits of the code are
the coefficients of the element as a polynomial in the generator X. Every
field F_{p^f} is built from a primitive polynomial whose roots are compatible
with the smaller fields F_{p^d}, d | f, so that the inclusion F_{p^d} -> F_{p^f}
sends the generator of F_{p^d} to the N-th power of the generator of F_{p^f},
N = (p^f - 1) / (p^d - 1).  Embeddings therefore compose.
"""

from functools import lru_cache
from math import gcd

MAX_ORDER = 1 << 17


class ResidueFieldError(ValueError):
    pass


def is_prime(n):
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    d = 3
    while d * d <= n:
        if n % d == 0:
            return False
        d += 2
    return True


def prime_factors(n):
    out = []
    d = 2
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            while n % d == 0:
                n //= d
        d += 1
    if n > 1:
        out.append(n)
    return out


def divisors(n):
    return [d for d in range(1, n + 1) if n % d == 0]


def multiplicative_order(a, n):
    """Order of a modulo n (gcd(a, n) must be 1)."""
    if n == 1:
        return 1
    k, x = 1, a % n
    while x != 1:
        x = x * a % n
        k += 1
    return k


# polynomials over F_p as lists of coefficients, lowest degree first

def _trim(a):
    while a and a[-1] == 0:
        a.pop()
    return a


def _mulmod(a, b, h, p):
    n = len(h) - 1
    prod = [0] * (len(a) + len(b) - 1) if a and b else []
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                prod[i + j] = (prod[i + j] + x * y) % p
    for k in range(len(prod) - 1, n - 1, -1):
        c = prod[k]
        if c:
            for j in range(n + 1):
                prod[k - n + j] = (prod[k - n + j] - c * h[j]) % p
    prod = prod[:n]
    return _trim(prod)


def _powmod(a, k, h, p):
    result = [1]
    base = list(a)
    while k:
        if k & 1:
            result = _mulmod(result, base, h, p)
        base = _mulmod(base, base, h, p)
        k >>= 1
    return result


def _is_primitive(h, p):
    f = len(h) - 1
    order = p ** f - 1
    x = [0, 1] if f > 1 else [(-h[0]) % p]
    if _powmod(x, order, h, p) != [1]:
        return False
    return all(_powmod(x, order // r, h, p) != [1] for r in prime_factors(order))


def _first_primitive(p, f):
    for code in range(1, p ** f):
        coeffs = [(code // p ** i) % p for i in range(f)]
        if coeffs[0] == 0:
            continue
        h = coeffs + [1]
        if _is_primitive(h, p):
            return h
    raise ResidueFieldError("no primitive polynomial of degree %d over F_%d" % (f, p))


def _primitive_root(p):
    if p == 2:
        return 1
    factors = prime_factors(p - 1)
    for g in range(2, p):
        if all(pow(g, (p - 1) // r, p) != 1 for r in factors):
            return g
    raise ResidueFieldError("no primitive root mod %d" % p)


def _poly_over_ext(roots, h, p):
    """Coefficients of prod (Y - r) for r in roots, computed over F_p[X]/(h)."""
    poly = [[1]]
    for r in roots:
        neg = [(-c) % p for c in r]
        nxt = [[] for _ in range(len(poly) + 1)]
        for i, c in enumerate(poly):
            nxt[i + 1] = _add(nxt[i + 1], c, p)
            nxt[i] = _add(nxt[i], _mulmod(c, neg, h, p), p)
        poly = nxt
    out = []
    for c in poly:
        if len(c) > 1:
            raise ResidueFieldError("minimal polynomial is not defined over F_p")
        out.append(c[0] if c else 0)
    return out


def _add(a, b, p):
    n = max(len(a), len(b))
    out = [((a[i] if i < len(a) else 0) + (b[i] if i < len(b) else 0)) % p for i in range(n)]
    return _trim(out)


def _conjugates(x, h, p):
    out = [x]
    y = _powmod(x, p, h, p)
    while y != x:
        out.append(y)
        y = _powmod(y, p, h, p)
    return out


def _crt(r1, m1, r2, m2):
    g = gcd(m1, m2)
    if (r1 - r2) % g:
        return None
    l = m1 // g * m2
    t = ((r2 - r1) // g * pow(m1 // g, -1, m2 // g)) % (m2 // g) if m2 // g > 1 else 0
    return (r1 + m1 * t) % l, l


@lru_cache(maxsize=None)
def compatible_modulus(p, f):
    """Monic primitive polynomial of degree f, compatible with all proper subfields."""
    if f == 1:
        return ((-_primitive_root(p)) % p, 1)
    if p ** f > MAX_ORDER:
        raise ResidueFieldError("unsupported field: F_%d^%d is too large" % (p, f))
    h = _first_primitive(p, f)
    order = p ** f - 1
    beta = [0, 1]
    constraints = []
    for r in prime_factors(f):
        d = f // r
        small = residue_field(p, d)
        qd1 = p ** d - 1
        b = _powmod(beta, order // qd1, h, p)
        mb = _poly_over_ext(_conjugates(b, h, p), h, p)
        i = next(i for i in range(1, qd1 + 1)
                 if gcd(i, qd1) == 1 and small.eval_poly(mb, small.exp[i % qd1]) == 0)
        j = pow(i, -1, qd1) if qd1 > 1 else 0
        constraints.append((qd1, sorted({j * p ** s % qd1 for s in range(d)})))
    combos = [(0, 1)]
    for mod, residues in constraints:
        nxt = []
        for r0, m0 in combos:
            for r in residues:
                got = _crt(r0, m0, r, mod)
                if got is not None:
                    nxt.append(got)
        combos = nxt
    best = None
    for r0, m0 in combos:
        k = r0 if r0 else m0
        while k < order and gcd(k, order) != 1:
            k += m0
        if k < order and (best is None or k < best):
            best = k
    if best is None:
        raise ResidueFieldError("no compatible generator for F_%d^%d" % (p, f))
    gamma = _powmod(beta, best, h, p)
    return tuple(_poly_over_ext(_conjugates(gamma, h, p), h, p))


class ResidueField:
    """The field F_{p^f} with log/exp tables over the compatible generator."""

    def __init__(self, p, f):
        if not is_prime(p):
            raise ResidueFieldError("%d is not prime" % p)
        if f < 1:
            raise ResidueFieldError("residue degree must be positive")
        self.p = p
        self.f = f
        self.q = p ** f
        if self.q > MAX_ORDER:
            raise ResidueFieldError("unsupported field: F_%d is too large" % self.q)
        self.modulus = compatible_modulus(p, f)
        self._build_tables()

    def _build_tables(self):
        p, f, q = self.p, self.f, self.q
        h = self.modulus
        exp = [0] * (q - 1)
        log = [-1] * q
        g = (-h[0]) % p
        x = [1] + [0] * (f - 1)
        for i in range(q - 1):
            code = 0
            for c in reversed(x):
                code = code * p + c
            exp[i] = code
            log[code] = i
            if f == 1:
                x = [x[0] * g % p]
            else:
                top = x[-1]
                x = [0] + x[:-1]
                if top:
                    x = [(x[j] - top * h[j]) % p for j in range(f)]
        self.exp = exp
        self.log = log

    def __repr__(self):
        return "ResidueField(%d, %d)" % (self.p, self.f)

    def coeffs(self, a):
        p = self.p
        return [(a // p ** i) % p for i in range(self.f)]

    def from_coeffs(self, coeffs):
        code = 0
        for c in reversed(list(coeffs)):
            code = code * self.p + c % self.p
        return code

    def from_int(self, n):
        return n % self.p

    def add(self, a, b):
        if self.p == 2:
            return a ^ b
        p = self.p
        out, scale = 0, 1
        while a or b:
            out += ((a % p + b % p) % p) * scale
            a //= p
            b //= p
            scale *= p
        return out

    def neg(self, a):
        if self.p == 2:
            return a
        p = self.p
        out, scale = 0, 1
        while a:
            out += ((-(a % p)) % p) * scale
            a //= p
            scale *= p
        return out

    def sub(self, a, b):
        return self.add(a, self.neg(b))

    def mul(self, a, b):
        if a == 0 or b == 0:
            return 0
        return self.exp[(self.log[a] + self.log[b]) % (self.q - 1)]

    def inv(self, a):
        if a == 0:
            raise ZeroDivisionError("inverse of zero in %r" % self)
        return self.exp[(-self.log[a]) % (self.q - 1)]

    def pow(self, a, n):
        if a == 0:
            if n <= 0:
                raise ZeroDivisionError("zero to a non-positive power")
            return 0
        return self.exp[(self.log[a] * n) % (self.q - 1)]

    def frobenius(self, a, k=1):
        return self.pow(a, self.p ** (k % self.f))

    def generator_power(self, i):
        return self.exp[i % (self.q - 1)]

    def root_of_unity(self, n):
        """A primitive n-th root of unity (n must divide q - 1)."""
        if (self.q - 1) % n:
            raise ResidueFieldError("F_%d has no primitive %d-th root of unity" % (self.q, n))
        return self.exp[(self.q - 1) // n]

    def element_order(self, a):
        """Multiplicative order of a nonzero element."""
        return (self.q - 1) // gcd(self.log[a], self.q - 1)

    def embed(self, a, target):
        """Image of a under the compatible inclusion into target."""
        if target.f == self.f:
            return a
        if target.f % self.f:
            raise ResidueFieldError("F_%d is not a subfield of F_%d" % (self.q, target.q))
        if a == 0:
            return 0
        n = (target.q - 1) // (self.q - 1)
        return target.exp[self.log[a] * n % (target.q - 1)]

    def restrict(self, a, target):
        """Inverse of embed: a must lie in the subfield target."""
        if a == 0:
            return 0
        n = (self.q - 1) // (target.q - 1)
        la = self.log[a]
        if la % n:
            raise ResidueFieldError("element does not lie in F_%d" % target.q)
        return target.exp[la // n]

    def in_subfield(self, a, d):
        if a == 0:
            return True
        return self.log[a] % ((self.q - 1) // (self.p ** d - 1)) == 0

    def level(self, a):
        """Smallest d dividing f with a in F_{p^d}."""
        for d in divisors(self.f):
            if self.in_subfield(a, d):
                return d
        return self.f

    def eval_poly(self, coeffs, x):
        """Evaluate a polynomial with F_p coefficients (lowest first) at x."""
        acc = 0
        for c in reversed(coeffs):
            acc = self.add(self.mul(acc, x), c % self.p)
        return acc

    def nonzero(self):
        return range(1, self.q)


@lru_cache(maxsize=None)
def residue_field(p, f):
    return ResidueField(p, f)
