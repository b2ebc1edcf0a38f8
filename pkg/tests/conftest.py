import random
from fractions import Fraction

from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

from padic_loci import padic as pa

settings.register_profile("default", deadline=None, max_examples=60,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")

PRIMES = (2, 3, 5)


def teich_int(a, p, N):
    """Teichmuller lift of the integer residue a, modulo p^N (plain ints)."""
    mod = p ** N
    x = a % mod
    for _ in range(N):
        x = pow(x, p, mod)
    return x


def to_int(x, N):
    """An element of Q_p (f = e = 1) as an integer mod p^N."""
    p = x.field.p
    assert x.field.f == 1 and x.field.e == 1
    total = 0
    for i, c in x.digits:
        if i < N:
            total += teich_int(c, p, N) * p ** i
    return total % p ** N


def family_fields(p):
    return [pa.FieldDescriptor(p), pa.FieldDescriptor(p, 2), pa.FieldDescriptor(p, 1, 2),
            pa.FieldDescriptor(p, 1, 3), pa.FieldDescriptor(p, 2, 2)]


@st.composite
def fields(draw, primes=PRIMES):
    p = draw(st.sampled_from(primes))
    return draw(st.sampled_from(family_fields(p)))


@st.composite
def exact_elements(draw, field=None, max_index=8, min_index=0):
    if field is None:
        field = fields()
    F = field if isinstance(field, pa.FieldDescriptor) else draw(field)
    idx = draw(st.sets(st.integers(min_index, max_index * F.e), max_size=5))
    digits = [(i, draw(st.integers(1, F.q - 1))) for i in sorted(idx)]
    return pa.element(F, digits)


@st.composite
def cuts(draw, lo=0, hi=4, max_den=4):
    d = draw(st.integers(1, max_den))
    n = draw(st.integers(lo * d, hi * d))
    return Fraction(n, d)


def rng(seed):
    return random.Random(seed)


def pytest_terminal_summary(terminalreporter):
    import sys
    mod = sys.modules.get("test_acceptance")
    if mod is None:
        return
    ran = {rep.nodeid.rsplit("::", 1)[-1] for key in ("passed", "failed")
           for rep in terminalreporter.stats.get(key, []) if "test_acceptance" in rep.nodeid}
    if not ran:
        return
    terminalreporter.section("acceptance criteria")
    for name in sorted(ran):
        n = int(name.split("_")[1])
        terminalreporter.write_line(mod.RESULTS.get(n, "criterion %d FAIL  (raised before finishing)" % n))
