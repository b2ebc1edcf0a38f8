"""Membership oracles: deterministic point indicators of an unknown set."""

from fractions import Fraction

from . import subsets as ss


class MembershipOracle:
    """Base class. epsilon, when set, is a valuation v such that membership is
    constant on every open disk {v_p(x - a) > v}."""

    epsilon = None

    def query(self, x):
        raise NotImplementedError

    def __call__(self, x):
        return self.query(x)

    def close(self):
        pass


class SyntheticOracle(MembershipOracle):
    """Answers membership in a known standard subset."""

    def __init__(self, subset, epsilon=None):
        self.subset = subset
        if epsilon is None:
            # membership is constant on open disks below the finest cut; 1
            # stands in when that cut is 0 or the set is empty
            epsilon = ss.finest_cut(subset)
            if not epsilon or epsilon <= 0:
                epsilon = Fraction(1)
        self.epsilon = Fraction(epsilon)
        self.count = 0

    def query(self, x):
        self.count += 1
        return ss.member(self.subset, x)


class FunctionOracle(MembershipOracle):
    def __init__(self, fn, epsilon=None):
        self.fn = fn
        self.epsilon = None if epsilon is None else Fraction(epsilon)

    def query(self, x):
        return bool(self.fn(x))


def synthetic_oracle(subset, epsilon=None):
    return SyntheticOracle(subset, epsilon)
