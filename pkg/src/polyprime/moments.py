"""Exact moment combinatorics.

Everything here is integer or rational arithmetic: Stirling numbers,
Gaussian moments, Poisson moment polynomials in the rate parameter
lambda, the even-composition sum that produces Gaussian moments in the
large-X limit, and the sign-pattern variance.
"""

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from .errors import BudgetError, ConsistencyError

MULTISET_ENUM_CAP = 10 ** 7


@lru_cache(maxsize=None)
def stirling2(k: int, r: int) -> int:
    """Partitions of a k-set into exactly r nonempty parts; S(0,0)=1."""
    if k < 0 or r < 0:
        raise ValueError("arguments must be nonnegative")
    if k == 0:
        return 1 if r == 0 else 0
    if r == 0 or r > k:
        return 0
    return r * stirling2(k - 1, r) + stirling2(k - 1, r - 1)


def gaussian_moment(k: int) -> int:
    """k-th moment of a standard Gaussian: 0 for odd k, (k-1)!! for even."""
    if k < 0:
        raise ValueError("k must be nonnegative")
    if k % 2:
        return 0
    out = 1
    for j in range(k - 1, 1, -2):
        out *= j
    return out


@dataclass(frozen=True)
class MomentPolynomial:
    """Polynomial in lambda; coeffs[r] is the integer coefficient of lambda**r."""

    coeffs: tuple

    def __post_init__(self):
        if len(self.coeffs) > 1 and self.coeffs[-1] == 0:
            raise ValueError("trailing zero coefficient; normalize first")

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def coeff(self, r: int) -> int:
        return self.coeffs[r] if 0 <= r < len(self.coeffs) else 0

    def eval(self, lam):
        v = 0
        for c in reversed(self.coeffs):
            v = v * lam + c
        return v

    def __add__(self, other):
        n = max(len(self.coeffs), len(other.coeffs))
        out = [self.coeff(r) + other.coeff(r) for r in range(n)]
        return _poly(out)

    def __mul__(self, other):
        out = [0] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a == 0:
                continue
            for j, b in enumerate(other.coeffs):
                out[i + j] += a * b
        return _poly(out)

    def scale(self, c: int) -> "MomentPolynomial":
        return _poly([c * a for a in self.coeffs])

    def shift_up(self, e: int) -> "MomentPolynomial":
        """Multiply by lambda**e."""
        if all(a == 0 for a in self.coeffs):
            return _poly([0])
        return _poly([0] * e + list(self.coeffs))


def _poly(coeffs) -> MomentPolynomial:
    out = list(coeffs)
    while len(out) > 1 and out[-1] == 0:
        out.pop()
    return MomentPolynomial(tuple(out))


ZERO = _poly([0])
ONE = _poly([1])


@lru_cache(maxsize=None)
def poisson_raw_moment(ell: int) -> MomentPolynomial:
    """Raw moment of Poisson(lambda): sum of S(ell, r) lambda**r."""
    if ell < 0:
        raise ValueError("ell must be nonnegative")
    return _poly([stirling2(ell, r) for r in range(ell + 1)])


@lru_cache(maxsize=None)
def poisson_central_moment(k: int) -> MomentPolynomial:
    """Central moment of Poisson(lambda), computed two ways.

    The binomial expansion of E(N - lambda)^k and the recurrence that
    multiplies lower central moments into lambda must agree coefficient
    by coefficient; a mismatch means a bug, not bad data.
    """
    if k < 0:
        raise ValueError("k must be nonnegative")
    by_def = ZERO
    for ell in range(k + 1):
        term = poisson_raw_moment(ell).scale(
            math.comb(k, ell) * (-1) ** (k - ell)).shift_up(k - ell)
        by_def = by_def + term
    if k == 0:
        by_rec = ONE
    elif k == 1:
        by_rec = ZERO
    else:
        by_rec = ZERO
        for t in range(k - 1):
            by_rec = by_rec + poisson_central_moment(t).scale(
                math.comb(k - 1, t))
        by_rec = by_rec.shift_up(1)
    if by_def != by_rec:
        raise ConsistencyError(
            f"central moment k={k}: definition {by_def.coeffs} vs "
            f"recurrence {by_rec.coeffs}")
    return by_def


def stein_chen_check(ell: int) -> bool:
    """Raw-moment recurrence m_{ell+1} = lambda * sum C(ell,s) m_s, exactly."""
    lhs = poisson_raw_moment(ell + 1)
    rhs = ZERO
    for s in range(ell + 1):
        rhs = rhs + poisson_raw_moment(s).scale(math.comb(ell, s))
    rhs = rhs.shift_up(1)
    return lhs == rhs


def _even_compositions(k: int, u: int):
    """Ordered u-tuples of even parts >= 2 summing to k."""
    if u == 0:
        if k == 0:
            yield ()
        return
    for first in range(2, k - 2 * (u - 1) + 1, 2):
        for rest in _even_compositions(k - first, u - 1):
            yield (first,) + rest


def gaussian_coefficient_sum(k: int, X: int) -> Fraction:
    """Normalized count of even-exponent monomial patterns on X sites.

    Sums, over the number u of distinct sites and ordered compositions of
    k into u even parts, the multinomial k!/(l_1!...l_u!) times binom(X,u),
    then divides by X^(k/2).  Tends to the Gaussian moment as X grows for
    even k; identically zero for odd k.
    """
    if k < 1 or X < 1:
        raise ValueError("k and X must be positive")
    if k % 2:
        return Fraction(0)
    total = 0
    kfact = math.factorial(k)
    for u in range(1, k // 2 + 1):
        for comp in _even_compositions(k, u):
            m = kfact
            for part in comp:
                m //= math.factorial(part)
            total += m * math.comb(X, u)
    return Fraction(total, X ** (k // 2))


def sigma_squared(pattern) -> Fraction:
    """Variance of the normalized sign-pattern count.

    Sums the sign product over ordered pairs of nonempty subsets of
    {1..s} that are translates of each other (the identity translate
    included), scaled by 4**(-s).
    """
    eps = tuple(pattern)
    s = len(eps)
    if s < 1:
        raise ValueError("pattern must be nonempty")
    if any(e not in (-1, 1) for e in eps):
        raise ValueError("pattern entries must be +1 or -1")
    total = 0
    for mask in range(1, 1 << s):
        t1 = [i for i in range(s) if mask >> i & 1]
        p1 = 1
        for i in t1:
            p1 *= eps[i]
        for c in range(-(s - 1), s):
            t2 = [i + c for i in t1]
            if t2[0] < 0 or t2[-1] >= s:
                continue
            p2 = 1
            for i in t2:
                p2 *= eps[i]
            total += p1 * p2
    return Fraction(total, 4 ** s)


def _multiset_is_even(tuples_ns, Ts) -> bool:
    mult = {}
    for n, T in zip(tuples_ns, Ts):
        for i in T:
            key = n + i
            mult[key] = mult.get(key, 0) + 1
    return all(v % 2 == 0 for v in mult.values())


def multiset_even_tuple_count(Ts, X: int,
                              cap: int = MULTISET_ENUM_CAP) -> int:
    """#{(n_1..n_k) in [1,X]^k : the shifted multiset is all-even}.

    Each T_j is a nonempty set of distinct shifts; the multiset collects
    n_j + i over all j and i in T_j.  k = 1 is always 0 (every element
    appears exactly once).  Tuples are enumerated exhaustively while
    X**k fits under the cap; beyond it only k = 2 has a closed form
    (nonzero only when T_2 is a translate of T_1, one n_2 per n_1).
    """
    from itertools import product as _product

    Ts = [tuple(sorted(set(T))) for T in Ts]
    if any(not T for T in Ts):
        raise ValueError("every shift set must be nonempty")
    k = len(Ts)
    if k == 0:
        raise ValueError("need at least one shift set")
    if k == 1:
        return 0
    if X ** k <= cap:
        return sum(1 for idx in _product(range(1, X + 1), repeat=k)
                   if _multiset_is_even(idx, Ts))
    if k == 2:
        T1, T2 = Ts
        if len(T1) != len(T2):
            return 0
        c0 = T2[0] - T1[0]
        if tuple(i + c0 for i in T1) != T2:
            return 0
        # n_1 + T1 = n_2 + T2 forces n_1 - n_2 = c0
        return max(0, X - abs(c0))
    raise BudgetError(f"X^k = {X ** k} exceeds enumeration cap {cap} "
                      "and no closed form applies for k > 2")
