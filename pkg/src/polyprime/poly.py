"""Integer polynomials and the residue-counting primitives built on them.

A polynomial is stored as its coefficient tuple (a_0, ..., a_d), low
degree first, with a_d = 0 allowed so that "degree at most d" families
keep a fixed coefficient length.  Evaluation is exact arbitrary-precision
arithmetic throughout.
"""

import math
import random
from dataclasses import dataclass
from itertools import product

import numpy as np

from .errors import BudgetError, ConfigError
from .rng import uniform_int

# Above this many coefficient vectors the unit-tuple count switches from
# direct enumeration to inclusion-exclusion over form subsets.
DIRECT_ENUM_CAP = 10 ** 8


@dataclass(frozen=True)
class IntPolynomial:
    coeffs: tuple

    def __post_init__(self):
        if not self.coeffs:
            raise ValueError("need at least one coefficient")

    @property
    def degree(self) -> int:
        """Declared degree: one less than the coefficient count."""
        return len(self.coeffs) - 1

    def eval(self, n: int) -> int:
        v = 0
        for c in reversed(self.coeffs):
            v = v * n + c
        return v

    def eval_many(self, ns) -> list:
        return [self.eval(int(n)) for n in ns]

    def reduce_mod(self, M: int) -> "IntPolynomial":
        """Coefficientwise canonical representatives in [0, M)."""
        if M < 1:
            raise ValueError("modulus must be >= 1")
        return IntPolynomial(tuple(c % M for c in self.coeffs))

    def shift(self, c: int) -> "IntPolynomial":
        """The expanded composition f(x + c)."""
        d = self.degree
        out = [0] * (d + 1)
        for i, a in enumerate(self.coeffs):
            for j in range(i + 1):
                out[j] += a * math.comb(i, j) * c ** (i - j)
        return IntPolynomial(tuple(out))

    def is_zero(self) -> bool:
        return all(c == 0 for c in self.coeffs)

    def to_text(self) -> str:
        return ";".join(str(c) for c in self.coeffs)


def poly_from_text(text: str) -> IntPolynomial:
    """Parse the "a0;a1;..." coefficient format."""
    parts = [s.strip() for s in text.split(";")]
    try:
        coeffs = tuple(int(s) for s in parts)
    except ValueError:
        raise ConfigError(f"bad polynomial text {text!r}: "
                          "expected semicolon-separated integers")
    return IntPolynomial(coeffs)


def sample_uniform(d: int, H: int, rng: random.Random) -> IntPolynomial:
    """Uniform draw from degree <= d polynomials with |a_i| <= H."""
    if d < 0:
        raise ConfigError("degree must be >= 0")
    if H < 0:
        raise ConfigError("coefficient bound must be >= 0")
    return IntPolynomial(tuple(uniform_int(rng, -H, H)
                               for _ in range(d + 1)))


def sample_uniform_residue(d: int, H: int, rng: random.Random,
                           f0: IntPolynomial, M: int,
                           max_attempts: int = 1_000_000):
    """Uniform draw conditioned on f congruent to f0 mod M.

    Plain rejection keeps the conditional distribution exactly uniform.
    Returns (polynomial, attempts).
    """
    if M < 1:
        raise ConfigError("modulus must be >= 1")
    if 2 * H + 1 < M:
        raise ConfigError("coefficient range narrower than the modulus; "
                          "the residue class may be empty")
    want = [c % M for c in f0.coeffs] + [0] * (d + 1 - len(f0.coeffs))
    if len(want) != d + 1:
        raise ConfigError("residue polynomial has higher degree than d")
    for attempt in range(1, max_attempts + 1):
        f = sample_uniform(d, H, rng)
        if all(c % M == r for c, r in zip(f.coeffs, want)):
            return f, attempt
    raise BudgetError(f"no draw matched the residue class mod {M} "
                      f"in {max_attempts} attempts")


def is_zero_poly_mod_p(f: IntPolynomial, p: int) -> bool:
    """True when f vanishes at every residue mod p.

    For p > deg f that is the same as p dividing every coefficient; for
    small p the reduced polynomial is evaluated on all of F_p.
    """
    if p > f.degree:
        return all(c % p == 0 for c in f.coeffs)
    g = f.reduce_mod(p)
    return all(g.eval(x) % p == 0 for x in range(p))


def count_unit_values_mod_p(f: IntPolynomial, p: int, shifts) -> int:
    """#{x in F_p : f(x + l) is a unit mod p for every shift l}."""
    if not shifts:
        raise ValueError("need at least one shift")
    g = f.reduce_mod(p)
    unit = [g.eval(y) % p != 0 for y in range(p)]
    offs = [l % p for l in shifts]
    return sum(1 for x in range(p)
               if all(unit[(x + l) % p] for l in offs))


def _rank_mod_p(rows, p: int) -> int:
    """Rank of an integer matrix over F_p by Gaussian elimination."""
    mat = [[v % p for v in row] for row in rows]
    rank = 0
    ncols = len(mat[0]) if mat else 0
    for col in range(ncols):
        piv = next((r for r in range(rank, len(mat)) if mat[r][col]), None)
        if piv is None:
            continue
        mat[rank], mat[piv] = mat[piv], mat[rank]
        inv = pow(mat[rank][col], -1, p)
        mat[rank] = [(v * inv) % p for v in mat[rank]]
        for r in range(len(mat)):
            if r != rank and mat[r][col]:
                c = mat[r][col]
                mat[r] = [(a - c * b) % p
                          for a, b in zip(mat[r], mat[rank])]
        rank += 1
    return rank


def _count_unit_tuples_direct(rows, d: int, p: int) -> int:
    """Exhaustive count, vectorized over chunks of coefficient vectors."""
    t = len(rows)
    total = p ** (d + 1)
    weights = np.array([[row[j] for j in range(d + 1)] for row in rows],
                       dtype=np.int64)
    count = 0
    chunk = 1 << 20
    for start in range(0, total, chunk):
        idx = np.arange(start, min(start + chunk, total), dtype=np.int64)
        ok = np.ones(idx.shape, dtype=bool)
        vals = np.zeros((t, idx.shape[0]), dtype=np.int64)
        rem = idx
        for j in range(d + 1):
            digit = rem % p
            rem = rem // p
            vals += weights[:, j:j + 1] * digit[np.newaxis, :]
        for i in range(t):
            ok &= (vals[i] % p) != 0
        count += int(ok.sum())
    return count


def _count_unit_tuples_ie(rows, d: int, p: int) -> int:
    """Inclusion-exclusion over subsets of the linear forms."""
    t = len(rows)
    count = 0
    for mask in range(1 << t):
        sub = [rows[i] for i in range(t) if mask >> i & 1]
        rank = _rank_mod_p(sub, p) if sub else 0
        term = p ** (d + 1 - rank)
        count += -term if bin(mask).count("1") % 2 else term
    return count


def count_unit_tuples_linear_system(ns, d: int, p: int,
                                    direct_cap: int = DIRECT_ENUM_CAP) -> int:
    """#{a in F_p^{d+1} : a_0 + a_1 n_i + ... + a_d n_i^d unit, all i}.

    Counts coefficient vectors whose induced values at every point of ns
    are nonzero mod p.  Small spaces are enumerated directly; larger ones
    go through inclusion-exclusion (each subsystem forced to zero is a
    linear system whose solution count is p to the power of its corank).
    """
    ns = list(ns)
    if len(set(ns)) != len(ns):
        raise ValueError("evaluation points must be distinct")
    if not ns:
        raise ValueError("need at least one evaluation point")
    if d < 0:
        raise ValueError("d must be >= 0")
    rows = [[pow(n % p, j, p) for j in range(d + 1)] for n in ns]
    if p ** (d + 1) <= direct_cap:
        return _count_unit_tuples_direct(rows, d, p)
    if len(ns) > 24:
        raise BudgetError("too many forms for inclusion-exclusion")
    return _count_unit_tuples_ie(rows, d, p)
