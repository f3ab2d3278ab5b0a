"""Recurrence unrolling and closed-form bounds for the in-place algorithms.

Exact arithmetic throughout (``Fraction``); irrational exponents go through
mpmath at 50 significant digits.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Sequence

import mpmath

mpmath.mp.dps = 50

Number = Fraction | int


def _mpf(x) -> mpmath.mpf:
    if isinstance(x, Fraction):
        return mpmath.mpf(x.numerator) / x.denominator
    return mpmath.mpf(x)


@dataclass(frozen=True)
class Recurrence:
    """T(n) <= per_level_cost(n) + T(floor(alpha*n + beta)), T(n) = terminal(n) below ``stop``."""

    alpha: Fraction
    beta: Fraction
    per_level_cost: Callable[[int], Number]
    terminal: Callable[[int], Number] = lambda n: 0
    stop: int = 1

    def __post_init__(self):
        object.__setattr__(self, "alpha", Fraction(self.alpha))
        object.__setattr__(self, "beta", Fraction(self.beta))
        if not 0 < self.alpha < 1:
            raise ValueError(f"alpha must lie in (0, 1), got {self.alpha}")

    def step(self, n: int) -> int:
        return math.floor(self.alpha * n + self.beta)


@dataclass
class Unrolled:
    total: Fraction
    levels: list[tuple[int, Fraction]]
    final_size: int
    terminal_cost: Fraction


def unroll(rec: Recurrence, n: int) -> Unrolled:
    """Iterate n_{i+1} = floor(alpha n_i + beta) while n_i >= stop, summing the level costs."""
    if n < 1:
        raise ValueError("n must be positive")
    levels = []
    total = Fraction(0)
    while n >= rec.stop:
        cost = Fraction(rec.per_level_cost(n))
        levels.append((n, cost))
        total += cost
        nxt = rec.step(n)
        if nxt >= n:
            raise ValueError(f"recurrence does not shrink at n={n} (next {nxt})")
        n = nxt
    tail = Fraction(rec.terminal(n))
    return Unrolled(total + tail, levels, n, tail)


def closed_form_size(alpha: Number, beta: Number, n: Number, i: int) -> Fraction:
    """n_i = alpha^i n + beta (1 - alpha^(i+1)) / (1 - alpha), an upper envelope of the floored sizes."""
    alpha, beta = Fraction(alpha), Fraction(beta)
    return alpha ** i * n + beta * (1 - alpha ** (i + 1)) / (1 - alpha)


# -- shrink rules of the three in-place loops --------------------------------------
#
# n - floor((n+1)/(c+3)) = floor(((c+2) n + c+1) / (c+3))
# n - floor(n/(c+2))     = floor(((c+1) n + c+1) / (c+2))

def inplace_recurrence(kind: str, c: int, per_level_cost: Callable[[int], Number],
                       terminal: Callable[[int], Number] = lambda n: 0) -> Recurrence:
    c = int(c)
    if kind in ("ifp_hi", "ifp_lo", "ifp_high_addend"):
        a = Fraction(c + 2, c + 3)
        b = Fraction(c + 1, c + 3)
    elif kind in ("isp_lo", "isp_hi", "imp"):
        a = b = Fraction(c + 1, c + 2)
    else:
        raise ValueError(f"unknown in-place algorithm {kind!r}")
    return Recurrence(a, b, per_level_cost, terminal, stop=c + 2)


def unroll_trace(kind: str, c: int, trace: Sequence[tuple[int, int]]) -> Unrolled:
    """Replay a measured level trace through the recurrence machinery.

    Level costs are looked up by size; the last trace entry is the base case.
    Raises if the recurrence visits a size the trace does not contain.
    """
    *levels, (last_size, last_cost) = trace
    costs = dict(levels)

    def level(n: int) -> int:
        if n not in costs:
            raise KeyError(f"recurrence visits size {n}, absent from trace")
        return costs[n]

    def terminal(n: int) -> int:
        if n != last_size:
            raise KeyError(f"recurrence ends at {n}, trace ends at {last_size}")
        return last_cost

    size = levels[0][0] if levels else last_size
    return unroll(inplace_recurrence(kind, c, level, terminal), size)


# -- analytic operation-count recurrences -------------------------------------------

def ifp_recurrence(c: int, fp_cost: Callable[[int], int], base_cost: Callable[[int], int]) -> Recurrence:
    """T(n) = (2 ceil(n/k) - 1) [M(k) + 2k - 1] + T(n - k), k = floor((n+1)/(c+3))."""
    def level(n):
        k = (n + 1) // (c + 3)
        return (2 * -(-n // k) - 1) * (fp_cost(k) + 2 * k - 1)
    return inplace_recurrence("ifp_hi", c, level, base_cost)


def isp_recurrence(c: int, lo_cost: Callable[[int], int], hi_cost: Callable[[int], int],
                   base_cost: Callable[[int], int]) -> Recurrence:
    """T(n) = q M(k) + (q-1) M_hi(k) + 2(q-1)k + T(n - k), k = floor(n/(c+2)), q = ceil(n/k)."""
    def level(n):
        k = n // (c + 2)
        q = -(-n // k)
        return q * lo_cost(k) + (q - 1) * hi_cost(k) + 2 * (q - 1) * k
    return inplace_recurrence("isp_lo", c, level, base_cost)


def imp_recurrence(c: int, n: int, mp_cost: Callable[[int], int],
                   base_cost: Callable[[int], int]) -> Recurrence:
    """T(m) = ceil(n/k) M(k) + (ceil(n/k) - 1) k + T(m - k), k = floor(m/(c+2)); n fixed."""
    def level(m):
        k = m // (c + 2)
        q = -(-n // k)
        return q * mp_cost(k) + (q - 1) * k
    return inplace_recurrence("imp", c, level, base_cost)


# -- closed-form predictors ---------------------------------------------------------

def predict_fp_ratio(c: Number) -> Fraction:
    """Asymptotic ops ratio of the in-place half-additive full product over its base."""
    if c < 0:
        raise ValueError("c must be non-negative")
    return 2 * Fraction(c) + 7


def predict_sp_ratio(c: Number) -> Fraction:
    if c < 0:
        raise ValueError("c must be non-negative")
    return 2 * Fraction(c) + 5


@dataclass
class MPBound:
    """Middle-product bound.  ``mu``/``nu`` are the unit-lambda constants."""

    regime: str
    value: object
    mu: object = None
    nu: object = None
    coefficient: object = None  # (mu + nu) * lambda, the n^gamma coefficient
    log_base: Fraction | None = None
    notes: list[str] = field(default_factory=list)


def mp_constants(c: Number, gamma) -> tuple[object, object]:
    """mu = 1/((c+2)^(g-1) - (c+1)^(g-1)), nu = 1/((c+2)^g - (c+1)^g)."""
    c = Fraction(c)
    if isinstance(gamma, (int, Fraction)) and Fraction(gamma).denominator == 1:
        g = int(gamma)
        return (1 / ((c + 2) ** (g - 1) - (c + 1) ** (g - 1)),
                1 / ((c + 2) ** g - (c + 1) ** g))
    g, cc = _mpf(gamma), _mpf(c)
    return (1 / ((cc + 2) ** (g - 1) - (cc + 1) ** (g - 1)),
            1 / ((cc + 2) ** g - (cc + 1) ** g))


def predict_mp_bound(c: Number, n: int, M: Callable[[int], Number] | None = None,
                     gamma=None, quasi_linear: bool = False, lam: Number = 1) -> MPBound:
    """Bound on the in-place middle product cost at m = n.

    gamma > 1: (mu + nu) * lam * n^gamma.
    quasi-linear: M(n) log_{(c+2)/(c+1)}(n) + (1/(c+2) + (c+1)) / (1 - alpha) * M(n)
    with alpha = (c+1)/(c+2).
    """
    c = Fraction(c)
    if quasi_linear:
        if M is None:
            raise ValueError("quasi-linear prediction needs a cost model M")
        alpha = (c + 1) / (c + 2)
        base = 1 / alpha
        mn = mpmath.mpf(M(n))
        lead = mn * mpmath.log(n) / mpmath.log(_mpf(base))
        # Constants read off the middle-product recurrence:
        # lambda = 1/(c+2), mu = c+2.
        lower = (Fraction(1) / (c + 2) + (c + 2) * alpha) / (1 - alpha)
        return MPBound("quasi-linear", lead + mn * _mpf(lower),
                       coefficient=lower, log_base=base,
                       notes=[f"log base (c+2)/(c+1) = {base}; the base (c+1)/(c+2) = {alpha} seen in "
                              f"some statements of this bound would make the logarithm negative"])
    if gamma is None or gamma <= 1:
        raise ValueError("gamma must exceed 1 unless quasi_linear is set")
    mu, nu = mp_constants(c, gamma)
    coeff = (mu + nu) * lam
    if isinstance(coeff, Fraction) and Fraction(gamma).denominator == 1:
        value = coeff * Fraction(n) ** int(gamma)
    else:
        value = _mpf(coeff) * _mpf(n) ** _mpf(gamma)
    return MPBound("polynomial", value, mu=mu, nu=nu, coefficient=coeff)


# -- numeric checks of the summation lemmas -----------------------------------------

@dataclass
class LemmaCheck:
    name: str
    lhs: object
    rhs: object
    relation: str
    passed: bool


def check_sum_lemmas(alpha: Number, beta: Number, n: Number, K: int,
                     M: Callable[[float], float] | None = None,
                     lam: Number = Fraction(1, 2), mu: Number = 0) -> list[LemmaCheck]:
    """Verify the three summation lemmas on the sizes n_0 .. n_{K-1}.

    * sum n_i <= (n + beta K) / (1 - alpha)
    * sum 1/(n_i - beta/(1-alpha)) == alpha (alpha^-K - 1) / ((1-alpha) n - alpha beta)
    * sum M(lam n_i + mu) <= M(n)/n * (lam (n + beta K)/(1-alpha) + mu K)
      for M(x)/x non-decreasing (default M(x) = x log2 x).
    """
    alpha, beta, n = Fraction(alpha), Fraction(beta), Fraction(n)
    lam, mu = Fraction(lam), Fraction(mu)
    sizes = [closed_form_size(alpha, beta, n, i) for i in range(K)]
    out = []

    lhs = sum(sizes, Fraction(0))
    rhs = (n + beta * K) / (1 - alpha)
    out.append(LemmaCheck("sum n_i", lhs, rhs, "<=", lhs <= rhs))

    shift = beta / (1 - alpha)
    lhs = sum((1 / (x - shift) for x in sizes), Fraction(0))
    rhs = alpha * (alpha ** -K - 1) / ((1 - alpha) * n - alpha * beta)
    out.append(LemmaCheck("sum 1/(n_i - beta/(1-alpha))", lhs, rhs, "==", lhs == rhs))

    if M is None:
        def M(x):
            x = _mpf(x)
            return x * mpmath.log(x, 2) if x > 1 else mpmath.mpf(0)
    args = [lam * x + mu for x in sizes]
    if any(a > n for a in args):
        out.append(LemmaCheck("sum M(lam n_i + mu)", None, None, "<=", False))
        return out
    lhs = mpmath.fsum(M(a) for a in args)
    rhs = M(n) / _mpf(n) * _mpf(lam * (n + beta * K) / (1 - alpha) + mu * K)
    out.append(LemmaCheck("sum M(lam n_i + mu)", lhs, rhs, "<=", bool(lhs <= rhs)))
    return out
