"""Out-of-place base multiplications, their space profiles, and the Toeplitz oracle.

Every profile entry has the uniform signature ``entry(f, g, out, work, s)``:
``f``/``g`` are operands (InputView or array), ``out`` the output span,
``work`` a workspace span of at least ``profile.workspace(n)`` registers and
``s`` the Session.  Output conventions per kind, for operands of size n:

========  =====================  ==========================================
kind      out length             result
========  =====================  ==========================================
FP        2n-1                   f*g (overwrite)
FP+lo     2n-1, h in out[:n-1]   h + f*g
FP+hi     2n-1, h in out[n:]     X^n h + f*g
SPlo      n                      f*g mod X^n
SPhi      n-1                    f*g quo X^n
MP        n (f has size 2n-1)    ((f*g) quo X^(n-1)) mod X^n
========  =====================  ==========================================
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable

import numpy as np

from .regspace import ContractViolation, InputView, Session, as_view, operand, take
from .ring import Ring

KINDS = ("FP", "FP+lo", "FP+hi", "SPlo", "SPhi", "MP")


def _check(cond: bool, msg: str) -> None:
    if not cond:
        raise ContractViolation(msg)


# -- schoolbook kernels ---------------------------------------------------------
#
# Each kernel charges the exact schoolbook operation count.  A
# multiply-accumulate R_k <- R_k + R_i * R_j is one instruction of the model
# (one mul, one add), so no work register is needed.

def naive_fp(f, g, out: np.ndarray, s: Session) -> None:
    """out[:a+b-1] = f*g; a*b muls and (a-1)(b-1) adds."""
    fa, ga = operand(f), operand(g)
    a, b = len(fa), len(ga)
    _check(a > 0 and b > 0, "empty operand")
    _check(len(out) == a + b - 1, f"output span {len(out)} != {a + b - 1}")
    out[:a + b - 1] = s.ring.convolve(fa, ga)
    s.counter.muls += a * b
    s.counter.adds += (a - 1) * (b - 1)


def naive_fp_additive(f, g, out: np.ndarray, s: Session) -> None:
    """out[i+j] += f_i g_j; a*b muls and a*b adds, no work registers."""
    fa, ga = operand(f), operand(g)
    a, b = len(fa), len(ga)
    _check(a > 0 and b > 0, "empty operand")
    _check(len(out) == a + b - 1, f"output span {len(out)} != {a + b - 1}")
    dst = out[:a + b - 1]
    dst += s.ring.convolve(fa, ga)
    np.mod(dst, s.ring.modulus, out=dst)
    s.counter.muls += a * b
    s.counter.adds += a * b


def naive_sp_lo(f, g, out: np.ndarray, s: Session) -> None:
    fa, ga = operand(f), operand(g)
    n = len(fa)
    _check(len(ga) == n and len(out) == n, "SPlo size mismatch")
    if n == 0:
        return
    out[:] = s.ring.convolve(fa, ga)[:n]
    s.counter.muls += n * (n + 1) // 2
    s.counter.adds += n * (n - 1) // 2


def naive_sp_hi(f, g, out: np.ndarray, s: Session) -> None:
    fa, ga = operand(f), operand(g)
    n = len(fa)
    _check(len(ga) == n and len(out) == max(n - 1, 0), "SPhi size mismatch")
    if n <= 1:
        return
    # only f_1.. and g_1.. reach degree >= n
    out[:] = s.ring.convolve(fa[1:], ga[1:])[n - 2:]
    s.counter.muls += n * (n - 1) // 2
    s.counter.adds += (n - 1) * (n - 2) // 2


def naive_mp(f, g, out: np.ndarray, s: Session) -> None:
    """out_t = sum_{j<n} f_{n-1+t-j} g_j for t < m; n*m muls, m(n-1) adds."""
    fa, ga = operand(f), operand(g)
    n, m = len(ga), len(out)
    _check(n >= 1 and m >= 1, "MP needs n, m >= 1")
    _check(len(fa) == n + m - 1, f"MP operand size {len(fa)} != {n + m - 1}")
    out[:] = s.ring.convolve(fa, ga)[n - 1:n - 1 + m]
    s.counter.muls += n * m
    s.counter.adds += m * (n - 1)


# -- Karatsuba ------------------------------------------------------------------

def karatsuba_workspace(n: int, threshold: int = 1) -> int:
    """Exact scratch demand of ``karatsuba_fp`` at size n."""
    total = 0
    while n > threshold:
        if n % 2:
            n -= 1
            continue
        total += n - 1
        n //= 2
    return total


def karatsuba_fp(f, g, out: np.ndarray, work: np.ndarray, s: Session, threshold: int = 1) -> None:
    """out[:2n-1] = f*g by recursive Karatsuba with at most 2n scratch registers.

    Even n splits in halves.  The operand sums live in the still-empty output
    span, the middle product in ``work``.  Odd n peels the top coefficient
    off with two scaled accumulations, so the scratch demand W satisfies
    W(2h) = 2h-1 + W(h) and W(2h+1) = W(2h), i.e. W(n) <= 2n-1.
    Sizes up to ``threshold`` use the schoolbook kernel.
    """
    fa, ga = operand(f), operand(g)
    n = len(fa)
    _check(len(ga) == n and n >= 1, "Karatsuba needs equal non-empty operands")
    _check(len(out) == 2 * n - 1, f"output span {len(out)} != {2 * n - 1}")
    _karatsuba(fa, ga, out, work, s, max(threshold, 1))


def _karatsuba(f: np.ndarray, g: np.ndarray, out: np.ndarray, work: np.ndarray,
               s: Session, threshold: int) -> None:
    n = len(f)
    ring, counter = s.ring, s.counter
    if n <= threshold:
        if n == 1:
            out[0] = f[0] * g[0] % ring.modulus
            counter.muls += 1
        else:
            naive_fp(f, g, out, s)
        return
    if n % 2:
        p = n - 1
        _karatsuba(f[:p], g[:p], out[:2 * p - 1], work, s, threshold)
        top = f[p] * g[p] % ring.modulus
        counter.muls += 1
        out[2 * p - 1] = 0
        out[2 * p] = top
        ring.axpy(out[p:2 * p], int(f[p]), g[:p], counter)
        ring.axpy(out[p:2 * p], int(g[p]), f[:p], counter)
        return
    h = n // 2
    f0, f1, g0, g1 = f[:h], f[h:], g[:h], g[h:]
    sf, sg = out[:h], out[h:2 * h]
    ring.sum_into(sf, f0, f1, counter)
    ring.sum_into(sg, g0, g1, counter)
    mid, rest = take(work, 2 * h - 1)
    _karatsuba(sf, sg, mid, rest, s, threshold)
    _karatsuba(f0, g0, out[:2 * h - 1], rest, s, threshold)
    out[2 * h - 1] = 0
    _karatsuba(f1, g1, out[2 * h:4 * h - 1], rest, s, threshold)
    ring.sub_into(mid, out[:2 * h - 1], counter)
    ring.sub_into(mid, out[2 * h:4 * h - 1], counter)
    ring.add_into(out[h:3 * h - 1], mid, counter)


# -- profiles -------------------------------------------------------------------

Entry = Callable[..., None]


def _guarded(kind: str, entry: Entry) -> Entry:
    """Wrap an entry point with the operand and output size contract of its kind."""
    if getattr(entry, "_guarded", False):
        return entry

    def checked(f, g, out, work, s):
        n, a, o = len(g), len(f), len(out)
        if kind == "MP":
            ok = n >= 1 and o >= 1 and a == n + o - 1
        else:
            want = {"SPlo": n, "SPhi": n - 1}.get(kind, 2 * n - 1)
            ok = n >= 1 and a == n and o == want
        if not ok:
            raise ContractViolation(f"{kind} called with sizes f={a}, g={n}, out={o}")
        entry(f, g, out, work, s)

    checked._guarded = True
    return checked


@dataclass(frozen=True)
class AlgoProfile:
    """A base algorithm: its kind, certified space constant c and entry point."""

    name: str
    kind: str
    c: Fraction
    entry: Entry = field(compare=False)
    # Exact workspace demand at size n when tighter than ceil(c*n).
    demand: Callable[[int], int] | None = field(default=None, compare=False)
    # Metered registers the entry allocates on top of ``work`` (adapters only).
    overhead: int = 0

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown algorithm kind {self.kind!r}")
        object.__setattr__(self, "c", Fraction(self.c))
        object.__setattr__(self, "entry", _guarded(self.kind, self.entry))

    @property
    def c_int(self) -> int:
        """c rounded up; used in thresholds and block-size formulas."""
        return math.ceil(self.c)

    def workspace(self, n: int) -> int:
        return math.ceil(self.c * n)

    def __call__(self, f, g, out: np.ndarray, work: np.ndarray, s: Session) -> None:
        self.entry(f, g, out, work, s)

    def run(self, f, g, out: np.ndarray, s: Session) -> None:
        """Run with a freshly metered workspace of ceil(c*n) registers."""
        n = len(g)
        with s.meter.session(self.workspace(n)) as work:
            self.entry(f, g, out, work, s)


def _fp_plus_lo_naive(f, g, out, work, s):
    n = len(g)
    out[n - 1:2 * n - 1] = 0
    naive_fp_additive(f, g, out, s)


def _fp_plus_hi_naive(f, g, out, work, s):
    n = len(g)
    out[:n] = 0
    naive_fp_additive(f, g, out, s)


def schoolbook(kind: str = "FP") -> AlgoProfile:
    entries = {
        "FP": lambda f, g, out, work, s: naive_fp(f, g, out, s),
        "FP+lo": _fp_plus_lo_naive,
        "FP+hi": _fp_plus_hi_naive,
        "SPlo": lambda f, g, out, work, s: naive_sp_lo(f, g, out, s),
        "SPhi": lambda f, g, out, work, s: naive_sp_hi(f, g, out, s),
        "MP": lambda f, g, out, work, s: naive_mp(f, g, out, s),
    }
    if kind not in entries:
        raise ValueError(f"unknown algorithm kind {kind!r}")
    return AlgoProfile(f"naive-{kind}", kind, Fraction(0), entries[kind], lambda n: 0)


def karatsuba(threshold: int = 16) -> AlgoProfile:
    """Karatsuba FP profile, c = 2."""
    def entry(f, g, out, work, s):
        karatsuba_fp(f, g, out, work, s, threshold)
    return AlgoProfile(f"karatsuba[{threshold}]", "FP", Fraction(2), entry,
                       lambda n: karatsuba_workspace(n, threshold))


def _require(profile: AlgoProfile, kind: str) -> None:
    if profile.kind != kind:
        raise ContractViolation(f"expected a {kind} profile, got {profile.kind}")


def derive_osp(fp: AlgoProfile, kind: str = "SPlo") -> AlgoProfile:
    """Short product from a full product computed into a workspace buffer.

    The 2n-1 product registers plus the base's c*n workspace give c' = c + 2.
    """
    _require(fp, "FP")
    if kind not in ("SPlo", "SPhi"):
        raise ValueError(kind)

    def entry(f, g, out, work, s):
        n = len(g)
        _check(len(out) == (n if kind == "SPlo" else n - 1), f"{kind} size mismatch")
        if n == 1 and kind == "SPhi":
            return
        buf, rest = take(work, 2 * n - 1)
        fp.entry(f, g, buf, rest, s)
        out[:] = buf[:n] if kind == "SPlo" else buf[n:]

    return AlgoProfile(f"{kind}<-{fp.name}", kind, fp.c + 2, entry)


def derive_omp(fp: AlgoProfile) -> AlgoProfile:
    """Balanced middle product from two full products into a workspace buffer.

    With f = f_lo + X^n f_hi, MP(f, g) is (f_lo g)[n-1:] plus X*(f_hi g)[:n-1].
    Workspace: a 2n-1 buffer plus the base's c*n, so c' = c + 2.
    """
    _require(fp, "FP")

    def entry(f, g, out, work, s):
        n = len(g)
        fv = as_view(f)
        _check(len(fv) == 2 * n - 1 and len(out) == n, "balanced MP size mismatch")
        buf, rest = take(work, 2 * n - 1)
        fp.entry(fv.range(0, n), g, buf, rest, s)
        out[:] = buf[n - 1:]
        if n > 1:
            fp.entry(fv.range(n, 2 * n), g, buf, rest, s)
            s.ring.add_into(out[1:], buf[:n - 1], s.counter)

    return AlgoProfile(f"MP<-{fp.name}", "MP", fp.c + 2, entry)


def derive_fp_plus(fp: AlgoProfile, kind: str = "FP+lo") -> AlgoProfile:
    """Half-additive full product from a full product into a buffer (c' = c + 2)."""
    _require(fp, "FP")

    def entry(f, g, out, work, s):
        n = len(g)
        buf, rest = take(work, 2 * n - 1)
        fp.entry(f, g, buf, rest, s)
        if kind == "FP+lo":
            out[n - 1:] = buf[n - 1:]
            s.ring.add_into(out[:n - 1], buf[:n - 1], s.counter)
        else:
            out[:n] = buf[:n]
            s.ring.add_into(out[n:], buf[n:], s.counter)

    return AlgoProfile(f"{kind}<-{fp.name}", kind, fp.c + 2, entry)


# -- Toeplitz oracle ------------------------------------------------------------

def toeplitz_matrix(kind: str, f, n: int) -> np.ndarray:
    """Matrix of the linear map g -> product(f, g) for the given kind.

    ``n`` is the size of g (for SPhi the map acts on g_1..g_{n-1}).
    """
    fa = operand(f)
    size = len(fa)

    def fcoef(idx: np.ndarray) -> np.ndarray:
        ok = (idx >= 0) & (idx < size)
        return np.where(ok, fa[np.clip(idx, 0, max(size - 1, 0))], 0)

    if kind == "FP":
        rows, cols = size + n - 1, n
        r, c = np.indices((rows, cols))
        return fcoef(r - c)
    if kind == "SPlo":
        r, c = np.indices((n, n))
        return np.where(c <= r, fcoef(r - c), 0)
    if kind == "SPhi":
        r, c = np.indices((n - 1, n - 1))
        return np.where(c >= r, fcoef(n - 1 + r - c), 0)
    if kind == "MP":
        m = size - n + 1
        r, c = np.indices((m, n))
        return fcoef(n - 1 + r - c)
    raise ValueError(f"no Toeplitz form for {kind!r}")


def _exact_matvec(mat: np.ndarray, vec: np.ndarray, ring: Ring) -> np.ndarray:
    if mat.size == 0:
        return np.zeros(mat.shape[0], dtype=np.int64)
    bits = ring.modulus.bit_length()
    width = max(1, 62 - bits - mat.shape[1].bit_length())
    mask = (1 << width) - 1
    result = np.zeros(mat.shape[0], dtype=np.int64)
    rest, shift = vec.astype(np.int64), 0
    while shift < bits:
        part = np.mod(mat @ (rest & mask), ring.modulus)
        result = np.mod(result + np.mod(part * pow(2, shift, ring.modulus), ring.modulus),
                        ring.modulus)
        rest = rest >> width
        shift += width
    return result


def toeplitz_oracle(kind: str, f, g, ring: Ring) -> list[int]:
    """Product of the given kind as an explicit Toeplitz matrix-vector product."""
    fa, ga = operand(f), operand(g)
    n = len(ga)
    if kind in ("SPlo", "SPhi"):
        _check(len(fa) == n, f"{kind} needs equal sizes")
    if kind == "MP":
        _check(len(fa) >= n, "MP needs len(f) >= len(g)")
    mat = toeplitz_matrix(kind, fa, n)
    vec = ga[1:] if kind == "SPhi" else ga
    return [int(x) for x in _exact_matvec(mat, vec, ring)]
