"""In-place products built from out-of-place ones.

All three algorithms peel off a block of the result with the out-of-place
base, borrowing the still-unused part of the output span as its workspace,
then continue on a smaller problem.  The continuation is a loop, so control
state stays at a few indices, and no work register is ever metered.

Passing a list as ``trace`` records one ``(size, ops)`` pair per iteration;
the last pair is the schoolbook base case.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .baseline import AlgoProfile, _check, _require, naive_fp_additive, naive_mp, naive_sp_lo
from .regspace import Session, as_view, reverse_in_place, span_split, take
from .tisp import fp_unbal_additive


def _mark(trace, size, s, start):
    if trace is not None:
        trace.append((size, s.counter.total() - start))
    return s.counter.total()


def ifp_hi(fp: AlgoProfile, f, g, out: np.ndarray, s: Session, trace: list | None = None) -> None:
    """out <- h + f*g in place, h (size n-1) preloaded in out[:n-1].

    Each iteration with k = floor((n+1)/(c+3)) adds f0*g into out[:n+k-1]
    and fhat*g0 into out[k:n+k-1], both through the additive unbalanced
    product with out[n+k-1:2n-1] as workspace, then recurses on
    (f quo X^k, g quo X^k) over out[2k:2n-1].
    """
    _require(fp, "FP")
    fv, gv = as_view(f), as_view(g)
    n = len(gv)
    _check(n >= 1 and len(fv) == n, "operands must share a size n >= 1")
    _check(len(out) == 2 * n - 1, f"output span {len(out)} != {2 * n - 1}")
    c = fp.c_int
    mark = s.counter.total()
    while n >= c + 2:
        _check(len(out) == 2 * n - 1, "output span out of step with operand size")
        k = (n + 1) // (c + 3)
        _check(k >= 1, "block size must be positive")
        body, work = span_split(out, n + k - 1)
        body[n - 1:] = 0
        fp_unbal_additive(fp, fv.range(0, k), gv, body, work, s)
        fp_unbal_additive(fp, gv.range(0, k), fv.range(k, n), body[k:], work, s)
        fv, gv = fv.range(k, n), gv.range(k, n)
        out = out[2 * k:]
        mark = _mark(trace, n, s, mark)
        n -= k
    _check(len(out) == 2 * n - 1, "output span out of step with operand size")
    out[n - 1:] = 0
    naive_fp_additive(fv, gv, out, s)
    _mark(trace, n, s, mark)


def ifp_high_addend(fp: AlgoProfile, f, g, out: np.ndarray, s: Session,
                    trace: list | None = None) -> None:
    """out <- X^n h + f*g in place, h (size n-1) preloaded in out[n:]."""
    reverse_in_place(out)
    ifp_hi(fp, as_view(f).reverse(), as_view(g).reverse(), out, s, trace)
    reverse_in_place(out)


def ifp_lo(fp: AlgoProfile, f, g, out: np.ndarray, s: Session, trace: list | None = None) -> None:
    """out <- h + f*g with h in out[:n-1], as the reversal of ``ifp_high_addend``."""
    reverse_in_place(out)
    ifp_high_addend(fp, as_view(f).reverse(), as_view(g).reverse(), out, s, trace)
    reverse_in_place(out)


def isp_lo(sp_lo: AlgoProfile, sp_hi: AlgoProfile, f, g, out: np.ndarray, s: Session,
           trace: list | None = None) -> None:
    """out <- f*g mod X^n in place.

    Each iteration with k = floor(n/(c+2)) fills out[n-k:n] from ceil(n/k)
    low and ceil(n/k)-1 high short products of size k, using out[:n-k] as
    buffer and workspace, then shrinks to n-k.
    """
    _require(sp_lo, "SPlo")
    _require(sp_hi, "SPhi")
    fv, gv = as_view(f), as_view(g)
    n = len(gv)
    _check(len(fv) == n, "operands must share a size")
    _check(len(out) == n, f"output span {len(out)} != {n}")
    c = max(sp_lo.c_int, sp_hi.c_int)
    mark = s.counter.total()
    while n >= c + 2:
        k = n // (c + 2)
        _check(k >= 1, "block size must be positive")
        blocks = -(-n // k)
        work, target = span_split(out, n - k)
        buf, rest = take(work, k)
        for i in range(blocks):
            fi = fv.range(k * i, k * (i + 1))
            gi = gv.range(n - k * (i + 1), n - k * i)
            if i == 0:
                sp_lo.entry(fi, gi, target, work, s)
            else:
                sp_lo.entry(fi, gi, buf, rest, s)
                s.ring.add_into(target, buf, s.counter)
        if k > 1:
            for i in range(blocks - 1):
                fi = fv.range(k * i, k * (i + 1))
                gi = gv.range(n - k * (i + 2), n - k * (i + 1))
                sp_hi.entry(fi, gi, buf[:k - 1], rest, s)
                s.ring.add_into(target[:k - 1], buf[:k - 1], s.counter)
        out = work
        fv, gv = fv.range(0, n - k), gv.range(0, n - k)
        mark = _mark(trace, n, s, mark)
        n -= k
    if n:
        naive_sp_lo(fv, gv, out, s)
    _mark(trace, n, s, mark)


def isp_hi(sp_lo: AlgoProfile, sp_hi: AlgoProfile, f, g, out: np.ndarray, s: Session,
           trace: list | None = None) -> None:
    """out <- f*g quo X^n (n-1 registers) via isp_lo on reversed quotient views."""
    fv, gv = as_view(f), as_view(g)
    n = len(gv)
    _check(len(out) == max(n - 1, 0), f"output span {len(out)} != {n - 1}")
    if n <= 1:
        return
    isp_lo(sp_lo, sp_hi, fv.range(1, n).reverse(), gv.range(1, n).reverse(), out, s, trace)
    reverse_in_place(out)


def imp(mp: AlgoProfile, f, g, out: np.ndarray, s: Session, trace: list | None = None) -> None:
    """out <- MP(f, g) in place for len(f) = n+m-1, len(g) = n, len(out) = m.

    Each iteration with k = floor(m/(c+2)) computes the top k rows, an
    (n, k) middle product, as ceil(n/k) balanced size-k middle products:
    block j pairs f[n-(j+1)k : n-jk+k-1] with g[jk : (j+1)k], both
    fake-padded.  out[k:m] serves as buffer and workspace.  Then
    f <- f quo X^k and the loop continues on out[k:m].
    """
    _require(mp, "MP")
    fv, gv = as_view(f), as_view(g)
    n, m = len(gv), len(out)
    _check(n >= 1 and m >= 1, "MP needs n, m >= 1")
    _check(len(fv) == n + m - 1, f"operand size {len(fv)} != {n + m - 1}")
    c = mp.c_int
    mark = s.counter.total()
    while m >= c + 2:
        k = m // (c + 2)
        _check(k >= 1, "block size must be positive")
        target, work = span_split(out, k)
        buf, rest = take(work, k)
        for j in range(-(-n // k)):
            lo = n - (j + 1) * k
            fj = fv.range(lo, lo + 2 * k - 1)
            gj = gv.range(j * k, (j + 1) * k)
            if j == 0:
                mp.entry(fj, gj, target, work, s)
            else:
                mp.entry(fj, gj, buf, rest, s)
                s.ring.add_into(target, buf, s.counter)
        fv = fv.range(k, len(fv))
        out = work
        mark = _mark(trace, m, s, mark)
        m -= k
    naive_mp(fv, gv, out, s)
    _mark(trace, m, s, mark)


@dataclass(frozen=True)
class InPlaceAlgo:
    """An in-place algorithm bound to its out-of-place base profile(s)."""

    kind: str  # ifp_hi, ifp_lo, isp_lo, isp_hi, imp
    bases: tuple[AlgoProfile, ...]

    @property
    def c(self) -> int:
        return max(b.c_int for b in self.bases)

    @property
    def base_case_threshold(self) -> int:
        return self.c + 2

    def __call__(self, f, g, out: np.ndarray, s: Session, trace: list | None = None) -> None:
        fn = {"ifp_hi": ifp_hi, "ifp_lo": ifp_lo, "ifp_high_addend": ifp_high_addend,
              "isp_lo": isp_lo, "isp_hi": isp_hi, "imp": imp}[self.kind]
        fn(*self.bases, f, g, out, s, trace)

    def as_profile(self) -> AlgoProfile:
        """The in-place algorithm as a zero-workspace profile usable by reductions."""
        kind = {"ifp_hi": "FP+lo", "ifp_lo": "FP+lo", "ifp_high_addend": "FP+hi",
                "isp_lo": "SPlo", "isp_hi": "SPhi", "imp": "MP"}[self.kind]

        def entry(f, g, out, work, s):
            self(f, g, out, s)
        return AlgoProfile(f"{self.kind}({','.join(b.name for b in self.bases)})", kind, 0,
                           entry, lambda n: 0, overhead=1)
