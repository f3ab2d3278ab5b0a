"""Time- and space-preserving reductions between product kinds.

Each reduction reuses a base profile and adds at most a constant number of
metered registers; fake padding and reversal are always views.
"""
from __future__ import annotations

import numpy as np

from .baseline import AlgoProfile, ContractViolation, _check, _require
from .regspace import Session, as_view, reverse_in_place, take


# -- reversal equivalences --------------------------------------------------------

def sphi_via_splo(base: AlgoProfile) -> AlgoProfile:
    """SPhi(f, g) = rev(SPlo(rev(f quo X), rev(g quo X))) on n-1 coefficients."""
    _require(base, "SPlo")

    def entry(f, g, out, work, s):
        n = len(g)
        _check(len(out) == max(n - 1, 0), "SPhi output must have n-1 registers")
        if n <= 1:
            return
        fr = as_view(f).range(1, n).reverse()
        gr = as_view(g).range(1, n).reverse()
        base.entry(fr, gr, out, work, s)
        reverse_in_place(out)

    return AlgoProfile(f"SPhi<-rev({base.name})", "SPhi", base.c, entry, overhead=base.overhead)


def splo_via_sphi(base: AlgoProfile) -> AlgoProfile:
    """Converse direction: SPlo of size n from SPhi of size n+1 on reversed, shifted views."""
    _require(base, "SPhi")

    def entry(f, g, out, work, s):
        n = len(g)
        _check(len(out) == n, "SPlo output must have n registers")
        # rev_n(f) = rev_n(F quo X) for F = X * rev_{n+1}-padded f
        fr = as_view(f).reverse().range(-1, n)
        gr = as_view(g).reverse().range(-1, n)
        base.entry(fr, gr, out, work, s)
        reverse_in_place(out)

    return AlgoProfile(f"SPlo<-rev({base.name})", "SPlo", base.c * 2, entry, overhead=base.overhead)


def _reversed_fp_plus(base: AlgoProfile, produced: str) -> AlgoProfile:
    def entry(f, g, out, work, s):
        n = len(g)
        _check(len(out) == 2 * n - 1, "half-additive output must have 2n-1 registers")
        reverse_in_place(out)
        base.entry(as_view(f).reverse(), as_view(g).reverse(), out, work, s)
        reverse_in_place(out)

    return AlgoProfile(f"{produced}<-rev({base.name})", produced, base.c, entry,
                       overhead=base.overhead)


def fphi_via_fplo(base: AlgoProfile) -> AlgoProfile:
    """FP+hi(f, g, h) = rev_{2n-1}(FP+lo(rev f, rev g, rev h)), h in the high registers."""
    _require(base, "FP+lo")
    return _reversed_fp_plus(base, "FP+hi")


def fplo_via_fphi(base: AlgoProfile) -> AlgoProfile:
    _require(base, "FP+hi")
    return _reversed_fp_plus(base, "FP+lo")


# -- short products <-> half-additive full products ------------------------------

def fpplus_via_sp(sp_lo: AlgoProfile, sp_hi: AlgoProfile, f, g, out: np.ndarray,
                  work: np.ndarray, s: Session) -> None:
    """h + f*g with h in out[:n-1], from one low and one high short product."""
    _require(sp_lo, "SPlo")
    _require(sp_hi, "SPhi")
    n = len(g)
    _check(n >= 1 and len(f) == n, "operands must share a size n >= 1")
    _check(len(out) == 2 * n - 1, f"output span {len(out)} != {2 * n - 1}")
    sp_lo.entry(f, g, out[n - 1:2 * n - 1], work, s)
    s.ring.add_into(out[:n - 1], out[n - 1:2 * n - 2], s.counter)
    out[n - 1] = out[2 * n - 2]
    sp_hi.entry(f, g, out[n:2 * n - 1], work, s)


def fpplus_profile(sp_lo: AlgoProfile, sp_hi: AlgoProfile) -> AlgoProfile:
    def entry(f, g, out, work, s):
        fpplus_via_sp(sp_lo, sp_hi, f, g, out, work, s)
    return AlgoProfile(f"FP+lo<-({sp_lo.name},{sp_hi.name})", "FP+lo", max(sp_lo.c, sp_hi.c),
                       entry, overhead=max(sp_lo.overhead, sp_hi.overhead))


def sp_via_fpplus(fp: AlgoProfile, fp_lo_add: AlgoProfile, fp_hi_add: AlgoProfile, f, g,
                  out: np.ndarray, work: np.ndarray, s: Session) -> None:
    """SPlo(f, g) from one full and two half-additive full products of half size.

    With a = floor(n/2), b = ceil(n/2), f = f0 + X^b f1 and f0- = f mod X^a:
    out[:2a-1] <- f0- g1, then h + f1 g0- over it keeping h = out[:a-1],
    copy the low a coefficients to out[b:n], finally X^b h + f0 g0.
    The half-additive step would drop coefficient a-1 of f0- g1, so that
    single value is held in one metered register and added back.
    """
    _require(fp, "FP")
    _require(fp_lo_add, "FP+lo")
    _require(fp_hi_add, "FP+hi")
    n = len(g)
    _check(n >= 1 and len(f) == n and len(out) == n, "SPlo size mismatch")
    fv, gv = as_view(f), as_view(g)
    if n == 1:
        out[0] = s.ring.mul(fv.coeff(0), gv.coeff(0), s.counter)
        return
    a, b = n // 2, n - n // 2
    fp.entry(fv.range(0, a), gv.range(b, n), out[:2 * a - 1], work, s)
    with s.meter.session(1) as saved:
        saved[0] = out[a - 1]
        fp_lo_add.entry(fv.range(b, n), gv.range(0, a), out[:2 * a - 1], work, s)
        out[a - 1] = s.ring.add(int(out[a - 1]), int(saved[0]), s.counter)
    out[b:n] = out[:a].copy()
    fp_hi_add.entry(fv.range(0, b), gv.range(0, b), out[:2 * b - 1], work, s)


def sp_fpplus_profile(fp: AlgoProfile, fp_lo_add: AlgoProfile, fp_hi_add: AlgoProfile) -> AlgoProfile:
    def entry(f, g, out, work, s):
        sp_via_fpplus(fp, fp_lo_add, fp_hi_add, f, g, out, work, s)
    c = max(fp.c, fp_lo_add.c, fp_hi_add.c)
    return AlgoProfile(f"SPlo<-({fp.name},{fp_lo_add.name},{fp_hi_add.name})", "SPlo", c, entry,
                       overhead=1 + max(fp.overhead, fp_lo_add.overhead, fp_hi_add.overhead))


# -- unbalanced full products -----------------------------------------------------

def fp_unbal_additive(base_fp: AlgoProfile, f, g, out: np.ndarray, work: np.ndarray,
                      s: Session) -> None:
    """out += f*g for sizes k = len(f) <= n = len(g).

    g is cut into ceil(n/k) chunks of size k (the last one fake-padded); each
    chunk product goes through a 2k-1 register buffer carved from ``work``
    and is added into its slot, clipped to n+k-1.  Needs (c+2)k - 1 work
    registers.
    """
    _require(base_fp, "FP")
    fv, gv = as_view(f), as_view(g)
    k, n = len(fv), len(gv)
    _check(1 <= k <= n, f"need 1 <= k={k} <= n={n}")
    total = n + k - 1
    _check(len(out) == total, f"output span {len(out)} != {total}")
    buf, rest = take(work, 2 * k - 1)
    for i in range(-(-n // k)):
        base_fp.entry(fv, gv.range(i * k, (i + 1) * k), buf, rest, s)
        lo = i * k
        hi = min(lo + 2 * k - 1, total)
        s.ring.add_into(out[lo:hi], buf[:hi - lo], s.counter)


def unbal_workspace(base_fp: AlgoProfile, k: int) -> int:
    return 2 * k - 1 + base_fp.workspace(k)


def unbal_fp_via_fphi(fp: AlgoProfile, fp_hi_add: AlgoProfile, f, g, out: np.ndarray,
                      work: np.ndarray, s: Session) -> None:
    """f*g for len(f) = m > n = len(g), computed directly in the output span.

    The top chunk of f (size r <= n) is shifted up by n - r through fake
    padding, so its product fills out[m-n : m+n-1] exactly; the n - r
    spurious zeros land in registers the next chunk overwrites.  Lower
    chunks then run high-order half-additive products, top to bottom.
    """
    _require(fp, "FP")
    _require(fp_hi_add, "FP+hi")
    fv, gv = as_view(f), as_view(g)
    m, n = len(fv), len(gv)
    _check(m >= n >= 1, f"need m={m} >= n={n} >= 1")
    _check(len(out) == m + n - 1, f"output span {len(out)} != {m + n - 1}")
    q = -(-m // n)
    top = q - 1
    r = m - top * n
    fp.entry(fv.range(top * n, m).range(r - n, r), gv, out[m - n:m + n - 1], work, s)
    for k in range(q - 2, -1, -1):
        fp_hi_add.entry(fv.range(k * n, (k + 1) * n), gv, out[k * n:k * n + 2 * n - 1], work, s)


# -- reductions to the middle product ---------------------------------------------

def via_mp(kind: str, mp: AlgoProfile, f, g, out: np.ndarray, work: np.ndarray,
           s: Session) -> None:
    """SPlo, SPhi or FP of size-n operands through one balanced middle product.

    SPlo(f, g) = MP(X^(n-1) f, g) with f padded to 2n-1,
    SPhi(f, g) = MP(f quo X, g quo X) in size n-1,
    FP(f, g)   = MP(X^(2n-2) f, g) in size 2n-1 with g padded.
    """
    _require(mp, "MP")
    fv, gv = as_view(f), as_view(g)
    n = len(gv)
    _check(len(fv) == n and n >= 1, "operands must share a size n >= 1")
    if kind == "SPlo":
        _check(len(out) == n, "SPlo output must have n registers")
        mp.entry(fv.range(-(n - 1), n), gv, out, work, s)
    elif kind == "SPhi":
        _check(len(out) == n - 1, "SPhi output must have n-1 registers")
        if n > 1:
            mp.entry(fv.range(1, 2 * n - 2), gv.range(1, n), out, work, s)
    elif kind == "FP":
        size = 2 * n - 1
        _check(len(out) == size, "FP output must have 2n-1 registers")
        mp.entry(fv.range(-(size - 1), size), gv.range(0, size), out, work, s)
    else:
        raise ContractViolation(f"no middle-product reduction for {kind!r}")


def via_mp_profile(kind: str, mp: AlgoProfile) -> AlgoProfile:
    def entry(f, g, out, work, s):
        via_mp(kind, mp, f, g, out, work, s)
    c = mp.c * 2 if kind == "FP" else mp.c
    return AlgoProfile(f"{kind}<-{mp.name}", kind, c, entry, overhead=mp.overhead)
