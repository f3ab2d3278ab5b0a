"""Register classes of the algebraic-RAM model.

* ``InputView``: read-only window onto an input coefficient sequence, with
  zero padding, reversal and sub-range adapters that cost no ring operation.
* output spans: plain 1-D int64 numpy arrays.  Slicing gives disjoint
  sub-spans that share storage with the parent, which is exactly the
  ``R[k..l[`` range notation the algorithms rely on.
* ``WorkMeter``: counts separately allocated algebraic temporaries and keeps
  the peak.  Registers borrowed from an output span are never counted.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .ring import OpCounter, Ring


class ContractViolation(ValueError):
    """A caller broke an operation's precondition (a program defect)."""


class MeterViolation(RuntimeError):
    """Workspace demand exceeded the registers that were made available."""


class InputView:
    """Read-only affine view ``i -> source[offset + step*i]`` of length ``length``.

    Logical positions outside ``[valid_lo, valid_hi)`` read as zero (fake
    padding).  The source array is flagged read-only on construction.
    """

    __slots__ = ("source", "offset", "step", "length", "valid_lo", "valid_hi")

    def __init__(self, source, offset: int = 0, step: int = 1, length: int | None = None,
                 valid: tuple[int, int] | None = None):
        if not isinstance(source, np.ndarray) or source.dtype != np.int64:
            source = np.asarray(source, dtype=np.int64)
        if source.flags.writeable:
            source = source.view()
            source.flags.writeable = False
        self.source = source
        self.offset = offset
        self.step = step
        self.length = len(source) if length is None else length
        lo, hi = (0, self.length) if valid is None else valid
        self.valid_lo = max(lo, 0)
        self.valid_hi = max(min(hi, self.length), self.valid_lo)

    def __len__(self) -> int:
        return self.length

    def __repr__(self) -> str:
        return f"InputView({self.to_list()})"

    def coeff(self, i: int, pad: bool = True) -> int:
        if not 0 <= i < self.length:
            if not pad:
                raise ContractViolation(f"index {i} outside view of length {self.length}")
            return 0
        if i < self.valid_lo or i >= self.valid_hi:
            return 0
        return int(self.source[self.offset + self.step * i])

    def reverse(self, n: int | None = None) -> "InputView":
        """View reading ``coeff(n-1-i)``; n must equal the view length."""
        n = self.length if n is None else n
        if n != self.length:
            raise ContractViolation(f"reversal size {n} != view length {self.length}")
        return InputView(self.source, self.offset + self.step * (n - 1), -self.step, n,
                         (n - self.valid_hi, n - self.valid_lo))

    def range(self, lo: int, hi: int, pad: bool = True) -> "InputView":
        """Sub-polynomial ``sum_{lo<=j<hi} coeff(j) X^(j-lo)``."""
        if lo > hi:
            raise ContractViolation(f"empty range [{lo}, {hi})")
        if not pad and (lo < 0 or hi > self.length):
            raise ContractViolation(f"range [{lo}, {hi}) outside length {self.length}")
        return InputView(self.source, self.offset + self.step * lo, self.step, hi - lo,
                         (self.valid_lo - lo, self.valid_hi - lo))

    def quo(self, k: int) -> "InputView":
        """f quo X^k."""
        return self.range(k, max(self.length, k))

    def mod(self, k: int) -> "InputView":
        """f mod X^k, padded if k exceeds the length."""
        return self.range(0, k)

    @property
    def padded(self) -> bool:
        return self.valid_lo > 0 or self.valid_hi < self.length

    def array(self) -> np.ndarray:
        """Coefficients as a read-only int64 array.

        Unpadded views are zero-copy strided views of the source; padded
        views gather the stored part next to zeros.
        """
        lo, hi = self.valid_lo, self.valid_hi
        if hi <= lo:
            return np.zeros(self.length, dtype=np.int64)
        a = self.offset + self.step * lo
        b = self.offset + self.step * (hi - 1)
        if self.step == 1:
            core = self.source[a:b + 1]
        else:
            core = self.source[b:a + 1][::-1]
        if lo == 0 and hi == self.length:
            return core
        out = np.zeros(self.length, dtype=np.int64)
        out[lo:hi] = core
        out.flags.writeable = False
        return out

    def to_list(self) -> list[int]:
        return [int(x) for x in self.array()]


def as_view(x) -> InputView:
    return x if isinstance(x, InputView) else InputView(x)


def operand(x) -> np.ndarray:
    """Coefficient array of an InputView or an array-like operand."""
    if isinstance(x, InputView):
        return x.array()
    return np.asarray(x, dtype=np.int64)


# Standalone forms of the view adapters.

def view_coeff(v: InputView, i: int, pad: bool = True) -> int:
    return v.coeff(i, pad)


def view_reverse(v: InputView, n: int | None = None) -> InputView:
    return v.reverse(n)


def view_range(v: InputView, lo: int, hi: int, pad: bool = True) -> InputView:
    return v.range(lo, hi, pad)


# -- output spans -------------------------------------------------------------

def span_split(s: np.ndarray, k: int) -> tuple[np.ndarray, np.ndarray]:
    if not 0 <= k <= len(s):
        raise ContractViolation(f"split point {k} outside span of length {len(s)}")
    return s[:k], s[k:]


def span_add_assign(s: np.ndarray, src: np.ndarray, counter: OpCounter, ring: Ring) -> None:
    """s[i] += src[i] for i < len(src)."""
    if len(src) > len(s):
        raise ContractViolation(f"source length {len(src)} exceeds span length {len(s)}")
    if len(src) == 0:
        return
    dst = s[:len(src)]
    if np.shares_memory(dst, src) and not _same_range(dst, src):
        raise ContractViolation("partially aliased add-assign")
    ring.add_into(dst, src, counter)


def _same_range(a: np.ndarray, b: np.ndarray) -> bool:
    return (a.__array_interface__["data"][0] == b.__array_interface__["data"][0]
            and a.strides == b.strides and len(a) == len(b))


def reverse_in_place(s: np.ndarray) -> None:
    """Reverse a span by swaps; moves are not ring operations."""
    s[:] = s[::-1].copy()


def take(work: np.ndarray, size: int) -> tuple[np.ndarray, np.ndarray]:
    """Carve ``size`` registers off the front of a workspace, returning (block, rest)."""
    size = int(size)
    if size > len(work):
        raise MeterViolation(f"needs {size} work registers, only {len(work)} available")
    return work[:size], work[size:]


# -- work meter ---------------------------------------------------------------

@dataclass
class WorkMeter:
    """Live and peak count of separately allocated work registers.

    ``cap`` turns the meter into a certificate: exceeding it raises.
    """

    cap: int | None = None
    live: int = 0
    peak: int = 0

    def acquire(self, count: int) -> None:
        if count < 0:
            raise ContractViolation("negative register count")
        self.live += count
        if self.cap is not None and self.live > self.cap:
            self.live -= count
            raise MeterViolation(f"{self.live + count} live work registers exceed cap {self.cap}")
        self.peak = max(self.peak, self.live)

    def release(self, count: int) -> None:
        self.live -= count

    def session(self, count: int) -> "_Borrow":
        """Context manager yielding ``count`` zero-initialised metered registers."""
        return _Borrow(self, count)


class _Borrow:
    __slots__ = ("meter", "count")

    def __init__(self, meter: WorkMeter, count: int):
        self.meter, self.count = meter, count

    def __enter__(self) -> np.ndarray:
        self.meter.acquire(self.count)
        return np.zeros(self.count, dtype=np.int64)

    def __exit__(self, *exc) -> None:
        self.meter.release(self.count)


def work_session(meter: WorkMeter, count: int):
    return meter.session(count)


@dataclass
class Session:
    """Everything one algorithm invocation threads through: ring, counter, meter."""

    ring: Ring
    counter: OpCounter = field(default_factory=OpCounter)
    meter: WorkMeter = field(default_factory=WorkMeter)

    @classmethod
    def for_modulus(cls, modulus: int, cap: int | None = None) -> "Session":
        return cls(Ring(modulus), OpCounter(), WorkMeter(cap=cap))
