"""Coefficient ring Z/m with per-session operation counting.

Coefficients are stored as canonical residues in int64 numpy arrays.  Every
ring operation on algebraic registers costs one unit; index arithmetic is
free.  Vector helpers perform many ring operations at once and charge the
counter exactly as if they had been issued one by one.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

# Largest modulus whose residue products still fit in a signed 64-bit word.
MAX_MODULUS = 3037000499


@dataclass
class OpCounter:
    muls: int = 0
    adds: int = 0  # additions, subtractions and negations

    def total(self) -> int:
        return self.muls + self.adds

    def snapshot(self) -> tuple[int, int]:
        return (self.muls, self.adds)


def counter_snapshot(counter: OpCounter) -> tuple[int, int]:
    return counter.snapshot()


class Ring:
    """The ring of integers modulo ``modulus`` (any ``2 <= modulus <= MAX_MODULUS``)."""

    def __init__(self, modulus: int):
        modulus = int(modulus)
        if modulus < 2:
            raise ValueError(f"modulus must be at least 2, got {modulus}")
        if modulus > MAX_MODULUS:
            raise ValueError(f"modulus {modulus} exceeds word size limit {MAX_MODULUS}")
        self.modulus = modulus
        self._bits = modulus.bit_length()

    def __repr__(self) -> str:
        return f"Ring({self.modulus})"

    def __eq__(self, other: object) -> bool:
        return isinstance(other, Ring) and other.modulus == self.modulus

    def __hash__(self) -> int:
        return hash(("Ring", self.modulus))

    # -- elements -----------------------------------------------------------

    def elem(self, x: int) -> int:
        return int(x) % self.modulus

    def array(self, values) -> np.ndarray:
        """Canonical int64 array of coefficients."""
        return np.mod(np.asarray(values, dtype=np.int64).reshape(-1), self.modulus)

    def zeros(self, n: int) -> np.ndarray:
        return np.zeros(n, dtype=np.int64)

    def random(self, rng: np.random.Generator, n: int) -> np.ndarray:
        return rng.integers(0, self.modulus, size=n, dtype=np.int64)

    # -- counted scalar operations ------------------------------------------

    def add(self, a: int, b: int, counter: OpCounter) -> int:
        counter.adds += 1
        return (a + b) % self.modulus

    def sub(self, a: int, b: int, counter: OpCounter) -> int:
        counter.adds += 1
        return (a - b) % self.modulus

    def neg(self, a: int, counter: OpCounter) -> int:
        counter.adds += 1
        return (-a) % self.modulus

    def mul(self, a: int, b: int, counter: OpCounter) -> int:
        counter.muls += 1
        return (a * b) % self.modulus

    # -- counted vector operations ------------------------------------------

    def add_into(self, dst: np.ndarray, src: np.ndarray, counter: OpCounter) -> None:
        """dst[i] += src[i]; one addition per element."""
        if len(src) == 0:
            return
        dst += src
        np.mod(dst, self.modulus, out=dst)
        counter.adds += len(src)

    def sub_into(self, dst: np.ndarray, src: np.ndarray, counter: OpCounter) -> None:
        if len(src) == 0:
            return
        dst -= src
        np.mod(dst, self.modulus, out=dst)
        counter.adds += len(src)

    def sum_into(self, dst: np.ndarray, a: np.ndarray, b: np.ndarray, counter: OpCounter) -> None:
        """dst[i] = a[i] + b[i]."""
        np.add(a, b, out=dst)
        np.mod(dst, self.modulus, out=dst)
        counter.adds += len(dst)

    def scale_into(self, dst: np.ndarray, scalar: int, src: np.ndarray, counter: OpCounter) -> None:
        """dst[i] = scalar * src[i]."""
        np.multiply(src, scalar, out=dst)
        np.mod(dst, self.modulus, out=dst)
        counter.muls += len(dst)

    def axpy(self, dst: np.ndarray, scalar: int, src: np.ndarray, counter: OpCounter) -> None:
        """dst[i] += scalar * src[i]; one multiplication and one addition per element."""
        if len(src) == 0:
            return
        t = np.mod(src * scalar, self.modulus)
        dst += t
        np.mod(dst, self.modulus, out=dst)
        counter.muls += len(src)
        counter.adds += len(src)

    # -- uncounted exact arithmetic for kernels -----------------------------

    def convolve(self, a: np.ndarray, b: np.ndarray) -> np.ndarray:
        """Exact full convolution of two residue arrays, reduced mod m.

        The shorter operand is split into limbs narrow enough that every
        partial dot product fits in int64.  Callers charge the counter.
        """
        if len(a) == 0 or len(b) == 0:
            return np.zeros(max(len(a) + len(b) - 1, 0), dtype=np.int64)
        if len(a) < len(b):
            a, b = b, a
        terms = len(b)
        width = 62 - self._bits - terms.bit_length()
        m = self.modulus
        if width >= self._bits:
            return np.mod(np.convolve(a, b), m)
        width = max(width, 1)
        mask = (1 << width) - 1
        result = np.zeros(len(a) + len(b) - 1, dtype=np.int64)
        shift = 0
        rest = np.array(b, dtype=np.int64)
        while shift < self._bits:
            limb = rest & mask
            rest = rest >> width
            part = np.mod(np.convolve(a, limb), m)
            factor = pow(2, shift, m)
            # part < m and factor < m, so part * factor fits in int64
            result = np.mod(result + np.mod(part * factor, m), m)
            shift += width
        return result


def ring_op(kind: str, a: int, b: int | None, counter: OpCounter, ring: Ring) -> int:
    """Dispatch one counted ring operation by name (add, sub, mul, neg)."""
    if kind == "neg":
        return ring.neg(a, counter)
    if b is None:
        raise ValueError(f"{kind} needs two operands")
    if kind == "add":
        return ring.add(a, b, counter)
    if kind == "sub":
        return ring.sub(a, b, counter)
    if kind == "mul":
        return ring.mul(a, b, counter)
    raise ValueError(f"unknown ring operation {kind!r}")
