"""Named algorithm builds and random instances shared by the CLI and the tests."""
from __future__ import annotations

import hashlib
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .baseline import (AlgoProfile, derive_fp_plus, derive_omp, derive_osp, karatsuba,
                       schoolbook, toeplitz_oracle)
from .inplace import InPlaceAlgo
from .regspace import InputView, Session
from .ring import Ring
from .tisp import fphi_via_fplo, sphi_via_splo

ALGOS = ("fp", "fplo", "fphi", "splo", "sphi", "mp", "ifp", "isplo", "isphi", "imp")
BASES = ("naive", "karatsuba")
IN_PLACE = ("ifp", "isplo", "isphi", "imp")

# Result kind each algorithm computes, which decides instance shape and oracle.
RESULT_KIND = {
    "fp": "FP", "fplo": "FP+lo", "fphi": "FP+hi", "splo": "SPlo", "sphi": "SPhi", "mp": "MP",
    "ifp": "FP+lo", "isplo": "SPlo", "isphi": "SPhi", "imp": "MP",
}


@dataclass
class Instance:
    f: np.ndarray
    g: np.ndarray
    out: np.ndarray  # initial output content (h for the half-additive kinds)
    expected: list[int]


def output_length(kind: str, n: int) -> int:
    return {"FP": 2 * n - 1, "FP+lo": 2 * n - 1, "FP+hi": 2 * n - 1,
            "SPlo": n, "SPhi": n - 1, "MP": n}[kind]


def make_instance(kind: str, n: int, ring: Ring, rng: np.random.Generator, m: int | None = None,
                  oracle: bool = True) -> Instance:
    """Random operands of size n (MP: f of size n+m-1, default m = n) with the oracle answer.

    Output registers that do not hold an addend start with random garbage,
    so an algorithm that reads them before writing fails verification.
    With ``oracle=False`` the expected answer is left empty (for large
    measurement runs, where the dense oracle matrix would not fit).
    """
    if kind == "MP":
        m = n if m is None else m
        f, g = ring.random(rng, n + m - 1), ring.random(rng, n)
        return Instance(f, g, ring.random(rng, m), toeplitz_oracle("MP", f, g, ring) if oracle else [])
    f, g = ring.random(rng, n), ring.random(rng, n)
    out = ring.random(rng, output_length(kind, n))
    if kind in ("SPlo", "SPhi", "FP"):
        return Instance(f, g, out, toeplitz_oracle(kind, f, g, ring) if oracle else [])
    h = ring.random(rng, n - 1)
    shift = 0 if kind == "FP+lo" else n
    out[shift:shift + n - 1] = h
    if not oracle:
        return Instance(f, g, out, [])
    full = toeplitz_oracle("FP", f, g, ring)
    expected = list(full)
    for i, x in enumerate(h):
        expected[shift + i] = (expected[shift + i] + int(x)) % ring.modulus
    return Instance(f, g, out, expected)


def instance_rng(seed: int, *key: int) -> np.random.Generator:
    """PCG64 stream for one (seed, cell, trial) key; independent of execution order."""
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence([seed, *key])))


def digest(*arrays: np.ndarray) -> str:
    h = hashlib.sha256()
    for a in arrays:
        h.update(np.ascontiguousarray(a).tobytes())
    return h.hexdigest()


@dataclass
class Build:
    """An algorithm selected by (algo, base), callable as ``run(f, g, out, s, trace)``."""

    algo: str
    base_name: str
    kind: str
    run: Callable[..., None]
    base: "Build | None" = None
    profile: AlgoProfile | None = None
    in_place: InPlaceAlgo | None = None

    @property
    def c(self):
        if self.in_place is not None:
            return self.in_place.c
        return self.profile.c


def base_profiles(base: str) -> dict[str, AlgoProfile]:
    """Out-of-place profiles per kind for a base family."""
    if base not in BASES:
        raise ValueError(f"unknown base {base!r}")
    fp = schoolbook("FP") if base == "naive" else karatsuba()
    if base == "naive":
        sp_lo, sp_hi = schoolbook("SPlo"), schoolbook("SPhi")
        fp_lo = schoolbook("FP+lo")
    else:
        sp_lo, sp_hi = derive_osp(fp, "SPlo"), derive_osp(fp, "SPhi")
        fp_lo = derive_fp_plus(fp, "FP+lo")
    return {
        "FP": fp,
        "FP+lo": fp_lo,
        "FP+hi": fphi_via_fplo(fp_lo),
        "SPlo": sp_lo,
        "SPhi": sphi_via_splo(sp_lo),
        "MP": derive_omp(fp),
    }


def _profile_build(algo: str, base: str, profile: AlgoProfile) -> Build:
    def run(f, g, out, s, trace=None):
        profile.run(f, g, out, s)
    return Build(algo, base, profile.kind, run, profile=profile)


def build(algo: str, base: str) -> Build:
    if algo not in ALGOS:
        raise ValueError(f"unknown algorithm {algo!r}")
    p = base_profiles(base)
    simple = {"fp": "FP", "fplo": "FP+lo", "fphi": "FP+hi", "splo": "SPlo", "sphi": "SPhi", "mp": "MP"}
    if algo in simple:
        return _profile_build(algo, base, p[simple[algo]])
    if algo == "ifp":
        ip, under = InPlaceAlgo("ifp_hi", (p["FP"],)), "fp"
    elif algo == "isplo":
        ip, under = InPlaceAlgo("isp_lo", (p["SPlo"], p["SPhi"])), "splo"
    elif algo == "isphi":
        ip, under = InPlaceAlgo("isp_hi", (p["SPlo"], p["SPhi"])), "sphi"
    else:
        ip, under = InPlaceAlgo("imp", (p["MP"],)), "mp"
    return Build(algo, base, RESULT_KIND[algo], ip, base=build(under, base), in_place=ip)


def run_instance(b: Build, inst: Instance, s: Session, trace: list | None = None) -> list[int]:
    out = inst.out.copy()
    b.run(InputView(inst.f), InputView(inst.g), out, s, trace)
    return [int(x) for x in out]
