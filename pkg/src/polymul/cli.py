"""Command-line harness: verify, bench, space, predict.

All randomness comes from numpy's PCG64 generator, keyed per cell by
``SeedSequence([seed, n, trial])``, so output does not depend on thread
scheduling.  Rows are sorted before writing.

Exit codes: 0 success, 1 check failure or I/O error, 2 usage error.
"""
from __future__ import annotations

import argparse
import csv
import io
import math
import os
import sys
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable

import numpy as np

from . import analysis
from .harness import (ALGOS, BASES, IN_PLACE, RESULT_KIND, Build, build, digest, instance_rng,
                      make_instance, run_instance)
from .regspace import Session
from .ring import MAX_MODULUS, Ring

BENCH_COLUMNS = ["command", "algo", "base", "n", "modulus", "seed", "muls", "adds", "total",
                 "base_total", "ratio", "peak_work"]
SPACE_COLUMNS = ["algo", "base", "n", "peak_work"]

DEFAULT_MODULUS = 998244353


class UsageError(Exception):
    pass


@dataclass
class RunConfig:
    command: str
    algo: str = "ifp"
    base: str = "karatsuba"
    min_n: int = 1
    max_n: int = 64
    step: int | None = None
    double: bool = False
    modulus: int = DEFAULT_MODULUS
    seed: int = 0
    trials: int | None = None
    output_path: str | None = None

    def sizes(self) -> list[int]:
        if self.min_n < 1 or self.max_n < self.min_n:
            raise UsageError(f"empty size range [{self.min_n}, {self.max_n}]")
        if self.modulus < 2 or self.modulus > MAX_MODULUS:
            raise UsageError(f"modulus must lie in [2, {MAX_MODULUS}], got {self.modulus}")
        if self.double:
            out, n = [], self.min_n
            while n <= self.max_n:
                out.append(n)
                n *= 2
            return out
        step = self.step or 1
        if step < 1:
            raise UsageError("step must be positive")
        return list(range(self.min_n, self.max_n + 1, step))

    @property
    def n_trials(self) -> int:
        if self.trials is not None:
            return self.trials
        return 100 if self.command == "verify" else 1


def _threads() -> int:
    try:
        return max(1, int(os.environ.get("POLYMUL_THREADS", "1")))
    except ValueError:
        return 1


def _map_cells(fn: Callable[[int], object], sizes: list[int]) -> list:
    workers = _threads()
    if workers == 1:
        return [fn(n) for n in sizes]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, sizes))


# -- verify -------------------------------------------------------------------------

@dataclass
class Mismatch:
    algo: str
    base: str
    n: int
    trial: int
    seed: int
    reason: str

    def reproducer(self) -> str:
        return (f"polymul verify --algo {self.algo} --base {self.base} --min-n {self.n} "
                f"--max-n {self.n} --seed {self.seed} --trials {self.trial + 1}")


def verify_cell(b: Build, n: int, cfg: RunConfig, ring: Ring) -> Mismatch | None:
    for t in range(cfg.n_trials):
        inst = make_instance(RESULT_KIND[b.algo], n, ring, instance_rng(cfg.seed, n, t))
        before = digest(inst.f, inst.g)
        try:
            got = run_instance(b, inst, Session(ring))
        except Exception as exc:  # a defective build counts as a mismatch
            return Mismatch(b.algo, b.base_name, n, t, cfg.seed, f"raised {exc!r}")
        if digest(inst.f, inst.g) != before:
            return Mismatch(b.algo, b.base_name, n, t, cfg.seed, "input registers modified")
        if got != inst.expected:
            bad = next(i for i, (x, y) in enumerate(zip(got, inst.expected)) if x != y)
            return Mismatch(b.algo, b.base_name, n, t, cfg.seed,
                            f"coefficient {bad}: got {got[bad]}, expected {inst.expected[bad]}")
    return None


def cmd_verify(cfg: RunConfig, stream=None, algorithm: Build | None = None) -> int:
    stream = stream or sys.stdout
    sizes = cfg.sizes()
    ring = Ring(cfg.modulus)
    b = algorithm or build(cfg.algo, cfg.base)
    results = _map_cells(lambda n: verify_cell(b, n, cfg, ring), sizes)
    failures = [r for r in results if r is not None]
    total = len(sizes) * cfg.n_trials
    if not failures:
        print(f"verify {b.algo} base={b.base_name} modulus={cfg.modulus} seed={cfg.seed}: "
              f"{total} instances over n={sizes[0]}..{sizes[-1]} passed", file=stream)
        return 0
    first = min(failures, key=lambda r: (r.n, r.trial))
    print(f"verify {b.algo} base={b.base_name}: MISMATCH at n={first.n} trial={first.trial}: "
          f"{first.reason}", file=stream)
    print(f"reproduce: {first.reproducer()}", file=stream)
    print(f"{len(failures)} of {len(sizes)} sizes failed", file=stream)
    return 1


# -- bench / space -------------------------------------------------------------------

def measure(b: Build, n: int, cfg: RunConfig, ring: Ring, trial: int = 0,
            trace: list | None = None) -> tuple[int, int, int]:
    inst = make_instance(RESULT_KIND[b.algo], n, ring, instance_rng(cfg.seed, n, trial), oracle=False)
    s = Session(ring)
    run_instance(b, inst, s, trace)
    return s.counter.muls, s.counter.adds, s.meter.peak


def bench_rows(cfg: RunConfig) -> list[list]:
    ring = Ring(cfg.modulus)
    b = build(cfg.algo, cfg.base)
    sizes = cfg.sizes()

    def cell(n):
        muls = adds = peak = 0
        for t in range(cfg.n_trials):
            m_, a_, p_ = measure(b, n, cfg, ring, t)
            muls, adds, peak = max(muls, m_), max(adds, a_), max(peak, p_)
        ref = b.base or b
        bm, ba, _ = measure(ref, n, cfg, ring) if ref is not b else (muls, adds, peak)
        total, base_total = muls + adds, bm + ba
        ratio = f"{total / base_total:.6f}" if base_total else "nan"
        return ["bench", b.algo, cfg.base, n, cfg.modulus, cfg.seed, muls, adds, total,
                base_total, ratio, peak]

    return sorted(_map_cells(cell, sizes), key=lambda r: r[3])


def space_rows(cfg: RunConfig) -> list[list]:
    ring = Ring(cfg.modulus)
    b = build(cfg.algo, cfg.base)
    rows = _map_cells(lambda n: [b.algo, cfg.base, n, measure(b, n, cfg, ring)[2]], cfg.sizes())
    return sorted(rows, key=lambda r: r[2])


def _write_csv(columns: list[str], rows: list[list], path: str | None, stream) -> None:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(columns)
    w.writerows(rows)
    text = buf.getvalue()
    if path is None:
        stream.write(text)
    else:
        with open(path, "w", newline="") as fh:
            fh.write(text)


def cmd_bench(cfg: RunConfig, stream=None) -> int:
    stream = stream or sys.stdout
    rows = bench_rows(cfg)
    _write_csv(BENCH_COLUMNS, rows, cfg.output_path, stream)
    return 0


def cmd_space(cfg: RunConfig, stream=None) -> int:
    stream = stream or sys.stdout
    rows = space_rows(cfg)
    _write_csv(SPACE_COLUMNS, rows, cfg.output_path, stream)
    if cfg.algo in IN_PLACE:
        peaks = sorted({r[3] for r in rows})
        if len(peaks) != 1:
            print(f"space {cfg.algo}: peak work is not constant over n: {peaks}", file=sys.stderr)
            return 1
    return 0


# -- predict -------------------------------------------------------------------------

def predict_lines(cfg: RunConfig) -> tuple[list[str], bool]:
    """Closed-form bound plus, per size, measured ops against the replayed recurrence."""
    ring = Ring(cfg.modulus)
    algo = {"fp": "ifp", "fplo": "ifp", "splo": "isplo", "sphi": "isphi", "mp": "imp"}.get(cfg.algo, cfg.algo)
    if algo not in IN_PLACE:
        raise UsageError(f"predict needs an in-place algorithm, got {cfg.algo}")
    b = build(algo, cfg.base)
    c = b.c
    bound = None
    lines: list[str] = []
    if algo == "ifp":
        bound = analysis.predict_fp_ratio(c)
    elif algo in ("isplo", "isphi"):
        bound = analysis.predict_sp_ratio(c)
    if bound is not None:
        lines.append(f"predict {algo} base={cfg.base} c={c}: bound {bound} "
                     f"(with 10% slack {float(bound) * 1.1:.2f})")
    else:
        gamma = 2 if cfg.base == "naive" else analysis.mpmath.log(3, 2)
        mb = analysis.predict_mp_bound(c, 1, gamma=gamma)
        if cfg.base == "naive":
            lines.append(f"predict imp base={cfg.base} c={c} gamma=2: mu={mb.mu} nu={mb.nu} "
                         f"(μ+ν)λ = {mb.coefficient} at λ=1")
        else:
            lines.append(f"predict imp base={cfg.base} c={c} gamma=log2(3): "
                         f"mu={analysis.mpmath.nstr(mb.mu, 8)} nu={analysis.mpmath.nstr(mb.nu, 8)}")
        q = analysis.predict_mp_bound(c, 2, M=lambda x: x, quasi_linear=True)
        lines.extend(f"note: {x}" for x in q.notes)
    lines.append("n,measured_ops,recurrence_ops,base_ops,ratio,status")
    kind = b.in_place.kind
    ok = True
    for n in cfg.sizes():
        trace: list = []
        muls, adds, _ = measure(b, n, cfg, ring, trace=trace)
        total = muls + adds
        bm, ba, _ = measure(b.base, n, cfg, ring)
        ratio = Fraction(total, bm + ba) if bm + ba else Fraction(0)
        replay = analysis.unroll_trace(kind, c, trace).total if trace else 0
        status = "ok"
        if trace and replay != total:
            status = "VIOLATION(recurrence)"
        elif bound is not None and n >= 64 and ratio > bound * Fraction(11, 10):
            status = "VIOLATION(ratio)"
        ok &= status == "ok"
        lines.append(f"{n},{total},{replay},{bm + ba},{float(ratio):.6f},{status}")
    return lines, ok


def cmd_predict(cfg: RunConfig, stream=None) -> int:
    stream = stream or sys.stdout
    lines, ok = predict_lines(cfg)
    text = "\n".join(lines) + "\n"
    if cfg.output_path:
        with open(cfg.output_path, "w") as fh:
            fh.write(text)
    else:
        stream.write(text)
    return 0 if ok else 1


# -- argument parsing ----------------------------------------------------------------

COMMANDS = {"verify": cmd_verify, "bench": cmd_bench, "space": cmd_space, "predict": cmd_predict}


def make_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="polymul", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        p = sub.add_parser(name)
        p.add_argument("--algo", choices=ALGOS, default="ifp")
        p.add_argument("--base", choices=BASES, default="karatsuba")
        p.add_argument("--min-n", type=int, default=1)
        p.add_argument("--max-n", type=int, default=64)
        grp = p.add_mutually_exclusive_group()
        grp.add_argument("--step", type=int, default=None)
        grp.add_argument("--double", action="store_true")
        p.add_argument("--modulus", type=int, default=DEFAULT_MODULUS)
        p.add_argument("--seed", type=int, default=0)
        p.add_argument("--trials", type=int, default=None)
        p.add_argument("--out", dest="output_path", default=None)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = make_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    cfg = RunConfig(**vars(args))
    try:
        cfg.sizes()  # validate before any work starts
        return COMMANDS[cfg.command](cfg)
    except UsageError as exc:
        print(f"polymul: error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"polymul: error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
