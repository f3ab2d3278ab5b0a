import numpy as np
import pytest

from conftest import rng_for, run_profile
from polymul.baseline import derive_fp_plus, derive_omp, derive_osp, karatsuba, schoolbook
from polymul.regspace import ContractViolation, InputView, Session
from polymul.ring import Ring
from polymul.tisp import (fp_unbal_additive, fphi_via_fplo, fplo_via_fphi, fpplus_profile,
                          sp_fpplus_profile, sphi_via_splo, splo_via_sphi, unbal_fp_via_fphi,
                          unbal_workspace, via_mp_profile)

R = Ring(97)
K = karatsuba(4)
SIZES = (1, 2, 3, 4, 7, 12, 33)


def adapters():
    lo, hi = derive_osp(K, "SPlo"), derive_osp(K, "SPhi")
    fplo, fphi = derive_fp_plus(K, "FP+lo"), derive_fp_plus(K, "FP+hi")
    mp = derive_omp(K)
    return {
        "sphi_via_splo": (sphi_via_splo(lo), lo),
        "splo_via_sphi": (splo_via_sphi(hi), hi),
        "fphi_via_fplo": (fphi_via_fplo(fplo), fplo),
        "fplo_via_fphi": (fplo_via_fphi(fphi), fphi),
        "fpplus_via_sp": (fpplus_profile(lo, hi), lo),
        "sp_via_fpplus": (sp_fpplus_profile(K, fplo, fphi), fplo),
        "splo_via_mp": (via_mp_profile("SPlo", mp), mp),
        "sphi_via_mp": (via_mp_profile("SPhi", mp), mp),
        "fp_via_mp": (via_mp_profile("FP", mp), mp),
    }


@pytest.mark.parametrize("name", sorted(adapters()))
def test_adapter_matches_oracle(name):
    p, base = adapters()[name]
    for n in SIZES:
        got, want, s = run_profile(p, n, R, rng_for(11, n))
        assert got == want, (name, n)


@pytest.mark.parametrize("name", sorted(adapters()))
def test_adapter_overhead_bounded(name):
    p, base = adapters()[name]
    for n in SIZES:
        _, _, s = run_profile(p, n, R, rng_for(12, n))
        _, _, sb = run_profile(base, n, R, rng_for(12, n))
        assert s.meter.peak <= p.workspace(n) + p.overhead
        assert s.meter.peak - sb.meter.peak <= p.overhead + p.workspace(n) - base.workspace(n)


def test_sp_via_fpplus_with_naive_parts():
    p = sp_fpplus_profile(schoolbook("FP"), schoolbook("FP+lo"), schoolbook("FP+hi"))
    for n in range(1, 20):
        got, want, s = run_profile(p, n, R, rng_for(13, n))
        assert got == want
        assert s.meter.peak <= 2


@pytest.mark.parametrize("k,n", [(1, 1), (3, 3), (3, 10), (4, 9), (5, 23)])
def test_unbalanced_additive(k, n):
    rng = rng_for(14, k, n)
    f, g = R.random(rng, k), R.random(rng, n)
    h = R.random(rng, n + k - 1)
    out = h.copy()
    s = Session(R)
    with s.meter.session(unbal_workspace(K, k)) as work:
        fp_unbal_additive(K, InputView(f), InputView(g), out, work, s)
    want = (h + R.convolve(f, g)) % R.modulus
    assert out.tolist() == want.tolist()


@pytest.mark.parametrize("m,n", [(1, 1), (5, 5), (6, 5), (10, 5), (11, 5), (23, 4), (9, 2)])
def test_unbalanced_in_output(m, n):
    rng = rng_for(15, m, n)
    f, g = R.random(rng, m), R.random(rng, n)
    out = np.full(m + n - 1, 55, dtype=np.int64)
    fphi = derive_fp_plus(K, "FP+hi")
    s = Session(R)
    with s.meter.session(fphi.workspace(n)) as work:
        unbal_fp_via_fphi(K, fphi, InputView(f), InputView(g), out, work, s)
    assert out.tolist() == R.convolve(f, g).tolist()


def test_via_mp_rejects_mp_kind():
    with pytest.raises(ContractViolation):
        via_mp_profile("MP", derive_omp(K)).run([1], [1], np.zeros(1, dtype=np.int64), Session(R))
