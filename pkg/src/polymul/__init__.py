"""In-place polynomial multiplication over Z/m with register-level space accounting."""
from .baseline import AlgoProfile, karatsuba, schoolbook, toeplitz_oracle
from .inplace import InPlaceAlgo, imp, ifp_hi, ifp_lo, isp_hi, isp_lo
from .regspace import ContractViolation, InputView, MeterViolation, Session, WorkMeter
from .ring import OpCounter, Ring

__all__ = [
    "AlgoProfile", "ContractViolation", "InPlaceAlgo", "InputView", "MeterViolation",
    "OpCounter", "Ring", "Session", "WorkMeter", "ifp_hi", "ifp_lo", "imp", "isp_hi",
    "isp_lo", "karatsuba", "schoolbook", "toeplitz_oracle",
]
