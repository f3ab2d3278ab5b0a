import numpy as np

from polymul.harness import make_instance
from polymul.regspace import InputView, Session


def run_profile(profile, n, ring, rng, cap_extra=0):
    """Run a profile on a random instance under a meter cap; return (got, expected, session)."""
    inst = make_instance(profile.kind, n, ring, rng)
    s = Session(ring)
    s.meter.cap = profile.workspace(n) + profile.overhead + cap_extra
    out = inst.out.copy()
    profile.run(InputView(inst.f), InputView(inst.g), out, s)
    return [int(x) for x in out], inst.expected, s


def rng_for(*key):
    return np.random.default_rng(list(key))


# -- acceptance reporting --------------------------------------------------------------

ACCEPTANCE: dict[int, tuple[str, bool, str]] = {}


def report(number, title, ok, detail=""):
    """Record one acceptance verdict; printed in the terminal summary."""
    ACCEPTANCE[number] = (title, bool(ok), detail)
    print(f"criterion {number:2d} {'PASS' if ok else 'FAIL'}  {title}  {detail}")


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(ACCEPTANCE):
        title, ok, detail = ACCEPTANCE[number]
        terminalreporter.write_line(f"criterion {number:2d} {'PASS' if ok else 'FAIL'}  {title}  {detail}")
