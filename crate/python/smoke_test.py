"""Smoke test for the debruijn extension module.

Build and install it first, e.g.

    pip install maturin
    maturin develop -m crates/python/Cargo.toml

then run ``python python/smoke_test.py``.
"""

import math
from fractions import Fraction

import debruijn


def check_period():
    p = debruijn.Period("(1100)*")
    assert p.bits == [1, 1, 0, 0]
    assert p.zeros == [3, 4]
    assert len(p) == 4 and p.is_normalized()
    q, reflected = debruijn.normalize([0, 1])
    assert str(q) == "10" and reflected
    assert [debruijn.sign("10", i) for i in range(1, 6)] == [1, 1, -1, -1, 1]
    try:
        debruijn.Period("12")
    except debruijn.DebruijnError:
        pass
    else:
        raise AssertionError("malformed period accepted")


def check_counts():
    rows = debruijn.triangle("10", 5)
    assert rows[2:] == [[1, 1, 0], [0, 1, 2, 2], [5, 5, 4, 2, 0]]
    assert debruijn.triangle("10", 5, signed=True)[2] == [-1, -1, 0]
    assert debruijn.counts_by_last("10", 3) == [1, 1, 0]
    for n in range(1, 9):
        assert debruijn.counts_by_last("10110", n) == debruijn.triangle("10110", n)[-1]
    big = debruijn.triangle("10", 60)[-1]
    assert max(big).bit_length() > 64


def check_series():
    f = debruijn.theorem1_f("10", 8)
    assert f == [Fraction(x) for x in (1, 0, -1, 0, 5, 0, -61, 0, 1385)]
    totals = debruijn.corollary1_total("1100", 8)
    assert [int(c) for c in totals[1:]] == [sum(debruijn.triangle("1100", n)[-1]) for n in range(1, 9)]


def check_spectral():
    lam = debruijn.find_lambda("10")
    assert abs(lam - math.pi / 2) < 1e-10
    assert abs(debruijn.find_lambda("1100", phase=2) - 1.8751040687119613) < 1e-9
    assert abs(debruijn.operator_lambda("10", 400) - lam) < 5 / 400
    sol = debruijn.eigenfunction("10", 1, samples=11)
    assert max(sol["u"]) == 1.0
    assert all(abs(u - math.cos(math.pi * t / 2)) < 1e-9 for t, u in zip(sol["t"], sol["u"]))
    c = debruijn.growth_constant("10", 0, 100)
    assert abs(c - 2.0) < 0.01
    report = debruijn.convergence_report("1100", 0, [40, 80, 160])
    errors = [e for _, e in report]
    assert errors[0] > errors[1] > errors[2]
    pair = debruijn.named("arnold-beta", 4)
    assert sorted(pair) == ["L", "R"]


def main():
    check_period()
    check_counts()
    check_series()
    check_spectral()
    print("smoke test passed")


if __name__ == "__main__":
    main()
