"""Exercise the extension module end to end. Run after `maturin develop`."""

from fractions import Fraction

import binrep


def main() -> None:
    a = binrep.DigitSet("0,1,8")
    assert a.elements == [0, 1, 8] and a.evens == [0, 4] and a.odds == [0]
    assert len(a) == 3 and 8 in a and 2 not in a
    assert str(a) == "{0,1,8}" and a.reflect() == binrep.DigitSet([0, 7, 8])

    assert binrep.count(a, 8) == 2
    assert all(binrep.count(a, n) == binrep.count_bruteforce(a, n) for n in range(512))
    counter = binrep.Counter(a)
    assert counter.count(10**30) == binrep.count(a, 10**30)
    assert counter.summatory(4, 1) == sum(counter.count(n) for n in range(16, 32))

    assert binrep.char_poly(a) == [1, -3, 3, -3, 6, -6, 3, -3, 3, -1]
    assert binrep.annihilated_sum(a, 3) == -59184
    report = binrep.growth_coefficient(a)
    assert report["c"] == Fraction(137, 338) and report["decimal"] == "0.405"

    c, c_reflected = binrep.compare_growth_pair(binrep.DigitSet("0,1,3"))
    assert (c, c_reflected) == (Fraction(4, 5), Fraction(2, 5))
    assert binrep.verify_reflection(binrep.DigitSet("0,1,6,9"))["passed"]

    k, lower, upper = binrep.bounds_01t(12)
    assert (k, lower, upper) == (3, Fraction(32, 243), Fraction(16, 27))

    try:
        binrep.growth_coefficient(binrep.DigitSet("0,2,4"))
    except binrep.HypothesisError:
        pass
    else:
        raise AssertionError("expected HypothesisError")
    try:
        binrep.DigitSet("1,3")
    except ValueError as e:
        assert "contain 0" in str(e)
    else:
        raise AssertionError("expected ValueError")

    print("smoke test passed")


if __name__ == "__main__":
    main()
