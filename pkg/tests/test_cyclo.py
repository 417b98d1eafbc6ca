from __future__ import annotations

import random

import pytest

from mubkit.cyclo import (
    CycInt,
    PhaseExponent,
    canonical_degree,
    cyclotomic_poly,
    from_phase,
    phase_sum,
)


def test_cyclotomic_polys():
    assert cyclotomic_poly(2) == (1, 0, 1)
    assert cyclotomic_poly(3) == (1, -1, 1)
    assert cyclotomic_poly(5) == (1, -1, 1, -1, 1)
    assert canonical_degree(2) == 2
    assert canonical_degree(7) == 6


def test_phase_monomials():
    assert CycInt.from_phase(2, 1).coeffs == (0, 1)  # the element i
    assert CycInt.from_phase(3, 2).coeffs == (-1, 1)  # zeta6^2 = zeta6 - 1
    for p in (2, 3, 5, 7):
        assert CycInt.from_phase(p, 0) == CycInt.one(p)
        # zeta^p = -1
        assert CycInt.from_phase(p, p) == CycInt.integer(p, -1)


def test_conjugate_pair_product():
    z = from_phase(3, 1)
    z5 = from_phase(3, 5)
    assert z * z5 == CycInt.one(3)


def test_gaussian_integer_product():
    one = CycInt.one(2)
    i = from_phase(2, 1)
    assert (one + i) * (one - i) == CycInt.integer(2, 2)


def test_sum_of_fifth_roots_vanishes():
    assert phase_sum(5, [2 * k for k in range(5)]).is_zero()


def test_unit_phases_have_unit_modulus():
    for p in (2, 3, 5, 7):
        for t in range(2 * p):
            assert from_phase(p, t).abs_sq() == CycInt.one(p)


def test_as_integer():
    assert CycInt.integer(3, 7).as_integer() == 7
    assert from_phase(3, 1).as_integer() is None
    assert CycInt.zero(5).as_integer() == 0


def test_from_exponent_counts_matches_phase_sum():
    rng = random.Random(7)
    for p in (2, 3, 5):
        exps = [rng.randrange(2 * p) for _ in range(50)]
        counts = [0] * (2 * p)
        for t in exps:
            counts[t] += 1
        assert CycInt.from_exponent_counts(p, counts) == phase_sum(p, exps)


def _random_cycint(rng: random.Random, p: int) -> CycInt:
    return CycInt(p, [rng.randint(-5, 5) for _ in range(canonical_degree(p))])


def test_ring_axioms_random():
    rng = random.Random(12345)
    for p in (2, 3, 5, 7):
        for _ in range(1000):
            a = _random_cycint(rng, p)
            b = _random_cycint(rng, p)
            c = _random_cycint(rng, p)
            assert (a + b) + c == a + (b + c)
            assert a + b == b + a
            assert a * b == b * a
            assert (a * b) * c == a * (b * c)
            assert a * (b + c) == a * b + a * c
            assert a + (-a) == CycInt.zero(p)
            assert a * CycInt.one(p) == a


def test_conjugation_involution_and_multiplicative():
    rng = random.Random(99)
    for p in (2, 3, 5, 7):
        for _ in range(200):
            a = _random_cycint(rng, p)
            b = _random_cycint(rng, p)
            assert a.conjugate().conjugate() == a
            assert (a * b).conjugate() == a.conjugate() * b.conjugate()


def test_complex_embedding_is_ring_hom():
    rng = random.Random(4)
    for p in (2, 3, 5, 7):
        for _ in range(100):
            a = _random_cycint(rng, p)
            b = _random_cycint(rng, p)
            assert abs((a * b).to_complex() - a.to_complex() * b.to_complex()) < 1e-9
            assert abs((a + b).to_complex() - (a.to_complex() + b.to_complex())) < 1e-9


def test_abs_sq_matches_float_modulus():
    rng = random.Random(21)
    for p in (2, 3, 5):
        for _ in range(100):
            a = _random_cycint(rng, p)
            assert abs(a.abs_sq().to_complex() - abs(a.to_complex()) ** 2) < 1e-9


def test_mixed_ring_operands_rejected():
    with pytest.raises(ValueError):
        CycInt.one(2) + CycInt.one(3)
    with pytest.raises(ValueError):
        CycInt.one(5) * CycInt.one(3)


def test_phase_exponent_arithmetic():
    a = PhaseExponent(5, 6)
    b = PhaseExponent(3, 6)
    assert a.combine(b).t == 2
    assert a.times(3).t == 3
    assert a.conjugate().t == 1
    assert PhaseExponent(13, 6).t == 1
    assert abs(PhaseExponent(3, 4).to_complex() - (-1j)) < 1e-12
    with pytest.raises(ValueError):
        PhaseExponent(1, 5)
    with pytest.raises(ValueError):
        a.combine(PhaseExponent(1, 4))


def test_phase_exponent_to_cycint():
    assert CycInt.from_phase(3, PhaseExponent(2, 6)).coeffs == (-1, 1)
    with pytest.raises(ValueError):
        CycInt.from_phase(3, PhaseExponent(1, 4))
