import itertools

import numpy as np
import pytest

from polytheta import arith
from polytheta.counting import (ALL_INTEGERS, NON_NEGATIVE, POSITIVE,
                                CongruenceInstance, CountDomain,
                                PolygonalInstance, count_polygonal,
                                count_squares, polygonal_count_table,
                                polygonal_number, polygonal_to_squares,
                                squares_count_table)


def brute_polygonal(m, alpha, n, lower):
    """Blind four-fold loop used to cross-check the slicker counters."""
    bound = 1
    while polygonal_number(m, bound) * min(alpha) <= n:
        bound += 1
    lo = lower if lower is not None else -bound - 2
    vals = range(lo, bound + 1)
    return sum(1 for t in itertools.product(vals, repeat=4)
               if sum(a * polygonal_number(m, x) for a, x in zip(alpha, t)) == n)


def test_polygonal_number_values():
    assert polygonal_number(6, 0) == 0
    assert polygonal_number(3, 3) == 6
    assert polygonal_number(4, 5) == 25
    assert polygonal_number(6, 2) == 6
    assert polygonal_number(5, 3) == 12


def test_polygonal_number_triangular_reflection():
    for ell in range(-50, 51):
        assert polygonal_number(3, -ell - 1) == polygonal_number(3, ell)


def test_polygonal_number_rejects_small_m():
    with pytest.raises(ValueError):
        polygonal_number(2, 1)


def test_domain_aliases():
    assert CountDomain.at_least(1) == POSITIVE
    assert CountDomain.at_least(0) == NON_NEGATIVE
    assert str(ALL_INTEGERS) == "all"


def test_jacobi_four_squares_small():
    inst = PolygonalInstance(m=4, alpha=(1, 1, 1, 1))
    jac = arith.jacobi_four_square_table(50)
    for n in range(51):
        assert count_polygonal(inst, n, ALL_INTEGERS) == int(jac[n])


def test_count_polygonal_zero_case():
    for m in (3, 5, 6, 9):
        inst = PolygonalInstance(m=m, alpha=(3, 2, 1, 1))
        assert count_polygonal(inst, 0, NON_NEGATIVE) == 1


def test_hexagonal_example_n6():
    inst = PolygonalInstance(m=6, alpha=(1, 1, 1, 1))
    assert count_polygonal(inst, 6, NON_NEGATIVE) == 4


def test_count_polygonal_matches_blind_bruteforce():
    for m, alpha, lower in [(5, (1, 1, 1, 1), 0), (6, (2, 1, 1, 1), 1),
                            (7, (1, 1, 1, 1), None), (3, (1, 1, 1, 1), 0)]:
        inst = PolygonalInstance(m=m, alpha=alpha)
        dom = CountDomain(lower=lower)
        for n in range(25):
            assert count_polygonal(inst, n, dom) == brute_polygonal(
                m, inst.alpha, n, lower), (m, alpha, lower, n)


def test_domain_monotonicity():
    for m, alpha in [(5, (1, 1, 1, 1)), (6, (3, 2, 1, 1)), (8, (1, 1, 1, 1))]:
        inst = PolygonalInstance(m=m, alpha=alpha)
        for n in range(80):
            p = count_polygonal(inst, n, POSITIVE)
            nn = count_polygonal(inst, n, NON_NEGATIVE)
            al = count_polygonal(inst, n, ALL_INTEGERS)
            assert p <= nn <= al


def test_count_squares_examples():
    assert count_squares(CongruenceInstance(r=1, M=2, alpha=(1, 1, 1, 1)), 4) == 16
    assert count_squares(CongruenceInstance(r=3, M=4, alpha=(1, 1, 1, 1)), 4) == 1
    # off the forced residue class the count vanishes
    inst = CongruenceInstance(r=1, M=4, alpha=(1, 1, 1, 1))
    for n in range(60):
        if n % 8 != 4 % 8:
            assert count_squares(inst, n) == 0


def test_count_squares_residue_class_forcing():
    # counts vanish unless n = r^2 sum(alpha) (mod 2M) for even modulus 2M
    for (r, twoM, alpha) in [(1, 4, (1, 1, 1, 1)), (3, 8, (2, 1, 1, 1)),
                             (5, 6, (1, 1, 1, 1))]:
        inst = CongruenceInstance(r=r, M=twoM, alpha=alpha)
        forced = (r * r * sum(alpha)) % twoM
        tab = squares_count_table(inst, 300)
        for n in range(301):
            if n % twoM != forced:
                assert tab[n] == 0


def test_eps_sign_bijection():
    # all-odd classes: the sixteen sign flips identify the mod-4 class count
    # with 1/16 of the mod-2 class count
    t12 = squares_count_table(CongruenceInstance(r=1, M=2, alpha=(1, 1, 1, 1)), 400)
    t34 = squares_count_table(CongruenceInstance(r=3, M=4, alpha=(1, 1, 1, 1)), 400)
    for n in range(401):
        assert t12[n] == 16 * t34[n]


def test_polygonal_to_squares_images():
    inst6 = PolygonalInstance(m=6, alpha=(1, 1, 1, 1))
    cong, shifted = polygonal_to_squares(inst6, 7)
    assert (cong.M, cong.lower_bound) == (8, -2)
    assert cong.r == (-2) % 8
    assert shifted == 32 * 7 + 16
    inst5 = PolygonalInstance(m=5, alpha=(1, 1, 1, 1))
    cong, shifted = polygonal_to_squares(inst5, 0)
    assert (cong.M, cong.lower_bound) == (6, -1)
    assert cong.r == (-1) % 6
    assert shifted == 4


def test_polygonal_to_squares_needs_m5():
    with pytest.raises(ValueError):
        polygonal_to_squares(PolygonalInstance(m=4, alpha=(1, 1, 1, 1)), 1)


def test_polygonal_to_squares_roundtrip():
    for m, alpha in [(6, (1, 1, 1, 1)), (5, (2, 1, 1, 1)), (7, (1, 1, 1, 1))]:
        inst = PolygonalInstance(m=m, alpha=alpha)
        for n in range(0, 201, 7):
            cong, shifted = polygonal_to_squares(inst, n)
            assert count_squares(cong, shifted) == count_polygonal(
                inst, n, NON_NEGATIVE)


def test_tables_match_per_index_counters():
    inst = PolygonalInstance(m=6, alpha=(2, 1, 1, 1))
    for dom in (ALL_INTEGERS, NON_NEGATIVE, POSITIVE):
        tab = polygonal_count_table(inst, 60, dom)
        for n in range(61):
            assert tab[n] == count_polygonal(inst, n, dom)
    cinst = CongruenceInstance(r=5, M=6, alpha=(1, 1, 1, 1))
    tab = squares_count_table(cinst, 120)
    for n in range(121):
        assert tab[n] == count_squares(cinst, n)
    bounded = CongruenceInstance(r=5, M=6, alpha=(1, 1, 1, 1), lower_bound=-1)
    tab = squares_count_table(bounded, 120)
    for n in range(121):
        assert tab[n] == count_squares(bounded, n)


def test_zero_one_gap_exponent():
    # the all-coordinates-positive count differs from the non-negative count
    # by boundary solutions, empirically O(n^(1/2+eps)): fitted exponent <= 0.6
    from polytheta.circle import error_exponent_fit

    inst = PolygonalInstance(m=6, alpha=(1, 1, 1, 1))
    nn = polygonal_count_table(inst, 10_000, NON_NEGATIVE)
    pp = polygonal_count_table(inst, 10_000, POSITIVE)
    diff = (nn - pp).astype(float)
    ns = np.arange(len(diff))
    fit = error_exponent_fit(ns[1:], diff[1:])
    assert fit.slope <= 0.6


def test_alpha_normalized_input_recorded():
    inst = PolygonalInstance(m=6, alpha=(1, 2, 1, 3))
    assert inst.alpha == (3, 2, 1, 1)
    assert inst.alpha_input == (1, 2, 1, 3)


def test_residue_normalization_keeps_lower_bound():
    inst = CongruenceInstance(r=-2, M=8, alpha=(1, 1, 1, 1), lower_bound=-2)
    assert inst.r == 6
    assert inst.r_input == -2
    assert inst.lower_bound == -2


def test_invalid_instances_rejected():
    with pytest.raises(ValueError):
        PolygonalInstance(m=6, alpha=(1, 1, 1))
    with pytest.raises(ValueError):
        PolygonalInstance(m=6, alpha=(1, 1, 1, 0))
    with pytest.raises(ValueError):
        CongruenceInstance(r=1, M=0, alpha=(1, 1, 1, 1))
    with pytest.raises(ValueError):
        count_polygonal(PolygonalInstance(m=6, alpha=(1, 1, 1, 1)), -1,
                        NON_NEGATIVE)


def test_batch_overflow_guard():
    from polytheta.counting import OverflowGuardError, _convolve_supports

    huge = np.zeros(3, dtype=np.int64)
    huge[0] = 2**62
    with pytest.raises(OverflowGuardError):
        _convolve_supports([huge, huge], 2)
