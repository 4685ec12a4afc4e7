"""Tests for elementary and quadratic number theory."""

from math import gcd, isqrt

import pytest

from cyclotome.arith import (
    NormMode,
    class_number,
    cyclic_subgroup,
    euler_phi,
    is_squarefree,
    mult_order,
    solve_norm_equation,
    subgroup_index,
)
from cyclotome.errors import CyclotomeError, NoSolution, NotCoprime, NotSquarefree


def _reduced_forms(D):
    disc = -D if D % 4 == 3 else -4 * D
    count = 0
    for a in range(1, isqrt(-disc // 3) + 1):
        for b in range(-a + 1, a + 1):
            if (b * b - disc) % (4 * a):
                continue
            c = (b * b - disc) // (4 * a)
            if c < a or (c == a and b < 0):
                continue
            if gcd(gcd(a, b), c) == 1:
                count += 1
    return count


class TestElementary:
    """Test cases for totient, orders and subgroups."""

    def test_euler_phi(self):
        """Test the totient on small moduli."""
        assert euler_phi(1) == 1
        assert euler_phi(15) == 8
        assert euler_phi(45) == 24
        assert euler_phi(75) == 40

    def test_euler_phi_rejects_zero(self):
        """Test that the totient needs a positive argument."""
        with pytest.raises(ValueError):
            euler_phi(0)

    def test_mult_order(self):
        """Test multiplicative orders used by the known instances."""
        assert mult_order(2, 15) == 4
        assert mult_order(3, 35) == 12
        assert mult_order(2, 75) == 20
        assert mult_order(3, 22) == 5
        assert mult_order(5, 1) == 1

    def test_mult_order_not_coprime(self):
        """Test that a non-unit raises NotCoprime with its context."""
        with pytest.raises(NotCoprime) as excinfo:
            mult_order(3, 15)
        assert excinfo.value.a == 3
        assert excinfo.value.n == 15
        assert isinstance(excinfo.value, CyclotomeError)

    def test_subgroup_index(self):
        """Test that p generates a subgroup of index 2 in the index-2 cases."""
        assert subgroup_index(2, 15) == 2
        assert subgroup_index(3, 35) == 2
        assert subgroup_index(3, 22) == 2

    def test_cyclic_subgroup(self):
        """Test the elements of <3> modulo 22."""
        assert cyclic_subgroup(3, 22) == [1, 3, 5, 9, 15]

    def test_is_squarefree(self):
        """Test squarefree detection."""
        assert is_squarefree(15)
        assert is_squarefree(323)
        assert not is_squarefree(12)


class TestClassNumber:
    """Test cases for class numbers of imaginary quadratic fields."""

    def test_class_number_one(self):
        """Test fields with class number one."""
        for D in (1, 2, 3, 7, 11, 19, 43, 67, 163):
            assert class_number(D) == 1

    def test_class_number_two_primes(self):
        """Test the radicands of the two-prime series."""
        assert class_number(15) == 2
        assert class_number(35) == 2
        assert class_number(5) == 2

    def test_class_number_three(self):
        """Test a class number three field."""
        assert class_number(23) == 3

    def test_class_numbers_of_known_series(self):
        """Test the radicands of the one-prime and two-prime rows."""
        assert class_number(107) == 3
        assert class_number(323) == 4
        assert class_number(11) == 1

    def test_matches_form_enumeration(self):
        """Test every squarefree D up to 2000 against a plain enumeration of reduced forms."""
        for D in range(1, 2001):
            if is_squarefree(D):
                assert class_number(D) == _reduced_forms(D), D

    def test_not_squarefree(self):
        """Test that a square factor is rejected."""
        with pytest.raises(NotSquarefree):
            class_number(12)


class TestNormEquation:
    """Test cases for 4p^h = b^2 + D c^2 with the sign congruence."""

    def test_two_primes_sign(self):
        """Test that b = 1 for p = 2, D = 15."""
        solution = solve_norm_equation(2, 2, 15, NormMode.TWO_PRIMES, f=4)
        assert (solution.b, solution.c) == (1, 1)
        assert solution.check()

    def test_two_primes_negative_sign(self):
        """Test that b = -1 for p = 3, D = 35."""
        solution = solve_norm_equation(3, 2, 35, NormMode.TWO_PRIMES, f=12)
        assert (solution.b, solution.c) == (-1, 1)

    def test_one_prime(self):
        """Test the one-prime congruence for p = 3, p1 = 11."""
        solution = solve_norm_equation(3, 1, 11, NormMode.ONE_PRIME, f=5)
        assert (solution.b, solution.c) == (1, 1)
        assert solution.check()

    def test_too_small(self):
        """Test that 4p^h < D has no solution."""
        with pytest.raises(NoSolution):
            solve_norm_equation(2, 1, 15, NormMode.TWO_PRIMES, f=4)

    def test_odd_exponent_gap(self):
        """Test that an odd f - h has no solution."""
        with pytest.raises(NoSolution):
            solve_norm_equation(2, 2, 15, NormMode.TWO_PRIMES, f=5)
