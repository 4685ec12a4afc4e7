"""Tests for cyclotomic classes, Gauss periods and Gauss sums."""

from fractions import Fraction

import pytest

from cyclotome import cyclotomy
from cyclotome.constructions import check_conditions_A, check_conditions_B
from cyclotome.cyclotomy import (
    CycIntValue,
    CycSetup,
    SurdValue,
    build_period_table,
    char_sum,
    char_sum_all,
    check_gauss_properties,
    compare_gauss,
    gauss_sum_numeric,
    legendre,
    predict_gauss,
    quadratic_gauss_sum,
)
from cyclotome.errors import SetupMismatch
from cyclotome.gf import build_field, find_modulus


class TestCycIntValue:
    """Test cases for exact values in Z[zeta_p]."""

    def test_normalization(self):
        """Test that shifting all coefficients does not change the value."""
        assert CycIntValue.from_vector([3, 1, 1]) == CycIntValue.rational(2, 3)
        assert CycIntValue.from_vector([3, 1, 1]).rational_value() == 2

    def test_root_of_unity_product(self):
        """Test zeta * zeta^2 = 1 in Z[zeta_3]."""
        zeta = CycIntValue.from_vector([0, 1, 0])
        zeta2 = CycIntValue.from_vector([0, 0, 1])
        assert (zeta * zeta2).rational_value() == 1
        assert not zeta.is_rational()

    def test_characteristic_two(self):
        """Test that Z[zeta_2] values are always rational."""
        value = CycIntValue.from_vector([7, 8])
        assert value.is_rational()
        assert value.rational_value() == -1

    def test_quadratic_gauss_sum_squares(self):
        """Test that the quadratic Gauss sum squares to p*."""
        g3 = quadratic_gauss_sum(3)
        g5 = quadratic_gauss_sum(5)
        assert (g3 * g3).rational_value() == -3
        assert (g5 * g5).rational_value() == 5

    def test_galois_conjugation(self):
        """Test that zeta -> zeta^-1 conjugates sqrt(-3)."""
        g3 = quadratic_gauss_sum(3)
        assert g3.galois(2) == -g3

    def test_render(self):
        """Test the term rendering of an irrational value."""
        assert CycIntValue.from_vector([0, 1, 0]).render() == "1*z3^1"
        assert CycIntValue.rational(-15, 2).render() == "-15"


class TestSurdValue:
    """Test cases for rational + coeff * sqrt(radicand)."""

    def test_render_folds_coefficient(self):
        """Test the skew Hadamard value rendering."""
        value = SurdValue(Fraction(-1, 2), Fraction(9, 2), -3)
        assert value.render() == "(-1+sqrt(-243))/2"
        assert value.conjugate().render() == "(-1-sqrt(-243))/2"

    def test_matches_cyclotomic(self):
        """Test exact comparison through the quadratic Gauss sum."""
        g3 = quadratic_gauss_sum(3)
        value = CycIntValue.rational(-1, 3) + g3
        assert SurdValue(Fraction(-1), Fraction(1), -3).matches(value)
        assert not SurdValue(Fraction(-1), Fraction(-1), -3).matches(value)

    def test_rational_matches(self):
        """Test that a rational surd matches a rational value."""
        assert SurdValue(Fraction(17)).matches(CycIntValue.rational(17, 2))

    def test_foreign_radicand(self):
        """Test that sqrt(7) is not expressed over Z[zeta_3]."""
        with pytest.raises(ValueError):
            SurdValue(Fraction(0), Fraction(1), 7).to_cyclotomic(3)


class TestPeriodTable:
    """Test cases for the period table sweep."""

    def setup_method(self):
        """Set up test fixtures."""
        self.gf16 = build_field(find_modulus(2, 4))
        self.setup = CycSetup(self.gf16, 15)
        self.table = build_period_table(self.setup)

    def test_setup_mismatch(self):
        """Test that N must divide q - 1."""
        with pytest.raises(SetupMismatch):
            CycSetup(self.gf16, 7)

    def test_counts_shape(self):
        """Test that each class row sums to the class size."""
        assert self.table.counts.shape == (15, 2)
        assert self.table.counts.sum(axis=1).tolist() == [1] * 15

    def test_periods_are_signs(self):
        """Test that the singleton periods are (-1)^Tr(gamma^j)."""
        assert self.table.period(0).rational_value() == 1
        assert self.table.period(3).rational_value() == -1

    def test_full_sum(self):
        """Test that the sum over all nonzero elements is -1."""
        assert char_sum(self.table, range(15), 0).rational_value() == -1

    def test_char_sum_all_matches_char_sum(self):
        """Test the vectorized sums against single shifts."""
        indices = [0, 5, 10]
        values = char_sum_all(self.table, indices)
        assert values == [char_sum(self.table, indices, a) for a in range(15)]

    def test_threads_do_not_change_counts(self):
        """Test that the threaded sweep gives the same table."""
        gf243 = build_field(find_modulus(3, 5))
        setup = CycSetup(gf243, 22)
        single = build_period_table(setup, threads=1)
        multi = build_period_table(setup, threads=4)
        assert (single.counts == multi.counts).all()
        assert single.counts.sum() == 242

    def test_trace_columns(self):
        """Test that trace 0 is taken q/p - 1 times on the nonzero elements, others q/p times."""
        for p, f, N in ((2, 4, 15), (3, 5, 22), (2, 12, 45)):
            table = build_period_table(CycSetup(build_field(find_modulus(p, f)), N))
            q = p**f
            columns = table.counts.sum(axis=0).tolist()
            assert columns == [q // p - 1] + [q // p] * (p - 1)

    def test_shift_sums(self):
        """Test that the character sums over every shift add up to -|I|."""
        cases = (
            (3, 5, 22, [[0], [0, 3, 5], list(range(0, 22, 2))]),
            (2, 12, 45, [[0, 5, 10], [1, 2, 4, 8, 16, 32]]),
        )
        for p, f, N, index_sets in cases:
            table = build_period_table(CycSetup(build_field(find_modulus(p, f)), N))
            for indices in index_sets:
                total = sum(char_sum_all(table, indices), CycIntValue.rational(0, p))
                assert total.rational_value() == -len(indices)

    def test_to_dict(self):
        """Test the exported period table layout."""
        data = self.table.to_dict()
        assert data["p"] == 2
        assert data["f"] == 4
        assert data["N"] == 15
        assert data["modulus"] == [1, 1, 0, 0, 1]
        assert len(data["counts"]) == 15


class TestGaussSums:
    """Test cases for Gauss sums and their closed forms."""

    def setup_method(self):
        """Set up test fixtures."""
        self.table16 = build_period_table(CycSetup(build_field(find_modulus(2, 4)), 15))
        self.params16 = check_conditions_A(2, 5, 3, 1, 1).params
        self.table243 = build_period_table(CycSetup(build_field(find_modulus(3, 5)), 22))
        self.params243 = check_conditions_B(3, 11, 1).params

    def test_trivial_character(self):
        """Test that G(chi^0) = -1."""
        assert abs(gauss_sum_numeric(self.table16, 0) + 1) < 1e-9

    def test_semiprimitive_values(self):
        """Test G(chi^5) = -4 and G(chi^3) = 4 over GF(16)."""
        assert abs(gauss_sum_numeric(self.table16, 5) + 4) < 1e-9
        assert abs(gauss_sum_numeric(self.table16, 3) - 4) < 1e-9

    def test_closed_forms_gf16(self):
        """Test that one sign of c matches every exponent over GF(16)."""
        comparison = compare_gauss(self.table16, self.params16)
        assert comparison.valid
        assert comparison.sign in (1, -1)
        assert len(comparison.rows) == 14
        assert comparison.max_deviation <= comparison.tolerance

    def test_closed_forms_gf243(self):
        """Test the one-prime closed forms over GF(3^5)."""
        comparison = compare_gauss(self.table243, self.params243)
        assert comparison.valid
        clauses = {row.clause for row in comparison.rows}
        assert "p1^m" in clauses

    def test_predict_matches_numeric(self):
        """Test predict_gauss against direct sums with the chosen sign."""
        sign = compare_gauss(self.table243, self.params243).sign
        for k in (1, 2, 11, 13):
            predicted = predict_gauss(self.params243, k, sign).numeric()
            assert abs(predicted - gauss_sum_numeric(self.table243, k)) < 1e-6

    def test_prediction_norm(self):
        """Test that every prediction has norm q."""
        for k in range(1, 22):
            assert predict_gauss(self.params243, k).norm() == 243

    def test_mismatched_table(self):
        """Test that a table of another order is refused."""
        with pytest.raises(SetupMismatch):
            compare_gauss(self.table16, self.params243)

    def test_properties(self):
        """Test modulus, Frobenius and conjugation identities."""
        assert check_gauss_properties(self.table16).valid
        assert check_gauss_properties(self.table243).valid

    def test_modulus_checked_within_tolerance(self, monkeypatch):
        """Test that |G|^2 = q is held to the tolerance itself, not a multiple of it."""
        direct = cyclotomy.gauss_sum_numeric
        stretch = 1 + 1e-4 / (2 * 243)

        def stretched(table, k):
            return direct(table, k) * (stretch if k else 1)

        monkeypatch.setattr(cyclotomy, "gauss_sum_numeric", stretched)
        properties = check_gauss_properties(self.table243)
        assert not properties.modulus
        assert properties.frobenius and properties.conjugation and properties.trivial
        comparison = compare_gauss(self.table243, self.params243)
        assert comparison.sign is not None
        assert not comparison.modulus_ok


class TestLegendre:
    """Test cases for the Legendre symbol helper."""

    def test_values(self):
        """Test residues, non-residues and zero."""
        assert legendre(2, 7) == 1
        assert legendre(3, 7) == -1
        assert legendre(14, 7) == 0
        assert legendre(-1, 5) == 1
