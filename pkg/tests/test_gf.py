"""Tests for finite field tables and the binary cache."""

import numpy as np
import pytest
from sympy.polys.domains import ZZ
from sympy.polys.galoistools import gf_mul, gf_rem, gf_strip

from cyclotome.errors import CyclotomeError, OutOfRange, SizeExceeded
from cyclotome.gf import (
    build_field,
    cache_path,
    find_modulus,
    load_field,
    materialize,
    save_field,
    trace,
)


def _to_poly(x, p, f):
    return gf_strip([(x // p**i) % p for i in reversed(range(f))])


def _from_poly(coeffs, p):
    return sum(c * p**i for i, c in enumerate(reversed(coeffs)))


# absolute traces of gamma^0 .. gamma^14 in GF(16) with x^4 + x + 1
GF16_TRACES = [0, 0, 0, 1, 0, 0, 1, 1, 0, 1, 0, 1, 1, 1, 1]


class TestFindModulus:
    """Test cases for the deterministic modulus search."""

    def test_gf16(self):
        """Test that GF(16) gets x^4 + x + 1."""
        spec = find_modulus(2, 4)
        assert spec.modulus == (1, 1, 0, 0, 1)
        assert spec.describe() == "x^4+x+1"
        assert spec.q == 16

    def test_prime_field(self):
        """Test that GF(7) gets x + 2, whose root 5 is primitive."""
        spec = find_modulus(7, 1)
        assert spec.modulus == (2, 1)

    def test_gf2(self):
        """Test that GF(2) gets x + 1."""
        spec = find_modulus(2, 1)
        assert spec.modulus == (1, 1)
        assert spec.describe() == "x+1"

    def test_gf243_first_primitive_quintic(self):
        """Test that GF(3^5) gets the first primitive quintic, x^5 + 2x + 1."""
        spec = find_modulus(3, 5)
        assert spec.modulus == (1, 2, 0, 0, 0, 1)
        assert spec.describe() == "x^5+2*x+1"

    def test_size_limit(self):
        """Test that oversized fields are refused."""
        with pytest.raises(SizeExceeded) as excinfo:
            find_modulus(2, 32)
        assert excinfo.value.q == 2**32

    def test_not_prime(self):
        """Test that a composite characteristic is rejected."""
        with pytest.raises(CyclotomeError):
            find_modulus(4, 2)


class TestFieldTable:
    """Test cases for exp, log and trace tables."""

    def setup_method(self):
        """Set up test fixtures."""
        self.gf16 = build_field(find_modulus(2, 4))
        self.gf243 = build_field(find_modulus(3, 5))

    def test_exp_log_inverse(self):
        """Test that exp and log are inverse bijections."""
        for table in (self.gf16, self.gf243):
            q = table.q
            assert sorted(table.exp_table.tolist()) == list(range(1, q))
            assert table.log_table[0] == -1
            assert np.array_equal(table.log_table[table.exp_table], np.arange(q - 1))

    def test_gf16_powers(self):
        """Test the first powers of x modulo x^4 + x + 1."""
        assert self.gf16.exp_table[:5].tolist() == [1, 2, 4, 8, 3]

    def test_gf16_traces(self):
        """Test the trace of every power of gamma."""
        traces = [trace(self.gf16, int(x)) for x in self.gf16.exp_table]
        assert traces == GF16_TRACES

    def test_trace_balanced(self):
        """Test that every trace value is taken p^(f-1) times."""
        counts = np.bincount(self.gf243.trace_table, minlength=3)
        assert counts.tolist() == [81, 81, 81]

    def test_trace_out_of_range(self):
        """Test that elements outside the field are rejected."""
        with pytest.raises(OutOfRange):
            trace(self.gf16, 16)

    def test_characteristic_two_addition(self):
        """Test that addition in characteristic 2 is XOR."""
        assert int(self.gf16.add(3, 5)) == 6
        assert int(self.gf16.neg(7)) == 7
        assert self.gf16.negation_shift() == 0

    def test_odd_characteristic_arithmetic(self):
        """Test digit-wise addition and negation in GF(3^5)."""
        x, y = 5, 7  # 2 + x and 1 + 2x
        assert int(self.gf243.add(x, y)) == 0
        assert int(self.gf243.add(x, x)) == 1 + 2 * 3  # 1 + 2x
        assert int(self.gf243.sub(x, x)) == 0
        assert int(self.gf243.add(x, self.gf243.neg(x))) == 0
        assert self.gf243.negation_shift() == 121

    def test_negation_shift_matches_minus_one(self):
        """Test that gamma^((q-1)/2) is -1."""
        minus_one = int(self.gf243.exp_table[self.gf243.negation_shift()])
        assert minus_one == int(self.gf243.neg(1))

    def test_multiplication(self):
        """Test multiplication through the log table."""
        gf = self.gf16
        assert int(gf.mul(gf.exp_table[7], gf.exp_table[10])) == int(gf.exp_table[2])
        assert int(gf.mul(0, 9)) == 0

    def test_products_against_polynomials(self):
        """Test table products on random pairs against polynomial arithmetic mod the modulus."""
        gf = self.gf243
        p, f = gf.spec.p, gf.spec.f
        modulus = list(reversed(gf.spec.modulus))
        rng = np.random.default_rng(7)
        xs = rng.integers(0, gf.q, size=10**4)
        ys = rng.integers(0, gf.q, size=10**4)
        products = gf.mul(xs, ys).tolist()
        for x, y, product in zip(xs.tolist(), ys.tolist(), products):
            expected = gf_rem(gf_mul(_to_poly(x, p, f), _to_poly(y, p, f), p, ZZ), modulus, p, ZZ)
            assert product == _from_poly(expected, p)

    def test_negation_exhaustive(self):
        """Test x + (-x) = 0 and log(-x) = log(x) + (q-1)/2 on every element of GF(3^10)."""
        gf = build_field(find_modulus(3, 10))
        elements = np.arange(gf.q, dtype=np.int64)
        negated = gf.neg(elements)
        assert not gf.add(elements, negated).any()
        assert np.array_equal(gf.neg(negated), elements)
        shifted = (gf.log_table[1:] + gf.negation_shift()) % (gf.q - 1)
        assert np.array_equal(gf.log_table[negated[1:]], shifted)

    def test_trace_linear(self):
        """Test Tr(x + y) = Tr(x) + Tr(y) and Tr(cx) = c Tr(x) on random elements."""
        gf = build_field(find_modulus(3, 10))
        rng = np.random.default_rng(11)
        xs = rng.integers(0, gf.q, size=10**4)
        ys = rng.integers(0, gf.q, size=10**4)
        traces = gf.trace_table
        assert np.array_equal(traces[gf.add(xs, ys)], (traces[xs] + traces[ys]) % 3)
        for c in (1, 2):
            assert np.array_equal(traces[gf.mul(c, xs)], c * traces[xs] % 3)


class TestFieldCache:
    """Test cases for the binary field cache."""

    def test_save_and_load(self, tmp_path):
        """Test that a cached field matches the built one."""
        table = build_field(find_modulus(3, 5))
        path = cache_path(tmp_path, table.spec)
        save_field(table, path)
        loaded = load_field(path)
        assert loaded.spec == table.spec
        assert np.array_equal(loaded.exp_table, table.exp_table)
        assert np.array_equal(loaded.log_table, table.log_table)
        assert np.array_equal(loaded.trace_table, table.trace_table)

    def test_materialize_writes_cache(self, tmp_path):
        """Test that materialize writes the cache file once and reuses it."""
        first = materialize(2, 4, cache_dir=tmp_path)
        path = cache_path(tmp_path, first.spec)
        assert path.exists()
        assert path.read_bytes().startswith(b"CYGF1")
        second = materialize(2, 4, cache_dir=tmp_path)
        assert np.array_equal(first.exp_table, second.exp_table)

    def test_corrupt_cache_rebuilds(self, tmp_path):
        """Test that an unreadable cache file is replaced."""
        spec = find_modulus(2, 4)
        path = cache_path(tmp_path, spec)
        path.write_bytes(b"garbage")
        table = materialize(2, 4, cache_dir=tmp_path)
        assert table.q == 16
        assert path.read_bytes().startswith(b"CYGF1")

    def test_load_rejects_foreign_file(self, tmp_path):
        """Test that a file without the magic is refused."""
        path = tmp_path / "other.cygf"
        path.write_bytes(b"not a field")
        with pytest.raises(CyclotomeError):
            load_field(path)
