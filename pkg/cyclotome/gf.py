"""Finite fields GF(p^f) as complete exponent, logarithm and trace tables.

Elements are packed integers: the polynomial sum(d_i x^i) over Z_p is stored
as sum(d_i p^i). The residue of x modulo the chosen modulus is the primitive
element gamma, so ``exp_table[a]`` is the packing of gamma^a.
"""

import logging
from dataclasses import dataclass
from pathlib import Path
from typing import Optional, Tuple, Union

import numpy as np
from sympy import factorint, isprime
from sympy.polys.domains import ZZ
from sympy.polys.galoistools import gf_irreducible_p, gf_pow_mod

from cyclotome.errors import CyclotomeError, NotPrimitive, OutOfRange, SizeExceeded

logger = logging.getLogger(__name__)

MAX_FIELD_ORDER = 2**31
CACHE_MAGIC = b"CYGF1"
_BLOCK = 4096

ArrayLike = Union[int, np.ndarray]


@dataclass(frozen=True)
class FieldSpec:
    """A prime, a degree and a monic primitive modulus (coefficients low degree first)."""

    p: int
    f: int
    modulus: Tuple[int, ...]

    @property
    def q(self) -> int:
        return self.p**self.f

    def describe(self) -> str:
        """Human readable modulus, e.g. ``x^4+x+1``."""
        terms = []
        for degree in range(self.f, -1, -1):
            coeff = self.modulus[degree]
            if coeff == 0:
                continue
            if degree == 0:
                terms.append(str(coeff))
            else:
                power = "x" if degree == 1 else f"x^{degree}"
                terms.append(power if coeff == 1 else f"{coeff}*{power}")
        return "+".join(terms)


def _is_primitive_modulus(high_first: list, p: int, q: int, prime_factors) -> bool:
    x = [1, 0]
    if gf_pow_mod(x, q - 1, high_first, p, ZZ) != [1]:
        return False
    return all(gf_pow_mod(x, (q - 1) // r, high_first, p, ZZ) != [1] for r in prime_factors)


def find_modulus(p: int, f: int, limit: int = MAX_FIELD_ORDER) -> FieldSpec:
    """
    Deterministically choose a primitive modulus for GF(p^f).

    Candidates are the monic degree-f polynomials taken in increasing order of
    the packed value of their lower coefficients; the first one that is
    irreducible with a primitive root wins.

    Args:
        p: Prime characteristic
        f: Extension degree
        limit: Largest admissible field order

    Returns:
        FieldSpec for the chosen modulus

    Raises:
        SizeExceeded: If p^f > limit
    """
    if not isprime(p):
        raise CyclotomeError(f"p = {p} is not prime")
    if f < 1:
        raise CyclotomeError(f"degree must be positive, got {f}")
    q = p**f
    if q > limit:
        raise SizeExceeded(q, limit)

    prime_factors = list(factorint(q - 1))
    for packed in range(1, q):
        low = [(packed // p**i) % p for i in range(f)]
        if low[0] == 0:
            continue
        high_first = [1] + low[::-1]
        if f > 1 and not gf_irreducible_p(high_first, p, ZZ):
            continue
        if _is_primitive_modulus(high_first, p, q, prime_factors):
            spec = FieldSpec(p=p, f=f, modulus=tuple(low) + (1,))
            logger.info("GF(%d^%d): modulus %s", p, f, spec.describe())
            return spec
    raise NotPrimitive(f"no primitive modulus of degree {f} over GF({p})")


def _companion(spec: FieldSpec) -> np.ndarray:
    """Matrix of multiplication by x on coefficient vectors."""
    p, f = spec.p, spec.f
    matrix = np.zeros((f, f), dtype=np.int64)
    for i in range(1, f):
        matrix[i, i - 1] = 1
    for i in range(f):
        matrix[i, f - 1] = (matrix[i, f - 1] - spec.modulus[i]) % p
    return matrix


def _matrix_power(matrix: np.ndarray, exponent: int, p: int) -> np.ndarray:
    result = np.eye(matrix.shape[0], dtype=np.int64)
    base = matrix % p
    while exponent:
        if exponent & 1:
            result = result @ base % p
        base = base @ base % p
        exponent >>= 1
    return result


@dataclass(frozen=True, eq=False)
class FieldTable:
    """
    Complete tables for GF(p^f).

    Attributes:
        spec: Field specification
        exp_table: a -> packed gamma^a, length q - 1
        log_table: packed x -> index of x, length q, -1 at 0
        trace_table: packed x -> Tr(x) in Z_p, length q
    """

    spec: FieldSpec
    exp_table: np.ndarray
    log_table: np.ndarray
    trace_table: np.ndarray

    @property
    def p(self) -> int:
        return self.spec.p

    @property
    def q(self) -> int:
        return self.spec.q

    @property
    def powers(self) -> np.ndarray:
        return self.spec.p ** np.arange(self.spec.f, dtype=np.int64)

    def digits(self, x: ArrayLike) -> np.ndarray:
        """Base-p digits of packed elements, along a new last axis."""
        x = np.asarray(x, dtype=np.int64)
        return (x[..., None] // self.powers) % self.p

    def pack(self, digits: np.ndarray) -> np.ndarray:
        return digits @ self.powers

    def add(self, x: ArrayLike, y: ArrayLike) -> np.ndarray:
        """Field addition, broadcasting over arrays."""
        if self.p == 2:
            return np.bitwise_xor(np.asarray(x, dtype=np.int64), np.asarray(y, dtype=np.int64))
        return self.pack((self.digits(x) + self.digits(y)) % self.p)

    def neg(self, x: ArrayLike) -> np.ndarray:
        if self.p == 2:
            return np.asarray(x, dtype=np.int64)
        return self.pack((-self.digits(x)) % self.p)

    def sub(self, x: ArrayLike, y: ArrayLike) -> np.ndarray:
        if self.p == 2:
            return self.add(x, y)
        return self.pack((self.digits(x) - self.digits(y)) % self.p)

    def mul(self, x: ArrayLike, y: ArrayLike) -> np.ndarray:
        x = np.asarray(x, dtype=np.int64)
        y = np.asarray(y, dtype=np.int64)
        index = (self.log_table[x] + self.log_table[y]) % (self.q - 1)
        return np.where((x == 0) | (y == 0), 0, self.exp_table[index])

    def negation_shift(self) -> int:
        """Index offset of -1: gamma^a maps to -gamma^a = gamma^(a + shift)."""
        return 0 if self.p == 2 else (self.q - 1) // 2


def trace(table: FieldTable, x: int) -> int:
    """
    Absolute trace of a packed element.

    Raises:
        OutOfRange: If x is not in [0, q)
    """
    if not 0 <= x < table.q:
        raise OutOfRange(f"element {x} outside GF({table.q})")
    return int(table.trace_table[x])


def _trace_table(spec: FieldSpec, companion: np.ndarray) -> np.ndarray:
    # Tr(x^i) is the matrix trace of multiplication by x^i; extend by linearity
    p, f, q = spec.p, spec.f, spec.q
    basis = np.zeros(f, dtype=np.int64)
    power = np.eye(f, dtype=np.int64)
    for i in range(f):
        basis[i] = int(np.trace(power)) % p
        power = power @ companion % p
    elements = np.arange(q, dtype=np.int64)
    traces = np.zeros(q, dtype=np.int64)
    for i in range(f):
        if basis[i]:
            traces += ((elements // p**i) % p) * basis[i]
    return traces % p


def _log_from_exp(exp_table: np.ndarray, q: int) -> np.ndarray:
    log_table = np.full(q, -1, dtype=np.int64)
    log_table[exp_table] = np.arange(q - 1, dtype=np.int64)
    return log_table


def build_field(spec: FieldSpec) -> FieldTable:
    """
    Build exp, log and trace tables for a field spec.

    The first block of powers is produced by repeated multiplication by x;
    later blocks are obtained by multiplying a whole block by x^B at once.

    Args:
        spec: FieldSpec from find_modulus

    Returns:
        Immutable FieldTable

    Raises:
        NotPrimitive: If the powers of x do not exhaust the nonzero elements
    """
    p, f, q = spec.p, spec.f, spec.q
    companion = _companion(spec)
    powers = p ** np.arange(f, dtype=np.int64)
    order = q - 1
    block = min(_BLOCK, order)

    rows = np.zeros((block, f), dtype=np.int64)
    rows[0, 0] = 1
    for a in range(1, block):
        rows[a] = companion @ rows[a - 1] % p

    exp_table = np.empty(order, dtype=np.int64)
    step = _matrix_power(companion, block, p).T
    start = 0
    while start < order:
        stop = min(start + block, order)
        exp_table[start:stop] = rows[: stop - start] @ powers
        rows = rows @ step % p
        start = stop

    if np.any(exp_table == 0):
        raise NotPrimitive(f"modulus {spec.describe()} is reducible")
    log_table = _log_from_exp(exp_table, q)
    if np.any(log_table[1:] < 0):
        raise NotPrimitive(f"x has order below {order} modulo {spec.describe()}")

    trace_table = _trace_table(spec, companion)
    logger.info("built GF(%d^%d) tables, q = %d", p, f, q)
    return FieldTable(spec=spec, exp_table=exp_table, log_table=log_table, trace_table=trace_table)


def cache_path(cache_dir: Path, spec: FieldSpec) -> Path:
    coeffs = "-".join(str(c) for c in spec.modulus)
    return Path(cache_dir) / f"gf_{spec.p}_{spec.f}_{coeffs}.cygf"


def save_field(table: FieldTable, path: Path) -> None:
    """Write the binary cache: magic, header as <u8, then exp and trace as <u4."""
    spec = table.spec
    header = np.array([spec.p, spec.f, *spec.modulus, spec.q], dtype="<u8")
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "wb") as fh:
        fh.write(CACHE_MAGIC)
        fh.write(header.tobytes())
        fh.write(table.exp_table.astype("<u4").tobytes())
        fh.write(table.trace_table.astype("<u4").tobytes())


def load_field(path: Path) -> FieldTable:
    """
    Read a binary cache written by save_field and rebuild the log table.

    Raises:
        CyclotomeError: If the file is truncated or not a field cache
    """
    data = Path(path).read_bytes()
    if not data.startswith(CACHE_MAGIC):
        raise CyclotomeError(f"{path} is not a field cache")
    offset = len(CACHE_MAGIC)
    p, f = (int(v) for v in np.frombuffer(data, dtype="<u8", count=2, offset=offset))
    header = np.frombuffer(data, dtype="<u8", count=f + 4, offset=offset)
    modulus = tuple(int(c) for c in header[2 : f + 3])
    q = int(header[f + 3])
    if q != p**f:
        raise CyclotomeError(f"{path}: inconsistent header")
    offset += 8 * (f + 4)
    expected = offset + 4 * (q - 1) + 4 * q
    if len(data) != expected:
        raise CyclotomeError(f"{path}: expected {expected} bytes, found {len(data)}")
    exp_table = np.frombuffer(data, dtype="<u4", count=q - 1, offset=offset).astype(np.int64)
    offset += 4 * (q - 1)
    trace_table = np.frombuffer(data, dtype="<u4", count=q, offset=offset).astype(np.int64)
    spec = FieldSpec(p=p, f=f, modulus=modulus)
    return FieldTable(
        spec=spec,
        exp_table=exp_table,
        log_table=_log_from_exp(exp_table, q),
        trace_table=trace_table,
    )


def materialize(
    p: int, f: int, cache_dir: Optional[Path] = None, limit: int = MAX_FIELD_ORDER
) -> FieldTable:
    """
    Find the modulus for GF(p^f) and build its tables, going through the cache if one is set.

    Args:
        p: Prime characteristic
        f: Extension degree
        cache_dir: Optional cache directory
        limit: Largest admissible field order

    Returns:
        FieldTable
    """
    spec = find_modulus(p, f, limit=limit)
    if cache_dir is None:
        return build_field(spec)

    path = cache_path(cache_dir, spec)
    if path.exists():
        try:
            table = load_field(path)
            if table.spec == spec:
                logger.info("field cache hit: %s", path)
                return table
            logger.warning("field cache %s does not match %s, rebuilding", path, spec)
        except CyclotomeError as e:
            logger.warning("ignoring unreadable field cache: %s", e)
    table = build_field(spec)
    save_field(table, path)
    logger.info("field cache written: %s", path)
    return table
