"""Exact verification of strongly regular Cayley graphs, difference sets and schemes."""

import logging
from dataclasses import dataclass, field
from fractions import Fraction
from math import isqrt
from typing import Any, Dict, List, Optional, Sequence, Tuple, Union

import numpy as np
from sympy import factorint

from cyclotome.constructions import ConnectionSet
from cyclotome.cyclotomy import CycIntValue, PeriodTable, SurdValue, char_sum_all
from cyclotome.errors import (
    AxiomFails,
    DifferenceCensusFails,
    NotPartition,
    NotSrg,
    NotSymmetric,
    NotTwoValued,
    SizeExceeded,
    SkewSplitFails,
    SpectrumMismatch,
    SymmetryFails,
)
from cyclotome.gf import FieldTable

logger = logging.getLogger(__name__)

Eigenvalue = Union[int, SurdValue]

DIRECT_LIMIT = 10**4
CENSUS_LIMIT = 10**8


def render(value: Any) -> str:
    if isinstance(value, (CycIntValue, SurdValue)):
        return value.render()
    return str(value)


@dataclass
class SpectrumEntry:
    value: CycIntValue
    shifts: int
    multiplicity: int

    def to_dict(self) -> Dict[str, Any]:
        return {"value": self.value.render(), "multiplicity": self.multiplicity}


def restricted_spectrum(table: PeriodTable, D: ConnectionSet) -> List[SpectrumEntry]:
    """
    Distinct values of psi(gamma^a D) over a in Z_N, each with its multiplicity.

    Multiplicity is the number of shifts attaining the value times the class size.
    Entries are ordered by decreasing real part.
    """
    counts: Dict[CycIntValue, int] = {}
    for value in char_sum_all(table, D.indices):
        counts[value] = counts.get(value, 0) + 1
    class_size = table.setup.class_size
    entries = [SpectrumEntry(v, c, c * class_size) for v, c in counts.items()]

    def order(entry: SpectrumEntry) -> Tuple[float, float, Tuple[int, ...]]:
        z = entry.value.to_complex()
        return (-round(z.real, 9), round(z.imag, 9), entry.value.coeffs)

    return sorted(entries, key=order)


@dataclass
class SrgCertificate:
    """
    Parameters and restricted eigenvalues of a strongly regular graph.

    Attributes:
        v, k, lam, mu: SRG parameters
        r, s: Restricted eigenvalues, r the larger (or the + branch of a conjugate pair)
        m_r, m_s: Their multiplicities
        connected: False when k = r
        method: "spectral" or "direct"
    """

    v: int
    k: int
    lam: int
    mu: int
    r: Eigenvalue
    s: Eigenvalue
    m_r: int
    m_s: int
    connected: bool
    method: str

    def parameters(self) -> Tuple[int, int, int, int]:
        return (self.v, self.k, self.lam, self.mu)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "v": self.v,
            "k": self.k,
            "lambda": self.lam,
            "mu": self.mu,
            "r": render(self.r),
            "s": render(self.s),
            "m_r": self.m_r,
            "m_s": self.m_s,
            "connected": self.connected,
            "method": self.method,
        }


def _split_square(n: int) -> Tuple[int, int]:
    """n = root^2 * core with core squarefree (sign kept on core)."""
    root, core = 1, -1 if n < 0 else 1
    for prime, exponent in factorint(abs(n)).items():
        root *= prime ** (exponent // 2)
        core *= prime ** (exponent % 2)
    return root, core


def _eigen_pair(total: int, product: int) -> Tuple[Eigenvalue, Eigenvalue]:
    """Roots of x^2 - total*x + product, larger (or + branch) first."""
    disc = total * total - 4 * product
    root = isqrt(disc) if disc >= 0 else -1
    if root >= 0 and root * root == disc:
        return (total + root) // 2, (total - root) // 2
    half = Fraction(total, 2)
    outside, core = _split_square(disc)
    coeff = Fraction(outside, 2)
    return SurdValue(half, coeff, core), SurdValue(half, -coeff, core)


def _same(value: CycIntValue, eigenvalue: Eigenvalue) -> bool:
    if isinstance(eigenvalue, int):
        return value.is_rational() and value.rational_value() == eigenvalue
    return eigenvalue.matches(value)


def distinct_values(table: PeriodTable, D: ConnectionSet, bound: Optional[int] = None) -> int:
    """
    Number of distinct restricted eigenvalues of Cay(F_q, D).

    Raises:
        SpectrumMismatch: If bound is given and the count exceeds it
    """
    count = len(set(char_sum_all(table, D.indices)))
    if bound is not None and count > bound:
        raise SpectrumMismatch(f"{count} distinct restricted values, at most {bound} expected")
    return count


def _check_identities(cert: SrgCertificate) -> None:
    v, k, lam, mu = cert.parameters()
    if k * (k - lam - 1) != (v - k - 1) * mu:
        raise SpectrumMismatch(f"k(k-lambda-1) != (v-k-1)mu for {cert.parameters()}")
    if cert.m_r + cert.m_s != v - 1:
        raise SpectrumMismatch(f"multiplicities {cert.m_r} + {cert.m_s} != v - 1")
    if isinstance(cert.r, int):
        if k + cert.m_r * cert.r + cert.m_s * cert.s != 0:
            raise SpectrumMismatch("trace condition k + m_r r + m_s s = 0 fails")
    elif cert.m_r != cert.m_s or k + cert.m_r * 2 * cert.r.rational != 0:
        raise SpectrumMismatch("conjugate eigenvalues need equal multiplicities and zero trace")


def verify_srg(table: PeriodTable, D: ConnectionSet) -> SrgCertificate:
    """
    Decide strong regularity from the restricted spectrum.

    Args:
        table: Period table of D's setup
        D: Symmetric connection set

    Returns:
        SrgCertificate with method "spectral"

    Raises:
        NotSymmetric: If D != -D
        NotTwoValued: If the spectrum does not have exactly two values of the admissible shape
    """
    if not D.is_symmetric():
        raise NotSymmetric(f"connection set {D.label or D.indices} is not closed under negation")
    spectrum = restricted_spectrum(table, D)
    values = [entry.value for entry in spectrum]
    if len(spectrum) != 2:
        raise NotTwoValued([v.render() for v in values])

    first, second = values
    total, product = first + second, first * second
    if not (total.is_rational() and product.is_rational()):
        raise NotTwoValued([v.render() for v in values])
    r, s = _eigen_pair(total.rational_value(), product.rational_value())
    if isinstance(r, SurdValue) and r.radicand < 0:
        raise NotTwoValued([v.render() for v in values])
    m_r = next(e.multiplicity for e in spectrum if _same(e.value, r))
    m_s = next(e.multiplicity for e in spectrum if _same(e.value, s))

    v, k = table.setup.field.q, D.size
    mu = k + product.rational_value()
    lam = mu + total.rational_value()
    cert = SrgCertificate(v, k, lam, mu, r, s, m_r, m_s, connected=(k != r), method="spectral")
    _check_identities(cert)
    logger.info("SRG%s via spectrum, r = %s, s = %s", cert.parameters(), render(r), render(s))
    return cert


def _adjacency(field_table: FieldTable, D: ConnectionSet, chunk: int = 64) -> np.ndarray:
    q = field_table.q
    elements = np.arange(q, dtype=np.int64)
    adjacency = np.zeros((q, q), dtype=np.float32)
    for start in range(0, q, chunk):
        rows = elements[start : start + chunk]
        differences = field_table.sub(elements[None, :], rows[:, None])
        adjacency[start : start + chunk] = D.membership[differences]
    return adjacency


def verify_srg_direct(
    field_table: FieldTable, D: ConnectionSet, limit: int = DIRECT_LIMIT
) -> SrgCertificate:
    """
    Brute-force strong regularity: count common neighbours of every pair.

    Uses no character theory; adjacency is x ~ y iff y - x lies in D.

    Args:
        field_table: Field of D
        D: Connection set
        limit: Largest admissible v

    Returns:
        SrgCertificate with method "direct"

    Raises:
        SizeExceeded: If q > limit
        NotSrg: If the graph is not regular, complete, edgeless, or some pair breaks constancy
    """
    v = field_table.q
    if v > limit:
        raise SizeExceeded(v, limit)
    adjacency = _adjacency(field_table, D)
    if not np.array_equal(adjacency, adjacency.T):
        raise NotSrg("adjacency is not symmetric")
    degrees = adjacency.sum(axis=1)
    k = int(degrees[0])
    if not np.all(degrees == k):
        raise NotSrg("graph is not regular")
    if k == 0:
        raise NotSrg("graph is edgeless")
    if k == v - 1:
        raise NotSrg(f"graph is complete (lambda = {v - 2}, no non-adjacent pairs)")

    common = adjacency @ adjacency
    off_diagonal = ~np.eye(v, dtype=bool)
    edges = (adjacency > 0) & off_diagonal
    non_edges = (adjacency == 0) & off_diagonal
    lam_values = np.unique(common[edges])
    mu_values = np.unique(common[non_edges])
    if len(lam_values) != 1:
        x, y = np.argwhere(edges & (common != lam_values[0]))[0]
        raise NotSrg("lambda is not constant", (int(x), int(y)))
    if len(mu_values) != 1:
        x, y = np.argwhere(non_edges & (common != mu_values[0]))[0]
        raise NotSrg("mu is not constant", (int(x), int(y)))
    lam, mu = int(lam_values[0]), int(mu_values[0])

    r, s = _eigen_pair(lam - mu, mu - k)
    if isinstance(r, int):
        # k + m_r r + m_s s = 0 with m_r + m_s = v - 1
        m_r = _exact_multiplicity(-(k + (v - 1) * s), r - s)
        m_s = v - 1 - m_r
    else:
        m_r = m_s = (v - 1) // 2
    cert = SrgCertificate(v, k, lam, mu, r, s, m_r, m_s, connected=(k != r), method="direct")
    _check_identities(cert)
    logger.info("SRG%s by direct counting", cert.parameters())
    return cert


def _exact_multiplicity(numerator: int, denominator: int) -> int:
    quotient, remainder = divmod(numerator, denominator)
    if remainder or quotient < 0:
        raise NotSrg(f"multiplicity {numerator}/{denominator} is not a nonnegative integer")
    return quotient


@dataclass
class DifferenceSetVerdict:
    """Outcome of a skew Hadamard or Paley type verification."""

    kind: str
    v: int
    k: int
    lam: Optional[int]
    values: List[str]
    census_checked: bool = False
    notes: List[str] = field(default_factory=list)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "kind": self.kind,
            "v": self.v,
            "k": self.k,
            "lambda": self.lam,
            "values": self.values,
            "census_checked": self.census_checked,
            "notes": self.notes,
        }


def expected_half_set_values(field_table: FieldTable) -> Tuple[SurdValue, SurdValue]:
    """(-1 +- sqrt(q*))/2 with q* = (-1)^((q-1)/2) q, written over sqrt(p*)."""
    p, f = field_table.p, field_table.spec.f
    if f % 2 == 0:
        root = Fraction(p ** (f // 2), 2)
        return SurdValue(Fraction(-1, 2) + root), SurdValue(Fraction(-1, 2) - root)
    pstar = p if p % 4 == 1 else -p
    coeff = Fraction(p ** ((f - 1) // 2), 2)
    return SurdValue(Fraction(-1, 2), coeff, pstar), SurdValue(Fraction(-1, 2), -coeff, pstar)


def spectrum_matches(spectrum: Sequence[SpectrumEntry], expected: Sequence[SurdValue]) -> bool:
    """True when every value equals one of the expected values and all expected values occur."""
    hit = [False] * len(expected)
    for entry in spectrum:
        matched = [i for i, e in enumerate(expected) if e.matches(entry.value)]
        if not matched:
            return False
        for i in matched:
            hit[i] = True
    return all(hit)


def difference_census(field_table: FieldTable, D: ConnectionSet, chunk: int = 256) -> np.ndarray:
    """census[g] = number of ordered pairs (d1, d2) in D x D, d1 != d2, with d1 - d2 = g."""
    elements = D.elements
    census = np.zeros(field_table.q, dtype=np.int64)
    for start in range(0, len(elements), chunk):
        block = elements[start : start + chunk]
        differences = field_table.sub(block[:, None], elements[None, :]).ravel()
        census += np.bincount(differences, minlength=field_table.q)
    census[0] -= len(elements)
    return census


def verify_skew_hds(
    table: PeriodTable, D: ConnectionSet, census_limit: int = CENSUS_LIMIT
) -> DifferenceSetVerdict:
    """
    Verify a skew Hadamard difference set structurally and spectrally.

    Args:
        table: Period table of D's setup
        D: Candidate set
        census_limit: Largest |D|^2 for the difference census

    Returns:
        DifferenceSetVerdict of kind "skew_hds"

    Raises:
        SkewSplitFails: If D, -D, {0} do not partition the field
        DifferenceCensusFails: If some nonzero element is not represented (v-3)/4 times
        SpectrumMismatch: If some character value is not (-1 +- sqrt(-v))/2
    """
    field_table = table.setup.field
    v, k = field_table.q, D.size
    if v % 4 != 3:
        raise SkewSplitFails(f"v = {v} is not 3 (mod 4)")
    negatives = field_table.neg(D.elements)
    if 2 * k != v - 1 or D.membership[negatives].any():
        raise SkewSplitFails("D and -D are not complementary in the nonzero elements")

    verdict = DifferenceSetVerdict("skew_hds", v, k, (v - 3) // 4, [])
    if k * k <= census_limit:
        census = difference_census(field_table, D)
        if census[1:].sum() != k * (k - 1):
            raise SpectrumMismatch("difference census total is not |D|(|D|-1)")
        bad = np.flatnonzero(census[1:] != verdict.lam)
        if len(bad):
            g = int(bad[0]) + 1
            raise DifferenceCensusFails(g, int(census[g]), verdict.lam)
        verdict.census_checked = True
    else:
        verdict.notes.append(f"difference census skipped: |D|^2 = {k * k} > {census_limit}")

    spectrum = restricted_spectrum(table, D)
    expected = expected_half_set_values(field_table)
    if not spectrum_matches(spectrum, expected):
        found = [e.value.render() for e in spectrum]
        raise SpectrumMismatch(f"values {found} are not {[e.render() for e in expected]}")
    verdict.values = [e.render() for e in expected]
    logger.info("skew Hadamard difference set (%d, %d, %d)", v, k, verdict.lam)
    return verdict


def verify_paley_pds(table: PeriodTable, D: ConnectionSet) -> DifferenceSetVerdict:
    """
    Verify a Paley type partial difference set by its exact character values.

    Raises:
        SymmetryFails: If D != -D or |D| != (v-1)/2
        SpectrumMismatch: If some character value is not (-1 +- sqrt(v))/2
    """
    field_table = table.setup.field
    v, k = field_table.q, D.size
    if 2 * k != v - 1 or not D.is_symmetric():
        raise SymmetryFails("Paley type sets are symmetric with (v-1)/2 elements")
    if v % 4 != 1:
        raise SpectrumMismatch(f"Paley type sets need v = 1 (mod 4), got {v}")
    spectrum = restricted_spectrum(table, D)
    expected = expected_half_set_values(field_table)
    if not spectrum_matches(spectrum, expected):
        raise SpectrumMismatch(
            f"values {[e.value.render() for e in spectrum]} are not (-1 +- sqrt({v}))/2"
        )
    verdict = DifferenceSetVerdict("paley_pds", v, k, (v - 5) // 4, [e.render() for e in expected])
    logger.info("Paley type partial difference set, v = %d", v)
    return verdict


@dataclass
class SchemeReport:
    """Outcome of checking a translation scheme given by its nontrivial relations."""

    class_count: int
    valencies: List[int]
    multiplicities: List[int]
    pseudocyclic: bool
    method: str
    intersection_numbers: Optional[List[List[List[int]]]] = None
    amorphy_witness: Optional[Tuple[int, int]] = None
    witness_values: List[str] = field(default_factory=list)
    certificates: List[Dict[str, Any]] = field(default_factory=list)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "class_count": self.class_count,
            "valencies": self.valencies,
            "multiplicities": self.multiplicities,
            "pseudocyclic": self.pseudocyclic,
            "method": self.method,
            "intersection_numbers": self.intersection_numbers,
            "amorphy_witness": list(self.amorphy_witness) if self.amorphy_witness else None,
            "witness_values": self.witness_values,
            "certificates": self.certificates,
        }


def _pairwise_sums(field_table: FieldTable, left: np.ndarray, right: np.ndarray) -> np.ndarray:
    """counts[x] = #{(y, z) in left x right : y + z = x}."""
    counts = np.zeros(field_table.q, dtype=np.int64)
    chunk = max(1, 2**22 // max(1, len(right) * field_table.spec.f))
    for start in range(0, len(left), chunk):
        sums = field_table.add(left[start : start + chunk, None], right[None, :]).ravel()
        counts += np.bincount(sums, minlength=field_table.q)
    return counts


def intersection_numbers(field_table: FieldTable, relations: Sequence[ConnectionSet]):
    """
    p_ij^k for the relations R_0 = {0}, R_1..R_d by direct counting.

    Raises:
        AxiomFails: If some p_ij^k depends on the chosen x in R_k
    """
    classes = [np.array([0], dtype=np.int64)] + [D.elements for D in relations]
    size = len(classes)
    tensor = [[[0] * size for _ in range(size)] for _ in range(size)]
    for i in range(size):
        for j in range(size):
            counts = _pairwise_sums(field_table, classes[i], classes[j])
            for k in range(size):
                values = np.unique(counts[classes[k]])
                if len(values) != 1:
                    raise AxiomFails(i, j, k)
                tensor[i][j][k] = int(values[0])
    for i in range(size):
        for k in range(size):
            if sum(tensor[i][j][k] for j in range(size)) != len(classes[i]):
                raise AxiomFails(i, -1, k)
    return tensor


def verify_scheme(
    table: PeriodTable,
    relations: Sequence[ConnectionSet],
    direct_limit: int = DIRECT_LIMIT,
) -> SchemeReport:
    """
    Check that the relations form a translation association scheme.

    Args:
        table: Period table of the relations' setup
        relations: Nontrivial relations D_1..D_d
        direct_limit: Largest v for direct intersection numbers

    Returns:
        SchemeReport with valencies, eigenspace multiplicities, pseudocyclicity
        and the first non-amorphy witness

    Raises:
        NotPartition: If the relations do not partition the nonzero elements
        NotSymmetric: If some relation is not symmetric
        AxiomFails: If an intersection number is not well defined
        NotTwoValued: If some relation is not a strongly regular Cayley graph
    """
    if not relations:
        raise NotPartition("no relations given")
    field_table = table.setup.field
    cover = np.zeros(field_table.q, dtype=np.int64)
    for D in relations:
        cover += D.membership
    if cover[0] != 0 or not np.all(cover[1:] == 1):
        raise NotPartition("relations do not partition the nonzero elements")
    for index, D in enumerate(relations):
        if not D.is_symmetric():
            raise NotSymmetric(f"relation {index} is not symmetric")

    valencies = [D.size for D in relations]
    tensor = None
    if field_table.q <= direct_limit:
        tensor = intersection_numbers(field_table, relations)
        method = "direct"
    else:
        method = "spectral"
    certificates = [verify_srg(table, D).to_dict() for D in relations]

    # eigenspaces: shifts a with the same vector of character sums
    sums = [char_sum_all(table, D.indices) for D in relations]
    groups: Dict[Tuple[CycIntValue, ...], int] = {}
    for a in range(table.N):
        key = tuple(column[a] for column in sums)
        groups[key] = groups.get(key, 0) + 1
    multiplicities = sorted(count * table.setup.class_size for count in groups.values())
    if len(groups) != len(relations):
        raise SpectrumMismatch(
            f"{len(groups)} nontrivial eigenspaces for {len(relations)} relations"
        )

    pseudocyclic = len(set(valencies)) == 1 and len(set(multiplicities)) == 1
    report = SchemeReport(
        class_count=len(relations),
        valencies=valencies,
        multiplicities=multiplicities,
        pseudocyclic=pseudocyclic,
        method=method,
        intersection_numbers=tensor,
        certificates=certificates,
    )

    for i in range(len(relations)):
        for j in range(i + 1, len(relations)):
            fused = sorted(set(relations[i].indices) | set(relations[j].indices))
            values = set(char_sum_all(table, fused))
            if len(values) > 2:
                report.amorphy_witness = (i, j)
                report.witness_values = sorted(v.render() for v in values)
                break
        if report.amorphy_witness:
            break
    logger.info(
        "scheme with %d classes: pseudocyclic=%s, witness=%s",
        report.class_count,
        pseudocyclic,
        report.amorphy_witness,
    )
    return report
