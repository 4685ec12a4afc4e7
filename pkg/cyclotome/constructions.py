"""Cyclotomic connection sets of index-2 type and their predicted spectra.

Two recipes are covered:

* two primes, N = p1^m p2^n with p1 = 1 and p2 = 3 (mod 4): symmetric sets
  giving strongly regular Cayley graphs and, through all shifts, a
  pseudocyclic association scheme;
* one prime, N = 2 p1^m with p1 = 3 (mod 8): sets of half the field giving
  skew Hadamard difference sets (p = 3 mod 4) or Paley type partial
  difference sets (p = 1 mod 4).
"""

import logging
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from functools import cached_property
from typing import Any, Dict, List, Optional, Tuple

import numpy as np

from cyclotome.arith import (
    NormMode,
    class_number,
    cyclic_subgroup,
    euler_phi,
    is_prime,
    mult_order,
    solve_norm_equation,
)
from cyclotome.cyclotomy import (
    CycSetup,
    PeriodTable,
    SurdValue,
    compare_gauss,
    legendre,
)
from cyclotome.errors import (
    ConditionViolation,
    CyclotomeError,
    NonIntegral,
    PartitionViolation,
    SetupMismatch,
    SizeInvariantViolation,
)
from cyclotome.utils import format_power

logger = logging.getLogger(__name__)


class ConstructionKind(Enum):
    """Which index-2 family a parameter set belongs to."""

    TWO_PRIMES = "A"  # N = p1^m p2^n
    TWO_P1M = "B"  # N = 2 p1^m


@dataclass(frozen=True)
class IndexTwoParams:
    """Arithmetic data of an index-2 instance; b and c are None when the norm equation fails."""

    kind: ConstructionKind
    p: int
    p1: int
    m: int
    h: int
    b: Optional[int]
    c: Optional[int]
    p2: Optional[int] = None
    n: Optional[int] = None

    @property
    def N(self) -> int:
        if self.kind is ConstructionKind.TWO_PRIMES:
            return self.p1**self.m * self.p2**self.n
        return 2 * self.p1**self.m

    @property
    def f(self) -> int:
        return euler_phi(self.N) // 2

    @property
    def q(self) -> int:
        return self.p**self.f

    @property
    def radicand(self) -> int:
        return self.p1 * self.p2 if self.p2 is not None else self.p1

    def to_dict(self) -> Dict[str, Any]:
        return {
            "kind": self.kind.value,
            "p": self.p,
            "p1": self.p1,
            "p2": self.p2,
            "m": self.m,
            "n": self.n,
            "N": self.N,
            "f": self.f,
            "h": self.h,
            "b": self.b,
            "c": self.c,
            "v": format_power(self.p, self.f),
        }


@dataclass
class Condition:
    name: str
    holds: bool
    detail: str = ""

    def to_dict(self) -> Dict[str, Any]:
        return {"name": self.name, "holds": self.holds, "detail": self.detail}


@dataclass
class ConditionReport:
    """Per-hypothesis outcome of a condition check, plus the derived parameters."""

    conditions: List[Condition] = field(default_factory=list)
    params: Optional[IndexTwoParams] = None

    @property
    def holds(self) -> bool:
        return bool(self.conditions) and all(c.holds for c in self.conditions)

    @property
    def failed(self) -> List[str]:
        return [c.name for c in self.conditions if not c.holds]

    def add(self, name: str, holds: bool, detail: str = "") -> bool:
        self.conditions.append(Condition(name, bool(holds), detail))
        return bool(holds)

    def as_list(self) -> List[Dict[str, Any]]:
        return [c.to_dict() for c in self.conditions]


def _solve(
    p: int, h: int, D: int, mode: NormMode, f: int
) -> Tuple[Optional[int], Optional[int], str]:
    try:
        solution = solve_norm_equation(p, h, D, mode, f)
    except CyclotomeError as e:
        return None, None, str(e)
    return solution.b, solution.c, f"b = {solution.b}, c = {solution.c}"


def check_conditions_A(p: int, p1: int, p2: int, m: int, n: int) -> ConditionReport:
    """
    Check the hypotheses under which the two-prime set gives a strongly regular graph.

    Args:
        p: Characteristic
        p1: Prime with p1 = 1 (mod 4)
        p2: Prime with p2 = 3 (mod 4)
        m: Exponent of p1
        n: Exponent of p2

    Returns:
        ConditionReport; params is set whenever the class number could be computed
    """
    report = ConditionReport()
    if min(p, p1, p2, m, n) < 1:
        report.add("positive", False, "all inputs must be positive")
        return report
    primes = report.add(
        "primes",
        is_prime(p) and is_prime(p1) and is_prime(p2) and len({p, p1, p2}) == 3,
        f"p, p1, p2 = {p}, {p1}, {p2}",
    )
    report.add(
        "residues_mod_4", p1 % 4 == 1 and p2 % 4 == 3, f"p1 = {p1 % 4}, p2 = {p2 % 4} (mod 4)"
    )
    if not primes:
        return report

    N = p1**m * p2**n
    f = euler_phi(N) // 2
    ord1, ord2, ordN = mult_order(p, p1**m), mult_order(p, p2**n), mult_order(p, N)
    report.add("ord_p1m_full", ord1 == euler_phi(p1**m), f"ord = {ord1}")
    report.add("ord_p2n_full", ord2 == euler_phi(p2**n), f"ord = {ord2}")
    report.add("index_two", ordN == f, f"ord_N(p) = {ordN}, phi(N)/2 = {f}")

    h = class_number(p1 * p2)
    report.add("class_number_even", h % 2 == 0, f"h = {h}")
    b, c, detail = _solve(p, h, p1 * p2, NormMode.TWO_PRIMES, f)
    report.add("norm_units", b in (1, -1) and c in (1, -1), detail)
    if b is not None and h % 2 == 0:
        root = 2 * p ** (h // 2)
        report.add(
            "p1_p2_from_b",
            p1 == root + b and p2 == root - b,
            f"2p^(h/2) = {root}",
        )
        exponent = (p1 - 1) * (p2 - 1) // 4
        report.add(
            "congruence_m_free",
            (b * pow(p, exponent, p1 * p2) - root) % (p1 * p2) == 0,
            f"b*p^{exponent} = 2p^(h/2) (mod {p1 * p2})",
        )
    else:
        report.add("p1_p2_from_b", False, "needs b and an even class number")
        report.add("congruence_m_free", False, "needs b and an even class number")

    report.params = IndexTwoParams(
        kind=ConstructionKind.TWO_PRIMES, p=p, p1=p1, p2=p2, m=m, n=n, h=h, b=b, c=c
    )
    logger.info("conditions A %s: %s", (p, p1, p2, m, n), "hold" if report.holds else report.failed)
    return report


def check_conditions_B(p: int, p1: int, m: int) -> ConditionReport:
    """
    Check the hypotheses under which the one-prime set gives a skew or Paley type set.

    Args:
        p: Characteristic
        p1: Prime with p1 = 3 (mod 8), p1 != 3
        m: Exponent of p1

    Returns:
        ConditionReport; params is set whenever the class number could be computed
    """
    report = ConditionReport()
    if min(p, p1, m) < 1:
        report.add("positive", False, "all inputs must be positive")
        return report
    primes = report.add(
        "primes",
        is_prime(p) and is_prime(p1) and p != p1 and p != 2,
        f"p, p1 = {p}, {p1}",
    )
    report.add("p1_mod_8", p1 % 8 == 3 and p1 != 3, f"p1 = {p1 % 8} (mod 8)")
    if not primes:
        return report

    N = 2 * p1**m
    f = euler_phi(N) // 2
    h = class_number(p1)
    report.add("one_plus_p1", 1 + p1 == 4 * p**h, f"h = {h}, 4p^h = {4 * p**h}")
    ordN = mult_order(p, N)
    report.add("index_two", ordN == f, f"ord_N(p) = {ordN}, phi(N)/2 = {f}")

    b, c, detail = _solve(p, h, p1, NormMode.ONE_PRIME, f)
    if b is not None and (p1 - 1 - 2 * h) % 4 == 0:
        exponent = (p1 - 1 - 2 * h) // 4
        report.add(
            "congruence_m_free",
            (b * pow(p, exponent, p1) + 2) % p1 == 0,
            f"b*p^{exponent} = -2 (mod {p1})",
        )
    else:
        report.add("congruence_m_free", False, detail)
    report.add("norm_units", b in (1, -1) and c in (1, -1), detail)

    report.params = IndexTwoParams(kind=ConstructionKind.TWO_P1M, p=p, p1=p1, m=m, h=h, b=b, c=c)
    logger.info("conditions B %s: %s", (p, p1, m), "hold" if report.holds else report.failed)
    return report


@dataclass(eq=False)
class ConnectionSet:
    """A union of cyclotomic classes, D = union of C_i for i in indices."""

    setup: CycSetup
    indices: Tuple[int, ...]
    label: str = ""

    @cached_property
    def membership(self) -> np.ndarray:
        """Boolean map over packed elements; False at zero."""
        classes = self.setup.class_map()
        member = np.zeros(self.setup.N, dtype=bool)
        member[list(self.indices)] = True
        result = np.zeros(self.setup.field.q, dtype=bool)
        nonzero = classes >= 0
        result[nonzero] = member[classes[nonzero]]
        return result

    @cached_property
    def elements(self) -> np.ndarray:
        return np.flatnonzero(self.membership)

    @property
    def size(self) -> int:
        return len(self.indices) * self.setup.class_size

    def negated_indices(self) -> Tuple[int, ...]:
        shift = self.setup.field.negation_shift()
        return tuple(sorted((i + shift) % self.setup.N for i in self.indices))

    def is_symmetric(self) -> bool:
        negatives = self.setup.field.neg(self.elements)
        return bool(self.membership[negatives].all())


def _check_setup(setup: CycSetup, params: IndexTwoParams) -> None:
    spec = setup.field.spec
    if setup.N != params.N or spec.p != params.p or spec.f != params.f:
        raise SetupMismatch(
            f"setup GF({spec.p}^{spec.f}), N = {setup.N} does not match "
            f"GF({params.p}^{params.f}), N = {params.N}"
        )


def build_D_A(setup: CycSetup, params: IndexTwoParams, shift: int = 0) -> ConnectionSet:
    """
    The two-prime set: classes p2^n i + p1^m j (+ shift) for i < p1^(m-1), j < p2^(n-1).

    Args:
        setup: Setup with N = p1^m p2^n
        params: Two-prime parameters
        shift: Extra class offset (used for the scheme relations)

    Returns:
        ConnectionSet

    Raises:
        SetupMismatch: If setup and params disagree
    """
    _check_setup(setup, params)
    p1m, p2n = params.p1**params.m, params.p2**params.n
    indices = {
        (p2n * i + p1m * j + shift) % setup.N
        for i in range(params.p1 ** (params.m - 1))
        for j in range(params.p2 ** (params.n - 1))
    }
    return ConnectionSet(setup, tuple(sorted(indices)), label=f"A+{shift}" if shift else "A")


def j_set(p: int, p1: int) -> List[int]:
    """J = <p> u 2<p> u {0} modulo 2 p1."""
    subgroup = cyclic_subgroup(p, 2 * p1)
    return sorted({0, *subgroup, *(2 * x % (2 * p1) for x in subgroup)})


def build_D_B(setup: CycSetup, params: IndexTwoParams, coset: int = 0) -> ConnectionSet:
    """
    The one-prime set: classes 2i + p1^(m-1) j for i < p1^(m-1) and j in J.

    Coset 1 multiplies every index by -1, which realizes the labeling by the
    other coset of <p> in the unit group.

    Args:
        setup: Setup with N = 2 p1^m
        params: One-prime parameters
        coset: 0 or 1

    Returns:
        ConnectionSet of size (q - 1)/2

    Raises:
        SetupMismatch: If setup and params disagree
        SizeInvariantViolation: If the set does not have (q - 1)/2 elements
    """
    _check_setup(setup, params)
    if coset not in (0, 1):
        raise ValueError(f"coset must be 0 or 1, got {coset}")
    N = setup.N
    step = params.p1 ** (params.m - 1)
    unit = 1 if coset == 0 else N - 1
    indices = {
        (2 * i + step * j) * unit % N
        for i in range(step)
        for j in j_set(params.p, params.p1)
    }
    D = ConnectionSet(setup, tuple(sorted(indices)), label=f"B coset {coset}")
    if 2 * D.size != setup.field.q - 1:
        raise SizeInvariantViolation(f"|D| = {D.size}, expected {(setup.field.q - 1) // 2}")
    return D


def build_quadratic_residue_set(setup: CycSetup) -> ConnectionSet:
    """Nonzero squares: the even classes of an even order N."""
    if setup.N % 2:
        raise SetupMismatch(f"squares need an even class order, got N = {setup.N}")
    return ConnectionSet(setup, tuple(range(0, setup.N, 2)), label="squares")


@dataclass(frozen=True)
class SrgParameters:
    """Exact predicted parameters of the two-prime strongly regular graph."""

    v: int
    k: int
    lam: int
    mu: int
    r: int
    s: int

    def to_dict(self) -> Dict[str, Any]:
        return {
            "v": self.v,
            "k": self.k,
            "lambda": self.lam,
            "mu": self.mu,
            "r": self.r,
            "s": self.s,
        }


def _exact_div(numerator: int, denominator: int, what: str) -> int:
    quotient, remainder = divmod(numerator, denominator)
    if remainder:
        raise NonIntegral(f"{what} = {numerator}/{denominator} is not an integer")
    return quotient


def predicted_spectrum_A(params: IndexTwoParams) -> SrgParameters:
    """
    Closed-form restricted eigenvalues and SRG parameters of the two-prime graph.

    Raises:
        ConditionViolation: If b is not +-1 or h is odd
        NonIntegral: If an eigenvalue formula does not divide exactly
    """
    if params.kind is not ConstructionKind.TWO_PRIMES:
        raise ConditionViolation("predicted_spectrum_A needs two-prime parameters")
    if params.b not in (1, -1) or params.h % 2:
        raise ConditionViolation(f"b = {params.b}, h = {params.h}", ["norm_units"])
    p, f, h = params.p, params.f, params.h
    D = params.p1 * params.p2
    high = 2 * p ** ((f + h) // 2)
    low = p ** ((f - h) // 2)
    if params.b == 1:
        r = _exact_div(high - 1, D, "r")
        s = _exact_div(-high + low - 1, D, "s")
    else:
        s = _exact_div(-high - 1, D, "s")
        r = _exact_div(high - low - 1, D, "r")
    v = p**f
    k = _exact_div(v - 1, D, "k")
    mu = k + r * s
    return SrgParameters(v=v, k=k, lam=mu + r + s, mu=mu, r=r, s=s)


@dataclass
class SpectrumCase:
    """Which branch of the case analysis a shift a falls into, with its predicted value."""

    a: int
    i_a: int
    j_a: Optional[int]
    delta_i: Optional[int]
    delta_j: Optional[int]
    case_label: str
    predicted: Any

    def render(self) -> str:
        if isinstance(self.predicted, SurdValue):
            return self.predicted.render()
        return str(self.predicted)


def case_analysis_A(
    table: PeriodTable, params: IndexTwoParams, a: int, c_sign: Optional[int] = None
) -> SpectrumCase:
    """
    Predicted psi(gamma^a D) for the two-prime set from the four-case analysis.

    With i_a, j_a defined by p1^(m-1) | a + p2^n i and p2^(n-1) | a + p1^m j:
    (i) neither delta set, (ii) only delta_j, (iii) only delta_i, (iv) both.
    In case (i) the value depends on eta1(i_a) eta2(j_a) and on the sign of c
    attached to the labeling, which is taken from the Gauss sum comparison.

    Args:
        table: Period table of the instance (used to fix the sign of c)
        params: Two-prime parameters
        a: Shift modulo N
        c_sign: Sign of c if already known

    Returns:
        SpectrumCase with an integer prediction
    """
    if params.b is None or params.c is None:
        raise ConditionViolation("case analysis needs a norm-equation solution")
    if c_sign is None:
        c_sign = compare_gauss(table, params).sign
    p, p1, p2, m, n, f, h = params.p, params.p1, params.p2, params.m, params.n, params.f, params.h
    N = params.N
    a %= N
    mod_i, mod_j = p1 ** (m - 1), p2 ** (n - 1)
    p1m, p2n = p1**m, p2**n
    i = (-a * pow(p2n, -1, mod_i)) % mod_i if mod_i > 1 else 0
    j = (-a * pow(p1m, -1, mod_j)) % mod_j if mod_j > 1 else 0
    i_a = (a + p2n * i) // mod_i
    j_a = (a + p1m * j) // mod_j
    delta_i = int(i_a % p1 == 0)
    delta_j = int(j_a % p2 == 0)

    label = {(0, 0): "(i)", (0, 1): "(ii)", (1, 0): "(iii)", (1, 1): "(iv)"}[(delta_i, delta_j)]
    half_f = Fraction(p ** (f // 2))
    low = Fraction(p ** ((f - h) // 2))
    X = half_f * (p1 * delta_i - p2 * delta_j)
    X += low * Fraction(params.b, 2) * (p1 * delta_i - 1) * (p2 * delta_j - 1)
    if label == "(i)":
        kappa = legendre(p2, p1) ** n * legendre(p1, p2) ** m
        c_case = -c_sign * kappa * params.c
        X -= low * Fraction(c_case, 2) * p1 * p2 * legendre(i_a, p1) * legendre(j_a, p2)
    value = (X - 1) / (p1 * p2)
    if value.denominator != 1:
        raise NonIntegral(f"case {label} at a = {a} predicts {value}")
    return SpectrumCase(a, i_a, j_a, delta_i, delta_j, label, int(value))


def predicted_values_B(params: IndexTwoParams) -> Tuple[SurdValue, SurdValue]:
    """
    The two values (-1 +- p^((f-1)/2) sqrt(p*))/2 of the one-prime set.

    Rational when p = 1 (mod 4) and f is even; otherwise a conjugate pair.

    Raises:
        ConditionViolation: On two-prime parameters
    """
    if params.kind is not ConstructionKind.TWO_P1M:
        raise ConditionViolation("predicted_values_B needs one-prime parameters")
    p, f = params.p, params.f
    pstar = p if p % 4 == 1 else -p
    if f % 2 == 0:
        root = Fraction(p ** (f // 2), 2)
        return SurdValue(Fraction(-1, 2) + root), SurdValue(Fraction(-1, 2) - root)
    coeff = Fraction(p ** ((f - 1) // 2), 2)
    return (
        SurdValue(Fraction(-1, 2), coeff, pstar),
        SurdValue(Fraction(-1, 2), -coeff, pstar),
    )


def case_analysis_B(params: IndexTwoParams, a: int, orientation: int = 1) -> SpectrumCase:
    """
    Predicted psi(gamma^a D) for the one-prime set from the six-case analysis.

    i_a is given by a' + 2i = p1^(m-1) i_a with a' = orientation * a, and the
    cases are i_a = 0, i_a = p1, i_a in <p>, -<p>, 2<p>, -2<p> (mod 2 p1).
    Cases (i), (iii), (v) give (-1 + B)/2 and the rest (-1 - B)/2 with
    B = (-1)^((p-1)(f-1)/4) p^((f-1)/2) sqrt(p*).

    Args:
        params: One-prime parameters
        a: Shift modulo N
        orientation: +1 for coset 0, -1 for coset 1
    """
    if params.kind is not ConstructionKind.TWO_P1M:
        raise ConditionViolation("case_analysis_B needs one-prime parameters")
    p, p1, m, f = params.p, params.p1, params.m, params.f
    N = params.N
    shifted = orientation * a % N
    step = p1 ** (m - 1)
    i = (-shifted * pow(2, -1, step)) % step if step > 1 else 0
    i_a = ((shifted + 2 * i) // step) % (2 * p1)

    modulus = 2 * p1
    subgroup = set(cyclic_subgroup(p, modulus))
    if i_a == 0:
        label, sign = "(i)", 1
    elif i_a == p1:
        label, sign = "(ii)", -1
    elif i_a in subgroup:
        label, sign = "(iii)", 1
    elif (-i_a) % modulus in subgroup:
        label, sign = "(iv)", -1
    elif any(2 * x % modulus == i_a for x in subgroup):
        label, sign = "(v)", 1
    else:
        label, sign = "(vi)", -1

    pstar = p if p % 4 == 1 else -p
    b_sign = -1 if ((p - 1) // 2 * ((f - 1) // 2)) % 2 else 1
    coeff = Fraction(sign * b_sign * p ** ((f - 1) // 2), 2)
    value = SurdValue(Fraction(-1, 2), coeff, pstar)
    return SpectrumCase(a % N, i_a, None, None, None, label, value)


def build_scheme_relations(setup: CycSetup, params: IndexTwoParams) -> List[ConnectionSet]:
    """
    The p1*p2 shifts D_k of the two-prime set, offset p1^(m-1) p2^(n-1) k.

    Raises:
        PartitionViolation: If the relations do not partition the nonzero elements
    """
    if params.kind is not ConstructionKind.TWO_PRIMES:
        raise ConditionViolation("scheme relations need two-prime parameters")
    offset = params.p1 ** (params.m - 1) * params.p2 ** (params.n - 1)
    relations = [build_D_A(setup, params, shift=offset * k) for k in range(params.p1 * params.p2)]
    covered = np.zeros(setup.N, dtype=np.int64)
    for relation in relations:
        covered[list(relation.indices)] += 1
    if not np.all(covered == 1):
        raise PartitionViolation("scheme relations overlap or miss a class")
    return relations

