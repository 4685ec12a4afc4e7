"""Parameter scans for the index-2 constructions and the catalog of known series."""

import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Any, Dict, Iterator, List, Optional, Tuple

from sympy import primerange

from cyclotome.arith import is_prime, mult_order
from cyclotome.constructions import (
    ConditionReport,
    ConstructionKind,
    check_conditions_A,
    check_conditions_B,
)
from cyclotome.utils import format_power

logger = logging.getLogger(__name__)

# two-prime series (p, p1, p2) and one-prime rows (p, p1) of the published tables
TABLE_A_SERIES: List[Tuple[int, int, int]] = [(2, 5, 3), (3, 5, 7), (3, 17, 19)]
TABLE_B_ROWS: List[Tuple[int, int]] = [(5, 19), (17, 67), (3, 107), (41, 163), (5, 499)]


@dataclass(frozen=True)
class ScanRow:
    """A parameter tuple that satisfies every hypothesis of its construction."""

    kind: ConstructionKind
    p: int
    p1: int
    h: int
    b: int
    m: int = 1
    p2: Optional[int] = None
    n: Optional[int] = None

    def key(self) -> Tuple[int, ...]:
        if self.kind is ConstructionKind.TWO_PRIMES:
            return (self.p, self.p1, self.p2, self.h, self.b)
        return (self.p, self.p1, self.h, self.m)

    def to_dict(self) -> Dict[str, Any]:
        row = {"kind": self.kind.value, "p": self.p, "p1": self.p1, "h": self.h, "b": self.b}
        row["m"] = self.m
        if self.kind is ConstructionKind.TWO_PRIMES:
            row["p2"] = self.p2
            row["n"] = self.n
        return row


def prime_powers(limit: int, min_exponent: int = 1) -> Iterator[Tuple[int, int, int]]:
    """(p, e, p^e) for primes p and e >= min_exponent with p^e <= limit, in increasing p^e."""
    found = []
    for p in primerange(2, max(limit, 1) + 1):
        e, value = min_exponent, p**min_exponent
        while value <= limit:
            found.append((value, p, e))
            e += 1
            value *= p
    for value, p, e in sorted(found):
        yield p, e, value


class ParameterScanner:
    """
    Enumerate admissible parameters by walking prime powers.

    For two primes, p1 p2 = 4p^h - 1 with p1 = 2p^(h/2) + b, so every
    candidate comes from a prime power P = p^(h/2) and a sign b. For one
    prime, p1 = 4p^h - 1. Cheap filters (primality, residues, orders) run
    before the class number is computed.

    Example:
        >>> scanner = ParameterScanner()
        >>> [row.key() for row in scanner.scan_a(100)]
        [(2, 5, 3, 2, 1), (3, 5, 7, 2, -1), (3, 17, 19, 4, -1)]
    """

    def __init__(self, threads: int = 1):
        """
        Initialize the scanner.

        Args:
            threads: Workers for the per-candidate condition checks
        """
        self.threads = max(1, threads)

    def _run(self, jobs: List[Tuple], check) -> List[ConditionReport]:
        if self.threads == 1 or len(jobs) < 2:
            return [check(*job) for job in jobs]
        with ThreadPoolExecutor(max_workers=self.threads) as pool:
            return list(pool.map(lambda job: check(*job), jobs))

    def candidates_a(self, bound: int) -> List[Tuple[int, int, int, int]]:
        """(p, p1, p2, b) passing the cheap two-prime filters with p1 <= bound."""
        found = []
        for p, half_h, P in prime_powers((bound + 1) // 2):
            root = 2 * P
            for b in (1, -1):
                p1, p2 = root + b, root - b
                if p1 > bound or p1 % 4 != 1 or p2 % 4 != 3:
                    continue
                if p in (p1, p2) or not (is_prime(p1) and is_prime(p2)):
                    continue
                if mult_order(p, p1 * p2) != (p1 - 1) * (p2 - 1) // 2:
                    continue
                logger.debug("two-prime candidate p = %d, h = %d, b = %d", p, 2 * half_h, b)
                found.append((p, p1, p2, b))
        return found

    def scan_a(self, bound: int, m: int = 1, n: int = 1) -> List[ScanRow]:
        """
        Every (p, p1, p2) with p1 <= bound satisfying the two-prime hypotheses.

        Args:
            bound: Largest p1
            m: Exponent of p1
            n: Exponent of p2

        Returns:
            Rows sorted by (p1 p2, p)
        """
        candidates = self.candidates_a(bound)
        reports = self._run([(p, p1, p2, m, n) for p, p1, p2, _ in candidates], check_conditions_A)
        rows = [
            ScanRow(ConstructionKind.TWO_PRIMES, p, p1, r.params.h, r.params.b, m, p2, n)
            for (p, p1, p2, _), r in zip(candidates, reports)
            if r.holds
        ]
        rows.sort(key=lambda row: (row.p1 * row.p2, row.p))
        logger.info(
            "two-prime scan up to %d: %d candidates, %d rows", bound, len(candidates), len(rows)
        )
        return rows

    def candidates_b(self, bound: int) -> List[Tuple[int, int, int]]:
        """(p, p1, h) with p1 = 4p^h - 1 <= bound prime, p1 = 3 (mod 8), p odd."""
        found = []
        for p, h, P in prime_powers((bound + 1) // 4):
            p1 = 4 * P - 1
            if p == 2 or p1 == 3 or p1 % 8 != 3 or not is_prime(p1):
                continue
            if mult_order(p, 2 * p1) != (p1 - 1) // 2:
                continue
            logger.debug("one-prime candidate p = %d, p1 = %d, h = %d", p, p1, h)
            found.append((p, p1, h))
        return found

    def scan_b(self, bound: int, m: int = 1) -> List[ScanRow]:
        """
        Every (p, p1) with p1 <= bound satisfying the one-prime hypotheses.

        Returns:
            Rows sorted by (p1, p)
        """
        candidates = self.candidates_b(bound)
        reports = self._run([(p, p1, m) for p, p1, _ in candidates], check_conditions_B)
        rows = [
            ScanRow(ConstructionKind.TWO_P1M, p, p1, r.params.h, r.params.b, m)
            for (p, p1, _), r in zip(candidates, reports)
            if r.holds
        ]
        rows.sort(key=lambda row: (row.p1, row.p))
        logger.info(
            "one-prime scan up to %d: %d candidates, %d rows", bound, len(candidates), len(rows)
        )
        return rows


def symbolic_spectrum_A(p: int, p1: int, p2: int, f: int, h: int, b: int) -> Dict[str, str]:
    """k, r, s of the two-prime graph as unexpanded expressions."""
    D = p1 * p2
    high = f"2*{format_power(p, (f + h) // 2)}"
    low = format_power(p, (f - h) // 2)
    if b == 1:
        r, s = f"({high}-1)/{D}", f"(-{high}+{low}-1)/{D}"
    else:
        r, s = f"({high}-{low}-1)/{D}", f"(-{high}-1)/{D}"
    return {"k": f"({format_power(p, f)}-1)/{D}", "r": r, "s": s}


def symbolic_values_B(p: int, f: int) -> Dict[str, str]:
    """The two character values of the one-prime set as unexpanded expressions."""
    pstar = p if p % 4 == 1 else -p
    return {
        "k": f"({format_power(p, f)}-1)/2",
        "values": f"(-1+-{format_power(p, (f - 1) // 2)}*sqrt({pstar}))/2",
    }


def table_rows() -> List[Dict[str, Any]]:
    """
    Condition-level rows for the known series.

    The two-prime series run over (m, n) in {1, 2}^2 and the one-prime rows
    over m in {1, 2, 3}. Only arithmetic is done; no field is built.
    """
    rows = []
    for p, p1, p2 in TABLE_A_SERIES:
        for m in (1, 2):
            for n in (1, 2):
                report = check_conditions_A(p, p1, p2, m, n)
                params = report.params
                row = params.to_dict()
                row.update({"holds": report.holds, "failed": report.failed})
                if report.holds:
                    row.update(symbolic_spectrum_A(p, p1, p2, params.f, params.h, params.b))
                rows.append(row)
    for p, p1 in TABLE_B_ROWS:
        for m in (1, 2, 3):
            report = check_conditions_B(p, p1, m)
            params = report.params
            row = params.to_dict()
            row.update({"holds": report.holds, "failed": report.failed})
            if report.holds:
                row.update(symbolic_values_B(p, params.f))
            rows.append(row)
    return rows
