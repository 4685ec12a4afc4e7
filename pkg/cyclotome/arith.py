"""Elementary and quadratic number theory used by the index-2 constructions."""

import logging
from dataclasses import dataclass
from enum import Enum
from math import gcd, isqrt
from typing import Dict, Iterator, List, Tuple

import numpy as np
from sympy import factorint, isprime

from cyclotome.errors import NoSolution, NotCoprime, NotSquarefree, PCongruenceFails

logger = logging.getLogger(__name__)


class NormMode(Enum):
    """Which index-2 evaluation governs the sign of b."""

    TWO_PRIMES = "two_primes"  # D = p1*p2, b*p^((f-h)/2) = 2 (mod D)
    ONE_PRIME = "one_prime"  # D = p1,    b*p^((f-h)/2) = -2 (mod D)


@dataclass(frozen=True)
class NormSolution:
    """A solution of 4p^h = b^2 + D c^2 with b and c prime to p."""

    b: int
    c: int
    p: int
    h: int
    D: int

    def check(self) -> bool:
        """Return True if the norm identity holds exactly."""
        return 4 * self.p**self.h == self.b**2 + self.D * self.c**2


def factor(n: int) -> Dict[int, int]:
    """Prime factorization as a {prime: exponent} dict."""
    return factorint(n)


def is_prime(n: int) -> bool:
    return bool(isprime(n))


def is_squarefree(n: int) -> bool:
    return n >= 1 and all(e == 1 for e in factor(n).values())


def euler_phi(n: int) -> int:
    """
    Euler's totient.

    Args:
        n: Positive integer

    Returns:
        Number of units modulo n
    """
    if n < 1:
        raise ValueError(f"euler_phi needs n >= 1, got {n}")
    result = n
    for prime in factor(n):
        result = result // prime * (prime - 1)
    return result


def mult_order(a: int, n: int) -> int:
    """
    Multiplicative order of a modulo n.

    Factors phi(n) and strips prime factors from the exponent while a^t stays 1.

    Args:
        a: Integer coprime to n
        n: Modulus

    Returns:
        Least t >= 1 with a^t = 1 (mod n)

    Raises:
        NotCoprime: If gcd(a, n) != 1
    """
    if n == 1:
        return 1
    if gcd(a, n) != 1:
        raise NotCoprime(a, n)
    order = euler_phi(n)
    for prime, exponent in factor(order).items():
        for _ in range(exponent):
            if pow(a, order // prime, n) == 1:
                order //= prime
            else:
                break
    return order


def subgroup_index(p: int, N: int) -> int:
    """Index of <p> in the unit group of Z_N."""
    return euler_phi(N) // mult_order(p, N)


def cyclic_subgroup(p: int, N: int) -> List[int]:
    """Sorted elements of <p> modulo N."""
    if N == 1:
        return [0]
    elements = {1 % N}
    x = p % N
    while x not in elements:
        elements.add(x)
        x = x * p % N
    return sorted(elements)


def class_number(D: int) -> int:
    """
    Class number of Q(sqrt(-D)) by counting reduced primitive forms.

    The discriminant is -D when D = 3 (mod 4) and -4D otherwise. A form
    (a, b, c) is reduced when |b| <= a <= c, with b >= 0 whenever |b| = a
    or a = c.

    Args:
        D: Positive squarefree integer

    Returns:
        Number of reduced primitive forms of the discriminant

    Raises:
        NotSquarefree: If D is not squarefree
    """
    if D < 1 or not is_squarefree(D):
        raise NotSquarefree(f"{D} is not a positive squarefree integer")
    disc = -D if D % 4 == 3 else -4 * D
    count = 0
    a_max = isqrt(-disc // 3)
    for a in range(1, a_max + 1):
        # b in (-a, a] with b = disc (mod 2)
        b = np.arange(-a + 1, a + 1, dtype=np.int64)
        b = b[(b - disc) % 2 == 0]
        numerator = b * b - disc
        b = b[numerator % (4 * a) == 0]
        c = (b * b - disc) // (4 * a)
        keep = (c >= a) & ((b >= 0) | (c > a))
        b, c = b[keep], c[keep]
        primitive = np.gcd(np.gcd(a, b), c) == 1
        count += int(np.count_nonzero(primitive))
    logger.debug("class number of Q(sqrt(-%d)) = %d", D, count)
    return count


def _norm_candidates(p: int, h: int, D: int) -> Iterator[Tuple[int, int]]:
    target = 4 * p**h
    for c in range(1, isqrt(target // D) + 1):
        rest = target - D * c * c
        b = isqrt(rest)
        if b * b == rest:
            yield b, c


def solve_norm_equation(p: int, h: int, D: int, mode: NormMode, f: int) -> NormSolution:
    """
    Solve 4p^h = b^2 + D c^2 with the sign of b fixed by the governing congruence.

    Args:
        p: Prime
        h: Class number exponent
        D: Radicand (p1*p2 or p1)
        mode: NormMode selecting the congruence target +2 or -2 (mod D)
        f: Field degree

    Returns:
        NormSolution with the smallest c (c reported positive)

    Raises:
        NoSolution: If no (b, c) exists, (f - h) is odd, or no sign of b satisfies the congruence
        PCongruenceFails: If every solution has b or c divisible by p
    """
    if 4 * p**h < D:
        raise NoSolution(f"4*{p}^{h} < {D}")
    if (f - h) % 2:
        raise NoSolution(f"f - h = {f - h} is odd")

    target = 2 % D if mode is NormMode.TWO_PRIMES else -2 % D
    twist = pow(p, (f - h) // 2, D)
    found = False
    for b, c in _norm_candidates(p, h, D):
        found = True
        if b % p == 0 or c % p == 0:
            continue
        for signed in (b, -b):
            if signed * twist % D == target:
                return NormSolution(b=signed, c=c, p=p, h=h, D=D)
        logger.debug("(b, c) = (%d, %d) fails the sign congruence", b, c)

    if not found:
        raise NoSolution(f"4*{p}^{h} = b^2 + {D}c^2 has no solution")
    # every admissible solution failed either the p-congruence or the sign
    for b, c in _norm_candidates(p, h, D):
        if b % p and c % p:
            raise NoSolution(f"no sign of b gives b*{p}^{(f - h) // 2} = {target} (mod {D})")
    raise PCongruenceFails(f"every solution of 4*{p}^{h} = b^2 + {D}c^2 has p | bc")
