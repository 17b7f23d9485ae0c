"""Closed forms for the 2 x 2 diagonal: exactly 2*phi(k) - 1 classes attain
max |entry| = k on both the matrix and its inverse.

The construction labels each class by a determinant sign and a unit residue:
for every (eps, b) except (-1, 1) there is one representative

    [[a, b],
     [c, k]]       c = (-eps * b^-1) mod k,   a = (eps + b*c) / k

with positive entries and k strictly largest.  The excluded label would force
a = 0, which a zerofree matrix cannot have.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import gcd

from .matrix import IntMatrix


def totient(k: int) -> int:
    """Euler's phi: count of 1 <= j <= k coprime to k."""
    if k < 1:
        raise ValueError("totient is defined for positive integers")
    result = k
    m = k
    p = 2
    while p * p <= m:
        if m % p == 0:
            while m % p == 0:
                m //= p
            result -= result // p
        p += 1
    if m > 1:
        result -= result // m
    return result


def prop5_count(k: int) -> int:
    """Number of 2 x 2 classes with alpha = beta = k, for k >= 2."""
    if k < 2:
        raise ValueError("the diagonal count formula needs k >= 2")
    return 2 * totient(k) - 1


@dataclass(frozen=True)
class Prop5Label:
    """(determinant sign, unit residue) addressing one diagonal class."""

    epsilon: int
    b: int
    k: int

    def __post_init__(self):
        if self.epsilon not in (1, -1):
            raise ValueError("epsilon must be +1 or -1")
        if not 1 <= self.b < self.k:
            raise ValueError("b must satisfy 1 <= b < k")
        if gcd(self.b, self.k) != 1:
            raise ValueError("b must be a unit modulo k")
        if (self.epsilon, self.b) == (-1, 1):
            raise ValueError("(-1, 1) is the one unrealizable label")


def prop5_enumerate(k: int) -> list[tuple[Prop5Label, IntMatrix]]:
    """All 2*phi(k) - 1 labeled normal forms [[a, b], [c, k]] for this k.

    Each matrix is unimodular with determinant epsilon, zerofree, has all
    entries positive with d = k strictly largest, and the matrices represent
    pairwise inequivalent classes.
    """
    if k < 2:
        raise ValueError("enumeration needs k >= 2")
    out = []
    units = [b for b in range(1, k) if gcd(b, k) == 1]
    for epsilon in (1, -1):
        for b in units:
            if (epsilon, b) == (-1, 1):
                continue
            b_inv = pow(b, -1, k)
            c = (-epsilon * b_inv) % k
            num = epsilon + b * c
            if num % k != 0:
                raise AssertionError(f"a*d = {num} is not divisible by d = {k}")
            a = num // k
            out.append((Prop5Label(epsilon, b, k), IntMatrix.from_rows([[a, b], [c, k]])))
    return out
