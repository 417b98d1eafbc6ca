"""Exact arithmetic in Z[zeta], zeta a primitive 2p-th root of unity.

This is the smallest ring that holds every phase occurring in the
construction: integer powers of gamma = exp(2*pi*i/p) sit at even
exponents of zeta, their square roots (and +/-i when p = 2) at odd
exponents.  Elements are kept in canonical form modulo the 2p-th
cyclotomic polynomial, so equality is coefficient equality and the
"is this a plain integer" question is decidable.
"""

from __future__ import annotations

import cmath
from dataclasses import dataclass
from functools import lru_cache


def canonical_degree(p: int) -> int:
    """Degree of the 2p-th cyclotomic polynomial (2 for p=2, p-1 for odd p)."""
    return 2 if p == 2 else p - 1


@lru_cache(maxsize=None)
def cyclotomic_poly(p: int) -> tuple[int, ...]:
    """Ascending coefficients of Phi_2p over Z.

    Phi_4 = x^2 + 1; for odd prime p, Phi_2p = x^(p-1) - x^(p-2) + ... + 1.
    """
    if p == 2:
        return (1, 0, 1)
    return tuple((-1) ** j for j in range(p))


def _reduce(p: int, coeffs: list[int]) -> tuple[int, ...]:
    # plain remainder mod the monic Phi_2p, exact over Z
    phi = cyclotomic_poly(p)
    deg = len(phi) - 1
    c = list(coeffs)
    if len(c) < deg:
        c += [0] * (deg - len(c))
    for d in range(len(c) - 1, deg - 1, -1):
        top = c[d]
        if top:
            c[d] = 0
            for j in range(deg):
                c[d - deg + j] -= top * phi[j]
    return tuple(c[:deg])


@dataclass(frozen=True)
class PhaseExponent:
    """A root of unity zeta_2p^t stored as the exponent t mod 2p.

    Multiplying two phases adds the exponents; ``denom`` is always 2p.
    """

    t: int
    denom: int

    def __post_init__(self) -> None:
        if self.denom <= 0 or self.denom % 2:
            raise ValueError(f"denominator must be a positive even integer, got {self.denom}")
        object.__setattr__(self, "t", self.t % self.denom)

    def combine(self, other: PhaseExponent) -> PhaseExponent:
        if self.denom != other.denom:
            raise ValueError("phase exponents over different roots of unity")
        return PhaseExponent(self.t + other.t, self.denom)

    def times(self, k: int) -> PhaseExponent:
        """k-th power of the phase."""
        return PhaseExponent(self.t * k, self.denom)

    def conjugate(self) -> PhaseExponent:
        return PhaseExponent(-self.t, self.denom)

    def to_complex(self) -> complex:
        return cmath.exp(2j * cmath.pi * self.t / self.denom)


class CycInt:
    """Canonical element of Z[zeta_2p], zeta_2p = exp(i*pi/p).

    Coefficients are arbitrary-precision integers over the power basis
    1, zeta, ..., zeta^(d-1) with d = deg Phi_2p.  All operations are
    exact; floats only appear through :meth:`to_complex`.
    """

    __slots__ = ("p", "coeffs")

    def __init__(self, p: int, coeffs) -> None:
        self.p = p
        coeffs = list(coeffs)
        if len(coeffs) == canonical_degree(p):
            self.coeffs = tuple(coeffs)
        else:
            self.coeffs = _reduce(p, coeffs)

    # -- constructors ---------------------------------------------------

    @classmethod
    def zero(cls, p: int) -> CycInt:
        return cls(p, [0] * canonical_degree(p))

    @classmethod
    def one(cls, p: int) -> CycInt:
        return cls.integer(p, 1)

    @classmethod
    def integer(cls, p: int, n: int) -> CycInt:
        c = [0] * canonical_degree(p)
        c[0] = n
        return cls(p, c)

    @classmethod
    def from_phase(cls, p: int, t: int | PhaseExponent) -> CycInt:
        """The monomial zeta_2p^t, reduced to canonical form."""
        if isinstance(t, PhaseExponent):
            if t.denom != 2 * p:
                raise ValueError("phase exponent denominator does not match 2p")
            t = t.t
        t %= 2 * p
        return cls(p, [0] * t + [1])

    @classmethod
    def from_exponent_counts(cls, p: int, counts) -> CycInt:
        """Sum of counts[t] copies of zeta_2p^t over t = 0..2p-1."""
        counts = list(counts)
        if len(counts) > 2 * p:
            raise ValueError("counts vector longer than 2p")
        return cls(p, counts)

    # -- ring operations ------------------------------------------------

    def _check(self, other: CycInt) -> None:
        if not isinstance(other, CycInt):
            raise TypeError(f"expected CycInt, got {type(other).__name__}")
        if self.p != other.p:
            raise ValueError("operands live in different cyclotomic rings")

    def __add__(self, other: CycInt) -> CycInt:
        self._check(other)
        return CycInt(self.p, [a + b for a, b in zip(self.coeffs, other.coeffs)])

    def __sub__(self, other: CycInt) -> CycInt:
        self._check(other)
        return CycInt(self.p, [a - b for a, b in zip(self.coeffs, other.coeffs)])

    def __neg__(self) -> CycInt:
        return CycInt(self.p, [-a for a in self.coeffs])

    def __mul__(self, other):
        if isinstance(other, int):
            return CycInt(self.p, [a * other for a in self.coeffs])
        self._check(other)
        a, b = self.coeffs, other.coeffs
        prod = [0] * (len(a) + len(b) - 1)
        for i, ai in enumerate(a):
            if ai:
                for j, bj in enumerate(b):
                    prod[i + j] += ai * bj
        return CycInt(self.p, prod)

    __rmul__ = __mul__

    def conjugate(self) -> CycInt:
        """Complex conjugation, zeta^k -> zeta^(2p-k)."""
        two_p = 2 * self.p
        out = [0] * two_p
        for k, c in enumerate(self.coeffs):
            if c:
                out[(-k) % two_p] += c
        return CycInt(self.p, out)

    def abs_sq(self) -> CycInt:
        return self * self.conjugate()

    # -- views ------------------------------------------------------------

    def as_integer(self) -> int | None:
        """The rational-integer value, or None if the element is not one."""
        if any(self.coeffs[1:]):
            return None
        return self.coeffs[0]

    def is_zero(self) -> bool:
        return not any(self.coeffs)

    def to_complex(self) -> complex:
        zeta = cmath.exp(1j * cmath.pi / self.p)
        return sum(c * zeta**k for k, c in enumerate(self.coeffs) if c) + 0j

    def __eq__(self, other) -> bool:
        if isinstance(other, int):
            return self.as_integer() == other
        if not isinstance(other, CycInt):
            return NotImplemented
        return self.p == other.p and self.coeffs == other.coeffs

    def __hash__(self) -> int:
        return hash((self.p, self.coeffs))

    def __repr__(self) -> str:
        terms = []
        for k, c in enumerate(self.coeffs):
            if not c:
                continue
            if k == 0:
                terms.append(str(c))
            else:
                mag = "" if c == 1 else ("-" if c == -1 else f"{c}*")
                terms.append(f"{mag}z{2 * self.p}^{k}" if k > 1 else f"{mag}z{2 * self.p}")
        body = " + ".join(terms).replace("+ -", "- ") if terms else "0"
        return f"CycInt(p={self.p}: {body})"


def from_phase(p: int, t: int | PhaseExponent) -> CycInt:
    """Module-level alias for :meth:`CycInt.from_phase`."""
    return CycInt.from_phase(p, t)


def phase_sum(p: int, exponents) -> CycInt:
    """Exact sum of zeta_2p^t over an iterable of exponents."""
    counts = [0] * (2 * p)
    for t in exponents:
        counts[t % (2 * p)] += 1
    return CycInt.from_exponent_counts(p, counts)
