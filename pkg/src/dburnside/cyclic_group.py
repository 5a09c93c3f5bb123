"""The cyclic p-group C_{p^n} and the small arithmetic attached to it.

Everything is written additively: G = Z/p^n, and the subgroup of order p^m is
p^(n-m) Z / p^n Z.  A subgroup is therefore identified with its exponent m.
Automorphisms of a cyclic subquotient of order p^t are "multiply the fixed
generator by u" for a residue u coprime to p, so they are carried as plain
residues mod p^t.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import gcd

from sympy import isprime

__all__ = [
    "CyclicPGroup",
    "UnitModPK",
    "subgroup_exponents",
    "mobius_chain",
    "units_mod",
    "unit_mul",
    "unit_inv",
    "reduce_unit",
]


@dataclass(frozen=True, order=True)
class CyclicPGroup:
    p: int
    n: int

    def __post_init__(self):
        if not isinstance(self.p, int) or not isinstance(self.n, int):
            raise TypeError("p and n must be integers")
        if self.n < 0:
            raise ValueError(f"exponent n must be >= 0, got {self.n}")
        if not isprime(self.p):
            raise ValueError(f"{self.p} is not prime")

    @property
    def order(self) -> int:
        return self.p**self.n

    def modulus(self, t: int) -> int:
        """Order p^t of a subquotient with exponent gap t."""
        return self.p**t

    def quotient(self, N: int) -> "CyclicPGroup":
        """G/N for the subgroup of order p^N, again cyclic of order p^(n-N)."""
        if not 0 <= N <= self.n:
            raise ValueError(f"subgroup exponent {N} out of range 0..{self.n}")
        return CyclicPGroup(self.p, self.n - N)

    def __str__(self):
        return f"C_{self.p}^{self.n}" if self.n != 1 else f"C_{self.p}"


@dataclass(frozen=True, order=True)
class UnitModPK:
    """A unit of Z/p^t, i.e. an automorphism of a cyclic group of order p^t."""

    p: int
    t: int
    value: int = 1

    def __post_init__(self):
        if self.t < 0:
            raise ValueError("modulus exponent must be >= 0")
        m = self.p**self.t
        v = self.value % m if self.t else 1
        if self.t and gcd(v, self.p) != 1:
            raise ValueError(f"{self.value} is not a unit mod {self.p}^{self.t}")
        object.__setattr__(self, "value", v)

    @property
    def modulus(self) -> int:
        return self.p**self.t

    def __mul__(self, other: "UnitModPK") -> "UnitModPK":
        return unit_mul(self, other)

    def inverse(self) -> "UnitModPK":
        return unit_inv(self)

    def reduce(self, s: int) -> "UnitModPK":
        """Image under Z/p^t -> Z/p^s."""
        if not 0 <= s <= self.t:
            raise ValueError(f"cannot reduce mod p^{s} from p^{self.t}")
        return UnitModPK(self.p, s, self.value)


def subgroup_exponents(G: CyclicPGroup) -> list[int]:
    return list(range(G.n + 1))


def mobius_chain(a: int, b: int) -> int:
    """Möbius function of the chain 0 < 1 < ... < n."""
    if a > b:
        raise ValueError(f"mobius_chain needs a <= b, got ({a}, {b})")
    if a == b:
        return 1
    if b == a + 1:
        return -1
    return 0


def units_mod(G: CyclicPGroup, t: int) -> list[UnitModPK]:
    if not 0 <= t <= G.n:
        raise ValueError(f"t={t} out of range 0..{G.n}")
    if t == 0:
        return [UnitModPK(G.p, 0, 1)]
    m = G.p**t
    return [UnitModPK(G.p, t, v) for v in range(1, m) if v % G.p]


def unit_mul(a: UnitModPK, b: UnitModPK) -> UnitModPK:
    if (a.p, a.t) != (b.p, b.t):
        raise ValueError(f"moduli differ: {a.p}^{a.t} vs {b.p}^{b.t}")
    return UnitModPK(a.p, a.t, a.value * b.value)


def unit_inv(a: UnitModPK) -> UnitModPK:
    if a.t == 0:
        return a
    return UnitModPK(a.p, a.t, pow(a.value, -1, a.modulus))


def reduce_unit(p: int, t: int, u: int) -> int:
    """Plain-int helper: u reduced into 1..p^t-1, with 1 for the trivial quotient."""
    if t == 0:
        return 1
    return u % p**t
