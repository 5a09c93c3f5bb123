"""Subgroups of G x G for cyclic G, in Goursat form.

A subgroup L <= G x G is stored as ``(i, j; k, l)_u``:

* ``(i, j)`` is the left section P_1(L) >= K_1(L) (as subgroup exponents),
* ``(k, l)`` is the right section P_2(L) >= K_2(L),
* ``u`` is the isomorphism P_2/K_2 -> P_1/K_1 sending the fixed generator of
  the right subquotient to ``u`` times the fixed generator of the left one.

With G = Z/p^n written additively, the fixed generator of S_i/S_j is the image
of p^(n-i).  Under that convention every isomorphism induced by a Goursat
isomorphism on a sub-subquotient keeps the same residue, and the Zassenhaus
isomorphism between the two middle subquotients is the residue 1.  The star
product then reduces to exponent arithmetic plus one modular product.
"""

from __future__ import annotations

from functools import lru_cache
from typing import NamedTuple

from .cyclic_group import CyclicPGroup, reduce_unit

__all__ = [
    "Quintuple",
    "Section",
    "validate",
    "enumerate_basis",
    "basis_count",
    "basis_key",
    "opposite",
    "star",
    "gamma",
    "diagonal",
    "is_bifree",
    "in_ideal",
    "is_lifted",
    "parse_quintuple",
]


class Section(NamedTuple):
    top: int
    bottom: int


class Quintuple(NamedTuple):
    i: int
    j: int
    k: int
    l: int  # noqa: E741
    u: int = 1

    @property
    def gap(self) -> int:
        return self.i - self.j

    @property
    def left(self) -> Section:
        return Section(self.i, self.j)

    @property
    def right(self) -> Section:
        return Section(self.k, self.l)

    def __str__(self):
        return f"({self.i},{self.j};{self.k},{self.l})_{self.u}"

    def to_list(self) -> list[int]:
        return [self.i, self.j, self.k, self.l, self.u]


def validate(G: CyclicPGroup, q: Quintuple) -> Quintuple:
    i, j, k, l, u = q
    if not all(0 <= e <= G.n for e in (i, j, k, l)):
        raise ValueError(f"{q}: exponents must lie in 0..{G.n}")
    if j > i or l > k:
        raise ValueError(f"{q}: kernel above projection")
    if i - j != k - l:
        raise ValueError(f"{q}: subquotients of different order")
    t = i - j
    if t == 0:
        if u != 1:
            raise ValueError(f"{q}: trivial subquotient needs u = 1")
    elif not (1 <= u < G.p**t and u % G.p):
        raise ValueError(f"{q}: {u} is not a reduced unit mod {G.p}^{t}")
    return q


def basis_key(q: Quintuple) -> tuple[int, int, int, int]:
    return (q.i - q.j, q.i, q.k, q.u)


@lru_cache(maxsize=None)
def _basis(G: CyclicPGroup) -> tuple[Quintuple, ...]:
    out = []
    for t in range(G.n + 1):
        units = [1] if t == 0 else [v for v in range(1, G.p**t) if v % G.p]
        for i in range(t, G.n + 1):
            for k in range(t, G.n + 1):
                for u in units:
                    out.append(Quintuple(i, i - t, k, k - t, u))
    out.sort(key=basis_key)
    return tuple(out)


def enumerate_basis(G: CyclicPGroup) -> list[Quintuple]:
    """All subgroups of G x G, in canonical order."""
    return list(_basis(G))


def basis_count(G: CyclicPGroup) -> int:
    total = 0
    for t in range(G.n + 1):
        phi = 1 if t == 0 else G.p**t - G.p ** (t - 1)
        total += (G.n - t + 1) ** 2 * phi
    return total


def opposite(G: CyclicPGroup, q: Quintuple) -> Quintuple:
    t = q.i - q.j
    u = 1 if t == 0 else pow(q.u, -1, G.p**t)
    return Quintuple(q.k, q.l, q.i, q.j, u)


def star(G: CyclicPGroup, L: Quintuple, M: Quintuple) -> Quintuple:
    """Composition L * M of subgroups of G x G."""
    i1, j1, i2, j2, u = L
    i3, j3, i4, j4, v = M
    m = min(i2, i3)
    p2 = max(m, j2)
    k2 = max(min(i2, j3), j2)
    p3 = max(m, j3)
    k3 = max(min(i3, j2), j3)
    # transport the middle sections outward through the two Goursat maps
    p1 = j1 + (p2 - j2)
    k1 = j1 + (k2 - j2)
    p4 = j4 + (p3 - j3)
    k4 = j4 + (k3 - j3)
    w = reduce_unit(G.p, p1 - k1, u * v)
    return Quintuple(p1, k1, p4, k4, w)


def gamma(G: CyclicPGroup, L: Quintuple, M: Quintuple) -> int:
    """|G| / |P_2(L) P_1(M)|, the number of double cosets in the Mackey sum."""
    return G.p ** (G.n - max(L.k, M.i))


def diagonal(m: int, u: int = 1) -> Quintuple:
    """Delta_u(S_m) = (m, 0; m, 0)_u."""
    return Quintuple(m, 0, m, 0, u)


def is_bifree(q: Quintuple) -> bool:
    return q.j == 0 and q.l == 0


def in_ideal(G: CyclicPGroup, q: Quintuple) -> bool:
    """Whether q spans part of I_G, i.e. its subquotients are smaller than G."""
    return q.i - q.j < G.n


def is_lifted(q: Quintuple, N: int = 1) -> bool:
    """Whether N x N <= q, i.e. q is inflated from G/N."""
    return q.j >= N and q.l >= N


def parse_quintuple(text: str) -> Quintuple:
    """Parse ``"(i,j;k,l)_u"`` or ``"(i,j;k,l)"``."""
    s = text.strip().replace(" ", "")
    u = 1
    if "_" in s:
        s, tail = s.rsplit("_", 1)
        u = int(tail)
    if not (s.startswith("(") and s.endswith(")")):
        raise ValueError(f"cannot parse quintuple {text!r}")
    left, right = s[1:-1].split(";")
    i, j = (int(x) for x in left.split(","))
    k, l = (int(x) for x in right.split(","))  # noqa: E741
    return Quintuple(i, j, k, l, u)
