"""The double Burnside ring B(G, G) of a cyclic p-group.

For abelian G the Mackey formula collapses to a single term with multiplicity
gamma(L, M), so B(G, G) is the twisted semigroup algebra on subgroups of
G x G with ``L *' M = gamma(L, M) (L * M)``.  Elements are sparse integer
combinations of :class:`~dburnside.goursat.Quintuple`.

Inflation and deflation are never materialised as elements of B(G, G/N);
``Inf o a o Def`` is computed by shifting every exponent of ``a`` up by N,
which is exactly how the inflated biset decomposes.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from functools import lru_cache
from types import MappingProxyType
from typing import Iterable, Mapping

from .cyclic_group import CyclicPGroup, UnitModPK, mobius_chain
from .goursat import (
    Quintuple,
    basis_key,
    diagonal,
    enumerate_basis,
    gamma,
    opposite,
    star,
    validate,
)

__all__ = [
    "RingElement",
    "SignedOuterAut",
    "identity",
    "zero",
    "basis_element",
    "mul",
    "dual",
    "j_idem",
    "f_idem",
    "lift_basis",
    "rng_embed",
    "dbinf_unit",
    "rho",
    "zout_mul",
    "eta",
    "iota",
    "dbiso",
    "h_db_generators",
    "unit_inverse",
    "is_unit",
]


@lru_cache(maxsize=None)
def _products(G: CyclicPGroup) -> dict[tuple[Quintuple, Quintuple], tuple[int, Quintuple]]:
    basis = enumerate_basis(G)
    return {(L, M): (gamma(G, L, M), star(G, L, M)) for L in basis for M in basis}


@lru_cache(maxsize=None)
def _opposites(G: CyclicPGroup) -> dict[Quintuple, Quintuple]:
    return {q: opposite(G, q) for q in enumerate_basis(G)}


class RingElement:
    """An immutable element of B(G, G) with no stored zero coefficients."""

    __slots__ = ("group", "_coeffs", "_hash")

    def __init__(self, group: CyclicPGroup, coeffs: Mapping[Quintuple, int] | None = None, *, check: bool = True):
        clean: dict[Quintuple, int] = {}
        for q, c in (coeffs or {}).items():
            if c:
                q = Quintuple(*q)
                if check:
                    validate(group, q)
                clean[q] = int(c)
        self.group = group
        self._coeffs = clean
        self._hash = None

    @property
    def coeffs(self) -> Mapping[Quintuple, int]:
        return MappingProxyType(self._coeffs)

    def __getitem__(self, q: Quintuple) -> int:
        return self._coeffs.get(Quintuple(*q), 0)

    def __iter__(self):
        return iter(self.terms())

    def __len__(self):
        return len(self._coeffs)

    def __bool__(self):
        return bool(self._coeffs)

    def terms(self) -> list[tuple[Quintuple, int]]:
        """Terms in canonical basis order."""
        return sorted(self._coeffs.items(), key=lambda kv: basis_key(kv[0]))

    def support(self) -> set[Quintuple]:
        return set(self._coeffs)

    def _same(self, other: "RingElement"):
        if not isinstance(other, RingElement):
            raise TypeError(f"expected RingElement, got {type(other).__name__}")
        if other.group != self.group:
            raise ValueError(f"group mismatch: {self.group} vs {other.group}")

    def __eq__(self, other):
        if not isinstance(other, RingElement):
            return NotImplemented
        return self.group == other.group and self._coeffs == other._coeffs

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.group, frozenset(self._coeffs.items())))
        return self._hash

    def __add__(self, other: "RingElement") -> "RingElement":
        self._same(other)
        out = dict(self._coeffs)
        for q, c in other._coeffs.items():
            out[q] = out.get(q, 0) + c
        return RingElement(self.group, out, check=False)

    def __neg__(self) -> "RingElement":
        return RingElement(self.group, {q: -c for q, c in self._coeffs.items()}, check=False)

    def __sub__(self, other: "RingElement") -> "RingElement":
        return self + (-other)

    def scale(self, k: int) -> "RingElement":
        return RingElement(self.group, {q: k * c for q, c in self._coeffs.items()}, check=False)

    def __mul__(self, other):
        if isinstance(other, int):
            return self.scale(other)
        return mul(self, other)

    def __rmul__(self, other):
        if isinstance(other, int):
            return self.scale(other)
        return NotImplemented

    def __pow__(self, k: int) -> "RingElement":
        if k < 0:
            raise ValueError("negative powers are not supported")
        out = identity(self.group)
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def dual(self) -> "RingElement":
        return dual(self)

    def __repr__(self):
        if not self._coeffs:
            return f"RingElement({self.group}, 0)"
        body = " + ".join(f"{c}*{q}" for q, c in self.terms())
        return f"RingElement({self.group}, {body})"

    # serialisation ----------------------------------------------------

    def to_json_obj(self) -> dict:
        return {
            "p": self.group.p,
            "n": self.group.n,
            "terms": [{"q": q.to_list(), "c": c} for q, c in self.terms()],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_json_obj())

    @classmethod
    def from_json_obj(cls, obj: Mapping) -> "RingElement":
        try:
            G = CyclicPGroup(int(obj["p"]), int(obj["n"]))
            coeffs: dict[Quintuple, int] = {}
            for term in obj["terms"]:
                if len(term["q"]) != 5:
                    raise ValueError(f"quintuple needs 5 integers, got {term['q']}")
                q = Quintuple(*(int(x) for x in term["q"]))
                coeffs[q] = coeffs.get(q, 0) + int(term["c"])
        except (KeyError, TypeError) as exc:
            raise ValueError(f"malformed ring element: {exc}") from exc
        return cls(G, coeffs)

    @classmethod
    def from_json(cls, text: str) -> "RingElement":
        return cls.from_json_obj(json.loads(text))


@dataclass(frozen=True)
class SignedOuterAut:
    """epsilon * phi in <-Id, Out(G)>; Out(G) = Aut(G) = (Z/p^n)^x here."""

    sign: int
    aut: UnitModPK

    def __post_init__(self):
        if self.sign not in (1, -1):
            raise ValueError("sign must be +1 or -1")

    def __mul__(self, other: "SignedOuterAut") -> "SignedOuterAut":
        return SignedOuterAut(self.sign * other.sign, self.aut * other.aut)


def zero(G: CyclicPGroup) -> RingElement:
    return RingElement(G)


def basis_element(G: CyclicPGroup, q: Quintuple, c: int = 1) -> RingElement:
    return RingElement(G, {Quintuple(*q): c})


def identity(G: CyclicPGroup) -> RingElement:
    return RingElement(G, {diagonal(G.n): 1}, check=False)


def mul(a: RingElement, b: RingElement) -> RingElement:
    a._same(b)
    table = _products(a.group)
    out: dict[Quintuple, int] = {}
    for L, x in a._coeffs.items():
        for M, y in b._coeffs.items():
            g, LM = table[L, M]
            out[LM] = out.get(LM, 0) + g * x * y
    return RingElement(a.group, out, check=False)


def dual(a: RingElement) -> RingElement:
    opp = _opposites(a.group)
    return RingElement(a.group, {opp[q]: c for q, c in a._coeffs.items()}, check=False)


def _check_normal(G: CyclicPGroup, N: int):
    if not 0 <= N <= G.n:
        raise ValueError(f"subgroup exponent {N} out of range 0..{G.n}")


def j_idem(G: CyclicPGroup, N: int) -> RingElement:
    """Inf o Def through G/N: the subgroup with full projections and kernels N."""
    _check_normal(G, N)
    return RingElement(G, {Quintuple(G.n, N, G.n, N): 1}, check=False)


def f_idem(G: CyclicPGroup, N: int, *, via_mobius: bool = False) -> RingElement:
    """The primitive idempotent f_N = sum_{M >= N} mu(N, M) j_M.

    The chain of subgroups makes this j_N - j_{N+1}; ``via_mobius`` evaluates
    the general Möbius sum instead, for cross-checking.
    """
    _check_normal(G, N)
    if via_mobius:
        out = zero(G)
        for M in range(N, G.n + 1):
            out = out + j_idem(G, M).scale(mobius_chain(N, M))
        return out
    if N == G.n:
        return j_idem(G, N)
    return j_idem(G, N) - j_idem(G, N + 1)


def lift_basis(G: CyclicPGroup, N: int, q: Quintuple) -> Quintuple:
    _check_normal(G, N)
    validate(G.quotient(N), q)
    return Quintuple(q.i + N, q.j + N, q.k + N, q.l + N, q.u)


def rng_embed(G: CyclicPGroup, N: int, a: RingElement) -> RingElement:
    """a -> Inf o a o Def; additive and multiplicative, sends 1 to j_N."""
    if a.group != G.quotient(N):
        raise ValueError(f"element lives over {a.group}, expected {G.quotient(N)}")
    return RingElement(G, {lift_basis(G, N, q): c for q, c in a._coeffs.items()}, check=False)


def dbinf_unit(G: CyclicPGroup, N: int, u: RingElement, *, check: bool = True) -> RingElement:
    """dBInf: u -> 1 + Inf o (u - 1) o Def."""
    Q = G.quotient(N)
    if check and not (u * dual(u) == identity(Q) or is_unit(u)):
        raise ValueError("dbinf_unit needs a unit of B(G/N, G/N)")
    return identity(G) + rng_embed(G, N, u - identity(Q))


def rho(a: RingElement) -> dict[int, int]:
    """Projection onto Z Out(G): coefficients of the full diagonals, keyed by unit."""
    n = a.group.n
    return {q.u: c for q, c in a._coeffs.items() if q.i == n and q.j == 0}


def zout_mul(G: CyclicPGroup, x: Mapping[int, int], y: Mapping[int, int]) -> dict[int, int]:
    """Product in the group ring Z[(Z/p^n)^x]."""
    m = G.order
    out: dict[int, int] = {}
    for u, a in x.items():
        for v, b in y.items():
            w = (u * v) % m if G.n else 1
            out[w] = out.get(w, 0) + a * b
    return {w: c for w, c in out.items() if c}


def eta(G: CyclicPGroup, s: SignedOuterAut) -> RingElement:
    if (s.aut.p, s.aut.t) != (G.p, G.n):
        raise ValueError(f"automorphism must be a unit mod {G.p}^{G.n}")
    return RingElement(G, {diagonal(G.n, s.aut.value): s.sign}, check=False)


def iota(G: CyclicPGroup, b: Mapping[int, int] | Iterable[int]) -> RingElement:
    """B(G) -> B(G, G), [G/S_m] -> Delta(S_m)."""
    if not isinstance(b, Mapping):
        b = dict(enumerate(b))
    out = {}
    for m, c in b.items():
        if not 0 <= m <= G.n:
            raise ValueError(f"subgroup exponent {m} out of range")
        out[diagonal(m)] = c
    return RingElement(G, out, check=False)


def dbiso(G: CyclicPGroup, f: UnitModPK, a: RingElement) -> RingElement:
    """a -> Iso(f) o a o Iso(f^-1), conjugation by eta(+1, f)."""
    a._same(identity(G))
    left = eta(G, SignedOuterAut(1, f))
    right = eta(G, SignedOuterAut(1, f.inverse()))
    return left * a * right


def h_db_generators(G: CyclicPGroup) -> list[RingElement]:
    """dBInf_{G/N}(-Id) = Id - 2 j_N for every N."""
    one = identity(G)
    return [one - j_idem(G, N).scale(2) for N in range(G.n + 1)]


# -- unit test via the regular representation ---------------------------------


def _left_matrix(a: RingElement):
    from sympy import zeros

    basis = enumerate_basis(a.group)
    index = {q: r for r, q in enumerate(basis)}
    table = _products(a.group)
    mat = zeros(len(basis), len(basis))
    for col, M in enumerate(basis):
        for L, x in a._coeffs.items():
            g, LM = table[L, M]
            mat[index[LM], col] += g * x
    return mat, basis, index


def is_unit(a: RingElement) -> bool:
    """Whether a is invertible; left multiplication must be unimodular."""
    mat, _, _ = _left_matrix(a)
    return abs(mat.det(method="bareiss")) == 1


def unit_inverse(a: RingElement) -> RingElement | None:
    """Two-sided inverse of a, or None when a is not a unit."""
    from sympy import zeros

    mat, basis, index = _left_matrix(a)
    if abs(mat.det(method="bareiss")) != 1:
        return None
    rhs = zeros(len(basis), 1)
    rhs[index[diagonal(a.group.n)], 0] = 1
    sol = mat.LUsolve(rhs)
    inv = RingElement(a.group, {basis[r]: int(sol[r, 0]) for r in range(len(basis))}, check=False)
    if inv * a != identity(a.group):
        raise ArithmeticError("right inverse is not a left inverse")
    return inv
