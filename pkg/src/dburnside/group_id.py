"""Identify finite groups of ring units by fingerprint.

Groups here are small (a few thousand elements at most) and every claimed
structure is a product of cyclic groups, possibly with one dihedral factor.
A fingerprint (order, commutativity, element-order statistics, centre order,
invariant factors) separates all of those, so no general isomorphism test is
needed.  The claimed structure is fingerprinted by building a concrete model
of it and running the same code.
"""

from __future__ import annotations

import itertools
import re
from collections import Counter
from dataclasses import dataclass, field
from typing import Callable, Hashable, Sequence

import numpy as np
from sympy import Matrix, ZZ
from sympy.matrices.normalforms import invariant_factors

from .cyclic_group import CyclicPGroup
from .goursat import Quintuple, enumerate_basis
from .ring import RingElement, _products, identity, rho

__all__ = [
    "GroupFingerprint",
    "UnitGroupReport",
    "ClosureCapExceeded",
    "NotClosedError",
    "closure",
    "fingerprint",
    "parse_descriptor",
    "model_fingerprint",
    "match_structure",
    "claimed_structure",
    "build_report",
    "corner_coordinates",
    "prime_three_note",
]

DEFAULT_CAP = 100_000


class ClosureCapExceeded(RuntimeError):
    pass


class NotClosedError(ValueError):
    pass


@dataclass(frozen=True)
class GroupFingerprint:
    order: int
    is_abelian: bool
    order_statistics: dict[int, int]
    abelian_invariants: tuple[int, ...]
    center_order: int

    def to_json_obj(self) -> dict:
        return {
            "order": self.order,
            "abelian": self.is_abelian,
            "order_stats": {str(k): v for k, v in sorted(self.order_statistics.items())},
            "invariants": list(self.abelian_invariants),
            "center": self.center_order,
        }


# -- a finite group on integer labels -------------------------------------------


class _Table:
    """Elements labelled 0..N-1 with a partial multiplication on labels."""

    def __init__(self, keys: list[Hashable], product: Callable[[Hashable, Hashable], Hashable], one: Hashable):
        self.keys = keys
        self.index = {k: r for r, k in enumerate(keys)}
        self._product = product
        self._cache: dict[tuple[int, int], int] = {}
        if one not in self.index:
            raise NotClosedError("the identity is missing")
        self.one = self.index[one]

    def __len__(self):
        return len(self.keys)

    def mul(self, a: int, b: int) -> int:
        hit = self._cache.get((a, b))
        if hit is None:
            key = self._product(self.keys[a], self.keys[b])
            hit = self.index.get(key)
            if hit is None:
                raise NotClosedError("product of two elements lies outside the set")
            self._cache[a, b] = hit
        return hit

    def span(self, gens: Sequence[int]) -> set[int]:
        seen = {self.one}
        frontier = [self.one]
        while frontier:
            nxt = []
            for x in frontier:
                for g in gens:
                    y = self.mul(x, g)
                    if y not in seen:
                        seen.add(y)
                        nxt.append(y)
            frontier = nxt
        return seen

    def generators(self) -> list[int]:
        gens: list[int] = []
        span = {self.one}
        for x in range(len(self)):
            if x not in span:
                gens.append(x)
                span = self.span(gens)
        if len(span) != len(self):
            raise NotClosedError("set is not closed under multiplication")
        return gens

    def element_order(self, x: int) -> int:
        k, y = 1, x
        while y != self.one:
            y = self.mul(y, x)
            k += 1
            if k > len(self):
                raise NotClosedError("element of infinite order")
        return k

    def commute(self, a: int, b: int) -> bool:
        return self.mul(a, b) == self.mul(b, a)

    def abelian_invariants(self, gens: list[int]) -> tuple[int, ...]:
        """Invariant factors via the relation lattice of a polycyclic series."""
        coords = {self.one: ()}
        members = [self.one]
        rows: list[list[int]] = []
        for k, g in enumerate(gens):
            powers = [self.one]
            x = g
            while x not in coords:
                powers.append(x)
                x = self.mul(x, g)
            m = len(powers)
            rows = [r + [0] for r in rows]
            rows.append([-c for c in coords[x]] + [m])
            new = []
            for h in members:
                coords[h] = coords[h] + (0,)
            for j in range(1, m):
                for h in members:
                    y = self.mul(h, powers[j])
                    coords[y] = coords[h][:k] + (j,)
                    new.append(y)
            members += new
        if not rows:
            return ()
        facs = invariant_factors(Matrix(rows), domain=ZZ)
        return tuple(int(f) for f in facs if int(f) != 1)

    def fingerprint(self) -> GroupFingerprint:
        gens = self.generators()
        stats = Counter(self.element_order(x) for x in range(len(self)))
        abelian = all(self.commute(a, b) for a, b in itertools.combinations(gens, 2))
        centre = sum(1 for z in range(len(self)) if all(self.commute(z, g) for g in gens))
        invariants = self.abelian_invariants(gens) if abelian else ()
        return GroupFingerprint(len(self), abelian, dict(sorted(stats.items())), invariants, centre)


# -- ring elements as dense vectors ------------------------------------------------


class _Dense:
    """Fast products of ring elements of one group as int64 coordinate vectors."""

    def __init__(self, G: CyclicPGroup):
        self.G = G
        self.basis = enumerate_basis(G)
        self.index = {q: r for r, q in enumerate(self.basis)}
        d = len(self.basis)
        table = _products(G)
        self.target = np.zeros((d, d), dtype=np.int64)
        self.gamma = np.zeros((d, d), dtype=np.int64)
        for a, L in enumerate(self.basis):
            for b, M in enumerate(self.basis):
                g, LM = table[L, M]
                self.gamma[a, b] = g
                self.target[a, b] = self.index[LM]
        self.gmax = int(self.gamma.max())

    def vec(self, x: RingElement) -> bytes:
        v = np.zeros(len(self.basis), dtype=np.int64)
        for q, c in x.coeffs.items():
            v[self.index[q]] = c
        return v.tobytes()

    def element(self, key: bytes) -> RingElement:
        v = np.frombuffer(key, dtype=np.int64)
        return RingElement(self.G, {self.basis[r]: int(c) for r, c in enumerate(v) if c}, check=False)

    def product(self, x: bytes, y: bytes) -> bytes:
        u = np.frombuffer(x, dtype=np.int64)
        v = np.frombuffer(y, dtype=np.int64)
        su, sv = np.flatnonzero(u), np.flatnonzero(v)
        bound = int(np.abs(u).max(initial=0)) * int(np.abs(v).max(initial=0)) * self.gmax * len(su) * len(sv)
        if bound >= 2**62:
            return self.vec(self.element(x) * self.element(y))
        block = np.ix_(su, sv)
        out = np.zeros(len(self.basis), dtype=np.int64)
        np.add.at(out, self.target[block].ravel(), (np.outer(u[su], v[sv]) * self.gamma[block]).ravel())
        return out.tobytes()


def _ring_table(elements: Sequence[RingElement]) -> tuple[_Table, _Dense]:
    if not elements:
        raise ValueError("need at least one element")
    G = elements[0].group
    dense = _Dense(G)
    keys = list(dict.fromkeys(dense.vec(x) for x in elements))
    return _Table(keys, dense.product, dense.vec(identity(G))), dense


def closure(generators: Sequence[RingElement], cap: int = DEFAULT_CAP) -> list[RingElement]:
    """The finite group generated by units, by breadth-first saturation."""
    if not generators:
        raise ValueError("need at least one generator")
    G = generators[0].group
    dense = _Dense(G)
    gens = [dense.vec(g) for g in generators]
    one = dense.vec(identity(G))
    seen = {one: None}
    frontier = [one]
    while frontier:
        nxt = []
        for x in frontier:
            for g in gens:
                y = dense.product(x, g)
                if y not in seen:
                    seen[y] = None
                    nxt.append(y)
                    if len(seen) > cap:
                        raise ClosureCapExceeded(f"closure exceeds {cap} elements")
        frontier = nxt
    return [dense.element(k) for k in seen]


def fingerprint(elements: Sequence[RingElement]) -> GroupFingerprint:
    table, _ = _ring_table(elements)
    return table.fingerprint()


# -- claimed structures ------------------------------------------------------------

_TOKEN = re.compile(r"^([CD])_?(\d+)(?:\^(\d+))?$")


def parse_descriptor(text: str) -> list[tuple[str, int]]:
    """``"C2^4 x C2 x C6"`` -> [("C", 2)] * 4 + [("C", 2), ("C", 6)].

    ``D<m>`` is the dihedral group of order m; ``1`` is the trivial group.
    """
    out: list[tuple[str, int]] = []
    if text.strip() in ("1", ""):
        return out
    for raw in re.split(r"\s*[x×*]\s*", text.strip()):
        tok = raw.replace(" ", "")
        m = _TOKEN.match(tok)
        if not m:
            raise ValueError(f"unsupported factor {raw!r} in {text!r}")
        kind, size, power = m.group(1), int(m.group(2)), int(m.group(3) or 1)
        if kind == "D" and (size < 4 or size % 2):
            raise ValueError(f"dihedral order must be even and >= 4, got {size}")
        if size < 1:
            raise ValueError(f"bad factor {raw!r}")
        out += [(kind, size)] * power
    return out


def _model_table(factors: list[tuple[str, int]]) -> _Table:
    comps = []
    for kind, size in factors:
        if kind == "C":
            comps.append([(r,) for r in range(size)])
        else:
            comps.append([(r, s) for s in (0, 1) for r in range(size // 2)])
    keys = [tuple(e) for e in itertools.product(*comps)]

    def product(x, y):
        out = []
        for (kind, size), a, b in zip(factors, x, y):
            if kind == "C":
                out.append(((a[0] + b[0]) % size,))
            else:
                k = size // 2
                r = (a[0] + (-b[0] if a[1] else b[0])) % k
                out.append((r, a[1] ^ b[1]))
        return tuple(out)

    one = tuple((0,) if kind == "C" else (0, 0) for kind, _ in factors)
    return _Table(keys, product, one)


def model_fingerprint(descriptor: str) -> GroupFingerprint:
    return _model_table(parse_descriptor(descriptor)).fingerprint()


def match_structure(fp: GroupFingerprint, descriptor: str) -> bool:
    return fp == model_fingerprint(descriptor)


def claimed_structure(G: CyclicPGroup) -> str | None:
    """The known structure of B_o(G, G), or None where it is open (p = 2, n > 1)."""
    p, n = G.p, G.n
    if n == 0:
        return "C2"
    if p == 2:
        return "C2 x D8" if n == 1 else None
    twos = n + 2 if p == 3 else n + 1
    outs = [f"C{p ** (i - 1) * (p - 1)}" for i in range(1, n + 1)]
    return " x ".join([f"C2^{twos}"] + outs)


# -- reports --------------------------------------------------------------------


@dataclass
class UnitGroupReport:
    group: CyclicPGroup
    elements: list[RingElement]
    fingerprint: GroupFingerprint
    claimed: str | None
    match: bool | None
    kernel_fingerprint: GroupFingerprint
    direct_product: bool
    verified: bool
    kernel: object = None
    notes: list[str] = field(default_factory=list)

    @property
    def order(self) -> int:
        return self.fingerprint.order

    def to_json_obj(self) -> dict:
        out = {
            "group": {"p": self.group.p, "n": self.group.n},
            "order": self.order,
            "fingerprint": self.fingerprint.to_json_obj(),
            "kernel_fingerprint": self.kernel_fingerprint.to_json_obj(),
            "claimed": self.claimed,
            "match": self.match,
            "direct_product": self.direct_product,
            "verified": self.verified,
            "notes": list(self.notes),
        }
        if self.kernel is not None:
            out["solver"] = self.kernel.to_json_obj()
        return out


def _direct_product_ok(G: CyclicPGroup, elements, etas, units) -> bool:
    """Each element is eta(rho(x)) times a kernel element, uniquely, with commuting parts."""
    from .ring import SignedOuterAut, eta
    from .cyclic_group import UnitModPK

    if len(set(elements)) != len(etas) * len(units):
        return False
    unit_set = set(units)
    for x in elements:
        r = rho(x)
        if len(r) != 1:
            return False
        (u, c), = r.items()
        if c not in (1, -1):
            return False
        inv = eta(G, SignedOuterAut(c, UnitModPK(G.p, G.n, u).inverse()))
        if inv * x not in unit_set:
            return False
    return all(e * k == k * e for e in etas for k in units)


def corner_coordinates(G: CyclicPGroup) -> list[Quintuple]:
    """The four quintuples w, x, y, z spanning I_G for G of prime order."""
    if G.n != 1:
        raise ValueError("corner coordinates exist only for groups of prime order")
    return [Quintuple(0, 0, 0, 0), Quintuple(0, 0, 1, 1), Quintuple(1, 1, 0, 0), Quintuple(1, 1, 1, 1)]


def prime_three_note(G: CyclicPGroup, kernel) -> str:
    """State which of the two candidate fourth solutions over C_3 is genuine."""
    from .solver import kernel_equations_hold

    corners = corner_coordinates(G)
    found = sorted(tuple(s.alpha[q] for q in corners) for s in kernel.solutions)

    def holds(coords):
        return kernel_equations_hold(RingElement(G, dict(zip(corners, coords))))

    plus, minus = (1, -1, -1, 3), (1, -1, -1, -3)
    return (
        f"C_3 kernel (w,x,y,z) solutions: {found}; "
        f"{plus} satisfies the equations: {holds(plus)}; "
        f"sign-flipped {minus} satisfies them: {holds(minus)}"
    )


def build_report(G: CyclicPGroup, elements, etas, units, kernel) -> UnitGroupReport:
    fp = fingerprint(elements)
    kfp = fingerprint(units)
    claimed = claimed_structure(G)
    match = match_structure(fp, claimed) if claimed is not None else None
    notes = list(kernel.notes)
    if G.p == 3 and G.n == 1:
        notes.append(prime_three_note(G, kernel))
    verified = bool(kernel.verified) and claimed is not None
    return UnitGroupReport(
        group=G,
        elements=elements,
        fingerprint=fp,
        claimed=claimed,
        match=match,
        kernel_fingerprint=kfp,
        direct_product=_direct_product_ok(G, elements, etas, units),
        verified=verified,
        kernel=kernel,
        notes=notes,
    )
