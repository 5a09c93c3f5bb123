"""Orthogonal units of B(G, G) for cyclic p-groups.

An orthogonal unit with trivial image in Z Out(G) is ``Id - alpha`` with
alpha in the ideal I_G and

    alpha alpha° = alpha° alpha = alpha + alpha°.

Read coefficient by coefficient this is a system of integer quadratic
equations in the coordinates of alpha.  Two solvers are provided:

* :func:`kernel_oracle` enumerates a coefficient box exhaustively.
* :func:`kernel_pruned` runs a branch and bound search.  The equations read
  off at self-dual targets such as Delta(S_m) are positive semidefinite
  quadratic forms equal to a linear term, so every partial assignment
  confines the free coordinates to an ellipsoid; its bounding box gives the
  domains.  Equations with a single free coordinate are solved outright.
  Every leaf is checked exactly in integer arithmetic.

The full group is then im(eta) x ker(rho^x), assembled by
:func:`orthogonal_unit_group`.
"""

from __future__ import annotations

import itertools
import logging
import math
import os
import time
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from .cyclic_group import CyclicPGroup, units_mod
from .goursat import Quintuple, basis_key, enumerate_basis, in_ideal, is_lifted
from .ring import (
    RingElement,
    SignedOuterAut,
    _opposites,
    _products,
    dual,
    eta,
    identity,
)

__all__ = [
    "SearchConfig",
    "BudgetExceeded",
    "KernelSolution",
    "KernelResult",
    "is_orthogonal_unit",
    "kernel_equations_hold",
    "kernel_oracle",
    "kernel_pruned",
    "solve_kernel",
    "orthogonal_unit_group",
    "default_time_budget",
]

LOG = logging.getLogger(__name__)

_EPS = 1e-7


def default_time_budget() -> float:
    return float(os.environ.get("DBURNSIDE_TIME_BUDGET", "600"))


@dataclass(frozen=True)
class SearchConfig:
    coefficient_bound: int = 6
    mode: str = "pruned"
    time_budget: float | None = None

    def __post_init__(self):
        if self.coefficient_bound < 0:
            raise ValueError("coefficient_bound must be >= 0")
        if self.mode not in ("oracle", "pruned"):
            raise ValueError(f"unknown mode {self.mode!r}")

    @property
    def budget(self) -> float:
        return default_time_budget() if self.time_budget is None else self.time_budget


class BudgetExceeded(RuntimeError):
    """The search ran out of time or would not fit the budget; not 'no solutions'."""


def is_orthogonal_unit(u: RingElement) -> bool:
    one = identity(u.group)
    ud = dual(u)
    return u * ud == one and ud * u == one


def kernel_equations_hold(alpha: RingElement) -> bool:
    ad = dual(alpha)
    rhs = alpha + ad
    return alpha * ad == rhs and ad * alpha == rhs


@dataclass(frozen=True)
class KernelSolution:
    alpha: RingElement

    def __post_init__(self):
        G = self.alpha.group
        if not all(in_ideal(G, q) for q in self.alpha.support()):
            raise ValueError("alpha must lie in I_G")
        if not kernel_equations_hold(self.alpha):
            raise ValueError("alpha does not satisfy alpha alpha° = alpha° alpha = alpha + alpha°")

    @property
    def unit(self) -> RingElement:
        return identity(self.alpha.group) - self.alpha

    def is_self_dual(self) -> bool:
        return dual(self.alpha) == self.alpha


@dataclass
class KernelResult:
    group: CyclicPGroup
    solutions: list[KernelSolution]
    mode: str
    bound_used: int | None
    complete: bool
    verified: bool
    nodes: int = 0
    elapsed: float = 0.0
    forced_zero_at_root: list[Quintuple] = field(default_factory=list)
    bound_derivation: list[str] = field(default_factory=list)
    notes: list[str] = field(default_factory=list)

    @property
    def lifted_support(self) -> bool:
        """Every solution is inflated from G/C_p."""
        return all(is_lifted(q) for s in self.solutions for q in s.alpha.support())

    def kernel_set(self) -> set[RingElement]:
        return {s.alpha for s in self.solutions}

    def to_json_obj(self) -> dict:
        return {
            "group": {"p": self.group.p, "n": self.group.n},
            "kernel": [s.alpha.to_json_obj() for s in self.solutions],
            "bound_used": self.bound_used,
            "mode": self.mode,
            "verified": self.verified,
            "complete": self.complete,
            "nodes": self.nodes,
            "bound_derivation": self.bound_derivation,
            "notes": self.notes,
        }


# -- the quadratic system -------------------------------------------------------


@dataclass
class _Equation:
    target: Quintuple
    kind: str  # "aa*" or "a*a"
    quad: np.ndarray  # integer d x d, value = a^T quad a + lin . a
    lin: np.ndarray
    support: np.ndarray  # variable indices with nonzero rows/cols/lin
    psd: bool = False

    def value(self, a: np.ndarray) -> int:
        return int(a @ self.quad @ a + self.lin @ a)


class _System:
    """The coefficient equations of alpha alpha° = alpha° alpha = alpha + alpha°."""

    def __init__(self, G: CyclicPGroup):
        self.G = G
        basis = enumerate_basis(G)
        self.vars = [q for q in basis if in_ideal(G, q)]
        self.index = {q: r for r, q in enumerate(self.vars)}
        d = len(self.vars)
        opp = _opposites(G)
        table = _products(G)
        quads: dict[tuple[Quintuple, str], np.ndarray] = {}
        for x, X in enumerate(self.vars):
            for y, Y in enumerate(self.vars):
                g, R = table[X, opp[Y]]
                quads.setdefault((R, "aa*"), np.zeros((d, d), dtype=np.int64))[x, y] += g
                g, R = table[opp[X], Y]
                quads.setdefault((R, "a*a"), np.zeros((d, d), dtype=np.int64))[x, y] += g
        self.equations: list[_Equation] = []
        for T in basis:
            lin = np.zeros(d, dtype=np.int64)
            if T in self.index:
                lin[self.index[T]] -= 1
                lin[self.index[opp[T]]] -= 1
            for kind in ("aa*", "a*a"):
                quad = quads.get((T, kind), np.zeros((d, d), dtype=np.int64))
                if not quad.any() and not lin.any():
                    continue
                mask = quad.any(axis=0) | quad.any(axis=1) | (lin != 0)
                eq = _Equation(T, kind, quad, lin, np.flatnonzero(mask))
                sym = (quad + quad.T) / 2.0
                if sym.any():
                    sub = sym[np.ix_(eq.support, eq.support)]
                    eq.psd = bool(np.linalg.eigvalsh(sub).min() > -1e-9)
                self.equations.append(eq)

    def residuals(self, a: np.ndarray) -> list[int]:
        return [eq.value(a) for eq in self.equations]

    def holds(self, a: np.ndarray) -> bool:
        return all(eq.value(a) == 0 for eq in self.equations)

    def element(self, a) -> RingElement:
        return RingElement(self.G, {q: int(c) for q, c in zip(self.vars, a) if c}, check=False)


@lru_cache(maxsize=8)
def _system(G: CyclicPGroup) -> _System:
    return _System(G)


def _finish(G: CyclicPGroup, system: _System, vectors) -> list[KernelSolution]:
    out = [KernelSolution(system.element(a)) for a in vectors]
    out.sort(key=lambda s: [(basis_key(q), c) for q, c in s.alpha.terms()])
    return out


def _is_open_case(G: CyclicPGroup) -> bool:
    return G.p == 2 and G.n > 1


# -- exhaustive oracle --------------------------------------------------------------

_ORACLE_MAX_POINTS = 50_000_000


def kernel_oracle(G: CyclicPGroup, cfg: SearchConfig = SearchConfig(mode="oracle")) -> KernelResult:
    """Every alpha in the box |a_X| <= B over all of I_G satisfying the equations."""
    start = time.monotonic()
    system = _system(G)
    d = len(system.vars)
    B = cfg.coefficient_bound
    width = 2 * B + 1
    total = width**d
    if total > _ORACLE_MAX_POINTS:
        raise BudgetExceeded(f"box of {width}^{d} = {total} points exceeds the oracle limit")
    if d == 0:
        return KernelResult(G, _finish(G, system, [np.zeros(0, dtype=np.int64)]), "oracle", B,
                            complete=True, verified=True, nodes=1, elapsed=time.monotonic() - start,
                            bound_derivation=["I_G = 0"])
    values = np.arange(-B, B + 1, dtype=np.int64)
    quads = np.stack([eq.quad for eq in system.equations]) if system.equations else np.zeros((0, d, d), np.int64)
    lins = np.stack([eq.lin for eq in system.equations]) if system.equations else np.zeros((0, d), np.int64)
    found = []
    chunk_dims = max(0, d - 5)
    # outer loop over leading coordinates, vectorised over the last <= 5
    inner = np.array(list(itertools.product(values, repeat=d - chunk_dims)), dtype=np.int64).reshape(-1, d - chunk_dims)
    for head in itertools.product(values, repeat=chunk_dims):
        if time.monotonic() - start > cfg.budget:
            raise BudgetExceeded(f"oracle exceeded {cfg.budget:.0f}s")
        A = np.hstack([np.broadcast_to(np.array(head, dtype=np.int64), (len(inner), chunk_dims)), inner])
        ok = np.ones(len(A), dtype=bool)
        for quad, lin in zip(quads, lins):
            res = np.einsum("nx,xy,ny->n", A, quad, A) + A @ lin
            ok &= res == 0
            if not ok.any():
                break
        found.extend(A[ok])
    sols = _finish(G, system, found)
    # the oracle cannot rule out solutions outside the box, hence not "complete"
    edge = [s for s in sols if max((abs(c) for _, c in s.alpha.terms()), default=0) == B] if B else []
    notes = []
    if edge:
        notes.append(f"{len(edge)} solution(s) touch the box boundary B={B}; enlarge B")
    return KernelResult(
        group=G,
        solutions=sols,
        mode="oracle",
        bound_used=B,
        complete=False,
        verified=not _is_open_case(G),
        nodes=total,
        elapsed=time.monotonic() - start,
        bound_derivation=[f"exhaustive box [-{B}, {B}]^{d} over I_G ({total} points)"],
        notes=notes,
    )


# -- branch and bound ----------------------------------------------------------------


class _Search:
    def __init__(self, G: CyclicPGroup, cfg: SearchConfig):
        self.G = G
        self.cfg = cfg
        self.system = _system(G)
        self.start = time.monotonic()
        self.nodes = 0
        self.box_fallback: set[int] = set()
        self.solutions: list[np.ndarray] = []
        self.order = self._static_order()
        # any equation whose free block is positive definite yields an ellipsoid
        self.quadratic = [eq for eq in self.system.equations if eq.quad.any()]
        self.sym = {id(eq): (eq.quad + eq.quad.T) / 2.0 for eq in self.quadratic}

    def _static_order(self) -> list[int]:
        """Descending diagonal group, then canonical order; lifted coordinates last."""

        def key(r: int):
            q = self.system.vars[r]
            grp = max(q.i if q.j == 0 else -1, q.k if q.l == 0 else -1)
            return (-grp, basis_key(q))

        return sorted(range(len(self.system.vars)), key=key)

    # domains are sorted lists of admissible integers, or None when unbounded

    def _intersect(self, dom, lo, hi):
        if lo > hi:
            return []
        if dom is None:
            if hi - lo > 10**6:
                return None
            return list(range(lo, hi + 1))
        return [v for v in dom if lo <= v <= hi]

    def _ellipsoid(self, eq: _Equation, doms, vals):
        """Bounding box of the free coordinates, or False if infeasible.

        Returns None when the free block of the form is not positive definite.
        """
        sup = eq.support
        free = [r for r in sup if vals[r] is None]
        fixed = [r for r in sup if vals[r] is not None]
        H = self.sym[id(eq)]
        a_f = np.array([vals[r] for r in fixed], dtype=float)
        c0 = float(a_f @ H[np.ix_(fixed, fixed)] @ a_f + eq.lin[fixed] @ a_f) if fixed else 0.0
        if not free:
            return None if abs(c0) < 0.5 else False
        Hs = H[np.ix_(free, free)]
        b = eq.lin[free].astype(float)
        if fixed:
            b = b + 2.0 * H[np.ix_(free, fixed)] @ a_f
        if np.any(np.diag(Hs) <= 0):
            return None
        try:
            np.linalg.cholesky(Hs)
        except np.linalg.LinAlgError:
            return None
        Hinv = np.linalg.inv(Hs)
        centre = -0.5 * Hinv @ b
        fmin = c0 + 0.5 * b @ centre
        if fmin > _EPS * (1 + abs(c0)):
            return False
        R = max(0.0, -fmin)
        half = np.sqrt(R * np.diag(Hinv))
        lo = np.ceil(centre - half - _EPS).astype(int)
        hi = np.floor(centre + half + _EPS).astype(int)
        return list(zip(free, lo.tolist(), hi.tolist()))

    def _unary(self, eq: _Equation, vals):
        """Integer roots when exactly one coordinate of eq is free; None if not applicable."""
        free = [r for r in eq.support if vals[r] is None]
        if len(free) != 1:
            return None
        x = free[0]
        fixed = [r for r in eq.support if vals[r] is not None]
        a_f = np.array([vals[r] for r in fixed], dtype=np.int64)
        Q = eq.quad
        h = int(Q[x, x])
        b = int(eq.lin[x]) + (int(Q[x, fixed] @ a_f + a_f @ Q[fixed, x]) if fixed else 0)
        c = int(a_f @ Q[np.ix_(fixed, fixed)] @ a_f + eq.lin[fixed] @ a_f) if fixed else 0
        if h == 0:
            if b == 0:
                return x, (None if c == 0 else [])
            return x, ([-c // b] if c % b == 0 else [])
        disc = b * b - 4 * h * c
        if disc < 0:
            return x, []
        s = math.isqrt(disc)
        if s * s != disc:
            return x, []
        roots = set()
        for num in (-b + s, -b - s):
            if num % (2 * h) == 0:
                roots.add(num // (2 * h))
        return x, sorted(roots)

    def _propagate(self, doms):
        """Shrink domains to a fixpoint; returns False on a contradiction."""
        eqs = self.system.equations
        changed = True
        while changed:
            changed = False
            vals = [dom[0] if dom is not None and len(dom) == 1 else None for dom in doms]
            for eq in self.quadratic:
                box = self._ellipsoid(eq, doms, vals)
                if box is False:
                    return False
                if box is None:
                    continue
                for r, lo, hi in box:
                    new = self._intersect(doms[r], lo, hi)
                    if new != doms[r]:
                        if new is not None and not new:
                            return False
                        doms[r] = new
                        changed = True
                        if len(new) == 1:
                            vals[r] = new[0]
            for eq in eqs:
                got = self._unary(eq, vals)
                if got is None:
                    continue
                r, roots = got
                if roots is None:
                    continue
                new = sorted(set(roots) & set(doms[r])) if doms[r] is not None else roots
                if not new:
                    return False
                if new != doms[r]:
                    doms[r] = new
                    changed = True
                    if len(new) == 1:
                        vals[r] = new[0]
            if all(v is not None for v in vals):
                a = np.array(vals, dtype=np.int64)
                return self.system.holds(a)
        return True

    def _tick(self):
        self.nodes += 1
        if time.monotonic() - self.start > self.cfg.budget:
            raise BudgetExceeded(f"pruned search exceeded {self.cfg.budget:.0f}s after {self.nodes} nodes")

    def run(self, doms):
        self._tick()
        if not self._propagate(doms):
            return
        for r in self.order:
            if doms[r] is None or len(doms[r]) > 1:
                break
        else:
            a = np.array([dom[0] for dom in doms], dtype=np.int64)
            if self.system.holds(a):
                self.solutions.append(a)
            return
        branch = next((r for r in self.order if doms[r] is not None and len(doms[r]) > 1), None)
        if branch is None:
            # nothing has a finite domain: fall back on the configured box
            branch = next(r for r in self.order if doms[r] is None)
            B = self.cfg.coefficient_bound
            doms[branch] = list(range(-B, B + 1))
            self.box_fallback.add(branch)
        for v in doms[branch]:
            child = list(doms)
            child[branch] = [v]
            self.run(child)


def kernel_pruned(G: CyclicPGroup, cfg: SearchConfig = SearchConfig()) -> KernelResult:
    """All solutions of the kernel equations by propagation and branching."""
    search = _Search(G, cfg)
    system = search.system
    doms: list = [None] * len(system.vars)
    root = list(doms)
    derivation = []
    if system.vars and not search._propagate(root):
        root = None
    if root is not None:
        for r in search.order:
            dom = root[r]
            q = system.vars[r]
            if dom is None:
                derivation.append(f"{q}: unbounded at root")
            elif len(dom) == 1:
                derivation.append(f"{q}: forced to {dom[0]}")
            else:
                derivation.append(f"{q}: {min(dom)} <= a <= {max(dom)}")
        forced_zero = [system.vars[r] for r in range(len(root)) if root[r] == [0]]
        if system.vars:
            search.run(root)
        else:
            search.solutions.append(np.zeros(0, dtype=np.int64))
    else:
        forced_zero = []
    sols = _finish(G, system, search.solutions)
    complete = not search.box_fallback
    notes = []
    if search.box_fallback:
        names = ", ".join(str(system.vars[r]) for r in sorted(search.box_fallback))
        notes.append(f"box fallback B={cfg.coefficient_bound} used for {names}; completeness not proved")
    if _is_open_case(G):
        notes.append("UNVERIFIED: p = 2 with n > 1 has no known classification; exploratory result")
    return KernelResult(
        group=G,
        solutions=sols,
        mode="pruned",
        bound_used=cfg.coefficient_bound if search.box_fallback else None,
        complete=complete,
        verified=complete and not _is_open_case(G),
        nodes=search.nodes,
        elapsed=time.monotonic() - search.start,
        forced_zero_at_root=forced_zero,
        bound_derivation=derivation,
        notes=notes,
    )


def solve_kernel(G: CyclicPGroup, cfg: SearchConfig = SearchConfig()) -> KernelResult:
    if cfg.mode == "oracle":
        return kernel_oracle(G, cfg)
    return kernel_pruned(G, cfg)


# -- the whole group -------------------------------------------------------------------


def signed_outer_auts(G: CyclicPGroup) -> list[SignedOuterAut]:
    return [SignedOuterAut(s, f) for s in (1, -1) for f in units_mod(G, G.n)]


def orthogonal_unit_group(G: CyclicPGroup, cfg: SearchConfig = SearchConfig()):
    """B_o(G, G) = im(eta) x ker(rho^x), identified against the classification."""
    from .group_id import build_report

    kernel = solve_kernel(G, cfg)
    etas = [eta(G, s) for s in signed_outer_auts(G)]
    units = [s.unit for s in kernel.solutions]
    elements = []
    for e in etas:
        for k in units:
            x = e * k
            if not is_orthogonal_unit(x):
                raise ArithmeticError(f"{x} is not an orthogonal unit")
            elements.append(x)
    return build_report(G, elements, etas, units, kernel)
