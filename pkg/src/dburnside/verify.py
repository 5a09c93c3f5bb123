"""Property suites over one group, as run by ``dburnside verify``."""

from __future__ import annotations

import itertools
import random
import time
from dataclasses import dataclass, field
from typing import Callable

from .cyclic_group import CyclicPGroup, mobius_chain, units_mod
from .goursat import enumerate_basis, gamma, is_bifree, opposite, star
from .ring import (
    SignedOuterAut,
    basis_element,
    dbinf_unit,
    dual,
    eta,
    f_idem,
    h_db_generators,
    identity,
    j_idem,
    rho,
    zero,
)

PASS, FAIL, EXPLORATORY, BUDGET = "PASS", "FAIL", "EXPLORATORY", "BUDGET"

# exhaustive triple checks above this basis size fall back to a fixed random sample
EXHAUSTIVE_LIMIT = 30
SAMPLE_TRIPLES = 20_000


@dataclass
class SuiteResult:
    name: str
    status: str
    detail: str = ""
    elapsed: float = 0.0

    def to_json_obj(self) -> dict:
        return {"suite": self.name, "status": self.status, "detail": self.detail, "elapsed": round(self.elapsed, 3)}


@dataclass
class VerifyReport:
    group: CyclicPGroup
    suites: list[SuiteResult]
    notes: list[str] = field(default_factory=list)

    @property
    def failed(self) -> bool:
        return any(s.status == FAIL for s in self.suites)

    @property
    def exploratory(self) -> bool:
        return any(s.status == EXPLORATORY for s in self.suites)

    @property
    def budget_limited(self) -> bool:
        return any(s.status == BUDGET for s in self.suites)

    def to_json_obj(self) -> dict:
        return {
            "group": {"p": self.group.p, "n": self.group.n},
            "suites": [s.to_json_obj() for s in self.suites],
            "notes": list(self.notes),
        }


def _triples(G: CyclicPGroup, seed: int = 0):
    basis = enumerate_basis(G)
    if len(basis) <= EXHAUSTIVE_LIMIT:
        return itertools.product(basis, repeat=3), "all"
    rng = random.Random(seed)
    return ((rng.choice(basis), rng.choice(basis), rng.choice(basis)) for _ in range(SAMPLE_TRIPLES)), "sampled"


def check_cocycle(G: CyclicPGroup) -> str:
    triples, how = _triples(G)
    count = 0
    for L, M, N in triples:
        if star(G, star(G, L, M), N) != star(G, L, star(G, M, N)):
            raise AssertionError(f"star not associative at {L}, {M}, {N}")
        lhs = gamma(G, L, M) * gamma(G, star(G, L, M), N)
        rhs = gamma(G, M, N) * gamma(G, L, star(G, M, N))
        if lhs != rhs:
            raise AssertionError(f"cocycle fails at {L}, {M}, {N}: {lhs} != {rhs}")
        count += 1
    return f"{count} triples ({how})"


def check_associativity(G: CyclicPGroup) -> str:
    triples, how = _triples(G, seed=1)
    count = 0
    for L, M, N in triples:
        a, b, c = (basis_element(G, q) for q in (L, M, N))
        if (a * b) * c != a * (b * c):
            raise AssertionError(f"mul not associative at {L}, {M}, {N}")
        count += 1
    return f"{count} triples ({how})"


def check_anti_involution(G: CyclicPGroup) -> str:
    basis = enumerate_basis(G)
    for q in basis:
        if opposite(G, opposite(G, q)) != q:
            raise AssertionError(f"opposite is not an involution at {q}")
    for L, M in itertools.product(basis, repeat=2):
        a, b = basis_element(G, L), basis_element(G, M)
        if dual(a * b) != dual(b) * dual(a):
            raise AssertionError(f"dual is not anti-multiplicative at {L}, {M}")
    if dual(identity(G)) != identity(G):
        raise AssertionError("dual moves the identity")
    return f"{len(basis) ** 2} pairs"


def check_idempotents(G: CyclicPGroup) -> str:
    fs = [f_idem(G, N) for N in range(G.n + 1)]
    for N, f in enumerate(fs):
        if f != f_idem(G, N, via_mobius=True):
            raise AssertionError(f"f_{N} disagrees with its Möbius sum")
        for M, g in enumerate(fs):
            want = f if M == N else zero(G)
            if f * g != want:
                raise AssertionError(f"f_{N} f_{M} != {'f_N' if M == N else '0'}")
    if sum(fs, zero(G)) != identity(G):
        raise AssertionError("the f_N do not sum to Id")
    for N in range(G.n + 1):
        if j_idem(G, N) != sum(fs[N:], zero(G)):
            raise AssertionError(f"j_{N} != sum of f_M over M >= N")
    return f"{len(fs)} idempotents"


def check_dbinf(G: CyclicPGroup) -> str:
    checked = 0
    for N in range(G.n + 1):
        Q = G.quotient(N)
        sample = [identity(Q), -identity(Q)] + [eta(Q, SignedOuterAut(1, f)) for f in units_mod(Q, Q.n)]
        images = {}
        for u in sample:
            x = dbinf_unit(G, N, u)
            if x * dual(x) != identity(G) or dual(x) * x != identity(G):
                raise AssertionError(f"dBInf over S_{N} loses orthogonality")
            images[u] = x
        for u, v in itertools.product(sample, repeat=2):
            if dbinf_unit(G, N, u * v) != images[u] * images[v]:
                raise AssertionError(f"dBInf over S_{N} is not multiplicative")
        if len(set(images.values())) != len(set(sample)):
            raise AssertionError(f"dBInf over S_{N} is not injective on the sample")
        # tower law through every intermediate quotient
        for M in range(N, G.n + 1):
            R = G.quotient(M)
            for u in (-identity(R), *[eta(R, SignedOuterAut(-1, f)) for f in units_mod(R, R.n)]):
                inner = dbinf_unit(Q, M - N, u)
                if dbinf_unit(G, N, inner) != dbinf_unit(G, M, u):
                    raise AssertionError(f"tower law fails for S_{N} <= S_{M}")
                checked += 1
    return f"{checked} tower compositions"


def check_h_db(G: CyclicPGroup) -> str:
    from .group_id import closure, fingerprint

    gens = h_db_generators(G)
    group = closure(gens)
    fp = fingerprint(group)
    if fp.order != 2 ** (G.n + 1):
        raise AssertionError(f"H_dB has order {fp.order}, expected {2 ** (G.n + 1)}")
    if not fp.is_abelian or set(fp.order_statistics) - {1, 2}:
        raise AssertionError("H_dB is not elementary abelian")
    bifree = {x for x in group if all(is_bifree(q) for q in x.support())}
    if bifree != {identity(G), -identity(G)}:
        raise AssertionError(f"H_dB meets the bifree span in {len(bifree)} elements")
    return f"order {fp.order}, elementary abelian, bifree part {{+-Id}}"


def check_centrality(G: CyclicPGroup) -> str:
    basis = [basis_element(G, q) for q in enumerate_basis(G)]
    count = 0
    for s in (SignedOuterAut(e, f) for e in (1, -1) for f in units_mod(G, G.n)):
        e = eta(G, s)
        if rho(e) != {s.aut.value: s.sign}:
            raise AssertionError(f"rho(eta(s)) != s for s = {s}")
        if e * dual(e) != identity(G):
            raise AssertionError("eta(s) is not orthogonal")
        for b in basis:
            if e * b != b * e:
                raise AssertionError("eta(s) is not central")
            count += 1
    return f"{count} commutators"


def check_units(G: CyclicPGroup, cfg) -> SuiteResult:
    from .group_id import ClosureCapExceeded
    from .solver import BudgetExceeded, orthogonal_unit_group

    start = time.perf_counter()
    try:
        report = orthogonal_unit_group(G, cfg)
    except (BudgetExceeded, ClosureCapExceeded) as exc:
        return SuiteResult("units", BUDGET, str(exc), time.perf_counter() - start)
    fp = report.fingerprint
    detail = f"order {fp.order}, invariants {list(fp.abelian_invariants)}, direct product {report.direct_product}"
    if report.claimed is None:
        status = EXPLORATORY
        detail += "; no known classification for this group, result UNVERIFIED"
    elif report.match and report.direct_product:
        status = PASS
        detail += f"; matches {report.claimed}"
        if not report.kernel.complete:
            detail += f" within coefficient box B={report.kernel.bound_used} (completeness not proven)"
    else:
        status = FAIL
        detail += f"; expected {report.claimed}"
    return SuiteResult("units", status, detail, time.perf_counter() - start)


ALGEBRA_SUITES: list[tuple[str, Callable[[CyclicPGroup], str]]] = [
    ("cocycle", check_cocycle),
    ("associativity", check_associativity),
    ("anti-involution", check_anti_involution),
    ("idempotents", check_idempotents),
    ("dbinf", check_dbinf),
    ("h_db", check_h_db),
    ("centrality", check_centrality),
]


def idempotent_summand_note(G: CyclicPGroup) -> str:
    """Compare the Möbius sum over j_M with the variant that keeps j_N in every summand."""
    fixed = []
    for N in range(G.n + 1):
        coeff = sum(mobius_chain(N, M) for M in range(N, G.n + 1))
        fixed.append(j_idem(G, N).scale(coeff))
    fixed_ok = sum(fixed, zero(G)) == identity(G) and all(f * f == f for f in fixed)
    return (
        "f_N summand: f_N = sum over M >= N of mu(N, M) j_M (summand indexed by M) gives a complete "
        "orthogonal idempotent family; keeping j_N in every summand gives "
        + ("one as well" if fixed_ok else "a family that does not sum to Id, so the M-indexed form is used")
    )


def prime_three_sign_note() -> str:
    from .group_id import prime_three_note
    from .solver import SearchConfig, kernel_pruned

    C3 = CyclicPGroup(3, 1)
    return prime_three_note(C3, kernel_pruned(C3, SearchConfig()))


def run_verify(G: CyclicPGroup, cfg=None, *, units: bool = True) -> VerifyReport:
    from .solver import SearchConfig

    cfg = cfg or SearchConfig()
    suites = []
    for name, fn in ALGEBRA_SUITES:
        start = time.perf_counter()
        try:
            detail, status = fn(G), PASS
        except AssertionError as exc:
            detail, status = str(exc), FAIL
        suites.append(SuiteResult(name, status, detail, time.perf_counter() - start))
    if units:
        suites.append(check_units(G, cfg))
    return VerifyReport(G, suites, [idempotent_summand_note(G), prime_three_sign_note()])
