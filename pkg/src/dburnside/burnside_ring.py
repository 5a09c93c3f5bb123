"""The ordinary Burnside ring B(G) of a cyclic p-group and its table of marks.

Elements are coefficient lists on the transitive G-sets [G/S_0], ..., [G/S_n].
"""

from __future__ import annotations

from typing import Sequence

from .cyclic_group import CyclicPGroup

__all__ = ["burnside_mul", "mark", "ghost", "marks_table"]


def _check(G: CyclicPGroup, b: Sequence[int]) -> list[int]:
    if len(b) != G.n + 1:
        raise ValueError(f"expected {G.n + 1} coefficients, got {len(b)}")
    return [int(c) for c in b]


def burnside_mul(G: CyclicPGroup, a: Sequence[int], b: Sequence[int]) -> list[int]:
    """[G/S_r] x [G/S_s] = p^(n - max(r, s)) [G/S_min(r, s)]."""
    a, b = _check(G, a), _check(G, b)
    out = [0] * (G.n + 1)
    for r, x in enumerate(a):
        if not x:
            continue
        for s, y in enumerate(b):
            if y:
                out[min(r, s)] += G.p ** (G.n - max(r, s)) * x * y
    return out


def mark(G: CyclicPGroup, m: int, k: int) -> int:
    """|(G/S_m)^{S_k}|: all of G/S_m when S_k <= S_m, nothing otherwise."""
    return G.p ** (G.n - m) if k <= m else 0


def marks_table(G: CyclicPGroup) -> list[list[int]]:
    return [[mark(G, m, k) for k in range(G.n + 1)] for m in range(G.n + 1)]


def ghost(G: CyclicPGroup, b: Sequence[int]) -> list[int]:
    """Image of b in the ghost ring prod_k Z."""
    b = _check(G, b)
    return [sum(c * mark(G, m, k) for m, c in enumerate(b)) for k in range(G.n + 1)]
