import math

import pytest
from sympy import factorint

from dburnside.cyclic_group import CyclicPGroup, UnitModPK
from dburnside.group_id import (
    ClosureCapExceeded,
    GroupFingerprint,
    NotClosedError,
    claimed_structure,
    closure,
    fingerprint,
    match_structure,
    model_fingerprint,
    parse_descriptor,
)
from dburnside.ring import SignedOuterAut, eta, h_db_generators, identity, j_idem
from dburnside.solver import kernel_pruned, orthogonal_unit_group


def invariants_from_order_counts(stats: dict[int, int]) -> tuple[int, ...]:
    """Invariant factors of a finite abelian group from its element-order counts.

    Counts elements killed by q^k for each prime q, reads off the exponents of
    the cyclic q-primary factors, and recombines them.
    """
    order = sum(stats.values())
    primary = {}
    for q, top in factorint(order).items():
        # killed[k] = number of elements whose order divides q^k
        killed = [sum(c for o, c in stats.items() if q**k % o == 0) for k in range(top + 1)]
        ranks = [round(math.log(killed[k + 1] // killed[k], q)) for k in range(top)]
        primary[q] = sorted(sum(1 for r in ranks if r > idx) for idx in range(max(ranks, default=0)))
    cols = max((len(v) for v in primary.values()), default=0)
    out = [1] * cols
    for q, exps in primary.items():
        exps = [0] * (cols - len(exps)) + exps
        out = [o * q**e for o, e in zip(out, exps)]
    return tuple(x for x in out if x > 1)


def test_order_count_oracle_on_models():
    for text in ["C2^4 x C2 x C6", "C4 x C2^2", "C6 x C2^2", "C2 x C18 x C6"]:
        fp = model_fingerprint(text)
        assert invariants_from_order_counts(fp.order_statistics) == fp.abelian_invariants


def test_closure_examples():
    G = CyclicPGroup(3, 1)
    assert len(closure([-identity(G)])) == 2
    assert len(closure(h_db_generators(G))) == 4
    assert len(closure([eta(G, SignedOuterAut(1, UnitModPK(3, 1, 2)))])) == 2


def test_closure_is_idempotent():
    G = CyclicPGroup(3, 2)
    S = closure(h_db_generators(G))
    assert set(closure(S)) == set(S)


def test_closure_cap():
    G = CyclicPGroup(3, 2)
    with pytest.raises(ClosureCapExceeded):
        closure(h_db_generators(G), cap=3)
    with pytest.raises(ValueError):
        closure([])


def test_fingerprint_c2_kernel_is_d8():
    G = CyclicPGroup(2, 1)
    units = [s.unit for s in kernel_pruned(G).solutions]
    fp = fingerprint(units)
    assert fp.order == 8 and not fp.is_abelian
    assert fp.order_statistics == {1: 1, 2: 5, 4: 2}
    assert fp.center_order == 2
    assert fp == model_fingerprint("D8")


def test_fingerprint_c3_kernel():
    G = CyclicPGroup(3, 1)
    fp = fingerprint([s.unit for s in kernel_pruned(G).solutions])
    assert fp == GroupFingerprint(4, True, {1: 1, 2: 3}, (2, 2), 4)


def test_fingerprint_identity_and_rejects():
    G = CyclicPGroup(3, 1)
    assert fingerprint([identity(G)]).order == 1
    with pytest.raises(NotClosedError):
        fingerprint([identity(G), -identity(G), h_db_generators(G)[1]])
    with pytest.raises(NotClosedError):
        fingerprint([-identity(G)])
    with pytest.raises(NotClosedError):
        fingerprint([identity(G), j_idem(G, 1)])


@pytest.mark.parametrize(
    "text, expected",
    [
        ("C2^4 x C2 x C6", [("C", 2)] * 5 + [("C", 6)]),
        ("C2 x D8", [("C", 2), ("D", 8)]),
        ("1", []),
        ("C_4 × C_2^2", [("C", 4), ("C", 2), ("C", 2)]),
    ],
)
def test_parse_descriptor(text, expected):
    assert parse_descriptor(text) == expected


@pytest.mark.parametrize("text", ["Q8", "D7", "C2 x", "S3"])
def test_parse_descriptor_rejects(text):
    with pytest.raises(ValueError):
        model_fingerprint(text)


def test_model_fingerprints():
    d8 = model_fingerprint("D8")
    assert d8.order_statistics == {1: 1, 2: 5, 4: 2} and d8.center_order == 2
    c2d8 = model_fingerprint("C2 x D8")
    assert (c2d8.order, c2d8.is_abelian, c2d8.center_order) == (16, False, 4)
    assert c2d8.order_statistics == {1: 1, 2: 11, 4: 4}
    assert model_fingerprint("C2^4 x C2 x C6").abelian_invariants == (2, 2, 2, 2, 2, 6)
    assert model_fingerprint("C4 x C6").abelian_invariants == (2, 12)
    assert not match_structure(d8, "C2^3")
    assert not match_structure(model_fingerprint("C2 x C4 x C2"), "C2 x D8")
    assert not match_structure(model_fingerprint("C4 x C4"), "C2 x C8")


@pytest.mark.parametrize(
    "p, n, text",
    [
        (2, 0, "C2"),
        (3, 0, "C2"),
        (2, 1, "C2 x D8"),
        (2, 2, None),
        (3, 1, "C2^3 x C2"),
        (5, 1, "C2^2 x C4"),
        (3, 2, "C2^4 x C2 x C6"),
        (5, 2, "C2^3 x C4 x C20"),
    ],
)
def test_claimed_structure(p, n, text):
    assert claimed_structure(CyclicPGroup(p, n)) == text


@pytest.mark.parametrize("p, n, order", [(2, 0, 2), (2, 1, 16), (3, 1, 16), (5, 1, 16), (7, 1, 24), (3, 2, 192)])
def test_unit_group_reports(p, n, order):
    report = orthogonal_unit_group(CyclicPGroup(p, n))
    fp = report.fingerprint
    assert fp.order == order and report.match and report.direct_product and report.verified
    assert sum(fp.order_statistics.values()) == fp.order
    assert all(fp.order % o == 0 for o in fp.order_statistics)
    if fp.is_abelian:
        assert math.prod(fp.abelian_invariants) == fp.order
        assert all(b % a == 0 for a, b in zip(fp.abelian_invariants, fp.abelian_invariants[1:]))
        assert invariants_from_order_counts(fp.order_statistics) == fp.abelian_invariants
    assert report.to_json_obj()["fingerprint"]["order"] == order


def test_c4_unit_group_is_unverified():
    report = orthogonal_unit_group(CyclicPGroup(2, 2))
    assert report.claimed is None and report.match is None and not report.verified
    assert report.direct_product
    assert report.fingerprint.order == 4 * report.kernel_fingerprint.order == 256


def test_fingerprint_json():
    obj = model_fingerprint("C2 x D8").to_json_obj()
    assert set(obj) == {"order", "abelian", "order_stats", "invariants", "center"}
    assert obj["order_stats"] == {"1": 1, "2": 11, "4": 4}
