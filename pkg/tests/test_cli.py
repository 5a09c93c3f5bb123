import itertools
import json
import random
import subprocess
import sys
from collections import Counter
from pathlib import Path

import pytest

import oracles
from dburnside.cli import main
from dburnside.cyclic_group import CyclicPGroup
from dburnside.goursat import Quintuple, enumerate_basis
from dburnside.ring import RingElement, basis_element

GOLDEN = Path(__file__).parent / "golden"


def run(*args, stdin=None):
    proc = subprocess.run(
        [sys.executable, "-m", "dburnside", *args], capture_output=True, text=True, input=stdin, timeout=300
    )
    return proc.returncode, proc.stdout, proc.stderr


@pytest.mark.parametrize("p, n, lines", [(3, 1, 6), (3, 2, 23), (2, 0, 1)])
def test_basis_line_counts(p, n, lines, capsys):
    assert main(["basis", "--p", str(p), "--n", str(n)]) == 0
    out = capsys.readouterr().out
    assert len(out.splitlines()) == lines


def test_basis_golden(capsys):
    main(["basis", "--p", "3", "--n", "1"])
    assert capsys.readouterr().out == (GOLDEN / "basis_p3_n1.txt").read_text()
    main(["basis", "--p", "2", "--n", "2", "--format", "json"])
    assert json.loads(capsys.readouterr().out) == json.loads((GOLDEN / "basis_p2_n2.json").read_text())


def test_idempotents_golden(capsys):
    main(["idempotents", "--p", "3", "--n", "2"])
    assert capsys.readouterr().out == (GOLDEN / "idempotents_p3_n2.txt").read_text()


def _mackey_product(p, n, a: RingElement, b: RingElement) -> RingElement:
    sets = {oracles.goursat(p, n, S): S for S in oracles.subgroups(p, n)}
    out = Counter()
    for (L, x), (M, y) in itertools.product(a.coeffs.items(), b.coeffs.items()):
        for q, mult in oracles.biset_product(p, n, sets[tuple(L)], sets[tuple(M)]).items():
            out[q] += mult * x * y
    return RingElement(a.group, {Quintuple(*q): c for q, c in out.items()})


@pytest.mark.parametrize("seed", range(4))
def test_mul_matches_biset_oracle(seed, tmp_path, capsys):
    p, n = (2, 1) if seed % 2 else (2, 2)
    G = CyclicPGroup(p, n)
    rng = random.Random(seed)
    basis = enumerate_basis(G)
    a, b = (
        RingElement(G, {rng.choice(basis): rng.randint(-3, 3) for _ in range(3)}) for _ in range(2)
    )
    fa, fb = tmp_path / "a.json", tmp_path / "b.json"
    fa.write_text(a.to_json())
    fb.write_text(b.to_json())
    assert main(["mul", "--p", str(p), "--n", str(n), str(fa), str(fb), "--format", "json"]) == 0
    got = RingElement.from_json(capsys.readouterr().out)
    assert got == _mackey_product(p, n, a, b)


def test_mul_w_squared_over_c3(capsys):
    G = CyclicPGroup(3, 1)
    w = basis_element(G, Quintuple(0, 0, 0, 0)).to_json()
    assert main(["mul", "--p", "3", "--n", "1", w, w, "--format", "json"]) == 0
    out = capsys.readouterr().out
    assert RingElement.from_json(out) == basis_element(G, Quintuple(0, 0, 0, 0), 3)
    # output round-trips bit-exactly
    assert RingElement.from_json(out).to_json() == out.strip()
    main(["mul", "--p", "3", "--n", "1", w, w])
    assert capsys.readouterr().out.strip() == "3*(0,0;0,0)_1"


def test_mul_identity_via_stdin():
    G = CyclicPGroup(3, 2)
    a = RingElement(G, {Quintuple(2, 1, 1, 0, 2): 5, Quintuple(0, 0, 0, 0): -1})
    one = basis_element(G, Quintuple(2, 0, 2, 0))
    code, out, _ = run("mul", "--p", "3", "--n", "2", one.to_json(), "-", "--format", "json", stdin=a.to_json())
    assert code == 0 and RingElement.from_json(out) == a


@pytest.mark.parametrize(
    "args",
    [
        ["mul", "--p", "3", "--n", "1", "{bad", "{}"],
        ["mul", "--p", "3", "--n", "2", '{"p": 3, "n": 1, "terms": []}', '{"p": 3, "n": 2, "terms": []}'],
        ["mul", "--p", "3", "--n", "1", "/nonexistent/a.json", "/nonexistent/b.json"],
        ["basis", "--p", "4", "--n", "1"],
        ["verify", "--p", "4", "--n", "1"],
        ["units", "--p", "3", "--n", "-1"],
    ],
)
def test_input_errors_exit_2(args, capsys):
    assert main(args) == 2
    assert "error" in capsys.readouterr().err


def test_argparse_errors_exit_2():
    code, _, err = run("units", "--p", "3")
    assert code == 2 and "--n" in err


@pytest.mark.parametrize(
    "p, n, order, claimed",
    [(2, 1, 16, "C2 x D8"), (5, 1, 16, "C2^2 x C4"), (3, 2, 192, "C2^4 x C2 x C6")],
)
def test_units_match(p, n, order, claimed):
    code, out, _ = run("units", "--p", str(p), "--n", str(n), "--format", "json")
    obj = json.loads(out)
    assert code == 0
    assert obj["order"] == order and obj["claimed"] == claimed and obj["status"] == "MATCH"
    assert obj["solver"]["mode"] == "pruned"


def test_units_c2_text_output():
    code, out, _ = run("units", "--p", "2", "--n", "1")
    assert code == 0
    assert "order: 16" in out and "claimed: C2 x D8" in out and "status: MATCH" in out


def test_units_unverified_exit_4():
    code, out, _ = run("units", "--p", "2", "--n", "2")
    assert code == 4 and "UNVERIFIED" in out


def test_units_budget_exit_5():
    code, _, err = run("units", "--p", "3", "--n", "3", "--time-budget", "0")
    assert code == 5 and "budget" in err


def test_units_budget_env_exit_5(monkeypatch):
    monkeypatch.setenv("DBURNSIDE_TIME_BUDGET", "0")
    code, _, _ = run("units", "--p", "3", "--n", "3")
    assert code == 5


def test_units_oracle_mode(capsys):
    assert main(["units", "--p", "3", "--n", "1", "--mode", "oracle", "--bound", "4", "--format", "json"]) == 0
    obj = json.loads(capsys.readouterr().out)
    assert obj["solver"]["bound_used"] == 4 and obj["order"] == 16
    assert obj["status"] == "MATCH_IN_BOX"


def test_hdb(capsys):
    assert main(["hdb", "--p", "3", "--n", "2", "--format", "json"]) == 0
    obj = json.loads(capsys.readouterr().out)
    assert obj["fingerprint"]["order"] == 8 and obj["fingerprint"]["invariants"] == [2, 2, 2]


def test_verify_c3():
    code, out, _ = run("verify", "--p", "3", "--n", "1")
    assert code == 0
    assert "[FAIL]" not in out
    for suite in ("cocycle", "anti-involution", "idempotents", "dbinf", "h_db", "centrality", "units"):
        assert f"[PASS] {suite}" in out
    assert "f_N summand" in out and "(1, -1, -1, 3)" in out


def test_verify_c4_is_exploratory():
    code, out, _ = run("verify", "--p", "2", "--n", "2", "--format", "json")
    obj = json.loads(out)
    status = {s["suite"]: s["status"] for s in obj["suites"]}
    assert code == 4
    assert status.pop("units") == "EXPLORATORY"
    assert set(status.values()) == {"PASS"}
    assert len(obj["notes"]) == 2
