"""Acceptance suite: one test per criterion, each printing a single PASS/FAIL line.

The lines are collected into the terminal summary of any pytest run.
"""

import time
from fractions import Fraction

import numpy as np

from conftest import ACCEPTANCE_LINES

from aqd.analysis import (
    PRESETS, efficiency_fraction, eta_grid, leakage_bits,
    qsdc_amortized_efficiency, sweep, sweep_csv,
)
from aqd.pauligroup import PauliWord, generate, get_group, is_closed, is_subgroup, subgroups_of_order
from aqd.protocol import ProtocolConfig, random_message, resolve, run
from aqd.statelib import PASS, UNVERIFIED, verify_table1, verify_table2


def report(label, ok, detail=""):
    line = f"[{'PASS' if ok else 'FAIL'}] {label}: {detail}"
    print(line)
    ACCEPTANCE_LINES.append(line)
    assert ok, detail


def test_1_closed_form_reproduction():
    t0 = time.perf_counter()
    grid = eta_grid(0.05)
    worst = 0.0
    endpoints = {}
    for model in ("AD", "PD"):
        for t in (1, 2):
            pts = sweep(model, t, grid)
            assert len(pts) == 21
            worst = max(worst, max(p.abs_err for p in pts))
            endpoints[model, t] = (pts[0].fidelity_simulated, pts[-1].fidelity_simulated)
    elapsed = time.perf_counter() - t0
    expect = {("AD", 2): (1, 1 / 8), ("AD", 1): (1, 1 / 4), ("PD", 2): (1, 1 / 2), ("PD", 1): (1, 1 / 2)}
    ends_ok = all(np.allclose(endpoints[k], v, atol=1e-10) for k, v in expect.items())
    report("1 closed-form fidelity", worst < 1e-10 and elapsed < 10 and ends_ok,
           f"max err {worst:.2e} over 84 points, {elapsed:.2f}s, endpoints ok={ends_ok}")


def test_2_figure_dominance():
    grid = eta_grid(0.05)
    ok = True
    for model in ("AD", "PD"):
        one = [p.fidelity_simulated for p in sweep(model, 1, grid)]
        two = [p.fidelity_simulated for p in sweep(model, 2, grid)]
        ok &= abs(one[0] - two[0]) <= 1e-12
        ok &= all(a - b > 1e-12 for a, b in zip(one[1:-1], two[1:-1]))
        if model == "PD":
            ok &= abs(one[-1] - two[-1]) <= 1e-12
    report("2 one-travel curve dominates two-travel curve", ok, "interior strict, endpoint equalities hold")


def test_3_group_algebra():
    t0 = time.perf_counter()
    g2 = generate(["X.I", "I.X", "Z.I", "I.Z"])
    expected = {PauliWord.parse(f"{a}.{b}") for a in ("I", "X", "iY", "Z") for b in ("I", "X", "iY", "Z")}
    ok = g2.order == 16 and set(g2.canonical) == expected
    enumerated = {frozenset(h.canonical) for h in subgroups_of_order(g2, 8)}
    for i in range(1, 12):
        h = get_group(f"G2^{i}(8)")
        ok &= h.order == 8 and PauliWord.identity(2) in h and is_closed(h) and is_subgroup(h, g2)
        ok &= frozenset(h.canonical) in enumerated
    elapsed = time.perf_counter() - t0
    report("3 group algebra", ok and elapsed < 1, f"|G2|={g2.order}, 11 subgroups recovered, {elapsed:.3f}s")


def test_4_table_verification():
    t1, t2 = verify_table1(), verify_table2()
    required = [
        ("2-qubit Bell state", "G1"), ("3-qubit GHZ", "G2^4(8)"), ("3-qubit GHZ", "G2^5(8)"),
        ("4-qubit cluster state", "G2"),
    ]
    required += [("(|0001>+|0010>+|0111>+|1011>)/2", f"G2^{i}(8)") for i in (8, 9)]
    required += [("(|0000>+|0111>)/sqrt(2)", f"G2^{i}(8)") for i in (4, 5, 8, 9, 10, 11)]
    ok = all(t1.status(r, g) == PASS for r, g in required)
    undefined = [c for c in t1.cells if c.state is None]
    ok &= all(c.status == UNVERIFIED for c in undefined)
    ok &= t1.ok and t2.ok
    report("4 table verification", ok,
           f"table1 {t1.counts()}, table2 {t2.counts()}")


def test_5_protocol_round_trip():
    schemes = {"Bell 2:1": ("bell", "G1", "g1"), "GHZ 3:2": ("ghz", "G2^4(8)", "G1"),
               "cluster 4:2": ("cluster4", "G2", "G1"), "cluster 4:1": ("cluster4", "G2", "g1")}
    errors = 0
    for name, (state, bob, alice) in schemes.items():
        for seed in range(100):
            cfg = ProtocolConfig(state, bob, alice, copies=2, seed=seed)
            setup = resolve(cfg)
            rng = np.random.default_rng(10_000 + seed)
            bm = random_message(2 * setup.bob_bits, rng)
            am = random_message(2 * setup.alice_bits, rng)
            tr = run(cfg, bm, am)
            errors += tr.aborted
            errors += sum(x != y for x, y in zip(tr.decoded_bob_message, bm))
            errors += sum(x != y for x, y in zip(tr.decoded_alice_message, am))
    report("5 protocol round trip", errors == 0, f"{errors} bit errors over 4 schemes x 100 seeds")


def test_6_eavesdropping_detection():
    n = 10_000
    tr = run(ProtocolConfig("bell", "G1", "g1", decoy_per_leg=n, eve="intercept_resend",
                            error_threshold=1.0, seed=2024), "00", "0")
    rate = tr.legs[0].check["rate"]
    sigma = np.sqrt(0.25 * 0.75 / n)
    rate_ok = abs(rate - 0.25) <= 3 * sigma
    aborts = sum(run(ProtocolConfig("bell", "G1", "g1", decoy_per_leg=200, eve="intercept_resend",
                                    error_threshold=0.05, seed=s), "00", "0").aborted
                 for s in range(500))
    freq = aborts / 500
    report("6 eavesdropping detection", rate_ok and freq >= 0.999,
           f"decoy error rate {rate:.4f} (0.25 +/- {3 * sigma:.4f}), abort frequency {freq:.3f}")


def test_7_efficiency():
    expect = {"bell-qd": Fraction(4, 6), "cluster-qd": Fraction(8, 12), "cluster-aqd": Fraction(6, 10),
              "ghz-qd": Fraction(6, 10), "ghz-aqd": Fraction(5, 8)}
    got = {k: efficiency_fraction(PRESETS[k]) for k in expect}
    pct = {k: round(100 * float(v), 1) for k, v in got.items()}
    ok = got == expect and qsdc_amortized_efficiency(PRESETS["bell-qd"]) == Fraction(2, 3)
    ok &= list(pct.values()) == [66.7, 66.7, 60.0, 60.0, 62.5]
    report("7 qubit efficiency", ok, f"{pct}, QSDC Bell limit 2/3")


def test_8_leakage():
    ok = leakage_bits(2, 2) == 2 and leakage_bits(2, 4) == 4 > 2
    ok &= leakage_bits(2, 2, secret_initial_state=True) == 0
    ok &= leakage_bits(2, 4, secret_initial_state=True) == 0
    report("8 leakage accounting", ok, "leak(2,2)=2, leak(2,4)=4, secret state gives 0")


def test_9_determinism():
    cfg = ProtocolConfig("cluster4", "G2", "G2^1(8)", copies=3, noise={"kind": "AD", "rate": 0.1},
                         eve="intercept_resend", eve_fraction=0.5, error_threshold=1.0, seed=99)
    a = run(cfg, "1" * 12, "101" * 3).to_json().encode()
    b = run(cfg, "1" * 12, "101" * 3).to_json().encode()
    grid = eta_grid(0.1)
    c1 = sweep_csv(sweep("AD", 2, grid)).encode()
    c2 = sweep_csv(sweep("AD", 2, grid)).encode()
    report("9 determinism", a == b and c1 == c2, "transcripts and CSVs byte-identical")
