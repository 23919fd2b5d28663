"""Acceptance criteria, one test each, at the stated tolerances.

Every test records a single PASS/FAIL line (repeated in the terminal
summary) before asserting, so a red criterion still reports what it saw.
"""

import itertools
import random
import time

import pytest

from acceptance_log import record
from moves import KINK, applied_moves, generated_diagrams
from gen import try_move
from vkq import catalog, recoupling, wrt
from vkq.bracket import bracket
from vkq.cli import TABLE_CAP, fmt_complex
from vkq.laurent import LaurentFraction, delta_closed_form, delta_poly, eval_at_root, make_context
from vkq.recoupling import TLElement, jw_projector, twisted_theta, virtual_hopf_omega
from vkq.surface import TorusDiagram, blow_up, condition_s_check, condition_s_from_windings, o3_augment
from vkq.wrt import omega_bracket, z_invariant


def _plain(obj):
    return obj.to_virtual() if isinstance(obj, TorusDiagram) else obj


def _fresh_caches():
    wrt._omega_part.cache_clear()
    recoupling.fused_twisted_theta.cache_clear()


def test_criterion_01_delta_identities():
    t = time.perf_counter()
    bad = [n for n in range(25) if delta_poly(n) != delta_closed_form(n)]
    worst = max(abs(eval_at_root(delta_poly(r - 1), make_context(r))) for r in range(3, 9))
    dt = time.perf_counter() - t
    ok = not bad and worst < 1e-9 and dt < 1
    record(1, "Delta identities", ok, f"recursion = closed form for n<=24: {not bad}; max |Delta_(r-1)| = {worst:.1e}", dt)
    assert ok


def _tl_zero(x, exact):
    return len(x) == 0 if exact else (len(x) == 0 or x.max_abs() < 1e-9)


def _pad(T, n):
    while T.n < n:
        T = T.tensor_id()
    return T


def test_criterion_02_jones_wenzl():
    t = time.perf_counter()
    failures = []
    modes = [("generic", True, None)] + [(make_context(r), False, r) for r in range(3, 7)]
    for mode, exact, r in modes:
        top = 4 if exact else min(4, r - 2)
        for n in range(1, top + 1):
            T = jw_projector(n, mode)
            one = LaurentFraction(1) if exact else 1 + 0j
            tag = f"T_{n} at {'generic A' if exact else f'r={r}'}"
            for i in range(1, n):
                U = TLElement.generator(n, i, T.d, one)
                if not (_tl_zero(T * U, exact) and _tl_zero(U * T, exact)):
                    failures.append(f"{tag}: U_{i} not killed")
            if not _tl_zero(T * T - T, exact):
                failures.append(f"{tag}: not idempotent")
            for m in range(1, n):
                if not _tl_zero(T * _pad(jw_projector(m, mode), n) - T, exact):
                    failures.append(f"{tag}: T_n T_{m} != T_n")
            c = T.closure()
            want = LaurentFraction(delta_poly(n)) if exact else mode.delta(n)
            if (c != want) if exact else abs(c - want) > 1e-9:
                failures.append(f"{tag}: closure != Delta_{n}")
    dt = time.perf_counter() - t
    ok = not failures and dt < 10
    record(2, "Jones-Wenzl suite", ok, "; ".join(failures) or "all identities hold", dt)
    assert ok


def test_criterion_03_move_invariance():
    t = time.perf_counter()
    rng = random.Random(2024)
    diagrams = generated_diagrams(rng, 24)
    coverage: dict[str, int] = {}
    failures = []
    for k, d in enumerate(diagrams):
        b = bracket(d)
        per: dict[str, int] = {}
        for move, site, e in applied_moves(rng, d):
            if per.get(move, 0) >= 3:
                continue
            per[move] = per.get(move, 0) + 1
            coverage[move] = coverage.get(move, 0) + 1
            if bracket(e) != b * KINK.get(move, 1):
                failures.append(f"diagram {k} {move} {site}")
            if move == "R2":
                # undo through the bigon the move created
                for p, q in itertools.combinations([a for a in e.arcs() if a not in d.arcs()] + list(site[:2]), 2):
                    f = try_move(e, "R2^-1", (p, q))
                    if f is not None:
                        coverage["R2^-1"] = coverage.get("R2^-1", 0) + 1
                        if bracket(f) != b:
                            failures.append(f"diagram {k} R2^-1 {(p, q)}")
                        break
    dt = time.perf_counter() - t
    needed = {"R1+", "R1-", "R2", "R2^-1", "R3", "vR1", "vR2", "vR3", "mixed", "detour"}
    missing = needed - set(coverage)
    small = all(d.num_classical <= 6 for d in diagrams)
    ok = len(diagrams) >= 20 and small and not failures and not missing and dt < 30
    cov = " ".join(f"{m}:{coverage[m]}" for m in sorted(coverage))
    detail = f"{len(diagrams)} diagrams; moves {cov}"
    if failures:
        detail += f"; mismatches: {failures[:3]}"
    if missing:
        detail += f"; never applied: {sorted(missing)}"
    record(3, "bracket move invariance", ok, detail, dt)
    assert ok


def test_criterion_04_normalization():
    _fresh_caches()
    t = time.perf_counter()
    unknot = catalog.build("unknot0")
    worst = max(abs(z_invariant(unknot, r).value - 1) for r in range(3, 9))
    cells = {}
    for r, printed in catalog.MU_PRINTED.items():
        tol = 5e-4 if r == 5 else 5e-5
        z = z_invariant(catalog.build("empty"), r).value
        cells[r] = (z, printed, abs(z - printed) <= tol)
    dt = time.perf_counter() - t
    ok = worst < 1e-9 and all(c[2] for c in cells.values()) and dt < 5
    detail = f"max |Z(unknot0)-1| = {worst:.1e}; Z(empty) " + ", ".join(
        f"r={r} {fmt_complex(z)} vs {p}" for r, (z, p, _) in cells.items()
    ) + " (r=5 printed cell is a misprint of mu(5)=0.371748, tol 5e-4)"
    record(4, "normalization anchors", ok, detail, dt)
    assert ok


def test_criterion_05_blow_up():
    _fresh_caches()
    t = time.perf_counter()
    worst, where, skipped = 0.0, None, []
    for name in catalog.builders:
        d = _plain(catalog.build(name))
        for r in (3, 4, 5):
            z = z_invariant(d, r, cap=TABLE_CAP).value
            for sign in (1, -1):
                zb = z_invariant(blow_up(d, sign), r, cap=TABLE_CAP).value
                if abs(zb - z) > worst:
                    worst, where = abs(zb - z), (name, r, sign)
    dt = time.perf_counter() - t
    ok = worst < 1e-6 and dt < 120
    record(5, "blow-up invariance", ok,
           f"{len(catalog.builders)} corpus entries x r=3,4,5 x (+1,-1); max deviation {worst:.1e} at {where}", dt)
    assert ok


def test_criterion_06_hopf_is_mu():
    _fresh_caches()
    t = time.perf_counter()
    devs = {r: abs(z_invariant(catalog.build("hopf0"), r).value - make_context(r).mu) for r in (3, 4, 5)}
    dt = time.perf_counter() - t
    ok = max(devs.values()) < 1e-6 and dt < 10
    record(6, "Kirby oracle (Hopf = mu)", ok, "|Z(hopf0)-mu| " + ", ".join(f"r={r} {v:.1e}" for r, v in devs.items()), dt)
    assert ok


def test_criterion_07_twisted_theta():
    _fresh_caches()
    t = time.perf_counter()
    worst_theta = 0.0
    for r in (3, 4, 5):
        ctx = make_context(r)
        for a in range(r - 1):
            worst_theta = max(worst_theta, abs(twisted_theta(a, a, 0, ctx) - ctx.delta(a)))
    net = {}
    vh = catalog.build("virtual-hopf")
    for r in (3, 4, 5):
        ctx = make_context(r)
        net[r] = abs(virtual_hopf_omega(ctx) - omega_bracket(vh, ctx))
    dt = time.perf_counter() - t
    ok = worst_theta < 1e-6 and max(net.values()) < 1e-6 and dt < 60
    detail = f"max |theta~(a,a,0)-Delta_a| = {worst_theta:.1e}; virtual-Hopf net vs direct " + ", ".join(
        f"r={r} {v:.1e}" for r, v in net.items()
    )
    record(7, "twisted theta", ok, detail, dt)
    assert ok


def test_criterion_08_table_regression():
    _fresh_caches()
    t = time.perf_counter()
    mismatches, passes, report, unrec = [], 0, [], []
    for row in catalog.TABLE_ROWS:
        if not row.pinned:
            unrec.append(row.label)
            continue
        for name in row.members:
            subject = catalog.build(name)
            subject = subject if subject.wraps else subject.diagram
            for r in (3, 4, 5):
                z = z_invariant(subject, r, cap=TABLE_CAP).value
                exp = row.expected.get(r)
                if exp is None:
                    report.append(f"{name} r={r} {fmt_complex(z)}")
                elif abs(z - exp) <= row.tol(r):
                    passes += 1
                else:
                    mismatches.append(f"{name} r={r} got {fmt_complex(z)} want {fmt_complex(exp)}")
    dt = time.perf_counter() - t
    ok = not mismatches and dt < 600
    detail = f"{passes} pinned cells match; mismatches: {'; '.join(mismatches) or 'none'}; " \
             f"report only: {'; '.join(report)}; unreconstructed rows: {', '.join(unrec)}"
    record(8, "reference table regression", ok, detail, dt)
    assert ok, detail


def test_criterion_09_o3_sensitivity():
    t = time.perf_counter()
    z1 = z_invariant(catalog.build("A1"), 3).value
    z2 = z_invariant(catalog.build("A2"), 3).value
    gap = abs(z1 - z2)
    dt = time.perf_counter() - t
    ok = gap > 1e-3
    record(9, "O3 sensitivity", ok, f"Z(A1)={fmt_complex(z1)} Z(A2)={fmt_complex(z2)} |diff|={gap:.1e} (needs > 1e-3)", dt)
    assert ok


def test_criterion_10_condition_s():
    t = time.perf_counter()
    empty = TorusDiagram(catalog.build("empty"), {})
    v0 = condition_s_check(empty).verdict
    v1 = condition_s_check(o3_augment(o3_augment(empty, (1, 0)), (0, 1))).verdict
    v2 = condition_s_from_windings({"a": (2, 0), "b": (0, 1)}).verdict
    dt = time.perf_counter() - t
    ok = (v0, v1, v2) == ("not verified", "verified", "not verified") and dt < 1
    record(10, "condition-S checker", ok, f"empty: {v0}; after O3 (1,0),(0,1): {v1}; {{(2,0),(0,1)}}: {v2}", dt)
    assert ok


if __name__ == "__main__":
    import sys

    sys.exit(pytest.main([__file__, "-q"]))
