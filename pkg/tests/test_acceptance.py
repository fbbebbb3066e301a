"""Acceptance criteria 1-12 at their stated sample counts and tolerances.

Each test records a one-line verdict that the terminal summary prints as
``PASS``/``FAIL  criterion N: ...``.  Run standalone with
``python3 tests/test_acceptance.py`` to print the same lines without pytest.
"""
import json
import math
import random
from fractions import Fraction as F

import pytest

from qdelaunay import (
    PointSet, QuadraticForm, angle_sequence, augment_to_sphere, brute_force_delaunay, center_form, circumball,
    compare_fatness, contains, delaunay, edge_angle, enumerate_triangulations, full_decomposition, gabriel,
    inside_via_projective_line, interior_angles, inverse_voronoi, mst, optimality_check, rng, spacelike_component,
    timelike_angle, validate_disk, validate_sphere, verify, voronoi, weights_from_delaunay,
)
from qdelaunay import io
from qdelaunay.angles2d import angle, minkowski_angle, opposite_angle_sum
from qdelaunay.cli import run
from qdelaunay.delaunay import make_complex
from qdelaunay.proximity import exhaustive_mst, in_diameter_ball
from qdelaunay.render import conic_polylines, default_viewport
from qdelaunay.transforms import (
    DegenerationSplit, apply_affine, euclidean_rotation, group_g_element, isometry, limit_harness,
    minkowski_boost, moebius_delaunay_check, special_conformal,
)
from qdelaunay.voronoi import vertex_set

from conftest import ACCEPTANCE
from sampling import FORMS, sets, spacelike_generic

E, M, DG = FORMS["euclidean"], FORMS["minkowski"], FORMS["degenerate"]
M3 = QuadraticForm.diag([1, 1, -1])
FLAT = {"euclidean": math.pi, "minkowski": 0.0, "degenerate": 0.0}


def record(k, ok, detail):
    ACCEPTANCE[k] = (ok, detail)
    return ok


def _pt(rnd, span=40, den=10):
    return (F(rnd.randint(-span, span), den), F(rnd.randint(-span, span), den))


def _d(p, q):
    return (p[0] - q[0], p[1] - q[1])


# ---------------------------------------------------------------- 1. oracle

def check_oracle():
    mismatches, count = 0, 0
    for k, form in enumerate(FORMS):
        for X in sets(form, 70, seed=100 + k):
            count += 1
            mismatches += delaunay(FORMS[form], X).cells != brute_force_delaunay(FORMS[form], X).cells
    rnd = random.Random(110)
    count3 = 0
    for _ in range(20):
        X = spacelike_generic(M3, rnd.randint(5, 7), rnd)
        count3 += 1
        mismatches += delaunay(M3, X).cells != brute_force_delaunay(M3, X).cells
    return record(1, mismatches == 0, f"{count} planar sets + {count3} sets in R^(2,1), {mismatches} mismatches")


# ------------------------------------------------------------ 2. uniqueness

def check_uniqueness():
    bad, count = 0, 0
    for k, form in enumerate(FORMS):
        Q = FORMS[form]
        for X in sets(form, 17, seed=200 + k, n_range=(4, 7)):
            count += 1
            passing = [t for t in enumerate_triangulations(X) if verify(make_complex(Q, X, t, "delaunay")).ok]
            bad += len(passing) != 1
    return record(2, bad == 0, f"{count} sets, {bad} without exactly one verified triangulation")


# --------------------------------------------------------------- 3. Voronoi

def check_voronoi():
    bad, count = 0, 0
    for k, form in enumerate(("euclidean", "minkowski")):
        Q = FORMS[form]
        for X in sets(form, 100, seed=300 + k):
            count += 1
            del_centers = {center_form(b).center for b in delaunay(Q, X).balls}
            full_centers = {center_form(b).center for b in full_decomposition(Q, X).balls}
            bad += vertex_set(voronoi(Q, X)) != del_centers or vertex_set(inverse_voronoi(Q, X)) != full_centers
    return record(3, bad == 0, f"{count} sets, {bad} vertex/center mismatches")


# ----------------------------------------------------------------- 4. limit

T_SWEEP = [F(1, 10 ** k) for k in range(1, 7)]


def limit_configs(seed, count):
    rnd = random.Random(seed)
    out = []
    while len(out) < count:
        n = rnd.randint(4, 7)
        ys = rnd.sample(range(-20, 21), n)
        vs = [F(rnd.randint(-30, 30), 10) for _ in range(n)]
        X = PointSet.from_coords([(F(y, 2), v) for y, v in zip(ys, vs)])
        try:
            delaunay(DG, X)
        except ValueError:
            continue
        out.append(([(F(y, 2),) for y in ys], [(v,) for v in vs]))
    return out


def check_limit():
    failures, count = [], 0
    for Q in (E, M):
        for base, vel in limit_configs(400, 50):
            count += 1
            try:
                r = limit_harness(Q, base, vel, T_SWEEP)
            except ValueError as exc:
                failures.append(str(exc))
                continue
            if not all(row["match"] for row in r.per_t if row["t"] <= r.threshold):
                failures.append("mismatch below threshold")
    return record(4, not failures, f"{count} configurations over both forms, {len(failures)} without a threshold")


# ------------------------------------------------------------ 5. invariance

def check_invariance():
    rnd = random.Random(500)
    bad, moves = 0, {"euclidean": 0, "minkowski": 0, "degenerate": 0}
    for X in sets("euclidean", 20, seed=501):
        g = isometry(E, euclidean_rotation(F(rnd.randint(-20, 20), rnd.randint(1, 20))), _pt(rnd))
        bad += delaunay(E, apply_affine(g, X)).cells != delaunay(E, X).cells
        moves["euclidean"] += 1
    for X in sets("minkowski", 20, seed=502):
        g = isometry(M, minkowski_boost(F(rnd.randint(-9, 9), 10)), _pt(rnd))
        bad += delaunay(M, apply_affine(g, X)).cells != delaunay(M, X).cells
        moves["minkowski"] += 1
    # group G of the degenerate form, reached through the degenerate split itself
    # and through the splits of the two non-degenerate forms (C block = +-1 there)
    splits = [(DegenerationSplit.from_form(DG, 1), None), (DegenerationSplit.from_form(E, 1), 1),
              (DegenerationSplit.from_form(M, 1), 1)]
    for X in sets("degenerate", 30, seed=503):
        split, unit = rnd.choice(splits)
        c = rnd.choice([-1, 1]) if unit else F(rnd.choice([-1, 1]) * rnd.randint(1, 12), 4)
        g = group_g_element(split, [[rnd.choice([-1, 1])]], [[F(rnd.randint(-12, 12), 4)]], [[c]], _pt(rnd))
        bad += delaunay(DG, apply_affine(g, X)).cells != delaunay(DG, X).cells
        moves["degenerate"] += 1
    detail = ", ".join(f"{v} {k}" for k, v in moves.items())
    return record(5, bad == 0 and min(moves.values()) >= 20, f"{detail} transformed sets, {bad} changed")


# --------------------------------------------------------------- 6. Moebius

def random_ball(Q, rnd):
    while True:
        try:
            return circumball(Q, [_pt(rnd) for _ in range(3)])
        except ValueError:
            continue


def check_moebius():
    rnd = random.Random(600)
    disagree = 0
    for k in range(1002):
        Q = (E, M, DG)[k % 3]
        ball = random_ball(Q, rnd)
        x = _pt(rnd)
        disagree += inside_via_projective_line(Q, ball, x) != contains(ball, x)
    paths, changed = 0, 0
    for form, seed in (("euclidean", 601), ("minkowski", 602)):
        Q = FORMS[form]
        for X in sets(form, 10, seed=seed):
            c = (F(rnd.randint(-9, 9), 1000), F(rnd.randint(-9, 9), 1000))
            path = [special_conformal(Q, (c[0] * s / 8, c[1] * s / 8)) for s in range(9)]
            r = moebius_delaunay_check(Q, X, path[-1], path)
            if r.condition_holds:
                paths += 1
                changed += not r.combinatorics_equal
    ok = disagree == 0 and paths >= 10 and changed == 0
    return record(6, ok, f"1002 ball/point pairs, {disagree} disagreements; {paths} avoiding paths, {changed} changed")


# ---------------------------------------------------------------- 7. angles

def hyperbola(r, s):
    return (r * (s - 1 / s) / 2, r * (s + 1 / s) / 2)


def thales_cases(Q, rnd, count):
    done = 0
    while done < count:
        p1, p2, p3, p4, p5 = (_pt(rnd) for _ in range(5))
        try:
            keys = {spacelike_component(Q, p, p1, p2) for p in (p3, p4, p5)}
            ball = circumball(Q, [p1, p2, p3])
        except ValueError:
            continue
        if Q(_d(p1, p2)) <= 0 or len(keys) != 1:
            continue
        side = {(p2[0] - p1[0]) * (p[1] - p1[1]) - (p2[1] - p1[1]) * (p[0] - p1[0]) > 0 for p in (p3, p4, p5)}
        if len(side) != 1 or contains(ball, p4) != "inside" or contains(ball, p5) != "outside":
            continue
        done += 1
        yield [angle(Q, _d(p1, p), _d(p2, p)) for p in (p4, p3, p5)]


def check_angles():
    sum_bad = tri = 0
    for k, form in enumerate(FORMS):
        for X in sets(form, 170, seed=700 + k, n_range=(3, 3)):
            tri += 1
            sum_bad += abs(sum(interior_angles(FORMS[form], X.points)) - FLAT[form]) > 1e-10
    edge_bad = cx = 0
    for k, form in enumerate(FORMS):
        for X in sets(form, 34, seed=710 + k):
            cx += 1
            c = delaunay(FORMS[form], X)
            edge_bad += any(abs(edge_angle(FORMS[form], c, e) - opposite_angle_sum(FORMS[form], c, e)) > 1e-9
                            for e in c.edges())
    rnd = random.Random(720)
    half_bad = 0
    for _ in range(100):
        r = F(rnd.randint(1, 20), 4)
        a, b, c = (hyperbola(r, F(s, 10)) for s in rnd.sample(range(1, 80), 3))
        half_bad += abs(abs(minkowski_angle(_d(b, a), _d(c, a))) - timelike_angle(b, c) / 2) > 1e-9
    thales_bad = thales = 0
    for Q in (E, M, DG):
        for seen in thales_cases(Q, rnd, 67):
            thales += 1
            thales_bad += not seen[0] > seen[1] > seen[2]
    ok = not (sum_bad or edge_bad or half_bad or thales_bad)
    return record(7, ok, f"sums {sum_bad}/{tri} off, edge angles {edge_bad}/{cx} off, "
                         f"half-angle {half_bad}/100 off, Thales {thales_bad}/{thales} off")


# --------------------------------------------------------------- 8. fatness

def fatness_counts(form, count=50, seed=800):
    """(strictly fattest, exact ties, not fattest) over ``count`` random sets."""
    Q = FORMS[form]
    strict = ties = lost = 0
    for X in sets(form, count, seed=seed, n_range=(4, 7)):
        d = delaunay(Q, X).cells
        ds = angle_sequence(Q, X, d)
        cmp = [compare_fatness(ds, angle_sequence(Q, X, t)) for t in enumerate_triangulations(X) if t != d]
        if any(v < 0 for v in cmp):
            lost += 1
        elif any(v == 0 for v in cmp):
            ties += 1
        else:
            strict += 1
    return strict, ties, lost


def check_fatness():
    counts = {form: fatness_counts(form) for form in FORMS}
    ok = all(c[2] == 0 for c in counts.values())
    detail = "; ".join(f"{f} fattest {s + t}/50 (ties {t})" for f, (s, t, _) in counts.items())
    if not ok:
        detail += " -- theorem fails for indefinite and degenerate forms, see counterexample analysis"
    return record(8, ok, detail), counts


# ---------------------------------------------------------- 9. edge weights

def check_weights():
    bad = count = 0
    for k, form in enumerate(("minkowski", "degenerate")):
        for X in sets(form, 50, seed=900 + k):
            count += 1
            g = weights_from_delaunay(FORMS[form], X)
            bad += not (validate_disk(g, 1e-9).ok and validate_sphere(augment_to_sphere(g), 1e-9).ok)
    return record(9, bad == 0, f"{count} sets, {bad} failing (1)-(4) or (i)-(iii)")


# ------------------------------------------------------------- 10. proximity

def has_length_tie(Q, X):
    sq = [Q(_d(X[i], X[j])) for i in range(len(X)) for j in range(i)]
    return len(set(sq)) < len(sq)


def check_proximity():
    # MST <= RNG needs distinct pairwise lengths: on a tie the strict RNG can drop every tied edge.
    # Tie sets are drawn too; they must satisfy RNG <= GG <= Del and are reported separately.
    chain_bad = count = ties = tie_kept = mst_bad = small = 0
    for k, form in enumerate(FORMS):
        Q = FORMS[form]
        drawn = 0
        for X in sets(form, 120, seed=1000 + k):
            if drawn == 34:
                break
            m, r, d = mst(Q, X).edge_set(), rng(Q, X).edge_set(), delaunay(Q, X).edges()
            ok = r <= d
            if not Q.is_degenerate:
                g = gabriel(Q, X).edge_set()
                ok = ok and r <= g <= d
            if has_length_tie(Q, X):
                ties += 1
                tie_kept += m <= r
            else:
                drawn += 1
                ok = ok and m <= r
            chain_bad += not ok
            if len(X) <= 7:
                small += 1
                mst_bad += tuple(sorted(mst(Q, X).edges)) not in exhaustive_mst(Q, X)
        count += drawn
    rnd = random.Random(1010)
    lemma_bad = hits = 0
    while hits < 500:
        Q = (E, M)[hits % 2]
        x, y, z = (_pt(rnd, 30, 5) for _ in range(3))
        qs = [Q(_d(z, x)), Q(_d(z, y)), Q(_d(x, y))]
        if min(qs) > 0 and in_diameter_ball(Q, x, y, z):
            hits += 1
            lemma_bad += not (qs[0] < qs[2] and qs[1] < qs[2])
    ok = not (chain_bad or mst_bad or lemma_bad) and count >= 100
    return record(10, ok, f"chain {chain_bad}/{count + ties} broken ({count} tie-free sets; MST <= RNG also held on "
                          f"{tie_kept}/{ties} sets with a length tie), MST vs exhaustive {mst_bad}/{small} off, "
                          f"diameter-ball lemma {lemma_bad}/{hits} off")


# ---------------------------------------------------------------- 11. interp

def check_interp():
    bad = count = 0
    for k, form in enumerate(FORMS):
        for X in sets(form, 30, seed=1100 + k, n_range=(4, 7)):
            count += 1
            bad += not all(optimality_check(FORMS[form], X, p, rel_tol=1e-9).delaunay_minimal for p in (1, 2, "inf"))
    return record(11, bad == 0, f"{count} sets x p in (1, 2, inf), {bad} where Delaunay is not minimal")


# ------------------------------------------------------------------- 12. CLI

def roundtrips(form, X):
    Q = FORMS[form]
    back = lambda doc: io.loads(io.dumps(doc))  # noqa: E731
    c, f = delaunay(Q, X), full_decomposition(Q, X)
    ok = io.form_from_json(back(io.form_to_json(Q))) == Q
    ok &= io.pointset_from_json(back(io.pointset_to_json(X))) == X
    ok &= all(io.ball_from_json(back(io.ball_to_json(b))) == b for b in c.balls)
    for cx in (c, f):
        r = io.complex_from_json(back(io.complex_to_json(cx)))
        ok &= (r.cells, r.balls, r.kind) == (cx.cells, cx.balls, cx.kind)
    if not Q.is_degenerate:
        for inv in (False, True):
            cells = (inverse_voronoi if inv else voronoi)(Q, X)
            ok &= io.voronoi_from_json(back(io.voronoi_to_json(Q, X, cells, inv))) == cells
        g = gabriel(Q, X)
        ok &= io.proximity_graph_from_json(back(io.proximity_graph_to_json(g)), X.labels) == g
    else:
        g = mst(Q, X)
        ok &= io.proximity_graph_from_json(back(io.proximity_graph_to_json(g)), X.labels) == g
    if form != "euclidean":
        w = weights_from_delaunay(Q, X)
        for h in (w, augment_to_sphere(w)):
            r = io.weighted_graph_from_json(back(io.weighted_graph_to_json(h)))
            ok &= (r.weights, r.faces, r.exterior_cycle, r.spherical) == (h.weights, h.faces, h.exterior_cycle, h.spherical)
    return ok


def conic_gap(Q, X):
    """Largest distance from a cell vertex to the sampled conic of its cell."""
    c = delaunay(Q, X)
    vp = default_viewport(X.points)
    worst = 0.0
    for cell, ball in zip(c.cells, c.balls):
        lines = conic_polylines(ball, vp, 256, [X[i] for i in cell])
        for i in cell:
            worst = max(worst, min(math.hypot(x - float(X[i][0]), y - float(X[i][1])) for line in lines for x, y in line))
    return worst


def check_cli(tmp):
    rt_bad = count = 0
    gap = 0.0
    for k, form in enumerate(FORMS):
        for X in sets(form, 10, seed=1200 + k):
            count += 1
            rt_bad += not roundtrips(form, X)
            gap = max(gap, conic_gap(FORMS[form], X))
    reruns_bad = 0
    for form in FORMS:
        outs = []
        for k in range(2):
            out, svg = tmp / f"{form}{k}.json", tmp / f"{form}{k}.svg"
            code = run(["del", "--form", form, "--random", "7", "--seed", "5", "--out", str(out), "--svg", str(svg)])
            outs.append((code, out.read_bytes(), svg.read_bytes()))
        reruns_bad += outs[0] != outs[1] or outs[0][0] != 0
    ok = rt_bad == 0 and gap <= 1e-6 and reruns_bad == 0
    return record(12, ok, f"{count} round-trip suites, {rt_bad} lossy; worst conic gap {gap:.1e}; "
                          f"{reruns_bad}/3 reruns differ")


# ------------------------------------------------------------------ tests

def test_01_oracle_equivalence():
    assert check_oracle()


def test_02_uniqueness():
    assert check_uniqueness()


def test_03_voronoi_duality():
    assert check_voronoi()


def test_04_rescaled_limit():
    assert check_limit()


def test_05_invariance():
    assert check_invariance()


def test_06_moebius():
    assert check_moebius()


def test_07_angle_identities():
    assert check_angles()


@pytest.fixture(scope="module")
def fatness():
    return check_fatness()[1]


def test_08_fatness_euclidean(fatness):
    assert fatness["euclidean"][2] == 0


@pytest.mark.xfail(strict=True, reason=(
    "Delaunay is not always the fattest triangulation for indefinite or degenerate forms: on "
    "(0,0),(3,0),(5,1),(-3,-5/2) with x^2 - y^2 the flip has the larger minimum angle"))
@pytest.mark.parametrize("form", ["minkowski", "degenerate"])
def test_08_fatness_non_euclidean(fatness, form):
    assert fatness[form][2] == 0


def test_09_edge_weights():
    assert check_weights()


def test_10_proximity_chain():
    assert check_proximity()


def test_11_interpolation_optimality():
    assert check_interp()


def test_12_cli_formats(tmp_path):
    assert check_cli(tmp_path)


if __name__ == "__main__":
    import tempfile
    from pathlib import Path

    with tempfile.TemporaryDirectory() as tmp:
        for check in (check_oracle, check_uniqueness, check_voronoi, check_limit, check_invariance, check_moebius,
                      check_angles, check_fatness, check_weights, check_proximity, check_interp):
            check()
        check_cli(Path(tmp))
    for k in sorted(ACCEPTANCE):
        ok, detail = ACCEPTANCE[k]
        print(f"{'PASS' if ok else 'FAIL'}  criterion {k:>2}: {detail}")
    print(json.dumps({"passed": sum(ok for ok, _ in ACCEPTANCE.values()), "total": len(ACCEPTANCE)}))
