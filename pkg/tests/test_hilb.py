import random
from fractions import Fraction

import pytest

from dihedral_mckay.charts import verify_gluing
from dihedral_mckay.hilb import (
    ClusterPoint,
    boundary_intersection_numbers,
    boundary_strict_transforms,
    build_flop_atlas,
    cluster_dimension,
    cluster_ideal,
    displayed_gluing,
    fixed_points,
    flop_em,
    half_index,
    invariant_chart_boundary,
    master_identity_holds,
    poly_bridges,
    refdiv_data,
    stage_chain,
    surface_atlas,
    z2_image,
    z2_image_ideal_check,
)
from dihedral_mckay.polyring import buchberger, parse_poly, staircase


def cp(i, a, b):
    return ClusterPoint(i, Fraction(a), Fraction(b))


def test_cluster_ideal_n4_matches_explicit_generators():
    # <x^2 + y^2, x^3, xy, y^3> generates the same ideal as I_2(1:-1)
    ideal = cluster_ideal(4, cp(2, 1, -1))
    other = buchberger(
        [parse_poly(s) for s in ("x^3", "y^3", "x*y", "x^2 + y^2")]
    )
    assert ideal == other
    assert staircase(ideal).dim == 4


def test_cluster_dimension_examples():
    assert cluster_dimension(5, cp(2, 0, 1)) == 5
    ideal = cluster_ideal(5, cp(2, 0, 1))
    assert sorted(str(g) for g in ideal.groebner) == ["x*y", "x^3", "y^3"]
    for n in (3, 4, 7):
        assert cluster_dimension(n, cp(1, 1, 0)) == n


def test_cluster_dimension_randomized():
    rng = random.Random(99)
    for n in range(3, 21):
        for _ in range(12):
            i = rng.randint(1, n - 1)
            a = Fraction(rng.randint(-9, 9), rng.randint(1, 9))
            b = Fraction(rng.randint(-9, 9), rng.randint(1, 9))
            if a == 0 and b == 0:
                a = Fraction(1)
            assert cluster_dimension(n, cp(i, a, b)) == n


def test_z2_image():
    assert z2_image(4, cp(2, 1, -1)) == cp(2, 1, -1).canonical()
    assert z2_image(5, cp(1, 1, 3)) == cp(4, 3, 1).canonical()
    # I_2(0:1) and I_3(1:0) are the same ideal for n = 5
    assert cluster_ideal(5, cp(2, 0, 1)) == cluster_ideal(5, cp(3, 1, 0))


def test_z2_image_is_ideal_level_involution():
    rng = random.Random(3)
    for n in (3, 4, 5, 8):
        for _ in range(6):
            i = rng.randint(1, n - 1)
            p = cp(i, rng.randint(-5, 5), rng.randint(1, 5))
            assert z2_image_ideal_check(n, p)
            assert z2_image(n, z2_image(n, p)) == p.canonical()


def test_fixed_points():
    pts, _ = zip(*fixed_points(4))
    assert set(p.label for p in pts) == {"I2(1:1)", "I2(1:-1)"}
    pts5, certs5 = zip(*fixed_points(5))
    assert [p.label for p in pts5] == ["I2(0:1)"]
    assert certs5[0]["quotient_dim"] == 5
    pts3, _ = zip(*fixed_points(3))
    assert [p.label for p in pts3] == ["I1(0:1)"]
    for n in range(3, 26):
        assert len(fixed_points(n)) == (2 if n % 2 == 0 else 1)


def test_boundary_strict_transforms_even():
    st = boundary_strict_transforms(4)
    rec = st[("B1", "U2")]
    assert str(rec["strict"]) == "x^2 + 2*x + 1"
    meet = rec["certificate"]["meetings"]
    assert {m["axis"] for m in meet} == {"Et2"}
    assert meet[0]["point"] == "I2(1:-1)" and meet[0]["mult"] == 2
    rec2 = st[("B2", "U2")]
    assert str(rec2["strict"]) == "x^2 - 2*x + 1"
    assert rec2["certificate"]["meetings"][0]["point"] == "I2(1:1)"
    # every chart outside U_(n/2), U_(n/2 + 1) misses the axes
    for n in (4, 6, 10):
        st = boundary_strict_transforms(n)
        named = {f"U{n // 2}", f"U{n // 2 + 1}"}
        for (label, cname), rec in st.items():
            if cname in named:
                assert rec["certificate"]["type"] == "meets-axes"
            else:
                assert rec["certificate"]["type"] == "misses-axes"


def test_boundary_strict_transforms_odd():
    for n in (3, 5, 9):
        m = half_index(n)
        st = boundary_strict_transforms(n)
        for (label, cname), rec in st.items():
            if cname == f"U{m + 1}":
                meets = rec["certificate"]["meetings"]
                # tangency: both axes meet at the corner point with mult 2
                assert {t["axis"] for t in meets} == {f"Et{m}", f"Et{m + 1}"}
                assert all(t["mult"] == 2 and t["root"] == "0" for t in meets)
                pts = {t["point"] for t in meets}
                assert pts == {f"I{m}(0:1)", f"I{m + 1}(1:0)"}
            else:
                assert rec["certificate"]["type"] == "misses-axes"


def test_invariant_chart_and_master_identity():
    for n in (3, 5, 7, 11):
        assert master_identity_holds(n)
        inv = invariant_chart_boundary(n)
        assert inv["tangency"] == 2
        assert inv["report"] == [{"root": Fraction(0), "mult": 2}]
    assert master_identity_holds(4) and master_identity_holds(10)


def test_boundary_intersection_numbers():
    assert boundary_intersection_numbers(5) == {"B3": {"E1": 0, "E2": 2}}
    assert boundary_intersection_numbers(4) == {
        "B1": {"E1": 0, "E2": 1},
        "B2": {"E1": 0, "E2": 1},
    }
    nums = boundary_intersection_numbers(12)
    assert nums["B1"] == {f"E{i}": (1 if i == 6 else 0) for i in range(1, 7)}
    nums9 = boundary_intersection_numbers(9)
    assert nums9["B3"] == {f"E{i}": (2 if i == 4 else 0) for i in range(1, 5)}


def test_surface_atlas_gluings():
    for n in (5, 7, 9):
        atlas = surface_atlas(n)
        m = half_index(n)
        names = [c.name for c in atlas.charts]
        assert names == [f"A{i}" for i in range(1, m + 1)] + ["Ainv"]
        adj = atlas.adjacency()
        want = [(f"A{i}", f"A{i + 1}") for i in range(1, m)]
        want.append((f"A{m}", "Ainv"))
        assert sorted(adj) == sorted(want)
    # even atlases glue monomially except across the (A_{m-1}, A_m) bridge
    for n in (6, 8):
        atlas = surface_atlas(n)
        m = half_index(n)
        adj = set(atlas.adjacency())
        for i in range(1, m - 1):
            assert (f"A{i}", f"A{i + 1}") in adj
        assert (f"A{m}", f"A{m + 1}") in adj
        assert (f"A{m - 1}", f"A{m}") not in adj


def test_refdiv_data_odd():
    for n in (5, 7):
        m = half_index(n)
        for k in range(1, m + 1):
            cert = refdiv_data(n, k)
            want = {f"E{j}": (1 if j == k else 0) for j in range(1, m + 1)}
            assert cert["intersections"] == want
        c1 = refdiv_data(n, 1)
        assert c1["transversal_point_u"] == "1"
        cm = refdiv_data(n, m)
        assert any("boundary" in note for note in cm["notes"])


def test_refdiv_data_even():
    for n in (4, 6, 8):
        m = half_index(n)
        for k in range(1, m + 1):
            cert = refdiv_data(n, k)
            want = {f"E{j}": (1 if j == k else 0) for j in range(1, m + 1)}
            assert cert["intersections"] == want
    with pytest.raises(ValueError):
        refdiv_data(6, 5)


def test_flop_atlas_odd():
    for n in (3, 5, 7):
        m = half_index(n)
        chain = stage_chain(n)
        assert len(chain) == m
        counts = []
        for stage in chain:
            fa = build_flop_atlas(n, stage)
            counts.append(len(fa.curve_tags))
            names = [c.name for c in fa.atlas.charts]
            assert len(names) == len(set(names))
        assert counts == list(range(m, 0, -1))
        top = build_flop_atlas(n, chain[0])
        assert len(top.atlas.charts) == m + 2
        assert top.floppable["curve"] == f"E{m}"
        assert top.floppable["coords"] == f"(f1 : (xy)^{m})"


def test_flop_atlas_even():
    for n in (4, 6, 8):
        m = half_index(n)
        chain = stage_chain(n)
        assert len(chain) == m
        counts = [len(build_flop_atlas(n, s).curve_tags) for s in chain]
        assert counts == list(range(m, 0, -1))
        top = build_flop_atlas(n, chain[0])
        assert top.floppable["coords"] == f"(f1^2 : (xy)^{m})"


def test_displayed_gluing_and_flop():
    for n in (3, 4, 5, 6, 7, 8, 9, 10):
        d = displayed_gluing(n)
        assert d["verified"], (n, d)
        f = flop_em(n)
        assert f["before_glues"] and f["after_glues"]
        assert f["before"] == (f"U{half_index(n)}''", f"U{half_index(n) + 1}'")
        assert f["after"] == (f"U{half_index(n)}'", f"U{half_index(n) + 1}")


def test_flop_stage_chain_gluings():
    # all monomially-glued consecutive pairs in each stage verify
    for n in (5, 6):
        for stage in stage_chain(n):
            fa = build_flop_atlas(n, stage)
            adj = fa.atlas.adjacency()
            assert adj, (n, stage)
            for tag in fa.curve_tags[:-1]:
                a, b = tag["charts"]
                if n % 2 or int(a[1]) < half_index(n) - 1:
                    assert (a, b) in adj or (b, a) in adj


def test_poly_bridges():
    for n in (5, 7):
        fa = build_flop_atlas(n, stage_chain(n)[0])
        bridges = poly_bridges(n, fa.atlas)
        assert bridges and all(b["verified"] for b in bridges)
    for n in (6, 8):
        fa = build_flop_atlas(n, stage_chain(n)[0])
        bridges = poly_bridges(n, fa.atlas)
        assert bridges and all(b["verified"] for b in bridges)


def test_flop_chart_u1p_definition():
    # U_1' = Spec C[z/f2, f1, xy]: exponents over (x, y, z, f1, f2)
    from dihedral_mckay.hilb import _flop_chart_rows

    rows = _flop_chart_rows(5)
    assert rows["U1'"] == (
        (0, 0, 1, 0, -1),
        (0, 0, 0, 1, 0),
        (1, 1, 0, 0, 0),
    )


def test_nonadjacent_flop_charts_do_not_glue():
    # every U3' coordinate IS a Laurent monomial in U1'' coordinates, but
    # the transition inverts two of them, so it is not a wall crossing
    from dihedral_mckay.charts import Chart, transition_exponents
    from dihedral_mckay.hilb import _flop_atoms, _flop_chart_rows, _flop_lattice

    for n in (5, 7):
        rows = _flop_chart_rows(n)
        atoms, lat = _flop_atoms(n), _flop_lattice(n)
        a = Chart("U1''", atoms, lat, rows["U1''"], ("c1", "c2", "c3"))
        b = Chart("U3'", atoms, lat, rows["U3'"], ("c1", "c2", "c3"))
        assert transition_exponents(a, b) is not None
        assert not verify_gluing(a, b)
