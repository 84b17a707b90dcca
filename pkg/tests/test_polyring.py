import itertools
import random
from fractions import Fraction

import pytest

from dihedral_mckay.polyring import (
    InfiniteDimensional,
    Poly,
    buchberger,
    groebner_basis,
    normal_form,
    parse_poly,
    poly_str,
    rational_roots,
    sqfree_factors,
    staircase,
)

X = Poly.var("x")
Y = Poly.var("y")
ONE = Poly.const(1)


def brute_quotient_dim(gens, degree_cap):
    """Oracle: dimension of Q[x,y]/I by linear algebra on a degree truncation.

    Valid when the staircase fits well under the cap; used to freeze the
    expected dimensions independently of the Groebner machinery.
    """
    monos = [
        (a, b)
        for a in range(degree_cap + 1)
        for b in range(degree_cap + 1)
        if a + b <= degree_cap
    ]
    index = {m: i for i, m in enumerate(monos)}
    rows = []
    for g in gens:
        for s in monos:
            shifted = {}
            ok = True
            for m, c in g.terms.items():
                t = (m[0] + s[0], m[1] + s[1])
                if t not in index:
                    ok = False
                    break
                shifted[index[t]] = c
            if ok and shifted:
                rows.append(shifted)
    # row reduce sparsely
    pivots = {}
    for row in rows:
        row = dict(row)
        while row:
            j = max(row)
            if j in pivots:
                piv = pivots[j]
                f = row[j] / piv[j]
                for k, v in piv.items():
                    s = row.get(k, Fraction(0)) - f * v
                    if s:
                        row[k] = s
                    else:
                        row.pop(k, None)
            else:
                pivots[j] = row
                break
    return len(monos) - len(pivots)


def test_buchberger_trivial():
    ideal = buchberger([X, Y])
    assert [poly_str(g) for g in ideal.groebner] == ["y", "x"]


def test_buchberger_linear_reduction():
    ideal = buchberger([X - Y, Y])
    assert [poly_str(g) for g in ideal.groebner] == ["y", "x"]


def test_buchberger_cluster_ideal_n5():
    # I_2(1:1) for n=5: hand S-polynomial oracle gives leading terms {y^3, x^3, xy}
    gens = [X**2 - Y**3, X**3, X * Y, Y**4]
    ideal = buchberger(gens)
    leads = sorted(g.leading()[0] for g in ideal.groebner)
    assert leads == [(0, 3), (1, 1), (3, 0)]
    # y^4 was redundant
    assert len(ideal.groebner) == 3


def test_normal_form_examples():
    assert normal_form(X**2, buchberger([X, Y])).is_zero()
    ideal = buchberger([X**2 - Y**3, X**3, X * Y, Y**4])
    assert normal_form(Y**3, ideal) == X**2
    assert normal_form(ONE, ideal) == ONE


def test_staircase_examples():
    assert staircase(buchberger([X, Y])).basis == ((0, 0),)
    ideal = buchberger([X**2 - Y**3, X**3, X * Y, Y**4])
    st = staircase(ideal)
    assert st.dim == 5
    assert set(st.basis) == {(0, 0), (1, 0), (2, 0), (0, 1), (0, 2)}
    # brute-force oracle on a degree-6 truncation agrees
    assert brute_quotient_dim([X**2 - Y**3, X**3, X * Y, Y**4], 6) == 5
    with pytest.raises(InfiniteDimensional):
        staircase(buchberger([X**2]))


def test_normal_form_linearity_and_products():
    rng = random.Random(5)

    def rand_poly():
        return Poly(
            2,
            {
                (rng.randint(0, 3), rng.randint(0, 3)): Fraction(rng.randint(-4, 4))
                for _ in range(4)
            },
        )

    ideal = buchberger([X**3 - Y, Y**2 - X])
    for _ in range(25):
        f, g = rand_poly(), rand_poly()
        nf = ideal.normal_form
        assert nf(f + g) == nf(f) + nf(g)
        assert nf(f * g) == nf(nf(f) * g)
        # f - nf(f) lies in the ideal
        assert nf(f - nf(f)).is_zero()


def test_reduced_basis_is_unique_under_permutation():
    gens = [X**2 + Y**2, X**3, X * Y, Y**3]
    base = tuple(groebner_basis(gens))
    for perm in itertools.permutations(gens):
        assert tuple(groebner_basis(list(perm))) == base


def test_buchberger_idempotent():
    gens = [X**2 - Y**3, X**3, X * Y]
    gb = groebner_basis(gens)
    assert groebner_basis(gb) == gb


def test_trivariate_order():
    z = Poly.var("z", 3)
    x3 = Poly.var("x", 3)
    p = z + x3**2  # grlex: deg 2 term x^2 beats z
    assert p.leading()[0] == (2, 0, 0)
    q = z * x3 + x3**2  # tie at degree 2: z biggest variable wins
    assert q.leading()[0] == (1, 0, 1)


def test_poly_text_roundtrip():
    samples = [
        X**2 * Y - 2 * X + ONE,
        Poly(2, {(0, 0): Fraction(-1, 2), (3, 1): Fraction(5, 3)}),
        Y**4 - X,
        Poly.zero(),
    ]
    for p in samples:
        assert parse_poly(poly_str(p)) == p
    assert poly_str(parse_poly("x^2*y - 2*x + 1")) == "x^2*y - 2*x + 1"
    assert parse_poly("-1/2 + 5/3*x^3*y") == samples[1]


def test_sqfree_and_rational_roots():
    # (u+1)^2 * (u-3)
    # (u+1)^2 (u-3) = u^3 - u^2 - 5u - 3
    coeffs = [Fraction(-3), Fraction(-5), Fraction(-1), Fraction(1)]
    roots, residue = rational_roots(coeffs)
    assert sorted(roots) == [(Fraction(-1), 2), (Fraction(3), 1)]
    assert residue == []
    # u^2 + 1 has no rational roots
    roots, residue = rational_roots([Fraction(1), Fraction(0), Fraction(1)])
    assert roots == []
    assert len(residue) == 1 and len(residue[0][0]) == 3
    facs = sqfree_factors([Fraction(0), Fraction(0), Fraction(1)])  # u^2
    assert facs == [((Fraction(0), Fraction(1)), 2)]
