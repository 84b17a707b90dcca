import cmath

import pytest

from dihedral_mckay.exactnum import rational_value
from dihedral_mckay.reps import (
    Character,
    GroupSpec,
    NotACharacter,
    char_table,
    conjugacy_classes,
    decompose,
    induce,
    inner_product,
    mckay_quiver,
    regular_character,
    restrict,
)

# --- numeric oracle: the dihedral group as explicit elements -------------


def dihedral_elements(n):
    return [(r, a) for r in (0, 1) for a in range(n)]


def dmul(n, g, h):
    r, a = g
    s, b = h
    return ((r + s) % 2, ((a if s == 0 else -a) + b) % n)


def dinv(n, g):
    r, a = g
    return (r, (-a if r == 0 else a) % n)


def class_of(n, g):
    """Conjugacy class label in the conventions of reps.conjugacy_classes."""
    r, a = g
    if r == 0:
        k = min(a, n - a)
        return "1" if k == 0 else f"sigma^{k}"
    if n % 2:
        return "tau"
    return "tau*sigma^even" if a % 2 == 0 else "tau*sigma^odd"


def value_num(chi, g):
    """Numeric value of a character at a group element (oracle side)."""
    n = chi.group.n
    labels = [c.label for c in conjugacy_classes(chi.group)]
    v = chi.values[labels.index(class_of(n, g))]
    z = cmath.exp(2j * cmath.pi / n)
    return sum(float(c) * z**k for k, c in enumerate(v.coeffs))


def inner_num(chi, psi):
    n = chi.group.n
    total = 0
    for g in dihedral_elements(n):
        total += value_num(chi, g) * value_num(psi, g).conjugate()
    return total / (2 * n)


def test_class_data():
    for n in range(2, 12):
        g = GroupSpec("dihedral", n)
        classes = conjugacy_classes(g)
        assert sum(c.size for c in classes) == 2 * n
        refl = [c for c in classes if c.kind == "reflection"]
        if n % 2:
            assert len(refl) == 1 and refl[0].size == n
        else:
            assert len(refl) == 2 and all(c.size == n // 2 for c in refl)
    cyc = conjugacy_classes(GroupSpec("cyclic", 6))
    assert sum(c.size for c in cyc) == 6


def test_char_table_counts():
    assert char_table(GroupSpec("dihedral", 4)).names() == [
        "rho0",
        "rho0'",
        "rho1",
        "rho2",
        "rho2'",
    ]
    assert char_table(GroupSpec("dihedral", 5)).names() == [
        "rho0",
        "rho0'",
        "rho1",
        "rho2",
    ]
    assert char_table(GroupSpec("cyclic", 3)).names() == ["eps0", "eps1", "eps2"]
    for n in range(3, 30):
        table = char_table(GroupSpec("dihedral", n))
        expected = (n + 3) // 2 if n % 2 else n // 2 + 3
        assert len(table.chars) == expected
        assert sum(int(c.degree) ** 2 for c in table) == 2 * n


def test_orthonormality_and_numeric_oracle():
    for n in (3, 4, 5, 6, 9, 12):
        table = char_table(GroupSpec("dihedral", n))
        for i, chi in enumerate(table):
            for j, psi in enumerate(table):
                exact = inner_product(chi, psi)
                assert exact == (1 if i == j else 0)
                assert abs(inner_num(chi, psi) - exact) < 1e-9


def test_column_orthogonality():
    for n in (3, 4, 7, 10):
        g = GroupSpec("dihedral", n)
        table = char_table(g)
        classes = table.classes
        for a, ca in enumerate(classes):
            for b, cb in enumerate(classes):
                acc = None
                for chi in table:
                    term = chi.values[a] * chi.values[b].conjugate()
                    acc = term if acc is None else acc + term
                val = rational_value(acc)
                if a == b:
                    assert val == g.order / ca.size
                else:
                    assert val == 0


def test_inner_product_examples():
    t5 = char_table(GroupSpec("dihedral", 5))
    assert inner_product(t5.by_name["rho1"], t5.by_name["rho1"]) == 1
    assert inner_product(t5.by_name["rho1"], t5.by_name["rho2"]) == 0
    for n in (4, 5, 8):
        g = GroupSpec("dihedral", n)
        reg = regular_character(g)
        for chi in char_table(g):
            if int(chi.degree) == 2:
                assert inner_product(reg, chi) == 2


def test_decompose_examples():
    g4 = GroupSpec("dihedral", 4)
    assert decompose(regular_character(g4)) == {
        "rho0": 1,
        "rho0'": 1,
        "rho1": 2,
        "rho2": 1,
        "rho2'": 1,
    }
    t5 = char_table(GroupSpec("dihedral", 5))
    prod = t5.by_name["rho1"] * t5.by_name["rho1"]
    dec = decompose(prod)
    assert dec == {"rho0": 1, "rho0'": 1, "rho2": 1}
    # oracle: numeric inner products of the pointwise product
    for name, want in dec.items():
        assert abs(inner_num(prod, t5.by_name[name]) - want) < 1e-9
    sq = t5.by_name["rho0'"] * t5.by_name["rho0'"]
    assert decompose(sq) == {"rho0": 1}


def test_decompose_rejects_non_characters():
    g = GroupSpec("dihedral", 4)
    table = char_table(g)
    fake = Character(
        g, "bad", [v + v for v in table.by_name["rho0"].values]
    )  # 2*rho0 is fine
    assert decompose(fake) == {"rho0": 2}
    vals = list(table.by_name["rho1"].values)
    vals[0] = vals[0] + table.by_name["rho0"].values[0]  # degree 3, breaks integrality
    with pytest.raises(NotACharacter):
        decompose(Character(g, "bad2", vals))


def test_restrict_rows():
    for n in (4, 5, 6, 9):
        table = char_table(GroupSpec("dihedral", n))
        cyc = char_table(GroupSpec("cyclic", n))
        for j in range(1, (n - 1) // 2 + 1):
            res = restrict(table.by_name[f"rho{j}"])
            want = cyc.by_name[f"eps{j}"] + cyc.by_name[f"eps{n - j}"]
            assert res.values == want.values
        res0 = restrict(table.by_name["rho0'"])
        assert res0.values == cyc.by_name["eps0"].values
        if n % 2 == 0:
            # (-1)^i vs t^(i n/2): equal as values, compare via decomposition
            resh = restrict(table.by_name[f"rho{n // 2}"])
            assert decompose(resh) == {f"eps{n // 2}": 1}


def frobenius_oracle(n, j, g):
    """Brute-force Frobenius induction over all of D_2n (numeric)."""
    z = cmath.exp(2j * cmath.pi / n)
    total = 0
    for x in dihedral_elements(n):
        c = dmul(n, dmul(n, dinv(n, x), g), x)
        if c[0] == 0:
            total += z ** (j * c[1])
    return total / n


def test_induce_rows_and_frobenius_oracle():
    for n in (4, 5, 6):
        cyc = char_table(GroupSpec("cyclic", n))
        dih = char_table(GroupSpec("dihedral", n))
        ind0 = induce(cyc.by_name["eps0"])
        assert decompose(ind0) == {"rho0": 1, "rho0'": 1}
        if n % 2 == 0:
            indh = induce(cyc.by_name[f"eps{n // 2}"])
            assert decompose(indh) == {f"rho{n // 2}": 1, f"rho{n // 2}'": 1}
        ind1 = induce(cyc.by_name["eps1"])
        assert decompose(ind1) == {"rho1": 1}
        # numeric Frobenius-over-cosets oracle agrees on every class rep
        labels = [c.label for c in conjugacy_classes(GroupSpec("dihedral", n))]
        reps_by_label = {}
        for g in dihedral_elements(n):
            reps_by_label.setdefault(class_of(n, g), g)
        for lab in labels:
            got = value_num(ind1, reps_by_label[lab])
            want = frobenius_oracle(n, 1, reps_by_label[lab])
            assert abs(got - want) < 1e-9


def test_mackey_check():
    for n in (5, 6, 8):
        cyc = char_table(GroupSpec("cyclic", n))
        for i in range(1, n):
            if i == 0 or (n % 2 == 0 and i == n // 2):
                continue
            back = restrict(induce(cyc.by_name[f"eps{i}"]))
            assert decompose(back) == (
                {f"eps{i}": 2}
                if (2 * i) % n == 0
                else {f"eps{i}": 1, f"eps{(n - i) % n}": 1}
            )


def edge_set(q):
    out = {}
    for i, a in enumerate(q.vertices):
        for j in range(i, len(q.vertices)):
            if q.adjacency[i][j]:
                out[(a, q.vertices[j])] = q.adjacency[i][j]
    return out


def test_mckay_quiver_even_star_and_chain():
    q4 = mckay_quiver(4)
    assert edge_set(q4) == {
        ("rho0", "rho1"): 1,
        ("rho0'", "rho1"): 1,
        ("rho1", "rho2"): 1,
        ("rho1", "rho2'"): 1,
    }
    assert q4.divergences == ()
    q6 = mckay_quiver(6)
    assert edge_set(q6) == {
        ("rho0", "rho1"): 1,
        ("rho0'", "rho1"): 1,
        ("rho1", "rho2"): 1,
        ("rho2", "rho3"): 1,
        ("rho2", "rho3'"): 1,
    }


def test_mckay_quiver_odd_loop_flagged():
    q5 = mckay_quiver(5)
    assert edge_set(q5) == {
        ("rho0", "rho1"): 1,
        ("rho0'", "rho1"): 1,
        ("rho1", "rho2"): 1,
        ("rho2", "rho2"): 1,
    }
    assert [dict(d) for d in q5.divergences] == [
        {"from": "rho2", "to": "rho2", "computed": 1, "drawn": 0}
    ]


def test_quiver_symmetry_and_handshake():
    for n in range(3, 16):
        q = mckay_quiver(n)
        table = char_table(GroupSpec("dihedral", n))
        degs = [int(c.degree) for c in table]
        for i in range(len(q.vertices)):
            for j in range(len(q.vertices)):
                assert q.adjacency[i][j] == q.adjacency[j][i]
            assert (
                sum(q.adjacency[i][j] * degs[j] for j in range(len(q.vertices)))
                == 2 * degs[i]
            )
