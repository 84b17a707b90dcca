"""D_2n-constellations as explicit modules with group action.

A constellation is a 2n-dimensional C[x,y]-module with a D_2n action
whose total character is the regular character.  Witnesses come from
cluster points of the order-n Hilbert scheme:

* generic point p: the module is C[x,y]/I_p (+) C[x,y]/I_{g.p} with tau
  swapping the summands;
* Z_2-fixed point: C[x,y]/I_p is itself a D_2n-module in two ways
  differing by the sign twist; the constellation is the sum of both
  rows, and a twist flag selects the stacky half for top/socle.

sigma is never a matrix: basis vectors carry integer weights mod n
(x raises the weight by one, y lowers it, tau negates it) and all
sigma-traces are assembled in the group ring.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from . import hilb
from .exactnum import CycloElt, rational_value
from .polyring import Poly, staircase
from .reps import Character, GroupSpec, char_table, conjugacy_classes, decompose


class WrongDimension(ValueError):
    pass


TWISTS = ("delta0", "delta1")
# delta1 carries the pullback action tau.v = v o tau (the convention that
# reproduces the stated stacky socles); delta0 is its sign flip.
_TWIST_SIGN = {"delta0": Fraction(-1), "delta1": Fraction(1)}


def _weight(mono, n):
    return (mono[0] - mono[1]) % n


class Constellation:
    def __init__(self, n, basis, x_action, y_action, tau_action, twist=None, label=""):
        self.n = n
        self.basis = tuple(basis)  # (row, monomial)
        self.dim = len(self.basis)
        self.weights = tuple(_weight(m, n) for _, m in self.basis)
        self.x_action = x_action
        self.y_action = y_action
        self.tau_action = tau_action
        self.twist = twist
        self.label = label
        self.validate()

    # --- structural invariants -------------------------------------

    def validate(self):
        x, y, t = self.x_action, self.y_action, self.tau_action
        assert _mat_mul(x, y) == _mat_mul(y, x), "x and y must commute"
        ident = _identity(self.dim)
        assert _mat_mul(t, t) == ident, "tau^2 != 1"
        assert _mat_mul(_mat_mul(t, x), t) == y, "tau x tau != y"
        n = self.n
        for j in range(self.dim):
            for i in range(self.dim):
                if x[i][j] != 0:
                    assert self.weights[i] == (self.weights[j] + 1) % n
                if y[i][j] != 0:
                    assert self.weights[i] == (self.weights[j] - 1) % n
                if t[i][j] != 0:
                    assert self.weights[i] == (-self.weights[j]) % n

    # --- characters --------------------------------------------------

    def character(self, indices=None):
        """Character of the submodule spanned by the given basis indices."""
        n = self.n
        g = GroupSpec("dihedral", n)
        if indices is None:
            indices = range(self.dim)
        indices = list(indices)
        vals = []
        for c in conjugacy_classes(g):
            if c.kind == "rotation":
                acc = CycloElt.zero(n)
                for b in indices:
                    acc = acc + CycloElt.root_power(n, c.power * self.weights[b])
                vals.append(acc)
            else:
                acc = CycloElt.zero(n)
                for b in indices:
                    d = self.tau_action[b][b]
                    if d != 0:
                        acc = acc + CycloElt.root_power(
                            n, c.power * self.weights[b], d
                        )
                vals.append(acc)
        return Character(g, self.label or "F", vals)

    def row_indices(self, row):
        return [i for i, (r, _) in enumerate(self.basis) if r == row]


def _identity(k):
    return [[Fraction(i == j) for j in range(k)] for i in range(k)]


def _mat_mul(a, b):
    k = len(a)
    out = [[Fraction(0)] * k for _ in range(k)]
    for i in range(k):
        for l in range(k):
            ail = a[i][l]
            if ail == 0:
                continue
            row = b[l]
            oi = out[i]
            for j in range(k):
                if row[j] != 0:
                    oi[j] += ail * row[j]
    return out


def _expand(ideal, poly, index):
    """Coefficients of a normal form in the staircase basis."""
    nf = ideal.normal_form(poly)
    out = {}
    for m, c in nf.terms.items():
        out[index[m]] = c
    return out


def constellation_from_cluster(n, p, twist=None):
    """Constellation attached to a cluster point of the Hilbert scheme.

    Fixed p: the doubled module carrying both twist rows (row 0 is the
    delta0 structure, row 1 the delta1 structure), with the twist flag
    marking the stacky half.  Generic p: C[x,y]/I (+) C[x,y]/I^g with
    tau swapping the rows; twist must be None.
    """
    p = p.canonical()
    ideal = hilb.cluster_ideal(n, p)
    st = staircase(ideal)
    if st.dim != n:
        raise WrongDimension(f"{p.label}: quotient has length {st.dim} != {n}")
    fixed = hilb.z2_image(n, p) == p or hilb.cluster_ideal(n, hilb.z2_image(n, p)) == ideal
    if not fixed and twist is not None:
        raise ValueError("twist is only meaningful at a Z_2-fixed point")
    if fixed and twist is not None and twist not in TWISTS:
        raise ValueError(f"unknown twist {twist}")
    if fixed:
        return _fixed_constellation(n, p, ideal, st, twist)
    return _generic_constellation(n, p, ideal)


def _mono_poly(m):
    return Poly.mono(m)


def _fixed_constellation(n, p, ideal, st, twist):
    basis = [(0, m) for m in st.basis] + [(1, m) for m in st.basis]
    index = {m: i for i, m in enumerate(st.basis)}
    dim = 2 * len(st.basis)
    x = [[Fraction(0)] * dim for _ in range(dim)]
    y = [[Fraction(0)] * dim for _ in range(dim)]
    t = [[Fraction(0)] * dim for _ in range(dim)]
    k = len(st.basis)
    for j, m in enumerate(st.basis):
        for mat, shift in ((x, (1, 0)), (y, (0, 1))):
            img = _expand(ideal, _mono_poly((m[0] + shift[0], m[1] + shift[1])), index)
            for i, c in img.items():
                mat[i][j] = c
                mat[i + k][j + k] = c
        timg = _expand(ideal, _mono_poly((m[1], m[0])), index)
        for i, c in timg.items():
            t[i][j] = _TWIST_SIGN["delta0"] * c
            t[i + k][j + k] = _TWIST_SIGN["delta1"] * c
    return Constellation(n, basis, x, y, t, twist=twist, label=p.label)


def _generic_constellation(n, p, ideal):
    q = hilb.z2_image(n, p)
    ideal_g = hilb.cluster_ideal(n, q)
    st0 = staircase(ideal)
    st1 = staircase(ideal_g)
    if st1.dim != n:
        raise WrongDimension(f"{q.label}: quotient has length {st1.dim} != {n}")
    basis = [(0, m) for m in st0.basis] + [(1, m) for m in st1.basis]
    i0 = {m: i for i, m in enumerate(st0.basis)}
    i1 = {m: i for i, m in enumerate(st1.basis)}
    k = len(st0.basis)
    dim = 2 * k
    x = [[Fraction(0)] * dim for _ in range(dim)]
    y = [[Fraction(0)] * dim for _ in range(dim)]
    t = [[Fraction(0)] * dim for _ in range(dim)]
    for j, m in enumerate(st0.basis):
        for mat, shift in ((x, (1, 0)), (y, (0, 1))):
            img = _expand(ideal, _mono_poly((m[0] + shift[0], m[1] + shift[1])), i0)
            for i, c in img.items():
                mat[i][j] = c
        timg = _expand(ideal_g, _mono_poly((m[1], m[0])), i1)
        for i, c in timg.items():
            t[i + k][j] = c
    for j, m in enumerate(st1.basis):
        for mat, shift in ((x, (1, 0)), (y, (0, 1))):
            img = _expand(ideal_g, _mono_poly((m[0] + shift[0], m[1] + shift[1])), i1)
            for i, c in img.items():
                mat[i + k][j + k] = c
        timg = _expand(ideal, _mono_poly((m[1], m[0])), i0)
        for i, c in timg.items():
            t[i][j + k] = c
    return Constellation(n, basis, x, y, t, label=f"{p.label}|{q.label}")


def regular_check(F):
    """Traces equal (2n, 0, ..., 0) across the conjugacy classes."""
    chi = F.character()
    vals = [rational_value_or_none(v) for v in chi.values]
    if vals[0] != 2 * F.n:
        return False
    return all(v == 0 for v in vals[1:])


def rational_value_or_none(v):
    try:
        return rational_value(v)
    except Exception:
        return None


# --- graded subspaces ------------------------------------------------


class _Graded:
    """Weight-graded subspace with per-weight echelon bases."""

    def __init__(self, F):
        self.F = F
        self.rows = {}  # weight -> list of echelon vectors
        self.members = {}  # weight -> list of original vectors (same span)

    def dim(self):
        return sum(len(v) for v in self.rows.values())

    def insert(self, w, vec):
        vec = list(vec)
        basis = self.rows.setdefault(w, [])
        for b in basis:
            piv = next(i for i, c in enumerate(b) if c != 0)
            if vec[piv] != 0:
                f = vec[piv] / b[piv]
                vec = [a - f * c for a, c in zip(vec, b)]
        if any(c != 0 for c in vec):
            basis.append(vec)
            return True
        return False

    def coordinates(self, w, vec):
        """Express vec in the echelon basis of weight w (must be a member)."""
        basis = self.rows.get(w, [])
        vec = list(vec)
        coords = []
        for b in basis:
            piv = next(i for i, c in enumerate(b) if c != 0)
            f = vec[piv] / b[piv]
            coords.append(f)
            vec = [a - f * c for a, c in zip(vec, b)]
        if any(c != 0 for c in vec):
            raise ValueError("vector outside the subspace")
        return coords

    def basis_items(self):
        for w, vecs in sorted(self.rows.items()):
            for v in vecs:
                yield w, v


def _split_by_weight(F, vec):
    out = {}
    for i, c in enumerate(vec):
        if c == 0:
            continue
        w = F.weights[i]
        out.setdefault(w, [Fraction(0)] * F.dim)
        out[w][i] = c
    return out


def _apply(mat, vec):
    dim = len(vec)
    out = [Fraction(0)] * dim
    for j, c in enumerate(vec):
        if c == 0:
            continue
        for i in range(dim):
            if mat[i][j] != 0:
                out[i] += mat[i][j] * c
    return out


def subspace_character(F, graded):
    """Character of a graded, tau-stable subspace."""
    n = F.n
    g = GroupSpec("dihedral", n)
    vals = []
    for c in conjugacy_classes(g):
        acc = CycloElt.zero(n)
        if c.kind == "rotation":
            for w, vecs in graded.rows.items():
                acc = acc + CycloElt.root_power(n, c.power * w, len(vecs))
        else:
            for w, vecs in graded.rows.items():
                if (2 * w) % n != 0:
                    continue  # tau maps W_w to W_(-w); no diagonal contribution
                for v in vecs:
                    img = _apply(F.tau_action, v)
                    coords = graded.coordinates(w, img)
                    # diagonal coefficient of this vector in its own basis
                    idx = graded.rows[w].index(v)
                    acc = acc + CycloElt.root_power(n, c.power * w, coords[idx])
        vals.append(acc)
    return Character(g, "sub", vals)


def submodule_closure(F, seeds):
    """Smallest x, y, tau-stable, weight-graded subspace containing the seeds."""
    graded = _Graded(F)
    work = []
    for s in seeds:
        for w, comp in _split_by_weight(F, s).items():
            if graded.insert(w, comp):
                work.append(comp)
    while work:
        v = work.pop()
        for mat in (F.x_action, F.y_action, F.tau_action):
            img = _apply(mat, v)
            for w, comp in _split_by_weight(F, img).items():
                if graded.insert(w, comp):
                    work.append(comp)
    cls = decompose(subspace_character(F, graded))
    return graded, cls


def _unit(dim, i):
    v = [Fraction(0)] * dim
    v[i] = Fraction(1)
    return v


def top(F):
    """F / <x, y> F decomposed into irreducibles.

    With a twist flag the quotient is taken inside the flagged row (the
    stack-level half of the doubled fixed-point module).
    """
    idx = list(F.row_indices(_twist_row(F))) if F.twist else list(range(F.dim))
    graded = _Graded(F)
    for mat in (F.x_action, F.y_action):
        for j in idx:
            col = [mat[i][j] for i in range(F.dim)]
            for w, comp in _split_by_weight(F, col).items():
                graded.insert(w, comp)
    total = F.character(idx)
    sub = subspace_character(F, graded)
    diff = Character(total.group, "top", [a - b for a, b in zip(total.values, sub.values)])
    return decompose(diff)


def _twist_row(F):
    return 0 if F.twist == "delta0" else 1


def socle_subspace(F):
    """Joint kernel of the x and y actions as a graded subspace.

    With a twist flag the kernel is computed inside the flagged row.
    """
    idx = list(F.row_indices(_twist_row(F))) if F.twist else list(range(F.dim))
    graded = _Graded(F)
    by_weight = {}
    for j in idx:
        by_weight.setdefault(F.weights[j], []).append(j)
    for w, cols in sorted(by_weight.items()):
        # solve x v = 0, y v = 0 on the weight-w block
        rows = []
        for mat in (F.x_action, F.y_action):
            for i in range(F.dim):
                row = [mat[i][j] for j in cols]
                if any(c != 0 for c in row):
                    rows.append(row)
        for sol in _nullspace(rows, len(cols)):
            vec = [Fraction(0)] * F.dim
            for c, j in zip(sol, cols):
                vec[j] = c
            graded.insert(w, vec)
    return graded


def socle(F):
    """Joint kernel of the x and y actions, decomposed into irreducibles."""
    return decompose(subspace_character(F, socle_subspace(F)))


def _nullspace(rows, width):
    """Basis of the joint kernel of the given row functionals."""
    mat = [list(r) for r in rows]
    pivots = []
    r = 0
    for c in range(width):
        piv = None
        for rr in range(r, len(mat)):
            if mat[rr][c] != 0:
                piv = rr
                break
        if piv is None:
            continue
        mat[r], mat[piv] = mat[piv], mat[r]
        f = mat[r][c]
        mat[r] = [v / f for v in mat[r]]
        for rr in range(len(mat)):
            if rr != r and mat[rr][c] != 0:
                g = mat[rr][c]
                mat[rr] = [a - g * b for a, b in zip(mat[rr], mat[r])]
        pivots.append(c)
        r += 1
    free = [c for c in range(width) if c not in pivots]
    out = []
    for fc in free:
        v = [Fraction(0)] * width
        v[fc] = Fraction(1)
        for rr, pc in enumerate(pivots):
            v[pc] = -mat[rr][fc]
        out.append(v)
    return out


# --- the socle table --------------------------------------------------


def witness_point(n, i, alpha):
    """Generic rational point on Et_i: I_i(1 - alpha : 1 + alpha)."""
    if alpha in (Fraction(-1), Fraction(0), Fraction(1)):
        raise ValueError("alpha must avoid 0 and +-1")
    return hilb.ClusterPoint(i, Fraction(1) - alpha, Fraction(1) + alpha).canonical()


def socle_table(n, alpha=Fraction(1, 2)):
    """Witness constellation per stratum with its socle and top."""
    m = hilb.half_index(n)
    rows = []

    def add(stratum, point, twist=None):
        F = constellation_from_cluster(n, point, twist=twist)
        rows.append(
            {
                "stratum": stratum,
                "witness": point.label,
                "twist": twist,
                "socle": socle(F),
                "top": top(F),
                "regular": regular_check(F),
                "constellation": F,
            }
        )

    for i in range(1, m + 1):
        add(f"E{i}", witness_point(n, i, alpha))
    for i in range(1, m):
        add(f"E{i}&E{i + 1}", hilb.ClusterPoint(i, Fraction(0), Fraction(1)))
    if n % 2 == 0:
        h = n // 2
        add("B1", hilb.ClusterPoint(h, Fraction(1), Fraction(-1)), twist="delta1")
        add("B2", hilb.ClusterPoint(h, Fraction(1), Fraction(1)), twist="delta1")
    else:
        add(f"E{m}&B3", hilb.ClusterPoint(m, Fraction(0), Fraction(1)), twist="delta1")
    return rows


def expected_socle(n, stratum):
    """The published case list for the socle on each stratum."""
    m = hilb.half_index(n)
    if stratum == "B1":
        return {f"rho{m}'": 1}
    if stratum == "B2":
        return {f"rho{m}": 1}
    if stratum == f"E{m}&B3":
        return {f"rho{m}": 1}
    if "&" in stratum:
        a, b = stratum.split("&")
        i, j = int(a[1:]), int(b[1:])
        out = {}
        for k in (i, j):
            if n % 2 == 0 and k == m:
                out[f"rho{m}"] = 1
                out[f"rho{m}'"] = 1
            else:
                out[f"rho{k}"] = 1
        return out
    i = int(stratum[1:])
    if n % 2 == 0 and i == m:
        return {f"rho{m}": 1, f"rho{m}'": 1}
    return {f"rho{i}": 1}


def off_exceptional_report(n, c=Fraction(2)):
    """Literal top/socle of a free-orbit witness away from the origin.

    The cluster <x, y^n - c> is a reduced free orbit; y acts invertibly,
    so both the literal top and socle vanish, matching the published
    'otherwise' row.
    """
    from .polyring import Ideal

    I = Ideal([Poly.var("x"), Poly(2, {(0, n): 1, (0, 0): -c})])
    st = staircase(I)
    assert st.dim == n
    idx = {mm: i for i, mm in enumerate(st.basis)}
    Ig = Ideal([Poly.var("y"), Poly(2, {(n, 0): 1, (0, 0): -c})])
    stg = staircase(Ig)
    idxg = {mm: i for i, mm in enumerate(stg.basis)}
    k = len(st.basis)
    dim = 2 * k
    x = [[Fraction(0)] * dim for _ in range(dim)]
    y = [[Fraction(0)] * dim for _ in range(dim)]
    t = [[Fraction(0)] * dim for _ in range(dim)]
    basis = [(0, mm) for mm in st.basis] + [(1, mm) for mm in stg.basis]
    for j, mm in enumerate(st.basis):
        for mat, shift in ((x, (1, 0)), (y, (0, 1))):
            img = _expand(I, _mono_poly((mm[0] + shift[0], mm[1] + shift[1])), idx)
            for i2, cc in img.items():
                mat[i2][j] = cc
        timg = _expand(Ig, _mono_poly((mm[1], mm[0])), idxg)
        for i2, cc in timg.items():
            t[i2 + k][j] = cc
    for j, mm in enumerate(stg.basis):
        for mat, shift in ((x, (1, 0)), (y, (0, 1))):
            img = _expand(Ig, _mono_poly((mm[0] + shift[0], mm[1] + shift[1])), idxg)
            for i2, cc in img.items():
                mat[i2 + k][j + k] = cc
        timg = _expand(I, _mono_poly((mm[1], mm[0])), idx)
        for i2, cc in timg.items():
            t[i2][j + k] = cc
    F = Constellation(n, basis, x, y, t, label=f"orbit(y^{n}={c})")
    return {
        "witness": F.label,
        "regular": regular_check(F),
        "top": top(F),
        "socle": socle(F),
        "note": "x or y acts invertibly off the exceptional fiber, so the "
        "literal top and socle are zero",
    }


# --- theta stability ---------------------------------------------------


@dataclass(frozen=True)
class StabilityParam:
    theta: dict  # irreducible name -> Fraction

    @classmethod
    def make(cls, n, values, generic=False):
        table = char_table(GroupSpec("dihedral", n))
        theta = {c.name: Fraction(values.get(c.name, 0)) for c in table}
        total = sum(int(c.degree) * theta[c.name] for c in table)
        if total != 0:
            raise ValueError(f"theta(C[G]) = {total} != 0")
        if generic and all(v == 0 for v in theta.values()):
            raise ValueError("the zero parameter is strictly semistable everywhere")
        return cls(tuple(sorted(theta.items())))

    def value(self, cls_dict):
        theta = dict(self.theta)
        return sum((theta[k] * v for k, v in cls_dict.items()), Fraction(0))


@dataclass
class ThetaVerdict:
    destabilized: bool
    seeds: list = None
    cls: dict = None
    value: Fraction = None


def default_family(F):
    """Closures of single basis vectors and matching-weight pair sums."""
    fam = [[_unit(F.dim, i)] for i in range(F.dim)]
    for i in range(F.dim):
        for j in range(i + 1, F.dim):
            if F.weights[i] == F.weights[j]:
                v = _unit(F.dim, i)
                w = _unit(F.dim, j)
                fam.append([[a + b for a, b in zip(v, w)]])
                fam.append([[a - b for a, b in zip(v, w)]])
    return fam


def theta_check(F, theta, family=None):
    """Sound (not complete) destabilization search over a seed family."""
    if family is None:
        family = default_family(F)
    for seeds in family:
        graded, cls = submodule_closure(F, seeds)
        d = graded.dim()
        if 0 < d < F.dim:
            val = theta.value(cls)
            if val <= 0:
                return ThetaVerdict(True, seeds=seeds, cls=cls, value=val)
    return ThetaVerdict(False)


# --- the two-row chart tables ------------------------------------------


def opencons_table(n, chart, value):
    """The two-row module table on the charts covering the last curve (even n).

    chart "Umpp" uses alpha = (x^m - y^m)/(x^m + y^m); chart "Um1p" uses
    beta = (x^m + y^m)/(x^m - y^m).  The ratio identity is verified by a
    normal-form computation in the witness cluster, and the witness
    constellation is returned with the table.
    """
    if n % 2:
        raise ValueError("the displayed tables cover E_(n/2) for even n")
    m = n // 2
    value = Fraction(value)
    if chart == "Umpp":
        alpha = value
        point = hilb.ClusterPoint(m, 1 - alpha, 1 + alpha).canonical()
        lhs = Poly(2, {(m, 0): 1, (0, m): -1})
        rhs = Poly(2, {(m, 0): alpha, (0, m): alpha})
        rows = (
            ["1"] + [f"(x^{k}, y^{k})" for k in range(1, m)] + [f"alpha*(x^{m} - y^{m})"],
            ["alpha"]
            + [f"alpha*(y^{k}, -x^{k})" for k in range(1, m)]
            + [f"x^{m} - y^{m}"],
        )
    elif chart == "Um1p":
        beta = value
        point = hilb.ClusterPoint(m, beta - 1, beta + 1).canonical()
        lhs = Poly(2, {(m, 0): 1, (0, m): 1})
        rhs = Poly(2, {(m, 0): beta, (0, m): -beta})
        rows = (
            ["1"] + [f"(x^{k}, y^{k})" for k in range(1, m)] + [f"x^{m} + y^{m}"],
            ["beta"]
            + [f"beta*(y^{k}, -x^{k})" for k in range(1, m)]
            + [f"beta*(x^{m} + y^{m})"],
        )
    else:
        raise ValueError("chart must be 'Umpp' or 'Um1p'")
    ideal = hilb.cluster_ideal(n, point)
    verified = ideal.normal_form(lhs - rhs).is_zero()
    return {
        "chart": chart,
        "parameter": str(value),
        "witness": point.label,
        "rows": rows,
        "ratio_identity_verified": verified,
    }
