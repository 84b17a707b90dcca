"""Laurent-monomial chart machinery for the resolution atlases.

A chart names its coordinates as Laurent monomials over an *atom*
alphabet.  Atoms are either single ambient variables (the order-n
Hilbert-scheme atlas uses x, y) or designated polynomial expressions
(the threefold charts use x, y, z, f1, f2 with f1, f2 binomials); each
atom carries its ambient expansion as a Poly so monomial identities can
be re-verified by exact polynomial cross-multiplication.

Charts of one atlas share the atom alphabet and a lattice of allowed
exponent vectors (the invariant monomials).  Unimodularity is checked
relative to that lattice: expressed in a lattice basis, a chart's
exponent matrix has |det| = 1 (square case) or unit gcd of maximal
minors (primitive embedding).
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction

from .polyring import Poly, rational_roots


class NoIntegerSolution(ValueError):
    """Monomial not expressible with integer exponents in chart coordinates."""


class NotInChart(ValueError):
    """Pullback has a pole along a chart coordinate."""


class CurveContainsAxis(ValueError):
    """Restriction of a curve equation to an axis vanished identically."""


class NotUnimodular(ValueError):
    """Chart exponent matrix is not unimodular relative to the atlas lattice."""


@dataclass(frozen=True)
class Atom:
    name: str
    poly: Poly  # ambient expansion


def _solve_int(rows, target):
    """Integer alpha with sum(alpha_i * rows_i) = target, or None.

    Rows must be linearly independent; the solution is then unique when
    it exists.
    """
    k = len(rows)
    dim = len(target)
    # Gaussian elimination on the k x dim system (transposed: dim eqns).
    aug = [[Fraction(rows[i][j]) for i in range(k)] + [Fraction(target[j])] for j in range(dim)]
    piv_rows = []
    col = 0
    for col in range(k):
        piv = None
        for r in range(len(piv_rows), dim):
            if aug[r][col] != 0:
                piv = r
                break
        if piv is None:
            continue
        r0 = len(piv_rows)
        aug[r0], aug[piv] = aug[piv], aug[r0]
        piv_rows.append(col)
        f = aug[r0][col]
        aug[r0] = [v / f for v in aug[r0]]
        for r in range(dim):
            if r != r0 and aug[r][col] != 0:
                g = aug[r][col]
                aug[r] = [a - g * b for a, b in zip(aug[r], aug[r0])]
    if len(piv_rows) < k:
        raise ValueError("chart rows are linearly dependent")
    for r in range(k, dim):
        if aug[r][-1] != 0:
            return None
    alpha = [aug[r][-1] for r in range(k)]
    if any(a.denominator != 1 for a in alpha):
        return None
    alpha = [int(a) for a in alpha]
    # paranoid exact check
    for j in range(dim):
        if sum(a * rows[i][j] for i, a in enumerate(alpha)) != target[j]:
            return None
    return alpha


def _max_minor_gcd(mat):
    """gcd of all maximal minors of an integer matrix (rows <= cols)."""
    k = len(mat)
    cols = len(mat[0])
    g = 0
    for combo in itertools.combinations(range(cols), k):
        sub = [[row[c] for c in combo] for row in mat]
        g = _gcd(g, abs(_int_det(sub)))
        if g == 1:
            return 1
    return g


def _int_det(m):
    k = len(m)
    m = [[Fraction(v) for v in row] for row in m]
    det = Fraction(1)
    for i in range(k):
        piv = None
        for r in range(i, k):
            if m[r][i] != 0:
                piv = r
                break
        if piv is None:
            return 0
        if piv != i:
            m[i], m[piv] = m[piv], m[i]
            det = -det
        det *= m[i][i]
        inv = 1 / m[i][i]
        for r in range(i + 1, k):
            if m[r][i] != 0:
                f = m[r][i] * inv
                m[r] = [a - f * b for a, b in zip(m[r], m[i])]
    assert det.denominator == 1
    return int(det)


def _gcd(a, b):
    while b:
        a, b = b, a % b
    return a


@dataclass
class Chart:
    """Smooth affine chart with Laurent-monomial coordinates over atoms."""

    name: str
    atoms: tuple  # tuple[Atom]
    lattice: tuple  # lattice basis rows over atom exponents
    rows: tuple  # one exponent vector per coordinate
    coord_names: tuple
    exceptional_axes: dict = field(default_factory=dict)  # coord index -> label
    meta: dict = field(default_factory=dict)

    def __post_init__(self):
        self.rows = tuple(tuple(r) for r in self.rows)
        self.lattice = tuple(tuple(r) for r in self.lattice)
        if len(self.coord_names) != len(self.rows):
            raise ValueError("coordinate name count mismatch")
        self.validate_unimodular()

    def validate_unimodular(self):
        rel = []
        for row in self.rows:
            alpha = _solve_int(self.lattice, row)
            if alpha is None:
                raise NotUnimodular(
                    f"{self.name}: coordinate {row} is outside the atlas lattice"
                )
            rel.append(alpha)
        k, r = len(rel), len(self.lattice)
        if k == r:
            if abs(_int_det(rel)) != 1:
                raise NotUnimodular(f"{self.name}: |det| = {abs(_int_det(rel))} != 1")
        else:
            if _max_minor_gcd(rel) != 1:
                raise NotUnimodular(f"{self.name}: embedding not primitive")

    def lattice_matrix(self):
        """Exponent matrix relative to the atlas lattice basis."""
        return [_solve_int(self.lattice, row) for row in self.rows]

    def coord_fraction(self, i):
        """(numerator, denominator) ambient polynomials of coordinate i."""
        num = Poly.const(1, self.atoms[0].poly.nvars)
        den = Poly.const(1, self.atoms[0].poly.nvars)
        for e, atom in zip(self.rows[i], self.atoms):
            if e > 0:
                num = num * atom.poly**e
            elif e < 0:
                den = den * atom.poly ** (-e)
        return num, den


@dataclass(frozen=True)
class LocalCurve:
    chart: str
    equation: Poly  # in chart coordinates
    label: str

    def __post_init__(self):
        for i in range(self.equation.nvars):
            if not self.equation.is_zero() and all(
                m[i] > 0 for m in self.equation.terms
            ):
                raise ValueError(
                    f"{self.label}: equation divisible by coordinate {i}, "
                    "not a strict transform"
                )


def express_monomial(chart, mono):
    """Integer exponents alpha with prod(coords^alpha) = the atom monomial.

    The solution may have negative entries (Laurent); the caller decides
    whether that is acceptable.
    """
    alpha = _solve_int(chart.rows, tuple(mono))
    if alpha is None:
        raise NoIntegerSolution(f"{chart.name}: {mono} not in the chart lattice")
    return tuple(alpha)


def pullback_orders(chart, f):
    """Factor f as (common coordinate monomial) * strict on the chart.

    Returns (strict, orders) where strict is a Poly in the chart
    coordinates not divisible by any coordinate, and orders maps each
    exceptional-axis label to the vanishing order of f along it.
    Raises NotInChart when f has a pole along some coordinate.
    """
    if f.is_zero():
        raise ValueError("cannot pull back the zero polynomial")
    exps = {}
    for m, c in f.terms.items():
        try:
            exps[m] = express_monomial(chart, m)
        except NoIntegerSolution as exc:
            raise NotInChart(f"{chart.name}: monomial {m} not expressible") from exc
    k = len(chart.rows)
    mins = [min(a[i] for a in exps.values()) for i in range(k)]
    if any(v < 0 for v in mins):
        raise NotInChart(f"{chart.name}: pole along a coordinate (orders {mins})")
    strict = Poly(
        _poly_nvars(k),
        {
            _pad(tuple(a - b for a, b in zip(alpha, mins)), k): f.terms[m]
            for m, alpha in exps.items()
        },
    )
    orders = {label: mins[i] for i, label in chart.exceptional_axes.items()}
    return strict, orders


def _poly_nvars(k):
    if k not in (2, 3):
        raise ValueError("pullbacks implemented for 2- and 3-coordinate charts")
    return k


def _pad(t, k):
    return tuple(t[:k])


def restrict_to_axis(curve, axis_index):
    """Univariate restriction of a 2-coordinate LocalCurve to an axis."""
    eq = curve.equation
    if eq.nvars != 2:
        raise ValueError("axis restriction implemented for surface charts")
    other = 1 - axis_index
    res = eq.substitute_zero(axis_index)
    if res.is_zero():
        raise CurveContainsAxis(f"{curve.label} contains the axis")
    return res.univariate_in(other)


def local_intersection(curve, axis_index):
    """Total vanishing multiplicity of the curve along the axis (finite part)."""
    coeffs = restrict_to_axis(curve, axis_index)
    deg = len(coeffs) - 1
    return deg


def axis_root_report(curve, axis_index):
    """Roots (with multiplicity) of the restriction; irrational roots are
    reported per irreducible factor with degree counted as point count."""
    coeffs = restrict_to_axis(curve, axis_index)
    roots, residue = rational_roots(coeffs)
    report = [{"root": r, "mult": m} for r, m in sorted(roots)]
    for fac, m in residue:
        report.append({"factor_degree": len(fac) - 1, "mult": m})
    return report


def transition_exponents(src, dst):
    """Per-coordinate exponent vectors of dst in terms of src, or None."""
    out = []
    for row in dst.rows:
        alpha = _solve_int(src.rows, row)
        if alpha is None:
            return None
        out.append(tuple(alpha))
    return out


def _single_inversion(trans):
    inverted = {i for alpha in trans for i, e in enumerate(alpha) if e < 0}
    return len(inverted) <= 1


def _cross_multiply_ok(src, dst, trans):
    """Verify each monomial transition as an ambient polynomial identity."""
    for j, alpha in enumerate(trans):
        b_num, b_den = dst.coord_fraction(j)
        lhs = b_num
        rhs = b_den
        for i, e in enumerate(alpha):
            a_num, a_den = src.coord_fraction(i)
            if e > 0:
                lhs = lhs * a_den**e
                rhs = rhs * a_num**e
            elif e < 0:
                lhs = lhs * a_num ** (-e)
                rhs = rhs * a_den ** (-e)
        if lhs != rhs:
            return False
    return True


def verify_gluing(a, b):
    """True iff the two charts glue along a wall.

    Each coordinate of b must be a Laurent monomial in the coordinates
    of a with negative exponents confined to a single a-coordinate (the
    inverted one), and symmetrically; every monomial identity is then
    re-verified by polynomial cross-multiplication of the ambient
    expressions.
    """
    if a.atoms != b.atoms:
        raise ValueError("charts over different atom alphabets")
    t_ab = transition_exponents(a, b)
    if t_ab is None or not _single_inversion(t_ab):
        return False
    t_ba = transition_exponents(b, a)
    if t_ba is None or not _single_inversion(t_ba):
        return False
    return _cross_multiply_ok(a, b, t_ab) and _cross_multiply_ok(b, a, t_ba)


@dataclass
class Atlas:
    name: str
    atoms: tuple
    lattice: tuple
    charts: list
    meta: dict = field(default_factory=dict)

    def chart(self, name):
        for c in self.charts:
            if c.name == name:
                return c
        raise KeyError(name)

    def adjacency(self):
        """All unordered chart pairs passing verify_gluing."""
        out = []
        for i, a in enumerate(self.charts):
            for b in self.charts[i + 1 :]:
                if verify_gluing(a, b):
                    out.append((a.name, b.name))
        return out

    def to_json(self):
        return {
            "name": self.name,
            "atoms": [a.name for a in self.atoms],
            "charts": [
                {
                    "name": c.name,
                    "coords": [
                        {"name": nm, "exponents": list(row)}
                        for nm, row in zip(c.coord_names, c.rows)
                    ],
                    "exceptional_axes": {
                        str(i): lab for i, lab in sorted(c.exceptional_axes.items())
                    },
                }
                for c in self.charts
            ],
            "gluing": [list(p) for p in self.adjacency()],
            **{k: v for k, v in sorted(self.meta.items())},
        }
