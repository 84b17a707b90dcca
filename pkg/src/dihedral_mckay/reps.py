"""Characters of Z_n and D_2n, inner products, and McKay quivers.

D_2n = <tau, sigma> in GL(2) with sigma of order n and tau the swap
reflection.  Irreducibles follow the standard table: rho0, rho0' of
degree 1, two-dimensional rho_j for 1 <= j <= (n-1)/2, and for even n
the extra sign characters rho_{n/2}, rho_{n/2}'.  The table lists one
tau column; for even n the reflections split into two classes
(tau*sigma^even, tau*sigma^odd) and the listed values are expanded onto
both, with (-1)^i distinguishing rho_{n/2} from rho_{n/2}'.

Values are CycloElt over Q[t]/(t^n - 1); inner products extract their
rational value modulo the cyclotomic polynomial (see exactnum).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from .exactnum import (
    CycloElt,
    NotRational,
    cyc_mul,
    expect_rational,
    rational_value,
)


class NotACharacter(ValueError):
    """Decomposition produced a negative or non-integral multiplicity."""


@dataclass(frozen=True)
class GroupSpec:
    kind: str  # "cyclic" | "dihedral"
    n: int

    def __post_init__(self):
        if self.kind not in ("cyclic", "dihedral"):
            raise ValueError(f"unknown kind {self.kind!r}")
        if self.n < 2:
            raise ValueError("n must be at least 2")

    @property
    def order(self):
        return self.n if self.kind == "cyclic" else 2 * self.n


@dataclass(frozen=True)
class ConjClass:
    label: str  # "1", "sigma^k", "tau", "tau*sigma^even", "tau*sigma^odd"
    size: int
    kind: str  # "rotation" | "reflection"
    power: int  # rotation: exponent k; reflection: parity of sigma-power


@lru_cache(maxsize=None)
def conjugacy_classes(g):
    n = g.n
    if g.kind == "cyclic":
        return tuple(
            ConjClass("1" if k == 0 else f"sigma^{k}", 1, "rotation", k) for k in range(n)
        )
    classes = [ConjClass("1", 1, "rotation", 0)]
    for k in range(1, (n - 1) // 2 + 1):
        classes.append(ConjClass(f"sigma^{k}", 2, "rotation", k))
    if n % 2 == 0:
        classes.append(ConjClass(f"sigma^{n // 2}", 1, "rotation", n // 2))
        classes.append(ConjClass("tau*sigma^even", n // 2, "reflection", 0))
        classes.append(ConjClass("tau*sigma^odd", n // 2, "reflection", 1))
    else:
        classes.append(ConjClass("tau", n, "reflection", 0))
    return tuple(classes)


class Character:
    """Class function given by one CycloElt value per conjugacy class."""

    __slots__ = ("group", "name", "values")

    def __init__(self, group, name, values):
        self.group = group
        self.name = name
        self.values = tuple(values)

    @property
    def degree(self):
        return expect_rational(self.values[0])

    def __eq__(self, other):
        return (
            isinstance(other, Character)
            and self.group == other.group
            and self.values == other.values
        )

    def __hash__(self):
        return hash((self.group, self.values))

    def __mul__(self, other):
        if self.group != other.group:
            raise ValueError("characters of different groups")
        vals = [cyc_mul(a, b) for a, b in zip(self.values, other.values)]
        return Character(self.group, f"{self.name}*{other.name}", vals)

    def __add__(self, other):
        if self.group != other.group:
            raise ValueError("characters of different groups")
        vals = [a + b for a, b in zip(self.values, other.values)]
        return Character(self.group, f"{self.name}+{other.name}", vals)

    def __repr__(self):
        return f"Character({self.name})"


class CharTable:
    __slots__ = ("group", "classes", "chars", "by_name")

    def __init__(self, group, classes, chars):
        self.group = group
        self.classes = classes
        self.chars = tuple(chars)
        self.by_name = {c.name: c for c in chars}

    def __iter__(self):
        return iter(self.chars)

    def names(self):
        return [c.name for c in self.chars]


def _rot_value(n, j, k):
    # epsilon^{jk} + epsilon^{-jk}, built without intermediate elements
    c = [Fraction(0)] * n
    c[(j * k) % n] += 1
    c[(-j * k) % n] += 1
    return CycloElt._raw(n, tuple(c))


@lru_cache(maxsize=None)
def char_table(g):
    n = g.n
    classes = conjugacy_classes(g)
    if g.kind == "cyclic":
        chars = []
        for j in range(n):
            vals = [CycloElt.root_power(n, j * c.power) for c in classes]
            chars.append(Character(g, f"eps{j}", vals))
        return CharTable(g, classes, chars)

    one = CycloElt.from_rational(n, 1)

    def const(q):
        return CycloElt.from_rational(n, q)

    chars = [Character(g, "rho0", [one] * len(classes))]
    chars.append(
        Character(
            g,
            "rho0'",
            [const(-1) if c.kind == "reflection" else one for c in classes],
        )
    )
    for j in range(1, (n - 1) // 2 + 1):
        vals = []
        for c in classes:
            if c.kind == "reflection":
                vals.append(CycloElt.zero(n))
            else:
                vals.append(_rot_value(n, j, c.power))
        chars.append(Character(g, f"rho{j}", vals))
    if n % 2 == 0:
        h = n // 2
        for name, refl_sign in ((f"rho{h}", 1), (f"rho{h}'", -1)):
            vals = []
            for c in classes:
                if c.kind == "rotation":
                    vals.append(const((-1) ** c.power))
                else:
                    vals.append(const(refl_sign * (-1) ** c.power))
            chars.append(Character(g, name, vals))
    return CharTable(g, classes, chars)


def regular_character(g):
    classes = conjugacy_classes(g)
    n = g.n
    vals = [
        CycloElt.from_rational(n, g.order if c.label == "1" else 0) for c in classes
    ]
    return Character(g, "reg", vals)


def _inner_raw(chi, psi):
    if chi.group != psi.group:
        raise ValueError("characters of different groups")
    g = chi.group
    classes = conjugacy_classes(g)
    n = g.n
    acc = {}
    exact = True
    for c, a, b in zip(classes, chi.values, psi.values):
        na, nb = a.int_nonzeros(), b.int_nonzeros()
        if na is None or nb is None:
            exact = False
            break
        for i, ca in na:
            sca = c.size * ca
            # conj(b) has coefficient cb at exponent n - j
            for j, cb in nb:
                k = (i - j) % n
                acc[k] = acc.get(k, 0) + sca * cb
    if exact:
        rem = _int_mod_cyclotomic(acc, n)
        if any(v for k, v in rem.items() if k):
            raise NotRational(f"<{chi.name},{psi.name}> is irrational")
        return Fraction(rem.get(0, 0), g.order)
    # general path through the group ring
    acc = {}
    for c, a, b in zip(classes, chi.values, psi.values):
        for i, ca in a.nonzeros():
            sca = c.size * ca
            for j, cb in b.nonzeros():
                k = (i - j) % n
                acc[k] = acc.get(k, Fraction(0)) + sca * cb
    total = [Fraction(0)] * n
    for k, v in acc.items():
        total[k] = v
    val = rational_value(CycloElt(n, total))
    return val / g.order


def _int_mod_cyclotomic(acc, n):
    """Reduce a sparse integer coefficient dict modulo Phi_n."""
    from .exactnum import cyclotomic_polynomial

    phi = cyclotomic_polynomial(n)
    deg = len(phi) - 1
    work = [0] * n
    for k, v in acc.items():
        work[k] = v
    for i in range(n - 1, deg - 1, -1):
        q = work[i]
        if q:
            for j in range(deg + 1):
                work[i - deg + j] -= q * phi[j]
    return {k: v for k, v in enumerate(work[:deg]) if v}


def inner_product(chi, psi):
    """<chi, psi> = (1/|G|) sum over classes of size * chi * conj(psi).

    Must come out a nonnegative integer for genuine characters.
    """
    val = _inner_raw(chi, psi)
    if val.denominator != 1 or val < 0:
        raise NotACharacter(f"<{chi.name},{psi.name}> = {val}")
    return int(val)


def decompose(chi):
    """Multiset of (irreducible name, multiplicity) with exact reconstruction."""
    table = char_table(chi.group)
    mults = {}
    recon = [CycloElt.zero(chi.group.n) for _ in table.classes]
    for irr in table:
        m = _inner_raw(chi, irr)
        if m.denominator != 1 or m < 0:
            raise NotACharacter(f"multiplicity of {irr.name} in {chi.name} is {m}")
        m = int(m)
        if m:
            mults[irr.name] = m
            recon = [r + m * v for r, v in zip(recon, irr.values)]
    for r, v, c in zip(recon, chi.values, table.classes):
        if not _same_value(r, v):
            raise NotACharacter(f"reconstruction differs on class {c.label}")
    return mults


def _same_value(a, b):
    d = a - b
    if d.is_zero():
        return True
    try:
        return rational_value(d) == 0
    except NotRational:
        return False


def restrict(chi):
    """Restriction of a D_2n character to the rotation subgroup Z_n."""
    g = chi.group
    if g.kind != "dihedral":
        raise ValueError("restrict expects a dihedral character")
    n = g.n
    cyc = GroupSpec("cyclic", n)
    dclasses = conjugacy_classes(g)
    lookup = {}
    for c, v in zip(dclasses, chi.values):
        if c.kind == "rotation":
            lookup[c.power] = v
            lookup[(n - c.power) % n] = v
    vals = [lookup[k] for k in range(n)]
    return Character(cyc, f"Res({chi.name})", vals)


def induce(eps):
    """Frobenius induction of a Z_n character to D_2n.

    Ind eps_0 = rho0 + rho0'; Ind eps_{n/2} = rho_{n/2} + rho_{n/2}';
    Ind eps_j = rho_j otherwise (with rho_j meaning rho_{n-j} for
    j > n/2 since those coincide).
    """
    g = eps.group
    if g.kind != "cyclic":
        raise ValueError("induce expects a cyclic character")
    n = g.n
    dih = GroupSpec("dihedral", n)
    vals = []
    for c in conjugacy_classes(dih):
        if c.kind == "reflection":
            vals.append(CycloElt.zero(n))
        else:
            vals.append(eps.values[c.power] + eps.values[(n - c.power) % n])
    return Character(dih, f"Ind({eps.name})", vals)


class Quiver:
    """McKay quiver data: vertex names, symmetric adjacency, divergences.

    ``divergences`` lists entries where the character-theoretic
    adjacency differs from the drawn diagram (for odd n the diagram
    omits the loop at rho_{(n-1)/2} even though
    <rho_nat * rho_m, rho_m> = 1).
    """

    __slots__ = ("n", "vertices", "adjacency", "divergences")

    def __init__(self, n, vertices, adjacency, divergences):
        self.n = n
        self.vertices = tuple(vertices)
        self.adjacency = tuple(tuple(row) for row in adjacency)
        self.divergences = tuple(divergences)


def _drawn_adjacency(n, names):
    """Adjacency of the diagram as drawn: affine-D shape, no loops."""
    idx = {v: i for i, v in enumerate(names)}
    adj = [[0] * len(names) for _ in names]

    def connect(a, b):
        adj[idx[a]][idx[b]] += 1
        adj[idx[b]][idx[a]] += 1

    m = (n - 1) // 2 if n % 2 else n // 2 - 1  # last 2-dim irrep index
    connect("rho0", "rho1")
    connect("rho0'", "rho1")
    for j in range(1, m):
        connect(f"rho{j}", f"rho{j + 1}")
    if n % 2 == 0:
        h = n // 2
        connect(f"rho{m}", f"rho{h}")
        connect(f"rho{m}", f"rho{h}'")
    return adj


def mckay_quiver(n):
    if n < 3:
        raise ValueError("need n >= 3 for a 2-dimensional rho1")
    g = GroupSpec("dihedral", n)
    table = char_table(g)
    nat = table.by_name["rho1"]
    names = table.names()
    adj = []
    for chi in table:
        prod = nat * chi
        adj.append([inner_product(prod, psi) for psi in table])
    drawn = _drawn_adjacency(n, names)
    divergences = []
    for i, a in enumerate(names):
        for j, b in enumerate(names):
            if j < i:
                continue
            if adj[i][j] != drawn[i][j]:
                divergences.append(
                    {"from": a, "to": b, "computed": adj[i][j], "drawn": drawn[i][j]}
                )
    return Quiver(n, names, adj, divergences)


def quiver_to_dot(q):
    lines = [f'graph "mckay_D{2 * q.n}" {{']
    for v in q.vertices:
        lines.append(f'  "{v}";')
    for i, a in enumerate(q.vertices):
        for j in range(i, len(q.vertices)):
            mult = q.adjacency[i][j]
            if mult:
                lines.append(f'  "{a}" -- "{q.vertices[j]}" [label="{mult}"];')
    for d in q.divergences:
        lines.append(
            f'  // diagram divergence: {d["from"]} -- {d["to"]} computed '
            f'{d["computed"]}, drawn {d["drawn"]}'
        )
    lines.append("}")
    return "\n".join(lines) + "\n"


def quiver_to_json(q):
    return {
        "n": q.n,
        "vertices": list(q.vertices),
        "adjacency": [list(r) for r in q.adjacency],
        "divergences": [dict(d) for d in q.divergences],
    }


def table_to_json(table):
    return {
        "group": {"kind": table.group.kind, "n": table.group.n},
        "classes": [
            {"label": c.label, "size": c.size} for c in table.classes
        ],
        "characters": [
            {
                "name": chi.name,
                "degree": int(chi.degree),
                "values": [
                    [str(q) for q in v.coeffs] for v in chi.values
                ],
            }
            for chi in table
        ],
    }
