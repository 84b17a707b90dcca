"""Exact bivariate/trivariate polynomials over Q with grlex Groebner bases.

Monomial order is graded lexicographic with z > x > y for the tie break
(x > y in the bivariate case).  A reduced Groebner basis is unique for
that order, so staircases and normal forms are reproducible byte for
byte.
"""

from __future__ import annotations

import itertools
import re
import threading
from fractions import Fraction

VAR_NAMES = ("x", "y", "z")


class InfiniteDimensional(ValueError):
    """Quotient by the ideal is not a finite-dimensional vector space."""


def _key(mono):
    # grlex: total degree, then lex with z largest, then x.
    if len(mono) == 3:
        return (mono[0] + mono[1] + mono[2], mono[2], mono[0])
    return (mono[0] + mono[1], mono[0])


class Poly:
    """Polynomial over Q in 2 or 3 variables; terms maps exponent tuple -> Fraction."""

    __slots__ = ("nvars", "terms")

    def __init__(self, nvars, terms=None):
        if nvars not in (2, 3):
            raise ValueError("2 or 3 variables only")
        self.nvars = nvars
        self.terms = {}
        if terms:
            for m, c in terms.items():
                c = Fraction(c)
                if c != 0:
                    if len(m) != nvars or any(e < 0 for e in m):
                        raise ValueError(f"bad exponent tuple {m}")
                    self.terms[tuple(m)] = c

    @classmethod
    def zero(cls, nvars=2):
        return cls(nvars)

    @classmethod
    def const(cls, value, nvars=2):
        return cls(nvars, {(0,) * nvars: Fraction(value)})

    @classmethod
    def mono(cls, exps, coeff=1):
        return cls(len(exps), {tuple(exps): Fraction(coeff)})

    @classmethod
    def var(cls, name, nvars=2):
        i = VAR_NAMES.index(name)
        e = [0] * nvars
        e[i] = 1
        return cls(nvars, {tuple(e): Fraction(1)})

    def is_zero(self):
        return not self.terms

    def __eq__(self, other):
        return (
            isinstance(other, Poly)
            and self.nvars == other.nvars
            and self.terms == other.terms
        )

    def __hash__(self):
        return hash((self.nvars, frozenset(self.terms.items())))

    def __add__(self, other):
        out = dict(self.terms)
        for m, c in other.terms.items():
            s = out.get(m, Fraction(0)) + c
            if s:
                out[m] = s
            else:
                out.pop(m, None)
        return Poly(self.nvars, out) if out else Poly(self.nvars)

    def __sub__(self, other):
        return self + (-other)

    def __neg__(self):
        return Poly(self.nvars, {m: -c for m, c in self.terms.items()})

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            q = Fraction(other)
            if q == 0:
                return Poly(self.nvars)
            return Poly(self.nvars, {m: c * q for m, c in self.terms.items()})
        out = {}
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                m = tuple(a + b for a, b in zip(m1, m2))
                s = out.get(m, Fraction(0)) + c1 * c2
                if s:
                    out[m] = s
                else:
                    del out[m]
        return Poly(self.nvars, out)

    __rmul__ = __mul__

    def __pow__(self, k):
        if k < 0:
            raise ValueError("negative power")
        out = Poly.const(1, self.nvars)
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def mul_term(self, mono, coeff):
        return Poly(
            self.nvars,
            {tuple(a + b for a, b in zip(m, mono)): c * coeff for m, c in self.terms.items()},
        )

    def leading(self):
        if not self.terms:
            raise ValueError("zero polynomial has no leading term")
        m = max(self.terms, key=_key)
        return m, self.terms[m]

    def monic(self):
        if not self.terms:
            return self
        _, c = self.leading()
        return self * (Fraction(1) / c)

    def degree(self):
        return max((sum(m) for m in self.terms), default=-1)

    def constant_term(self):
        return self.terms.get((0,) * self.nvars, Fraction(0))

    def substitute_zero(self, var_index):
        """Set one variable to 0; result keeps the same nvars."""
        out = {}
        for m, c in self.terms.items():
            if m[var_index] == 0:
                out[m] = c
        return Poly(self.nvars, out)

    def univariate_in(self, var_index):
        """Coefficient list (low degree first) when only var_index occurs."""
        deg = 0
        for m in self.terms:
            if any(e and i != var_index for i, e in enumerate(m)):
                raise ValueError("polynomial is not univariate in that variable")
            deg = max(deg, m[var_index])
        out = [Fraction(0)] * (deg + 1)
        for m, c in self.terms.items():
            out[m[var_index]] = c
        return out

    def sorted_terms(self):
        return sorted(self.terms.items(), key=lambda mc: _key(mc[0]), reverse=True)

    def __repr__(self):
        return poly_str(self)


def _divides(a, b):
    return all(x <= y for x, y in zip(a, b))


def _reduce(f, basis):
    """Full normal form of f against a list of polynomials."""
    rem = {}
    work = dict(f.terms)
    lts = [(g.leading()[0], g.leading()[1], g) for g in basis if not g.is_zero()]
    while work:
        m = max(work, key=_key)
        c = work[m]
        for lm, lc, g in lts:
            if _divides(lm, m):
                q = c / lc
                shift = tuple(a - b for a, b in zip(m, lm))
                for gm, gc in g.terms.items():
                    t = tuple(a + b for a, b in zip(gm, shift))
                    s = work.get(t, Fraction(0)) - q * gc
                    if s:
                        work[t] = s
                    else:
                        work.pop(t, None)
                break
        else:
            rem[m] = c
            del work[m]
    return Poly(f.nvars, rem)


def _spoly(f, g):
    mf, cf = f.leading()
    mg, cg = g.leading()
    lcm = tuple(max(a, b) for a, b in zip(mf, mg))
    return f.mul_term(tuple(a - b for a, b in zip(lcm, mf)), Fraction(1) / cf) - g.mul_term(
        tuple(a - b for a, b in zip(lcm, mg)), Fraction(1) / cg
    )


def groebner_basis(gens):
    """Reduced grlex Groebner basis (monic, mutually reduced, sorted)."""
    basis = [g for g in gens if not g.is_zero()]
    if not basis:
        raise ValueError("no nonzero generators")
    nvars = basis[0].nvars
    if any(g.nvars != nvars for g in basis):
        raise ValueError("mixed variable counts")
    basis = [g.monic() for g in basis]
    pairs = list(itertools.combinations(range(len(basis)), 2))
    while pairs:
        i, j = pairs.pop()
        mi = basis[i].leading()[0]
        mj = basis[j].leading()[0]
        # Buchberger's first criterion: coprime leading monomials.
        if all(a == 0 or b == 0 for a, b in zip(mi, mj)):
            continue
        s = _reduce(_spoly(basis[i], basis[j]), basis)
        if not s.is_zero():
            basis.append(s.monic())
            pairs.extend((k, len(basis) - 1) for k in range(len(basis) - 1))
    # minimalize: drop elements whose leading term is divisible by another's
    lead = [g.leading()[0] for g in basis]
    keep = []
    for i, g in enumerate(basis):
        if any(
            j != i and _divides(lead[j], lead[i]) and (lead[j] != lead[i] or j < i)
            for j in range(len(basis))
        ):
            continue
        keep.append(g)
    # inter-reduce tails
    reduced = []
    for i, g in enumerate(keep):
        others = keep[:i] + keep[i + 1 :]
        reduced.append(_reduce(g, others).monic())
    reduced.sort(key=lambda g: _key(g.leading()[0]))
    return reduced


class Ideal:
    """Polynomial ideal with a lazily computed reduced Groebner basis."""

    def __init__(self, generators):
        gens = [g for g in generators if not g.is_zero()]
        if not gens:
            raise ValueError("ideal needs a nonzero generator")
        self.generators = tuple(gens)
        self.nvars = gens[0].nvars
        self._groebner = None
        self._lock = threading.Lock()

    @property
    def groebner(self):
        if self._groebner is None:
            with self._lock:
                if self._groebner is None:
                    self._groebner = tuple(groebner_basis(self.generators))
        return self._groebner

    def normal_form(self, f):
        return _reduce(f, list(self.groebner))

    def contains(self, f):
        return self.normal_form(f).is_zero()

    def __eq__(self, other):
        return isinstance(other, Ideal) and self.groebner == other.groebner

    def __hash__(self):
        return hash(self.groebner)


def buchberger(gens):
    """Ideal with its reduced basis computed (idempotent by uniqueness)."""
    ideal = Ideal(gens)
    _ = ideal.groebner
    return ideal


def normal_form(f, ideal):
    return ideal.normal_form(f)


class Staircase:
    """Standard monomials of a zero-dimensional ideal."""

    __slots__ = ("basis", "dim")

    def __init__(self, basis):
        self.basis = tuple(basis)
        self.dim = len(self.basis)


def staircase(ideal):
    leads = [g.leading()[0] for g in ideal.groebner]
    nvars = ideal.nvars
    bounds = []
    for v in range(nvars):
        pure = [m[v] for m in leads if all(e == 0 for i, e in enumerate(m) if i != v)]
        if not pure:
            raise InfiniteDimensional(
                f"no pure power of {VAR_NAMES[v]} in the leading-term ideal"
            )
        bounds.append(min(pure))
    ranges = [range(b) for b in bounds]
    basis = [
        m
        for m in itertools.product(*ranges)
        if not any(_divides(lm, m) for lm in leads)
    ]
    basis.sort(key=_key)
    return Staircase(basis)


# --- canonical text format: terms like 3*x^2*y joined by +/- ------------

_TERM_RE = re.compile(r"^\s*([+-]?)\s*([^+-]+)")


def poly_str(p):
    if p.is_zero():
        return "0"
    parts = []
    for m, c in p.sorted_terms():
        factors = []
        for v, e in zip(VAR_NAMES, m):
            if e == 1:
                factors.append(v)
            elif e > 1:
                factors.append(f"{v}^{e}")
        mag = abs(c)
        if not factors:
            body = str(mag)
        elif mag == 1:
            body = "*".join(factors)
        else:
            body = "*".join([str(mag)] + factors)
        if not parts:
            parts.append(body if c > 0 else f"-{body}")
        else:
            parts.append(f"+ {body}" if c > 0 else f"- {body}")
    return " ".join(parts)


def parse_poly(text, nvars=2):
    s = text.replace(" ", "")
    if not s:
        raise ValueError("empty polynomial text")
    if s == "0":
        return Poly(nvars)
    terms = {}
    pos = 0
    sign = 1
    # split into signed chunks
    chunks = re.findall(r"[+-]?[^+-]+", s)
    if "".join(chunks) != s:
        raise ValueError(f"cannot parse {text!r}")
    for chunk in chunks:
        sign = -1 if chunk.startswith("-") else 1
        body = chunk.lstrip("+-")
        coeff = Fraction(sign)
        exps = [0] * nvars
        for factor in body.split("*"):
            if not factor:
                raise ValueError(f"cannot parse {text!r}")
            if factor[0].isdigit():
                coeff *= Fraction(factor)
            else:
                m = re.fullmatch(r"([xyz])(?:\^(\d+))?", factor)
                if not m:
                    raise ValueError(f"bad factor {factor!r} in {text!r}")
                idx = VAR_NAMES.index(m.group(1))
                if idx >= nvars:
                    raise ValueError(f"variable {m.group(1)} out of range")
                exps[idx] += int(m.group(2) or 1)
        key = tuple(exps)
        terms[key] = terms.get(key, Fraction(0)) + coeff
    return Poly(nvars, terms)


# --- univariate helpers (restrictions of curves to axes) -----------------


def sqfree_factors(coeffs):
    """Yun-style square-free decomposition of a univariate Q-polynomial.

    Returns [(factor_coeffs, multiplicity), ...] with factors monic and
    pairwise coprime; product of factor^mult recovers the monic input.
    """
    coeffs = _trim(coeffs)
    if len(coeffs) <= 1:
        return []
    coeffs = _umonic(coeffs)
    d = _uderiv(coeffs)
    g = _ugcd(coeffs, d)
    out = []
    w = _udiv(coeffs, g)[0]
    mult = 1
    while len(w) > 1:
        y = _ugcd(w, g)
        f = _udiv(w, y)[0]
        if len(f) > 1:
            out.append((tuple(f), mult))
        w = y
        g = _udiv(g, y)[0]
        mult += 1
    return out


def rational_roots(coeffs):
    """All rational roots (with multiplicity) plus the rootless residue.

    Returns (roots, residue) where roots is a list of (Fraction, mult)
    and residue is a list of (monic factor coeffs, mult) with no
    rational roots.
    """
    roots = []
    residue = []
    for fac, mult in sqfree_factors(list(coeffs)):
        fac = list(fac)
        for r in _rational_root_candidates(fac):
            while len(fac) > 1 and _ueval(fac, r) == 0:
                fac = _udiv(fac, [-r, Fraction(1)])[0]
                roots.append((r, mult))
                break  # square-free: each root once per factor
        if len(fac) > 1:
            residue.append((tuple(_umonic(fac)), mult))
    return roots, residue


def _trim(c):
    c = list(c)
    while c and c[-1] == 0:
        c.pop()
    return c


def _umonic(c):
    lc = c[-1]
    return [a / lc for a in c]


def _uderiv(c):
    return _trim([c[i] * i for i in range(1, len(c))]) or [Fraction(0)]


def _udiv(num, den):
    num = list(num)
    den = _trim(den)
    q = [Fraction(0)] * max(len(num) - len(den) + 1, 0)
    for i in range(len(q) - 1, -1, -1):
        f = num[i + len(den) - 1] / den[-1]
        q[i] = f
        if f:
            for j, dj in enumerate(den):
                num[i + j] -= f * dj
    return q, _trim(num)


def _ugcd(a, b):
    a, b = _trim(a), _trim(b)
    while b:
        a, b = b, _udiv(a, b)[1]
    return _umonic(a) if a else [Fraction(0)]


def _ueval(c, r):
    acc = Fraction(0)
    for coeff in reversed(c):
        acc = acc * r + coeff
    return acc


def _rational_root_candidates(c):
    c = _trim(c)
    # clear denominators
    den = 1
    for q in c:
        den = den * q.denominator // _igcd(den, q.denominator)
    ic = [int(q * den) for q in c]
    k = 0
    while ic[k] == 0:
        k += 1
    if k:
        yield Fraction(0)
    a0, an = abs(ic[k]), abs(ic[-1])
    for p in _divisors(a0):
        for q in _divisors(an):
            yield Fraction(p, q)
            yield Fraction(-p, q)


def _divisors(n):
    out = []
    d = 1
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            if d != n // d:
                out.append(n // d)
        d += 1
    return sorted(out)


def _igcd(a, b):
    while b:
        a, b = b, a % b
    return a
