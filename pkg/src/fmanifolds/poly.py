"""Exact multivariate polynomials over Q and Q(i).

Polynomials are sparse maps from exponent tuples to exact coefficients.
Coefficients are Python ints, :class:`fractions.Fraction` or
:class:`GaussRat` (a + b*i with rational a, b); every arithmetic result is
normalized so that integral rationals are stored as ints and Gaussian
rationals with zero imaginary part collapse to rationals.

The module also carries the univariate elimination tools (Sylvester
resultant, discriminant) and numeric root finding used everywhere else.
"""

from __future__ import annotations

import itertools
import re
from fractions import Fraction
from functools import reduce
from typing import Iterable, Mapping, Sequence

import numpy as np

__all__ = [
    "GaussRat",
    "ExactPoly",
    "PolyParseError",
    "arith",
    "partial_derivative",
    "resultant",
    "discriminant_uni",
    "complex_roots",
    "numeric_roots",
    "poly_det",
    "squarefree_part",
    "to_exact",
]


class PolyParseError(ValueError):
    """Malformed polynomial string."""


class GaussRat:
    """Gaussian rational ``re + im*i`` with exact rational parts."""

    __slots__ = ("re", "im")

    def __init__(self, re_part, im_part=0):
        self.re = _norm_rat(re_part)
        self.im = _norm_rat(im_part)

    def _coerce(self, other):
        if isinstance(other, GaussRat):
            return other
        if isinstance(other, (int, Fraction)):
            return GaussRat(other, 0)
        return NotImplemented

    def __add__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return _norm(GaussRat(self.re + o.re, self.im + o.im))

    __radd__ = __add__

    def __sub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return _norm(GaussRat(self.re - o.re, self.im - o.im))

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return o - self

    def __mul__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return _norm(GaussRat(self.re * o.re - self.im * o.im, self.re * o.im + self.im * o.re))

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        den = o.re * o.re + o.im * o.im
        if den == 0:
            raise ZeroDivisionError("division by zero Gaussian rational")
        num = self * GaussRat(o.re, -o.im)
        if isinstance(num, GaussRat):
            return _norm(GaussRat(Fraction(num.re) / den, Fraction(num.im) / den))
        return _norm(Fraction(num) / den)

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return o / self

    def __neg__(self):
        return GaussRat(-self.re, -self.im)

    def __pow__(self, k: int):
        out = 1
        for _ in range(k):
            out = out * self
        return out

    def __eq__(self, other):
        if isinstance(other, GaussRat):
            return self.re == other.re and self.im == other.im
        if isinstance(other, (int, Fraction)):
            return self.im == 0 and self.re == other
        return NotImplemented

    def __hash__(self):
        return hash((self.re, self.im))

    def __complex__(self):
        return complex(float(self.re), float(self.im))

    def conjugate(self):
        return GaussRat(self.re, -self.im)

    def __repr__(self):
        return f"GaussRat({self.re}, {self.im})"


def _norm_rat(x):
    if isinstance(x, bool):
        return int(x)
    if isinstance(x, int):
        return x
    if isinstance(x, Fraction):
        return x.numerator if x.denominator == 1 else x
    raise TypeError(f"not an exact rational: {x!r}")


def _norm(x):
    if isinstance(x, GaussRat):
        if x.im == 0:
            return x.re
        return x
    return _norm_rat(x)


def _div(a, b):
    if isinstance(a, GaussRat) or isinstance(b, GaussRat):
        return _norm(GaussRat(a) / b if not isinstance(a, GaussRat) else a / b)
    return _norm(Fraction(a) / b)


def to_exact(x):
    """Convert a number (int, Fraction, float, complex) to an exact coefficient.

    Floats are converted exactly (binary value), so no rounding happens here.
    """
    if isinstance(x, (GaussRat, int, Fraction)):
        return _norm(x)
    if isinstance(x, (float, np.floating)):
        return _norm(Fraction(float(x)))
    if isinstance(x, (complex, np.complexfloating)):
        return _norm(GaussRat(Fraction(x.real), Fraction(x.imag)))
    if isinstance(x, np.integer):
        return int(x)
    raise TypeError(f"cannot convert {x!r} to an exact coefficient")


def _coeff_complex(c) -> complex:
    if isinstance(c, GaussRat):
        return complex(c)
    return complex(float(c))


def _grlex_key(exp):
    return (sum(exp), exp)


class ExactPoly:
    """Sparse multivariate polynomial with exact coefficients.

    ``variables`` is an ordered tuple of names; ``terms`` maps exponent tuples
    (one entry per variable) to nonzero coefficients.  Instances are treated
    as immutable values.
    """

    __slots__ = ("variables", "terms", "_hash")

    def __init__(self, variables: Sequence[str], terms: Mapping[tuple, object] | None = None):
        self.variables = tuple(variables)
        n = len(self.variables)
        clean = {}
        if terms:
            for exp, c in terms.items():
                exp = tuple(int(e) for e in exp)
                if len(exp) != n:
                    raise ValueError(f"exponent {exp} does not match {n} variables")
                if any(e < 0 for e in exp):
                    raise ValueError(f"negative exponent in {exp}")
                c = to_exact(c)
                if c != 0:
                    clean[exp] = c
        self.terms = clean
        self._hash = None

    @classmethod
    def _raw(cls, variables, terms):
        obj = cls.__new__(cls)
        obj.variables = variables
        obj.terms = terms
        obj._hash = None
        return obj

    # constructors -----------------------------------------------------
    @classmethod
    def constant(cls, c, variables: Sequence[str] = ()) -> "ExactPoly":
        n = len(variables)
        return cls(variables, {(0,) * n: c})

    @classmethod
    def zero(cls, variables: Sequence[str] = ()) -> "ExactPoly":
        return cls._raw(tuple(variables), {})

    @classmethod
    def var(cls, name: str, variables: Sequence[str] | None = None) -> "ExactPoly":
        variables = tuple(variables) if variables is not None else (name,)
        if name not in variables:
            raise ValueError(f"unknown variable {name!r}")
        exp = tuple(1 if v == name else 0 for v in variables)
        return cls._raw(variables, {exp: 1})

    @classmethod
    def parse(cls, text: str, variables: Sequence[str] | None = None) -> "ExactPoly":
        return parse_poly(text, variables)

    # structural helpers -----------------------------------------------
    def with_variables(self, variables: Sequence[str]) -> "ExactPoly":
        """Re-embed into a (super)set of variables."""
        variables = tuple(variables)
        if variables == self.variables:
            return self
        pos = []
        for v in self.variables:
            if v not in variables:
                if any(exp[self.variables.index(v)] for exp in self.terms):
                    raise ValueError(f"variable {v!r} occurs but is not in {variables}")
                pos.append(None)
            else:
                pos.append(variables.index(v))
        n = len(variables)
        out = {}
        for exp, c in self.terms.items():
            new = [0] * n
            for e, p in zip(exp, pos):
                if p is not None:
                    new[p] = e
            out[tuple(new)] = c
        return ExactPoly._raw(variables, out)

    def _align(self, other: "ExactPoly"):
        if self.variables == other.variables:
            return self, other
        union = list(self.variables)
        for v in other.variables:
            if v not in union:
                union.append(v)
        return self.with_variables(union), other.with_variables(union)

    def _lift(self, other):
        if isinstance(other, ExactPoly):
            return self._align(other)
        c = to_exact(other)
        return self, ExactPoly.constant(c, self.variables)

    # arithmetic --------------------------------------------------------
    def __add__(self, other):
        try:
            a, b = self._lift(other)
        except TypeError:
            return NotImplemented
        out = dict(a.terms)
        for exp, c in b.terms.items():
            s = out.get(exp, 0) + c
            if s == 0:
                out.pop(exp, None)
            else:
                out[exp] = _norm(s)
        return ExactPoly._raw(a.variables, out)

    __radd__ = __add__

    def __neg__(self):
        return ExactPoly._raw(self.variables, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other):
        try:
            a, b = self._lift(other)
        except TypeError:
            return NotImplemented
        return a + (-b)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if not isinstance(other, ExactPoly):
            try:
                c = to_exact(other)
            except TypeError:
                return NotImplemented
            if c == 0:
                return ExactPoly.zero(self.variables)
            return ExactPoly._raw(self.variables, {e: _norm(v * c) for e, v in self.terms.items()})
        a, b = self._align(other)
        out: dict = {}
        get = out.get
        for ea, ca in a.terms.items():
            for eb, cb in b.terms.items():
                e = tuple([x + y for x, y in zip(ea, eb)])
                out[e] = get(e, 0) + ca * cb
        return ExactPoly._raw(a.variables, {e: _norm(c) for e, c in out.items() if c != 0})

    __rmul__ = __mul__

    def __truediv__(self, other):
        """Division by a nonzero scalar only; see :meth:`divmod` for polynomials."""
        if isinstance(other, ExactPoly):
            if other.is_constant():
                other = other.constant_value()
            else:
                q, r = self.divmod(other)
                if not r.is_zero():
                    raise ArithmeticError("polynomial division is not exact")
                return q
        c = to_exact(other)
        return ExactPoly._raw(self.variables, {e: _div(v, c) for e, v in self.terms.items()})

    def __pow__(self, k: int):
        if k < 0:
            raise ValueError("negative power")
        result = ExactPoly.constant(1, self.variables)
        base = self
        while k:
            if k & 1:
                result = result * base
            k >>= 1
            if k:
                base = base * base
        return result

    def __eq__(self, other):
        if isinstance(other, ExactPoly):
            a, b = self._align(other)
            return a.terms == b.terms
        try:
            c = to_exact(other)
        except TypeError:
            return NotImplemented
        if c == 0:
            return not self.terms
        return self.is_constant() and self.constant_value() == c

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(frozenset((self._canonical_items())))
        return self._hash

    def _canonical_items(self):
        # hash must agree with __eq__ across variable orders: key by name
        out = []
        for exp, c in self.terms.items():
            out.append((tuple(sorted((v, e) for v, e in zip(self.variables, exp) if e)), c))
        return out

    # queries -----------------------------------------------------------
    def is_zero(self) -> bool:
        return not self.terms

    def is_constant(self) -> bool:
        return all(not any(e) for e in self.terms)

    def constant_value(self):
        if not self.is_constant():
            raise ValueError("polynomial is not constant")
        return next(iter(self.terms.values()), 0)

    def coefficient(self, exp: Sequence[int]):
        return self.terms.get(tuple(exp), 0)

    def degree(self, var: str | None = None) -> int:
        """Degree in ``var`` (total degree if omitted); -1 for the zero polynomial."""
        if not self.terms:
            return -1
        if var is None:
            return max(sum(e) for e in self.terms)
        i = self._index(var)
        return max(e[i] for e in self.terms)

    def used_variables(self) -> tuple:
        return tuple(v for i, v in enumerate(self.variables) if any(e[i] for e in self.terms))

    def _index(self, var: str) -> int:
        try:
            return self.variables.index(var)
        except ValueError:
            raise ValueError(f"unknown variable {var!r}") from None

    def sorted_terms(self):
        """Terms in descending graded-lex order."""
        return sorted(self.terms.items(), key=lambda kv: _grlex_key(kv[0]), reverse=True)

    def leading_term(self):
        return max(self.terms.items(), key=lambda kv: _grlex_key(kv[0]))

    def coefficients_in(self, var: str) -> dict:
        """Split as sum_k c_k * var^k; returns {k: c_k} with c_k free of var."""
        i = self._index(var)
        out: dict[int, dict] = {}
        for exp, c in self.terms.items():
            k = exp[i]
            rest = exp[:i] + (0,) + exp[i + 1:]
            out.setdefault(k, {})[rest] = c
        return {k: ExactPoly._raw(self.variables, t) for k, t in out.items()}

    def is_real(self) -> bool:
        return not any(isinstance(c, GaussRat) for c in self.terms.values())

    # calculus and evaluation -----------------------------------------
    def diff(self, var: str) -> "ExactPoly":
        i = self._index(var)
        out = {}
        for exp, c in self.terms.items():
            k = exp[i]
            if k:
                out[exp[:i] + (k - 1,) + exp[i + 1:]] = _norm(c * k)
        return ExactPoly._raw(self.variables, out)

    def __call__(self, *point):
        return self.eval(point[0] if len(point) == 1 and not np.isscalar(point[0]) else point)

    def eval(self, point: Sequence) -> complex:
        """Double precision evaluation at a complex point (one coordinate per variable)."""
        point = list(point)
        if len(point) != len(self.variables):
            raise ValueError(f"point has {len(point)} coordinates, expected {len(self.variables)}")
        if not self.terms:
            return 0j
        pts = [complex(p) for p in point]
        # Horner in the first variable, recursing on the rest
        return _horner(self.terms, pts, 0)

    def eval_exact(self, point: Sequence):
        """Exact evaluation at a point with rational or Gaussian-rational coordinates."""
        point = [to_exact(p) for p in point]
        if len(point) != len(self.variables):
            raise ValueError(f"point has {len(point)} coordinates, expected {len(self.variables)}")
        total = 0
        powers: dict = {}
        for exp, c in self.terms.items():
            term = c
            for i, e in enumerate(exp):
                if e:
                    key = (i, e)
                    if key not in powers:
                        powers[key] = point[i] ** e if not isinstance(point[i], GaussRat) else point[i].__pow__(e)
                    term = term * powers[key]
            total = total + term
        return _norm(total)

    def substitute(self, values: Mapping[str, object], variables: Sequence[str] | None = None) -> "ExactPoly":
        """Compose: replace variables by polynomials or exact numbers.

        The result lives in ``variables`` if given, else in the union of the
        remaining variables and those of the substituted polynomials.
        """
        keep = [v for v in self.variables if v not in values]
        subs = {}
        target = list(keep)
        for v, val in values.items():
            if v not in self.variables:
                continue
            if isinstance(val, ExactPoly):
                for w in val.variables:
                    if w not in target:
                        target.append(w)
            subs[v] = val
        if variables is not None:
            target = list(variables)
        target = tuple(target)
        sub_polys = {}
        for v, val in subs.items():
            if isinstance(val, ExactPoly):
                sub_polys[v] = val.with_variables(target)
            else:
                sub_polys[v] = ExactPoly.constant(to_exact(val), target)
        base_vars = [ExactPoly.var(v, target) if v not in sub_polys else sub_polys[v] for v in self.variables]
        cache: dict = {}

        def power(i, e):
            key = (i, e)
            if key not in cache:
                cache[key] = base_vars[i] ** e
            return cache[key]

        acc: dict = {}
        for exp, c in self.terms.items():
            term = ExactPoly.constant(c, target)
            for i, e in enumerate(exp):
                if e:
                    term = term * power(i, e)
            for te, tc in term.terms.items():
                acc[te] = acc.get(te, 0) + tc
        return ExactPoly._raw(target, {e: _norm(c) for e, c in acc.items() if c != 0})

    def restrict_to_line(self, point: Sequence, direction: Sequence) -> np.ndarray:
        """Coefficients (ascending) of s -> self(point + s*direction) in complex doubles."""
        n = len(self.variables)
        if len(point) != n or len(direction) != n:
            raise ValueError("point/direction dimension mismatch")
        lin = [np.array([complex(p), complex(d)]) for p, d in zip(point, direction)]
        cache: dict = {}

        def power(i, e):
            key = (i, e)
            if key not in cache:
                out = np.array([1 + 0j])
                for _ in range(e):
                    out = np.convolve(out, lin[i])
                cache[key] = out
            return cache[key]

        deg = max((sum(e) for e in self.terms), default=0)
        acc = np.zeros(deg + 1, dtype=complex)
        for exp, c in self.terms.items():
            term = np.array([_coeff_complex(c)])
            for i, e in enumerate(exp):
                if e:
                    term = np.convolve(term, power(i, e))
            acc[: len(term)] += term
        return acc

    # division ------------------------------------------------------------
    def divmod(self, other: "ExactPoly"):
        """Multivariate division by a single polynomial in graded-lex order.

        Returns (q, r) with self = q*other + r and no term of r divisible by
        the leading monomial of other; r == 0 iff other divides self.
        """
        a, b = self._align(other)
        if b.is_zero():
            raise ZeroDivisionError("division by zero polynomial")
        lexp, lc = b.leading_term()
        rest = {e: c for e, c in b.terms.items() if e != lexp}
        p = dict(a.terms)
        q: dict = {}
        r: dict = {}
        while p:
            pexp = max(p, key=_grlex_key)
            pc = p.pop(pexp)
            if all(x >= y for x, y in zip(pexp, lexp)):
                mexp = tuple(x - y for x, y in zip(pexp, lexp))
                mc = _div(pc, lc)
                q[mexp] = _norm(q.get(mexp, 0) + mc)
                for e, c in rest.items():
                    ne = tuple(x + y for x, y in zip(e, mexp))
                    v = p.get(ne, 0) - mc * c
                    if v == 0:
                        p.pop(ne, None)
                    else:
                        p[ne] = _norm(v)
            else:
                r[pexp] = pc
        qp = ExactPoly._raw(a.variables, {e: c for e, c in q.items() if c != 0})
        return qp, ExactPoly._raw(a.variables, r)

    def divides(self, other: "ExactPoly") -> bool:
        """True iff self divides other exactly."""
        return other.divmod(self)[1].is_zero()

    # printing ------------------------------------------------------------
    def __str__(self):
        return format_poly(self)

    def __repr__(self):
        return f"ExactPoly({list(self.variables)!r}, {format_poly(self)!r})"


def _horner(terms, pts, i):
    # terms: dict exp->coeff restricted to a common prefix; evaluate recursively
    n = len(pts)
    if i == n:
        return sum(_coeff_complex(c) for c in terms.values())
    groups: dict[int, dict] = {}
    for exp, c in terms.items():
        groups.setdefault(exp[i], {})[exp] = c
    top = max(groups)
    acc = 0j
    for k in range(top, -1, -1):
        acc = acc * pts[i]
        if k in groups:
            acc += _horner(groups[k], pts, i + 1)
    return acc


# ---------------------------------------------------------------------------
# text grammar

def _format_rat(c) -> str:
    c = _norm_rat(c)
    if isinstance(c, int):
        return str(c)
    return f"{c.numerator}/{c.denominator}"


def _monomial_str(variables, exp) -> str:
    parts = []
    for v, e in zip(variables, exp):
        if e == 1:
            parts.append(v)
        elif e > 1:
            parts.append(f"{v}^{e}")
    return " * ".join(parts)


def _signed_terms(p: ExactPoly):
    for exp, c in p.sorted_terms():
        mono = _monomial_str(p.variables, exp)
        parts = [(c.re, False), (c.im, True)] if isinstance(c, GaussRat) else [(c, False)]
        for val, imag in parts:
            if val == 0:
                continue
            neg = val < 0
            mag = -val if neg else val
            factors = []
            if mag != 1 or (not mono and not imag):
                factors.append(_format_rat(mag))
            if imag:
                factors.append("I")
            if mono:
                factors.append(mono)
            yield neg, " * ".join(factors)


def format_poly(p: ExactPoly) -> str:
    """Canonical text: graded-lex descending, ``c * v1^e1 * v2^e2`` terms."""
    out = []
    for k, (neg, body) in enumerate(_signed_terms(p)):
        if k == 0:
            out.append(("-" if neg else "") + body)
        else:
            out.append((" - " if neg else " + ") + body)
    return "".join(out) if out else "0"


_TOKEN = re.compile(r"\s*(?:(\d+)|([A-Za-z_][A-Za-z0-9_]*)|(\S))")


def _tokenize(text: str):
    pos = 0
    toks = []
    text = text.rstrip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m:
            raise PolyParseError(f"unexpected input at offset {pos} in {text!r}")
        num, ident, sym = m.groups()
        if num is not None:
            toks.append(("num", int(num), m.start(1)))
        elif ident is not None:
            toks.append(("id", ident, m.start(2)))
        else:
            if sym not in "+-*/^":
                raise PolyParseError(f"unexpected character {sym!r} at offset {m.start(3)} in {text!r}")
            toks.append((sym, sym, m.start(3)))
        pos = m.end()
    return toks


def parse_poly(text: str, variables: Sequence[str] | None = None) -> ExactPoly:
    """Parse the ``c * v1^e1 * v2^e2 +/- ...`` grammar.

    ``I`` denotes the imaginary unit unless declared as a variable.  When
    ``variables`` is None the variables are collected in order of appearance.
    """
    if not isinstance(text, str):
        raise PolyParseError(f"polynomial must be a string, got {type(text).__name__}")
    toks = _tokenize(text)
    if not toks:
        raise PolyParseError("empty polynomial string")
    declared = list(variables) if variables is not None else None
    seen: list[str] = [] if declared is None else declared
    terms: list[tuple[object, dict]] = []
    i = 0

    def peek(k=0):
        return toks[i + k] if i + k < len(toks) else None

    def expect_num():
        nonlocal i
        t = peek()
        if t is None or t[0] != "num":
            where = t[2] if t else len(text)
            raise PolyParseError(f"expected integer at offset {where} in {text!r}")
        i += 1
        return t[1]

    first = True
    while i < len(toks) or first:
        sign = 1
        t = peek()
        if t is None:
            raise PolyParseError(f"dangling operator at end of {text!r}")
        if t[0] in "+-":
            sign = -1 if t[0] == "-" else 1
            i += 1
        elif not first:
            raise PolyParseError(f"expected '+' or '-' at offset {t[2]} in {text!r}")
        first = False
        coeff = Fraction(sign)
        ipow = 0
        mono: dict[str, int] = {}
        while True:
            t = peek()
            if t is None:
                raise PolyParseError(f"expected a factor at end of {text!r}")
            if t[0] == "num":
                i += 1
                val = Fraction(t[1])
                if peek() is not None and peek()[0] == "/":
                    i += 1
                    den = expect_num()
                    if den == 0:
                        raise PolyParseError(f"zero denominator in {text!r}")
                    val = val / den
                coeff *= val
            elif t[0] == "id":
                i += 1
                name = t[1]
                exp = 1
                if peek() is not None and peek()[0] == "^":
                    i += 1
                    exp = expect_num()
                if name == "I" and (declared is None or "I" not in declared):
                    ipow += exp
                else:
                    if name not in seen:
                        if declared is not None:
                            raise PolyParseError(f"unknown variable {name!r} in {text!r}")
                        seen.append(name)
                    mono[name] = mono.get(name, 0) + exp
            else:
                raise PolyParseError(f"unexpected {t[1]!r} at offset {t[2]} in {text!r}")
            t = peek()
            if t is not None and t[0] == "*":
                i += 1
                continue
            break
        if ipow % 4 >= 2:
            coeff = -coeff
        c = GaussRat(0, coeff) if ipow % 2 else coeff
        terms.append((c, mono))
    vars_final = tuple(seen)
    acc: dict = {}
    for c, mono in terms:
        exp = tuple(mono.get(v, 0) for v in vars_final)
        acc[exp] = acc.get(exp, 0) + c
    return ExactPoly(vars_final, acc)


# ---------------------------------------------------------------------------
# operations

def arith(a: ExactPoly, b: ExactPoly, op: str) -> ExactPoly:
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        return a * b
    raise ValueError(f"unknown op {op!r}")


def partial_derivative(a: ExactPoly, var: str) -> ExactPoly:
    return a.diff(var)


def poly_det(matrix: Sequence[Sequence[ExactPoly]], variables: Sequence[str] | None = None) -> ExactPoly:
    """Determinant of a square matrix of polynomials (division free).

    Laplace expansion along rows with memoization on column subsets, so the
    cost is O(n * 2^n) polynomial products.
    """
    n = len(matrix)
    if variables is None:
        vs: list[str] = []
        for row in matrix:
            for p in row:
                for v in p.variables:
                    if v not in vs:
                        vs.append(v)
        variables = vs
    variables = tuple(variables)
    if n == 0:
        return ExactPoly.constant(1, variables)
    rows = [[p.with_variables(variables) for p in row] for row in matrix]
    if any(len(r) != n for r in rows):
        raise ValueError("matrix is not square")
    # minors over the last k rows, keyed by frozenset of columns
    memo: dict[int, ExactPoly] = {0: ExactPoly.constant(1, variables)}
    for k in range(1, n + 1):
        r = n - k
        new: dict[int, ExactPoly] = {}
        for cols in itertools.combinations(range(n), k):
            mask = 0
            for c in cols:
                mask |= 1 << c
            acc = ExactPoly.zero(variables)
            for pos, c in enumerate(cols):
                entry = rows[r][c]
                if entry.is_zero():
                    continue
                sub = memo.get(mask & ~(1 << c))
                if sub is None or sub.is_zero():
                    continue
                term = entry * sub
                acc = acc - term if pos % 2 else acc + term
            new[mask] = acc
        memo = new
    return memo[(1 << n) - 1]


def sylvester_matrix(a: ExactPoly, b: ExactPoly, var: str):
    a, b = a._align(b)
    m, n = a.degree(var), b.degree(var)
    ca, cb = a.coefficients_in(var), b.coefficients_in(var)
    zero = ExactPoly.zero(a.variables)
    rows = []
    for i in range(n):
        row = [zero] * (m + n)
        for k in range(m + 1):
            row[i + m - k] = ca.get(k, zero)
        rows.append(row)
    for i in range(m):
        row = [zero] * (m + n)
        for k in range(n + 1):
            row[i + n - k] = cb.get(k, zero)
        rows.append(row)
    return rows


def resultant(a: ExactPoly, b: ExactPoly, var: str) -> ExactPoly:
    """Sylvester resultant Res_var(a, b); var is dropped from the result."""
    a, b = a._align(b)
    if a.degree(var) < 1 or b.degree(var) < 1:
        raise ValueError(f"resultant needs positive degree in {var!r}")
    det = poly_det(sylvester_matrix(a, b, var), a.variables)
    rest = tuple(v for v in a.variables if v != var)
    return det.with_variables(rest)


def discriminant_uni(a: ExactPoly, var: str) -> ExactPoly:
    """disc_var(a) = (-1)^(n(n-1)/2) Res(a, a') / lc(a)."""
    n = a.degree(var)
    if n < 2:
        raise ValueError(f"discriminant needs degree >= 2 in {var!r}, got {n}")
    lc = a.coefficients_in(var)[n]
    res = resultant(a, a.diff(var), var)
    q = res / lc.with_variables(res.variables)
    return -q if (n * (n - 1) // 2) % 2 else q


def squarefree_part(a: ExactPoly) -> ExactPoly:
    """Product of the distinct irreducible factors, normalized to be monic in grlex."""
    import sympy

    if a.is_zero():
        raise ValueError("squarefree part of zero")
    if a.is_constant():
        return ExactPoly.constant(1, a.variables)
    syms = sympy.symbols(list(a.variables)) if len(a.variables) > 1 else [sympy.Symbol(a.variables[0])]
    expr = to_sympy(a, syms)
    domain = "QQ_I" if not a.is_real() else "QQ"
    sp = sympy.Poly(expr, *syms, domain=domain).sqf_part()
    out = from_sympy(sp.as_expr(), a.variables, syms)
    lexp, lc = out.leading_term()
    return out / lc


def to_sympy(a: ExactPoly, syms=None):
    import sympy

    if syms is None:
        syms = [sympy.Symbol(v) for v in a.variables]
    total = sympy.Integer(0)
    for exp, c in a.terms.items():
        if isinstance(c, GaussRat):
            sc = sympy.Rational(c.re) + sympy.I * sympy.Rational(c.im)
        else:
            sc = sympy.Rational(c)
        mono = sympy.Integer(1)
        for s, e in zip(syms, exp):
            if e:
                mono *= s ** e
        total += sc * mono
    return total


def from_sympy(expr, variables: Sequence[str], syms=None) -> ExactPoly:
    import sympy

    if syms is None:
        syms = [sympy.Symbol(v) for v in variables]
    p = sympy.Poly(sympy.expand(expr), *syms)
    terms = {}
    for exp, c in p.terms():
        re_, im_ = sympy.re(c), sympy.im(c)
        rc = Fraction(int(sympy.fraction(re_)[0]), int(sympy.fraction(re_)[1]))
        ic = Fraction(int(sympy.fraction(im_)[0]), int(sympy.fraction(im_)[1]))
        terms[exp] = GaussRat(rc, ic) if ic else rc
    return ExactPoly(tuple(variables), terms)


# ---------------------------------------------------------------------------
# roots

def _cluster(values: Sequence[complex], tol: float):
    """Single-linkage clustering; returns list of index lists."""
    n = len(values)
    parent = list(range(n))

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    for i in range(n):
        for j in range(i + 1, n):
            scale = max(1.0, abs(values[i]), abs(values[j]))
            if abs(values[i] - values[j]) <= tol * scale:
                parent[find(i)] = find(j)
    groups: dict[int, list[int]] = {}
    for i in range(n):
        groups.setdefault(find(i), []).append(i)
    return list(groups.values())


def _polish(coeffs_desc: np.ndarray, z: complex, steps: int = 8) -> complex:
    d = np.polyder(coeffs_desc)
    for _ in range(steps):
        f = np.polyval(coeffs_desc, z)
        fd = np.polyval(d, z)
        if fd == 0:
            break
        step = f / fd
        z_new = z - step
        if abs(np.polyval(coeffs_desc, z_new)) >= abs(f):
            break
        z = z_new
    return z


def numeric_roots(coeffs: Sequence[complex], tol: float = 1e-8, ascending: bool = True):
    """Roots of a numeric univariate polynomial with multiplicity clustering.

    Companion-matrix eigenvalues (numpy.roots) followed by Newton polishing;
    roots within ``tol`` (relative to max(1,|z|)) are merged and reported
    with the cluster size as multiplicity.
    """
    c = np.asarray(coeffs, dtype=complex)
    if ascending:
        c = c[::-1]
    nz = np.flatnonzero(np.abs(c) > 0)
    if len(nz) == 0:
        raise ValueError("zero polynomial has no roots")
    c = c[nz[0]:]
    if len(c) == 1:
        return []
    raw = np.roots(c)
    polished = [_polish(c, complex(z)) for z in raw]
    out = []
    for grp in _cluster(polished, tol):
        z = complex(np.mean([polished[i] for i in grp]))
        out.append((z, len(grp)))
    out.sort(key=lambda zm: (zm[0].real, zm[0].imag))
    return out


def complex_roots(a: ExactPoly, tol: float = 1e-8):
    """All complex roots of a univariate exact polynomial with multiplicities.

    The exact squarefree decomposition fixes the multiplicities; each
    squarefree factor is solved numerically and polished; finally roots
    closer than ``tol`` are merged.
    """
    import sympy

    used = a.used_variables()
    if a.is_zero():
        raise ValueError("zero polynomial has no roots")
    if len(used) > 1:
        raise ValueError(f"complex_roots needs a univariate polynomial, got variables {used}")
    if not used:
        return []
    var = used[0]
    s = sympy.Symbol(var)
    domain = "QQ_I" if not a.is_real() else "QQ"
    poly = sympy.Poly(to_sympy(a.with_variables((var,)), [s]), s, domain=domain)
    _, factors = poly.sqf_list()
    found: list[tuple[complex, int]] = []
    for fac, mult in factors:
        coeffs = [complex(sympy.N(c, 30)) for c in fac.all_coeffs()]
        for z, m in numeric_roots(coeffs, tol=0.0, ascending=False):
            found.extend([(z, mult)] * m)
    zs = [z for z, _ in found]
    out = []
    for grp in _cluster(zs, tol):
        z = complex(np.mean([zs[i] for i in grp]))
        out.append((z, sum(found[i][1] for i in grp)))
    out.sort(key=lambda zm: (zm[0].real, zm[0].imag))
    return out


def product(polys: Iterable[ExactPoly], variables: Sequence[str]) -> ExactPoly:
    return reduce(lambda x, y: x * y, polys, ExactPoly.constant(1, variables))
