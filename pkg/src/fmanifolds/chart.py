"""F-manifold charts: polynomial structure constants on coordinates t_1..t_n.

``structure[i][j][k]`` is the coefficient of d/dt_k in d/dt_i * d/dt_j.
The unit is stored as a polynomial vector field; for almost every chart it
is a coordinate field and ``unit_index`` records which one (0-based).
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import numpy as np

from .algebra import FiniteAlgebra, decompose
from .poly import ExactPoly, to_exact
from .report import Report

__all__ = [
    "PolyVectorField",
    "EulerCandidate",
    "Chart",
    "ChartError",
    "validate",
    "mul",
    "lie_bracket",
    "integrability_tensor",
    "integrability_check",
    "euler_tensor",
    "euler_check",
    "euler_power",
    "euler_power_identity_check",
    "solve_euler_weights",
    "fiber_algebra",
    "product_chart",
    "idempotent_frame",
]


class ChartError(ValueError):
    pass


class PolyVectorField:
    """X = sum_i X_i d/dt_i with exact polynomial components."""

    __slots__ = ("coords", "components")

    def __init__(self, coords: Sequence[str], components: Sequence):
        self.coords = tuple(coords)
        if len(components) != len(self.coords):
            raise ChartError(f"vector field needs {len(self.coords)} components, got {len(components)}")
        comps = []
        for c in components:
            if isinstance(c, ExactPoly):
                comps.append(c.with_variables(self.coords))
            elif isinstance(c, str):
                comps.append(ExactPoly.parse(c, self.coords))
            else:
                comps.append(ExactPoly.constant(to_exact(c), self.coords))
        self.components = tuple(comps)

    @classmethod
    def coordinate(cls, coords, i: int) -> "PolyVectorField":
        return cls(coords, [1 if k == i else 0 for k in range(len(coords))])

    @classmethod
    def zero(cls, coords) -> "PolyVectorField":
        return cls(coords, [0] * len(coords))

    @property
    def n(self) -> int:
        return len(self.coords)

    def __add__(self, other: "PolyVectorField"):
        return PolyVectorField(self.coords, [a + b for a, b in zip(self.components, other.components)])

    def __sub__(self, other: "PolyVectorField"):
        return PolyVectorField(self.coords, [a - b for a, b in zip(self.components, other.components)])

    def __neg__(self):
        return PolyVectorField(self.coords, [-a for a in self.components])

    def scale(self, f) -> "PolyVectorField":
        """Multiply by a function (polynomial) or scalar."""
        if isinstance(f, ExactPoly):
            f = f.with_variables(self.coords)
        return PolyVectorField(self.coords, [f * a for a in self.components])

    __rmul__ = scale

    def apply(self, f: ExactPoly) -> ExactPoly:
        """Derivative of the function f along the field."""
        f = f.with_variables(self.coords)
        out = ExactPoly.zero(self.coords)
        for v, c in zip(self.coords, self.components):
            if not c.is_zero():
                d = f.diff(v)
                if not d.is_zero():
                    out = out + c * d
        return out

    def is_zero(self) -> bool:
        return all(c.is_zero() for c in self.components)

    def coordinate_index(self):
        """i if the field is exactly d/dt_i, else None."""
        hit = None
        for i, c in enumerate(self.components):
            if c.is_zero():
                continue
            if hit is not None or c != 1:
                return None
            hit = i
        return hit

    def evaluate(self, point) -> np.ndarray:
        return np.array([c.eval(point) for c in self.components])

    def __eq__(self, other):
        if not isinstance(other, PolyVectorField):
            return NotImplemented
        return self.coords == other.coords and all(a == b for a, b in zip(self.components, other.components))

    def __hash__(self):
        return hash(self.components)

    def strings(self) -> list[str]:
        return [str(c) for c in self.components]

    def __repr__(self):
        return f"PolyVectorField({self.strings()!r})"


@dataclass
class EulerCandidate:
    field: PolyVectorField
    weight: object = 1


class Chart:
    """Polynomial multiplication on the tangent bundle of C^n plus a unit field."""

    def __init__(self, coords: Sequence[str], structure, unit=0, name: str = ""):
        self.coords = tuple(coords)
        n = len(self.coords)
        if len(set(self.coords)) != n:
            raise ChartError(f"duplicate coordinate names in {self.coords}")
        if len(structure) != n or any(len(r) != n or any(len(s) != n for s in r) for r in structure):
            raise ChartError(f"structure tensor must be {n} x {n} x {n}")
        self.structure = [[[self._coerce(structure[i][j][k]) for k in range(n)] for j in range(n)] for i in range(n)]
        if isinstance(unit, PolyVectorField):
            self.unit = PolyVectorField(self.coords, unit.components)
        elif isinstance(unit, int):
            if not 0 <= unit < n:
                raise ChartError(f"unit index {unit} out of range")
            self.unit = PolyVectorField.coordinate(self.coords, unit)
        else:
            self.unit = PolyVectorField(self.coords, unit)
        self.name = name

    def _coerce(self, v) -> ExactPoly:
        if isinstance(v, ExactPoly):
            return v.with_variables(self.coords)
        if isinstance(v, str):
            return ExactPoly.parse(v, self.coords)
        return ExactPoly.constant(to_exact(v), self.coords)

    @property
    def n(self) -> int:
        return len(self.coords)

    @property
    def unit_index(self):
        return self.unit.coordinate_index()

    def a(self, i, j, k) -> ExactPoly:
        return self.structure[i][j][k]

    def field(self, components) -> PolyVectorField:
        return PolyVectorField(self.coords, components)

    def delta(self, i: int) -> PolyVectorField:
        return PolyVectorField.coordinate(self.coords, i)

    def zero_field(self) -> PolyVectorField:
        return PolyVectorField.zero(self.coords)

    def mult_matrix(self, X: PolyVectorField):
        """Matrix M (polynomial entries) with (X*Y)_k = sum_j M[k][j] Y_j."""
        n = self.n
        zero = ExactPoly.zero(self.coords)
        M = [[zero] * n for _ in range(n)]
        for i, xi in enumerate(X.components):
            if xi.is_zero():
                continue
            for j in range(n):
                for k in range(n):
                    a = self.structure[i][j][k]
                    if not a.is_zero():
                        M[k][j] = M[k][j] + xi * a
        return M

    def __eq__(self, other):
        if not isinstance(other, Chart):
            return NotImplemented
        return (
            self.coords == other.coords
            and self.unit == other.unit
            and all(
                self.structure[i][j][k] == other.structure[i][j][k]
                for i in range(self.n) for j in range(self.n) for k in range(self.n)
            )
        )

    def __repr__(self):
        return f"Chart({self.name or 'unnamed'}, coords={self.coords})"


# ---------------------------------------------------------------------------
# products and brackets

def mul(C: Chart, X: PolyVectorField, Y: PolyVectorField) -> PolyVectorField:
    n = C.n
    out = [ExactPoly.zero(C.coords) for _ in range(n)]
    for i, xi in enumerate(X.components):
        if xi.is_zero():
            continue
        for j, yj in enumerate(Y.components):
            if yj.is_zero():
                continue
            xy = xi * yj
            for k in range(n):
                a = C.structure[i][j][k]
                if not a.is_zero():
                    out[k] = out[k] + xy * a
    return PolyVectorField(C.coords, out)


def lie_bracket(X: PolyVectorField, Y: PolyVectorField) -> PolyVectorField:
    """[X, Y]_l = X(Y_l) - Y(X_l)."""
    if X.coords != Y.coords:
        raise ChartError("vector fields live on different coordinates")
    return PolyVectorField(X.coords, [X.apply(y) - Y.apply(x) for x, y in zip(X.components, Y.components)])


# ---------------------------------------------------------------------------
# axioms

def validate(C: Chart) -> Report:
    """Commutativity, unit axiom and associativity as exact identities."""
    rep = Report("validate")
    n = C.n
    a = C.structure
    for i, j, k in itertools.product(range(n), repeat=3):
        if i < j:
            rep.checked += 1
            d = a[i][j][k] - a[j][i][k]
            if not d.is_zero():
                rep.fail("commutativity", (i + 1, j + 1, k + 1), d if rep.passed else None)
    for j in range(n):
        prod = mul(C, C.unit, C.delta(j))
        for k in range(n):
            rep.checked += 1
            d = prod.components[k] - (1 if j == k else 0)
            if not d.is_zero():
                rep.fail("unit", (j + 1, k + 1), d if rep.passed else None)
    for i, j, k in itertools.product(range(n), repeat=3):
        for l in range(n):
            rep.checked += 1
            d = ExactPoly.zero(C.coords)
            for m in range(n):
                if not a[i][j][m].is_zero() and not a[m][k][l].is_zero():
                    d = d + a[i][j][m] * a[m][k][l]
                if not a[j][k][m].is_zero() and not a[i][m][l].is_zero():
                    d = d - a[j][k][m] * a[i][m][l]
            if not d.is_zero():
                rep.fail("associativity", (i + 1, j + 1, k + 1, l + 1), d if rep.passed else None)
    return rep


def integrability_tensor(C: Chart, X, Y, Z, W) -> PolyVectorField:
    """Left side of the integrability identity, expanded term by term."""
    XY = mul(C, X, Y)
    ZW = mul(C, Z, W)
    br = lie_bracket
    m = lambda u, v: mul(C, u, v)  # noqa: E731
    out = br(XY, ZW) - m(br(XY, Z), W) - m(br(XY, W), Z)
    out = out - m(X, br(Y, ZW)) + m(m(X, br(Y, Z)), W) + m(m(X, br(Y, W)), Z)
    out = out - m(Y, br(X, ZW)) + m(m(Y, br(X, Z)), W) + m(m(Y, br(X, W)), Z)
    return out


def integrability_check(C: Chart) -> Report:
    """Integrability identity on every quadruple of coordinate fields.

    The tensor is symmetric in (X, Y) and in (Z, W), so only a <= b, c <= d
    are evaluated.
    """
    rep = Report("integrability")
    n = C.n
    deltas = [C.delta(i) for i in range(n)]
    pairs = [(a, b) for a in range(n) for b in range(a, n)]
    for (a, b), (c, d) in itertools.product(pairs, pairs):
        rep.checked += 1
        T = integrability_tensor(C, deltas[a], deltas[b], deltas[c], deltas[d])
        if not T.is_zero():
            rep.fail("integrability", (a + 1, b + 1, c + 1, d + 1), T.strings() if rep.passed else None)
    return rep


def euler_tensor(C: Chart, E: PolyVectorField, d, X, Y) -> PolyVectorField:
    XY = mul(C, X, Y)
    out = lie_bracket(E, XY) - mul(C, lie_bracket(E, X), Y) - mul(C, X, lie_bracket(E, Y))
    return out - XY.scale(to_exact(d))


def euler_check(C: Chart, E: PolyVectorField, d=1) -> Report:
    """Lie_E(*) = d * on all coordinate pairs, exactly."""
    rep = Report("euler")
    rep.details["weight"] = str(to_exact(d))
    n = C.n
    deltas = [C.delta(i) for i in range(n)]
    for i in range(n):
        for j in range(i, n):
            rep.checked += 1
            T = euler_tensor(C, E, d, deltas[i], deltas[j])
            if not T.is_zero():
                rep.fail("euler", (i + 1, j + 1), T.strings() if rep.passed else None)
    return rep


def euler_power(C: Chart, E: PolyVectorField, k: int) -> PolyVectorField:
    """E^{*k}, with E^{*0} the unit field."""
    out = C.unit
    for _ in range(k):
        out = mul(C, E, out)
    return out


def euler_power_identity_check(C: Chart, E: EulerCandidate, n: int, m: int) -> Report:
    """[E^n, E^m] = d (m - n) E^(m+n-1) for the given powers."""
    rep = Report("euler_power")
    rep.details.update({"n": n, "m": m})
    rep.checked = 1
    d = to_exact(E.weight)
    lhs = lie_bracket(euler_power(C, E.field, n), euler_power(C, E.field, m))
    if m + n - 1 >= 0:
        rhs = euler_power(C, E.field, m + n - 1).scale(d * (m - n))
    else:
        rhs = C.zero_field()
    diff = lhs - rhs
    if not diff.is_zero():
        rep.fail("euler_power", (n, m), diff.strings())
    return rep


def solve_euler_weights(C: Chart) -> EulerCandidate | None:
    """Diagonal Euler field E = sum_i w_i t_i d/dt_i of weight 1, or None.

    The Euler identity is linear in E, so each basis field t_i d/dt_i gives a
    fixed tensor and the weights solve an exact linear system on monomial
    coefficients.  Undetermined weights are set to 0.
    """
    import sympy

    n = C.n
    deltas = [C.delta(i) for i in range(n)]
    basis = [
        PolyVectorField(C.coords, [ExactPoly.var(C.coords[i], C.coords) if k == i else 0 for k in range(n)])
        for i in range(n)
    ]
    rows: dict[tuple, list] = {}
    rhs: dict[tuple, object] = {}
    for a in range(n):
        for b in range(a, n):
            target = mul(C, deltas[a], deltas[b])
            for k, comp in enumerate(target.components):
                for exp, c in comp.terms.items():
                    rhs[(a, b, k, exp)] = c
            for i, Bf in enumerate(basis):
                T = euler_tensor(C, Bf, 0, deltas[a], deltas[b])
                for k, comp in enumerate(T.components):
                    for exp, c in comp.terms.items():
                        rows.setdefault((a, b, k, exp), [0] * n)[i] = c
    keys = sorted(set(rows) | set(rhs))
    if not keys:
        return EulerCandidate(PolyVectorField.zero(C.coords), 1)

    def sym(c):
        if hasattr(c, "im"):
            return sympy.Rational(c.re) + sympy.I * sympy.Rational(c.im)
        return sympy.Rational(c)

    A = sympy.Matrix([[sym(c) for c in rows.get(key, [0] * n)] for key in keys])
    b = sympy.Matrix([sym(rhs.get(key, 0)) for key in keys])
    try:
        sol, params = A.gauss_jordan_solve(b)
    except ValueError:
        return None
    if params.shape[0]:
        sol = sol.subs({p: 0 for p in params})
    weights = []
    for v in sol:
        re_, im_ = sympy.re(v), sympy.im(v)
        if im_ != 0:
            return None
        weights.append(Fraction(int(sympy.fraction(re_)[0]), int(sympy.fraction(re_)[1])))
    field = PolyVectorField(C.coords, [ExactPoly.var(C.coords[i], C.coords) * w for i, w in enumerate(weights)])
    return EulerCandidate(field, 1)


# ---------------------------------------------------------------------------
# pointwise data

def fiber_algebra(C: Chart, p) -> FiniteAlgebra:
    n = C.n
    p = list(p)
    if len(p) != n:
        raise ChartError(f"point has {len(p)} coordinates, expected {n}")
    cache: dict = {}
    c = np.zeros((n, n, n), dtype=complex)
    for i, j, k in itertools.product(range(n), repeat=3):
        poly = C.structure[i][j][k]
        if not poly.is_zero():
            key = id(poly)
            if key not in cache:
                cache[key] = poly.eval(p)
            c[i, j, k] = cache[key]
    return FiniteAlgebra(c, C.unit.evaluate(p), check=False)


def product_chart(C1: Chart, C2: Chart) -> Chart:
    """Direct product on concatenated coordinates with unit e_1 + e_2."""
    c2 = list(C2.coords)
    taken = set(C1.coords)
    for i, v in enumerate(c2):
        if v in taken:
            base, k = v, 2
            while f"{base}_{k}" in taken or f"{base}_{k}" in c2:
                k += 1
            c2[i] = f"{base}_{k}"
        taken.add(c2[i])
    rename = dict(zip(C2.coords, c2))
    coords = tuple(C1.coords) + tuple(c2)
    n1, n2 = C1.n, C2.n
    n = n1 + n2
    zero = ExactPoly.zero(coords)

    def lift2(p: ExactPoly) -> ExactPoly:
        return ExactPoly(tuple(rename[v] for v in p.variables), p.terms).with_variables(coords)

    S = [[[zero] * n for _ in range(n)] for _ in range(n)]
    for i, j, k in itertools.product(range(n1), repeat=3):
        S[i][j][k] = C1.structure[i][j][k].with_variables(coords)
    for i, j, k in itertools.product(range(n2), repeat=3):
        S[n1 + i][n1 + j][n1 + k] = lift2(C2.structure[i][j][k])
    unit = [c.with_variables(coords) for c in C1.unit.components] + [lift2(c) for c in C2.unit.components]
    name = f"{C1.name or 'C1'}x{C2.name or 'C2'}"
    return Chart(coords, S, PolyVectorField(coords, unit), name=name)


def product_euler(C1: Chart, E1: PolyVectorField, C2: Chart, E2: PolyVectorField, P: Chart) -> PolyVectorField:
    """E_1 + E_2 on a product chart built by :func:`product_chart`."""
    comps = []
    for c in E1.components:
        comps.append(c.with_variables(P.coords))
    rename = dict(zip(C2.coords, P.coords[C1.n:]))
    for c in E2.components:
        comps.append(ExactPoly(tuple(rename[v] for v in c.variables), c.terms).with_variables(P.coords))
    return PolyVectorField(P.coords, comps)


def _idempotents_at(C: Chart, p, tol):
    dec = decompose(fiber_algebra(C, p), tol)
    if not dec.semisimple:
        raise ChartError(f"fiber at {list(p)} is not semisimple (partition {dec.partition})")
    return [f.idempotent for f in dec.factors]


def idempotent_frame(C: Chart, p, h: float = 1e-4, tol: float = 1e-8) -> dict:
    """Idempotent vectors at p and central-difference estimates of [e_i, e_j](p)."""
    n = C.n
    p = np.array(p, dtype=complex)
    base = _idempotents_at(C, p, tol)

    def matched(q):
        es = _idempotents_at(C, q, tol)
        out = []
        for e in base:
            k = int(np.argmin([np.linalg.norm(f - e) for f in es]))
            out.append(es[k])
        return out

    # jac[k][i] = d e_i / d t_k
    jac = []
    for k in range(n):
        dp = np.zeros(n, dtype=complex)
        dp[k] = h
        plus, minus = matched(p + dp), matched(p - dp)
        jac.append([(a - b) / (2 * h) for a, b in zip(plus, minus)])
    worst = 0.0
    for i in range(n):
        for j in range(i + 1, n):
            bracket = sum(base[i][k] * jac[k][j] - base[j][k] * jac[k][i] for k in range(n))
            worst = max(worst, float(np.max(np.abs(bracket))))
    return {
        "point": [[z.real, z.imag] for z in p],
        "step": h,
        "idempotents": [[[z.real, z.imag] for z in e] for e in base],
        "max_commutator": worst,
    }
