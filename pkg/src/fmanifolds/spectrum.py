"""Analytic spectrum, Lyashko-Looijenga data, caustic and reconstruction."""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from fractions import Fraction
from typing import Sequence

import numpy as np

from .algebra import FiniteAlgebra
from .chart import Chart, ChartError, EulerCandidate, PolyVectorField, fiber_algebra, mul
from .poly import ExactPoly, discriminant_uni, numeric_roots, poly_det, squarefree_part, to_exact
from .report import Report

__all__ = [
    "SpectrumError",
    "SpectrumIdeal",
    "LLData",
    "spectrum_ideal",
    "on_spectrum",
    "char_poly_coefficients",
    "ll_map",
    "determinant_identity",
    "universal_discriminant",
    "trace_form",
    "caustic_poly",
    "dlambda_e_check",
    "log_tangency_check",
    "reconstruct_multiplication",
    "discriminant_slice",
]


class SpectrumError(ValueError):
    pass


def _fresh(name: str, taken) -> str:
    while name in taken:
        name = name + "_"
    return name


@dataclass
class SpectrumIdeal:
    fiber_vars: tuple
    coords: tuple
    generators: list

    @property
    def variables(self) -> tuple:
        return self.fiber_vars + self.coords

    def to_dict(self) -> dict:
        return {"variables": list(self.variables), "generators": [str(g) for g in self.generators]}


def spectrum_ideal(C: Chart) -> SpectrumIdeal:
    """Generators sum_i e_i y_i - 1 and y_i y_j - sum_k a_ij^k y_k (i <= j)."""
    ys = tuple(_fresh(f"y{i}", C.coords) for i in range(1, C.n + 1))
    vars_ = ys + C.coords
    Y = [ExactPoly.var(y, vars_) for y in ys]
    gens = []
    unit = ExactPoly.constant(-1, vars_)
    for e, y in zip(C.unit.components, Y):
        if not e.is_zero():
            unit = unit + e.with_variables(vars_) * y
    gens.append(unit)
    for i in range(C.n):
        for j in range(i, C.n):
            g = Y[i] * Y[j]
            for k in range(C.n):
                a = C.structure[i][j][k]
                if not a.is_zero():
                    g = g - a.with_variables(vars_) * Y[k]
            gens.append(g)
    return SpectrumIdeal(ys, C.coords, gens)


def on_spectrum(S: SpectrumIdeal, pt: Sequence, tol: float = 1e-8) -> tuple[bool, float]:
    """pt lists the y values followed by the t values."""
    if len(pt) != len(S.variables):
        raise SpectrumError(f"point has {len(pt)} coordinates, expected {len(S.variables)}")
    res = max(abs(g.eval(pt)) for g in S.generators)
    return res <= tol, float(res)


def char_poly_coefficients(M: list) -> list:
    """c_1..c_n with det(z I - M) = z^n + c_1 z^(n-1) + ... + c_n (Faddeev-LeVerrier)."""
    n = len(M)
    vars_ = M[0][0].variables
    zero = ExactPoly.zero(vars_)

    def matmul(A, B):
        out = [[zero] * n for _ in range(n)]
        for i in range(n):
            for k in range(n):
                if A[i][k].is_zero():
                    continue
                for j in range(n):
                    if not B[k][j].is_zero():
                        out[i][j] = out[i][j] + A[i][k] * B[k][j]
        return out

    coeffs = []
    Mk = [[zero] * n for _ in range(n)]  # M_0 = 0
    c_prev = ExactPoly.constant(1, vars_)
    for k in range(1, n + 1):
        Mk = matmul(M, Mk)
        for i in range(n):
            Mk[i][i] = Mk[i][i] + c_prev
        AM = matmul(M, Mk)
        tr = sum((AM[i][i] for i in range(n)), zero)
        c_prev = -(tr / k)
        coeffs.append(c_prev)
    return coeffs


@lru_cache(maxsize=None)
def universal_discriminant(n: int) -> ExactPoly:
    """disc_z(z^n + a1 z^(n-1) + ... + an) in the variables a1..an."""
    avars = tuple(f"a{i}" for i in range(1, n + 1))
    vars_ = ("z",) + avars
    Z = ExactPoly.var("z", vars_)
    P = Z ** n
    for i, a in enumerate(avars, start=1):
        P = P + ExactPoly.var(a, vars_) * Z ** (n - i)
    return discriminant_uni(P, "z").with_variables(avars)


def _univariate_disc(coeffs: list, coords) -> ExactPoly:
    """disc_z(z^n + sum c_i z^(n-i)); constant 1 when n = 1."""
    n = len(coeffs)
    if n < 2:
        return ExactPoly.constant(1, coords)
    D = universal_discriminant(n)
    return D.substitute({f"a{i}": c for i, c in enumerate(coeffs, start=1)}, tuple(coords))


class LLData:
    """Lambda_1..Lambda_n with the discriminant Lambda_n and the bifurcation polynomial.

    The bifurcation polynomial is disc_z(z^n + sum Lambda_i z^(n-i)), i.e. the
    universal discriminant composed with Lambda.  Its expansion can be large,
    so it is computed on first access; :meth:`bifurcation_at` evaluates the
    composition directly.
    """

    def __init__(self, coords, lambdas, euler=None):
        self.coords = tuple(coords)
        self.lambdas = list(lambdas)
        self.euler = euler
        self._bif = None

    @property
    def n(self) -> int:
        return len(self.lambdas)

    @property
    def discriminant(self) -> ExactPoly:
        return self.lambdas[-1]

    @property
    def bifurcation(self) -> ExactPoly:
        if self._bif is None:
            self._bif = _univariate_disc(self.lambdas, self.coords)
        return self._bif

    def bifurcation_outer(self) -> ExactPoly:
        if self.n < 2:
            return ExactPoly.constant(1, ())
        return universal_discriminant(self.n)

    def bifurcation_at(self, p) -> complex:
        if self.n < 2:
            return 1.0 + 0j
        vals = [lam.eval(p) for lam in self.lambdas]
        return universal_discriminant(self.n).eval(vals)

    def to_dict(self, expand_bifurcation: bool = True) -> dict:
        out = {
            "coordinates": list(self.coords),
            "lambda": [str(p) for p in self.lambdas],
            "discriminant": str(self.discriminant),
        }
        if expand_bifurcation:
            out["bifurcation"] = str(self.bifurcation)
        else:
            out["bifurcation_composed"] = {
                "outer": str(self.bifurcation_outer()),
                "substitution": {f"a{i}": f"Lambda_{i}" for i in range(1, self.n + 1)},
            }
        return out


def ll_map(C: Chart, E, with_bifurcation: bool = False) -> LLData:
    """Lambda_i = coefficients of the characteristic polynomial of E*."""
    field = E.field if isinstance(E, EulerCandidate) else E
    M = C.mult_matrix(field)
    L = LLData(C.coords, char_poly_coefficients(M), field)
    if with_bifurcation:
        L.bifurcation
    return L


def determinant_identity(C: Chart, L: LLData) -> bool:
    """Lambda_n == (-1)^n det(E*) with the determinant expanded independently."""
    det = poly_det(C.mult_matrix(L.euler), C.coords)
    return L.discriminant == (det if C.n % 2 == 0 else -det)


def _random_rational_field(C: Chart, seed: int) -> PolyVectorField:
    rng = np.random.default_rng(seed)
    vals = [Fraction(int(a), int(b)) for a, b in zip(rng.integers(-20, 21, C.n), rng.integers(1, 10, C.n))]
    vals = [v if v != 0 else Fraction(1, 7) for v in vals]
    return PolyVectorField(C.coords, vals)


def trace_form(C: Chart) -> list:
    """T_ij = tr(L_{d_i * d_j}); det T vanishes exactly where the algebra is not semisimple."""
    n = C.n
    zero = ExactPoly.zero(C.coords)
    tr = [sum((C.structure[i][k][k] for k in range(n)), zero) for i in range(n)]
    return [[sum((C.structure[i][j][k] * tr[k] for k in range(n)), zero) for j in range(n)] for i in range(n)]


def caustic_poly(C: Chart, seed: int = 0, method: str = "field") -> ExactPoly:
    """Polynomial whose zero set contains the caustic.

    ``field``: squarefree part of disc_z of the characteristic polynomial of
    X* for a seeded random constant field X.  For n >= 3 the zero set can
    contain extra components where two characters agree on X.
    ``trace``: squarefree part of det of the trace form, whose zero set is
    exactly the caustic.  Both raise when the multiplication is nowhere
    semisimple.
    """
    if method == "field":
        X = _random_rational_field(C, seed)
        coeffs = char_poly_coefficients(C.mult_matrix(X))
        disc = _univariate_disc(coeffs, C.coords)
    elif method == "trace":
        disc = poly_det(trace_form(C), C.coords)
    else:
        raise ValueError(f"unknown caustic method {method!r}")
    if disc.is_zero():
        raise SpectrumError("not generically semisimple: discriminant vanishes identically")
    return squarefree_part(disc)


def _simple_eigen_check(values: np.ndarray, tol: float):
    vals = list(values)
    for a in range(len(vals)):
        for b in range(a + 1, len(vals)):
            if abs(vals[a] - vals[b]) <= tol * max(1.0, abs(vals[a]), abs(vals[b])):
                return False
    return True


def dlambda_e_check(C: Chart, L: LLData, p: Sequence, h: float = 1e-5, tol: float = 1e-6) -> Report:
    """Compare the central-difference derivative of Lambda along e with e^(n)(Lambda(p))."""
    n = C.n
    p = np.array(p, dtype=complex)
    Ep = np.array([[a.eval(p) for a in row] for row in C.mult_matrix(L.euler)])
    if not _simple_eigen_check(np.linalg.eigvals(Ep), tol):
        raise SpectrumError("point lies on the bifurcation diagram: eigenvalues of E* collide")
    e = C.unit.evaluate(p)
    jac = np.zeros((n, n), dtype=complex)
    for k in range(n):
        dp = np.zeros(n, dtype=complex)
        dp[k] = h
        jac[:, k] = [(lam.eval(p + dp) - lam.eval(p - dp)) / (2 * h) for lam in L.lambdas]
    lhs = jac @ e
    lam_p = [lam.eval(p) for lam in L.lambdas]
    rhs = np.array([-n] + [-(n - i + 1) * lam_p[i - 2] for i in range(2, n + 1)], dtype=complex)
    dev = float(np.max(np.abs(lhs - rhs)))
    rep = Report("dlambda_e")
    rep.checked = n
    rep.details["max_deviation"] = dev
    rep.details["step"] = h
    # the same identity exactly: e(Lambda_i) = -(n - i + 1) Lambda_{i-1}, Lambda_0 = 1
    exact_ok = True
    prev = ExactPoly.constant(1, C.coords)
    for i, lam in enumerate(L.lambdas, start=1):
        if C.unit.apply(lam) != prev * (-(n - i + 1)):
            exact_ok = False
        prev = lam
    rep.details["exact_identity"] = exact_ok
    scale = max(1.0, float(np.max(np.abs(rhs))))
    if dev > 1e-6 * scale + 100 * h * h * scale:
        rep.fail("dlambda_e", [], f"deviation {dev:.3g}")
    if not exact_ok:
        rep.fail("dlambda_e_exact", [])
    return rep


def log_tangency_check(C: Chart, E, L: LLData | None = None, fields: Sequence[PolyVectorField] | None = None) -> Report:
    """X(Lambda_n) in (Lambda_n) for X = E * d/dt_i (or the given fields), by exact division."""
    field = E.field if isinstance(E, EulerCandidate) else E
    if L is None:
        L = ll_map(C, field, with_bifurcation=False)
    D = L.discriminant
    rep = Report("log_tangency")
    if fields is None:
        fields = [mul(C, field, C.delta(i)) for i in range(C.n)]
    for i, X in enumerate(fields):
        rep.checked += 1
        q, r = X.apply(D).divmod(D)
        if not r.is_zero():
            rep.fail("divisibility", (i + 1,), r if rep.passed else None)
    # Saito criterion: det of the coefficient matrix of the fields
    M = [[fields[j].components[i] for j in range(C.n)] for i in range(C.n)]
    det = poly_det(M, C.coords)
    q, r = det.divmod(D)
    saito = r.is_zero() and q.is_constant() and not q.is_zero()
    rep.details["saito_determinant"] = str(det)
    rep.details["saito_unit"] = str(q) if r.is_zero() else None
    rep.checked += 1
    if not saito:
        rep.fail("saito", [])
    return rep


def reconstruct_multiplication(discriminant: ExactPoly, unit, p: Sequence, tol: float = 1e-8) -> FiniteAlgebra:
    """Semisimple algebra at p recovered from the discriminant and the unit field.

    The line p + s e meets D in n simple points q_j; the gradient g_j of D at
    q_j, normalized by g_j(e) = 1, is the j-th character at p.  Idempotents
    are the dual basis, so c[i, l, k] = sum_j lam_j(i) lam_j(l) (Lam^-1)[k, j].
    """
    vars_ = discriminant.variables
    n = len(vars_)
    p = np.array(p, dtype=complex)
    if len(p) != n:
        raise SpectrumError(f"point has {len(p)} coordinates, expected {n}")
    if isinstance(unit, (int, np.integer)):
        e = np.zeros(n, dtype=complex)
        e[unit] = 1
    else:
        e = np.array(unit, dtype=complex)
    coeffs = discriminant.restrict_to_line(p, e)
    roots = numeric_roots(coeffs, tol)
    simple = [z for z, m in roots if m == 1]
    if len(simple) != n or len(roots) != n:
        raise SpectrumError(
            f"non-generic point: line through p meets the discriminant in {len(simple)} simple points, expected {n}"
        )
    grads = [discriminant.diff(v) for v in vars_]
    Lam = np.zeros((n, n), dtype=complex)
    for j, s in enumerate(simple):
        # polish on the unexpanded polynomial; the line coefficients lose digits to cancellation
        for _ in range(5):
            q = p + s * e
            slope = sum(d.eval(q) * ek for d, ek in zip(grads, e) if ek != 0)
            if slope == 0:
                break
            step = discriminant.eval(q) / slope
            s = s - step
            if abs(step) <= 1e-16 * max(1.0, abs(s)):
                break
        q = p + s * e
        g = np.array([d.eval(q) for d in grads])
        ge = g @ e
        if abs(ge) <= tol * max(1.0, np.max(np.abs(g))):
            raise SpectrumError("non-generic point: discriminant tangent to the unit direction")
        Lam[j] = g / ge
    Linv = np.linalg.inv(Lam)
    c = np.einsum("ji,jl,kj->ilk", Lam, Lam, Linv)
    return FiniteAlgebra(c, e, check=False)


def discriminant_slice(L: LLData, i: int, j: int, grid: int, base: Sequence | None = None,
                       lo: float = -1.0, hi: float = 1.0) -> list[tuple]:
    """Rows (t_i, t_j, Re Lambda_n) on a grid x grid mesh, other coordinates at base."""
    n = len(L.coords)
    if not (0 <= i < n and 0 <= j < n) or i == j:
        raise SpectrumError(f"slice needs two distinct coordinate indices in 1..{n}")
    if grid < 2:
        raise SpectrumError("grid must be at least 2")
    base = np.zeros(n) if base is None else np.array(base, dtype=float)
    axis = np.linspace(lo, hi, grid)
    rows = []
    D = L.discriminant
    for a in axis:
        for b in axis:
            pt = base.copy()
            pt[i], pt[j] = a, b
            rows.append((float(a), float(b), float(D.eval(pt).real)))
    return rows
