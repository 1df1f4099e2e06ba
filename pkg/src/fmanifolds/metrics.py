"""Multiplication-invariant metrics, potentiality and Frobenius-manifold checks.

Christoffel symbols are kept as numerators over the common denominator
2*det(g), so every derived tensor is a polynomial after multiplying by a
power of det(g) and all checks are exact.
"""

from __future__ import annotations

import itertools
from typing import Sequence

import numpy as np

from .chart import Chart, ChartError, EulerCandidate, PolyVectorField
from .poly import ExactPoly, poly_det, to_exact
from .report import Report

__all__ = [
    "MetricError",
    "MetricField",
    "Christoffel",
    "invariance_tensor",
    "invariance_check",
    "christoffel",
    "nabla_A",
    "nabla_mult",
    "nabla_A_check",
    "nabla_mult_check",
    "nabla_identity_check",
    "coidentity_check",
    "curvature",
    "flatness_check",
    "lie_derivative_metric",
    "lie_Eg_check",
    "solve_lie_factor",
    "covariant_derivative",
    "flat_field_check",
    "frobenius_report",
]


class MetricError(ValueError):
    pass


class MetricField:
    """Symmetric matrix of polynomials with det(g) not identically zero."""

    def __init__(self, coords: Sequence[str], g):
        self.coords = tuple(coords)
        n = len(self.coords)
        if len(g) != n or any(len(r) != n for r in g):
            raise MetricError(f"metric must be {n} x {n}")

        def coerce(v):
            if isinstance(v, ExactPoly):
                return v.with_variables(self.coords)
            if isinstance(v, str):
                return ExactPoly.parse(v, self.coords)
            return ExactPoly.constant(to_exact(v), self.coords)

        self.g = [[coerce(v) for v in row] for row in g]
        for i in range(n):
            for j in range(i + 1, n):
                if self.g[i][j] != self.g[j][i]:
                    raise MetricError(f"metric not symmetric at ({i + 1},{j + 1})")
        self.det = poly_det(self.g, self.coords)
        if self.det.is_zero():
            raise MetricError("metric is degenerate: det g vanishes identically")

    @property
    def n(self) -> int:
        return len(self.coords)

    def adjugate(self):
        n = self.n
        adj = [[None] * n for _ in range(n)]
        for r in range(n):
            for c in range(n):
                minor = [[self.g[a][b] for b in range(n) if b != c] for a in range(n) if a != r]
                cof = poly_det(minor, self.coords) if n > 1 else ExactPoly.constant(1, self.coords)
                adj[c][r] = -cof if (r + c) % 2 else cof
        return adj

    def strings(self) -> list:
        return [[str(v) for v in row] for row in self.g]


def _zero(coords):
    return ExactPoly.zero(coords)


class Christoffel:
    """Gamma^k_ij = num[k][i][j] / (2 det g)."""

    def __init__(self, g: MetricField):
        self.coords = g.coords
        n = g.n
        self.delta = g.det
        adj = g.adjugate()
        dg = [[[g.g[a][b].diff(v) for v in g.coords] for b in range(n)] for a in range(n)]  # dg[a][b][i]
        num = [[[_zero(g.coords)] * n for _ in range(n)] for _ in range(n)]
        for k, i, j in itertools.product(range(n), repeat=3):
            if j < i:
                num[k][i][j] = num[k][j][i]
                continue
            acc = _zero(g.coords)
            for l in range(n):
                if adj[k][l].is_zero():
                    continue
                s = dg[l][j][i] + dg[l][i][j] - dg[i][j][l]
                if not s.is_zero():
                    acc = acc + adj[k][l] * s
            num[k][i][j] = acc
        self.num = num

    def is_zero(self) -> bool:
        return all(p.is_zero() for a in self.num for b in a for p in b)

    def evaluate(self, point) -> np.ndarray:
        d = self.delta.eval(point)
        if abs(d) == 0:
            raise MetricError("det g vanishes at the evaluation point")
        n = len(self.coords)
        out = np.zeros((n, n, n), dtype=complex)
        for k, i, j in itertools.product(range(n), repeat=3):
            out[k, i, j] = self.num[k][i][j].eval(point) / (2 * d)
        return out

    def to_dict(self) -> dict:
        n = len(self.coords)
        return {
            "denominator": str(self.delta * 2),
            "numerators": {f"{k + 1};{i + 1},{j + 1}": str(self.num[k][i][j])
                           for k, i, j in itertools.product(range(n), repeat=3) if not self.num[k][i][j].is_zero()},
        }


def christoffel(g: MetricField) -> Christoffel:
    return Christoffel(g)


def _check_coords(C: Chart, g: MetricField):
    if C.coords != g.coords:
        raise ChartError(f"metric coordinates {g.coords} differ from chart coordinates {C.coords}")


def invariance_tensor(C: Chart, g: MetricField):
    """A_ijk = g(d_i, d_j * d_k)."""
    n = C.n
    A = [[[_zero(C.coords)] * n for _ in range(n)] for _ in range(n)]
    for i, j, k in itertools.product(range(n), repeat=3):
        acc = _zero(C.coords)
        for l in range(n):
            a = C.structure[j][k][l]
            if not a.is_zero() and not g.g[i][l].is_zero():
                acc = acc + g.g[i][l] * a
        A[i][j][k] = acc
    return A


def _symmetry_report(name, T, rank, rep: Report):
    n = len(T)

    def get(idx):
        v = T
        for i in idx:
            v = v[i]
        return v

    for idx in itertools.product(range(n), repeat=rank):
        if list(idx) != sorted(idx):
            continue
        base = get(idx)
        for perm in set(itertools.permutations(idx)):
            if perm == idx:
                continue
            rep.checked += 1
            d = get(perm) - base
            if not d.is_zero():
                rep.fail(name, [i + 1 for i in perm], d if rep.passed else None, against=[i + 1 for i in idx])
    return rep


def invariance_check(C: Chart, g: MetricField) -> Report:
    """Total symmetry of A(X, Y, Z) = g(X, Y * Z)."""
    _check_coords(C, g)
    return _symmetry_report("invariance", invariance_tensor(C, g), 3, Report("invariance"))


def nabla_A(C: Chart, g: MetricField, G: Christoffel | None = None):
    """2 det(g) * (nabla A)_ijkl with (nabla A)(X, Y, Z, W) = (nabla_X A)(Y, Z, W)."""
    G = G or christoffel(g)
    A = invariance_tensor(C, g)
    n = C.n
    D2 = G.delta * 2
    out = [[[[None] * n for _ in range(n)] for _ in range(n)] for _ in range(n)]
    for i, j, k, l in itertools.product(range(n), repeat=4):
        acc = D2 * A[j][k][l].diff(C.coords[i])
        for m in range(n):
            for num, a in ((G.num[m][i][j], A[m][k][l]), (G.num[m][i][k], A[j][m][l]), (G.num[m][i][l], A[j][k][m])):
                if not num.is_zero() and not a.is_zero():
                    acc = acc - num * a
        out[i][j][k][l] = acc
    return out


def nabla_mult(C: Chart, g: MetricField, G: Christoffel | None = None):
    """2 det(g) * (nabla *)^m_ikl with nabla*(X, Z, W) = nabla_X(Z*W) - W*nabla_X Z - Z*nabla_X W."""
    G = G or christoffel(g)
    a = C.structure
    n = C.n
    D2 = G.delta * 2
    out = [[[[None] * n for _ in range(n)] for _ in range(n)] for _ in range(n)]
    for m, i, k, l in itertools.product(range(n), repeat=4):
        acc = D2 * a[k][l][m].diff(C.coords[i])
        for p in range(n):
            terms = (
                (G.num[m][i][p], a[k][l][p], 1),
                (G.num[p][i][k], a[p][l][m], -1),
                (G.num[p][i][l], a[k][p][m], -1),
            )
            for num, s, sign in terms:
                if not num.is_zero() and not s.is_zero():
                    acc = acc + num * s if sign > 0 else acc - num * s
        out[m][i][k][l] = acc
    return out


def nabla_A_check(C: Chart, g: MetricField) -> Report:
    _check_coords(C, g)
    return _symmetry_report("nabla_A_symmetry", nabla_A(C, g), 4, Report("nabla_A"))


def nabla_mult_check(C: Chart, g: MetricField) -> Report:
    """Symmetry of nabla*(X, Z, W) in all three arguments (componentwise)."""
    _check_coords(C, g)
    N = nabla_mult(C, g)
    rep = Report("nabla_mult")
    for m in range(C.n):
        _symmetry_report("nabla_mult_symmetry", N[m], 3, rep)
    return rep


def nabla_identity_check(C: Chart, g: MetricField) -> Report:
    """nabla A(X, Y, Z, W) = g(Y, nabla*(X, Z, W)) as an exact identity."""
    _check_coords(C, g)
    G = christoffel(g)
    NA = nabla_A(C, g, G)
    NM = nabla_mult(C, g, G)
    n = C.n
    rep = Report("nabla_identity")
    for i, j, k, l in itertools.product(range(n), repeat=4):
        rep.checked += 1
        rhs = _zero(C.coords)
        for m in range(n):
            if not g.g[j][m].is_zero() and not NM[m][i][k][l].is_zero():
                rhs = rhs + g.g[j][m] * NM[m][i][k][l]
        d = NA[i][j][k][l] - rhs
        if not d.is_zero():
            rep.fail("nabla_identity", (i + 1, j + 1, k + 1, l + 1), d if rep.passed else None)
    return rep


def coidentity_check(C: Chart, g: MetricField) -> Report:
    """d(eps) = 0 for eps(X) = g(X, e)."""
    _check_coords(C, g)
    n = C.n
    eps = []
    for j in range(n):
        acc = _zero(C.coords)
        for i, e in enumerate(C.unit.components):
            if not e.is_zero():
                acc = acc + e * g.g[i][j]
        eps.append(acc)
    rep = Report("coidentity")
    rep.details["epsilon"] = [str(p) for p in eps]
    for i in range(n):
        for j in range(i + 1, n):
            rep.checked += 1
            d = eps[j].diff(C.coords[i]) - eps[i].diff(C.coords[j])
            if not d.is_zero():
                rep.fail("closed", (i + 1, j + 1), d if rep.passed else None)
    return rep


def curvature(g: MetricField, G: Christoffel | None = None):
    """4 det(g)^2 * R^l_ijk with R^l_ijk = d_i G^l_jk - d_j G^l_ik + G^l_im G^m_jk - G^l_jm G^m_ik."""
    G = G or christoffel(g)
    n = g.n
    D = G.delta
    dD = [D.diff(v) for v in g.coords]
    N = G.num
    out = [[[[None] * n for _ in range(n)] for _ in range(n)] for _ in range(n)]
    for l, i, j, k in itertools.product(range(n), repeat=4):
        if j < i:
            out[l][i][j][k] = -out[l][j][i][k]
            continue
        acc = (D * N[l][j][k].diff(g.coords[i]) - N[l][j][k] * dD[i]) * 2
        acc = acc - (D * N[l][i][k].diff(g.coords[j]) - N[l][i][k] * dD[j]) * 2
        for m in range(n):
            acc = acc + N[l][i][m] * N[m][j][k] - N[l][j][m] * N[m][i][k]
        out[l][i][j][k] = acc
    return out


def flatness_check(g: MetricField) -> Report:
    rep = Report("flatness")
    G = christoffel(g)
    if G.is_zero():
        rep.checked = 1
        rep.details["christoffel_zero"] = True
        return rep
    R = curvature(g, G)
    n = g.n
    for l, i, j, k in itertools.product(range(n), repeat=4):
        if i >= j:
            continue
        rep.checked += 1
        if not R[l][i][j][k].is_zero():
            rep.fail("riemann", (l + 1, i + 1, j + 1, k + 1), R[l][i][j][k] if rep.passed else None)
    return rep


def lie_derivative_metric(g: MetricField, X: PolyVectorField):
    """(Lie_X g)_ij = X(g_ij) + sum_k d_i X_k g_kj + sum_k d_j X_k g_ik."""
    n = g.n
    dX = [[X.components[k].diff(v) for v in g.coords] for k in range(n)]  # dX[k][i]
    out = [[None] * n for _ in range(n)]
    for i in range(n):
        for j in range(i, n):
            acc = X.apply(g.g[i][j])
            for k in range(n):
                if not dX[k][i].is_zero():
                    acc = acc + dX[k][i] * g.g[k][j]
                if not dX[k][j].is_zero():
                    acc = acc + dX[k][j] * g.g[i][k]
            out[i][j] = out[j][i] = acc
    return out


def lie_Eg_check(C: Chart, g: MetricField, E, D) -> Report:
    """Lie_E(g) - D g = 0 exactly."""
    field = E.field if isinstance(E, EulerCandidate) else E
    D = to_exact(D)
    L = lie_derivative_metric(g, field)
    rep = Report("lie_E_g")
    rep.details["D"] = str(D)
    for i in range(g.n):
        for j in range(i, g.n):
            rep.checked += 1
            d = L[i][j] - g.g[i][j] * D
            if not d.is_zero():
                rep.fail("lie_E_g", (i + 1, j + 1), d if rep.passed else None)
    return rep


def solve_lie_factor(g: MetricField, E):
    """The constant D with Lie_E(g) = D g, or None."""
    field = E.field if isinstance(E, EulerCandidate) else E
    L = lie_derivative_metric(g, field)
    D = None
    for i in range(g.n):
        for j in range(i, g.n):
            if g.g[i][j].is_zero():
                continue
            q, r = L[i][j].divmod(g.g[i][j])
            if not r.is_zero() or not q.is_constant():
                return None
            D = q.constant_value()
            break
        if D is not None:
            break
    if D is None:
        return None
    for i in range(g.n):
        for j in range(i, g.n):
            if L[i][j] != g.g[i][j] * D:
                return None
    return D


def covariant_derivative(g: MetricField, Z: PolyVectorField, G: Christoffel | None = None):
    """2 det(g) * (nabla_i Z)^k = 2 det(g) d_i Z^k + sum_j num^k_ij Z^j."""
    G = G or christoffel(g)
    n = g.n
    D2 = G.delta * 2
    out = [[None] * n for _ in range(n)]
    for i in range(n):
        for k in range(n):
            acc = D2 * Z.components[k].diff(g.coords[i])
            for j in range(n):
                if not G.num[k][i][j].is_zero() and not Z.components[j].is_zero():
                    acc = acc + G.num[k][i][j] * Z.components[j]
            out[i][k] = acc
    return out


def flat_field_check(g: MetricField, Z: PolyVectorField, points) -> dict:
    """Both sides of the flat-field criterion at sample points.

    Returns max |nabla Z|, max |Lie_Z g| and max |d eps_Z| over the points.
    """
    G = christoffel(g)
    cov = covariant_derivative(g, Z, G)
    lie = lie_derivative_metric(g, Z)
    n = g.n
    eps = [sum((Z.components[i] * g.g[i][j] for i in range(n)), ExactPoly.zero(g.coords)) for j in range(n)]
    deps = [[eps[j].diff(g.coords[i]) - eps[i].diff(g.coords[j]) for j in range(n)] for i in range(n)]
    out = {"nabla": 0.0, "lie": 0.0, "d_eps": 0.0}
    for p in points:
        d2 = 2 * g.det.eval(p)
        out["nabla"] = max(out["nabla"], max(abs(cov[i][k].eval(p) / d2) for i in range(n) for k in range(n)))
        out["lie"] = max(out["lie"], max(abs(lie[i][j].eval(p)) for i in range(n) for j in range(n)))
        out["d_eps"] = max(out["d_eps"], max(abs(deps[i][j].eval(p)) for i in range(n) for j in range(n)))
    return out


def frobenius_report(C: Chart, g: MetricField, E=None) -> dict:
    """Invariance, potentiality, coidentity, flatness, Lie_e g = 0 and Lie_E g = D g."""
    _check_coords(C, g)
    parts = {}
    parts["invariance"] = invariance_check(C, g)
    parts["nabla_A"] = nabla_A_check(C, g)
    parts["coidentity"] = coidentity_check(C, g)
    parts["flatness"] = flatness_check(g)
    parts["lie_e_g"] = lie_Eg_check(C, g, C.unit, 0)
    D = None
    if E is not None:
        D = solve_lie_factor(g, E)
        if D is None:
            rep = Report("lie_E_g", passed=False, checked=1)
            rep.fail("lie_E_g", [], "Lie_E(g) is not a constant multiple of g")
            parts["lie_E_g"] = rep
        else:
            parts["lie_E_g"] = lie_Eg_check(C, g, E, D)
    passed = all(r.passed for r in parts.values()) and E is not None
    out = {
        "frobenius": passed,
        "D": None if D is None else str(D),
        "checks": {k: r.to_dict() for k, r in parts.items()},
    }
    if E is None:
        out["note"] = "no Euler field supplied"
    return out
