"""Chart builders: section families, quotient rings, unfoldings and the catalog."""

from __future__ import annotations

import itertools
from math import comb
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

import numpy as np

from .algebra import FiniteAlgebra
from .chart import Chart, ChartError, EulerCandidate, PolyVectorField
from .poly import ExactPoly, GaussRat, PolyParseError, complex_roots, poly_det, resultant, to_exact

__all__ = [
    "BuildError",
    "CurveFamilyInput",
    "UnfoldingInput",
    "CatalogEntry",
    "coords_for",
    "from_sections",
    "curve_family",
    "curve_polynomial",
    "two_var_family",
    "two_var_reduce",
    "unfolding_numeric",
    "unfolding_preset",
    "coxeter_euler",
    "catalog",
    "catalog_list",
    "COXETER_DEGREES",
]


class BuildError(ValueError):
    pass


def coords_for(n: int, prefix: str = "t") -> tuple:
    return tuple(f"{prefix}{i}" for i in range(1, n + 1))


def _zero_tensor(coords):
    n = len(coords)
    z = ExactPoly.zero(coords)
    return [[[z] * n for _ in range(n)] for _ in range(n)]


# ---------------------------------------------------------------------------
# covector sections

def from_sections(sections: Sequence[Sequence], coords: Sequence[str], unit_index: int = 0, name: str = "") -> Chart:
    """Chart whose analytic spectrum is the union of the given sections.

    ``sections[s][i]`` is the value y_i of sheet s (an ExactPoly, string or
    number).  With Lam[s][k] = sections[s][k] the structure constants solve
    Lam a_ij = (y_si y_sj)_s; the solve uses the adjugate, and every entry
    must be divisible by det(Lam) exactly.
    """
    coords = tuple(coords)
    n = len(coords)
    if len(sections) != n or any(len(s) != n for s in sections):
        raise BuildError(f"need {n} sections with {n} components each")

    def coerce(v):
        if isinstance(v, ExactPoly):
            return v.with_variables(coords)
        if isinstance(v, str):
            return ExactPoly.parse(v, coords)
        return ExactPoly.constant(to_exact(v), coords)

    Lam = [[coerce(v) for v in row] for row in sections]
    for s, row in enumerate(Lam):
        if row[unit_index] != 1:
            raise BuildError(f"section {s + 1} does not have y_{unit_index + 1} = 1")
    det = poly_det(Lam, coords)
    if det.is_zero():
        raise BuildError("sections are not pointwise distinct: determinant vanishes identically")
    # adj[k][s] = cofactor(s, k)
    adj = [[None] * n for _ in range(n)]
    for s in range(n):
        for k in range(n):
            minor = [[Lam[r][c] for c in range(n) if c != k] for r in range(n) if r != s]
            cof = poly_det(minor, coords)
            adj[k][s] = -cof if (s + k) % 2 else cof
    S = _zero_tensor(coords)
    for i in range(n):
        for j in range(i, n):
            rhs = [Lam[s][i] * Lam[s][j] for s in range(n)]
            for k in range(n):
                num = ExactPoly.zero(coords)
                for s in range(n):
                    if not adj[k][s].is_zero() and not rhs[s].is_zero():
                        num = num + adj[k][s] * rhs[s]
                q, r = num.divmod(det)
                if not r.is_zero():
                    raise BuildError(
                        f"structure constants not polynomial: entry ({i + 1},{j + 1},{k + 1}) has remainder {r}"
                    )
                S[i][j][k] = q
                S[j][i][k] = q
    return Chart(coords, S, unit_index, name=name)


# ---------------------------------------------------------------------------
# one-variable quotient rings

@dataclass
class CurveFamilyInput:
    n: int
    f: ExactPoly  # in variables x, y

    def __post_init__(self):
        if isinstance(self.f, str):
            try:
                self.f = ExactPoly.parse(self.f, ("x", "y"))
            except PolyParseError as exc:
                raise BuildError(f"curve polynomial: {exc}") from None
        extra = set(self.f.used_variables()) - {"x", "y"}
        if extra:
            raise BuildError(f"curve polynomial may only use x and y, found {sorted(extra)}")
        if self.n < 1:
            raise BuildError("n must be positive")


def curve_polynomial(inp: CurveFamilyInput) -> ExactPoly:
    """P(x, t) = f(x, t2 + 2x t3 + ... + (n-1) x^(n-2) t_n), checked monic of degree n."""
    n = inp.n
    coords = coords_for(n)
    vars_ = ("x",) + coords
    x = ExactPoly.var("x", vars_)
    tt2 = ExactPoly.zero(vars_)
    for i in range(2, n + 1):
        tt2 = tt2 + ExactPoly.var(f"t{i}", vars_) * (x ** (i - 2)) * (i - 1)
    P = inp.f.with_variables(("x", "y")).substitute({"y": tt2}, vars_)
    deg = P.degree("x")
    if deg != n:
        raise BuildError(f"monicity violated: f(x, t2~) has degree {deg} in x, expected {n}")
    lc = P.coefficients_in("x")[n]
    if lc != 1:
        raise BuildError(f"monicity violated: leading coefficient in x is {lc}, not 1")
    return P


def curve_family(inp: CurveFamilyInput, name: str = "") -> Chart:
    """Multiplication on T_M induced from C{x, t}/(P) with d/dt_i -> x^(i-1)."""
    n = inp.n
    coords = coords_for(n)
    P = curve_polynomial(inp)
    parts = P.coefficients_in("x")
    zero = ExactPoly.zero(coords)
    p = [parts.get(k, ExactPoly.zero(P.variables)).with_variables(coords) for k in range(n)]
    # x^k mod P as coefficient vectors in 1, x, ..., x^(n-1)
    powers = []
    cur = [ExactPoly.constant(1, coords)] + [zero] * (n - 1)
    for _ in range(2 * n - 1):
        powers.append(cur)
        top = cur[-1]
        nxt = [zero] + cur[:-1]
        if not top.is_zero():
            nxt = [c - top * pk for c, pk in zip(nxt, p)]
        cur = nxt
    S = _zero_tensor(coords)
    for i, j, k in itertools.product(range(n), repeat=3):
        S[i][j][k] = powers[i + j][k]
    return Chart(coords, S, 0, name=name)


# ---------------------------------------------------------------------------
# two-variable quotient rings

_TWO_VAR = {"D4": (1, Fraction(6, 5)), "F4": (2, Fraction(8, 5)), "H4": (3, Fraction(9, 5))}


def two_var_reduce(element: dict, kind: str, coords=None):
    """Reduce sum c_ab(t) x^a y^b modulo x^2 + t2 + y t4, y^2 + (t3 + x t4)^r.

    ``element`` maps (a, b) to ExactPoly in t.  The highest weighted-degree
    reducible monomial is rewritten first.  Returns (normal form, steps).
    """
    r, w = _TWO_VAR[kind]
    coords = coords or coords_for(4)
    t2, t3, t4 = (ExactPoly.var(c, coords) for c in coords[1:])
    # (t3 + x t4)^r expanded in x
    y_sq = {}
    for k in range(r + 1):
        y_sq[k] = -(t3 ** (r - k)) * (t4 ** k) * comb(r, k)
    cur = {ab: c for ab, c in element.items() if not c.is_zero()}
    steps = 0
    while True:
        red = [ab for ab in cur if ab[0] >= 2 or ab[1] >= 2]
        if not red:
            break
        a, b = max(red, key=lambda ab: (ab[0] + w * ab[1], ab))
        c = cur.pop((a, b))
        steps += 1
        if a >= 2:
            repl = {(a - 2, b): -t2 * c, (a - 2, b + 1): -t4 * c}
        else:
            repl = {(a + k, b - 2): c * y_sq[k] for k in range(r + 1)}
        for ab, v in repl.items():
            s = cur.get(ab, ExactPoly.zero(coords)) + v
            if s.is_zero():
                cur.pop(ab, None)
            else:
                cur[ab] = s
    return cur, steps


def two_var_family(kind: str, return_steps: bool = False):
    """D4 (r=1), F4 (r=2), H4 (r=3) charts from the basis 1, x, y, xy."""
    if kind not in _TWO_VAR:
        raise BuildError(f"unknown two-variable family {kind!r}; expected one of {sorted(_TWO_VAR)}")
    coords = coords_for(4)
    basis = [(0, 0), (1, 0), (0, 1), (1, 1)]
    one = ExactPoly.constant(1, coords)
    S = _zero_tensor(coords)
    max_steps = 0
    for i in range(4):
        for j in range(i, 4):
            a = (basis[i][0] + basis[j][0], basis[i][1] + basis[j][1])
            nf, steps = two_var_reduce({a: one}, kind, coords)
            max_steps = max(max_steps, steps)
            for k, ab in enumerate(basis):
                v = nf.get(ab, ExactPoly.zero(coords))
                S[i][j][k] = v
                S[j][i][k] = v
    chart = Chart(coords, S, 0, name=kind)
    return (chart, max_steps) if return_steps else chart


# ---------------------------------------------------------------------------
# numeric unfoldings

@dataclass
class UnfoldingInput:
    """F(x[, y], t) with the parameter names; flavor 'hypersurface' or 'boundary'."""

    F: ExactPoly
    params: tuple
    flavor: str = "hypersurface"

    def __post_init__(self):
        if self.flavor not in ("hypersurface", "boundary"):
            raise BuildError(f"unknown unfolding flavor {self.flavor!r}")
        if isinstance(self.F, str):
            self.F = ExactPoly.parse(self.F)
        self.params = tuple(self.params)
        space = [v for v in self.F.variables if v not in self.params]
        if not set(space) <= {"x", "y"} or "x" not in space:
            raise BuildError(f"unfolding must be in x[, y] plus parameters, found {space}")

    @property
    def space(self) -> tuple:
        return tuple(v for v in ("x", "y") if v in self.F.used_variables() or v == "x")


def _critical_points(G1: ExactPoly, G2: ExactPoly | None, tol: float):
    """Common zeros of G1, G2 in (x, y) (or zeros of G1 in x alone)."""
    if G2 is None:
        roots = complex_roots(G1.with_variables(("x",)), tol)
        if any(m > 1 for _, m in roots):
            raise BuildError("non-generic parameter: multiple critical points")
        return [(z,) for z, _ in roots]
    vars2 = ("x", "y")
    G1, G2 = G1.with_variables(vars2), G2.with_variables(vars2)
    if G1.degree("y") < 1 and G2.degree("y") >= 1:
        G1, G2 = G2, G1
    if G2.degree("y") < 1:
        # one equation is free of y: its roots fix x, then solve the other for y
        if G1.degree("y") < 1:
            raise BuildError("critical ideal does not involve y")
        pts = []
        for x0, m in complex_roots(G2.with_variables(("x",)), tol):
            if m > 1:
                raise BuildError("non-generic parameter: multiple critical points")
            sub = G1.substitute({"x": _exact_approx(x0)}, ("y",))
            for y0, my in complex_roots(sub, tol):
                if my > 1:
                    raise BuildError("non-generic parameter: multiple critical points")
                pts.append(_newton2(G1, G2, complex(x0), complex(y0)))
        return pts
    R = resultant(G1, G2, "y")
    if R.is_zero():
        raise BuildError("non-generic parameter: resultant vanishes identically")
    xs = complex_roots(R.with_variables(("x",)), tol)
    if any(m > 1 for _, m in xs):
        raise BuildError("non-generic parameter: multiple critical points")
    pts = []
    for x0, _ in xs:
        cy = G2.coefficients_in("y")
        coeffs = [cy.get(k, ExactPoly.zero(vars2)).eval([x0, 0]) for k in range(G2.degree("y") + 1)]
        cands = np.roots(np.array(coeffs[::-1], dtype=complex))
        best = min(cands, key=lambda y0: abs(G1.eval([x0, y0])))
        pts.append(_newton2(G1, G2, complex(x0), complex(best)))
    return pts


def _exact_approx(z: complex):
    return to_exact(complex(z)) if complex(z).imag else to_exact(complex(z).real)


def _newton2(G1, G2, x, y, steps: int = 20):
    d = [[G1.diff("x"), G1.diff("y")], [G2.diff("x"), G2.diff("y")]]
    for _ in range(steps):
        f = np.array([G1.eval([x, y]), G2.eval([x, y])])
        if np.max(np.abs(f)) < 1e-15:
            break
        J = np.array([[d[i][j].eval([x, y]) for j in range(2)] for i in range(2)])
        try:
            dx = np.linalg.solve(J, f)
        except np.linalg.LinAlgError:
            break
        x, y = x - dx[0], y - dx[1]
    return (x, y)


def unfolding_numeric(inp: UnfoldingInput, t: Sequence, tol: float = 1e-8, return_points: bool = False):
    """Semisimple fiber algebra of the unfolding at parameter t.

    Critical points of F (or of x F_x, F_y for the boundary flavor) come from
    resultant elimination of y and polishing; the characters are dF/dt_i at
    each point and the structure constants solve Lam a_ij = (lam_si lam_sj)_s.
    """
    params = inp.params
    n = len(params)
    t = [to_exact(v) for v in t]
    if len(t) != n:
        raise BuildError(f"parameter point has {len(t)} entries, expected {n}")
    space = inp.space
    F = inp.F.with_variables(space + params)
    Ft = F.substitute(dict(zip(params, t)), space)
    Fx = Ft.diff("x")
    G1 = ExactPoly.var("x", space) * Fx if inp.flavor == "boundary" else Fx
    G2 = Ft.diff("y") if "y" in space else None
    pts = _critical_points(G1, G2, tol)
    if len(pts) != n:
        raise BuildError(f"non-generic parameter: found {len(pts)} critical points, expected {n}")
    for a in range(n):
        for b in range(a + 1, n):
            if max(abs(u - v) for u, v in zip(pts[a], pts[b])) <= tol:
                raise BuildError("non-generic parameter: multiple critical points within tol")
    tc = [complex(v) if isinstance(v, GaussRat) else complex(float(v)) for v in t]
    dF = [F.diff(p) for p in params]
    chars = [[g.eval(list(pt) + tc) for g in dF] for pt in pts]
    Lam = np.array(chars, dtype=complex)
    if np.linalg.cond(Lam) > 1e12:
        raise BuildError("non-generic parameter: characters not independent")
    c = np.zeros((n, n, n), dtype=complex)
    for i in range(n):
        for j in range(n):
            c[i, j] = np.linalg.solve(Lam, Lam[:, i] * Lam[:, j])
    unit = np.linalg.solve(Lam, np.ones(n))
    A = FiniteAlgebra(c, unit, tol=1e-6)
    return (A, pts) if return_points else A


def unfolding_preset(name: str, n: int | None = None) -> UnfoldingInput:
    """Unfoldings used for cross-checks.

    A<n>: -x^(n+1)/(n+1) + sum t_i x^(i-1); B<n> (boundary): -x^n/n + y^2 + sum t_i x^(i-1);
    D4: x^3/3 + y^3/3 + t1 + x t2 + y t3 + x y t4 (same critical set as the D4 quotient ring);
    D<n>, E6, E7, E8: the displayed semiuniversal unfoldings; boundary<n>: x^n + y^2 (boundary flavor).
    """
    def build(text, m, flavor="hypersurface"):
        params = coords_for(m)
        return UnfoldingInput(ExactPoly.parse(text, ("x", "y") + params), params, flavor)

    def lin(m):
        return " + ".join(["t1"] + [f"x^{i - 1} * t{i}" if i > 2 else "x * t2" for i in range(2, m + 1)])

    if name == "A":
        return build(f"-1/{n + 1} * x^{n + 1} + {lin(n)}", n)
    if name == "B":
        return build(f"-1/{n} * x^{n} + y^2 + {lin(n)}", n, "boundary")
    if name == "D4":
        return build("1/3 * x^3 + 1/3 * y^3 + t1 + x * t2 + y * t3 + x * y * t4", 4)
    if name == "D":
        if n is None or n < 4:
            raise BuildError("D_n needs n >= 4")
        h = n // 2
        terms = [f"x^{n - 1}", "x * y^2"]
        terms += [f"x^{i - 1} * t{i}" for i in range(1, h + 1)]
        terms += [f"y * t{h + 1}"]
        terms += [f"x^{i - 2} * t{i}" for i in range(h + 2, n + 1)]
        return build(" + ".join(terms), n)
    if name == "E6":
        return build("x^4 + y^3 + t1 + x * t2 + y * t3 + x^2 * t4 + x * y * t5 + x^2 * y * t6", 6)
    if name == "E7":
        return build("x^3 * y + y^3 + t1 + x * t2 + y * t3 + x^2 * t4 + x * y * t5 + x^3 * t6 + x^4 * t7", 7)
    if name == "E8":
        return build("x^5 + y^3 + t1 + x * t2 + y * t3 + x^2 * t4 + x * y * t5 + x^3 * t6 + x^2 * y * t7 + x^3 * y * t8", 8)
    if name == "boundary":
        # x^n + y^2 with boundary x = 0 has mu = (n - 1) + 1
        return build(f"x^{n} + y^2 + {lin(n)}", n, "boundary")
    raise BuildError(f"unknown unfolding preset {name!r}")


# ---------------------------------------------------------------------------
# catalog

COXETER_DEGREES = {
    "D4": (6, 4, 4, 2),
    "F4": (12, 8, 6, 2),
    "H4": (30, 20, 12, 2),
    "H3": (10, 6, 2),
}


def coxeter_euler(coords, degrees: Sequence[int]) -> PolyVectorField:
    h = degrees[0]
    return PolyVectorField(coords, [ExactPoly.var(c, coords) * Fraction(d, h) for c, d in zip(coords, degrees)])


@dataclass
class CatalogEntry:
    chart: Chart
    euler: EulerCandidate | None = None
    params: dict = field(default_factory=dict)


def _int_param(params, key, default=None, minimum=None):
    v = params.get(key, default)
    if v is None:
        raise BuildError(f"missing parameter {key!r}")
    try:
        iv = int(v)
    except (TypeError, ValueError):
        raise BuildError(f"parameter {key!r} must be an integer, got {v!r}") from None
    if str(iv) != str(v).strip() and not isinstance(v, int):
        raise BuildError(f"parameter {key!r} must be an integer, got {v!r}")
    if minimum is not None and iv < minimum:
        raise BuildError(f"parameter {key!r} must be >= {minimum}, got {iv}")
    return iv


def _cat_A1n(params):
    n = _int_param(params, "n", 2, 1)
    coords = coords_for(n, "u")
    S = _zero_tensor(coords)
    for i in range(n):
        S[i][i][i] = ExactPoly.constant(1, coords)
    C = Chart(coords, S, PolyVectorField(coords, [1] * n), name=f"A1^{n}")
    E = PolyVectorField(coords, [ExactPoly.var(c, coords) for c in coords])
    return CatalogEntry(C, EulerCandidate(E, 1), {"n": n})


def _cat_I2(params):
    m = _int_param(params, "m", 3, 2)
    coords = coords_for(2)
    S = _zero_tensor(coords)
    one = ExactPoly.constant(1, coords)
    S[0][0][0] = S[0][1][1] = S[1][0][1] = one
    S[1][1][0] = ExactPoly.var("t2", coords) ** (m - 2)
    C = Chart(coords, S, 0, name=f"I2({m})")
    return CatalogEntry(C, EulerCandidate(coxeter_euler(coords, (m, 2)), 1), {"m": m})


def _cat_nilpotent2d(params):
    coords = coords_for(2)
    S = _zero_tensor(coords)
    one = ExactPoly.constant(1, coords)
    S[0][0][0] = S[0][1][1] = S[1][0][1] = one
    C = Chart(coords, S, 0, name="nilpotent2d")
    E = PolyVectorField(coords, [ExactPoly.var("t1", coords), 0])
    return CatalogEntry(C, EulerCandidate(E, 1), {})


def _curve_entry(name, n, f, degrees):
    C = curve_family(CurveFamilyInput(n, ExactPoly.parse(f, ("x", "y"))), name=name)
    return CatalogEntry(C, EulerCandidate(coxeter_euler(C.coords, degrees), 1), {"n": n})


def _cat_An(params):
    n = _int_param(params, "n", 3, 1)
    if n == 1:
        entry = _cat_A1n({"n": 1})
        entry.chart.name = "A1"
        return entry
    return _curve_entry(f"A{n}", n, f"x^{n} - y", tuple(range(n + 1, 1, -1)))


def _cat_Bn(params):
    n = _int_param(params, "n", 3, 2)
    return _curve_entry(f"B{n}", n, f"x^{n} - x * y", tuple(range(2 * n, 0, -2)))


def _cat_H3(params):
    return _curve_entry("H3", 3, "x^3 - y^2", COXETER_DEGREES["H3"])


def _two_var_entry(kind):
    def build(params):
        C = two_var_family(kind)
        return CatalogEntry(C, EulerCandidate(coxeter_euler(C.coords, COXETER_DEGREES[kind]), 1), {})

    return build


def _cat_curve(params):
    n = _int_param(params, "n", None, 1)
    f = params.get("f")
    if not f:
        raise BuildError("missing parameter 'f'")
    C = curve_family(CurveFamilyInput(n, ExactPoly.parse(str(f), ("x", "y"))), name=f"curve({f})")
    E = _weighted_homogeneous_euler(ExactPoly.parse(str(f), ("x", "y")), n, C.coords)
    return CatalogEntry(C, EulerCandidate(E, 1) if E is not None else None, {"n": n, "f": str(f)})


def _weighted_homogeneous_euler(f: ExactPoly, n: int, coords):
    """Euler field for a weighted homogeneous curve polynomial, else None.

    With weights w(x) = 1, w(y) = v making f homogeneous of degree D, t_i has
    weight v - (i - 2) for i >= 2 and t_1 weight v + 1; normalizing t_1 to 1.
    """
    f = f.with_variables(("x", "y"))
    terms = list(f.terms)
    # solve a1 + v*b1 = a2 + v*b2 for every pair of exponents
    v = None
    for (a1, b1), (a2, b2) in itertools.combinations(terms, 2):
        if b1 == b2:
            if a1 != a2:
                return None
            continue
        cand = Fraction(a2 - a1, b1 - b2)
        if v is None:
            v = cand
        elif v != cand:
            return None
    if v is None or v <= 0:
        return None
    w1 = v + 1
    weights = [Fraction(1)] + [(v - (i - 2)) / w1 for i in range(2, n + 1)]
    return PolyVectorField(coords, [ExactPoly.var(c, coords) * w for c, w in zip(coords, weights)])


def _cat_threeSheet(params):
    p2 = _int_param(params, "p2", 2, 2)
    p3 = _int_param(params, "p3", 2, 2)
    if p2 < p3:
        raise BuildError(f"need p2 >= p3, got p2={p2}, p3={p3}")
    g = params.get("g")
    if g is None:
        g = [2] + [0] * (p3 - 2)
    if isinstance(g, str):
        g = [s for s in g.replace(";", ",").split(",") if s.strip()]
    g = [Fraction(str(v).strip()) if not isinstance(v, (int, Fraction)) else Fraction(v) for v in g]
    if len(g) != p3 - 1:
        raise BuildError(f"g needs p3 - 1 = {p3 - 1} entries, got {len(g)}")
    if g[0] == 0:
        raise BuildError("g0 must be nonzero")
    if p2 == p3 and g[0] == 1:
        raise BuildError("g0 must differ from 1 when p2 = p3")
    coords = coords_for(3)
    t2, t3 = ExactPoly.var("t2", coords), ExactPoly.var("t3", coords)
    gp = sum((t2 ** i * gi for i, gi in enumerate(g)), ExactPoly.zero(coords)) + t2 ** (p3 - 2) * t3
    fs = [ExactPoly.zero(coords), t2 ** p2, t2 ** p3 * gp]
    sections = [[1, f.diff("t2"), f.diff("t3")] for f in fs]
    C = from_sections(sections, coords, 0, name=f"threeSheet({p2},{p3})")
    # the Euler field is holomorphic only if t2^(p3-2) divides the numerator
    q, r = (gp * (p2 - p3) - t2 * gp.diff("t2")).divmod(t2 ** (p3 - 2))
    euler = None
    if r.is_zero():
        E = PolyVectorField(coords, [ExactPoly.var("t1", coords), t2 / p2, q / p2])
        euler = EulerCandidate(E, 1)
    return CatalogEntry(C, euler, {"p2": p2, "p3": p3, "g": [str(v) for v in g]})


def _cat_q2simple(params):
    p2 = _int_param(params, "p2", 2, 2)
    p3 = _int_param(params, "p3", 2, 2)
    coords = coords_for(3)
    t2, t3 = ExactPoly.var("t2", coords), ExactPoly.var("t3", coords)
    sections = [[1, 0, 0], [1, t2 ** (p2 - 1) * p2, 0], [1, 0, t3 ** (p3 - 1) * p3]]
    C = from_sections(sections, coords, 0, name=f"q2simple({p2},{p3})")
    E = PolyVectorField(coords, [ExactPoly.var("t1", coords), t2 / p2, t3 / p3])
    return CatalogEntry(C, EulerCandidate(E, 1), {"p2": p2, "p3": p3})


_CATALOG = {
    "A1n": (_cat_A1n, {"n": "int >= 1 (default 2)"}),
    "I2": (_cat_I2, {"m": "int >= 2 (default 3)"}),
    "nilpotent2d": (_cat_nilpotent2d, {}),
    "An": (_cat_An, {"n": "int >= 1 (default 3)"}),
    "Bn": (_cat_Bn, {"n": "int >= 2 (default 3)"}),
    "H3": (_cat_H3, {}),
    "D4": (_two_var_entry("D4"), {}),
    "F4": (_two_var_entry("F4"), {}),
    "H4": (_two_var_entry("H4"), {}),
    "curve": (_cat_curve, {"f": "polynomial in x, y with f(x, t2~) monic of degree n", "n": "int >= 1"}),
    "threeSheet": (_cat_threeSheet, {"p2": "int >= p3", "p3": "int >= 2", "g": "p3-1 rationals g0,...; g0 != 0, g0 != 1 if p2 = p3"}),
    "q2simple": (_cat_q2simple, {"p2": "int >= 2", "p3": "int >= 2"}),
}


def catalog_list() -> list[dict]:
    return [{"name": k, "params": v[1]} for k, v in _CATALOG.items()]


def catalog(name: str, **params) -> CatalogEntry:
    if name not in _CATALOG:
        raise BuildError(f"unknown catalog entry {name!r}; known: {', '.join(_CATALOG)}")
    builder, schema = _CATALOG[name]
    unknown = set(params) - set(schema)
    if unknown:
        raise BuildError(f"unknown parameter(s) for {name}: {sorted(unknown)}")
    return builder(params)
