import itertools
import math
from fractions import Fraction

import numpy as np
import pytest
import sympy as sp

from fmanifolds.algebra import decompose
from fmanifolds.chart import (
    EulerCandidate,
    PolyVectorField,
    euler_check,
    fiber_algebra,
    integrability_check,
    solve_euler_weights,
    validate,
)
from fmanifolds.construct import (
    COXETER_DEGREES,
    BuildError,
    CurveFamilyInput,
    UnfoldingInput,
    catalog,
    catalog_list,
    coords_for,
    coxeter_euler,
    curve_family,
    from_sections,
    two_var_family,
    two_var_reduce,
    unfolding_numeric,
    unfolding_preset,
)
from fmanifolds.poly import ExactPoly
from oracles import to_sym


def full_battery(C, E=None):
    assert validate(C).passed
    assert integrability_check(C).passed
    if E is not None:
        assert euler_check(C, E, 1).passed


def weights_of(E):
    n = E.n
    out = []
    for i, comp in enumerate(E.components):
        exp = [1 if j == i else 0 for j in range(n)]
        assert comp == ExactPoly.var(E.coords[i], E.coords) * comp.coefficient(exp)
        out.append(comp.coefficient(exp))
    return out


# --- sections -------------------------------------------------------------------

def test_q2simple_sections():
    entry = catalog("q2simple", p2=3, p3=2)
    C = entry.chart
    full_battery(C, entry.euler.field)
    assert entry.euler.field == C.field(["t1", "1/3 * t2", "1/2 * t3"])


def test_constant_sections_give_semisimple_chart():
    co = coords_for(3)
    C = from_sections([[1, 0, 0], [1, 1, 0], [1, 0, 1]], co)
    full_battery(C)
    assert all(p.is_constant() for a in C.structure for b in a for p in b)
    dec = decompose(fiber_algebra(C, [0.2, 0.1, -0.3]))
    assert dec.partition == (1, 1, 1)


def test_sections_with_non_polynomial_constants():
    co = coords_for(3)
    with pytest.raises(BuildError, match="not polynomial"):
        from_sections([[1, 0, 0], [1, 1, 0], [1, "t3", "t2"]], co)


def test_sections_need_unit_component():
    with pytest.raises(BuildError):
        from_sections([[1, 0], [2, 1]], coords_for(2))


def test_identical_sections_rejected():
    with pytest.raises(BuildError):
        from_sections([[1, "t2"], [1, "t2"]], coords_for(2))


@pytest.mark.parametrize("p2,p3,g", [(2, 2, [3]), (2, 2, [Fraction(-1, 2)]), (3, 2, [2]), (3, 3, [2, 5]), (4, 4, [3, 0, 1])])
def test_three_sheet_normal_forms(p2, p3, g):
    entry = catalog("threeSheet", p2=p2, p3=p3, g=g)
    full_battery(entry.chart, entry.euler.field)


@pytest.mark.parametrize("p2,p3,g", [(4, 3, [1, 0]), (4, 4, [3, 1, 0])])
def test_three_sheet_without_holomorphic_euler(p2, p3, g):
    # p3 > 2 with p2 > p3, or a nonzero middle g_i: E has a pole along t2 = 0
    entry = catalog("threeSheet", p2=p2, p3=p3, g=g)
    full_battery(entry.chart)
    assert entry.euler is None


def test_three_sheet_euler_is_not_diagonal():
    entry = catalog("threeSheet", p2=3, p3=2)
    E3 = entry.euler.field.components[2]
    assert E3.degree("t3") == 1 and not E3.is_zero()
    # the diagonal ansatz cannot find it
    assert solve_euler_weights(entry.chart) is None


# --- curve families ----------------------------------------------------------------

@pytest.mark.parametrize("m", [2, 3, 4, 7])
def test_curve_family_reproduces_i2(m):
    C = curve_family(CurveFamilyInput(2, f"x^2 - y^{m - 2}" if m > 2 else "x^2 - 1"))
    assert C == catalog("I2", m=m).chart


def test_curve_family_a3():
    C = curve_family(CurveFamilyInput(3, "x^3 - y"))
    full_battery(C)
    co = C.coords
    assert C.structure[2][2][1] == ExactPoly.parse("t2", co)
    assert C.structure[2][2][2] == ExactPoly.parse("2 * t3", co)
    E = solve_euler_weights(C)
    assert weights_of(E.field) == [1, Fraction(3, 4), Fraction(1, 2)]
    assert E.field == coxeter_euler(co, (4, 3, 2))


def test_curve_family_b3():
    entry = catalog("Bn", n=3)
    full_battery(entry.chart, entry.euler.field)


def test_curve_family_monicity_enforced():
    with pytest.raises(BuildError, match="monic"):
        curve_family(CurveFamilyInput(3, "x^3 - y^2 - y^3"))
    with pytest.raises(BuildError):
        CurveFamilyInput(2, "x^2 - z")


def test_curve_powers_match_sympy_remainder():
    C = catalog("An", n=4).chart
    x = sp.Symbol("x")
    t = sp.symbols("t1:5")
    tt2 = t[1] + 2 * x * t[2] + 3 * x ** 2 * t[3]
    P = sp.expand(x ** 4 - tt2)
    for i, j in itertools.product(range(4), repeat=2):
        rem = sp.Poly(sp.rem(x ** (i + j), P, x), x)
        for k in range(4):
            assert sp.expand(to_sym(C.structure[i][j][k]) - rem.coeff_monomial(x ** k)) == 0


# --- two-variable families ----------------------------------------------------------

@pytest.mark.parametrize("kind", ["D4", "F4", "H4"])
def test_two_var_battery(kind):
    C = two_var_family(kind)
    full_battery(C, coxeter_euler(C.coords, COXETER_DEGREES[kind]))


@pytest.mark.parametrize("kind,expected", [
    ("D4", [1, Fraction(2, 3), Fraction(2, 3), Fraction(1, 3)]),
    ("F4", [1, Fraction(2, 3), Fraction(1, 2), Fraction(1, 6)]),
    ("H4", [1, Fraction(2, 3), Fraction(2, 5), Fraction(1, 15)]),
])
def test_two_var_weights_rederived(kind, expected):
    E = solve_euler_weights(two_var_family(kind))
    w = weights_of(E.field)
    assert w == expected
    h = Fraction(1) / min(w)  # the smallest degree is 2, so h = 2 / min(d_i / h) ... up to the factor 2
    degrees = [wi * 2 / min(w) for wi in w]
    assert all(d.denominator == 1 for d in degrees)
    assert tuple(int(d) for d in degrees) == COXETER_DEGREES[kind]
    assert h * 2 == COXETER_DEGREES[kind][0]


@pytest.mark.parametrize("kind,r", [("D4", 1), ("F4", 2), ("H4", 3)])
def test_two_var_normal_forms_lie_in_ideal(kind, r):
    """basis_i * basis_j - sum_k a_ijk basis_k is in the ideal, at random rational t."""
    C = two_var_family(kind)
    x, y = sp.symbols("x y")
    rng = np.random.default_rng(r)
    basis = [sp.Integer(1), x, y, x * y]
    for _ in range(2):
        tv = [sp.Rational(int(a), int(b)) for a, b in zip(rng.integers(-9, 10, 4), rng.integers(1, 7, 4))]
        G = sp.groebner([x ** 2 + tv[1] + y * tv[3], y ** 2 + (tv[2] + x * tv[3]) ** r], x, y, order="grevlex")
        subs = dict(zip(sp.symbols("t1:5"), tv))
        for i, j in itertools.product(range(4), repeat=2):
            expr = basis[i] * basis[j] - sum(to_sym(C.structure[i][j][k]).subs(subs) * basis[k] for k in range(4))
            assert G.reduce(sp.expand(expr))[1] == 0


@pytest.mark.parametrize("kind,r,w", [("D4", 1, Fraction(6, 5)), ("F4", 2, Fraction(8, 5)), ("H4", 3, Fraction(9, 5))])
def test_two_var_rewriting_step_bound(kind, r, w):
    # the weight of y lies in (r/2, 2), so every rewrite lowers the weighted
    # degree by at least min(2 - w, 2w - r) > 0 and, since the highest
    # monomial goes first, no monomial is rewritten twice: the step count is
    # at most the number of reducible monomials of weighted degree <= 2 + 2w
    assert Fraction(r, 2) < w < 2
    delta = min(2 - w, 2 * w - r)
    assert delta > 0
    top = 2 + 2 * w
    bound = sum(1 for a in range(8) for b in range(8) if (a >= 2 or b >= 2) and a + w * b <= top)
    _, steps = two_var_family(kind, return_steps=True)
    assert 0 < steps <= bound
    co = coords_for(4)
    nf, s = two_var_reduce({(2, 2): ExactPoly.constant(1, co)}, kind, co)
    assert s <= bound and all(a < 2 and b < 2 for a, b in nf)


# --- unfoldings -----------------------------------------------------------------------

def rational_point(rng, n):
    # small parameters: the unfoldings are germs at the origin
    return [Fraction(int(a), int(b)) for a, b in zip(rng.integers(-9, 10, n), rng.integers(10, 40, n))]


@pytest.mark.parametrize("preset,n,count", [("E6", None, 6), ("E7", None, 7), ("E8", None, 8), ("D", 5, 5), ("D", 6, 6)])
def test_unfolding_critical_counts(preset, n, count):
    inp = unfolding_preset(preset, n)
    rng = np.random.default_rng(7)
    A, pts = unfolding_numeric(inp, rational_point(rng, count), return_points=True)
    assert len(pts) == count
    dec = decompose(A, tol=1e-6)
    assert dec.semisimple
    np.testing.assert_allclose(sum(f.idempotent for f in dec.factors), A.unit, atol=1e-6)


@pytest.mark.parametrize("n", [2, 3, 4])
def test_boundary_unfolding_milnor_count(n):
    # x^n + y^2 with boundary {x = 0}: mu(f) + mu(f restricted) = (n - 1) + 1
    inp = unfolding_preset("boundary", n)
    rng = np.random.default_rng(n)
    _, pts = unfolding_numeric(inp, rational_point(rng, n), return_points=True)
    assert len(pts) == (n - 1) + 1


def test_boundary_smooth_function():
    inp = UnfoldingInput(ExactPoly.parse("x + y^2 + t1", ("x", "y", "t1")), ("t1",), "boundary")
    A, pts = unfolding_numeric(inp, [Fraction(1, 3)], return_points=True)
    assert len(pts) == 1 and A.dim == 1


def test_unfolding_non_generic_parameter():
    with pytest.raises(BuildError, match="non-generic"):
        unfolding_numeric(unfolding_preset("A", 3), [0, 0, 0])


def test_unfolding_bad_inputs():
    with pytest.raises(BuildError):
        UnfoldingInput(ExactPoly.parse("x + z * t1", ("x", "z", "t1")), ("t1",))
    with pytest.raises(BuildError):
        UnfoldingInput(ExactPoly.parse("x^2 + t1", ("x", "t1")), ("t1",), flavor="odd")


# --- catalog ----------------------------------------------------------------------

def test_catalog_list_has_schemas():
    names = {e["name"] for e in catalog_list()}
    assert {"A1n", "I2", "nilpotent2d", "An", "Bn", "H3", "D4", "F4", "H4", "curve", "threeSheet", "q2simple"} <= names
    assert all(isinstance(e["params"], dict) for e in catalog_list())


def test_catalog_g2():
    C = catalog("I2", m=6).chart
    assert C.structure[1][1][0] == ExactPoly.parse("t2^4", C.coords)


def test_catalog_a1n():
    entry = catalog("A1n", n=4)
    C = entry.chart
    assert C.unit == C.field([1, 1, 1, 1])
    assert entry.euler.field == C.field(list(C.coords))
    full_battery(C, entry.euler.field)


@pytest.mark.parametrize("name,params", [
    ("nope", {}),
    ("I2", {"m": 1}),
    ("I2", {"m": "x"}),
    ("threeSheet", {"p2": 2, "p3": 3}),
    ("threeSheet", {"p2": 2, "p3": 2, "g": [0]}),
    ("threeSheet", {"p2": 2, "p3": 2, "g": [1]}),
    ("threeSheet", {"p2": 3, "p3": 3, "g": [2]}),
    ("Bn", {"n": 1}),
    ("I2", {"k": 3}),
])
def test_catalog_errors(name, params):
    with pytest.raises(BuildError):
        catalog(name, **params)


def test_three_sheet_g0_one_allowed_when_p2_exceeds_p3():
    catalog("threeSheet", p2=3, p3=2, g=[1])


def test_weighted_homogeneous_curve_gets_euler():
    entry = catalog("curve", f="x^2 - y^3", n=2)
    assert entry.euler is not None
    assert euler_check(entry.chart, entry.euler.field, 1).passed
