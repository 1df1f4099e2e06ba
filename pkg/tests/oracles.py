"""Independent reference implementations used by the tests.

Everything here goes through sympy or plain numpy, never through the
package's own elimination or decomposition code.
"""

from fractions import Fraction
import itertools

import numpy as np
import sympy as sp

from fmanifolds.poly import GaussRat


def sym_coeff(c):
    if isinstance(c, GaussRat):
        return sp.Rational(c.re.numerator, c.re.denominator) + sp.I * sp.Rational(c.im.numerator, c.im.denominator)
    c = Fraction(c)
    return sp.Rational(c.numerator, c.denominator)


def to_sym(p):
    """sympy expression of an ExactPoly built straight from its term map."""
    syms = sp.symbols(p.variables) if p.variables else ()
    if len(p.variables) == 1:
        syms = (syms,) if not isinstance(syms, tuple) else syms
    expr = sp.Integer(0)
    for exp, c in p.terms.items():
        mono = sp.Integer(1)
        for s, e in zip(syms, exp):
            mono *= s ** e
        expr += sym_coeff(c) * mono
    return sp.expand(expr)


def sym_equal(p, expr) -> bool:
    return sp.expand(to_sym(p) - expr) == 0


def random_poly_text(rng, variables, terms=4, max_deg=3):
    out = []
    for _ in range(terms):
        c = Fraction(int(rng.integers(-9, 10)), int(rng.integers(1, 5)))
        if c == 0:
            continue
        mono = [f"{v}^{int(rng.integers(0, max_deg + 1))}" for v in variables if rng.random() < 0.6]
        sign = "-" if c < 0 else "+"
        out.append(f"{sign} " + " * ".join([str(abs(c))] + mono))
    return " ".join(out).lstrip("+ ") or "0"


def invariant_form_exists(c: np.ndarray) -> bool:
    """Brute force: is there a symmetric nondegenerate g with g(ab, c) = g(a, bc)?

    Solves the linear conditions on g exactly over Q and tests random
    members of the solution space for nondegeneracy (nondegeneracy is
    Zariski open, so random members are nondegenerate iff any member is).
    """
    n = c.shape[0]
    C = sp.Matrix(n ** 3, 1, [sp.nsimplify(round(float(v.real), 12), rational=True) for v in c.reshape(-1)])
    cc = lambda i, j, k: C[(i * n + j) * n + k]  # noqa: E731
    pairs = [(i, j) for i in range(n) for j in range(i, n)]
    idx = {p: k for k, p in enumerate(pairs)}
    gi = lambda i, j: idx[(min(i, j), max(i, j))]  # noqa: E731
    rows = []
    for a, b, d in itertools.product(range(n), repeat=3):
        row = [0] * len(pairs)
        for k in range(n):
            row[gi(k, d)] += cc(a, b, k)
            row[gi(a, k)] -= cc(b, d, k)
        rows.append(row)
    M = sp.Matrix(rows)
    basis = M.nullspace()
    if not basis:
        return False
    rng = np.random.default_rng(1)
    for _ in range(4):
        vec = sum((int(rng.integers(1, 10 ** 6)) * b for b in basis), sp.zeros(len(pairs), 1))
        G = sp.zeros(n, n)
        for (i, j), k in idx.items():
            G[i, j] = G[j, i] = vec[k]
        if G.det() != 0:
            return True
    return False


def local_pool():
    """Small local algebras (structure tensor, Frobenius?) in monomial bases."""
    def quotient(monos, mult):
        n = len(monos)
        c = np.zeros((n, n, n))
        for i, a in enumerate(monos):
            for j, b in enumerate(monos):
                prod = mult(a, b)
                if prod in monos:
                    c[i, j, monos.index(prod)] = 1
        return c

    add = lambda a, b: tuple(x + y for x, y in zip(a, b))  # noqa: E731
    pool = [(np.ones((1, 1, 1)), True)]
    for k in (2, 3, 4):
        monos = [(e,) for e in range(k)]
        pool.append((quotient(monos, add), True))
    # C[x,y]/(x^2, y^2): socle xy
    pool.append((quotient([(0, 0), (1, 0), (0, 1), (1, 1)], add), True))
    # C[x,y]/(x^2, xy, y^2): socle (x, y)
    pool.append((quotient([(0, 0), (1, 0), (0, 1)], add), False))
    # C[x,y]/(x^2, xy, y^3): socle (x, y^2)
    pool.append((quotient([(0, 0), (1, 0), (0, 1), (0, 2)], add), False))
    # C[x,y,z]/(all degree 2): socle of dim 3
    pool.append((quotient([(0, 0, 0), (1, 0, 0), (0, 1, 0), (0, 0, 1)], add), False))
    return pool


def direct_sum(*cs):
    n = sum(c.shape[0] for c in cs)
    out = np.zeros((n, n, n))
    o = 0
    for c in cs:
        m = c.shape[0]
        out[o:o + m, o:o + m, o:o + m] = c
        o += m
    return out


def change_basis(c: np.ndarray, P: np.ndarray) -> np.ndarray:
    """Structure constants in the basis given by the columns of P."""
    Pinv = np.linalg.inv(P)
    return np.einsum("ai,bj,abc,kc->ijk", P, P, c, Pinv)


def _random_unimodular(n, rng):
    P = np.eye(n, dtype=np.int64)
    for _ in range(3 * n if n > 1 else 0):
        i, j = rng.choice(n, size=2, replace=False)
        P[:, i] += int(rng.integers(-2, 3)) * P[:, j]
    return P.astype(float)


def random_algebra(rng, max_dim=4):
    pool = local_pool()
    parts, dim = [], 0
    while True:
        c, _ = pool[int(rng.integers(len(pool)))]
        if dim + c.shape[0] > max_dim:
            if parts:
                break
            continue
        parts.append(c)
        dim += c.shape[0]
        if rng.random() < 0.4:
            break
    c = direct_sum(*parts)
    # integer constants and a unimodular change of basis: the result is integral,
    # rounding removes the float noise of the inverse so the exact oracle sees it
    return np.round(change_basis(c, _random_unimodular(dim, rng)))


def coxeter_degrees(M) -> tuple[int, int]:
    """(degrees, Coxeter number) of the group with Coxeter matrix M.

    Built from the geometric representation: the Coxeter element c = s_1...s_n
    has eigenvalues exp(2 pi i m_j / h) with exponents m_j = d_j - 1 and
    smallest exponent 1.
    """
    M = np.asarray(M, dtype=float)
    n = M.shape[0]
    B = -np.cos(np.pi / M)
    c = np.eye(n)
    for i in range(n):
        s = np.eye(n)
        s[i, :] -= 2 * B[i, :]
        c = c @ s
    ang = np.sort(np.mod(np.angle(np.linalg.eigvals(c)), 2 * np.pi))
    h = int(round(2 * np.pi / ang[0]))
    exps = [int(round(a * h / (2 * np.pi))) for a in ang]
    return tuple(sorted((m + 1 for m in exps), reverse=True)), h


def coxeter_matrix(kind: str, n: int = 0):
    """Coxeter matrices of the linear diagrams and of D4 (branch node 2)."""
    def chain(labels):
        k = len(labels) + 1
        M = np.full((k, k), 2)
        np.fill_diagonal(M, 1)
        for i, m in enumerate(labels):
            M[i, i + 1] = M[i + 1, i] = m
        return M

    if kind == "I2":
        return chain([n])
    if kind == "A":
        return chain([3] * (n - 1))
    if kind == "B":
        return chain([4] + [3] * (n - 2))
    if kind == "H3":
        return chain([5, 3])
    if kind == "H4":
        return chain([5, 3, 3])
    if kind == "F4":
        return chain([3, 4, 3])
    if kind == "D4":
        M = np.full((4, 4), 2)
        np.fill_diagonal(M, 1)
        for leaf in (0, 2, 3):
            M[1, leaf] = M[leaf, 1] = 3
        return M
    raise ValueError(kind)
