"""Pointwise algebra: local-factor decomposition and the Frobenius test.

A :class:`FiniteAlgebra` is a commutative associative unital algebra on
C^n given by a numeric structure tensor ``c[i, j, k]`` with
``x_i * x_j = sum_k c[i, j, k] x_k``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

__all__ = [
    "AlgebraError",
    "ToleranceAmbiguity",
    "FiniteAlgebra",
    "Factor",
    "AlgebraDecomposition",
    "decompose",
    "partition",
    "is_frobenius",
    "bilinear_from_linear",
    "direct_sum",
    "numeric_rank",
]


class AlgebraError(ValueError):
    """The structure tensor violates an algebra axiom."""


class ToleranceAmbiguity(ArithmeticError):
    """Eigenvalue clustering could not be resolved at the given tolerance."""

    def __init__(self, msg):
        super().__init__(f"tolerance ambiguity: {msg}")


def numeric_rank(m: np.ndarray, tol: float) -> int:
    if m.size == 0:
        return 0
    s = np.linalg.svd(m, compute_uv=False)
    if len(s) == 0:
        return 0
    return int(np.sum(s > tol * max(1.0, s[0])))


def _null_space(m: np.ndarray, tol: float) -> np.ndarray:
    """Orthonormal basis (columns) of the numeric kernel."""
    rows, cols = m.shape
    if rows == 0:
        return np.eye(cols, dtype=complex)
    _, s, vh = np.linalg.svd(m)
    scale = max(1.0, s[0]) if len(s) else 1.0
    r = int(np.sum(s > tol * scale))
    return vh[r:].conj().T


def _col_space(m: np.ndarray, rank: int) -> np.ndarray:
    u, _, _ = np.linalg.svd(m)
    return u[:, :rank]


class FiniteAlgebra:
    """Structure tensor plus unit vector; invariants are checked on construction."""

    def __init__(self, structure, unit=None, tol: float = 1e-10, check: bool = True):
        c = np.array(structure, dtype=complex)
        if c.ndim != 3 or not (c.shape[0] == c.shape[1] == c.shape[2]):
            raise AlgebraError(f"structure tensor must be n x n x n, got shape {c.shape}")
        self.dim = c.shape[0]
        self.structure = c
        if unit is None:
            unit = self._find_unit()
        self.unit = np.array(unit, dtype=complex)
        if check:
            problems = self.violations(tol)
            if problems:
                raise AlgebraError("; ".join(problems))

    def _find_unit(self):
        # solve L_e = I for e
        n = self.dim
        a = self.structure.transpose(1, 2, 0).reshape(n * n, n)
        b = np.eye(n, dtype=complex).reshape(n * n)
        sol, *_ = np.linalg.lstsq(a, b, rcond=None)
        return sol

    @property
    def scale(self) -> float:
        return max(1.0, float(np.max(np.abs(self.structure))) if self.structure.size else 1.0)

    def violations(self, tol: float = 1e-10) -> list[str]:
        c = self.structure
        out = []
        s = self.scale
        comm = np.max(np.abs(c - c.transpose(1, 0, 2)), initial=0.0)
        if comm > tol * s:
            out.append(f"not commutative (max defect {comm:.3g})")
        assoc = np.einsum("ijm,mkl->ijkl", c, c) - np.einsum("jkm,iml->ijkl", c, c)
        ad = np.max(np.abs(assoc), initial=0.0)
        if ad > tol * s * s:
            out.append(f"not associative (max defect {ad:.3g})")
        ud = np.max(np.abs(self.mult_matrix(self.unit) - np.eye(self.dim)), initial=0.0)
        if ud > tol * s:
            out.append(f"unit does not act as identity (max defect {ud:.3g})")
        return out

    def mult(self, x, y) -> np.ndarray:
        return np.einsum("i,j,ijk->k", np.asarray(x, dtype=complex), np.asarray(y, dtype=complex), self.structure)

    def mult_matrix(self, x) -> np.ndarray:
        """Matrix M with M @ y = x * y."""
        return np.einsum("i,ijk->kj", np.asarray(x, dtype=complex), self.structure)

    def basis_matrices(self) -> list[np.ndarray]:
        return [self.structure[i].T for i in range(self.dim)]

    def to_dict(self) -> dict:
        def enc(z):
            return [float(z.real), float(z.imag)]

        n = self.dim
        return {
            "dimension": n,
            "unit": [enc(z) for z in self.unit],
            "structure": {
                f"{i + 1},{j + 1},{k + 1}": enc(self.structure[i, j, k])
                for i in range(n) for j in range(n) for k in range(n)
            },
        }


@dataclass
class Factor:
    idempotent: np.ndarray
    character: np.ndarray  # values lambda_k(x_i)
    dim: int
    basis: np.ndarray  # columns span Q_k


@dataclass
class AlgebraDecomposition:
    factors: list[Factor]
    seed: int = 0
    attempts: int = 1

    @property
    def partition(self) -> tuple:
        return tuple(sorted((f.dim for f in self.factors), reverse=True))

    @property
    def semisimple(self) -> bool:
        return all(f.dim == 1 for f in self.factors)

    def to_dict(self) -> dict:
        def enc(v):
            return [[float(z.real), float(z.imag)] for z in v]

        return {
            "partition": list(self.partition),
            "semisimple": self.semisimple,
            "factors": [
                {"dim": f.dim, "idempotent": enc(f.idempotent), "character": enc(f.character)}
                for f in self.factors
            ],
        }


def _random_element(n: int, rng) -> np.ndarray:
    num = rng.integers(-97, 98, size=n)
    den = rng.integers(1, 50, size=n)
    return np.array([float(Fraction(int(a), int(b))) for a, b in zip(num, den)], dtype=complex)


def _cluster_exact(values: np.ndarray, count: int):
    """Single-linkage clustering into exactly ``count`` groups.

    Returns (groups, intra, inter): the largest link used inside a group and
    the smallest distance between groups.
    """
    n = len(values)
    edges = sorted(
        (abs(values[i] - values[j]), i, j) for i in range(n) for j in range(i + 1, n)
    )
    parent = list(range(n))

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    groups = n
    intra = 0.0
    inter = np.inf
    for d, i, j in edges:
        ri, rj = find(i), find(j)
        if ri == rj:
            continue
        if groups > count:
            parent[ri] = rj
            groups -= 1
            intra = max(intra, d)
        else:
            inter = d
            break
    out: dict[int, list[int]] = {}
    for i in range(n):
        out.setdefault(find(i), []).append(i)
    return list(out.values()), intra, inter


def _refine_idempotent(A: FiniteAlgebra, e: np.ndarray, max_iter: int = 200) -> np.ndarray:
    for _ in range(max_iter):
        e2 = A.mult(e, e)
        if np.max(np.abs(e2 - e)) < 1e-15 * max(1.0, np.max(np.abs(e))):
            break
        e = 3 * e2 - 2 * A.mult(e2, e)
    return e


def _try_decompose(A: FiniteAlgebra, tol: float, rng):
    n = A.dim
    mats = A.basis_matrices()
    traces = np.array([np.trace(m) for m in mats])
    trace_form = np.einsum("ijk,k->ij", A.structure, traces)
    nfac = numeric_rank(trace_form, tol)
    if nfac == 0:
        raise ToleranceAmbiguity("trace form vanishes numerically")
    z = _random_element(n, rng)
    Lz = A.mult_matrix(z)
    eig = np.linalg.eigvals(Lz)
    groups, intra, inter = _cluster_exact(eig, nfac)
    if nfac > 1 and not inter > max(10 * intra, tol):
        return None, f"eigenvalue clusters not separated (spread {intra:.3g}, gap {inter:.3g})"
    centers = [np.mean(eig[g]) for g in groups]
    factors = []
    for k, mu in enumerate(centers):
        # Lagrange basis polynomial of z at the cluster centers
        e = A.unit.copy()
        for j, nu in enumerate(centers):
            if j != k:
                e = A.mult(e, (z - nu * A.unit) / (mu - nu))
        e = _refine_idempotent(A, e)
        Le = A.mult_matrix(e)
        m_k = int(round(np.trace(Le).real))
        if m_k < 1:
            return None, "idempotent with nonpositive trace"
        basis = _col_space(Le, m_k)
        char = np.array([np.trace(M @ Le) / m_k for M in mats])
        factors.append(Factor(idempotent=e, character=char, dim=m_k, basis=basis))
    problem = _verify(A, factors, tol)
    if problem:
        return None, problem
    return factors, None


def _verify(A: FiniteAlgebra, factors, tol) -> str | None:
    n = A.dim
    s = A.scale
    if sum(f.dim for f in factors) != n:
        return "block dimensions do not sum to the algebra dimension"
    total = sum(f.idempotent for f in factors)
    if np.max(np.abs(total - A.unit)) > 1e-8 * s:
        return "idempotents do not sum to the unit"
    for a, fa in enumerate(factors):
        for b, fb in enumerate(factors):
            prod = A.mult(fa.idempotent, fb.idempotent)
            want = fa.idempotent if a == b else 0
            if np.max(np.abs(prod - want)) > 1e-8 * s:
                return "idempotents are not orthogonal"
            if a < b and np.max(np.abs(fa.character - fb.character)) <= tol * s:
                return "two factors share a character"
    for f in factors:
        Le = A.mult_matrix(f.idempotent)
        for i, M in enumerate(A.basis_matrices()):
            N = (M - f.character[i] * np.eye(n)) @ Le
            if np.max(np.abs(np.linalg.matrix_power(N, f.dim)), initial=0.0) > 1e-6 * s ** f.dim:
                return "operator minus character is not nilpotent on its block"
    return None


def decompose(A: FiniteAlgebra, tol: float = 1e-8, seed: int = 0, max_attempts: int = 5) -> AlgebraDecomposition:
    """Simultaneous generalized-eigenspace decomposition of all x_i*.

    The number of local factors is the rank of the trace form; a seeded random
    element is split into that many eigenvalue clusters, idempotents are
    refined by the iteration e -> 3e^2 - 2e^3 and the result is verified.
    An unlucky draw is retried with the next seed.
    """
    problems = A.violations(1e-10)
    if problems:
        raise AlgebraError("; ".join(problems))
    last = None
    for attempt in range(max_attempts):
        rng = np.random.default_rng(seed + attempt)
        factors, last = _try_decompose(A, tol, rng)
        if factors is not None:
            factors.sort(key=lambda f: (-f.dim, [round(v, 9) for v in f.character.real], [round(v, 9) for v in f.character.imag]))
            return AlgebraDecomposition(factors=factors, seed=seed + attempt, attempts=attempt + 1)
    raise ToleranceAmbiguity(last or "decomposition failed")


def partition(A: FiniteAlgebra, tol: float = 1e-8, seed: int = 0) -> tuple:
    return decompose(A, tol, seed).partition


def is_frobenius(A: FiniteAlgebra, tol: float = 1e-8, seed: int = 0) -> dict:
    """Socle dimension of every local factor; Frobenius iff all equal 1."""
    dec = decompose(A, tol, seed)
    socles = []
    for f in dec.factors:
        B = f.basis
        if f.dim == 1:
            socles.append(1)
            continue
        # maximal ideal: kernel of the character inside Q_k
        coords = _null_space((f.character @ B).reshape(1, -1), tol)
        ideal = B @ coords
        stacked = np.vstack([A.mult_matrix(x) @ B for x in ideal.T])
        socles.append(f.dim - numeric_rank(stacked, tol))
    return {
        "frobenius": all(s == 1 for s in socles),
        "gorenstein": [s == 1 for s in socles],
        "socle_dimensions": socles,
        "partition": list(dec.partition),
    }


def bilinear_from_linear(A: FiniteAlgebra, f, tol: float = 1e-8) -> tuple[np.ndarray, bool]:
    """Gram matrix g(x_i, x_j) = f(x_i * x_j) and a nondegeneracy flag."""
    g = np.einsum("ijk,k->ij", A.structure, np.asarray(f, dtype=complex))
    return g, numeric_rank(g, tol) == A.dim


def direct_sum(A: FiniteAlgebra, B: FiniteAlgebra) -> FiniteAlgebra:
    n, m = A.dim, B.dim
    c = np.zeros((n + m,) * 3, dtype=complex)
    c[:n, :n, :n] = A.structure
    c[n:, n:, n:] = B.structure
    return FiniteAlgebra(c, np.concatenate([A.unit, B.unit]))
