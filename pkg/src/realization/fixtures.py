# fixtures.py
"""
Builders of polynomial Agler data with exact polynomial F_k. Every builder
returns data satisfying the identity up to rounding, and the combinators
(products, direct sums, unitary factors) preserve it.
"""
from typing import List, Sequence

import numpy as np
from scipy.linalg import qr

from src.errors import DomainError, ShapeError
from src.pencil_core.matrices import adjoint, spectral_norm, unit
from src.realization.agler import AglerData
from src.transfer.polynomial import MatrixPolynomial, block_diag, vstack

UNITARY_TOL = 1e-10


def canonical_fixture() -> AglerData:
    """theta = z_1 z_2 with F_1 = (z_2), F_2 = (1)."""
    theta = MatrixPolynomial.monomial(2, (1, 1), [[1.0]])
    f1 = MatrixPolynomial.monomial(2, (0, 1), [[1.0]])
    f2 = MatrixPolynomial.constant(2, [[1.0]])
    return AglerData(theta, (f1, f2))


def monomial_fixture(t: Sequence[int]) -> AglerData:
    """
    theta = z^t from the telescoping sum along a path that takes the
    variables from the last to the first: with w_i the product of the first
    i factors of the path,

        1 - conj(lam^t) z^t = sum_i conj(w_{i-1}(lam)) w_{i-1}(z) (1 - conj(lam_{k_i}) z_{k_i})

    so F_k has one row w_{i-1} for every step i spent in variable k.
    Variables that never occur get a single zero row.
    """
    t = tuple(int(c) for c in t)
    n = len(t)
    if sum(t) == 0 or any(c < 0 for c in t):
        raise DomainError(f"A monomial fixture needs a non-zero multi-index, got {t}")
    path = [k for k in reversed(range(n)) for _ in range(t[k])]
    rows: List[List[tuple]] = [[] for _ in range(n)]
    w = (0,) * n
    for k in path:
        rows[k].append(w)
        w = tuple(a + b for a, b in zip(w, unit(k, n)))
    fks = []
    for k in range(n):
        if not rows[k]:
            fks.append(MatrixPolynomial.zeros(n, (1, 1)))
            continue
        coeffs = {}
        for r, exponent in enumerate(rows[k]):
            column = np.zeros((len(rows[k]), 1))
            column[r, 0] = 1.0
            coeffs[exponent] = coeffs.get(exponent, 0) + column
        fks.append(MatrixPolynomial(n, (len(rows[k]), 1), coeffs))
    return AglerData(MatrixPolynomial.monomial(n, t, [[1.0]]), tuple(fks))


def _check_unitary(matrix: np.ndarray, name: str):
    matrix = np.asarray(matrix)
    if matrix.ndim != 2 or matrix.shape[0] != matrix.shape[1]:
        raise ShapeError(f"{name} must be square, got shape {matrix.shape}")
    if spectral_norm(adjoint(matrix) @ matrix - np.eye(matrix.shape[0])) > UNITARY_TOL:
        raise DomainError(f"{name} is not unitary")


def projector_pencil_fixture(U: np.ndarray, projectors: Sequence[np.ndarray]) -> AglerData:
    """
    theta(z) = sum_k z_k U P_k for a unitary U and orthogonal projectors
    P_k summing to I; then F_k = P_k.
    """
    U = np.asarray(U, dtype=np.complex128)
    _check_unitary(U, "U")
    size = U.shape[0]
    projectors = [np.asarray(P, dtype=np.complex128) for P in projectors]
    total = sum(projectors)
    if spectral_norm(total - np.eye(size)) > UNITARY_TOL:
        raise DomainError("The projectors do not sum to the identity")
    for k, P in enumerate(projectors):
        if spectral_norm(P @ P - P) > UNITARY_TOL or spectral_norm(P - adjoint(P)) > UNITARY_TOL:
            raise DomainError(f"P_{k + 1} is not an orthogonal projector")
    n = len(projectors)
    theta = MatrixPolynomial(n, (size, size), {unit(k, n): U @ P for k, P in enumerate(projectors)})
    fks = tuple(MatrixPolynomial.constant(n, P) for P in projectors)
    return AglerData(theta, fks)


def times_unitary(data: AglerData, left: np.ndarray = None, right: np.ndarray = None) -> AglerData:
    """V theta W with unitary V, W; the F_k become F_k W."""
    theta, fks = data.theta, data.fks
    if left is not None:
        _check_unitary(left, "left factor")
        theta = theta.left_multiply(left)
    if right is not None:
        _check_unitary(right, "right factor")
        theta = theta.right_multiply(right)
        fks = tuple(fk.right_multiply(right) for fk in fks)
    return AglerData(theta, fks)


def product_fixture(outer: AglerData, inner: AglerData) -> AglerData:
    """theta_a theta_b with F_k = [F_b,k; F_a,k theta_b]."""
    if outer.n != inner.n:
        raise DomainError(f"Cannot multiply data in {outer.n} and {inner.n} variables")
    if outer.q != inner.p:
        raise ShapeError(f"Outer theta has {outer.q} columns, inner theta has {inner.p} rows")
    fks = tuple(vstack([fb, fa @ inner.theta]) for fa, fb in zip(outer.fks, inner.fks))
    return AglerData(outer.theta @ inner.theta, fks)


def direct_sum_fixture(first: AglerData, second: AglerData) -> AglerData:
    if first.n != second.n:
        raise DomainError(f"Cannot add data in {first.n} and {second.n} variables")
    fks = tuple(block_diag([fa, fb]) for fa, fb in zip(first.fks, second.fks))
    return AglerData(block_diag([first.theta, second.theta]), fks)


def random_unitary(rng: np.random.Generator, size: int) -> np.ndarray:
    """Haar unitary from the QR factorization of a complex Ginibre matrix."""
    z = (rng.standard_normal((size, size)) + 1j * rng.standard_normal((size, size))) / np.sqrt(2)
    q, r = qr(z)
    d = np.diag(r)
    return q * (d / np.abs(d))


def random_projectors(rng: np.random.Generator, n: int, size: int) -> List[np.ndarray]:
    """Coordinate projectors of a random partition, rotated by one Haar unitary."""
    V = random_unitary(rng, size)
    labels = rng.integers(0, n, size)
    projectors = []
    for k in range(n):
        D = np.diag((labels == k).astype(float))
        projectors.append(V @ D @ adjoint(V))
    return projectors


def random_fixture(rng: np.random.Generator, n: int, size: int, depth: int = 2) -> AglerData:
    """A product of `depth` random projector pencils times a random unitary."""
    data = projector_pencil_fixture(random_unitary(rng, size), random_projectors(rng, n, size))
    for _ in range(depth - 1):
        factor = projector_pencil_fixture(random_unitary(rng, size), random_projectors(rng, n, size))
        data = product_fixture(factor, data)
    return times_unitary(data, right=random_unitary(rng, size))
