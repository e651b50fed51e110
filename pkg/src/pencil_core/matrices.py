# matrices.py
"""
Dense complex matrix kernel: conversion helpers, multi-indices and operator
N-tuples together with pencil evaluation zT = sum_k z_k T_k.
"""
from dataclasses import dataclass
from typing import Iterable, Sequence, Tuple

import numpy as np
from scipy.linalg import null_space, orth

from src.errors import ArityError, DomainError, ShapeError

MultiIndex = Tuple[int, ...]


def as_complex_matrix(data, rows: int = None, cols: int = None) -> np.ndarray:
    """
    Converts nested sequences or arrays into a read-only complex128 matrix.

    Args:
        data: Anything numpy can turn into a 2-D array.
        rows (int): Expected row count, checked when given.
        cols (int): Expected column count, checked when given.
    Returns:
        np.ndarray: 2-D complex array (finiteness is left to validate()).
    """
    matrix = np.array(data, dtype=np.complex128)
    if matrix.ndim != 2:
        raise ShapeError(f"Expected a 2-D matrix, got an array of shape {matrix.shape}")
    if rows is not None and matrix.shape[0] != rows:
        raise ShapeError(f"Expected {rows} rows, got {matrix.shape[0]}")
    if cols is not None and matrix.shape[1] != cols:
        raise ShapeError(f"Expected {cols} columns, got {matrix.shape[1]}")
    matrix.setflags(write=False)
    return matrix


def frozen(matrix: np.ndarray) -> np.ndarray:
    matrix = np.array(matrix, dtype=np.complex128)
    matrix.setflags(write=False)
    return matrix


def adjoint(matrix: np.ndarray) -> np.ndarray:
    return matrix.conj().T


def multi_index(components: Iterable[int], n: int = None) -> MultiIndex:
    """Validates a multi-index: non-negative integer components, optional arity check."""
    s = tuple(int(c) for c in components)
    if not s:
        raise DomainError("A multi-index needs at least one component")
    if any(c < 0 for c in s):
        raise DomainError(f"Multi-index components must be non-negative, got {s}")
    if n is not None and len(s) != n:
        raise ArityError(f"Multi-index {s} has {len(s)} components, expected {n}")
    return s


def order(t: Sequence[int]) -> int:
    """|t| = sum of the components (also for lattice points with negative entries)."""
    return int(sum(t))


def unit(k: int, n: int) -> MultiIndex:
    """e_k with zero-based k."""
    return tuple(1 if j == k else 0 for j in range(n))


def shift(t: Sequence[int], delta: Sequence[int], sign: int = 1) -> Tuple[int, ...]:
    return tuple(a + sign * b for a, b in zip(t, delta))


def is_below(tau: Sequence[int], t: Sequence[int]) -> bool:
    """tau <= t componentwise, i.e. t - tau lies in the positive octant."""
    return all(a <= b for a, b in zip(tau, t))


@dataclass(frozen=True)
class OperatorTuple:
    """N matrices of one common shape; T = (T_1, ..., T_N)."""
    mats: Tuple[np.ndarray, ...]

    def __post_init__(self):
        mats = tuple(frozen(m) for m in self.mats)
        if not mats:
            raise ShapeError("An operator tuple needs at least one member")
        for k, m in enumerate(mats):
            if m.ndim != 2:
                raise ShapeError(f"Member {k + 1} is not a matrix (shape {m.shape})")
            if m.shape != mats[0].shape:
                raise ShapeError(
                    f"Member {k + 1} has shape {m.shape}, member 1 has {mats[0].shape}")
        object.__setattr__(self, "mats", mats)

    @classmethod
    def of(cls, *mats) -> "OperatorTuple":
        return cls(tuple(np.atleast_2d(np.asarray(m, dtype=np.complex128)) for m in mats))

    @property
    def n(self) -> int:
        return len(self.mats)

    @property
    def shape(self) -> Tuple[int, int]:
        return self.mats[0].shape

    @property
    def is_square(self) -> bool:
        return self.shape[0] == self.shape[1]

    def __getitem__(self, k: int) -> np.ndarray:
        return self.mats[k]

    def __iter__(self):
        return iter(self.mats)

    def __len__(self) -> int:
        return self.n

    def stacked(self) -> np.ndarray:
        """Array of shape (N, rows, cols)."""
        return np.stack(self.mats)

    def adjoints(self) -> "OperatorTuple":
        return OperatorTuple(tuple(adjoint(m) for m in self.mats))


def eval_pencil(z: Sequence[complex], T: OperatorTuple) -> np.ndarray:
    """zT = sum_k z_k T_k."""
    z = np.asarray(z, dtype=np.complex128).reshape(-1)
    if z.shape[0] != T.n:
        raise ArityError(f"Point has {z.shape[0]} coordinates, tuple has {T.n} members")
    return np.tensordot(z, T.stacked(), axes=(0, 0))


def eval_pencil_batch(points: np.ndarray, T: OperatorTuple) -> np.ndarray:
    """Pencil values for a (P, N) array of points, shape (P, rows, cols)."""
    points = np.asarray(points, dtype=np.complex128)
    if points.ndim != 2 or points.shape[1] != T.n:
        raise ArityError(f"Points of shape {points.shape} do not match a tuple of {T.n} members")
    return np.einsum('pk,kij->pij', points, T.stacked())


def spectral_norm(matrix: np.ndarray) -> float:
    if matrix.size == 0:
        return 0.0
    return float(np.linalg.norm(matrix, ord=2))


def range_basis(matrix: np.ndarray, rank_tol: float = 1e-10) -> np.ndarray:
    """
    Orthonormal basis of the column space; singular values below
    rank_tol * (largest) count as zero.
    """
    matrix = np.asarray(matrix, dtype=np.complex128)
    if matrix.size == 0 or not np.any(matrix):
        return np.zeros((matrix.shape[0], 0), dtype=np.complex128)
    return orth(matrix, rcond=rank_tol)


def kernel_basis(matrix: np.ndarray, rank_tol: float = 1e-10) -> np.ndarray:
    """Orthonormal basis of the null space, same rank convention as range_basis."""
    matrix = np.asarray(matrix, dtype=np.complex128)
    if matrix.shape[1] == 0:
        return np.zeros((0, 0), dtype=np.complex128)
    if matrix.shape[0] == 0 or not np.any(matrix):
        return np.eye(matrix.shape[1], dtype=np.complex128)
    return null_space(matrix, rcond=rank_tol)


def monomial_value(z: Sequence[complex], t: Sequence[int]) -> complex:
    """z^t = z_1^t_1 ... z_N^t_N, with 0^0 = 1."""
    value = 1.0 + 0j
    for zk, e in zip(z, t):
        if e:
            value *= complex(zk) ** int(e)
    return value


def indices_of_order(n: int, total: int):
    """Every t in Z_+^n with |t| = total, lexicographically decreasing."""
    if n == 1:
        yield (total,)
        return
    for head in range(total, -1, -1):
        for rest in indices_of_order(n - 1, total - head):
            yield (head,) + rest
