# polynomial.py
"""
Matrix-valued polynomials in N variables, sum_t M_t z^t with M_t of one
shape, and their evaluation at points and at commuting operator tuples.
"""
from dataclasses import dataclass, field
from typing import Dict, Iterable, List, Mapping, Sequence, Tuple

import numpy as np

from src.errors import ArityError, InputError, PreconditionError, ShapeError
from src.pencil_core.matrices import MultiIndex, frozen, monomial_value, multi_index, order, spectral_norm
from src.system_core.signals import complex_to_pairs, pairs_to_complex

COMMUTATION_TOL = 1e-10
CONTRACTION_SLACK = 1e-12


@dataclass(frozen=True, eq=False)
class MatrixPolynomial:
    n: int
    shape: Tuple[int, int]
    coeffs: Mapping[MultiIndex, np.ndarray] = field(default_factory=dict)

    def __post_init__(self):
        if self.n < 1:
            raise ArityError(f"A polynomial needs N >= 1 variables, got {self.n}")
        shape = tuple(int(v) for v in self.shape)
        cleaned = {}
        for t, m in self.coeffs.items():
            t = multi_index(t, self.n)
            m = frozen(np.atleast_2d(m))
            if m.shape != shape:
                raise ShapeError(f"Coefficient at {t} has shape {m.shape}, polynomial shape is {shape}")
            if t in cleaned:
                m = frozen(cleaned[t] + m)
            cleaned[t] = m
        object.__setattr__(self, "shape", shape)
        object.__setattr__(self, "coeffs", dict(sorted(cleaned.items())))

    @classmethod
    def zeros(cls, n: int, shape) -> "MatrixPolynomial":
        return cls(n, shape, {})

    @classmethod
    def constant(cls, n: int, matrix) -> "MatrixPolynomial":
        matrix = np.atleast_2d(np.asarray(matrix, dtype=np.complex128))
        return cls(n, matrix.shape, {(0,) * n: matrix})

    @classmethod
    def monomial(cls, n: int, t: Sequence[int], matrix) -> "MatrixPolynomial":
        matrix = np.atleast_2d(np.asarray(matrix, dtype=np.complex128))
        return cls(n, matrix.shape, {tuple(t): matrix})

    @classmethod
    def variable(cls, n: int, k: int, size: int = 1) -> "MatrixPolynomial":
        """z_k times the identity of the given size (k zero-based)."""
        t = tuple(1 if j == k else 0 for j in range(n))
        return cls(n, (size, size), {t: np.eye(size)})

    def coefficient(self, t: Sequence[int]) -> np.ndarray:
        value = self.coeffs.get(tuple(t))
        if value is None:
            return np.zeros(self.shape, dtype=np.complex128)
        return value

    @property
    def degree(self) -> int:
        return max((order(t) for t in self.coeffs), default=0)

    def evaluate(self, z: Sequence[complex]) -> np.ndarray:
        z = np.asarray(z, dtype=np.complex128).reshape(-1)
        if z.shape[0] != self.n:
            raise ArityError(f"Point has {z.shape[0]} coordinates, polynomial has {self.n} variables")
        value = np.zeros(self.shape, dtype=np.complex128)
        for t, m in self.coeffs.items():
            value += monomial_value(z, t) * m
        return value

    def evaluate_tuple(self, T: Sequence[np.ndarray]) -> np.ndarray:
        """
        sum_t kron(M_t, T^t) for commuting square T_k; the coefficient acts on
        the left tensor factor.
        """
        if len(T) != self.n:
            raise ArityError(f"Tuple has {len(T)} members, polynomial has {self.n} variables")
        size = np.asarray(T[0]).shape[0]
        powers: List[Dict[int, np.ndarray]] = [{0: np.eye(size, dtype=np.complex128)} for _ in T]

        def power(k: int, e: int) -> np.ndarray:
            table = powers[k]
            top = max(table)
            while top < e:
                table[top + 1] = table[top] @ T[k]
                top += 1
            return table[e]

        value = np.zeros((self.shape[0] * size, self.shape[1] * size), dtype=np.complex128)
        for t, m in self.coeffs.items():
            product = np.eye(size, dtype=np.complex128)
            for k, e in enumerate(t):
                if e:
                    product = product @ power(k, e)
            value += np.kron(m, product)
        return value

    def __add__(self, other: "MatrixPolynomial") -> "MatrixPolynomial":
        self._check_compatible(other)
        coeffs = dict(self.coeffs)
        for t, m in other.coeffs.items():
            coeffs[t] = self.coefficient(t) + m
        return MatrixPolynomial(self.n, self.shape, coeffs)

    def __sub__(self, other: "MatrixPolynomial") -> "MatrixPolynomial":
        return self + other.scaled(-1.0)

    def scaled(self, factor: complex) -> "MatrixPolynomial":
        return MatrixPolynomial(self.n, self.shape, {t: factor * m for t, m in self.coeffs.items()})

    def __matmul__(self, other: "MatrixPolynomial") -> "MatrixPolynomial":
        if self.n != other.n:
            raise ArityError(f"Cannot multiply polynomials in {self.n} and {other.n} variables")
        if self.shape[1] != other.shape[0]:
            raise ShapeError(f"Cannot multiply shapes {self.shape} and {other.shape}")
        coeffs: Dict[MultiIndex, np.ndarray] = {}
        for s, left in self.coeffs.items():
            for t, right in other.coeffs.items():
                key = tuple(a + b for a, b in zip(s, t))
                product = left @ right
                coeffs[key] = coeffs[key] + product if key in coeffs else product
        return MatrixPolynomial(self.n, (self.shape[0], other.shape[1]), coeffs)

    def left_multiply(self, matrix) -> "MatrixPolynomial":
        matrix = np.atleast_2d(np.asarray(matrix, dtype=np.complex128))
        return MatrixPolynomial(self.n, (matrix.shape[0], self.shape[1]),
                                {t: matrix @ m for t, m in self.coeffs.items()})

    def right_multiply(self, matrix) -> "MatrixPolynomial":
        matrix = np.atleast_2d(np.asarray(matrix, dtype=np.complex128))
        return MatrixPolynomial(self.n, (self.shape[0], matrix.shape[1]),
                                {t: m @ matrix for t, m in self.coeffs.items()})

    def pruned(self, tol: float = 0.0) -> "MatrixPolynomial":
        """Drops coefficients whose largest entry modulus is at most tol."""
        return MatrixPolynomial(self.n, self.shape,
                                {t: m for t, m in self.coeffs.items() if m.size and np.max(np.abs(m)) > tol})

    def _check_compatible(self, other: "MatrixPolynomial"):
        if self.n != other.n:
            raise ArityError(f"Polynomials in {self.n} and {other.n} variables")
        if self.shape != other.shape:
            raise ShapeError(f"Polynomial shapes {self.shape} and {other.shape} differ")

    def to_dict(self) -> dict:
        return {
            "n": self.n,
            "shape": list(self.shape),
            "terms": [{"t": list(t), "m": complex_to_pairs(m)} for t, m in self.coeffs.items()],
        }

    @classmethod
    def from_dict(cls, document: dict) -> "MatrixPolynomial":
        shape = tuple(document["shape"])
        coeffs = {}
        for term in document["terms"]:
            t = tuple(term["t"])
            if t in coeffs:
                raise InputError(f"Term {t} is listed twice")
            coeffs[t] = pairs_to_complex(term["m"]).reshape(shape) if np.prod(shape) else np.zeros(shape)
        return cls(document["n"], shape, coeffs)


def vstack(polys: Iterable[MatrixPolynomial]) -> MatrixPolynomial:
    """Stacks polynomials with equal column counts on top of each other."""
    polys = list(polys)
    n = polys[0].n
    cols = polys[0].shape[1]
    if any(p.n != n for p in polys):
        raise ArityError("Stacked polynomials disagree on N")
    if any(p.shape[1] != cols for p in polys):
        raise ShapeError("Stacked polynomials disagree on the column count")
    rows = [p.shape[0] for p in polys]
    keys = sorted({t for p in polys for t in p.coeffs})
    coeffs = {t: np.vstack([p.coefficient(t) for p in polys]) for t in keys}
    return MatrixPolynomial(n, (sum(rows), cols), coeffs)


def block_diag(polys: Sequence[MatrixPolynomial]) -> MatrixPolynomial:
    """Direct sum diag(p_1, ..., p_r)."""
    n = polys[0].n
    rows = sum(p.shape[0] for p in polys)
    cols = sum(p.shape[1] for p in polys)
    keys = sorted({t for p in polys for t in p.coeffs})
    coeffs = {}
    for t in keys:
        matrix = np.zeros((rows, cols), dtype=np.complex128)
        r = c = 0
        for p in polys:
            matrix[r:r + p.shape[0], c:c + p.shape[1]] = p.coefficient(t)
            r, c = r + p.shape[0], c + p.shape[1]
        coeffs[t] = matrix
    return MatrixPolynomial(n, (rows, cols), coeffs)


@dataclass(frozen=True, eq=False)
class CommutingTuple:
    """N square matrices that commute pairwise and are contractions."""
    mats: Tuple[np.ndarray, ...]

    def __post_init__(self):
        mats = tuple(frozen(m) for m in self.mats)
        if not mats or any(m.ndim != 2 or m.shape != (mats[0].shape[0],) * 2 for m in mats):
            raise ShapeError("A commuting tuple needs square members of one size")
        for k, left in enumerate(mats):
            if spectral_norm(left) > 1 + CONTRACTION_SLACK:
                raise PreconditionError(f"Member {k + 1} has norm {spectral_norm(left):.6f} > 1")
            for j in range(k + 1, len(mats)):
                right = mats[j]
                if spectral_norm(left @ right - right @ left) > COMMUTATION_TOL:
                    raise PreconditionError(f"Members {k + 1} and {j + 1} do not commute")
        object.__setattr__(self, "mats", mats)

    @property
    def n(self) -> int:
        return len(self.mats)

    @property
    def size(self) -> int:
        return self.mats[0].shape[0]

    def scaled(self, r: float) -> List[np.ndarray]:
        return [r * m for m in self.mats]
