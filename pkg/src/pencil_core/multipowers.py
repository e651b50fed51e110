# multipowers.py
"""
Multinomial coefficients and the four symmetrized multipowers of an N-tuple:
A^s, (A#B)^s, (C♭A)^s and (C♭A#B)^s.

Every multipower is an average over the distinct arrangements of the multiset
described by s. Splitting off the first (or last) factor gives the recursion

    c_s A^s = sum_{k: s_k > 0} c_{s - e_k} A_k A^{s - e_k}

which is evaluated with memoization over the sublattice {r <= s}.
"""
import math
import itertools
import logging
from typing import Dict, Optional

import numpy as np

from src.config import DEFAULTS
from src.errors import DomainError, RangeError, ShapeError
from src.pencil_core.matrices import MultiIndex, OperatorTuple, multi_index, order, frozen

logger = logging.getLogger(__name__)

INT64_MAX = 2 ** 63 - 1

RIGHT = "right"
LEFT = "left"
BOTH = "both"
BORDER_KINDS = (RIGHT, LEFT, BOTH)


def multinomial(s) -> int:
    """
    c_s = |s|! / (s_1! ... s_N!), the number of distinct arrangements.

    Raises RangeError when the value leaves the signed 64-bit range.
    """
    s = multi_index(s)
    value = 1
    running = 0
    for component in s:
        running += component
        value *= math.comb(running, component)
    if value > INT64_MAX:
        raise RangeError(f"Multinomial coefficient of {s} exceeds the 64-bit range")
    return value


def _decrement(s: MultiIndex, k: int) -> MultiIndex:
    return s[:k] + (s[k] - 1,) + s[k + 1:]


def sublattice_size(s: MultiIndex) -> int:
    return math.prod(c + 1 for c in s)


class MultipowerTable:
    """
    Memoized symmetrized multipowers of one tuple A, optionally bordered by
    B (from the right) and C (from the left).

    Memory grows like prod(s_k + 1) matrices for the largest s requested;
    max_cells caps that product.
    """

    def __init__(self, A: OperatorTuple, B: Optional[OperatorTuple] = None,
                 C: Optional[OperatorTuple] = None, max_cells: int = None):
        if not A.is_square:
            raise ShapeError(f"Multipowers need square members, got shape {A.shape}")
        dim = A.shape[0]
        if B is not None:
            if B.n != A.n:
                raise ShapeError(f"B has {B.n} members, A has {A.n}")
            if B.shape[0] != dim:
                raise ShapeError(f"B members map into dimension {B.shape[0]}, A acts on {dim}")
        if C is not None:
            if C.n != A.n:
                raise ShapeError(f"C has {C.n} members, A has {A.n}")
            if C.shape[1] != dim:
                raise ShapeError(f"C members act on dimension {C.shape[1]}, A acts on {dim}")
        self.A, self.B, self.C = A, B, C
        self.n = A.n
        self.dim = dim
        self.max_cells = max_cells or DEFAULTS.max_multipower_cells
        self._plain: Dict[MultiIndex, np.ndarray] = {}
        self._coeffs: Dict[MultiIndex, int] = {}

    def _check(self, s) -> MultiIndex:
        s = multi_index(s, self.n)
        if sublattice_size(s) > self.max_cells:
            raise RangeError(
                f"Multipower table for {s} needs {sublattice_size(s)} cells, cap is {self.max_cells}")
        return s

    def coefficient(self, s: MultiIndex) -> int:
        if s not in self._coeffs:
            self._coeffs[s] = multinomial(s)
        return self._coeffs[s]

    def _unnormalized(self, s: MultiIndex) -> np.ndarray:
        # c_s A^s, the plain sum over arrangements
        if s in self._plain:
            return self._plain[s]
        # lexicographic order visits every r - e_k before r
        for r in itertools.product(*(range(c + 1) for c in s)):
            if r in self._plain:
                continue
            if order(r) == 0:
                self._plain[r] = np.eye(self.dim, dtype=np.complex128)
                continue
            total = np.zeros((self.dim, self.dim), dtype=np.complex128)
            for k in range(self.n):
                if r[k] > 0:
                    total += self.A[k] @ self._plain[_decrement(r, k)]
            self._plain[r] = total
        logger.debug("multipower table holds %d cells after filling %s", len(self._plain), s)
        return self._plain[s]

    def power(self, s) -> np.ndarray:
        """A^s; the identity for s = 0."""
        s = self._check(s)
        return frozen(self._unnormalized(s) / self.coefficient(s))

    def _check_border(self, kind: str, s) -> MultiIndex:
        if kind not in BORDER_KINDS:
            raise DomainError(f"Unknown border kind {kind!r}; expected one of {BORDER_KINDS}")
        s = self._check(s)
        minimum = 2 if kind == BOTH else 1
        if order(s) < minimum:
            raise DomainError(f"Bordered multipower of kind {kind!r} needs |s| >= {minimum}, got {s}")
        if kind in (RIGHT, BOTH) and self.B is None:
            raise ShapeError("Right border requested but no B tuple was given")
        if kind in (LEFT, BOTH) and self.C is None:
            raise ShapeError("Left border requested but no C tuple was given")
        return s

    def bordered(self, kind: str, s) -> np.ndarray:
        """
        (A#B)^s for kind 'right', (C♭A)^s for 'left', (C♭A#B)^s for 'both'.
        """
        s = self._check_border(kind, s)
        return frozen(self._bordered_sum(kind, s) / self.coefficient(s))

    def bordered_scaled(self, kind: str, s) -> np.ndarray:
        """c_s times the bordered multipower, the quantity entering trajectories."""
        s = self._check_border(kind, s)
        return self._bordered_sum(kind, s)

    def power_scaled(self, s) -> np.ndarray:
        s = self._check(s)
        return self._unnormalized(s).copy()

    def _bordered_sum(self, kind: str, s: MultiIndex) -> np.ndarray:
        if kind == RIGHT:
            total = np.zeros((self.dim, self.B.shape[1]), dtype=np.complex128)
            for k in range(self.n):
                if s[k] > 0:
                    total += self._unnormalized(_decrement(s, k)) @ self.B[k]
            return total
        if kind == LEFT:
            total = np.zeros((self.C.shape[0], self.dim), dtype=np.complex128)
            for k in range(self.n):
                if s[k] > 0:
                    total += self.C[k] @ self._unnormalized(_decrement(s, k))
            return total
        total = np.zeros((self.C.shape[0], self.B.shape[1]), dtype=np.complex128)
        for j in range(self.n):
            if s[j] == 0:
                continue
            head = _decrement(s, j)
            for k in range(self.n):
                if head[k] == 0:
                    continue
                middle = _decrement(head, k)
                total += self.C[j] @ self._unnormalized(middle) @ self.B[k]
        return total


def sym_multipower(A: OperatorTuple, s, max_cells: int = None) -> np.ndarray:
    """Symmetrized multipower A^s."""
    return MultipowerTable(A, max_cells=max_cells).power(s)


def bordered_multipower(kind: str, A: OperatorTuple, B: Optional[OperatorTuple],
                        C: Optional[OperatorTuple], s, max_cells: int = None) -> np.ndarray:
    # kind: 'right' for (A#B)^s, 'left' for (C♭A)^s, 'both' for (C♭A#B)^s.
    return MultipowerTable(A, B=B, C=C, max_cells=max_cells).bordered(kind, s)
