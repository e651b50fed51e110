# system.py
"""
The multiparametric system alpha = (N; A, B, C, D; X, N-, N+).

    x(t)  = sum_k A_k x(t - e_k) + B_k u(t - e_k)
    y(t)  = sum_k C_k x(t - e_k) + D_k u(t - e_k)

with A_k: X -> X, B_k: N- -> X, C_k: X -> N+, D_k: N- -> N+.
"""
import logging
from dataclasses import dataclass
from typing import List, Sequence, Tuple

import numpy as np
from pydantic import BaseModel

from src.errors import ShapeError
from src.pencil_core.matrices import OperatorTuple, adjoint, frozen

logger = logging.getLogger(__name__)

SHAPE = "shape"
FINITENESS = "finiteness"


class Violation(BaseModel):
    kind: str
    where: str
    message: str


def _as_members(mats) -> Tuple[np.ndarray, ...]:
    return tuple(frozen(np.atleast_2d(np.asarray(m, dtype=np.complex128))) for m in mats)


@dataclass(frozen=True, eq=False)
class MultiLSDS:
    a: Tuple[np.ndarray, ...]
    b: Tuple[np.ndarray, ...]
    c: Tuple[np.ndarray, ...]
    d: Tuple[np.ndarray, ...]
    dim_x: int
    dim_nm: int
    dim_np: int

    def __post_init__(self):
        for name in ("a", "b", "c", "d"):
            object.__setattr__(self, name, _as_members(getattr(self, name)))

    @classmethod
    def from_matrices(cls, a: Sequence, b: Sequence, c: Sequence, d: Sequence,
                      dim_x: int = None, dim_nm: int = None, dim_np: int = None) -> "MultiLSDS":
        """
        Builds a system from four lists of N matrices. Missing dimensions are
        read off A_1 (state) and D_1 (input and output).
        """
        a, b, c, d = _as_members(a), _as_members(b), _as_members(c), _as_members(d)
        if dim_x is None:
            dim_x = a[0].shape[0] if a else 0
        if dim_nm is None:
            dim_nm = d[0].shape[1] if d else 0
        if dim_np is None:
            dim_np = d[0].shape[0] if d else 0
        return cls(a, b, c, d, int(dim_x), int(dim_nm), int(dim_np))

    @classmethod
    def from_blocks(cls, G_mats: Sequence, dim_x: int) -> "MultiLSDS":
        """Splits G_k = [[A_k, B_k], [C_k, D_k]] after dim_x rows and columns."""
        G_mats = [np.asarray(G, dtype=np.complex128) for G in G_mats]
        return cls.from_matrices(
            [G[:dim_x, :dim_x] for G in G_mats],
            [G[:dim_x, dim_x:] for G in G_mats],
            [G[dim_x:, :dim_x] for G in G_mats],
            [G[dim_x:, dim_x:] for G in G_mats],
            dim_x=dim_x,
            dim_nm=G_mats[0].shape[1] - dim_x,
            dim_np=G_mats[0].shape[0] - dim_x,
        )

    @property
    def n(self) -> int:
        return len(self.a)

    @property
    def A(self) -> OperatorTuple:
        return OperatorTuple(self.a)

    @property
    def B(self) -> OperatorTuple:
        return OperatorTuple(self.b)

    @property
    def C(self) -> OperatorTuple:
        return OperatorTuple(self.c)

    @property
    def D(self) -> OperatorTuple:
        return OperatorTuple(self.d)

    @property
    def G(self) -> OperatorTuple:
        """System matrices G_k: X + N- -> X + N+."""
        return OperatorTuple(tuple(np.block([[A, B], [C, D]])
                                   for A, B, C, D in zip(self.a, self.b, self.c, self.d)))

    def require_valid(self) -> "MultiLSDS":
        violations = validate(self)
        if violations:
            raise ShapeError("; ".join(v.message for v in violations))
        return self

    def conjugate(self) -> "MultiLSDS":
        return conjugate(self)


def validate(sys: MultiLSDS) -> List[Violation]:
    """
    Collects shape and finiteness violations; an empty list means the system
    is well formed.

    Args:
        sys (MultiLSDS): The system to inspect.
    Returns:
        List[Violation]: One entry per offending member.
    """
    violations = []
    n = sys.n
    if n < 1:
        violations.append(Violation(kind=SHAPE, where="A", message="A system needs N >= 1 members"))
    expected = {
        "A": (sys.dim_x, sys.dim_x),
        "B": (sys.dim_x, sys.dim_nm),
        "C": (sys.dim_np, sys.dim_x),
        "D": (sys.dim_np, sys.dim_nm),
    }
    for name, members in zip("ABCD", (sys.a, sys.b, sys.c, sys.d)):
        if len(members) != n:
            violations.append(Violation(
                kind=SHAPE, where=name,
                message=f"{name} has {len(members)} members, A has {n}"))
        for k, m in enumerate(members):
            where = f"{name}_{k + 1}"
            if m.ndim != 2 or m.shape != expected[name]:
                violations.append(Violation(
                    kind=SHAPE, where=where,
                    message=f"{where} has shape {m.shape}, expected {expected[name]}"))
            if not np.all(np.isfinite(m)):
                violations.append(Violation(
                    kind=FINITENESS, where=where, message=f"{where} has non-finite entries"))
    if violations:
        logger.debug("system validation found %d violations", len(violations))
    return violations


def conjugate(sys: MultiLSDS) -> MultiLSDS:
    """
    alpha* = (N; A*, C*, B*, D*; X, N+, N-): member-wise adjoints with the
    input and output spaces swapped.
    """
    return MultiLSDS(
        a=tuple(adjoint(m) for m in sys.a),
        b=tuple(adjoint(m) for m in sys.c),
        c=tuple(adjoint(m) for m in sys.b),
        d=tuple(adjoint(m) for m in sys.d),
        dim_x=sys.dim_x,
        dim_nm=sys.dim_np,
        dim_np=sys.dim_nm,
    )
