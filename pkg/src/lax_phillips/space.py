# space.py
"""
Box truncation of H = D+ (+) X~ (+) D-, the state space of the associated
semigroup:

    u_plus   on {|t| <= 0}, values in N+
    y        on {|t| = 0},  values in X
    u_minus  on {|t| >= 0}, values in N-

Everything outside the box reads as zero. A vector carries the set of
(part, point) coordinates whose value is not trustworthy because some
operation that produced it read outside the box.
"""
from dataclasses import dataclass, field
from typing import FrozenSet, Iterator, List, Tuple

import numpy as np

from src.errors import ArityError, DomainError, InputError, ShapeError
from src.pencil_core.matrices import order
from src.system_core.signals import LatticeBox, LatticeSignal, Point
from src.system_core.system import MultiLSDS

U_PLUS = "u_plus"
STATE = "y"
U_MINUS = "u_minus"
PARTS = (U_PLUS, STATE, U_MINUS)

Coordinate = Tuple[str, Point]


def in_part(part: str, t: Point) -> bool:
    """Whether t lies in the half space the part lives on."""
    match part:
        case "u_plus":
            return order(t) <= 0
        case "y":
            return order(t) == 0
        case "u_minus":
            return order(t) >= 0
    raise DomainError(f"Unknown part {part!r}")


def part_points(box: LatticeBox, part: str) -> List[Point]:
    """Box points of a part, lexicographic."""
    return [t for t in box.points() if in_part(part, t)]


def space_dims(sys: MultiLSDS) -> Tuple[int, int, int]:
    """(dim N+, dim X, dim N-), the value dimensions of the three parts."""
    return sys.dim_np, sys.dim_x, sys.dim_nm


@dataclass(frozen=True, eq=False)
class TruncatedLPVector:
    box: LatticeBox
    u_plus: LatticeSignal
    y: LatticeSignal
    u_minus: LatticeSignal
    contaminated: FrozenSet[Coordinate] = field(default_factory=frozenset)

    def __post_init__(self):
        for part, signal in self.parts():
            if signal.n != self.box.n:
                raise ArityError(f"{part} lives on Z^{signal.n}, the box on Z^{self.box.n}")
            stray = [t for t in signal.support if not self.box.contains(t) or not in_part(part, t)]
            if stray:
                raise DomainError(f"{part} has entries outside its domain in the box: {stray[:3]}")
        object.__setattr__(self, "contaminated", frozenset(self.contaminated))

    @classmethod
    def zeros(cls, box: LatticeBox, dims: Tuple[int, int, int]) -> "TruncatedLPVector":
        return cls(box, *(LatticeSignal.zeros(box.n, d) for d in dims))

    @property
    def n(self) -> int:
        return self.box.n

    @property
    def dims(self) -> Tuple[int, int, int]:
        return self.u_plus.dim, self.y.dim, self.u_minus.dim

    def part(self, name: str) -> LatticeSignal:
        return getattr(self, name)

    def parts(self) -> Iterator[Tuple[str, LatticeSignal]]:
        return iter(((U_PLUS, self.u_plus), (STATE, self.y), (U_MINUS, self.u_minus)))

    def read(self, part: str, t: Point) -> Tuple[np.ndarray, bool]:
        """
        Value of a part at t together with a dirty flag. Reads off the box
        are zero and dirty; reads off the part's half space are zero and clean.
        """
        signal = self.part(part)
        if not self.box.contains(t):
            return np.zeros(signal.dim, dtype=np.complex128), True
        if not in_part(part, t):
            return np.zeros(signal.dim, dtype=np.complex128), False
        return signal.get(t), (part, t) in self.contaminated

    def inner(self, other: "TruncatedLPVector") -> complex:
        """<self, other> over the three parts, linear in the first argument."""
        self._check_compatible(other)
        return sum((mine.inner(theirs) for (_, mine), (_, theirs) in zip(self.parts(), other.parts())), 0j)

    def norm_sq(self) -> float:
        return sum(signal.norm_sq() for _, signal in self.parts())

    def norm(self) -> float:
        return float(np.sqrt(self.norm_sq()))

    def combine(self, other: "TruncatedLPVector", scale: complex = 1.0) -> "TruncatedLPVector":
        """self + scale * other; the contamination sets are joined."""
        self._check_compatible(other)
        return TruncatedLPVector(
            self.box,
            *(mine.combine(theirs, scale) for (_, mine), (_, theirs) in zip(self.parts(), other.parts())),
            contaminated=self.contaminated | other.contaminated,
        )

    def clean_part(self, ignore: FrozenSet[Coordinate] = frozenset()) -> "TruncatedLPVector":
        """The vector with every contaminated (or ignored) coordinate set to zero."""
        drop = self.contaminated | ignore
        signals = [
            LatticeSignal(signal.n, signal.dim, {t: v for t, v in signal.entries.items() if (part, t) not in drop})
            for part, signal in self.parts()
        ]
        return TruncatedLPVector(self.box, *signals)

    def _check_compatible(self, other: "TruncatedLPVector"):
        if self.box != other.box:
            raise DomainError(f"Vectors live on different boxes {self.box} and {other.box}")
        if self.dims != other.dims:
            raise ShapeError(f"Vectors have part dimensions {self.dims} and {other.dims}")

    def to_dict(self) -> dict:
        return {
            "box": self.box.to_dict(),
            "u_plus": self.u_plus.to_dict(),
            "y": self.y.to_dict(),
            "u_minus": self.u_minus.to_dict(),
        }

    @classmethod
    def from_dict(cls, document: dict) -> "TruncatedLPVector":
        try:
            box = LatticeBox(tuple(document["box"]["lo"]), tuple(document["box"]["hi"]))
            signals = [LatticeSignal.from_dict(document[part]) for part in PARTS]
        except KeyError as e:
            raise InputError(f"Lax-Phillips vector is missing the field {e}") from e
        return cls(box, *signals)


def random_interior_vector(rng: np.random.Generator, box: LatticeBox, dims: Tuple[int, int, int],
                           margin: int = 2) -> TruncatedLPVector:
    """
    Gaussian entries on every point of the box shrunk by margin. Each
    application of a generator reads one step away, so `margin` applications
    stay exact.
    """
    inner_box = box.shrunk(margin)
    if inner_box is None:
        raise DomainError(f"Box {box.to_dict()} has no interior at margin {margin}")
    signals = []
    for part, dim in zip(PARTS, dims):
        entries = {t: rng.standard_normal(dim) + 1j * rng.standard_normal(dim) for t in part_points(inner_box, part)}
        signals.append(LatticeSignal(box.n, dim, entries))
    return TruncatedLPVector(box, *signals)
