# signals.py
"""
Finitely supported vector signals on the lattice Z^N, and the axis-aligned
boxes every computation is truncated to.
"""
import itertools
from dataclasses import dataclass, field
from typing import Dict, Iterator, Mapping, Optional, Sequence, Tuple

import numpy as np

from src.errors import ArityError, DomainError, InputError, ShapeError
from src.pencil_core.matrices import order

Point = Tuple[int, ...]


def complex_to_pairs(values) -> list:
    """[re, im] pairs, nested like the input array."""
    array = np.asarray(values, dtype=np.complex128)
    return np.stack([array.real, array.imag], axis=-1).tolist()


def pairs_to_complex(pairs) -> np.ndarray:
    array = np.asarray(pairs, dtype=np.float64)
    if array.ndim == 0 or array.shape[-1] != 2:
        raise InputError("Complex numbers must be written as [re, im] pairs")
    return array[..., 0] + 1j * array[..., 1]


@dataclass(frozen=True)
class LatticeBox:
    """The box lo_k <= t_k <= hi_k."""
    lo: Tuple[int, ...]
    hi: Tuple[int, ...]

    def __post_init__(self):
        lo, hi = tuple(int(v) for v in self.lo), tuple(int(v) for v in self.hi)
        if len(lo) != len(hi) or not lo:
            raise ArityError(f"Box bounds {lo} and {hi} disagree on N")
        if any(a > b for a, b in zip(lo, hi)):
            raise DomainError(f"Box needs lo <= hi componentwise, got {lo} and {hi}")
        object.__setattr__(self, "lo", lo)
        object.__setattr__(self, "hi", hi)

    @classmethod
    def cube(cls, n: int, lo: int, hi: int) -> "LatticeBox":
        return cls((lo,) * n, (hi,) * n)

    @property
    def n(self) -> int:
        return len(self.lo)

    def contains(self, t: Sequence[int]) -> bool:
        return all(a <= v <= b for a, v, b in zip(self.lo, t, self.hi))

    def points(self) -> Iterator[Point]:
        """All box points in lexicographic order."""
        return itertools.product(*(range(a, b + 1) for a, b in zip(self.lo, self.hi)))

    def front(self, n: int) -> list:
        """Box points with |t| = n, lexicographic."""
        if n < sum(self.lo) or n > sum(self.hi):
            return []
        return [t for t in self.points() if order(t) == n]

    def negated(self) -> "LatticeBox":
        return LatticeBox(tuple(-b for b in self.hi), tuple(-a for a in self.lo))

    def shrunk(self, margin: int) -> Optional["LatticeBox"]:
        lo = tuple(a + margin for a in self.lo)
        hi = tuple(b - margin for b in self.hi)
        if any(a > b for a, b in zip(lo, hi)):
            return None
        return LatticeBox(lo, hi)

    def to_dict(self) -> dict:
        return {"lo": list(self.lo), "hi": list(self.hi)}


@dataclass(frozen=True)
class SimulationWindow:
    box: LatticeBox
    n_max: int

    def __post_init__(self):
        if self.n_max < 1:
            raise DomainError(f"n_max must be at least 1, got {self.n_max}")

    @classmethod
    def octant(cls, n: int, n_max: int) -> "SimulationWindow":
        """The box [0, n_max]^N, enough to hold every front up to n_max."""
        return cls(LatticeBox.cube(n, 0, n_max), n_max)


@dataclass(frozen=True, eq=False)
class LatticeSignal:
    """
    t -> v(t) in C^dim with finite support; unset points read as zero.
    """
    n: int
    dim: int
    entries: Mapping[Point, np.ndarray] = field(default_factory=dict)

    def __post_init__(self):
        if self.n < 1:
            raise ArityError(f"Lattice dimension must be at least 1, got {self.n}")
        if self.dim < 0:
            raise ShapeError(f"Vector dimension must be non-negative, got {self.dim}")
        cleaned: Dict[Point, np.ndarray] = {}
        for t, v in self.entries.items():
            t = tuple(int(c) for c in t)
            if len(t) != self.n:
                raise ArityError(f"Point {t} does not lie in Z^{self.n}")
            vector = np.array(v, dtype=np.complex128).reshape(-1)
            if vector.shape[0] != self.dim:
                raise ShapeError(f"Value at {t} has length {vector.shape[0]}, signal dimension is {self.dim}")
            vector.setflags(write=False)
            cleaned[t] = vector
        object.__setattr__(self, "entries", dict(sorted(cleaned.items())))

    @classmethod
    def zeros(cls, n: int, dim: int) -> "LatticeSignal":
        return cls(n, dim, {})

    @classmethod
    def impulse(cls, n: int, dim: int, at: Sequence[int] = None, value=None) -> "LatticeSignal":
        """A single entry, by default the first basis vector at the origin."""
        at = tuple(at) if at is not None else (0,) * n
        if value is None:
            value = np.zeros(dim, dtype=np.complex128)
            if dim:
                value[0] = 1.0
        return cls(n, dim, {at: value})

    def get(self, t: Sequence[int]) -> np.ndarray:
        vector = self.entries.get(tuple(t))
        if vector is None:
            return np.zeros(self.dim, dtype=np.complex128)
        return vector

    @property
    def support(self) -> list:
        return list(self.entries)

    def front(self, n: int) -> Dict[Point, np.ndarray]:
        return {t: v for t, v in self.entries.items() if order(t) == n}

    def restricted(self, box: LatticeBox) -> "LatticeSignal":
        return LatticeSignal(self.n, self.dim, {t: v for t, v in self.entries.items() if box.contains(t)})

    def negated(self) -> "LatticeSignal":
        """t -> v(-t)."""
        return LatticeSignal(self.n, self.dim, {tuple(-c for c in t): v for t, v in self.entries.items()})

    def norm_sq(self) -> float:
        return float(sum(np.vdot(v, v).real for v in self.entries.values()))

    def inner(self, other: "LatticeSignal") -> complex:
        """<self, other>, linear in the first argument."""
        return complex(sum(np.vdot(other.get(t), v) for t, v in self.entries.items()))

    def combine(self, other: "LatticeSignal", scale: complex = 1.0) -> "LatticeSignal":
        """self + scale * other."""
        if (self.n, self.dim) != (other.n, other.dim):
            raise ShapeError(f"Cannot combine signals of shape {(self.n, self.dim)} and {(other.n, other.dim)}")
        values = dict(self.entries)
        for t, v in other.entries.items():
            values[t] = self.get(t) + scale * v
        return LatticeSignal(self.n, self.dim, values)

    def to_dict(self) -> dict:
        return {
            "n": self.n,
            "dim": self.dim,
            "entries": [{"t": list(t), "v": complex_to_pairs(v)} for t, v in self.entries.items()],
        }

    @classmethod
    def from_dict(cls, document: dict) -> "LatticeSignal":
        entries = {}
        for entry in document["entries"]:
            t = tuple(entry["t"])
            if t in entries:
                raise InputError(f"Lattice point {t} is listed twice")
            entries[t] = pairs_to_complex(entry["v"]).reshape(-1) if entry["v"] else np.zeros(0)
        return cls(document["n"], document["dim"], entries)


def front_energy(signal: LatticeSignal, n: int, box: LatticeBox = None) -> float:
    """Sum of squared norms over front n, inside box when given."""
    total = 0.0
    for t, v in signal.front(n).items():
        if box is None or box.contains(t):
            total += float(np.vdot(v, v).real)
    return total
