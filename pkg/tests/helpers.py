# helpers.py
"""Random generators shared by the test modules."""
import numpy as np
from scipy.linalg import qr

from src.pencil_core.matrices import OperatorTuple
from src.system_core.system import MultiLSDS


def rng_for(seed: int) -> np.random.Generator:
    return np.random.default_rng(seed)


def random_matrix(rng, rows, cols, scale=1.0):
    return scale * (rng.standard_normal((rows, cols)) + 1j * rng.standard_normal((rows, cols)))


def random_tuple(rng, n, rows, cols, scale=1.0) -> OperatorTuple:
    return OperatorTuple(tuple(random_matrix(rng, rows, cols, scale) for _ in range(n)))


def haar_unitary(rng, size):
    """Haar-distributed unitary from the QR factorization of a Ginibre matrix."""
    z = random_matrix(rng, size, size) / np.sqrt(2)
    q, r = qr(z)
    d = np.diag(r)
    return q * (d / np.abs(d))


def random_partition(rng, size, parts):
    """Splits range(size) into `parts` blocks, shuffled; blocks may be empty."""
    order = rng.permutation(size)
    cuts = np.sort(rng.integers(0, size + 1, parts - 1))
    return np.split(order, cuts)


def random_conservative_system(rng, n, dim_x, dim_n) -> MultiLSDS:
    """
    G_k = U P_k with a Haar unitary U and coordinate projectors P_k onto a
    random orthogonal partition of X + N-, so that sum_k zeta_k G_k is unitary
    on the torus.
    """
    size = dim_x + dim_n
    U = haar_unitary(rng, size)
    V = haar_unitary(rng, size)
    blocks = random_partition(rng, size, n)
    G_mats = []
    for block in blocks:
        P = np.zeros((size, size), dtype=np.complex128)
        P[block, block] = 1.0
        G_mats.append(U @ V @ P @ V.conj().T)
    return MultiLSDS.from_blocks(G_mats, dim_x)


def random_dissipative_system(rng, n, dim_x, dim_n, pieces=3) -> MultiLSDS:
    """Convex combination of conservative tuples; contractive on the torus."""
    weights = rng.dirichlet(np.ones(pieces))
    systems = [random_conservative_system(rng, n, dim_x, dim_n) for _ in range(pieces)]
    G_mats = [sum(w * s.G[k] for w, s in zip(weights, systems)) for k in range(n)]
    return MultiLSDS.from_blocks(G_mats, dim_x)


def random_system(rng, n, dim_x, dim_nm, dim_np, scale=0.5) -> MultiLSDS:
    return MultiLSDS.from_matrices(
        [random_matrix(rng, dim_x, dim_x, scale) for _ in range(n)],
        [random_matrix(rng, dim_x, dim_nm, scale) for _ in range(n)],
        [random_matrix(rng, dim_np, dim_x, scale) for _ in range(n)],
        [random_matrix(rng, dim_np, dim_nm, scale) for _ in range(n)],
    )


def random_point_in_polydisc(rng, n, radius=0.9):
    r = radius * np.sqrt(rng.uniform(0, 1, n))
    phase = np.exp(2j * np.pi * rng.uniform(0, 1, n))
    return r * phase


def random_torus_point(rng, n):
    return np.exp(2j * np.pi * rng.uniform(0, 1, n))
