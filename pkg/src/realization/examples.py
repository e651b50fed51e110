# examples.py
"""Two conservative realizations of theta(z) = z_1 z_2 with state dimensions 1 and 3."""
from typing import Tuple

import numpy as np

from src.system_core.system import MultiLSDS

R = 1 / np.sqrt(2)


def alpha_system() -> MultiLSDS:
    """zG = [[0, z_2], [z_1, 0]] on C + C."""
    zero = [[0.0]]
    return MultiLSDS.from_matrices(
        a=[zero, zero],
        b=[[[0.0]], [[1.0]]],
        c=[[[1.0]], [[0.0]]],
        d=[zero, zero],
    )


def alpha_prime_system() -> MultiLSDS:
    """Three-dimensional state; every entry is 0 or +-1/sqrt(2)."""
    a1 = [[0, 0, -R],
          [0, 0, 0],
          [0, R, 0]]
    a2 = [[0, 0, 0],
          [0, 0, R],
          [-R, 0, 0]]
    b1 = [[R], [0], [0]]
    b2 = [[0], [R], [0]]
    c1 = [[0, R, 0]]
    c2 = [[R, 0, 0]]
    return MultiLSDS.from_matrices(
        a=[a1, a2], b=[b1, b2], c=[c1, c2], d=[[[0.0]], [[0.0]]])


def builtin_examples() -> Tuple[MultiLSDS, MultiLSDS]:
    return alpha_system(), alpha_prime_system()
