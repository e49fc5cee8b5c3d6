import math

import numpy as np
import pytest
from hypothesis import settings
from scipy.linalg import expm

settings.register_profile("repo", deadline=None, max_examples=60)
settings.load_profile("repo")

PAULI_X = np.array([[0, 1], [1, 0]], dtype=complex)
PAULI_Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
PAULI_Z = np.array([[1, 0], [0, -1]], dtype=complex)
HAD = np.array([[1, 1], [1, -1]], dtype=complex) / math.sqrt(2)


def rot(axis: np.ndarray, angle: float) -> np.ndarray:
    """exp(-i a P / 2) by matrix exponential; independent of the library's closed forms."""
    return expm(-0.5j * angle * axis)


def embed(op: np.ndarray, target: int, n: int) -> np.ndarray:
    """Full 2^n operator with ``op`` on ``target`` (qubit 0 = least significant bit)."""
    out = np.array([[1.0 + 0j]])
    for k in range(n):
        out = np.kron(op if k == target else np.eye(2), out)
    return out


def cz_matrix(a: int, b: int, n: int) -> np.ndarray:
    idx = np.arange(1 << n)
    return np.diag(np.where(((idx >> a) & 1) & ((idx >> b) & 1), -1.0, 1.0)).astype(complex)


def phase_equal(a: np.ndarray, b: np.ndarray, tol: float = 1e-9) -> bool:
    return abs(abs(np.vdot(a, b)) - np.linalg.norm(a) * np.linalg.norm(b)) < tol


@pytest.fixture
def rng():
    return np.random.default_rng(12345)
