
import numpy as np

from gateforge.matrix import LocalPair, Matrix, OneQubitGate


def random_unitary(n: int, rng: np.random.Generator) -> Matrix:
    """Haar-random n×n unitary.

    QR of a complex Gaussian matrix, with each column of Q rotated by the
    phase of the matching diagonal entry of R.
    """
    z = (rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))) / np.sqrt(2)
    q, r = np.linalg.qr(z)
    d = np.diagonal(r)
    return q * (d / np.abs(d))


def random_one_qubit(rng: np.random.Generator) -> OneQubitGate:
    return OneQubitGate(random_unitary(2, rng))


def random_local_pair(rng: np.random.Generator) -> LocalPair:
    return LocalPair(random_one_qubit(rng), random_one_qubit(rng))


def random_product_state(rng: np.random.Generator) -> Matrix:
    a = random_unitary(2, rng)[:, 0]
    b = random_unitary(2, rng)[:, 0]
    return np.kron(a, b)
