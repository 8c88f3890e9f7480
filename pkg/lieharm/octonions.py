"""Split octonions via the Cayley-Dickson doubling of the quaternions.

Basis order is (1, i, j, k, l, il, jl, kl). The product

    (a, b)(c, d) = (ac + d̄b, da + bc̄)

has l² = +1, so the norm form x x̄ has signature (4, 4): positive on
(1, i, j, k) and negative on (l, il, jl, kl).
"""
import numpy as np

DIM = 8
IMAGINARY = tuple(range(1, DIM))
NORM_SIGNS = np.array([1, 1, 1, 1, -1, -1, -1, -1], dtype=float)


def quaternion_product(p, q):
    a0, a1, a2, a3 = p
    b0, b1, b2, b3 = q
    return np.array([
        a0 * b0 - a1 * b1 - a2 * b2 - a3 * b3,
        a0 * b1 + a1 * b0 + a2 * b3 - a3 * b2,
        a0 * b2 - a1 * b3 + a2 * b0 + a3 * b1,
        a0 * b3 + a1 * b2 - a2 * b1 + a3 * b0,
    ])


def quaternion_conjugate(q):
    q = np.asarray(q, dtype=float)
    return np.array([q[0], -q[1], -q[2], -q[3]])


def product(x, y):
    """Split-octonion product of two length-8 coordinate vectors."""
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    a, b = x[:4], x[4:]
    c, d = y[:4], y[4:]
    first = quaternion_product(a, c) + quaternion_product(quaternion_conjugate(d), b)
    second = quaternion_product(d, a) + quaternion_product(b, quaternion_conjugate(c))
    return np.concatenate([first, second])


def norm(x) -> float:
    x = np.asarray(x, dtype=float)
    return float(np.sum(NORM_SIGNS * x * x))


def structure_constants() -> np.ndarray:
    """table[a, b, c] is the e_c coefficient of e_a e_b."""
    eye = np.eye(DIM)
    table = np.zeros((DIM, DIM, DIM))
    for a in range(DIM):
        for b in range(DIM):
            table[a, b] = product(eye[a], eye[b])
    return table


def derivation_constraints() -> np.ndarray:
    """Linear map from 7x7 matrices D on Im(O) to the defects of the Leibniz rule.

    D acts on columns (D e_j = sum_i D[i, j] e_i) and kills 1. Column m of
    the returned matrix is the flattened defect D(xy) - D(x)y - xD(y), taken
    over imaginary basis pairs, for the m-th unit matrix D.
    """
    table = structure_constants()
    imag = np.array(IMAGINARY)
    size = len(imag)
    columns = []
    for m in range(size * size):
        D = np.zeros((DIM, DIM))
        D[imag[:, None], imag[None, :]] = np.eye(size * size)[m].reshape(size, size)
        defect = (np.einsum("abc,dc->abd", table, D)
                  - np.einsum("ka,kbd->abd", D, table)
                  - np.einsum("kb,akd->abd", D, table))
        columns.append(defect[np.ix_(imag, imag, range(DIM))].reshape(-1))
    return np.array(columns).T
