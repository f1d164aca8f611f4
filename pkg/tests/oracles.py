"""Independent reference computations used by the tests.

Nothing here imports the package's numerical routines.
"""
import numpy as np


def bessel_quadrature(n, x, points=4096):
    """J_n(x) = (1/2pi) int_0^2pi cos(n t - x sin t) dt by the periodic trapezoid rule."""
    t = np.arange(points) * 2 * np.pi / points
    return float(np.mean(np.cos(n * t - x * np.sin(t))))


def basis_ket(bits, photons, n_max):
    """|b_0 .. b_{N-1}, n> built factor by factor (qubit basis g=0, e=1)."""
    ket = np.array([1.0 + 0j])
    for b in bits:
        q = np.zeros(2, complex)
        q[b] = 1
        ket = np.kron(ket, q)
    c = np.zeros(n_max + 1, complex)
    c[photons] = 1
    return np.kron(ket, c)


def jc_matrix_elements(deltas, Delta, g, n_max):
    """Static Hamiltonian assembled from <m|H|n> using the ladder rules directly."""
    import itertools

    N = len(deltas)
    states = [(bits, n) for bits in itertools.product((0, 1), repeat=N) for n in range(n_max + 1)]
    index = {s: k for k, s in enumerate(states)}
    H = np.zeros((len(states), len(states)), complex)
    for (bits, n), k in index.items():
        H[k, k] = sum(d * b for d, b in zip(deltas, bits)) - Delta * n
        for i in range(N):
            # sigma_i a^dag : qubit i e->g, photon n -> n+1
            if bits[i] == 1 and n < n_max:
                nb = list(bits)
                nb[i] = 0
                H[index[(tuple(nb), n + 1)], k] += g * np.sqrt(n + 1)
            # sigma_i^dag a : qubit i g->e, photon n -> n-1
            if bits[i] == 0 and n > 0:
                nb = list(bits)
                nb[i] = 1
                H[index[(tuple(nb), n - 1)], k] += g * np.sqrt(n)
    return H


def rabi_first_max_with_decay(G, gamma):
    """First maximum of exp(-gamma t) sin^2(G t): tan(G t) = 2G/gamma."""
    return np.arctan2(2 * G, gamma) / G
