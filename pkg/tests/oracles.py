"""Independent slow routes the tests compare the library against.

Everything here is deliberately naive: occupation-number algebra written
out term by term, dense kron-product operators, literal matrix powers,
library quadrature with the generic cauchy weight.  None of it shares
code with the closed forms under test.
"""

import math
from math import comb, factorial

import numpy as np

from decoheren import full_rho
from decoheren.evolution import left_counts


def occupation_coeffs_decoherence(n_left_ket, n_left_bra, total):
    """(A1, A+, A-) straight from the four occupation numbers."""
    nl, nlp = n_left_ket, n_left_bra
    nr, nrp = total - nl, total - nlp
    a1 = -((nl - nlp) ** 2 + (nr - nrp) ** 2)
    a_plus = 2 * nr * nlp - nr * nl - nrp * nlp
    a_minus = 2 * nl * nrp - nl * nr - nlp * nrp
    return a1, a_plus, a_minus


def occupation_coeffs_unitary(n_left_ket, n_left_bra, total):
    """(B1, B+, B-) straight from the four occupation numbers."""
    nl, nlp = n_left_ket, n_left_bra
    nr, nrp = total - nl, total - nlp
    b1 = (nl * nl + nr * nr) - (nlp * nlp + nrp * nrp)
    b_pm = nl * nr - nlp * nrp
    return b1, b_pm, b_pm


def two_mode_positions(flags, dx):
    """3D positions on the two arms; a truthy flag puts the atom on the left.

    The separation axis is z with the left arm at +dx/2, so for any probe
    momentum q the product q . (x_L - x_R) equals q_z * dx.
    """
    return [
        (0.0, 0.0, 0.5 * dx) if f else (0.0, 0.0, -0.5 * dx) for f in flags
    ]


def arrangement(bits, width):
    """Width-long flag list from a bitmask, lowest bit first."""
    return [bool((bits >> k) & 1) for k in range(width)]


def dense_port_operator(n_atoms, a_left, a_right):
    """O = sum_i |A_i><A_i| as an explicit kron-product sum.

    Index convention matches the library blocks: atom 0 is the most
    significant bit, and bit value 0 means the left arm.
    """
    single = np.array(
        [
            [abs(a_left) ** 2, a_left * np.conj(a_right)],
            [a_right * np.conj(a_left), abs(a_right) ** 2],
        ],
        dtype=complex,
    )
    eye = np.eye(2, dtype=complex)
    total = np.zeros((2 ** n_atoms, 2 ** n_atoms), dtype=complex)
    for i in range(n_atoms):
        op = np.array([[1.0]], dtype=complex)
        for j in range(n_atoms):
            op = np.kron(op, single if j == i else eye)
        total += op
    return total


def dense_moments(spec, params, a_left, a_right, eta_max):
    """Raw moments Tr[rho O^eta] for eta = 1..eta_max by literal matrix powers."""
    rho = full_rho(spec, params).entries
    op = dense_port_operator(spec.n_atoms, a_left, a_right)
    out = []
    power = np.eye(op.shape[0], dtype=complex)
    for _ in range(eta_max):
        power = power @ op
        out.append(float(np.real(np.sum(rho * power.T))))
    return out


def closed_form_block(alpha, element_fn):
    """Dense alpha-atom matrix assembled from a per-label closed form.

    element_fn(alpha, n_left_ket, n_left_bra) supplies one value per label
    class; the (alpha + 1)^2 classes are scattered onto all 4^alpha entries
    through the left-count index, so an entry-wise comparison against a
    partial trace still checks every entry.
    """
    counts = left_counts(alpha)
    table = np.empty((alpha + 1, alpha + 1), dtype=complex)
    for ket in range(alpha + 1):
        for bra in range(alpha + 1):
            table[ket, bra] = element_fn(alpha, ket, bra)
    return table[np.ix_(counts, counts)]


def stirling2(eta, alpha):
    """Partitions of an eta-set into alpha blocks, by the explicit alternating sum."""
    total = sum(
        (-1) ** j * comb(alpha, j) * (alpha - j) ** eta for j in range(alpha + 1)
    )
    return total // factorial(alpha)


def pv_gauss_quad(v0, mu, sigma):
    """PV integral of a normal density against 1/(v - v0), by cauchy-weight quad."""
    from scipy.integrate import quad

    def dens(v):
        return math.exp(-0.5 * ((v - mu) / sigma) ** 2) / (
            sigma * math.sqrt(2.0 * math.pi)
        )

    lo = min(v0, mu) - 14.0 * sigma
    hi = max(v0, mu) + 14.0 * sigma
    val, _ = quad(
        dens, lo, hi, weight="cauchy", wvar=v0, epsabs=1e-14, epsrel=1e-12, limit=400
    )
    return val
