"""Numba inner loops for state propagation.

The sector Hamiltonian is H(t) = g(t) A + J(t) B + diag, with A, B fixed
real-sparse templates.  The integrator is classical fixed-step RK4 with
coupling values supplied per step as the triple (t, t+dt/2, t+dt); keeping
the endpoint value per-step (instead of shared between neighbors) lets
piecewise-constant noise keep its left-limit inside each step, so the
scheme stays fourth-order across noise-grid boundaries.
"""
import numpy as np
from numba import njit


@njit(cache=True)
def _matvec(data, indices, indptr, x, out):
    for i in range(out.shape[0]):
        acc = 0.0 + 0.0j
        for p in range(indptr[i], indptr[i + 1]):
            acc += data[p] * x[indices[p]]
        out[i] = acc


@njit(cache=True)
def _lindblad_rhs(a_data, a_indices, a_indptr, b_data, b_indices, b_indptr,
                  diag, j_data, j_indices, j_indptr, decay_diag,
                  rho, g, j, u, x, xt, out):
    """Master-equation right-hand side for Hermitian rho.

    H = g A + j B + diag; jump operators come pre-scaled by sqrt(rate), so
    the dissipator is sum_k (L_k rho L_k^dag) - (decay_diag anticommutator),
    with decay_diag = diag(sum_k L_k^dag L_k) real.
    """
    n = rho.shape[0]
    # u = (g A + j B) rho
    for i in range(n):
        for k in range(n):
            u[i, k] = 0.0 + 0.0j
        for p in range(a_indptr[i], a_indptr[i + 1]):
            v = g * a_data[p]
            row = a_indices[p]
            for k in range(n):
                u[i, k] += v * rho[row, k]
        for p in range(b_indptr[i], b_indptr[i + 1]):
            v = j * b_data[p]
            row = b_indices[p]
            for k in range(n):
                u[i, k] += v * rho[row, k]
    # commutator (using rho = rho^dag) plus the anticommutator decay term
    for i in range(n):
        for k in range(n):
            out[i, k] = (-1j * (u[i, k] - np.conj(u[k, i])
                               + (diag[i] - diag[k]) * rho[i, k])
                         - 0.5 * (decay_diag[i] + decay_diag[k]) * rho[i, k])
    # jump sandwiches: out += L (L rho)^dag for each pre-scaled operator
    n_ops = j_indptr.shape[0]
    for o in range(n_ops):
        for i in range(n):
            for k in range(n):
                x[i, k] = 0.0 + 0.0j
            for p in range(j_indptr[o, i], j_indptr[o, i + 1]):
                v = j_data[p]
                row = j_indices[p]
                for k in range(n):
                    x[i, k] += v * rho[row, k]
        for i in range(n):
            for k in range(n):
                xt[i, k] = np.conj(x[k, i])
        for i in range(n):
            for p in range(j_indptr[o, i], j_indptr[o, i + 1]):
                v = j_data[p]
                row = j_indices[p]
                for k in range(n):
                    out[i, k] += v * xt[row, k]


@njit(cache=True)
def lindblad_rk4(a_data, a_indices, a_indptr, b_data, b_indices, b_indptr,
                 diag, j_data, j_indices, j_indptr, decay_diag, exc_diag,
                 rho0, g_stages, j_stages, dt, n_steps, sample_steps):
    """Dense-RK4 master-equation propagation with per-step symmetrization.

    Returns the final density matrix plus trace and total-excitation
    samples at ``sample_steps`` (strictly increasing indices in
    [0, n_steps]).
    """
    n = rho0.shape[0]
    rho = rho0.copy()
    u = np.empty((n, n), dtype=np.complex128)
    x = np.empty((n, n), dtype=np.complex128)
    xt = np.empty((n, n), dtype=np.complex128)
    y = np.empty((n, n), dtype=np.complex128)
    k1 = np.empty((n, n), dtype=np.complex128)
    k2 = np.empty((n, n), dtype=np.complex128)
    k3 = np.empty((n, n), dtype=np.complex128)
    k4 = np.empty((n, n), dtype=np.complex128)
    n_samples = sample_steps.shape[0]
    traces = np.empty(n_samples)
    excitations = np.empty(n_samples)
    k_samp = 0
    for s in range(n_steps + 1):
        if k_samp < n_samples and sample_steps[k_samp] == s:
            tr = 0.0
            exc = 0.0
            for i in range(n):
                tr += rho[i, i].real
                exc += exc_diag[i] * rho[i, i].real
            traces[k_samp] = tr
            excitations[k_samp] = exc
            k_samp += 1
        if s == n_steps:
            break
        g1 = g_stages[s, 0]
        jj1 = j_stages[s, 0]
        g2 = g_stages[s, 1]
        jj2 = j_stages[s, 1]
        g3 = g_stages[s, 2]
        jj3 = j_stages[s, 2]
        _lindblad_rhs(a_data, a_indices, a_indptr, b_data, b_indices, b_indptr,
                      diag, j_data, j_indices, j_indptr, decay_diag,
                      rho, g1, jj1, u, x, xt, k1)
        for i in range(n):
            for k in range(n):
                y[i, k] = rho[i, k] + 0.5 * dt * k1[i, k]
        _lindblad_rhs(a_data, a_indices, a_indptr, b_data, b_indices, b_indptr,
                      diag, j_data, j_indices, j_indptr, decay_diag,
                      y, g2, jj2, u, x, xt, k2)
        for i in range(n):
            for k in range(n):
                y[i, k] = rho[i, k] + 0.5 * dt * k2[i, k]
        _lindblad_rhs(a_data, a_indices, a_indptr, b_data, b_indices, b_indptr,
                      diag, j_data, j_indices, j_indptr, decay_diag,
                      y, g2, jj2, u, x, xt, k3)
        for i in range(n):
            for k in range(n):
                y[i, k] = rho[i, k] + dt * k3[i, k]
        _lindblad_rhs(a_data, a_indices, a_indptr, b_data, b_indices, b_indptr,
                      diag, j_data, j_indices, j_indptr, decay_diag,
                      y, g3, jj3, u, x, xt, k4)
        for i in range(n):
            for k in range(n):
                rho[i, k] = rho[i, k] + (dt / 6.0) * (
                    k1[i, k] + 2.0 * k2[i, k] + 2.0 * k3[i, k] + k4[i, k])
        # project out the rounding-level Hermiticity skew
        for i in range(n):
            rho[i, i] = complex(rho[i, i].real, 0.0)
            for k in range(i + 1, n):
                avg = 0.5 * (rho[i, k] + np.conj(rho[k, i]))
                rho[i, k] = avg
                rho[k, i] = np.conj(avg)
    return rho, traces, excitations


@njit(cache=True)
def rk4_propagate(a_data, a_indices, a_indptr,
                  b_data, b_indices, b_indptr,
                  diag, psi0, g_stages, j_stages, dt, n_steps, sample_steps):
    """Propagate i d|psi>/dt = H(t)|psi> and record states at sample steps.

    ``g_stages``/``j_stages`` have shape (n_steps, 3): coupling values at
    the start, midpoint and end of each step.  ``sample_steps`` must be
    strictly increasing step indices in [0, n_steps].
    """
    n = psi0.shape[0]
    psi = psi0.copy()
    u = np.empty(n, dtype=np.complex128)
    v = np.empty(n, dtype=np.complex128)
    y = np.empty(n, dtype=np.complex128)
    k1 = np.empty(n, dtype=np.complex128)
    k2 = np.empty(n, dtype=np.complex128)
    k3 = np.empty(n, dtype=np.complex128)
    k4 = np.empty(n, dtype=np.complex128)
    out = np.empty((sample_steps.shape[0], n), dtype=np.complex128)
    k_samp = 0
    for s in range(n_steps):
        if k_samp < sample_steps.shape[0] and sample_steps[k_samp] == s:
            out[k_samp] = psi
            k_samp += 1
        g1 = g_stages[s, 0]
        j1 = j_stages[s, 0]
        g2 = g_stages[s, 1]
        j2 = j_stages[s, 1]
        g3 = g_stages[s, 2]
        j3 = j_stages[s, 2]
        _matvec(a_data, a_indices, a_indptr, psi, u)
        _matvec(b_data, b_indices, b_indptr, psi, v)
        for i in range(n):
            k1[i] = -1j * (g1 * u[i] + j1 * v[i] + diag[i] * psi[i])
            y[i] = psi[i] + 0.5 * dt * k1[i]
        _matvec(a_data, a_indices, a_indptr, y, u)
        _matvec(b_data, b_indices, b_indptr, y, v)
        for i in range(n):
            k2[i] = -1j * (g2 * u[i] + j2 * v[i] + diag[i] * y[i])
            y[i] = psi[i] + 0.5 * dt * k2[i]
        _matvec(a_data, a_indices, a_indptr, y, u)
        _matvec(b_data, b_indices, b_indptr, y, v)
        for i in range(n):
            k3[i] = -1j * (g2 * u[i] + j2 * v[i] + diag[i] * y[i])
            y[i] = psi[i] + dt * k3[i]
        _matvec(a_data, a_indices, a_indptr, y, u)
        _matvec(b_data, b_indices, b_indptr, y, v)
        for i in range(n):
            k4[i] = -1j * (g3 * u[i] + j3 * v[i] + diag[i] * y[i])
            psi[i] = psi[i] + (dt / 6.0) * (k1[i] + 2.0 * k2[i]
                                            + 2.0 * k3[i] + k4[i])
    if k_samp < sample_steps.shape[0]:
        out[k_samp] = psi
    return out
