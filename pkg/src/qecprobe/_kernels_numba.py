"""Numba-compiled implementations of the numeric hot kernels.

Loop formulations of the same operations as ``_kernels_numpy`` (identical
signatures, identical uniform-consumption order).  Compiled lazily on first
call; ``cache=True`` persists the machine code across processes.
"""

from __future__ import annotations

import numpy as np
from numba import njit


@njit(cache=True)
def _apply_into(src_amps, out, x, z, phase):
    """out[j] = phase * (-1)^parity((j^x) & z) * src_amps[j^x]."""
    dim = src_amps.shape[0]
    for j in range(dim):
        s = j ^ x
        v = s & z
        v ^= v >> 8
        v ^= v >> 4
        v ^= v >> 2
        v ^= v >> 1
        if v & 1:
            out[j] = -phase * src_amps[s]
        else:
            out[j] = phase * src_amps[s]


@njit(cache=True)
def pauli_apply(amps, x, z, phase):
    out = np.empty_like(amps)
    _apply_into(amps, out, x, z, phase)
    return out


@njit(cache=True)
def pauli_expectation(amps, x, z, phase):
    dim = amps.shape[0]
    acc = 0.0 + 0.0j
    for j in range(dim):
        s = j ^ x
        v = s & z
        v ^= v >> 8
        v ^= v >> 4
        v ^= v >> 2
        v ^= v >> 1
        if v & 1:
            acc += np.conj(amps[j]) * (-phase * amps[s])
        else:
            acc += np.conj(amps[j]) * (phase * amps[s])
    return acc


@njit(cache=True)
def evolve_terms(amps, xs, zs, phases, thetas):
    psi = amps.astype(np.complex128).copy()
    tmp = np.empty_like(psi)
    dim = psi.shape[0]
    for t in range(xs.shape[0]):
        _apply_into(psi, tmp, xs[t], zs[t], phases[t])
        c = np.cos(thetas[t])
        s = np.sin(thetas[t])
        for j in range(dim):
            psi[j] = c * psi[j] - 1j * s * tmp[j]
    return psi


@njit(cache=True)
def run_trajectories(
    probe,
    ideal,
    cycles,
    sig_x, sig_z, sig_phase, sig_theta,
    err_x, err_z, err_phase, prob,
    gen_x, gen_z, gen_phase,
    corr_x, corr_z, corr_phase, corr_valid,
    read_x, read_z, read_phase,
    uniforms,
):
    shots = uniforms.shape[0]
    dim = probe.shape[0]

    exp_out = np.empty(shots, dtype=np.float64)
    infid = np.empty(shots, dtype=np.float64)
    err_count = np.zeros(shots, dtype=np.int64)
    synd_count = np.zeros(shots, dtype=np.int64)
    fail_count = np.zeros(shots, dtype=np.int64)

    cos_t = np.cos(sig_theta)
    sin_t = np.sin(sig_theta)

    psi = np.empty(dim, dtype=np.complex128)
    tmp = np.empty(dim, dtype=np.complex128)

    for i in range(shots):
        for j in range(dim):
            psi[j] = probe[j]
        u = 0
        for _ in range(cycles):
            for t in range(sig_x.shape[0]):
                _apply_into(psi, tmp, sig_x[t], sig_z[t], sig_phase[t])
                c = cos_t[t]
                s = sin_t[t]
                for j in range(dim):
                    psi[j] = c * psi[j] - 1j * s * tmp[j]
            for e in range(err_x.shape[0]):
                if uniforms[i, u] < prob:
                    _apply_into(psi, tmp, err_x[e], err_z[e], err_phase[e])
                    psi, tmp = tmp, psi
                    err_count[i] += 1
                u += 1
            synd = 0
            for g in range(gen_x.shape[0]):
                _apply_into(psi, tmp, gen_x[g], gen_z[g], gen_phase[g])
                expg = 0.0
                for j in range(dim):
                    expg += (np.conj(psi[j]) * tmp[j]).real
                p_plus = 0.5 * (1.0 + expg)
                if p_plus < 0.0:
                    p_plus = 0.0
                elif p_plus > 1.0:
                    p_plus = 1.0
                if uniforms[i, u] < p_plus:
                    outcome = 1.0
                else:
                    outcome = -1.0
                    synd |= 1 << g
                u += 1
                nrm2 = 0.0
                for j in range(dim):
                    psi[j] = 0.5 * (psi[j] + outcome * tmp[j])
                    nrm2 += (np.conj(psi[j]) * psi[j]).real
                inv = 1.0 / np.sqrt(nrm2)
                for j in range(dim):
                    psi[j] *= inv
            if synd != 0:
                synd_count[i] += 1
                if corr_valid[synd]:
                    _apply_into(psi, tmp, corr_x[synd], corr_z[synd], corr_phase[synd])
                    psi, tmp = tmp, psi
                else:
                    fail_count[i] += 1

        _apply_into(psi, tmp, read_x, read_z, read_phase)
        acc = 0.0
        ov = 0.0 + 0.0j
        for j in range(dim):
            acc += (np.conj(psi[j]) * tmp[j]).real
            ov += np.conj(ideal[j]) * psi[j]
        exp_out[i] = acc
        leak = 1.0 - (ov.real * ov.real + ov.imag * ov.imag)
        infid[i] = leak if leak > 0.0 else 0.0

    return exp_out, infid, err_count, synd_count, fail_count
