"""Pure-numpy implementations of the numeric hot kernels.

Same call signatures as ``_kernels_numba``; ``qecprobe.kernels`` picks one
backend at import time.  States are 1-D complex128 arrays of length 2^n;
Pauli words arrive as (x_bits, z_bits, phase) with phase = i**phase_exp, so
``P|b> = phase * (-1)^parity(b & z) |b ^ x>``.

The trajectory kernel is vectorized across shots (one (shots, dim) array),
which is the fast formulation for numpy; the numba backend loops shot by
shot instead.  Both consume the pre-drawn uniforms in the identical
(cycle, error-op, generator) order, so they sample the same physics.
"""

from __future__ import annotations

import numpy as np


def _parity(v):
    """Bitwise parity, elementwise; valid for values below 2^16."""
    v = v ^ (v >> 8)
    v = v ^ (v >> 4)
    v = v ^ (v >> 2)
    v = v ^ (v >> 1)
    return v & 1


_ARANGE_CACHE: dict[int, np.ndarray] = {}


def _indices(dim: int) -> np.ndarray:
    idx = _ARANGE_CACHE.get(dim)
    if idx is None:
        idx = np.arange(dim, dtype=np.int64)
        idx.setflags(write=False)
        _ARANGE_CACHE[dim] = idx
    return idx


def _action(dim: int, x: int, z: int, phase: complex):
    """Source indices and per-index factors implementing one Pauli word."""
    idx = _indices(dim)
    src = idx ^ x
    fac = phase * (1.0 - 2.0 * _parity(src & z))
    return src, fac


def pauli_apply(amps: np.ndarray, x: int, z: int, phase: complex) -> np.ndarray:
    src, fac = _action(amps.shape[0], x, z, phase)
    return amps[src] * fac


def pauli_expectation(amps: np.ndarray, x: int, z: int, phase: complex) -> complex:
    return np.vdot(amps, pauli_apply(amps, x, z, phase))


def evolve_terms(amps, xs, zs, phases, thetas) -> np.ndarray:
    """Apply exp(-i theta_t P_t) for each term in order (P_t^2 = I assumed)."""
    psi = np.array(amps, dtype=np.complex128, copy=True)
    for t in range(len(xs)):
        rotated = pauli_apply(psi, int(xs[t]), int(zs[t]), complex(phases[t]))
        psi = np.cos(thetas[t]) * psi - 1j * np.sin(thetas[t]) * rotated
    return psi


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
    """Stochastic error/correction trajectories for a batch of shots.

    Per shot and cycle: evolve one signal segment, apply each error op with
    probability ``prob``, measure every generator projectively (Born rule),
    then apply the lookup-table correction for the observed syndrome.
    Returns per-shot readout expectations, infidelity against ``ideal``,
    and error/syndrome/decode-failure counts.
    """
    shots = uniforms.shape[0]
    dim = probe.shape[0]
    psi = np.tile(probe, (shots, 1))

    sig = [_action(dim, int(sig_x[t]), int(sig_z[t]), complex(sig_phase[t])) for t in range(len(sig_x))]
    cos_t = np.cos(sig_theta)
    isin_t = 1j * np.sin(sig_theta)
    errs = [_action(dim, int(err_x[e]), int(err_z[e]), complex(err_phase[e])) for e in range(len(err_x))]
    gens = [_action(dim, int(gen_x[g]), int(gen_z[g]), complex(gen_phase[g])) for g in range(len(gen_x))]

    err_count = np.zeros(shots, dtype=np.int64)
    synd_count = np.zeros(shots, dtype=np.int64)
    fail_count = np.zeros(shots, dtype=np.int64)

    u = 0
    for _ in range(cycles):
        for t, (src, fac) in enumerate(sig):
            psi = cos_t[t] * psi - isin_t[t] * (psi[:, src] * fac)
        for src, fac in errs:
            hit = uniforms[:, u] < prob
            u += 1
            if hit.any():
                psi[hit] = psi[hit][:, src] * fac
                err_count[hit] += 1
        synd = np.zeros(shots, dtype=np.int64)
        for gi, (src, fac) in enumerate(gens):
            gpsi = psi[:, src] * fac
            expg = np.einsum("ij,ij->i", psi.conj(), gpsi).real
            p_plus = np.clip(0.5 * (1.0 + expg), 0.0, 1.0)
            minus = uniforms[:, u] >= p_plus
            u += 1
            outcome = np.where(minus, -1.0, 1.0)
            psi = 0.5 * (psi + outcome[:, None] * gpsi)
            norms = np.sqrt(np.einsum("ij,ij->i", psi.conj(), psi).real)
            psi /= norms[:, None]
            synd |= minus.astype(np.int64) << gi
        nontrivial = synd != 0
        synd_count += nontrivial
        if nontrivial.any():
            for s in np.unique(synd[nontrivial]):
                rows = synd == s
                if corr_valid[s]:
                    src, fac = _action(dim, int(corr_x[s]), int(corr_z[s]), complex(corr_phase[s]))
                    psi[rows] = psi[rows][:, src] * fac
                else:
                    fail_count[rows] += 1

    src, fac = _action(dim, int(read_x), int(read_z), complex(read_phase))
    exp_out = np.einsum("ij,ij->i", psi.conj(), psi[:, src] * fac).real
    overlap = psi @ ideal.conj()
    infid = np.maximum(0.0, 1.0 - np.abs(overlap) ** 2)
    return exp_out, infid, err_count, synd_count, fail_count
