"""Dense statevector engine: codewords, Pauli action, Hamiltonian evolution.

This is the numerical oracle for the symplectic layer and the substrate for
metrology runs.  Amplitudes are complex128 over 2^n basis states with the
leftmost Pauli letter acting on the most significant bit of the index.
Commuting Pauli-sum Hamiltonians evolve as exact products of per-term
exponentials (cos - i sin P on each +/-1 eigenspace split); anything else
falls back to a dense Hermitian eigendecomposition.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from itertools import combinations

import numpy as np

from . import kernels
from .pauli import PauliOperator
from .stabilizer import (
    Classification,
    ClassificationKind,
    StabilizerCode,
    require_valid,
)

DENSE_QUBIT_LIMIT = 10
COMMUTING_QUBIT_LIMIT = 16
NORM_TOL = 1e-9
ORACLE_TOL = 1e-9


@dataclass(eq=False)
class StateVector:
    """Dense n-qubit state; treat as immutable (operations return new states)."""

    n: int
    amplitudes: np.ndarray

    def __post_init__(self):
        amps = np.asarray(self.amplitudes, dtype=np.complex128)
        if amps.shape != (1 << self.n,):
            raise ValueError(f"expected {1 << self.n} amplitudes for n={self.n}, got {amps.shape}")
        self.amplitudes = amps

    @classmethod
    def basis_state(cls, n: int, index: int) -> "StateVector":
        amps = np.zeros(1 << n, dtype=np.complex128)
        amps[index] = 1.0
        return cls(n, amps)

    def norm(self) -> float:
        return float(np.linalg.norm(self.amplitudes))

    def copy(self) -> "StateVector":
        return StateVector(self.n, self.amplitudes.copy())


@dataclass(frozen=True)
class SignalHamiltonian:
    """Pauli-sum Hamiltonian: a tuple of (coefficient, Hermitian operator) terms."""

    terms: tuple[tuple[float, PauliOperator], ...]

    def __post_init__(self):
        coerced = tuple((float(c), op) for c, op in self.terms)
        if not coerced:
            raise ValueError("a signal Hamiltonian needs at least one term")
        n = coerced[0][1].n
        for c, op in coerced:
            if not math.isfinite(c):
                raise ValueError(f"non-finite coefficient {c!r}")
            if op.n != n:
                raise ValueError(f"term {op} has size {op.n}, expected {n}")
            if not (op.is_hermitian and op.sign in (1, -1)):
                raise ValueError(f"term {op} is not Hermitian with a real sign")
        object.__setattr__(self, "terms", coerced)

    @classmethod
    def from_strings(cls, terms) -> "SignalHamiltonian":
        from .pauli import parse

        return cls(tuple((float(c), parse(s)) for c, s in terms))

    @property
    def n(self) -> int:
        return self.terms[0][1].n

    def __len__(self) -> int:
        return len(self.terms)

    def scaled(self, factor: float) -> "SignalHamiltonian":
        return SignalHamiltonian(tuple((c * factor, op) for c, op in self.terms))

    def all_commuting(self) -> bool:
        return all(a.commutes_with(b) for (_, a), (_, b) in combinations(self.terms, 2))

    def term_arrays(self):
        xs = np.array([op.x_bits for _, op in self.terms], dtype=np.int64)
        zs = np.array([op.z_bits for _, op in self.terms], dtype=np.int64)
        phases = np.array([_phase_of(op) for _, op in self.terms], dtype=np.complex128)
        coeffs = np.array([c for c, _ in self.terms], dtype=np.float64)
        return xs, zs, phases, coeffs

    def to_matrix(self) -> np.ndarray:
        mat = np.zeros((1 << self.n, 1 << self.n), dtype=np.complex128)
        for c, op in self.terms:
            mat += c * op.to_matrix()
        return mat


def _phase_of(op: PauliOperator) -> complex:
    return (1 + 0j, 1j, -1 + 0j, -1j)[op.phase_exp]


def _check_dims(state: StateVector, op: PauliOperator) -> None:
    if state.n != op.n:
        raise ValueError(f"size mismatch: state n={state.n}, operator n={op.n}")


def apply_pauli(state: StateVector, op: PauliOperator) -> StateVector:
    """Exact signed action of a Pauli word; norm preserving."""
    _check_dims(state, op)
    return StateVector(state.n, kernels.pauli_apply(state.amplitudes, op.x_bits, op.z_bits, _phase_of(op)))


def expectation(state: StateVector, op: PauliOperator) -> float:
    """<psi| O |psi> for a Hermitian Pauli word; real within 1e-9."""
    _check_dims(state, op)
    if not op.is_hermitian:
        raise ValueError(f"expectation requires a Hermitian operator, got {op}")
    value = kernels.pauli_expectation(state.amplitudes, op.x_bits, op.z_bits, _phase_of(op))
    return float(np.real(value))


def evolve(state: StateVector, hamiltonian: SignalHamiltonian, tau: float) -> StateVector:
    """exp(-i H tau)|psi>; exact per-term product when the terms commute."""
    if state.n != hamiltonian.n:
        raise ValueError(f"size mismatch: state n={state.n}, Hamiltonian n={hamiltonian.n}")
    if tau == 0.0:
        return state.copy()
    if hamiltonian.all_commuting():
        if state.n > COMMUTING_QUBIT_LIMIT:
            raise ValueError(
                f"commuting-term evolution limited to n <= {COMMUTING_QUBIT_LIMIT}, got n={state.n}"
            )
        xs, zs, phases, coeffs = hamiltonian.term_arrays()
        amps = kernels.evolve_terms(state.amplitudes, xs, zs, phases, coeffs * tau)
        return StateVector(state.n, amps)
    if state.n > DENSE_QUBIT_LIMIT:
        raise ValueError(
            f"dense matrix exponential limited to n <= {DENSE_QUBIT_LIMIT}, got n={state.n}"
        )
    eigvals, eigvecs = np.linalg.eigh(hamiltonian.to_matrix())
    rotated = eigvecs.conj().T @ state.amplitudes
    amps = eigvecs @ (np.exp(-1j * eigvals * tau) * rotated)
    return StateVector(state.n, amps)


@lru_cache(maxsize=None)
def _codeword_amplitudes(code: StabilizerCode) -> tuple[np.ndarray, np.ndarray]:
    require_valid(code)
    if code.n > DENSE_QUBIT_LIMIT:
        raise ValueError(f"codeword construction limited to n <= {DENSE_QUBIT_LIMIT}")
    dim = 1 << code.n

    def apply(amps, op):
        return kernels.pauli_apply(amps, op.x_bits, op.z_bits, _phase_of(op))

    # project computational basis states until one survives Prod (I+S_i)/2
    image = None
    for b in range(dim):
        v = np.zeros(dim, dtype=np.complex128)
        v[b] = 1.0
        for g in code.generators:
            v = 0.5 * (v + apply(v, g))
        nrm = np.linalg.norm(v)
        if nrm > 1e-9:
            image = v / nrm
            break
    if image is None:
        raise ValueError(f"projector annihilated every basis state; malformed code {code.name!r}")

    zimg = apply(image, code.logical_z)
    plus = 0.5 * (image + zimg)
    minus = 0.5 * (image - zimg)
    if np.linalg.norm(plus) >= np.linalg.norm(minus):
        a0 = plus / np.linalg.norm(plus)
        a1 = apply(a0, code.logical_x)
    else:
        a1 = minus / np.linalg.norm(minus)
        a0 = apply(a1, code.logical_x)

    # construction sanity: stabilized, Z/X actions, orthonormal
    for g in code.generators:
        for a in (a0, a1):
            if np.linalg.norm(apply(a, g) - a) > NORM_TOL:
                raise ValueError(f"codeword not stabilized by {g}")
    if (
        np.linalg.norm(apply(a0, code.logical_z) - a0) > NORM_TOL
        or np.linalg.norm(apply(a1, code.logical_z) + a1) > NORM_TOL
        or np.linalg.norm(apply(a0, code.logical_x) - a1) > NORM_TOL
        or abs(np.vdot(a0, a1)) > NORM_TOL
    ):
        raise ValueError(f"codeword construction failed logical consistency for {code.name!r}")
    a0.setflags(write=False)
    a1.setflags(write=False)
    return a0, a1


def codespace_basis(code: StabilizerCode) -> tuple[StateVector, StateVector]:
    """Orthonormal (|0bar>, |1bar>) with S_i = +1, Zbar = diag(+1, -1), Xbar swapping."""
    a0, a1 = _codeword_amplitudes(code)
    return StateVector(code.n, a0.copy()), StateVector(code.n, a1.copy())


def logical_action_oracle(code: StabilizerCode, p: PauliOperator) -> Classification:
    """Classify ``p`` by its measured action on the codewords.

    Applies p to |0bar> and |1bar>; if any amplitude leaks out of the
    codespace the operator is detectable, otherwise the 2x2 matrix of
    overlaps is matched against +/- {I, X, Y, Z}.  Independent of the
    symplectic path in stabilizer.classify.
    """
    require_valid(code)
    if p.n != code.n:
        raise ValueError(f"operator size mismatch: n={p.n} vs code n={code.n}")
    if not p.is_hermitian:
        raise ValueError(f"oracle requires a Hermitian operator, got {p}")
    a0, a1 = _codeword_amplitudes(code)
    u0 = kernels.pauli_apply(a0, p.x_bits, p.z_bits, _phase_of(p))
    u1 = kernels.pauli_apply(a1, p.x_bits, p.z_bits, _phase_of(p))
    m = np.array(
        [[np.vdot(a0, u0), np.vdot(a0, u1)], [np.vdot(a1, u0), np.vdot(a1, u1)]]
    )
    leak = 2.0 - float(np.sum(np.abs(m) ** 2))
    if leak > ORACLE_TOL:
        return Classification(ClassificationKind.DETECTABLE)
    paulis = {
        "I": np.eye(2),
        "X": np.array([[0.0, 1.0], [1.0, 0.0]]),
        "Y": np.array([[0.0, -1j], [1j, 0.0]]),
        "Z": np.array([[1.0, 0.0], [0.0, -1.0]]),
    }
    for letter, mat in paulis.items():
        coeff = complex(np.trace(mat.conj().T @ m)) / 2.0
        if abs(abs(coeff) - 1.0) < 1e-6:
            if abs(coeff.imag) > 1e-6:
                raise AssertionError(f"non-real logical action {coeff} for Hermitian {p}")
            kind = (
                ClassificationKind.STABILIZER if letter == "I" else ClassificationKind.LOGICAL_ACTION
            )
            return Classification(kind, letter, int(round(coeff.real)))
    raise AssertionError(f"codespace action of {p} matched no signed Pauli: {m}")
