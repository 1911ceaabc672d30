"""Phase-estimation experiments on code-protected probes.

The protocol: prepare the logical superposition orthogonal to the signal's
rotation axis, evolve for a time tau under a Pauli-sum signal Hamiltonian
whose terms all act as the same logical rotation, then measure the
conjugate logical operator.  For terms with coefficients c_i acting with
signs s_i the mean readout is cos(2 C xi tau) with C = sum(c_i s_i), so a
C-term signal beats the one-term uncertainty 1/(2 tau) by a factor C.

Uncertainty is quantified two ways: analytically through the projection
noise / derivative quotient (central finite differences on the full
simulation), and empirically through seeded Monte Carlo sampling of the
+/-1 readout, optionally with stochastic Pauli noise interleaved with
projective syndrome measurement and lookup-table correction.

Randomness is counter-based (Philox keyed on the run seed, one pre-drawn
uniform layout per shot index), so results are reproducible and
independent of execution schedule.
"""

from __future__ import annotations

import hashlib
import json
import math
from dataclasses import dataclass
from functools import lru_cache
from itertools import combinations, product

import numpy as np

from . import kernels
from .pauli import PauliOperator, parse
from .simulator import (
    SignalHamiltonian,
    StateVector,
    codespace_basis,
    evolve,
    expectation,
    _phase_of,
)
from .stabilizer import (
    ClassificationKind,
    StabilizerCode,
    classify,
    min_weight_logical,
    require_valid,
)

_READOUT_STREAM = 0x52454144  # distinct Philox key tags per purpose
_TRAJECTORY_STREAM = 0x5452414A

DERIVATIVE_STEP_SCALE = 1e-6
DERIVATIVE_FLOOR = 1e-12

# preparation is a +1 eigenstate of this operator; it doubles as the readout
_READOUT_FOR_LETTER = {"X": "Z", "Y": "Z", "Z": "X"}


def _stream(seed: int, tag: int) -> np.random.Generator:
    return np.random.Generator(np.random.Philox(key=[np.uint64(seed), np.uint64(tag)]))


def readout_uniforms(seed: int, shots: int) -> np.ndarray:
    return _stream(seed, _READOUT_STREAM).random(shots)


def trajectory_uniforms(seed: int, shots: int, draws_per_shot: int) -> np.ndarray:
    return _stream(seed, _TRAJECTORY_STREAM).random((shots, draws_per_shot))


# -- signal setup -------------------------------------------------------------

@dataclass(frozen=True)
class SignalProfile:
    """Per-term classification of a signal Hamiltonian against a code."""

    letter: str | None
    signs: tuple[int, ...]
    effective_coupling: float
    flags: tuple[str, ...]

    @property
    def uniform_logical(self) -> bool:
        return not self.flags

    @property
    def coupling_magnitude(self) -> float:
        return abs(self.effective_coupling)


def signal_profile(code: StabilizerCode, signal: SignalHamiltonian) -> SignalProfile:
    flags: list[str] = []
    letters: list[str] = []
    signs: list[int] = []
    for _, op in signal.terms:
        cl = classify(code, op)
        if cl.kind is not ClassificationKind.LOGICAL_ACTION:
            flags.append(f"signal includes non-logical term {op} ({cl.kind.value})")
            signs.append(0)
        else:
            letters.append(cl.logical_letter)
            signs.append(cl.action_sign)
    if letters and any(l != letters[0] for l in letters):
        flags.append("signal mixes logical letters: " + ",".join(sorted(set(letters))))
    letter = letters[0] if letters and not flags else (letters[0] if letters else None)
    effective = sum(c * s for (c, _), s in zip(signal.terms, signs))
    return SignalProfile(letter, tuple(signs), float(effective), tuple(flags))


def _require_uniform(code, signal) -> SignalProfile:
    profile = signal_profile(code, signal)
    if not profile.uniform_logical:
        raise ValueError("signal is not a uniform logical rotation: " + "; ".join(profile.flags))
    return profile


def logical_z_orbit_signal(code: StabilizerCode) -> SignalHamiltonian:
    """Unit-coefficient cyclic orbit of the weight-minimal logical Z word."""
    rep = min_weight_logical(code, "Z")
    seen = dict.fromkeys(rep.cyclic_shift(s) for s in range(code.n))
    return SignalHamiltonian(tuple((1.0, op) for op in seen))


def prepare_probe(code: StabilizerCode, signal_letter: str = "X") -> StateVector:
    """Probe orthogonal to the rotation axis of a ``signal_letter`` signal.

    X or Y signals start from |0bar> (the +Z logical eigenstate); Z signals
    from the balanced superposition (|0bar> + |1bar>)/sqrt(2) = |+Xbar>.
    """
    b0, b1 = codespace_basis(code)
    if signal_letter in ("X", "Y"):
        return b0
    if signal_letter == "Z":
        return StateVector(code.n, (b0.amplitudes + b1.amplitudes) / math.sqrt(2.0))
    raise ValueError(f"signal letter must be X, Y or Z, got {signal_letter!r}")


def readout_operator(code: StabilizerCode, signal_letter: str) -> PauliOperator:
    conjugate = _READOUT_FOR_LETTER.get(signal_letter)
    if conjugate is None:
        raise ValueError(f"signal letter must be X, Y or Z, got {signal_letter!r}")
    return code.logical_x if conjugate == "X" else code.logical_z


def ramsey_signal(code: StabilizerCode, signal: SignalHamiltonian, tau: float, xi: float) -> float:
    """Mean readout after evolving the probe; cos(2 C xi tau) for C summed signs."""
    profile = _require_uniform(code, signal)
    probe = prepare_probe(code, profile.letter)
    evolved = evolve(probe, signal.scaled(xi), tau)
    return expectation(evolved, readout_operator(code, profile.letter))


def cramer_rao_uncertainty(
    code: StabilizerCode, signal: SignalHamiltonian, tau: float, xi: float
) -> float:
    """Single-shot estimation uncertainty: projection noise over signal slope.

    The slope d<R>/dxi comes from central finite differences on the full
    simulation.  At stationary points of the signal the 0/0 limit of the
    quotient is taken analytically, 1/(2 |C| tau).
    """
    profile = _require_uniform(code, signal)
    step = DERIVATIVE_STEP_SCALE / tau
    mean = ramsey_signal(code, signal, tau, xi)
    deriv = (
        ramsey_signal(code, signal, tau, xi + step)
        - ramsey_signal(code, signal, tau, xi - step)
    ) / (2.0 * step)
    noise = math.sqrt(max(0.0, 1.0 - mean * mean))
    if abs(deriv) < DERIVATIVE_FLOOR:
        if profile.coupling_magnitude > 0.0:
            return 1.0 / (2.0 * profile.coupling_magnitude * tau)
        raise ValueError("uninformative operating point: signal slope vanishes")
    return noise / abs(deriv)


def sql_baseline(tau: float, shots: int) -> float:
    """Projection-noise floor 1/(2 tau sqrt(N)) for N uncorrelated probes."""
    if shots < 1:
        raise ValueError(f"shots must be >= 1, got {shots}")
    if tau <= 0:
        raise ValueError(f"tau must be positive, got {tau}")
    return 1.0 / (2.0 * tau * math.sqrt(shots))


def default_xi(code: StabilizerCode, signal: SignalHamiltonian, tau: float) -> float:
    """Operating point with 2 C xi tau = pi/2 (maximum signal slope)."""
    profile = _require_uniform(code, signal)
    if profile.coupling_magnitude == 0.0:
        raise ValueError("signal signs cancel; no informative operating point exists")
    return math.pi / (4.0 * profile.coupling_magnitude * tau)


# -- experiment configuration --------------------------------------------------

@dataclass(frozen=True)
class NoiseModel:
    """Independent Pauli error ops, each applied with probability p per cycle."""

    error_ops: tuple[PauliOperator, ...]
    probability: float

    def __post_init__(self):
        object.__setattr__(self, "error_ops", tuple(self.error_ops))
        if not self.error_ops:
            raise ValueError("noise model needs at least one error operator")
        if not 0.0 <= self.probability <= 1.0:
            raise ValueError(f"probability must lie in [0, 1], got {self.probability}")
        for op in self.error_ops:
            if not (op.is_hermitian and op.sign in (1, -1)):
                raise ValueError(f"error operator {op} is not Hermitian with a real sign")

    @classmethod
    def from_strings(cls, ops, probability) -> "NoiseModel":
        return cls(tuple(parse(s) for s in ops), probability)


@dataclass(frozen=True)
class CorrectionSchedule:
    """Slice the evolution into ``cycles`` equal segments, each followed by
    syndrome measurement and lookup-table correction."""

    cycles: int

    def __post_init__(self):
        if self.cycles < 1:
            raise ValueError(f"cycles must be >= 1, got {self.cycles}")


@dataclass(frozen=True)
class ExperimentConfig:
    code: StabilizerCode
    signal: SignalHamiltonian
    xi: float
    tau: float
    shots: int
    seed: int
    batches: int = 100
    noise: NoiseModel | None = None
    correction: CorrectionSchedule | None = None

    def __post_init__(self):
        if self.tau <= 0:
            raise ValueError(f"tau must be positive, got {self.tau}")
        if self.shots < 1:
            raise ValueError(f"shots must be >= 1, got {self.shots}")
        batches = min(self.batches, self.shots)
        if self.shots % batches != 0:
            raise ValueError(f"shots ({self.shots}) must divide into {batches} batches")
        object.__setattr__(self, "batches", batches)
        if self.signal.n != self.code.n:
            raise ValueError("signal and code qubit counts differ")
        if self.noise is not None:
            for op in self.noise.error_ops:
                if op.n != self.code.n:
                    raise ValueError(f"noise operator {op} has size {op.n}, code n={self.code.n}")

    @property
    def batch_size(self) -> int:
        return self.shots // self.batches

    def digest(self) -> str:
        blob = {
            "code": {
                "n": self.code.n,
                "generators": [str(g) for g in self.code.generators],
                "logical_x": str(self.code.logical_x),
                "logical_z": str(self.code.logical_z),
            },
            "signal": [[c, str(op)] for c, op in self.signal.terms],
            "xi": self.xi,
            "tau": self.tau,
            "shots": self.shots,
            "batches": self.batches,
            "seed": self.seed,
            "noise": None
            if self.noise is None
            else {
                "ops": [str(op) for op in self.noise.error_ops],
                "p": self.noise.probability,
            },
            "cycles": None if self.correction is None else self.correction.cycles,
        }
        return hashlib.sha256(json.dumps(blob, sort_keys=True).encode()).hexdigest()


@dataclass(frozen=True)
class NoiseReport:
    probability: float
    cycles: int
    error_ops: tuple[str, ...]
    noise_flags: tuple[str, ...]
    errors_applied: int
    nontrivial_syndrome_cycles: int
    decode_failures: int
    mean_ideal_infidelity: float
    estimate_exact: float
    bias_exact: float

    def to_dict(self) -> dict:
        return {
            "probability": self.probability,
            "cycles": self.cycles,
            "error_ops": list(self.error_ops),
            "noise_flags": list(self.noise_flags),
            "errors_applied": self.errors_applied,
            "nontrivial_syndrome_cycles": self.nontrivial_syndrome_cycles,
            "decode_failures": self.decode_failures,
            "mean_ideal_infidelity": self.mean_ideal_infidelity,
            "estimate_exact": self.estimate_exact,
            "bias_exact": self.bias_exact,
        }


@dataclass(frozen=True)
class ExperimentResult:
    kind: str
    code_name: str
    signal_letter: str
    effective_coupling: float
    xi_true: float
    tau: float
    shots: int
    batches: int
    batch_size: int
    seed: int
    config_digest: str
    backend: str
    estimate: float
    batch_estimates: tuple[float, ...]
    empirical_std_batch: float
    empirical_std_shot: float
    cr_bound: float
    outcomes: tuple[int, ...]
    branch_warning: bool
    flags: tuple[str, ...]
    noise: NoiseReport | None = None

    def to_dict(self) -> dict:
        out = {
            "kind": self.kind,
            "code": self.code_name,
            "signal_letter": self.signal_letter,
            "effective_coupling": self.effective_coupling,
            "xi_true": self.xi_true,
            "tau": self.tau,
            "shots": self.shots,
            "batches": self.batches,
            "batch_size": self.batch_size,
            "seed": self.seed,
            "config_digest": self.config_digest,
            "backend": self.backend,
            "estimate": self.estimate,
            "batch_estimates": list(self.batch_estimates),
            "empirical_std_batch": self.empirical_std_batch,
            "empirical_std_shot": self.empirical_std_shot,
            "cr_bound": self.cr_bound,
            "outcomes": list(self.outcomes),
            "branch_warning": self.branch_warning,
            "flags": list(self.flags),
            "noise": None if self.noise is None else self.noise.to_dict(),
        }
        return out

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True) + "\n"


# -- syndrome decoding ----------------------------------------------------------

@lru_cache(maxsize=None)
def syndrome_table(code: StabilizerCode) -> dict[int, PauliOperator]:
    """Minimum-weight correction per syndrome, ties broken lexicographically.

    Syndrome bit i is set when the error anticommutes with generator i.
    Built by scanning Pauli words in (weight, letters) order until every
    syndrome has an entry.
    """
    require_valid(code)
    gens = code.generators
    table: dict[int, PauliOperator] = {}
    want = 1 << len(gens)
    for w in range(code.n + 1):
        if len(table) == want:
            break
        words = []
        for positions in combinations(range(code.n), w):
            for letters in product("XYZ", repeat=w):
                chars = ["I"] * code.n
                for pos, ch in zip(positions, letters):
                    chars[pos] = ch
                words.append("".join(chars))
        for word in sorted(words):
            op = parse(word)
            synd = 0
            for i, g in enumerate(gens):
                if not op.commutes_with(g):
                    synd |= 1 << i
            if synd not in table:
                table[synd] = op
                if len(table) == want:
                    break
    return table


def _syndrome_arrays(code: StabilizerCode):
    table = syndrome_table(code)
    size = 1 << len(code.generators)
    corr_x = np.zeros(size, dtype=np.int64)
    corr_z = np.zeros(size, dtype=np.int64)
    corr_phase = np.ones(size, dtype=np.complex128)
    corr_valid = np.zeros(size, dtype=bool)
    for synd, op in table.items():
        corr_x[synd] = op.x_bits
        corr_z[synd] = op.z_bits
        corr_phase[synd] = _phase_of(op)
        corr_valid[synd] = True
    return corr_x, corr_z, corr_phase, corr_valid


def _op_arrays(ops):
    xs = np.array([op.x_bits for op in ops], dtype=np.int64)
    zs = np.array([op.z_bits for op in ops], dtype=np.int64)
    phases = np.array([_phase_of(op) for op in ops], dtype=np.complex128)
    return xs, zs, phases


# -- estimation ------------------------------------------------------------------

def _invert_mean(mean: float, coupling_magnitude: float, tau: float) -> float:
    clipped = min(1.0, max(-1.0, mean))
    return math.acos(clipped) / (2.0 * coupling_magnitude * tau)


def _estimates_from_outcomes(outcomes: np.ndarray, config: ExperimentConfig, coupling: float):
    means = outcomes.reshape(config.batches, config.batch_size).mean(axis=1)
    batch_estimates = tuple(_invert_mean(m, coupling, config.tau) for m in means)
    estimate = _invert_mean(float(outcomes.mean()), coupling, config.tau)
    if config.batches > 1:
        std_batch = float(np.std(batch_estimates, ddof=1))
    else:
        std_batch = 0.0
    return estimate, batch_estimates, std_batch


def _sample_outcomes(expectations: np.ndarray, uniforms: np.ndarray) -> np.ndarray:
    p_plus = np.clip(0.5 * (1.0 + expectations), 0.0, 1.0)
    return np.where(uniforms < p_plus, 1, -1).astype(np.int64)


def monte_carlo_estimate(config: ExperimentConfig) -> ExperimentResult:
    """Noiseless shot sampling: evolve once, draw N readout outcomes, invert.

    Deterministic given (config, seed); the estimator inverts the batch and
    overall means through cos(2 C xi tau) on the principal branch.
    """
    profile = _require_uniform(config.code, config.signal)
    coupling = profile.coupling_magnitude
    if coupling == 0.0:
        raise ValueError("signal signs cancel; nothing to estimate")
    probe = prepare_probe(config.code, profile.letter)
    evolved = evolve(probe, config.signal.scaled(config.xi), config.tau)
    mu = expectation(evolved, readout_operator(config.code, profile.letter))
    outcomes = _sample_outcomes(
        np.full(config.shots, mu), readout_uniforms(config.seed, config.shots)
    )
    estimate, batch_estimates, std_batch = _estimates_from_outcomes(outcomes, config, coupling)
    branch = not (0.0 <= 2.0 * coupling * config.xi * config.tau <= math.pi)
    return ExperimentResult(
        kind="noiseless",
        code_name=config.code.name or "custom",
        signal_letter=profile.letter,
        effective_coupling=profile.effective_coupling,
        xi_true=config.xi,
        tau=config.tau,
        shots=config.shots,
        batches=config.batches,
        batch_size=config.batch_size,
        seed=config.seed,
        config_digest=config.digest(),
        backend=kernels.BACKEND,
        estimate=estimate,
        batch_estimates=batch_estimates,
        empirical_std_batch=std_batch,
        empirical_std_shot=std_batch * math.sqrt(config.batch_size),
        cr_bound=cramer_rao_uncertainty(config.code, config.signal, config.tau, config.xi),
        outcomes=tuple(int(o) for o in outcomes),
        branch_warning=branch,
        flags=profile.flags,
        noise=None,
    )


def noisy_run(config: ExperimentConfig) -> ExperimentResult:
    """Stochastic error/correction trajectories, then readout as in
    :func:`monte_carlo_estimate`.

    Each shot evolves in ``cycles`` equal segments; after each segment every
    noise operator fires independently with probability p, all generators
    are measured projectively, and the lookup-table correction for the
    observed syndrome is applied.  With p = 0 the sampled outcomes (hence
    the estimates) match the noiseless pipeline bit for bit under the same
    seed.  Alongside the sampled-outcome estimate the result records the
    trajectory-exact readout mean, its inverted estimate, and the mean
    infidelity against the noiseless evolved state.
    """
    if config.noise is None or config.correction is None:
        raise ValueError("noisy_run requires both a noise model and a correction schedule")
    profile = _require_uniform(config.code, config.signal)
    coupling = profile.coupling_magnitude
    if coupling == 0.0:
        raise ValueError("signal signs cancel; nothing to estimate")
    code = config.code
    cycles = config.correction.cycles

    noise_flags = []
    for op in config.noise.error_ops:
        cl = classify(code, op)
        if cl.kind is not ClassificationKind.DETECTABLE:
            noise_flags.append(
                f"noise operator {op} is not detectable ({cl}); "
                "indistinguishable from signal evolution"
            )

    probe = prepare_probe(code, profile.letter)
    ideal = evolve(probe, config.signal.scaled(config.xi), config.tau)
    readout = readout_operator(code, profile.letter)

    sig_x, sig_z, sig_phase = _op_arrays([op for _, op in config.signal.terms])
    sig_theta = np.array(
        [c * config.xi * config.tau / cycles for c, _ in config.signal.terms], dtype=np.float64
    )
    err_x, err_z, err_phase = _op_arrays(config.noise.error_ops)
    gen_x, gen_z, gen_phase = _op_arrays(code.generators)
    corr_x, corr_z, corr_phase, corr_valid = _syndrome_arrays(code)

    draws = cycles * (len(config.noise.error_ops) + len(code.generators))
    uniforms = trajectory_uniforms(config.seed, config.shots, draws)

    exp_out, infid, err_count, synd_count, fail_count = kernels.run_trajectories(
        probe.amplitudes,
        ideal.amplitudes,
        cycles,
        sig_x, sig_z, sig_phase, sig_theta,
        err_x, err_z, err_phase, config.noise.probability,
        gen_x, gen_z, gen_phase,
        corr_x, corr_z, corr_phase, corr_valid,
        readout.x_bits, readout.z_bits, _phase_of(readout),
        uniforms,
    )

    outcomes = _sample_outcomes(exp_out, readout_uniforms(config.seed, config.shots))
    estimate, batch_estimates, std_batch = _estimates_from_outcomes(outcomes, config, coupling)
    estimate_exact = _invert_mean(float(exp_out.mean()), coupling, config.tau)
    branch = not (0.0 <= 2.0 * coupling * config.xi * config.tau <= math.pi)
    report = NoiseReport(
        probability=config.noise.probability,
        cycles=cycles,
        error_ops=tuple(str(op) for op in config.noise.error_ops),
        noise_flags=tuple(noise_flags),
        errors_applied=int(err_count.sum()),
        nontrivial_syndrome_cycles=int(synd_count.sum()),
        decode_failures=int(fail_count.sum()),
        mean_ideal_infidelity=float(infid.mean()),
        estimate_exact=estimate_exact,
        bias_exact=float(abs(estimate_exact - config.xi)),
    )
    return ExperimentResult(
        kind="noisy",
        code_name=code.name or "custom",
        signal_letter=profile.letter,
        effective_coupling=profile.effective_coupling,
        xi_true=config.xi,
        tau=config.tau,
        shots=config.shots,
        batches=config.batches,
        batch_size=config.batch_size,
        seed=config.seed,
        config_digest=config.digest(),
        backend=kernels.BACKEND,
        estimate=estimate,
        batch_estimates=batch_estimates,
        empirical_std_batch=std_batch,
        empirical_std_shot=std_batch * math.sqrt(config.batch_size),
        cr_bound=cramer_rao_uncertainty(config.code, config.signal, config.tau, config.xi),
        outcomes=tuple(int(o) for o in outcomes),
        branch_warning=branch,
        flags=profile.flags,
        noise=report,
    )


def loglog_slope(xs, ys) -> float:
    """Least-squares slope of log(y) against log(x)."""
    return float(np.polyfit(np.log(np.asarray(xs, float)), np.log(np.asarray(ys, float)), 1)[0])
