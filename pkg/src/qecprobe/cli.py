"""Command-line front end.

Subcommands: code-info, classify, coset, orbit, distance, experiment.
Machine-readable output (JSON/CSV/text reports) goes to stdout or --out;
human-readable progress and errors go to stderr.  Every run is fully
determined by its invocation and seed.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from pathlib import Path

from . import kernels
from .pauli import parse
from .metrology import (
    CorrectionSchedule,
    ExperimentConfig,
    NoiseModel,
    cramer_rao_uncertainty,
    default_xi,
    logical_z_orbit_signal,
    monte_carlo_estimate,
    noisy_run,
    signal_profile,
    sql_baseline,
)
from .simulator import SignalHamiltonian, logical_action_oracle
from .stabilizer import (
    BUILTIN_CODES,
    classify,
    cyclic_orbit_report,
    distance,
    enumerate_group,
    get_builtin,
    load_code_file,
    logical_coset,
    min_weight_logical,
    redundancy_formula,
    validate_code,
)

DEFAULT_P_VALUES = "0.002,0.005,0.01,0.02"
DEFAULT_SHOT_COUNTS = "1,10,100,1000,10000,100000"

# scan-over-terms presets, keyed by the number of signal terms
SCAN_M_PRESETS = (("trivial", 1), ("repetition3", 3), ("fivequbit", 5))


def _log(message: str) -> None:
    print(message, file=sys.stderr)


def _emit(text: str, out: str | None) -> None:
    if out:
        Path(out).write_text(text, encoding="utf-8")
        _log(f"wrote {out}")
    else:
        sys.stdout.write(text)


def _load_code(args):
    if args.builtin:
        code = get_builtin(args.builtin)
    else:
        code = load_code_file(args.code_file)
    report = validate_code(code)
    if not report.ok:
        raise ValueError(f"code {code.name!r} failed validation: {report}")
    return code


def _add_code_flags(sub, required=True):
    group = sub.add_mutually_exclusive_group(required=required)
    group.add_argument("--builtin", choices=sorted(BUILTIN_CODES), help="built-in code name")
    group.add_argument("--code-file", help="path to a code-definition file")


def _csv_text(header, rows) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow([repr(v) if isinstance(v, float) else v for v in row])
    return buf.getvalue()


# -- subcommands ---------------------------------------------------------------

def _cmd_code_info(args) -> int:
    code = _load_code(args)
    d = distance(code)
    witness = min_weight_logical(code)
    group_size = len(enumerate_group(code))
    coset_x = len(logical_coset(code, "X"))
    coset_z = len(logical_coset(code, "Z"))
    estimate = redundancy_formula(code.n)
    info = {
        "name": code.name,
        "n": code.n,
        "generators": [str(g) for g in code.generators],
        "logical_x": str(code.logical_x),
        "logical_z": str(code.logical_z),
        "distance": d,
        "distance_witness": str(witness),
        "stabilizer_group_size": group_size,
        "logical_x_coset_size": coset_x,
        "logical_z_coset_size": coset_z,
        "redundancy_estimate": estimate,
        "redundancy_discrepancy": estimate != coset_z,
    }
    if args.format == "json":
        _emit(json.dumps(info, indent=2, sort_keys=True) + "\n", args.out)
        return 0
    lines = [
        f"code: {code.name or '(unnamed)'}",
        f"n: {code.n}",
        f"generators: {', '.join(str(g) for g in code.generators) or '(none)'}",
        f"logical_x: {code.logical_x}",
        f"logical_z: {code.logical_z}",
        f"distance: {d} (witness {witness})",
        f"stabilizer group size: {group_size}",
        f"logical X coset size: {coset_x}",
        f"logical Z coset size: {coset_z}",
    ]
    if estimate == coset_z:
        lines.append(f"redundancy estimate n(n-1)/2+1: {estimate} (matches enumeration)")
    else:
        lines.append(
            f"redundancy estimate n(n-1)/2+1: {estimate} "
            f"(DISCREPANCY: enumeration gives {coset_z})"
        )
    _emit("\n".join(lines) + "\n", args.out)
    return 0


def _cmd_classify(args) -> int:
    code = _load_code(args)
    op = parse(args.pauli)
    symplectic = classify(code, op)
    oracle = logical_action_oracle(code, op)
    info = {
        "operator": str(op),
        "symplectic": str(symplectic),
        "oracle": str(oracle),
        "agreement": symplectic == oracle,
    }
    if args.format == "json":
        _emit(json.dumps(info, indent=2, sort_keys=True) + "\n", args.out)
        return 0
    _emit(
        f"operator: {op}\nsymplectic: {symplectic}\noracle: {oracle}\n"
        f"agreement: {'yes' if info['agreement'] else 'NO'}\n",
        args.out,
    )
    return 0


def _cmd_coset(args) -> int:
    code = _load_code(args)
    pairs = logical_coset(code, args.which)
    if args.format == "json":
        data = {
            "which": args.which,
            "size": len(pairs),
            "elements": [{"operator": str(op), "action_sign": s} for op, s in pairs],
        }
        _emit(json.dumps(data, indent=2, sort_keys=True) + "\n", args.out)
        return 0
    lines = [f"logical {args.which} coset of {code.name or 'code'} ({len(pairs)} elements):"]
    for op, s in pairs:
        lines.append(f"  {op.letters}  action {'+' if s == 1 else '-'}{args.which}  weight {op.weight}")
    _emit("\n".join(lines) + "\n", args.out)
    return 0


def _cmd_orbit(args) -> int:
    code = _load_code(args)
    op = parse(args.pauli)
    rows = cyclic_orbit_report(code, op)
    if args.format == "json":
        data = [
            {"shift": s, "operator": str(shifted), "classification": str(cl)}
            for s, shifted, cl in rows
        ]
        _emit(json.dumps(data, indent=2) + "\n", args.out)
        return 0
    lines = [f"cyclic orbit of {op} under {code.name or 'code'}:"]
    for s, shifted, cl in rows:
        lines.append(f"  shift {s}: {shifted.letters:<{code.n}}  {cl}")
    _emit("\n".join(lines) + "\n", args.out)
    return 0


def _cmd_distance(args) -> int:
    code = _load_code(args)
    _emit(f"distance: {distance(code)} (witness {min_weight_logical(code)})\n", args.out)
    return 0


def _parse_signal_terms(path) -> SignalHamiltonian:
    terms = []
    for lineno, raw in enumerate(Path(path).read_text(encoding="utf-8").splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        fields = line.split()
        if len(fields) != 2:
            raise ValueError(f"{path}:{lineno}: expected '<coefficient> <pauli>', got {raw!r}")
        terms.append((float(fields[0]), parse(fields[1])))
    return SignalHamiltonian(tuple(terms))


def _build_signal(args, code) -> SignalHamiltonian:
    if args.signal_terms:
        return _parse_signal_terms(args.signal_terms)
    if args.signal == "logicalZ-all":
        return logical_z_orbit_signal(code)
    raise ValueError(f"unknown signal preset {args.signal!r}")


def _scan_m(args) -> int:
    rows = []
    for name, terms in SCAN_M_PRESETS:
        if terms > args.max_m:
            continue
        code = get_builtin(name)
        signal = logical_z_orbit_signal(code)
        profile = signal_profile(code, signal)
        xi = args.xi if args.xi is not None else default_xi(code, signal, args.tau)
        bound = cramer_rao_uncertainty(code, signal, args.tau, xi)
        rows.append(
            (name, code.n, len(signal), profile.effective_coupling, args.tau, xi, bound, bound * args.tau)
        )
    text = _csv_text(
        ("label", "n", "terms", "effective_coupling", "tau", "xi", "delta_xi", "delta_xi_tau"),
        rows,
    )
    _emit(text, args.out)
    return 0


def _scan_n(args) -> int:
    counts = [int(v) for v in args.shot_counts.split(",") if v.strip()]
    rows = [(n, args.tau, sql_baseline(args.tau, n), sql_baseline(args.tau, n) * args.tau) for n in counts]
    _emit(_csv_text(("shots", "tau", "delta_xi", "delta_xi_tau"), rows), args.out)
    return 0


def _scan_p(args) -> int:
    code = _load_code(args)
    signal = _build_signal(args, code)
    if not args.noise_ops:
        raise ValueError("--scan p requires --noise-ops")
    xi = args.xi if args.xi is not None else default_xi(code, signal, args.tau)
    p_values = [float(v) for v in args.p_values.split(",") if v.strip()]
    rows = []
    for p in p_values:
        _log(f"running p={p} ...")
        config = ExperimentConfig(
            code=code,
            signal=signal,
            xi=xi,
            tau=args.tau,
            shots=args.shots,
            seed=args.seed,
            batches=args.batches,
            noise=NoiseModel.from_strings(args.noise_ops.split(","), p),
            correction=CorrectionSchedule(args.cycles),
        )
        r = noisy_run(config)
        rows.append(
            (
                p,
                args.cycles,
                args.shots,
                args.seed,
                r.estimate,
                abs(r.estimate - xi),
                r.noise.estimate_exact,
                r.noise.bias_exact,
                r.noise.mean_ideal_infidelity,
                r.noise.errors_applied,
                r.noise.nontrivial_syndrome_cycles,
                r.noise.decode_failures,
            )
        )
    header = (
        "p", "cycles", "shots", "seed", "estimate", "bias", "estimate_exact",
        "bias_exact", "mean_ideal_infidelity", "errors_applied",
        "nontrivial_syndrome_cycles", "decode_failures",
    )
    _emit(_csv_text(header, rows), args.out)
    return 0


def _cmd_experiment(args) -> int:
    if args.scan == "M":
        return _scan_m(args)
    if args.scan == "N":
        return _scan_n(args)
    if args.scan == "p":
        return _scan_p(args)

    code = _load_code(args)
    signal = _build_signal(args, code)
    xi = args.xi if args.xi is not None else default_xi(code, signal, args.tau)
    noise = None
    correction = None
    if args.noise_ops:
        if args.noise_p is None:
            raise ValueError("--noise-ops requires --noise-p")
        noise = NoiseModel.from_strings(args.noise_ops.split(","), args.noise_p)
        correction = CorrectionSchedule(args.cycles)
    config = ExperimentConfig(
        code=code,
        signal=signal,
        xi=xi,
        tau=args.tau,
        shots=args.shots,
        seed=args.seed,
        batches=args.batches,
        noise=noise,
        correction=correction,
    )
    _log(f"backend={kernels.BACKEND} code={code.name} xi={xi} tau={args.tau} shots={args.shots}")
    result = noisy_run(config) if noise is not None else monte_carlo_estimate(config)
    _log(f"estimate={result.estimate} cr_bound={result.cr_bound}")
    _emit(result.to_json(), args.out)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="qecprobe",
        description="stabilizer codes as metrological probes: analysis and simulation",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("code-info", help="validate a code and report its invariants")
    _add_code_flags(p)
    p.add_argument("--format", choices=("text", "json"), default="text")
    p.add_argument("--out")
    p.set_defaults(func=_cmd_code_info)

    p = sub.add_parser("classify", help="classify a Pauli against a code")
    _add_code_flags(p)
    p.add_argument("pauli", help="Pauli word, e.g. ZZZ or -YZYII")
    p.add_argument("--format", choices=("text", "json"), default="text")
    p.add_argument("--out")
    p.set_defaults(func=_cmd_classify)

    p = sub.add_parser("coset", help="enumerate the implementations of a logical rotation")
    _add_code_flags(p)
    p.add_argument("--which", choices=("X", "Y", "Z"), default="Z")
    p.add_argument("--format", choices=("text", "json"), default="text")
    p.add_argument("--out")
    p.set_defaults(func=_cmd_coset)

    p = sub.add_parser("orbit", help="classify every cyclic shift of a Pauli")
    _add_code_flags(p)
    p.add_argument("pauli")
    p.add_argument("--format", choices=("text", "json"), default="text")
    p.add_argument("--out")
    p.set_defaults(func=_cmd_orbit)

    p = sub.add_parser("distance", help="brute-force code distance")
    _add_code_flags(p)
    p.add_argument("--out")
    p.set_defaults(func=_cmd_distance)

    p = sub.add_parser("experiment", help="run a phase-estimation experiment or scan")
    _add_code_flags(p, required=False)
    p.add_argument("--signal", default="logicalZ-all", help="signal preset (default logicalZ-all)")
    p.add_argument("--signal-terms", help="file of '<coefficient> <pauli>' lines")
    p.add_argument("--tau", type=float, default=1.0)
    p.add_argument("--xi", type=float, default=None, help="default picks 2*C*xi*tau = pi/2")
    p.add_argument("--shots", type=int, default=10000)
    p.add_argument("--batches", type=int, default=100)
    p.add_argument("--seed", type=int, default=7)
    p.add_argument("--noise-ops", help="comma-separated error Paulis, e.g. XII,IXI,IIX")
    p.add_argument("--noise-p", type=float, default=None)
    p.add_argument("--cycles", type=int, default=10)
    p.add_argument("--scan", choices=("M", "p", "N"))
    p.add_argument("--max-m", type=int, default=5)
    p.add_argument("--p-values", default=DEFAULT_P_VALUES)
    p.add_argument("--shot-counts", default=DEFAULT_SHOT_COUNTS)
    p.add_argument("--out")
    p.set_defaults(func=_cmd_experiment)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (ValueError, OSError) as exc:
        _log(f"error: {exc}")
        return 1


if __name__ == "__main__":
    sys.exit(main())
