"""Command-line front end.

Exit codes: 0 success, 2 usage error, 3 input-format error, 4 promise
violation, 5 resource cap.
"""

from __future__ import annotations

import argparse
import math
import sys
from pathlib import Path

from . import report
from .algorithms import deutsch_run, pipeline_run
from .decoherence import (
    EnvironmentModel,
    branch_stability,
    cat_state,
    coherence_series,
    dephase,
    dyadic_angles,
    entangle_environment,
    predicted_offdiag,
)
from .errors import DimensionError, PromiseViolation, ResourceCapError, TruthTableError
from .infometrics import deutsch_output_parity, measurement_entropy, storage_retrieval_bound
from .oracle import BooleanFunction, classify, load_truth_table, parse_truth_table
from .statecore import MAX_FULL_MATRIX_QUBITS, HadamardLayer, RegisterLayout, density_from_state
from .worlds import DEFAULT_WORLD_THRESHOLD, audit_information, interference_matrix, track

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_INPUT = 3
EXIT_PROMISE = 4
EXIT_CAP = 5


class UsageError(Exception):
    pass


def _read_function(source: str, n: int | None) -> BooleanFunction:
    if source.startswith("@"):
        path = Path(source[1:])
        try:
            f = load_truth_table(path)
        except FileNotFoundError:
            raise TruthTableError(f"truth table file not found: {path}") from None
        except OSError as exc:
            raise TruthTableError(f"cannot read truth table file {path}: {exc}") from None
    else:
        f = parse_truth_table(source)
    if n is not None and n != f.n:
        raise UsageError(f"--n {n} does not match a truth table of length {len(f.table)}")
    return f


def _run_result(res) -> dict:
    n = res.trace.steps[0].state.num_qubits - 1
    return {
        "verdict": res.verdict,
        "outcome": format(res.outcome, f"0{n}b"),
        "outcome_bit": res.outcome_bit,
        "outcome_probability": res.outcome_probability,
        "p_all_zero": res.p_all_zero,
    }


def _config(args, **fields) -> dict:
    cfg = {"command": args.command}
    cfg.update(fields)
    return cfg


def _algorithm_doc(args, deutsch: bool) -> str:
    f = _read_function(args.f, getattr(args, "n", None))
    res = deutsch_run(f, args.seed) if deutsch else pipeline_run(f, args.seed)
    layout = RegisterLayout(f.n, 1)
    wt = track(res.trace, layout, args.threshold)
    audit = audit_information(res.trace, layout, args.threshold)
    extra = {
        "command": args.command,
        "config": _config(args, f=f.text(), n=f.n, seed=args.seed, threshold=args.threshold),
        "function_class": classify(f).value,
        "result": _run_result(res),
        "world_counts": wt.counts,
    }
    return report.serialize_trace(wt, audit, extra=extra)


def cmd_deutsch(args) -> str:
    return _algorithm_doc(args, deutsch=True)


def cmd_dj(args) -> str:
    return _algorithm_doc(args, deutsch=False)


def cmd_worlds_trace(args) -> str:
    f = _read_function(args.f, args.n)
    res = pipeline_run(f, args.seed)
    layout = RegisterLayout(f.n, 1)
    wt = track(res.trace, layout, args.threshold)
    audit = audit_information(res.trace, layout, args.threshold)
    interference = []
    for step, nxt in zip(res.trace.steps, res.trace.steps[1:]):
        if nxt.gate is None:
            continue
        decomp = wt.per_step[step.step_index].decomposition
        block = {"from_step": step.step_index, "gate_stage": nxt.stage}
        block.update(report.interference_block(interference_matrix(decomp, nxt.gate)))
        interference.append(block)
    extra = {
        "command": args.command,
        "config": _config(args, f=f.text(), n=f.n, seed=args.seed, threshold=args.threshold),
        "function_class": classify(f).value,
        "result": _run_result(res),
        "world_counts": wt.counts,
        "interference": interference,
    }
    return report.serialize_trace(wt, audit, extra=extra)


def cmd_audit(args) -> str:
    f = _read_function(args.f, args.n)
    res = pipeline_run(f, args.seed)
    layout = RegisterLayout(f.n, 1)
    wt = track(res.trace, layout, args.threshold)
    audit = audit_information(res.trace, layout, args.threshold)
    final = res.trace.stage("hadamard2").state
    m = measurement_entropy(final, HadamardLayer(()))
    entropy = {
        "final_readout_shannon_bits": m.shannon_bits,
        "final_von_neumann_bits": m.von_neumann_bits,
        "bound_satisfied": m.bound_satisfied,
    }
    if f.n <= MAX_FULL_MATRIX_QUBITS:
        sb = storage_retrieval_bound(f.n, seed=args.seed)
        entropy["storage_bound"] = {
            "n_qubits": sb.n_qubits,
            "max_retrievable_bits": sb.max_retrievable_bits,
            "battery_size": sb.battery_size,
            "exceeded": sb.exceeded,
        }
    if f.n == 1:
        parity = deutsch_output_parity()
        entropy["output_parity"] = {
            "quantum_bits": parity.quantum_bits,
            "classical_bits": parity.classical_bits,
        }
    extra = {
        "command": args.command,
        "config": _config(args, f=f.text(), n=f.n, seed=args.seed, threshold=args.threshold),
        "function_class": classify(f).value,
        "result": _run_result(res),
        "world_counts": wt.counts,
        "entropy": entropy,
    }
    return report.serialize_trace(wt, audit, extra=extra)


def _parse_angles(text: str | None, k: int, seed: int) -> EnvironmentModel:
    if text is None:
        return EnvironmentModel.random(k, seed)
    if text == "dyadic":
        return EnvironmentModel(dyadic_angles(k), seed)
    try:
        angles = tuple(float(a) for a in text.split(","))
    except ValueError:
        raise UsageError(f"--angles expects 'dyadic' or comma-separated radians, got {text!r}")
    if len(angles) != k:
        raise UsageError(f"--angles gives {len(angles)} angles but --env-qubits is {k}")
    return EnvironmentModel(angles, seed)


def cmd_decohere(args) -> str:
    if args.env_qubits < 0 or args.steps < 0:
        raise UsageError("--env-qubits and --steps must be non-negative")
    env = _parse_angles(args.angles, args.env_qubits, args.seed)
    system = cat_state()
    run = entangle_environment(system, env, args.steps)
    mech = coherence_series(run)
    product = math.prod(abs(math.cos(a / 2.0)) for a in env.coupling_angles)
    if args.gamma is not None:
        gamma = args.gamma
    else:
        gamma = -math.log(product) if product > 0 else math.inf
    if not math.isfinite(gamma):
        raise UsageError("one-step coupling removes all coherence; pass --gamma explicitly")
    phen = coherence_series(dephase(density_from_state(system), gamma, args.steps))
    mech_report = branch_stability(mech, args.threshold)
    phen_report = branch_stability(phen, args.threshold)

    def block(r, series):
        return {
            "classification": r.classification,
            "threshold": r.threshold,
            "window": r.window,
            "defaults_used": r.defaults_used,
            "offdiag_norm": [s.offdiag_norm for s in series.samples],
        }

    doc = {
        "format_version": report.FORMAT_VERSION,
        "command": args.command,
        "config": {
            "command": args.command,
            "env_qubits": env.env_qubits,
            "steps": args.steps,
            "seed": args.seed,
            "gamma": gamma,
            "threshold": mech_report.threshold,
        },
        "system": "cat",
        "coupling_angles": list(env.coupling_angles),
        "entangled": block(mech_report, mech),
        "predicted_offdiag": [predicted_offdiag(env.coupling_angles, t) for t in range(args.steps + 1)],
        "dephased": block(phen_report, phen),
        "joint_norm": [r.joint.norm() for r in run],
    }
    return report.dumps(doc)


COMMANDS = {
    "deutsch": cmd_deutsch,
    "dj": cmd_dj,
    "worlds-trace": cmd_worlds_trace,
    "decohere": cmd_decohere,
    "audit": cmd_audit,
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="qworlds", description="Trace computational worlds through small quantum algorithms."
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, with_f=True, with_n=True):
        if with_f:
            p.add_argument("--f", required=True, help="truth table, inline or @path")
        if with_n:
            p.add_argument("--n", type=int, help="input bits (checked against --f)")
        p.add_argument("--seed", type=int, default=0)
        p.add_argument("--threshold", type=float, default=None)
        p.add_argument("--out", help="write the report here instead of stdout")

    common(sub.add_parser("deutsch", allow_abbrev=False, help="Deutsch's algorithm"), with_n=False)
    common(sub.add_parser("dj", allow_abbrev=False, help="Deutsch-Jozsa pipeline"))
    common(sub.add_parser("worlds-trace", allow_abbrev=False, help="pipeline with interference matrices"))
    common(sub.add_parser("audit", allow_abbrev=False, help="information and entropy audit"))
    p = sub.add_parser("decohere", allow_abbrev=False, help="cat state coupled to an environment")
    common(p, with_f=False, with_n=False)
    p.add_argument("--env-qubits", type=int, default=4)
    p.add_argument("--steps", type=int, default=16)
    p.add_argument("--gamma", type=float, default=None)
    p.add_argument("--angles", default=None, help="'dyadic' or comma-separated radians")
    return parser


def run_command(argv: list[str] | None = None) -> tuple[int, str | None]:
    """Parse ``argv`` and execute; returns (exit status, report text or None)."""
    parser = build_parser()
    parser.allow_abbrev = False
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0), None
    if args.command != "decohere" and args.threshold is None:
        args.threshold = DEFAULT_WORLD_THRESHOLD
    try:
        text = COMMANDS[args.command](args)
    except UsageError as exc:
        print(f"qworlds: error: {exc}", file=sys.stderr)
        return EXIT_USAGE, None
    except TruthTableError as exc:
        print(f"qworlds: error: {exc}", file=sys.stderr)
        return EXIT_INPUT, None
    except PromiseViolation as exc:
        print(f"qworlds: error: promise violation: {exc}", file=sys.stderr)
        return EXIT_PROMISE, None
    except ResourceCapError as exc:
        print(f"qworlds: error: {exc}", file=sys.stderr)
        return EXIT_CAP, None
    except (DimensionError, ValueError) as exc:
        print(f"qworlds: error: {exc}", file=sys.stderr)
        return EXIT_USAGE, None
    if args.out:
        try:
            Path(args.out).write_text(text, encoding="utf-8")
        except OSError as exc:
            print(f"qworlds: error: cannot write {args.out}: {exc}", file=sys.stderr)
            return EXIT_INPUT, None
    else:
        sys.stdout.write(text)
    return EXIT_OK, text


def main(argv: list[str] | None = None) -> int:
    status, _ = run_command(argv)
    return status


if __name__ == "__main__":
    sys.exit(main())
