"""Command-line front end.

Exit codes: 0 success, 1 verification failure or inconclusive result,
2 usage or parse error.
"""

from __future__ import annotations

import argparse
import sys
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from . import compiler as cc
from . import readout as ro
from . import statevec as sv
from . import symplectic as sp
from . import verify
from .schedule import PulseSchedule, ScheduleFormatError

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


DEFAULT_SEED = 0
DEFAULT_TOL = 1e-9


class UsageError(Exception):
    pass


@dataclass(frozen=True)
class RunConfig:
    """Flags shared across commands, after defaults are applied."""

    command: str
    input: str | None = None
    output: str | None = None
    size: int | None = None
    seed: int = DEFAULT_SEED
    tol: float = DEFAULT_TOL
    model: str = "coherent"

    def __post_init__(self):
        if self.tol <= 0:
            raise UsageError(f"--tol must be positive, got {self.tol}")
        if self.seed < 0:
            raise UsageError(f"--seed must be non-negative, got {self.seed}")
        if self.size is not None and self.size < 1:
            raise UsageError(f"size must be positive, got {self.size}")

    @classmethod
    def from_args(cls, args: argparse.Namespace) -> "RunConfig":
        sizes = (getattr(args, k, None) for k in ("N", "n", "max_n"))
        return cls(
            args.command,
            getattr(args, "input", None),
            getattr(args, "out", None),
            next((v for v in sizes if v is not None), None),
            getattr(args, "seed", DEFAULT_SEED),
            getattr(args, "tol", DEFAULT_TOL),
            getattr(args, "model", "coherent"),
        )


def _read(path: str | None) -> str:
    if path is None or path == "-":
        return sys.stdin.read()
    return Path(path).read_text(encoding="utf-8")


def _write(path: str | None, text: str) -> None:
    if path is None or path == "-":
        sys.stdout.write(text)
    else:
        Path(path).write_text(text, encoding="utf-8")


def cmd_compile(args) -> int:
    try:
        circuit = cc.LogicalCircuit.from_text(_read(args.input))
    except cc.CircuitFormatError as exc:
        raise UsageError(f"circuit: {exc}") from None
    schedule, report = cc.compile_circuit(circuit)
    _write(args.out, schedule.to_text())
    # comment lines, so the stream stays a valid schedule when --out is omitted
    print(f"# {report.summary()}")
    print(f"# pulses={len(schedule.pulses)} gate_steps={list(report.gate_steps)}")
    return EXIT_OK


def cmd_simulate(args) -> int:
    try:
        schedule = PulseSchedule.from_text(_read(args.input))
    except ScheduleFormatError as exc:
        raise UsageError(f"schedule: {exc}") from None
    if args.N is not None and args.N != schedule.n_sites:
        raise UsageError(f"--N {args.N} does not match schedule header N {schedule.n_sites}")
    if schedule.n_sites > sv.MAX_QUBITS:
        raise UsageError(f"N={schedule.n_sites} exceeds the simulator cap {sv.MAX_QUBITS}")
    if args.init is not None:
        if len(args.init) != schedule.n_sites or set(args.init) - {"0", "1"}:
            raise UsageError(f"--init must be a {schedule.n_sites}-bit string")
        state = sv.StateVector.basis(args.init)
    else:
        state = sv.init_zero(schedule.n_sites)
    sv.apply_schedule(state, schedule)
    n = schedule.n_sites
    lines = [f"N {n}", f"t_steps {schedule.t_steps}", f"expectation_sz {sv.expectation_sz(state)!r}"]
    probs = state.probabilities()
    for b in np.flatnonzero(probs >= args.cutoff):
        bits = format(int(b), f"0{n}b")
        if args.amplitudes:
            a = complex(state.amplitudes[b])
            lines.append(f"{bits} {a.real!r} {a.imag!r}")
        else:
            lines.append(f"{bits} {float(probs[b])!r}")
    _write(args.out, "\n".join(lines) + "\n")
    return EXIT_OK


def cmd_verify(args) -> int:
    suites = verify.SUITES if args.suite == "all" else (args.suite,)
    ok = True
    for name in suites:
        for check in verify.run_suite(name, args.max_n, args.inject_fault, args.seed, args.tol):
            status = "PASS" if check.ok else "FAIL"
            print(f"{status} {check.suite:<9} {check.name:<40} {check.detail}".rstrip())
            ok &= check.ok
    print("ALL PASS" if ok else "FAILURES")
    return EXIT_OK if ok else EXIT_FAIL


def cmd_lightcone(args) -> int:
    if not 1 <= args.p <= args.N:
        raise UsageError(f"--p must be in 1..{args.N}")
    if args.t_max < 0:
        raise UsageError("--t-max must be non-negative")
    cone = sp.render_lightcone(args.p, args.axis, args.N, args.t_max)
    _write(args.out, cone.to_svg() if args.format == "svg" else cone.to_text())
    return EXIT_OK


def _parse_register(text: str, n: int) -> tuple[int, ...]:
    if len(text) != n or set(text) - {"0", "1"}:
        raise UsageError(f"register {text!r} must be a {n}-bit string (layout for n={n})")
    return tuple(int(c) for c in text)


def cmd_readout_demo(args) -> int:
    parts = args.state.split(",")
    if len(parts) not in (1, 2):
        raise UsageError("--state takes 'r' or 'r1,r2'")
    r1 = _parse_register(parts[0], args.n)
    r2 = _parse_register(parts[1], args.n) if len(parts) == 2 else r1
    state = ro.mirror_pair_state(args.n, r1, r2)
    try:
        transcript, _ = ro.run_protocol(state, args.n, args.model, rng=args.seed)
    except ro.ReadoutError as exc:
        raise UsageError(str(exc)) from None
    _write(args.out, transcript.to_json())
    return EXIT_OK


def cmd_detect_length(args) -> int:
    if args.N < 1 or args.N > sv.MAX_QUBITS:
        raise UsageError(f"--N must be in 1..{sv.MAX_QUBITS}")
    oracles = ro.hidden_chain(args.N, shots=args.shots, rng=args.seed)
    result = ro.detect_chain_length(*oracles, t_max=args.t_max, tol=args.tol)
    signal = " ".join(repr(v) for v in result.signal)
    print(f"signal {signal}")
    if not result.conclusive:
        print(f"inconclusive: no revival within t_max={args.t_max}")
        return EXIT_FAIL
    print(f"N {result.n_sites}")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="qcachain", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("compile", help="lower a circuit file to a schedule file")
    p.add_argument("--in", dest="input", required=True)
    p.add_argument("--out")
    p.set_defaults(func=cmd_compile)

    p = sub.add_parser("simulate", help="run a schedule on |0...0> and report the final state")
    p.add_argument("--in", dest="input", required=True)
    p.add_argument("--out")
    p.add_argument("--N", type=int)
    p.add_argument("--init", help="initial basis state, qubit 1 first")
    p.add_argument("--amplitudes", action="store_true")
    p.add_argument("--cutoff", type=float, default=1e-15, help="omit basis states with probability below this")
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("verify", help="run a verification suite")
    p.add_argument("suite", choices=verify.SUITES + ("all",))
    p.add_argument("--max-n", type=int)
    p.add_argument("--seed", type=int, default=DEFAULT_SEED)
    p.add_argument("--tol", type=float, default=DEFAULT_TOL)
    p.add_argument("--inject-fault", action="store_true", help="corrupt the step map (self-test)")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("lightcone", help="render the spread of a propagated Pauli")
    p.add_argument("--p", type=int, required=True)
    p.add_argument("--axis", choices=("X", "Y", "Z"), default="Z")
    p.add_argument("--N", type=int, required=True)
    p.add_argument("--t-max", type=int)
    p.add_argument("--format", choices=("text", "svg"), default="text")
    p.add_argument("--out")
    p.set_defaults(func=cmd_lightcone)

    p = sub.add_parser("readout-demo", help="run the global-spin readout on a prepared register")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--state", required=True, help="'r' (deterministic) or 'r1,r2' (two branches)")
    p.add_argument("--seed", type=int, default=DEFAULT_SEED)
    p.add_argument("--model", choices=sv.MODELS, default="coherent")
    p.add_argument("--out")
    p.set_defaults(func=cmd_readout_demo)

    p = sub.add_parser("detect-length", help="recover a hidden chain length from <S_Z(t)>")
    p.add_argument("--N", type=int, required=True, help="hidden chain length")
    p.add_argument("--t-max", type=int, default=None)
    p.add_argument("--seed", type=int, default=DEFAULT_SEED)
    p.add_argument("--shots", type=int, default=0)
    p.add_argument("--tol", type=float, default=DEFAULT_TOL)
    p.set_defaults(func=cmd_detect_length)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.command == "lightcone" and args.t_max is None:
        args.t_max = args.N + 1
    if args.command == "detect-length" and args.t_max is None:
        args.t_max = 2 * (args.N + 1)
    try:
        RunConfig.from_args(args)
        return args.func(args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
