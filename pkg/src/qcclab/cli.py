"""Command-line entry point.

Subcommands: check-catastrophic, build-qcc, print-stabilizers, simulate,
verify-statevec, viterbi. Machine-readable output goes to stdout,
diagnostics to stderr. Exit codes: 0 success, 2 input error, 3 domain
rejection (catastrophic parent and similar).
"""

from __future__ import annotations

import argparse
import json
import sys
from concurrent.futures import ProcessPoolExecutor

import numpy as np

from . import __version__
from .channel import (
    ChannelModel,
    ChannelSpec,
    measure_distance,
    run_trials,
    union_bound,
)
from .convcode import ConvCode, build_trellis, viterbi_decode
from .gfpoly import RankDeficientError, catastrophic_check
from .pauli import PauliWindow
from .qcc import CatastrophicParentError, QccCode, op_to_text
from .statevec import StateVector, decode_step_eq1, encode_eq1, fidelity, verify_logical

EXIT_OK = 0
EXIT_INPUT = 2
EXIT_DOMAIN = 3


class InputError(Exception):
    pass


def _load_code(path: str) -> ConvCode:
    try:
        if path == "-":
            doc = json.load(sys.stdin)
        else:
            with open(path) as fh:
                doc = json.load(fh)
        return ConvCode.from_json(doc)
    except (OSError, json.JSONDecodeError, ValueError, KeyError, TypeError) as exc:
        raise InputError(f"cannot read code descriptor {path!r}: {exc}") from exc


def cmd_check_catastrophic(args) -> int:
    code = _load_code(args.code)
    try:
        verdict = catastrophic_check(code.G)
    except RankDeficientError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DOMAIN
    doc = {
        "version": __version__,
        "verdict": verdict.verdict.value,
        "witness": verdict.witness.to_json(),
    }
    if not verdict.is_catastrophic:
        doc["delay"] = verdict.delay
        if verdict.delay > 0:
            print(
                f"note: minor gcd is D^{verdict.delay}; inversion needs "
                f"{verdict.delay} blocks of look-ahead",
                file=sys.stderr,
            )
    print(json.dumps(doc))
    return EXIT_OK


def _build(args) -> QccCode:
    code = _load_code(args.code)
    try:
        return QccCode(code, args.window)
    except CatastrophicParentError:
        raise
    except ValueError as exc:
        raise InputError(str(exc)) from exc


def cmd_build_qcc(args) -> int:
    qcc = _build(args)
    doc = {"version": __version__}
    doc.update(qcc.to_json())
    print(json.dumps(doc, indent=2))
    return EXIT_OK


def cmd_print_stabilizers(args) -> int:
    qcc = _build(args)
    print(f"# qcclab {__version__}")
    print(f"# registers={qcc.L} step={qcc.regs_per_block} logical={qcc.k_info}")
    for t in qcc.templates:
        pat = op_to_text(t.pattern)
        print(f"template {t.kind} offset={t.offset} step={t.step} {pat}")
    stab = qcc.stabilizer
    for g in stab.generators:
        print(f"generator {op_to_text(g)}")
    for i, (lx, lz) in enumerate(zip(stab.logical_x, stab.logical_z)):
        print(f"logical-x {i} {op_to_text(lx)}")
        print(f"logical-z {i} {op_to_text(lz)}")
    return EXIT_OK


def _simulate_range(payload):
    code_doc, window, model, p_err, n, seed, offset = payload
    code = QccCode(ConvCode.from_json(code_doc), window)
    spec = ChannelSpec(p_err, ChannelModel(model), code.N)
    rep = run_trials(code, spec, n, seed, trial_offset=offset)
    return rep.logical_block_errors, rep.info_symbol_errors


def cmd_simulate(args) -> int:
    qcc = _build(args)
    model = ChannelModel(args.model)
    try:
        dist = measure_distance(qcc)
        d = dist.d
        b_d = dist.count_at_d
    except ValueError as exc:
        print(f"note: distance search skipped ({exc})", file=sys.stderr)
        d, b_d = None, None

    print(f"# qcclab {__version__}")
    print("p,trials,Pe_hat,Pe_lo,Pe_hi,Pb_hat,Pb_lo,Pb_hi,Pe_bound,Pb_bound")
    for p_err in args.p:
        spec = ChannelSpec(p_err, model, qcc.N)
        if args.jobs > 1:
            per = -(-args.trials // args.jobs)
            ranges = []
            off = 0
            while off < args.trials:
                n = min(per, args.trials - off)
                ranges.append(
                    (qcc.parent.to_json(), qcc.window_blocks, model.value, p_err,
                     n, args.seed, off)
                )
                off += n
            with ProcessPoolExecutor(max_workers=args.jobs) as pool:
                parts = list(pool.map(_simulate_range, ranges))
            block_errors = sum(p[0] for p in parts)
            symbol_errors = sum(p[1] for p in parts)
            base = run_trials(qcc, spec, 0, args.seed)
            rep_counts = (block_errors, symbol_errors, args.trials)
            payload_n = base.payload_qubits
            timesteps = base.timesteps
            from .channel import TrialReport, wilson_interval

            rep = TrialReport(
                trials=args.trials,
                timesteps=timesteps,
                payload_qubits=payload_n,
                payload_indices=base.payload_indices,
                logical_block_errors=block_errors,
                info_symbol_errors=symbol_errors,
                decoded_info_symbols=args.trials * payload_n,
                seed=args.seed,
                p_err=p_err,
                model=model.value,
            )
        else:
            rep = run_trials(qcc, spec, args.trials, args.seed)
        pe_lo, pe_hi = rep.p_e_interval
        pb_lo, pb_hi = rep.p_b_interval
        if d is not None:
            pe_bound, pb_bound = union_bound(b_d, b_d, d, qcc.parent.k, p_err)
            bound_cols = f"{pe_bound:.6g},{pb_bound:.6g}"
        else:
            bound_cols = "nan,nan"
        print(
            f"{p_err:.6g},{rep.trials},{rep.p_e_hat:.6g},{pe_lo:.6g},{pe_hi:.6g},"
            f"{rep.p_b_hat:.6g},{pb_lo:.6g},{pb_hi:.6g},{bound_cols}"
        )
    return EXIT_OK


def cmd_verify_statevec(args) -> int:
    """Reproduction suite for the explicit rate-1/4 circuits."""
    from .qcc import codeword_form
    from .gfpoly import PolyMatrix

    failures = 0

    def check(name: str, ok: bool) -> None:
        nonlocal failures
        print(f"{'PASS' if ok else 'FAIL'} {name}")
        if not ok:
            failures += 1

    parent = ConvCode(PolyMatrix.from_coeffs([[[1, 0, 1], [1, 1, 1]]], 2))
    for N in (2, 3):
        form_parent = ConvCode(
            PolyMatrix.from_coeffs([[[1, 0, 1], [1, 1, 1]]], N)
        ) if N != 2 else parent
        form = codeword_form(form_parent)
        for T in (1, 2, 3):
            circuit = encode_eq1([1] + [0] * (T - 1), N, T)
            direct = form.amplitudes([1] + [0] * (T - 1), T)
            f = abs(np.vdot(circuit.amp.ravel(), direct.ravel())) ** 2
            check(f"encode N={N} T={T} circuit-vs-closed-form fidelity", f >= 1 - 1e-9)
    for N in (2, 3):
        info = [1, 0, 1][:3]
        state = encode_eq1(info, N, 3)
        block, rest = decode_step_eq1(state, N, 3)
        k1 = int(np.argmax(block.register_distribution(0)))
        check(f"decode N={N} extracts k1 deterministically", k1 == info[0])
        target = encode_eq1(info[1:], N, 2)
        check(f"decode N={N} remainder re-encodes the tail", fidelity(rest, target) >= 1 - 1e-9)
    qcc = QccCode(parent, 4)
    state = encode_eq1([0, 0, 0, 0], 2, 4)
    ok = all(
        fidelity(state.apply_pauli(g), state) >= 1 - 1e-9
        for g in qcc.stabilizer.generators
    )
    check("stabilizer generators fix the all-zero codeword", ok)
    lx = qcc.stabilizer.logical_x[0]
    check(
        "first spin flip maps codeword 0000 to 1000",
        verify_logical(lx, [0, 0, 0, 0], [1, 0, 0, 0], 2, 4),
    )
    return EXIT_OK if failures == 0 else 1


def cmd_viterbi(args) -> int:
    code = _load_code(args.code)
    try:
        received = json.loads(args.received) if args.received.startswith("[") else None
        if received is None:
            with open(args.received) as fh:
                received = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise InputError(f"cannot read received symbols: {exc}") from exc
    trellis = build_trellis(code, state_cap=args.state_cap)
    path = viterbi_decode(
        trellis, received, traceback=args.traceback, terminated=not args.unterminated
    )
    print(json.dumps({
        "version": __version__,
        "info": list(path.info),
        "metric": path.metric,
    }))
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="qcclab", description=__doc__)
    ap.add_argument("--version", action="version", version=f"qcclab {__version__}")
    sub = ap.add_subparsers(dest="command", required=True)

    def add_code(p):
        p.add_argument("--code", required=True, help="code descriptor JSON file, or - for stdin")

    p = sub.add_parser("check-catastrophic", help="Massey-Sain invertibility test")
    add_code(p)
    p.set_defaults(fn=cmd_check_catastrophic)

    p = sub.add_parser("build-qcc", help="build the windowed quantum code")
    add_code(p)
    p.add_argument("--window", type=int, default=6, help="window length in parent blocks")
    p.set_defaults(fn=cmd_build_qcc)

    p = sub.add_parser("print-stabilizers", help="emit generator and logical strings")
    add_code(p)
    p.add_argument("--window", type=int, default=6)
    p.set_defaults(fn=cmd_print_stabilizers)

    p = sub.add_parser("simulate", help="Monte Carlo decoded-error rates")
    add_code(p)
    p.add_argument("--window", type=int, default=6)
    p.add_argument("--p", type=float, nargs="+", required=True, help="channel error rates")
    p.add_argument("--trials", type=int, default=10000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--model", choices=[m.value for m in ChannelModel],
                   default=ChannelModel.DEPOLARIZING.value)
    p.add_argument("--jobs", type=int, default=1)
    p.set_defaults(fn=cmd_simulate)

    p = sub.add_parser("verify-statevec", help="state-vector reproduction suite")
    p.set_defaults(fn=cmd_verify_statevec)

    p = sub.add_parser("viterbi", help="classical hard-decision decode")
    add_code(p)
    p.add_argument("--received", required=True,
                   help="JSON file of received symbols, or an inline JSON array")
    p.add_argument("--traceback", type=int, default=None)
    p.add_argument("--unterminated", action="store_true")
    p.add_argument("--state-cap", type=int, default=None)
    p.set_defaults(fn=cmd_viterbi)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.fn(args)
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except CatastrophicParentError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DOMAIN


if __name__ == "__main__":
    sys.exit(main())
