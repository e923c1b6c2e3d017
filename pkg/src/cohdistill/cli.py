"""Command-line front end.

Exit codes: 0 success / distillable / distinguishable, 1 negative verdict,
2 input error, 3 zero-probability outcome (``apply`` only).
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path


from . import __version__
from .blocks import BlockDecomposition
from .channels import apply_stochastic, is_pure_coherent_output, validate_channel
from .distill import construct_witness, falsification_search, is_distillable_sio
from .distinguish import can_distinguish_sio, io_discrimination_protocol, verify_discrimination
from .errors import NotDistillable, ValidationError
from .fileio import (
    channel_document,
    digest,
    dumps,
    encode_matrix,
    encode_vector,
    parse_channel_file,
    parse_pure_states_file,
    parse_state_file,
    state_document,
)
from .linalg_core import TolerancePolicy
from .states import (
    distillable_coherence_asymptotic,
    is_incoherent_state,
    random_block_state,
    validate_density,
    validate_pure,
)

EXIT_OK, EXIT_NEGATIVE, EXIT_INPUT, EXIT_ZERO_PROB = 0, 1, 2, 3


class _Done(Exception):
    def __init__(self, doc, code):
        self.doc, self.code = doc, code


def _header(kind, tol, inputs):
    return {
        "kind": kind,
        "tool": "cohdistill",
        "version": __version__,
        "tolerance": tol.to_dict(),
        "input_digest": {name: digest(data) for name, data in inputs.items()},
    }


def _read(path) -> bytes:
    try:
        return Path(path).read_bytes()
    except OSError as exc:
        raise ValidationError(f"cannot read {path}: {exc.strerror}") from None


def _blocks_doc(dec: BlockDecomposition, evidence):
    return [
        {
            "indices": [i + 1 for i in b.indices],
            "weight": b.weight,
            "dim": e.dim,
            "rank": e.rank,
            "full_rank": e.full_rank,
            "zero_weight": b.placeholder,
        }
        for b, e in zip(dec.blocks, evidence)
    ]


def analysis_body(rho, tol):
    rep = is_distillable_sio(rho, tol)
    body = {
        "dim": rho.dim,
        "blocks": _blocks_doc(rep.blocks, rep.per_block),
        "permutation": [i + 1 for i in rep.blocks.permutation],
        "verdicts": {"sio": rep.sio, "ssio": rep.ssio, "smio": rep.smio},
        "rank_one_pairs": [[i + 1, j + 1] for i, j in rep.rank_one_pairs],
        "incoherent": is_incoherent_state(rho, tol),
        "distillable_coherence_bits": distillable_coherence_asymptotic(rho, tol),
        "warnings": list(rep.warnings),
    }
    return rep, body


def _load_state(path, tol):
    data = _read(path)
    return data, validate_density(parse_state_file(data), tol)


def cmd_analyze(args, tol):
    data, rho = _load_state(args.state, tol)
    rep, body = analysis_body(rho, tol)
    doc = {**_header("analysis", tol, {"state": data}), **body}
    return doc, EXIT_OK if rep.sio else EXIT_NEGATIVE


def cmd_witness(args, tol):
    data, rho = _load_state(args.state, tol)
    rep, body = analysis_body(rho, tol)
    head = _header("witness", tol, {"state": data})
    try:
        w = construct_witness(rho, tol, report=rep)
    except NotDistillable as exc:
        return {**head, "distillable": False, "reason": str(exc), "analysis": body}, EXIT_NEGATIVE
    doc = {
        **head,
        "distillable": True,
        "probability": w.probability,
        "unscaled_probability": w.unscaled_probability,
        "scale": w.scale,
        "source_block": [i + 1 for i in w.source_block],
        "c1_index": w.c1_index + 1,
        "kernel_vector": encode_vector(w.kernel_vector.amplitudes),
        "kraus": encode_matrix(w.K),
        "output_state": encode_matrix(w.output.mat),
        "checks": dict(w.checks),
        "channel_path": None,
    }
    if args.output:
        Path(args.output).write_text(dumps(channel_document([w.K])), encoding="utf-8")
        doc["channel_path"] = str(args.output)
    return doc, EXIT_OK


def cmd_apply(args, tol):
    cdata = _read(args.channel)
    sdata, rho = _load_state(args.state, tol)
    ch = validate_channel(parse_channel_file(cdata), tol)
    res = apply_stochastic(ch, rho, tol)
    doc = {
        **_header("apply", tol, {"channel": cdata, "state": sdata}),
        "channel": {
            "incoherent": list(ch.incoherent),
            "strictly_incoherent": list(ch.strictly_incoherent),
            "max_eigenvalue": ch.max_eigenvalue,
            "trace_preserving": ch.trace_preserving,
        },
        "probability": res.probability,
        "zero_probability": res.zero_probability,
    }
    if res.zero_probability:
        return doc, EXIT_ZERO_PROB
    out = res.state
    doc.update({
        "output_state": encode_matrix(out.mat),
        "purity": out.purity(),
        "incoherent": is_incoherent_state(out, tol),
        "pure_coherent": is_pure_coherent_output(out, tol),
    })
    return doc, EXIT_OK


def _protocol_doc(protocol, states, tol):
    return {
        "measurements": [{"label": n + 1, "operator": encode_matrix(m)} for n, m in protocol.measurements],
        "residual": encode_matrix(protocol.residual),
        "kraus": [encode_matrix(k) for k in protocol.kraus_realization],
        "strictly_incoherent": protocol.strictly_incoherent,
        "completeness_error": protocol.completeness_error(),
        "verified": verify_discrimination(protocol, states, tol),
    }


def cmd_distinguish(args, tol):
    data = _read(args.states)
    states = [validate_pure(v, tol) for v in parse_pure_states_file(data)]
    head = _header("distinguish", tol, {"states": data})
    if args.mode == "io":
        protocol = io_discrimination_protocol(states, tol)
        pdoc = _protocol_doc(protocol, states, tol)
        ok = pdoc["verified"]
    else:
        ok, protocol = can_distinguish_sio(states, tol)
        pdoc = _protocol_doc(protocol, states, tol) if ok else None
        ok = bool(ok and pdoc["verified"])
    doc = {**head, "mode": args.mode, "distinguishable": ok, "protocol": pdoc}
    return doc, EXIT_OK if ok else EXIT_NEGATIVE


def _int_list(text):
    try:
        vals = [int(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise ValidationError(f"expected a comma-separated integer list, got {text!r}") from None
    if not vals:
        raise ValidationError("empty integer list")
    return vals


def cmd_random(args, tol):
    if args.kind == "block":
        if not (args.dims and args.ranks):
            raise ValidationError("kind=block needs --dims and --ranks")
        dims, ranks = _int_list(args.dims), _int_list(args.ranks)
    else:
        if args.dim is None:
            raise ValidationError(f"kind={args.kind} needs --dim")
        dims = [args.dim]
        if args.kind == "pure":
            ranks = [1]
        else:
            ranks = [args.rank if args.rank is not None else args.dim]
    rho = random_block_state(dims, ranks, args.seed, tol)
    state_text = dumps(state_document(rho.mat))
    if args.output:
        Path(args.output).write_text(state_text, encoding="utf-8")
    rep, body = analysis_body(rho, tol)
    doc = {
        **_header("random", tol, {"state": state_text.encode("utf-8")}),
        "parameters": {"kind": args.kind, "dims": dims, "ranks": ranks, "seed": args.seed},
        "state_path": str(args.output) if args.output else None,
        "analysis": body,
    }
    if not args.output:
        doc["state"] = state_document(rho.mat)
    return doc, EXIT_OK


def cmd_falsify(args, tol):
    data, rho = _load_state(args.state, tol)
    found = falsification_search(rho, args.trials, args.seed, tol)
    doc = {
        **_header("falsify", tol, {"state": data}),
        "trials": args.trials,
        "seed": args.seed,
        "found": found is not None,
        "kraus": encode_matrix(found[0]) if found else None,
        "probability": found[1] if found else None,
    }
    return doc, EXIT_OK if found else EXIT_NEGATIVE


def _common(p):
    p.add_argument("--tol", type=float, default=1e-9, help="relative threshold rel_eps (default 1e-9)")
    p.add_argument("--abs-floor", type=float, default=1e-12, help="absolute floor (default 1e-12)")
    p.add_argument("--quiet", action="store_true", help="suppress the report on stdout")


def build_parser():
    ap = argparse.ArgumentParser(prog="cohdistill", description="Probabilistic coherence distillation under incoherent operations.")
    ap.add_argument("--version", action="version", version=f"cohdistill {__version__}")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("analyze", help="block decomposition and distillability verdicts")
    p.add_argument("state")
    p.add_argument("--output", help="also write the report here")
    _common(p)
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("witness", help="construct a verified distilling Kraus operator")
    p.add_argument("state")
    p.add_argument("--output", help="write the witness as a single-element channel file")
    _common(p)
    p.set_defaults(func=cmd_witness)

    p = sub.add_parser("apply", help="apply a stochastic channel with post-selection")
    p.add_argument("channel")
    p.add_argument("state")
    p.add_argument("--output", help="also write the report here")
    _common(p)
    p.set_defaults(func=cmd_apply)

    p = sub.add_parser("distinguish", help="discriminate orthogonal pure states under IO or SIO")
    p.add_argument("states")
    p.add_argument("--mode", choices=["io", "sio"], default="io")
    p.add_argument("--output", help="also write the report here")
    _common(p)
    p.set_defaults(func=cmd_distinguish)

    p = sub.add_parser("random", help="generate a seeded random state file")
    p.add_argument("kind", choices=["pure", "mixed", "block"])
    p.add_argument("--dim", type=int)
    p.add_argument("--rank", type=int)
    p.add_argument("--dims", help="comma-separated block dimensions (kind=block)")
    p.add_argument("--ranks", help="comma-separated block ranks (kind=block)")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--output", help="state file to write")
    _common(p)
    p.set_defaults(func=cmd_random)

    p = sub.add_parser("falsify", help="random search for a distilling incoherent operator")
    p.add_argument("state")
    p.add_argument("--trials", type=int, default=10_000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--output", help="also write the report here")
    _common(p)
    p.set_defaults(func=cmd_falsify)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        tol = TolerancePolicy(args.tol, args.abs_floor)
        doc, code = args.func(args, tol)
    except ValidationError as exc:
        doc = {"kind": "error", "tool": "cohdistill", "version": __version__, **exc.to_dict()}
        code = EXIT_INPUT
    text = dumps(doc)
    if code != EXIT_INPUT and args.command != "witness" and args.command != "random" and getattr(args, "output", None):
        Path(args.output).write_text(text, encoding="utf-8")
    if not args.quiet:
        sys.stdout.write(text)
    return code


if __name__ == "__main__":
    raise SystemExit(main())
