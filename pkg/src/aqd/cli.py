"""Command-line entry point: ``aqd <command> [options]``.

Exit status: 0 on success or a clean protocol abort, 1 on a verification
failure or an unusable run config, 2 on a usage error.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

import numpy as np

from . import analysis, pauligroup, protocol, statelib

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


def _emit(args, text: str, doc=None):
    """Print ``doc`` as JSON under ``--json``, otherwise ``text``."""
    if args.json:
        print(json.dumps(doc, indent=2))
    else:
        print(text)


def _write(path: str, content: str):
    Path(path).write_text(content, encoding="utf-8")


# --- commands -----------------------------------------------------------------

def cmd_groups(args) -> int:
    if args.name is None:
        if args.subgroups is not None:
            raise UsageError("--subgroups needs a group name")
        groups = list(pauligroup.CATALOG.values())
        _emit(args, "\n".join(f"{g.name:<10} order {g.order:>2}  {g}" for g in groups),
              [g.to_json() for g in groups])
        return EXIT_OK
    try:
        g = pauligroup.get_group(args.name)
    except KeyError as e:
        raise UsageError(e.args[0]) from None
    doc = dict(g.to_json(), generators=[str(w) for w in g.generators])
    lines = [f"{g.name}: order {g.order}",
             "elements: " + ", ".join(str(w) for w in g.canonical),
             "generators: " + ", ".join(doc["generators"])]
    if args.subgroups is not None:
        try:
            subs = pauligroup.subgroups_of_order(g, args.subgroups)
        except pauligroup.GroupError as e:
            raise UsageError(str(e)) from None
        by_elements = {frozenset(h.canonical): name for name, h in pauligroup.CATALOG.items()}
        doc["subgroups"] = []
        lines.append(f"{len(subs)} subgroups of order {args.subgroups}:")
        for h in subs:
            name = by_elements.get(frozenset(h.canonical))
            doc["subgroups"].append({"name": name, "elements": [str(w) for w in h.canonical]})
            lines.append(f"  {name or '-':<10} " + ", ".join(str(w) for w in h.canonical))
    _emit(args, "\n".join(lines), doc)
    return EXIT_OK


def cmd_states(args) -> int:
    states = _load_states(args.states)
    lines = [f"{s.name:<12} {s.n} qubits  [{s.provenance}]  {s.description}" for s in states.values()]
    _emit(args, "\n".join(lines), [s.to_json() for s in states.values()])
    return EXIT_OK


def _load_states(path):
    if path is None:
        return statelib.STATES
    try:
        return statelib.load_states(path)
    except (OSError, ValueError, KeyError) as e:
        raise UsageError(f"cannot read state file {path}: {e}") from None


def cmd_verify_tables(args) -> int:
    states = _load_states(args.states)
    t1 = statelib.verify_table1(states)
    t2 = statelib.verify_table2()
    ok = t1.ok and t2.ok
    _emit(args, t1.format() + "\n\n" + t2.format(),
          {"ok": ok, "table1": t1.to_json(), "table2": t2.to_json()})
    return EXIT_OK if ok else EXIT_FAIL


def _run_config(args) -> protocol.ProtocolConfig:
    if args.config:
        try:
            doc = json.loads(Path(args.config).read_text())
        except (OSError, ValueError) as e:
            raise UsageError(f"cannot read config {args.config}: {e}") from None
    else:
        if not (args.state and args.bob and args.alice):
            raise UsageError("run needs --config or all of --state, --bob, --alice")
        doc = {"state_name": args.state, "bob_group_name": args.bob, "alice_group_name": args.alice}
    overrides = {
        "copies": args.copies,
        "decoy_per_leg": args.decoys,
        "error_threshold": args.threshold,
        "eve": None if args.eve is None else args.eve.replace("-", "_"),
        "eve_fraction": args.eve_fraction,
        "seed": args.seed,
        "encoded_qubits_bob": args.encoded,
        "travel_qubits": args.travel,
    }
    if args.noise:
        overrides["noise"] = {"kind": args.noise, "rate": args.eta}
    if args.secret_state:
        overrides["secret_initial_state"] = True
    doc.update({k: v for k, v in overrides.items() if v is not None})
    return protocol.ProtocolConfig.from_json(doc)


def cmd_run(args) -> int:
    try:
        cfg = _run_config(args)
        setup = protocol.resolve(cfg)
        rng = np.random.default_rng(cfg.seed)
        bob_msg = args.bob_msg or protocol.random_message(setup.bob_bits * cfg.copies, rng)
        alice_msg = args.alice_msg or protocol.random_message(setup.alice_bits * cfg.copies, rng)
        tr = protocol.ProtocolRun(setup, bob_msg, alice_msg, rng).run_to_end()
    except (protocol.ConfigError, ValueError) as e:
        print(f"config error: {e}", file=sys.stderr)
        return EXIT_FAIL
    text = tr.to_json()
    if args.out:
        _write(args.out, text + "\n")
    summary = {
        "aborted": tr.aborted,
        "abort_stage": tr.abort_stage,
        "decoy_error_rates": tr.leg_rates,
        "bob_message": bob_msg,
        "alice_message": alice_msg,
        "decoded_bob_message": tr.decoded_bob_message,
        "decoded_alice_message": tr.decoded_alice_message,
        "exact_recovery": (not tr.aborted and tr.decoded_bob_message == bob_msg
                           and tr.decoded_alice_message == alice_msg),
    }
    if tr.aborted:
        lines = [f"aborted at {tr.abort_stage}: decoy error rates {tr.leg_rates}"]
    else:
        lines = [
            f"Bob   sent {bob_msg}  Alice decoded {tr.decoded_bob_message}",
            f"Alice sent {alice_msg}  Bob decoded {tr.decoded_alice_message}",
            f"decoy error rates {tr.leg_rates}",
            "exact recovery" if summary["exact_recovery"] else "messages differ",
        ]
    _emit(args, "\n".join(lines), summary)
    return EXIT_OK


def cmd_sweep(args) -> int:
    try:
        grid = analysis.eta_grid(args.step, args.start, args.stop)
    except ValueError as e:
        raise UsageError(str(e)) from None
    points = analysis.sweep(args.model, args.travel, grid)
    if args.out:
        _write(args.out, analysis.sweep_json(points) if args.out.endswith(".json")
               else analysis.sweep_csv(points))
    err = analysis.max_abs_err(points)
    if args.json:
        print(analysis.sweep_json(points))
    elif args.out:
        print(f"{len(points)} points written to {args.out}; max |closed - simulated| = {err:.3e}")
    else:
        print(analysis.sweep_csv(points), end="")
        print(f"max |closed - simulated| = {err:.3e}")
    return EXIT_OK


def cmd_efficiency(args) -> int:
    if args.preset:
        inp = analysis.PRESETS[args.preset]
    else:
        if None in (args.c, args.Q, args.t, args.b):
            raise UsageError("efficiency needs --preset or all of --c, --Q, --t, --b")
        try:
            inp = analysis.EfficiencyInput(args.c, args.Q, args.t, args.b)
        except ValueError as e:
            raise UsageError(str(e)) from None
    try:
        if args.qsdc:
            frac = analysis.qsdc_amortized_efficiency(inp, args.copies)
        else:
            frac = analysis.efficiency_fraction(
                analysis.EfficiencyInput(inp.c, inp.Q, inp.t, inp.b, copies=args.copies or 1))
    except ZeroDivisionError as e:
        raise UsageError(str(e)) from None
    n, m = inp.b, inp.c - inp.b
    leak = analysis.leakage_bits(min(m, n), max(m, n), secret_initial_state=args.qsdc)
    doc = {
        "c": inp.c, "Q": inp.Q, "t": inp.t, "b": inp.b,
        "copies": args.copies, "qsdc": args.qsdc,
        "ratio": f"{inp.c}/{inp.qubits + inp.b}",
        "efficiency": f"{frac.numerator}/{frac.denominator}",
        "efficiency_float": float(frac),
        "percent": round(100 * float(frac), 1),
        "leakage_bits": leak,
    }
    _emit(args, f"efficiency {doc['ratio']} per copy, {doc['efficiency']} = {doc['percent']}%  leakage {leak} bits", doc)
    return EXIT_OK


# --- parser -------------------------------------------------------------------

def _qubits(text: str) -> tuple[int, ...]:
    try:
        return tuple(int(q) for q in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated qubit indices, got {text!r}")


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", help="machine-readable output")
    common.add_argument("--out", help="write the command's data file here")
    common.add_argument("--seed", type=int, help="seed for the random generator")

    p = argparse.ArgumentParser(prog="aqd", description="Asymmetric quantum dialogue toolkit.")
    sub = p.add_subparsers(dest="command", required=True)

    g = sub.add_parser("groups", parents=[common], help="inspect the operator-group catalog")
    g.add_argument("name", nargs="?")
    g.add_argument("--subgroups", type=int, metavar="M", help="list subgroups of order M")
    g.set_defaults(func=cmd_groups)

    s = sub.add_parser("states", parents=[common], help="list the state catalog")
    s.add_argument("--states", help="JSON state file merged over the built-in catalog")
    s.set_defaults(func=cmd_states)

    v = sub.add_parser("verify-tables", parents=[common], help="check the densecoding tables")
    v.add_argument("--states", help="JSON state file merged over the built-in catalog")
    v.set_defaults(func=cmd_verify_tables)

    r = sub.add_parser("run", parents=[common], help="simulate one protocol round")
    r.add_argument("--config", help="ProtocolConfig JSON; flags override its fields")
    r.add_argument("--state")
    r.add_argument("--bob", help="Bob's group")
    r.add_argument("--alice", help="Alice's group")
    r.add_argument("--copies", type=int)
    r.add_argument("--decoys", type=int, help="decoys per leg")
    r.add_argument("--threshold", type=float, help="decoy error rate that aborts")
    r.add_argument("--eve", choices=["none", "intercept-resend", "intercept_resend"])
    r.add_argument("--eve-fraction", type=float)
    r.add_argument("--noise", choices=["AD", "PD"])
    r.add_argument("--eta", type=float, default=0.0)
    r.add_argument("--encoded", type=_qubits, help="Bob's encoded qubits, e.g. 0,2")
    r.add_argument("--travel", type=_qubits, help="travel qubits Alice encodes on")
    r.add_argument("--secret-state", action="store_true", help="hide the initial state")
    r.add_argument("--bob-msg")
    r.add_argument("--alice-msg")
    r.set_defaults(func=cmd_run)

    w = sub.add_parser("sweep", parents=[common], help="fidelity against decoherence rate")
    w.add_argument("--model", type=str.upper, choices=analysis.MODELS, default="AD")
    w.add_argument("--travel", type=int, choices=(1, 2), default=1)
    w.add_argument("--step", type=float, default=0.05)
    w.add_argument("--start", type=float, default=0.0)
    w.add_argument("--stop", type=float, default=1.0)
    w.set_defaults(func=cmd_sweep)

    e = sub.add_parser("efficiency", parents=[common], help="qubit efficiency and leakage")
    e.add_argument("--preset", choices=sorted(analysis.PRESETS))
    e.add_argument("--c", type=int)
    e.add_argument("--Q", type=int)
    e.add_argument("--t", type=int)
    e.add_argument("--b", type=int)
    e.add_argument("--copies", type=int, help="number of copies (QSDC: omit for the limit)")
    e.add_argument("--qsdc", action="store_true", help="initial state sent once by QSDC")
    e.set_defaults(func=cmd_efficiency)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except UsageError as e:
        parser.print_usage(sys.stderr)
        print(f"aqd {args.command}: error: {e}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
