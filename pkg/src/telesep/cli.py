"""telesep command-line interface.

Usage:
    telesep teleport --weights 0.5,0.25,0.25,0 --bloch 1,0,0
    telesep disentangle --scenario universal --state phi_plus.json
    telesep optimize [--grid-step 0.05] [--refine-tol 1e-4] [--skip-a15]
    telesep verify --samples 1000 --seed 42
    telesep reproduce [--format csv]
    telesep sweep --lambda-num 11 > sweep.csv

Exit codes: 0 pass, 1 semantic failure, 2 usage error, 3 invariant
violation, 4 scenario premise violation.
"""

from __future__ import annotations

import argparse
import csv
import io
import math
import os
import sys
from pathlib import Path

import numpy as np

from telesep import serialize, suites
from telesep.channels import BellMixture, channel_to_map
from telesep.disentangle import (
    check_both_sides_claim,
    feasibility_sweep,
    optimize_equatorial,
    run_scenario,
    sweep_to_csv,
    verify_theorem,
)
from telesep.errors import InvariantViolation, PremiseViolation, TelesepError
from telesep.qstate import DensityMatrix, bloch_to_density, density_to_bloch, partial_trace
from telesep.sampling import DEFAULT_SEED, make_rng
from telesep.teleport import bell_protocol_output, teleport_party_of_bipartite

EXIT_OK = 0
EXIT_FAIL = 1
EXIT_USAGE = 2
EXIT_INVARIANT = 3
EXIT_PREMISE = 4

SEED_ENV = "DISENT_SEED"


class UsageError(Exception):
    pass


def _floats(text: str, count: int, flag: str) -> list[float]:
    try:
        values = [float(x) for x in text.split(",")]
    except ValueError:
        raise UsageError(f"{flag}: expected {count} comma-separated numbers, got {text!r}") from None
    if len(values) != count or not all(math.isfinite(v) for v in values):
        raise UsageError(f"{flag}: expected {count} finite comma-separated numbers, got {text!r}")
    return values


def _seed(args) -> int:
    if args.seed is not None:
        seed = args.seed
    else:
        env = os.environ.get(SEED_ENV)
        try:
            seed = int(env) if env else DEFAULT_SEED
        except ValueError:
            raise UsageError(f"{SEED_ENV}={env!r} is not an integer") from None
    if not 0 <= seed < 2**64:
        raise UsageError(f"seed must be a 64-bit unsigned integer, got {seed}")
    return seed


def _existing_file(path: str) -> Path:
    p = Path(path)
    if not p.is_file():
        raise UsageError(f"no such file: {path}")
    return p


def _bloch_list(rho: DensityMatrix) -> list[float]:
    return density_to_bloch(rho.mat).as_array().tolist()


def _emit(payload, fmt: str, pretty_lines: list[str] | None = None) -> None:
    if fmt == "pretty" and pretty_lines is not None:
        print("\n".join(pretty_lines))
    elif fmt == "csv" and isinstance(payload, dict):
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(["key", "value"])
        for key, value in payload.items():
            writer.writerow([key, serialize.dumps(value, indent=None)])
        sys.stdout.write(buf.getvalue())
    else:
        print(serialize.dumps(payload))


def _fmt(x: float) -> str:
    return serialize.fmt_float(x)


# ---------------------------------------------------------------------------
# Commands
# ---------------------------------------------------------------------------


def _bell_mixture_from_flag(text: str) -> BellMixture:
    w = np.array(_floats(text, 4, "--weights"))
    if np.any(w < -1e-12) or np.any(w > 1 + 1e-12) or abs(w.sum() - 1) > 1e-9:
        raise InvariantViolation(f"--weights {text} is not a probability vector (sum {w.sum():.17g})")
    w = np.clip(w, 0.0, 1.0)
    return BellMixture.from_weights(w / w.sum())


def cmd_teleport(args) -> int:
    if (args.bloch is None) == (args.state is None):
        raise UsageError("give exactly one of --bloch or --state")
    state_path = _existing_file(args.state) if args.state else None
    channel = _bell_mixture_from_flag(args.weights)
    lambdas = channel_to_map(channel).lambdas

    if state_path is None:
        state = bloch_to_density(_floats(args.bloch, 3, "--bloch"))
    else:
        state = serialize.read_state(state_path)

    payload = {"channel": channel.to_json_dict(), "lambdas": list(lambdas)}
    if state.n_qubits == 1:
        out, traces = bell_protocol_output(state, channel)
        payload.update(
            input_bloch=_bloch_list(state),
            output_bloch=_bloch_list(out),
            output_state=out,
            traces=traces,
        )
        if args.shots:
            rng = make_rng(_seed(args))
            probs = np.array([t.probability for t in traces])
            counts = rng.multinomial(args.shots, probs / probs.sum())
            payload["shots"] = {t.outcome_label: int(c) for t, c in zip(traces, counts)}
        lines = [
            f"input Bloch   {_vec(payload['input_bloch'])}",
            f"channel w     {_vec(channel.weights)}",
            f"lambdas       {_vec(lambdas)}",
            f"output Bloch  {_vec(payload['output_bloch'])}",
        ]
    elif state.n_qubits == 2:
        out = teleport_party_of_bipartite(state, args.party, channel)
        payload.update(party=args.party, input_state=state, output_state=out)
        lines = [
            f"channel w     {_vec(channel.weights)}",
            f"lambdas       {_vec(lambdas)}",
            f"party {args.party} Bloch before {_vec(_bloch_list(partial_trace(state, [args.party - 1])))}",
            f"party {args.party} Bloch after  {_vec(_bloch_list(partial_trace(out, [args.party - 1])))}",
        ]
    else:
        raise UsageError("--state must hold a one- or two-qubit state")
    _emit(payload, args.format, lines)
    return EXIT_OK


def _vec(values) -> str:
    return "(" + ", ".join(f"{float(v):.10g}" for v in values) + ")"


def cmd_disentangle(args) -> int:
    state = serialize.read_state(_existing_file(args.state))
    if state.n_qubits != 2:
        raise UsageError("--state must hold a two-qubit state")
    try:
        report = run_scenario(args.scenario, state)
    except PremiseViolation as exc:
        marginal = partial_trace(state, [1])
        print(f"premise violation: {exc}", file=sys.stderr)
        print(serialize.dumps({"error": str(exc), "party2_marginal": marginal}), file=sys.stderr)
        return EXIT_PREMISE
    lines = [
        f"scenario       {report.scenario}",
        f"lambdas        {_vec(report.lambdas)}",
        f"separable      {report.separable}",
        f"min PT eig     {_fmt(report.min_pt_eigenvalue)}",
        f"eta1, eta2     {report.eta1}, {report.eta2}",
        f"marginal fid.  {_fmt(report.marginal_fidelity1)}, {_fmt(report.marginal_fidelity2)}",
    ]
    _emit(report, args.format, lines)
    return EXIT_OK if report.separable else EXIT_FAIL


def cmd_optimize(args) -> int:
    try:
        result = optimize_equatorial(args.grid_step, args.refine_tol, use_a15=not args.skip_a15)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    lines = [
        f"lambda_max   {_fmt(result.lambda_max)}",
        f"witness      l={_fmt(result.l)} m={_fmt(result.m)} n={_fmt(result.n)}",
        f"iterations   {result.iterations}",
        f"physical     {_vec(result.certificate.physical)}",
        f"disentangle  {_vec(result.certificate.disentangling)}",
    ]
    _emit(result, args.format, lines)
    return EXIT_OK


def run_verify(samples: int, seed: int) -> dict:
    rng = make_rng(seed)
    theorem = verify_theorem(samples, rng)
    lemma = suites.lemma_round_trip(samples, rng)
    side = max(1, math.isqrt(samples - 1) + 1) if samples > 1 else 1
    protocol = suites.protocol_equivalence(side, side, rng)
    return {
        "seed": seed,
        "samples": samples,
        "theorem_mismatches": len(theorem.mismatches) + len(theorem.random_state_failures),
        "theorem_boundary_excluded": theorem.boundary_excluded,
        "lemma_mismatches": len(lemma),
        "protocol_mismatches": len(protocol),
    }


def cmd_verify(args) -> int:
    if args.samples < 1:
        raise UsageError("--samples must be >= 1")
    summary = run_verify(args.samples, _seed(args))
    total = summary["theorem_mismatches"] + summary["lemma_mismatches"] + summary["protocol_mismatches"]
    lines = [f"{k:28s} {v}" for k, v in summary.items()]
    lines.append("PASS" if total == 0 else "FAIL")
    _emit(summary, args.format, lines)
    return EXIT_OK if total == 0 else EXIT_FAIL


def run_reproduce(seed: int) -> list[dict]:
    rows = []

    w = suites.werner_check()
    rows.append(
        {
            "check": "werner_channel",
            "expected": "lambdas=1/3 (1e-14); Bloch (1,0,0)->(1/3,0,0) (1e-12)",
            "observed": f"lambda err {w['lambda_error']:.3g}; Bloch err {w['bloch_error']:.3g}",
            "pass": w["lambda_error"] <= 1e-14 and w["bloch_error"] <= 1e-12,
        }
    )

    opt = optimize_equatorial()
    rows.append(
        {
            "check": "equatorial_optimum",
            "expected": "lambda_max=0.5+-1e-3; |l|,|m|,|n|<=1e-3",
            "observed": f"lambda_max={opt.lambda_max:.6g} l={opt.l:.3g} m={opt.m:.3g} n={opt.n:.3g}",
            "pass": abs(opt.lambda_max - 0.5) <= 1e-3 and max(abs(opt.l), abs(opt.m), abs(opt.n)) <= 1e-3,
        }
    )

    failures, worst = suites.exact_protocol(100, make_rng(seed))
    rows.append(
        {
            "check": "exact_protocol",
            "expected": "100 inputs: marginals kept (1e-12), PPT, P(P1)=P(P2)=1/2",
            "observed": f"{len(failures)} failures; max marginal distance {worst:.3g}",
            "pass": not failures,
        }
    )

    theorem = verify_theorem(1000, make_rng(seed))
    bad = len(theorem.mismatches) + len(theorem.random_state_failures)
    rows.append(
        {
            "check": "sum_lambda_criterion",
            "expected": "1000 triples: 0 mismatches",
            "observed": f"{bad} mismatches ({theorem.boundary_excluded} on boundary)",
            "pass": bad == 0,
        }
    )

    both = check_both_sides_claim([0.01, 0.1, 0.5])
    rows.append(
        {
            "check": "both_sides_unphysical",
            "expected": "eps>0 unphysical; eps=0 physical",
            "observed": "; ".join(
                f"eps={r.eps:g}: min choi eig {r.choi_min_eigenvalue:.3g}" for r in both.rows
            ),
            "pass": both.claim_holds,
        }
    )
    return rows


def cmd_reproduce(args) -> int:
    rows = run_reproduce(_seed(args))
    n_pass = sum(r["pass"] for r in rows)
    if args.format == "csv":
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(["check", "expected", "observed", "status"])
        for r in rows:
            writer.writerow([r["check"], r["expected"], r["observed"], "PASS" if r["pass"] else "FAIL"])
        sys.stdout.write(buf.getvalue())
    elif args.format == "json":
        print(serialize.dumps({"rows": rows, "passed": n_pass, "total": len(rows)}))
    else:
        width = max(len(r["check"]) for r in rows)
        for r in rows:
            mark = "PASS" if r["pass"] else "FAIL  <<<"
            print(f"{r['check']:{width}s}  expected: {r['expected']}")
            print(f"{'':{width}s}  observed: {r['observed']}  {mark}")
        print(f"{n_pass}/{len(rows)} pass")
    return EXIT_OK if n_pass == len(rows) else EXIT_FAIL


def cmd_sweep(args) -> int:
    if args.lambda_num < 2:
        raise UsageError("--lambda-num must be >= 2")
    lambdas = np.linspace(args.lambda_start, args.lambda_stop, args.lambda_num)
    sys.stdout.write(sweep_to_csv(feasibility_sweep(lambdas, args.l, args.m, args.n)))
    return EXIT_OK


# ---------------------------------------------------------------------------
# Parser
# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=None, help=f"RNG seed (default ${SEED_ENV} or {DEFAULT_SEED})")
    common.add_argument("--format", choices=["json", "csv", "pretty"], default="pretty")

    parser = argparse.ArgumentParser(prog="telesep", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("teleport", parents=[common], help="teleport a qubit through a Bell mixture")
    p.add_argument("--weights", required=True, help="w1,w2,w3,w4 over psi+,psi-,phi+,phi-")
    p.add_argument("--bloch", help="x,y,z of the input qubit")
    p.add_argument("--state", help="state JSON file (one or two qubits)")
    p.add_argument("--party", type=int, choices=[1, 2], default=2, help="party to teleport for two-qubit input")
    p.add_argument("--shots", type=int, default=0, help="also sample this many seeded measurement outcomes")
    p.set_defaults(func=cmd_teleport)

    p = sub.add_parser("disentangle", parents=[common], help="run a disentanglement scenario on party 2")
    p.add_argument("--scenario", required=True, choices=["universal", "equatorial", "commuting"])
    p.add_argument("--state", required=True, help="two-qubit state JSON file")
    p.set_defaults(func=cmd_disentangle)

    p = sub.add_parser("optimize", parents=[common], help="maximize the equatorial shrink factor")
    p.add_argument("--grid-step", type=float, default=0.05)
    p.add_argument("--refine-tol", type=float, default=1e-4)
    p.add_argument("--skip-a15", action="store_true", help="drop the disentanglement constraints")
    p.set_defaults(func=cmd_optimize)

    p = sub.add_parser("verify", parents=[common], help="run the seeded oracle suites")
    p.add_argument("--samples", type=int, default=1000)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("reproduce", parents=[common], help="reproduce every headline number")
    p.set_defaults(func=cmd_reproduce)

    p = sub.add_parser("sweep", parents=[common], help="CSV of the closed-form conditions along lambda")
    p.add_argument("--lambda-start", type=float, default=0.0)
    p.add_argument("--lambda-stop", type=float, default=1.0)
    p.add_argument("--lambda-num", type=int, default=21)
    p.add_argument("--l", type=float, default=0.0)
    p.add_argument("--m", type=float, default=0.0)
    p.add_argument("--n", type=float, default=0.0)
    p.set_defaults(func=cmd_sweep)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except UsageError as exc:
        parser.error(str(exc))
    except (InvariantViolation, ValueError) as exc:
        print(f"invariant violation: {exc}", file=sys.stderr)
        return EXIT_INVARIANT
    except TelesepError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())
