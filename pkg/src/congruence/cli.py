"""Command line interface: JSON in, JSON (or CSV) out.

Exit codes: 0 success, 1 verification failure or nothing found, 2 malformed
input, 3 rank precondition not met.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from concurrent.futures import ProcessPoolExecutor

from . import serialize as ser
from .errors import CongruenceError, RankPreconditionError, ShapeError
from .field import FieldConfig
from .fixtures import config_point, phi_sample, planted_free_tuple, random_target, seeded
from .free_subspace import DEFAULT_RETRIES, find_free_subspace
from .matrix import SymKind
from .normal_form import BlockPattern, block_normal_form, symmetric_canonical, skew_canonical
from .tuple_rank import DEFAULT_BUDGET, MatrixTuple, tuple_rank
from .witness import required_rank, verify_witness, witness_full, witness_sym

OK, FAILED, MALFORMED, PRECONDITION = 0, 1, 2, 3
RANDOMIZED = {"witness", "gen", "experiment"}


class MalformedInput(Exception):
    reason = "malformed_input"


def _error(reason: str, message: str) -> dict:
    return {"error": {"reason": reason, "message": message}}


def _config(item: dict, opts: dict) -> FieldConfig:
    if "field" in item:
        return ser.config_from_json(item["field"])
    if opts["field"] == "rational":
        return FieldConfig.rational()
    return FieldConfig.tower(opts["prime"])


def _kinds(item: dict):
    kinds = item.get("kinds")
    return None if kinds is None else [SymKind(k) for k in kinds]


def cmd_rank(item, opts, seed):
    cfg = _config(item, opts)
    mats = [ser.matrix_from_json(cfg, M) for M in item.get("matrices", [])]
    T = MatrixTuple.of(mats, _kinds(item), cfg)
    cert = tuple_rank(T, int(item.get("level", 0)), opts["enum_budget"])
    return {"field": ser.config_to_json(cfg), **ser.certificate_to_json(cert)}, OK


def cmd_normal_form(item, opts, seed):
    cfg = _config(item, opts)
    if "matrix" in item:
        M = ser.matrix_from_json(cfg, item["matrix"])
        kind = item.get("kind") or ("symmetric" if M.is_symmetric() else "skew")
        form = symmetric_canonical(M) if SymKind(kind) is SymKind.SYMMETRIC else skew_canonical(M)
        out = {
            "kind": SymKind(kind).value,
            "g": ser.matrix_to_json(form.g),
            "rank": form.rank,
            "transformed": ser.matrix_to_json(form.g @ M @ form.g.T),
        }
        if hasattr(form, "normalized"):
            out["normalized"] = form.normalized
        out["field"] = ser.config_to_json(cfg)
        return out, OK
    if seed is None:
        raise MalformedInput("tuple normal form is randomized and needs --seed")
    mats = [ser.matrix_from_json(cfg, M) for M in item["matrices"]]
    kinds = _kinds(item)
    if kinds is None:
        kinds = [SymKind.SYMMETRIC if M.is_symmetric() else SymKind.SKEW for M in mats]
    T = MatrixTuple.of(mats, kinds, cfg)
    l = int(item["l"])
    V = find_free_subspace(T, 2**T.s * l, seed, opts["retries"])
    g = block_normal_form(T, V)
    transformed = T.act(g)
    pattern = BlockPattern(T.s, l, T.N, T.kinds)
    return {
        "field": ser.config_to_json(cfg),
        "g": ser.matrix_to_json(g),
        "subspace": ser.matrix_to_json(V.basis),
        "transformed": [ser.matrix_to_json(M) for M in transformed.matrices],
        "pattern_violations": len(pattern.violations(transformed.matrices)),
    }, OK


def cmd_witness(item, opts, seed):
    cfg = _config(item, opts)
    x = ser.point_from_json(cfg, item["x"])
    target = ser.target_from_json(cfg, item["target"])
    gate = not item.get("experiment", False)
    if item.get("mode", "full") == "sym":
        if x.q or x.n:
            raise ShapeError("symmetric-only mode takes no skew components or columns")
        W = witness_sym(x.sym, target.sym, seed, opts["retries"], opts["enum_budget"], gate, l=target.l)
    else:
        W = witness_full(x, target, seed, opts["retries"], opts["enum_budget"], gate)
    out = {
        "field": ser.config_to_json(cfg),
        "x": ser.point_to_json(x),
        "target": ser.target_to_json(target),
        "curve": ser.curve_to_json(W),
        "report": ser.report_to_json(W.report),
        "gate": W.gate,
    }
    return out, OK if W.report.passed else FAILED


def cmd_verify(item, opts, seed):
    cfg = _config(item, opts)
    x = ser.point_from_json(cfg, item["x"])
    target = ser.target_from_json(cfg, item["target"])
    W = ser.curve_from_json(cfg, item["curve"])
    report = verify_witness(x, target, W)
    return {"report": ser.report_to_json(report)}, OK if report.passed else FAILED


def cmd_gen(item, opts, seed):
    cfg = _config(item, opts)
    rng = seeded(seed)
    kind = item.get("kind", "witness")
    if kind == "witness":
        p, q, n, l = (int(item.get(k, d)) for k, d in (("p", 1), ("q", 0), ("n", 0), ("l", 1)))
        r = required_rank(p + q, l, n)
        N = int(item.get("N", 2 * r))
        x = config_point(cfg, p, q, n, N, rng, min_rank=2 * r, budget=opts["enum_budget"])
        target = random_target(cfg, p, q, n, l, rng)
        return {"field": ser.config_to_json(cfg), "x": ser.point_to_json(x), "target": ser.target_to_json(target)}, OK
    if kind == "phi":
        p, r, N = int(item.get("p", 2)), int(item.get("r", 2)), int(item.get("N", 6))
        mats = phi_sample(cfg, p, r, N, rng)
        return {
            "field": ser.config_to_json(cfg),
            "matrices": [ser.matrix_to_json(M) for M in mats],
            "kinds": ["symmetric"] * p,
        }, OK
    if kind == "planted":
        s, l = int(item.get("s", 1)), int(item.get("l", 1))
        T, V = planted_free_tuple(cfg, s, l, rng)
        return {
            "field": ser.config_to_json(cfg),
            "matrices": [ser.matrix_to_json(M) for M in T.matrices],
            "kinds": [k.value for k in T.kinds],
            "l": l,
            "subspace": ser.matrix_to_json(V),
        }, OK
    raise MalformedInput(f"unknown generator {kind!r}")


def experiment_rows(cfg: FieldConfig, p: int, q: int, n: int, l: int, instances: int, seed: int, retries: int):
    """(rank, seed, success) for component ranks from 2r - 1 down to s 2^s l + (s+1) n."""
    s = p + q
    r = required_rank(s, l, n)
    low = s * 2**s * l + (s + 1) * n
    rows = []
    for R in range(2 * r - 1, low - 1, -1):
        for i in range(instances):
            inst_seed = seed * 100003 + R * 1009 + i
            rng = seeded(inst_seed)
            try:
                x = config_point(cfg, p, q, n, R, rng)
                target = random_target(cfg, p, q, n, l, rng)
                W = witness_full(x, target, rng, retries, gate=False)
                ok = W.report.passed
            except CongruenceError:
                ok = False
            rows.append((R, inst_seed, ok))
    return rows


def cmd_experiment(item, opts, seed):
    cfg = _config(item, opts)
    p, q, n, l = (int(item.get(k, d)) for k, d in (("p", 1), ("q", 0), ("n", 1), ("l", 1)))
    rows = experiment_rows(cfg, p, q, n, l, int(item.get("instances", 20)), seed, opts["retries"])
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["rank", "seed", "success"])
    for R, sd, ok in rows:
        w.writerow([R, sd, int(ok)])
    return buf.getvalue(), OK


COMMANDS = {
    "rank": cmd_rank,
    "normal-form": cmd_normal_form,
    "witness": cmd_witness,
    "verify": cmd_verify,
    "gen": cmd_gen,
    "experiment": cmd_experiment,
}


def run(command: str, item, opts: dict, seed):
    """Run one job; returns (result, exit code).  Never raises for bad input."""
    try:
        if not isinstance(item, dict):
            raise MalformedInput("each job must be a JSON object")
        seed = item.get("seed", seed)
        if command in RANDOMIZED and seed is None:
            raise MalformedInput(f"{command} is randomized and needs --seed")
        return COMMANDS[command](item, opts, seed)
    except RankPreconditionError as exc:
        return _error(exc.reason, str(exc)), PRECONDITION
    except (MalformedInput, ShapeError) as exc:
        return _error(exc.reason, str(exc)), MALFORMED
    except CongruenceError as exc:
        return _error(exc.reason, str(exc)), FAILED
    except (KeyError, ValueError, TypeError, ZeroDivisionError) as exc:
        return _error("malformed_input", f"{type(exc).__name__}: {exc}"), MALFORMED


def _run_star(job):
    return run(*job)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="congruence", description="Exact congruence normal forms and orbit witnesses.")
    parser.add_argument("command", choices=sorted(COMMANDS))
    parser.add_argument("input", nargs="?", default="-", help="JSON file, or - for stdin")
    parser.add_argument("--field", choices=["rational", "tower"], default="tower")
    parser.add_argument("--prime", type=int, default=5)
    parser.add_argument("--seed", type=int, default=None)
    parser.add_argument("--enum-budget", type=int, default=DEFAULT_BUDGET)
    parser.add_argument("--retries", type=int, default=DEFAULT_RETRIES)
    parser.add_argument("--jobs", type=int, default=1)
    parser.add_argument("--out", default=None, help="output file (default stdout)")
    return parser


def _read(path: str, command: str):
    text = sys.stdin.read() if path == "-" else open(path, encoding="utf-8").read()
    if not text.strip() and command in ("gen", "experiment"):
        return {}
    return json.loads(text)


def main(argv=None) -> int:
    args = build_parser().parse_intermixed_args(argv)
    opts = {"field": args.field, "prime": args.prime, "enum_budget": args.enum_budget, "retries": args.retries}
    try:
        payload = _read(args.input, args.command)
    except (OSError, json.JSONDecodeError) as exc:
        results, batch = [(_error("malformed_input", str(exc)), MALFORMED)], False
    else:
        batch = isinstance(payload, list)
        items = payload if batch else [payload]
        seeds = [None if args.seed is None else args.seed + i for i in range(len(items))]
        jobs = [(args.command, item, opts, sd) for item, sd in zip(items, seeds)]
        if args.jobs > 1 and len(jobs) > 1:
            with ProcessPoolExecutor(max_workers=args.jobs) as pool:
                results = list(pool.map(_run_star, jobs))
        else:
            results = [_run_star(j) for j in jobs]

    outputs = [r for r, _ in results]
    code = max((c for _, c in results), default=OK)
    if args.command == "experiment" and all(isinstance(o, str) for o in outputs):
        text = "".join(outputs)
    else:
        text = ser.dumps(outputs if batch else outputs[0])
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return code


if __name__ == "__main__":
    sys.exit(main())
