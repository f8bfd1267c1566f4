"""Command-line front end.

Exit codes: 0 prediction confirmed, 1 prediction mismatch, 2 invalid
arguments, 3 rank did not stabilize.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from dataclasses import asdict, dataclass, field

from . import invariant_theory as it
from .curvature_identities import (
    MAX_DIM,
    ExceptionalCaseError,
    IdentityJob,
    JobError,
    critical_dimension,
    verify_vanishing,
)

SCHEMA = "curvident/1"
TABLE_MAX_M = 8
TABLE_MAX_N = 8

EXIT_OK, EXIT_MISMATCH, EXIT_USAGE, EXIT_RANK = 0, 1, 2, 3


class UsageError(ValueError):
    pass


@dataclass
class RunConfig:
    command: str
    params: dict = field(default_factory=dict)
    out: str | None = None
    format: str = "json"


def _signature(text: str) -> tuple[int, int]:
    try:
        p, m = (int(x) for x in text.split(","))
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"signature must look like P,M (got {text!r})") from exc
    return p, m


def _emit(config: RunConfig, payload: dict, rows: list[dict] | None) -> None:
    if config.format == "csv":
        if rows is None:
            raise UsageError(f"{config.command} has no CSV form")
        buf = io.StringIO()
        writer = csv.DictWriter(buf, fieldnames=list(rows[0].keys()) if rows else ["empty"],
                                lineterminator="\n")
        writer.writeheader()
        writer.writerows(rows)
        text = buf.getvalue()
    else:
        doc = {"schema": SCHEMA, "config": asdict(config), **payload}
        text = json.dumps(doc, indent=2, sort_keys=True) + "\n"
    if config.out:
        with open(config.out, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


# ---------------------------------------------------------------------------
# commands


def cmd_verify(args, config: RunConfig) -> int:
    job = IdentityJob(args.pbar, args.k, args.dim, args.signature, args.trials, args.seed)
    config.params = {"pbar": job.pbar, "k": job.k, "dim": job.dim,
                     "signature": list(job.signature), "trials": job.trials, "seed": job.seed}
    report = verify_vanishing(job)
    expect_zero = job.dim < job.critical_dimension
    matches = report.identity_holds if expect_zero else not report.identity_holds
    payload = {
        "report": report.to_dict(),
        "prediction": "vanishes" if expect_zero else "witness",
        "matches_prediction": matches,
    }
    if not matches and not expect_zero:
        payload["seeds"] = [[job.seed, t] for t in range(job.trials)]
    rows = [{"trial": r.trial, "exact_zero": int(r.exact_zero),
             "witness": json.dumps(r.witness_component) if r.witness_component else ""}
            for r in sorted(report.results, key=lambda r: r.trial)]
    _emit(config, payload, rows)
    if not matches:
        print(f"prediction mismatch for {config.params}", file=sys.stderr)
    return EXIT_OK if matches else EXIT_MISMATCH


def _table_caps(m_max: int, n_max: int):
    if m_max < 2 or m_max % 2 or m_max > TABLE_MAX_M:
        raise UsageError(f"--m-max must be even and in 2..{TABLE_MAX_M}")
    if not 1 <= n_max <= TABLE_MAX_N:
        raise UsageError(f"--n-max must lie in 1..{TABLE_MAX_N}")


def cmd_dim_table(args, config: RunConfig) -> int:
    _table_caps(args.m_max, args.n_max)
    config.params = {"m_max": args.m_max, "n_max": args.n_max}
    rows = [{"m": m, "n": n, "dimension": it.dim_invariants(m, n)}
            for m in range(2, args.m_max + 1, 2) for n in range(1, args.n_max + 1)]
    _emit(config, {"table": rows}, rows)
    return EXIT_OK


def cmd_reduce_check(args, config: RunConfig) -> int:
    _table_caps(args.m_max, args.n_max)
    config.params = {"m_max": args.m_max, "n_max": args.n_max}
    reports = [it.reduction_check(m, args.n_max) for m in range(2, args.m_max + 1, 2)]
    rows = [{"m": r.m, "n": n, "dimension": d, "stable_from": r.stable_from, "ok": int(r.ok)}
            for r in reports for n, d in sorted(r.dims.items())]
    _emit(config, {"reports": [r.to_dict() for r in reports]}, rows)
    return EXIT_OK if all(r.ok for r in reports) else EXIT_MISMATCH


def cmd_kernel(args, config: RunConfig) -> int:
    pbar, k = args.pbar, args.k
    IdentityJob(pbar, k, 1)  # validates (pbar, k)
    top = critical_dimension(pbar, k)
    if top > MAX_DIM:
        raise UsageError(f"2k+pbar = {top} exceeds the dimension cap {MAX_DIM}")
    config.params = {"pbar": pbar, "k": k, "seed": args.seed}
    below = it.kernel_dimension(pbar, k, top - 1, args.seed) if top > 1 else 0
    at = it.kernel_dimension(pbar, k, top, args.seed)
    member = it.membership_check(pbar, k, args.seed)
    formula = it.identity_dimension_formula(pbar)
    matches = below == formula and at == 0 and member.holds
    payload = {
        "dimensions": {str(top - 1): below, str(top): at},
        "formula_dimension": formula,
        "membership": member.to_dict(),
        "matches_prediction": matches,
    }
    rows = [{"pbar": pbar, "k": k, "n": top - 1, "dimension": below},
            {"pbar": pbar, "k": k, "n": top, "dimension": at}]
    _emit(config, payload, rows)
    if not matches:
        print(f"kernel dimension {below} at n={top - 1}; formula predicts {formula}",
              file=sys.stderr)
    return EXIT_OK if matches else EXIT_MISMATCH


def cmd_normal_dims(args, config: RunConfig) -> int:
    if not 1 <= args.n_max <= MAX_DIM:
        raise UsageError(f"--n-max must lie in 1..{MAX_DIM}")
    orders = args.orders
    if any(r < 2 for r in orders):
        raise UsageError("normal tensor orders start at 2")
    config.params = {"n_max": args.n_max, "orders": orders}
    rows = []
    for r in orders:
        for n in range(1, args.n_max + 1):
            rows.append({"r": r, "n": n,
                         "dimension": len(it.normal_tensor_basis(n, r)),
                         "rank_nullity": it.normal_tensor_dimension(n, r)})
    ok = all(row["dimension"] == row["rank_nullity"] for row in rows)
    _emit(config, {"table": rows, "consistent": ok}, rows)
    return EXIT_OK if ok else EXIT_MISMATCH


# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="curvident",
                                     description="Exact checks of dimensional curvature identities.")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, fmt_default="json"):
        p.add_argument("--out", default=None, help="output file (default: stdout)")
        p.add_argument("--format", choices=("json", "csv"), default=fmt_default)

    p = sub.add_parser("verify", help="vanishing trials of S_{2pbar,k} on random jets")
    p.add_argument("--pbar", type=int, required=True)
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--dim", type=int, default=None,
                   help="dimension (default: 2k+pbar-1, the largest where S must vanish)")
    p.add_argument("--signature", type=_signature, default=None, help="P,M (default: Riemannian)")
    p.add_argument("--trials", type=int, default=20)
    p.add_argument("--seed", type=int, default=0)
    common(p)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("dim-table", help="dimensions of invariant m-linear forms")
    p.add_argument("--m-max", type=int, default=8)
    p.add_argument("--n-max", type=int, default=4)
    common(p, "csv")
    p.set_defaults(func=cmd_dim_table)

    p = sub.add_parser("reduce-check", help="stabilization of invariant dimensions in n")
    p.add_argument("--m-max", type=int, default=8)
    p.add_argument("--n-max", type=int, default=8)
    common(p)
    p.set_defaults(func=cmd_reduce_check)

    p = sub.add_parser("kernel", help="dimension of the identity space at 2k+pbar-1")
    p.add_argument("--pbar", type=int, required=True)
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--seed", type=int, default=0)
    common(p)
    p.set_defaults(func=cmd_kernel)

    p = sub.add_parser("normal-dims", help="dimensions of normal-tensor spaces N_r")
    p.add_argument("--n-max", type=int, default=4)
    p.add_argument("--orders", type=lambda s: [int(x) for x in s.split(",")], default=[2])
    common(p, "csv")
    p.set_defaults(func=cmd_normal_dims)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.command == "verify" and args.dim is None:
        args.dim = max(1, 2 * args.k + args.pbar - 1)
    config = RunConfig(command=args.command, out=args.out, format=args.format)
    try:
        return args.func(args, config)
    except (ExceptionalCaseError, JobError, UsageError, it.CapExceeded) as exc:
        print(f"curvident: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except it.RankNotStabilized as exc:
        print(f"curvident: rank not stabilized: {exc}", file=sys.stderr)
        return EXIT_RANK


if __name__ == "__main__":
    sys.exit(main())
