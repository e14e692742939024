"""Command-line interface.

Every command computes a JSON-serialisable payload first and renders it
afterwards, so a cached payload re-renders to exactly the same bytes.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
import time
from dataclasses import dataclass
from datetime import datetime, timezone
from pathlib import Path

from . import __version__
from . import constructions as cons
from . import formulas
from .groups import BudgetExceeded, GroupType, make_group, subgroup_closure
from .oracle import SearchBudget, enumerate_rho_maximal, s_oracle, t_search
from .sets import ElementSet, diameter, length_table
from .verify import (
    CSV_COLUMNS,
    FAIL,
    THEOREM_TAGS,
    csv_row_from_dict,
    format_report_line,
    probe_t4,
    scan_t_zero,
    sweep,
    verify_theorem,
)

EXIT_OK, EXIT_PARSE, EXIT_BUDGET, EXIT_VERIFY = 0, 2, 3, 4

CONSTRUCT_KINDS = (
    "standard", "near-standard", "interval", "punctured-coset",
    "odd-pairing", "product4", "double-coset", "lift",
)


class UsageError(ValueError):
    """Bad literal or option combination; exits with status 2."""


# -- literal parsing -----------------------------------------------------------


def parse_group(text: str) -> GroupType:
    try:
        return make_group(int(p) for p in text.replace(" ", "").split(",") if p)
    except ValueError as exc:
        raise UsageError(f"bad group literal {text!r}: {exc}") from None


def parse_set(G: GroupType, text: str) -> ElementSet:
    try:
        return ElementSet.parse(G, text)
    except (ValueError, IndexError) as exc:
        raise UsageError(f"bad set literal {text!r}: {exc}") from None


def parse_element(G: GroupType, text: str):
    try:
        return G.parse_element(text)
    except (ValueError, IndexError) as exc:
        raise UsageError(f"bad element literal {text!r}: {exc}") from None


def parse_sigma(text: str | None) -> dict[int, int]:
    """``"1=2,2=3"`` means sigma(1) = 2, sigma(2) = 3."""
    out: dict[int, int] = {}
    if not text:
        return out
    for part in text.split(","):
        try:
            i, j = part.split("=")
            out[int(i)] = int(j)
        except ValueError:
            raise UsageError(f"bad sigma entry {part!r}; expected i=j") from None
    return out


def _need(args, name: str):
    value = getattr(args, name, None)
    if value is None:
        raise UsageError(f"--{name.replace('_', '-')} is required here")
    return value


# -- cache ---------------------------------------------------------------------


@dataclass(frozen=True)
class RunRecord:
    command: str
    key: str
    result: object
    provenance: list
    runtime_ms: float
    version: str = __version__
    timestamp: str = ""

    def to_json(self) -> str:
        return json.dumps(
            {
                "command": self.command,
                "key": self.key,
                "version": self.version,
                "timestamp": self.timestamp,
                "result": self.result,
                "provenance": self.provenance,
                "runtime_ms": self.runtime_ms,
            },
            sort_keys=True,
        )


class RunCache:
    """Append-only JSON-lines file; the last record for a key wins."""

    def __init__(self, path: Path):
        self.path = path
        self._records: dict[tuple[str, str], RunRecord] = {}
        if path.exists():
            for line in path.read_text().splitlines():
                if not line.strip():
                    continue
                try:
                    d = json.loads(line)
                    rec = RunRecord(d["command"], d["key"], d["result"], d["provenance"],
                                    d["runtime_ms"], d["version"], d.get("timestamp", ""))
                except (ValueError, KeyError):
                    continue
                self._records[(rec.command, rec.key)] = rec

    def get(self, command: str, key: str) -> RunRecord | None:
        rec = self._records.get((command, key))
        return rec if rec is not None and rec.version == __version__ else None

    def put(self, rec: RunRecord) -> None:
        self._records[(rec.command, rec.key)] = rec
        with self.path.open("a") as fh:
            fh.write(rec.to_json() + "\n")


# -- commands --------------------------------------------------------------------
# each returns (inputs, result, provenance, exit status)


def _budget(args) -> SearchBudget:
    order = args.max_order
    return SearchBudget(
        exhaustive_order_bound=order,
        bnb_order_bound=max(64, order),
        time_limit=args.budget,
        workers=max(1, args.jobs),
        allow_bnb=args.allow_bnb,
    )


def _value(v):
    return "inf" if v == float("inf") else v


def cmd_diam(args):
    G = parse_group(_need(args, "group"))
    inputs = {"group": str(G)}
    if args.set is not None:
        A = parse_set(G, args.set)
        inputs["set"] = str(A)
        return inputs, {"value": _value(diameter(A))}, [], EXIT_OK
    return inputs, {"value": formulas.diam_formula(G)}, ["2.1"], EXIT_OK


def cmd_length(args):
    G = parse_group(_need(args, "group"))
    A = parse_set(G, _need(args, "set"))
    g = parse_element(G, _need(args, "element"))
    inputs = {"group": str(G), "set": str(A), "element": G.format_element(g)}
    return inputs, {"value": _value(length_table(A)[g])}, [], EXIT_OK


def _extremal(args, which: str):
    G = parse_group(_need(args, "group"))
    rho = _need(args, "rho")
    inputs = {"group": str(G), "rho": rho, "method": args.method}
    result: dict = {}
    provenance: list = []
    status = EXIT_OK
    if args.method in ("formula", "both"):
        f = (formulas.t_formula if which == "t" else formulas.s_formula)(G, rho)
        result["formula"] = f.to_dict()
        if f.source:
            provenance.append(f.source)
    if args.method in ("oracle", "both"):
        budget = _budget(args)
        if which == "t":
            res = t_search(G, rho, budget)
            result["oracle"] = {"value": res.exact, "lower": res.lower, "upper": res.upper,
                                "tier": res.tier,
                                "witness": None if res.witness is None else str(res.witness)}
            if res.exact is None:
                raise BudgetExceeded("search did not finish", res.lower, res.upper)
        else:
            result["oracle"] = {"value": s_oracle(G, rho, budget)}
    if args.method == "both":
        fv, ov = result["formula"], result["oracle"]["value"]
        if fv["status"] == "unknown":
            result["match"] = "no-formula"
        else:
            result["match"] = "yes" if fv["value"] == ov else "no"
            if fv["value"] != ov:
                status = EXIT_VERIFY
    return inputs, result, provenance, status


def cmd_tmax(args):
    return _extremal(args, "t")


def cmd_smax(args):
    return _extremal(args, "s")


def cmd_enumerate(args):
    G = parse_group(_need(args, "group"))
    rho = _need(args, "rho")
    recs = enumerate_rho_maximal(G, rho, aperiodic_only=args.aperiodic, budget=_budget(args))
    inputs = {"group": str(G), "rho": rho, "aperiodic": args.aperiodic}
    return inputs, {"count": len(recs), "records": [r.to_line() for r in recs]}, [], EXIT_OK


def _subgroup(G: GroupType, text: str):
    gens = [parse_element(G, p) for p in text.split(";") if p.strip()]
    return subgroup_closure(G, gens)


def cmd_construct(args):
    kind = args.kind
    inputs: dict = {"kind": kind}
    rho = args.rho
    try:
        if kind == "interval":
            m, rho = _need(args, "m"), _need(args, "rho")
            inputs.update(m=m, rho=rho)
            A = cons.interval_set(m, rho)
            tags = ["2.5"]
        else:
            G = parse_group(_need(args, "group"))
            inputs["group"] = str(G)
            if kind == "standard":
                A, tags = cons.standard_generating_set(G), ["2.1"]
            elif kind == "near-standard":
                basis_text = args.basis
                if basis_text is None:
                    basis = [tuple(int(i == j) for j in range(G.rank)) for i in range(G.rank)]
                else:
                    basis = [parse_element(G, p) for p in basis_text.split(";")]
                sigma = parse_sigma(args.sigma)
                spec = cons.NearStandardSpec.make(basis, sigma)
                inputs.update(basis=";".join(G.format_element(e) for e in basis),
                              sigma=",".join(f"{i}={j}" for i, j in spec.sigma))
                A, tags = cons.near_standard(G, spec), ["2.2"]
            elif kind == "punctured-coset":
                H = _subgroup(G, _need(args, "subgroup"))
                g = parse_element(G, _need(args, "element"))
                inputs.update(subgroup=str(H.members), element=G.format_element(g))
                A, tags = cons.punctured_coset(G, H, g), ["6.1"]
                rho = rho or H.index + 1
            elif kind == "odd-pairing":
                g = parse_element(G, _need(args, "element"))
                inputs["element"] = G.format_element(g)
                A, tags = cons.odd_pairing_set(G, g), ["2.4iii"]
                rho = rho or 3
            elif kind == "product4":
                if args.set is None:
                    A = cons.four_maximal_witness(G)
                else:
                    G2 = parse_group(_need(args, "group2"))
                    A2 = parse_set(G2, args.set)
                    inputs.update(group2=str(G2), set=str(A2))
                    A = cons.product_4maximal(G, A2)
                tags = ["2.7i"]
                rho = 4
            elif kind == "double-coset":
                H = _subgroup(G, _need(args, "subgroup"))
                g = parse_element(G, _need(args, "element"))
                inputs.update(subgroup=str(H.members), element=G.format_element(g))
                A, tags = cons.double_coset(G, H, g), ["2.9"]
            elif kind == "lift":
                H = _subgroup(G, _need(args, "subgroup"))
                Q = H.quotient_type
                Abar = parse_set(Q, _need(args, "set"))
                inputs.update(subgroup=str(H.members), quotient=str(Q), set=str(Abar))
                A, tags = cons.lift(G, H, Abar), []
                inputs["quotient_diameter"] = _value(diameter(Abar))
            else:
                raise UsageError(f"unknown construction kind {kind!r}")
    except cons.ConstructionError as exc:
        raise UsageError(str(exc)) from None
    if rho is not None:
        inputs["rho"] = rho
    check = cons.validate_witness(A, rho).to_dict()
    return inputs, {"set": str(A), "validation": check}, tags, EXIT_OK


def cmd_verify(args):
    budget = _budget(args)
    if args.sweep:
        inputs = {"sweep": True, "max_order": args.max_order}
        reports = sweep(args.max_order, jobs=args.jobs, budget=budget)
    else:
        tag = _need(args, "theorem")
        if tag not in THEOREM_TAGS:
            raise UsageError(f"unknown theorem tag {tag!r}")
        G = parse_group(_need(args, "group"))
        inputs = {"theorem": tag, "group": str(G), "rho": args.rho}
        try:
            reports = [verify_theorem(tag, G, args.rho, budget)]
        except ValueError as exc:
            raise UsageError(str(exc)) from None
    dicts = [r.to_dict() for r in reports]
    status = EXIT_VERIFY if any(r.verdict == FAIL for r in reports) else EXIT_OK
    tags = sorted({r.theorem_id for r in reports})
    return inputs, {"reports": dicts}, tags, status


def cmd_scan(args):
    reports = scan_t_zero(args.max_order, _budget(args))
    return {"max_order": args.max_order}, {"reports": [r.to_dict() for r in reports]}, [], EXIT_OK


def cmd_probe(args):
    G = parse_group(args.group or "5,5")
    budget = _budget(args)
    budget.allow_bnb = True
    r = probe_t4(G, budget)
    return {"group": str(G), "rho": 4}, {"reports": [r.to_dict()]}, [], EXIT_OK


COMMANDS = {
    "diam": cmd_diam,
    "length": cmd_length,
    "tmax": cmd_tmax,
    "smax": cmd_smax,
    "enumerate": cmd_enumerate,
    "construct": cmd_construct,
    "verify": cmd_verify,
    "scan": cmd_scan,
    "probe": cmd_probe,
}


# -- rendering -------------------------------------------------------------------


def _flat(prefix: str, value, out: dict) -> None:
    if isinstance(value, dict):
        for k, v in value.items():
            _flat(f"{prefix}.{k}" if prefix else k, v, out)
    else:
        out[prefix] = value


def _text_value(v) -> str:
    if v is None:
        return "-"
    if isinstance(v, bool):
        return "yes" if v else "no"
    return str(v)


def render(command: str, inputs: dict, result: dict, provenance: list, runtime_ms: float, fmt: str) -> str:
    if fmt == "json":
        doc = {
            "command": command,
            "inputs": inputs,
            "result": result,
            "provenance": provenance,
            "runtime_ms": runtime_ms,
        }
        return json.dumps(doc, indent=2, sort_keys=True) + "\n"
    if "reports" in result:
        if fmt == "csv":
            return _reports_csv(result["reports"])
        return "".join(format_report_line(d) + "\n" for d in result["reports"])
    if "records" in result:
        if fmt == "csv":
            buf = io.StringIO()
            w = csv.writer(buf, lineterminator="\n")
            w.writerow(["record"])
            for line in result["records"]:
                w.writerow([line])
            return buf.getvalue()
        return "".join(line + "\n" for line in result["records"])
    flat: dict = {}
    _flat("", {**inputs, **result}, flat)
    if fmt == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(list(flat))
        w.writerow([_text_value(v) for v in flat.values()])
        return buf.getvalue()
    return " ".join(f"{k}={_text_value(v)}" for k, v in flat.items()) + "\n"


def _reports_csv(dicts: list[dict]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_COLUMNS)
    for d in dicts:
        w.writerow(csv_row_from_dict(d))
    return buf.getvalue()


# -- argument parsing ----------------------------------------------------------------


def _global_options(p: argparse.ArgumentParser, suppress: bool) -> None:
    d = (lambda v: argparse.SUPPRESS) if suppress else (lambda v: v)
    p.add_argument("--format", choices=("text", "json", "csv"), default=d("text"))
    p.add_argument("--jobs", type=int, default=d(1), help="worker processes")
    p.add_argument("--cache", type=Path, default=d(None), help="JSON-lines result cache")
    p.add_argument("--budget", type=float, default=d(None), metavar="SECONDS",
                   help="wall-clock limit for searches")
    p.add_argument("--max-order", type=int, default=d(16),
                   help="largest order searched exhaustively (and sweep/scan range)")
    p.add_argument("--allow-bnb", action="store_true", default=d(False),
                   help="enable branch-and-bound above the exhaustive bound")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="posdiam", description="Positive diameters and maximal sets in finite abelian groups."
    )
    _global_options(parser, suppress=False)
    common = argparse.ArgumentParser(add_help=False)
    _global_options(common, suppress=True)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("diam", parents=[common], help="absolute or per-set diameter")
    p.add_argument("--group", required=True)
    p.add_argument("--set")

    p = sub.add_parser("length", parents=[common], help="positive length of one element")
    p.add_argument("--group", required=True)
    p.add_argument("--set", required=True)
    p.add_argument("--element", required=True)

    for name in ("tmax", "smax"):
        p = sub.add_parser(name, parents=[common], help=f"{name[0]}_rho(G)")
        p.add_argument("--group", required=True)
        p.add_argument("--rho", type=int, required=True)
        p.add_argument("--method", choices=("formula", "oracle", "both"), default="formula")

    p = sub.add_parser("enumerate", parents=[common], help="all rho-maximal subsets")
    p.add_argument("--group", required=True)
    p.add_argument("--rho", type=int, required=True)
    p.add_argument("--aperiodic", action="store_true")

    p = sub.add_parser("construct", parents=[common], help="build and validate an extremal set")
    p.add_argument("--kind", choices=CONSTRUCT_KINDS, required=True)
    p.add_argument("--group")
    p.add_argument("--group2", help="second summand for product4")
    p.add_argument("--rho", type=int)
    p.add_argument("--m", type=int, help="modulus for interval")
    p.add_argument("--basis", help="standard basis, ';'-separated elements")
    p.add_argument("--sigma", help="partial map, e.g. 1=2,2=3")
    p.add_argument("--subgroup", help="subgroup generators, ';'-separated")
    p.add_argument("--element")
    p.add_argument("--set")

    p = sub.add_parser("verify", parents=[common], help="check a theorem or run the sweep")
    p.add_argument("--theorem", help="one of " + ", ".join(THEOREM_TAGS))
    p.add_argument("--group")
    p.add_argument("--rho", type=int)
    p.add_argument("--sweep", action="store_true")

    sub.add_parser("scan", parents=[common], help="report (G, rho) with t_rho(G) = 0")

    p = sub.add_parser("probe", parents=[common], help="branch-and-bound t_4 probe (reported only)")
    p.add_argument("--group", default="5,5")
    return parser


def _cache_key(command: str, args) -> str:
    skip = {"command", "format", "jobs", "cache"}
    items = {}
    for k, v in sorted(vars(args).items()):
        if k in skip or v is None or v is False:
            continue
        if k in ("group", "group2"):
            try:
                v = str(parse_group(v))
            except UsageError:
                pass
        items[k] = v
    return json.dumps({"command": command, **items}, sort_keys=True, default=str)


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    command = args.command
    cache = RunCache(args.cache) if args.cache else None
    key = _cache_key(command, args)
    try:
        rec = cache.get(command, key) if cache else None
        if rec is None:
            t0 = time.perf_counter()
            inputs, result, provenance, status = COMMANDS[command](args)
            runtime_ms = round((time.perf_counter() - t0) * 1000, 3)
            payload = {"inputs": inputs, "result": result, "status": status}
            rec = RunRecord(command, key, payload, provenance, runtime_ms,
                            timestamp=datetime.now(timezone.utc).isoformat(timespec="seconds"))
            if cache:
                cache.put(rec)
        payload = rec.result
        sys.stdout.write(render(command, payload["inputs"], payload["result"],
                                rec.provenance, rec.runtime_ms, args.format))
        return payload["status"]
    except (UsageError, ValueError) as exc:
        print(f"posdiam: error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except BudgetExceeded as exc:
        bounds = ""
        if exc.lower is not None or exc.upper is not None:
            bounds = f" (bounds: [{exc.lower}, {exc.upper}])"
        print(f"posdiam: budget exhausted: {exc}{bounds}", file=sys.stderr)
        return EXIT_BUDGET


if __name__ == "__main__":
    sys.exit(main())
