"""Command-line interface.

Every command writes one report (JSON by default) to --output or stdout.
Exit status: 0 all checks passed, 1 some check failed, 2 bad usage or input.
Report bodies are deterministic for a fixed configuration; the only field
that changes between runs is "timestamp".
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import re
import sys
import time
from datetime import datetime, timezone
from pathlib import Path
from typing import Any, Sequence

from . import __version__
from .acceptance import DEFAULT_SEED, TAIL_GAMMAS, run_all
from .cyclotomic import _check_modulus, root_params
from .extremal import reports_to_csv, search, verify_gap, verify_sharpness
from .fourier import (
    MAX_NAIVE_N,
    forest_bound_certificate,
    spectrum_fwht,
    spectrum_naive,
    spectrum_tree,
)
from .legendre3 import decompose_m3, pairings, verify_nonsingular_bound
from .moments import empirical_tail, moment_exact, tail_bounds
from .polynomial import FamilySpec, PolyError, QuadPoly, graph_of, poly_from_dict
from .sums import BudgetError, DEFAULT_BUDGET, eval_gray, eval_naive

TOOL = "quadsum"
THREADS_ENV = "QUADSUM_THREADS"

CLAIM_CRITERIA = {"tree": 7, "forest": 8, "transforms": 9, "chebyshev": 10,
                  "legendre": 11, "spot": 13}
GRID_CLAIMS = ("m2", "m2-homogeneous", "m6", "sharpness", "max", "gap", "tail")


class UsageError(ValueError):
    pass


# ---------------------------------------------------------------------------
# input parsing


def _int_range(text: str, odd: bool = False) -> list[int]:
    out: list[int] = []
    for part in text.split(","):
        part = part.strip()
        if not part:
            continue
        m = re.fullmatch(r"(\d+)\.\.(\d+)", part)
        if m:
            lo, hi = int(m.group(1)), int(m.group(2))
            vals = range(lo, hi + 1)
            out += [v for v in vals if v % 2] if odd else list(vals)
        elif part.isdigit():
            out.append(int(part))
        else:
            raise UsageError(f"cannot read {part!r} as an integer or lo..hi range")
    return out


def parse_grid(text: str) -> list[tuple[int, int]]:
    """'1..3x3,5,7' -> n in 1..3 crossed with m in {3, 5, 7}.

    A range on the modulus side keeps only odd values; several grids can be
    joined with ';'.
    """
    cells: list[tuple[int, int]] = []
    for chunk in text.split(";"):
        chunk = chunk.strip()
        if not chunk:
            continue
        if chunk.count("x") != 1:
            raise UsageError(f"grid {chunk!r} must look like N_SPEC x M_SPEC, e.g. 1..3x3,5")
        ns, ms = chunk.split("x")
        for n in _int_range(ns):
            for m in _int_range(ms, odd=True):
                cells.append((n, m))
    for n, m in cells:
        if n < 1:
            raise UsageError(f"grid entry n={n} must be positive")
        try:
            _check_modulus(m)
        except ValueError as exc:
            raise UsageError(str(exc)) from None
    if not cells:
        raise UsageError("empty grid")
    return cells


def _grid(args) -> list[tuple[int, int]]:
    if args.grid:
        return [cell for g in args.grid for cell in parse_grid(g)]
    if args.n is None or args.m is None:
        raise UsageError("give --grid, or both --n and --m")
    try:
        _check_modulus(args.m)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    if args.n < 1:
        raise UsageError("--n must be positive")
    return [(args.n, args.m)]


def _load_polys(args) -> list[QuadPoly]:
    blobs: list[Any] = []
    if args.poly:
        for text in args.poly:
            try:
                blobs.append(json.loads(text))
            except json.JSONDecodeError as exc:
                raise UsageError(f"--poly is not valid JSON: {exc}") from None
    if args.file:
        text = Path(args.file).read_text()
        try:
            blobs.append(json.loads(text))
        except json.JSONDecodeError:
            for k, line in enumerate(text.splitlines(), 1):
                if line.strip():
                    try:
                        blobs.append(json.loads(line))
                    except json.JSONDecodeError as exc:
                        raise UsageError(f"{args.file}:{k}: {exc}") from None
    polys = []
    for blob in blobs:
        for obj in blob if isinstance(blob, list) else [blob]:
            polys.append(poly_from_dict(obj))
    if not polys:
        raise UsageError("no polynomial given; use --poly JSON or --file PATH")
    return polys


def _family(args, n: int, m: int) -> FamilySpec:
    if args.family == "random":
        return FamilySpec("random", n, m, count=args.count, seed=args.seed)
    return FamilySpec(args.family, n, m)


def _gammas(args) -> list[float]:
    if not args.gamma:
        return list(TAIL_GAMMAS)
    out = []
    for part in args.gamma.split(","):
        g = float(part)
        if not 0 < g <= 1:
            raise UsageError(f"gamma must lie in (0, 1], got {g}")
        out.append(g)
    return out


# ---------------------------------------------------------------------------
# commands; each returns (rows, csv_text or None)


def _value_row(f: QuadPoly, method: str) -> dict:
    val = eval_gray(f) if method == "gray" else eval_naive(f)
    z = val.value
    return {"poly": f.to_dict(), "norm": val.norm, "re": z.real, "im": z.imag,
            "exponent_counts": list(val.unnormalized.coeffs), "method": method,
            "conjectured_bound": root_params(f.m).conjectured_bound(f.n),
            "failed": False}


def cmd_eval(args) -> tuple[list[dict], str | None]:
    rows = [_value_row(f, args.method) for f in _load_polys(args)]
    text = None
    if args.format == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["poly", "norm", "re", "im"])
        for r in rows:
            w.writerow([json.dumps(r["poly"], sort_keys=True), repr(r["norm"]),
                        repr(r["re"]), repr(r["im"])])
        text = buf.getvalue()
    return rows, text


def cmd_spectrum(args) -> tuple[list[dict], str | None]:
    polys = _load_polys(args)
    rows, csv_text = [], None
    for f in polys:
        method = args.method
        if method == "tree":
            spec = spectrum_tree(f)
        elif method == "naive":
            if f.n > MAX_NAIVE_N:
                raise UsageError(f"naive spectrum limited to n <= {MAX_NAIVE_N}")
            spec = spectrum_naive(f)
        else:
            spec = spectrum_fwht(f)
        cert = forest_bound_certificate(f)
        ok = (not cert.applicable) or abs(spec.full) <= cert.certified + 1e-9
        rows.append({
            "poly": f.to_dict(),
            "method": method,
            "coefficients": [{"bitmask": s, "re": c.real, "im": c.imag, "abs": abs(c)}
                             for s, c in enumerate(spec.table.tolist())],
            "max_abs": spec.max_abs(),
            "parseval": spec.parseval(),
            "forest_distance": cert.k,
            "is_forest": graph_of(f).is_forest(),
            "certificate": {"applicable": cert.applicable, "threshold": cert.threshold,
                            "bound": cert.certified if cert.applicable else None},
            "failed": not ok,
        })
        if csv_text is None:
            csv_text = spec.to_csv()
    return rows, csv_text if args.format == "csv" else None


def cmd_moments(args) -> tuple[list[dict], str | None]:
    rows = []
    for n, m in _grid(args):
        if args.family == "random":
            raise UsageError("exact moments need an enumerated family")
        rep = moment_exact(_family(args, n, m), args.moment_order, budget=args.budget,
                           threads=args.threads)
        rows.append(rep.to_dict())
    text = None
    if args.format == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["n", "m", "family", "r", "moment", "moment_float", "predicted", "bound", "failed"])
        for r in rows:
            w.writerow([r["family"]["n"], r["family"]["m"], r["family"]["kind"], r["r"],
                        r["moment"]["value"], repr(r["moment"]["float"]),
                        r["predicted"]["value"] if r["predicted"] else "",
                        r["bound"]["value"] if r["bound"] else "", int(r["failed"])])
        text = buf.getvalue()
    return rows, text


def cmd_tail(args) -> tuple[list[dict], str | None]:
    rows = []
    for n, m in _grid(args):
        spec = _family(args, n, m)
        if args.no_empirical:
            rows += [tail_bounds(n, m, g).to_dict() for g in _gammas(args)]
        else:
            rows += [t.to_dict() for t in empirical_tail(spec, _gammas(args), budget=args.budget,
                                                         threads=args.threads)]
    text = None
    if args.format == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        cols = ["n", "m", "gamma", "epsilon", "lower", "empirical", "upper", "sandwiched"]
        w.writerow(cols)
        for r in rows:
            w.writerow(["" if r[c] is None else r[c] for c in cols])
        text = buf.getvalue()
    return rows, text


def cmd_search(args) -> tuple[list[dict], str | None]:
    reports = [search(_family(args, n, m), use_symmetry=not args.no_symmetry,
                      budget=args.budget, threads=args.threads)
               for n, m in _grid(args)]
    return [r.to_dict() for r in reports], reports_to_csv(reports) if args.format == "csv" else None


def _claim_rows(args) -> list[dict]:
    claim = args.claim
    if claim in CLAIM_CRITERIA:
        return [r.to_dict() for r in run_all(args.seed, [CLAIM_CRITERIA[claim]])]
    rows = []
    for n, m in _grid(args):
        if claim == "m2":
            rows.append(moment_exact(FamilySpec("all", n, m), 2, budget=args.budget,
                                     threads=args.threads).to_dict())
        elif claim == "m2-homogeneous":
            rows.append(moment_exact(FamilySpec("homogeneous", n, m), 2, budget=args.budget,
                                     threads=args.threads).to_dict())
        elif claim == "m6":
            rep = moment_exact(FamilySpec("all", n, m), 6, budget=args.budget, threads=args.threads)
            if rep.bound is None:
                raise UsageError("the sixth-moment bound is stated for m > 3")
            rows.append(rep.to_dict())
        elif claim == "sharpness":
            ok = verify_sharpness(n, m)
            rows.append({"n": n, "m": m, "conjectured": root_params(m).conjectured_bound(n),
                         "failed": not ok})
        elif claim in ("max", "gap"):
            rep = search(_family(args, n, m), use_symmetry=not args.no_symmetry,
                         budget=args.budget, threads=args.threads)
            row = rep.to_dict()
            if claim == "gap":
                if not rep.exhaustive:
                    raise UsageError("the gap claim needs an enumerated family")
                row["failed"] = not verify_gap(rep)
            else:
                row["failed"] = not rep.max_ok
            rows.append(row)
        elif claim == "tail":
            rows += [t.to_dict() for t in empirical_tail(_family(args, n, m), _gammas(args),
                                                         budget=args.budget, threads=args.threads)]
    return rows


def cmd_verify(args) -> tuple[list[dict], str | None]:
    rows = _claim_rows(args)
    text = None
    if args.format == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["claim", "index", "n", "m", "failed"])
        for k, r in enumerate(rows):
            fam = r.get("family", r)
            w.writerow([args.claim, k, fam.get("n", ""), fam.get("m", ""), int(bool(r.get("failed")))])
        text = buf.getvalue()
    return rows, text


def _parse_sigma(text: str | None, n: int) -> list[int] | None:
    if text is None:
        return None
    return [int(v) for v in _int_range(text)]


def cmd_decompose(args) -> tuple[list[dict], str | None]:
    rows = []
    for f in _load_polys(args):
        if f.m != 3:
            raise UsageError(f"decompose needs m = 3, got m = {f.m}")
        if args.all_pairings:
            if f.n > 8:
                raise UsageError("--all-pairings is limited to n <= 8")
            sigmas = list(pairings(f.n))
        else:
            sigmas = [_parse_sigma(args.sigma, f.n)]
        exact = eval_naive(f).value
        for sigma in sigmas:
            dec = decompose_m3(f, sigma)
            z = dec.recombine()
            row = {"poly": f.to_dict(), "decomposition": dec.to_dict(),
                   "recombined": {"re": z.real, "im": z.imag},
                   "direct": {"re": exact.real, "im": exact.imag},
                   "error": abs(z - exact)}
            failed = row["error"] > 1e-9
            if f.n % 2 == 0 or args.odd_variant:
                check = verify_nonsingular_bound(f.n, f, dec.sigma, odd_variant=args.odd_variant)
                row["nonsingular_bound"] = check.to_dict()
                failed = failed or check.holds is False
            row["failed"] = failed
            rows.append(row)
    return rows, None


def cmd_report_all(args) -> tuple[list[dict], str | None]:
    only = _int_range(args.criteria) if args.criteria else None
    results = run_all(args.seed, only)
    for r in results:
        print(r.line(), file=sys.stderr)
    rows = [r.to_dict() for r in results]
    text = None
    if args.format == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["criterion", "title", "passed"])
        for r in results:
            w.writerow([r.number, r.title, int(r.passed)])
        text = buf.getvalue()
    return rows, text


COMMANDS = {
    "eval": cmd_eval,
    "spectrum": cmd_spectrum,
    "moments": cmd_moments,
    "tail": cmd_tail,
    "search": cmd_search,
    "verify": cmd_verify,
    "decompose": cmd_decompose,
    "report-all": cmd_report_all,
}


# ---------------------------------------------------------------------------


def _config_echo(args) -> dict:
    return {k: v for k, v in sorted(vars(args).items()) if k not in ("output",)}


def _json_safe(obj: Any) -> Any:
    if isinstance(obj, float) and not math.isfinite(obj):
        return str(obj)
    if isinstance(obj, dict):
        return {str(k): _json_safe(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_json_safe(v) for v in obj]
    return obj


def build_report(args, rows: list[dict], wall: float) -> dict:
    return {
        "tool": TOOL,
        "version": __version__,
        "command": args.command,
        "config": _config_echo(args),
        "seed": args.seed,
        "results": rows,
        "failed": any(bool(r.get("failed")) for r in rows),
        "timestamp": {"utc": datetime.now(timezone.utc).isoformat(timespec="seconds"),
                      "wall_seconds": round(wall, 3)},
    }


def _emit(text: str, output: str | None) -> None:
    if output:
        Path(output).write_text(text)
    else:
        sys.stdout.write(text)


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--poly", action="append", help="polynomial as inline JSON (repeatable)")
    common.add_argument("--file", help="JSON file with a polynomial, a list, or one per line")
    common.add_argument("--grid", action="append", help="grid like '1..3x3,5,7' (repeatable)")
    common.add_argument("--n", type=int)
    common.add_argument("--m", type=int)
    common.add_argument("--family", default="all",
                        choices=["all", "homogeneous", "linear", "random"])
    common.add_argument("--count", type=int, default=1000, help="members drawn for --family random")
    common.add_argument("--moment-order", type=int, default=2, choices=[2, 4, 6])
    common.add_argument("--gamma", help="comma-separated tail parameters in (0, 1]")
    common.add_argument("--budget", type=int, default=DEFAULT_BUDGET)
    common.add_argument("--seed", type=int, default=DEFAULT_SEED)
    common.add_argument("--threads", type=int, default=None,
                        help=f"worker threads (default ${THREADS_ENV} or 1)")
    common.add_argument("--output", help="write the report here instead of stdout")
    common.add_argument("--format", default="json", choices=["json", "csv"])

    p = argparse.ArgumentParser(prog=TOOL, description=__doc__.splitlines()[0])
    p.add_argument("--version", action="version", version=f"{TOOL} {__version__}")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("eval", parents=[common], help="evaluate S(f)")
    s.add_argument("--method", default="gray", choices=["gray", "naive"])
    s = sub.add_parser("spectrum", parents=[common], help="Fourier coefficients of w^f")
    s.add_argument("--method", default="fwht", choices=["fwht", "naive", "tree"])
    sub.add_parser("moments", parents=[common], help="exact family moments")
    s = sub.add_parser("tail", parents=[common], help="tail probabilities and their bounds")
    s.add_argument("--no-empirical", action="store_true", help="bounds only, no sweep")
    s = sub.add_parser("search", parents=[common], help="max and second-max |S| over a family")
    s.add_argument("--no-symmetry", action="store_true")
    s = sub.add_parser("verify", parents=[common], help="check one claim")
    s.add_argument("--claim", required=True, choices=list(GRID_CLAIMS) + list(CLAIM_CRITERIA))
    s.add_argument("--no-symmetry", action="store_true")
    s = sub.add_parser("decompose", parents=[common], help="modulus-3 pairing decomposition")
    s.add_argument("--sigma", help="permutation as comma list, e.g. 2,1,4,3")
    s.add_argument("--all-pairings", action="store_true")
    s.add_argument("--odd-variant", action="store_true")
    s = sub.add_parser("report-all", parents=[common], help="run every acceptance check")
    s.add_argument("--criteria", help="subset, e.g. 1..3,7")
    return p


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.budget <= 0:
        parser.error("--budget must be positive")
    if args.threads is not None and args.threads < 1:
        parser.error("--threads must be at least 1")
    start = time.perf_counter()
    try:
        rows, csv_text = COMMANDS[args.command](args)
    except (UsageError, PolyError, BudgetError, ValueError, OSError) as exc:
        print(f"{TOOL} {args.command}: error: {exc}", file=sys.stderr)
        return 2
    report = build_report(args, _json_safe(rows), time.perf_counter() - start)
    if args.format == "csv" and csv_text is not None:
        head = (f"# {TOOL} {__version__} command={args.command} seed={args.seed} "
                f"failed={int(report['failed'])}\n")
        _emit(head + csv_text, args.output)
    else:
        _emit(json.dumps(report, sort_keys=True, indent=2) + "\n", args.output)
    return 1 if report["failed"] else 0


if __name__ == "__main__":
    sys.exit(main())
