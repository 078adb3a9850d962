"""Command-line entry point: ``vassiliev <subcommand> [options]``.

Defaults for options may be supplied in a JSON file named by the CONFIG
environment variable, e.g. ``{"seed": 7, "tol": 1e-4, "output": "text"}``;
explicit flags win over the file.
"""

from __future__ import annotations

import argparse
import csv
import hashlib
import io
import json
import os
import sys
from fractions import Fraction
from importlib import resources

import jsonschema
import numpy as np

from . import __version__

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2

BUILTIN_DEFAULTS = {
    "seed": 0,
    "threads": 1,
    "tol": 1e-3,
    "output": None,
    "samples": 1_000_000,
    "tripod_samples": 40_000,
    "segments": 384,
    "trials": 20,
    "crossings": 6,
}

TEXT_DEFAULT = {"lk", "writhe", "enum"}


class UsageError(Exception):
    pass


def _add_common(p: argparse.ArgumentParser, seeded: bool = False) -> None:
    p.add_argument("--output", choices=("json", "csv", "text"), default=None)
    if seeded:
        p.add_argument("--seed", type=int, default=None)


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="vassiliev", description=__doc__.splitlines()[0])
    ap.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = ap.add_subparsers(dest="command", required=True, metavar="SUBCOMMAND")

    p = sub.add_parser("dims", help="dimension of a diagram space modulo relations")
    p.add_argument("--degree", type=int, required=True)
    p.add_argument("--support", default="s1", help="s1, circles:k, interval, line or empty")
    p.add_argument("--relations", default="4t,1t", help="comma list from as,ihx,stu,4t,1t")
    p.add_argument("--with-oracle", action="store_true", help="also run the brute-force chord oracle")
    _add_common(p)

    p = sub.add_parser("enum", help="list diagram classes, one per line")
    p.add_argument("--degree", type=int, required=True)
    p.add_argument("--support", default="s1")
    p.add_argument("--chords", action="store_true", help="chord diagrams only")
    p.add_argument("--no-closed", action="store_true", help="drop diagrams with closed components")
    p.add_argument("--include-zero", action="store_true", help="keep classes killed by AS")
    _add_common(p)

    for name, help_ in (("lk", "combinatorial linking number"), ("writhe", "writhe of a component")):
        p = sub.add_parser(name, help=help_)
        src = p.add_mutually_exclusive_group(required=True)
        src.add_argument("--code", help="Gauss code (O1+ U2- ... / ...) or PD code (X[a,b,c,d] ...)")
        src.add_argument("--file", help="file with one code per line; the first is used")
        if name == "lk":
            p.add_argument("--i", type=int, default=1)
            p.add_argument("--j", type=int, default=2)
        else:
            p.add_argument("--comp", type=int, default=1)
        _add_common(p)

    p = sub.add_parser("bracket-test", help="finite-type degree test on random brackets")
    p.add_argument("--invariant", required=True)
    p.add_argument("--degree", type=int, required=True)
    p.add_argument("--trials", type=int, default=None)
    p.add_argument("--components", type=int, default=None)
    p.add_argument("--crossings", type=int, default=None)
    _add_common(p, seeded=True)

    p = sub.add_parser("lk-integral", help="Gauss linking integral of two components")
    p.add_argument("--link", required=True, help="curve JSON file or builtin name")
    p.add_argument("--i", type=int, default=1)
    p.add_argument("--j", type=int, default=2)
    p.add_argument("--tol", type=float, default=None)
    _add_common(p)

    p = sub.add_parser("writhe-integral", help="self-linking integral of one component")
    p.add_argument("--link", required=True)
    p.add_argument("--comp", type=int, default=1)
    p.add_argument("--tol", type=float, default=None)
    _add_common(p)

    p = sub.add_parser("z", help="Monte Carlo series up to degree 2")
    p.add_argument("--link", required=True)
    p.add_argument("--degree", type=int, default=2)
    p.add_argument("--samples", type=int, default=None, help="samples per chord-diagram integral")
    p.add_argument("--tripod-samples", type=int, default=None)
    p.add_argument("--segments", type=int, default=None)
    p.add_argument("--threads", type=int, default=None)
    p.add_argument("--check-numbered", action="store_true")
    _add_common(p, seeded=True)

    p = sub.add_parser("project", help="Gauss code of a projection")
    p.add_argument("--link", required=True)
    p.add_argument("--direction", help="x,y,z; random (seeded) when omitted")
    _add_common(p, seeded=True)
    return ap


def _load_config() -> dict:
    path = os.environ.get("CONFIG")
    if not path:
        return {}
    try:
        with open(path, encoding="utf-8") as fh:
            data = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise UsageError(f"cannot read CONFIG file {path}: {exc}") from exc
    if not isinstance(data, dict):
        raise UsageError("CONFIG file must hold a JSON object")
    unknown = set(data) - set(BUILTIN_DEFAULTS)
    if unknown:
        raise UsageError(f"unknown CONFIG keys: {', '.join(sorted(unknown))}")
    return data


def _resolve(args: argparse.Namespace, config: dict) -> dict:
    """The full run configuration: flags, then CONFIG, then built-in defaults."""
    out = {}
    for k, v in vars(args).items():
        if v is None and k in BUILTIN_DEFAULTS:
            v = config.get(k, BUILTIN_DEFAULTS[k])
        out[k] = v
    if out.get("output") is None:
        out["output"] = "text" if args.command in TEXT_DEFAULT else "json"
    return out


def config_hash(cfg: dict) -> str:
    blob = json.dumps({k: v for k, v in cfg.items() if k != "output"}, sort_keys=True, default=str)
    return hashlib.sha256(blob.encode()).hexdigest()[:16]


def _schema(name: str) -> dict:
    text = resources.files("vassiliev").joinpath("schemas", f"{name}.json").read_text(encoding="utf-8")
    return json.loads(text)


def _json_num(x):
    if isinstance(x, Fraction):
        return int(x) if x.denominator == 1 else str(x)
    return x


# ---------------------------------------------------------------------------
# subcommands; each returns (result dict, text lines)


def _read_code(cfg: dict):
    from .linkcodes import GaussCodeError, parse_code, read_link_file

    if cfg.get("code"):
        return parse_code(cfg["code"])
    codes = read_link_file(cfg["file"])
    if not codes:
        raise GaussCodeError("no code found in file")
    return codes[0]


def cmd_dims(cfg: dict):
    from .algebra import parse_kinds, quotient
    from .algebra.oracle import oracle_chord_dim
    from .diagrams import Support

    support = Support.parse(cfg["support"])
    kinds = parse_kinds(cfg["relations"])
    q = quotient(cfg["degree"], support, kinds)
    res = {
        "degree": cfg["degree"],
        "support": str(support),
        "kinds": sorted(kinds),
        "dim": q.dim,
        "generators": len(q.generators),
        "relations": len(q.relations),
        "rank": q.rank,
    }
    if cfg["with_oracle"]:
        if support.kind != "circles" or support.k != 1 or not kinds & {"4t"}:
            raise ValueError("the oracle covers chord diagrams on one circle modulo 4T (and 1T)")
        res["oracle_dim"] = oracle_chord_dim(cfg["degree"], one_t="1t" in kinds)
    lines = [f"dim = {res['dim']} (generators {res['generators']}, rank {res['rank']})"]
    if "oracle_dim" in res:
        lines.append(f"oracle dim = {res['oracle_dim']}")
    return res, lines


def cmd_enum(cfg: dict):
    from .diagrams import Support, automorphism_count, decode_key, enumerate_chord_diagrams, enumerate_jacobi

    support = Support.parse(cfg["support"])
    n = cfg["degree"]
    if cfg["chords"]:
        if support.kind != "circles":
            raise ValueError("chord enumeration needs a circle support")
        keys = enumerate_chord_diagrams(n, support.k)
    else:
        keys = enumerate_jacobi(n, support, not cfg["no_closed"], include_zero=cfg["include_zero"])
    rows = []
    for ck in keys:
        d = decode_key(ck.key)
        rows.append({"text": d.to_text(), "key": ck.key.decode(), "aut": automorphism_count(d)})
    return {"degree": n, "count": len(rows), "diagrams": rows}, [r["text"] for r in rows]


def cmd_lk(cfg: dict):
    from .linkcodes import linking_number

    code = _read_code(cfg)
    v = linking_number(code, cfg["i"], cfg["j"])
    return {"i": cfg["i"], "j": cfg["j"], "lk": _json_num(v)}, [str(v)]


def cmd_writhe(cfg: dict):
    from .linkcodes import writhe

    v = writhe(_read_code(cfg), cfg["comp"])
    return {"comp": cfg["comp"], "writhe": v}, [str(v)]


def cmd_bracket_test(cfg: dict):
    from .finite_type import degree_test, get_invariant, random_bracket

    f = get_invariant(cfg["invariant"])
    comps = cfg["components"] or f.components or 2
    rng = np.random.default_rng(cfg["seed"])
    corpus = [
        random_bracket(rng, cfg["degree"] + 1, comps, cfg["crossings"]) for _ in range(cfg["trials"])
    ]
    rep = degree_test(f, cfg["degree"], corpus).as_dict()
    status = "pass" if rep["pass"] else "FAIL"
    return rep, [f"{status}: max |residual| = {rep['max_abs_residual']} over {rep['trials']} brackets"]


def cmd_lk_integral(cfg: dict):
    from .curves import GeomTolerance, gauss_linking_integral, load_link

    link = load_link(cfg["link"])
    i, j = cfg["i"], cfg["j"]
    for c in (i, j):
        if not 1 <= c <= len(link):
            raise ValueError(f"component {c} out of range 1..{len(link)}")
    if i == j:
        raise ValueError("use writhe-integral for a single component")
    r = gauss_linking_integral(link[i - 1], link[j - 1], GeomTolerance(abs_tol=cfg["tol"]))
    res = {"i": i, "j": j, "value": r.value, "error": r.error, "tol": cfg["tol"], "converged": r.converged,
           "cells": r.cells}
    return res, [f"{r.value:.10f} +- {r.error:.2e}"]


def cmd_writhe_integral(cfg: dict):
    from .curves import GeomTolerance, load_link, self_linking_integral

    link = load_link(cfg["link"])
    c = cfg["comp"]
    if not 1 <= c <= len(link):
        raise ValueError(f"component {c} out of range 1..{len(link)}")
    r = self_linking_integral(link[c - 1], GeomTolerance(abs_tol=cfg["tol"]))
    res = {"comp": c, "value": r.value, "error": r.error, "tol": cfg["tol"], "converged": r.converged,
           "cells": r.cells}
    return res, [f"{r.value:.10f} +- {r.error:.2e}"]


def cmd_z(cfg: dict):
    from .curves import load_link
    from .integrator import Budget, z_series

    link = load_link(cfg["link"])
    budget = Budget(
        chord_samples=cfg["samples"],
        tripod_samples=cfg["tripod_samples"],
        segments=cfg["segments"],
        zero_samples=max(2, min(cfg["samples"], 20_000)),
        seed=cfg["seed"],
        threads=cfg["threads"],
    )
    r = z_series(link, cfg["degree"], budget, check_numbered=cfg["check_numbered"])
    res = r.as_dict()
    lines = []
    for n, part in enumerate(res["reduced"]):
        for k, v in part.items():
            lines.append(f"Z_{n} [{k}] = {v['value']:.6f} +- {v['stderr']:.6f}")
    return res, lines


def cmd_project(cfg: dict):
    from .curves import NonRegularDirection, load_link, project, random_directions
    from .linkcodes import format_gauss, linking_number, writhe

    link = load_link(cfg["link"])
    if cfg["direction"]:
        try:
            d = np.array([float(x) for x in cfg["direction"].split(",")])
        except ValueError as exc:
            raise UsageError("--direction needs three comma-separated numbers") from exc
        if d.shape != (3,) or not np.linalg.norm(d) > 0:
            raise UsageError("--direction needs a nonzero 3-vector")
        d = d / np.linalg.norm(d)
        code = project(link, d)
    else:
        rng = np.random.default_rng(cfg["seed"])
        for _ in range(100):
            d = random_directions(rng, 1)[0]
            try:
                code = project(link, d)
                break
            except NonRegularDirection:
                continue
        else:
            raise NonRegularDirection("no regular direction found in 100 draws")
    k = code.n_components
    lks = {f"{i},{j}": _json_num(linking_number(code, i, j)) for i in range(1, k + 1) for j in range(i + 1, k + 1)}
    wr = [writhe(code, i) for i in range(1, k + 1)]
    res = {"direction": [float(x) for x in d], "code": format_gauss(code), "crossings": len(code.crossing_ids),
           "linking": lks, "writhe": wr}
    return res, [res["code"]]


COMMANDS = {
    "dims": cmd_dims,
    "enum": cmd_enum,
    "lk": cmd_lk,
    "writhe": cmd_writhe,
    "bracket-test": cmd_bracket_test,
    "lk-integral": cmd_lk_integral,
    "writhe-integral": cmd_writhe_integral,
    "z": cmd_z,
    "project": cmd_project,
}


def _flatten(prefix: str, x, out: list) -> None:
    if isinstance(x, dict):
        for k, v in x.items():
            _flatten(f"{prefix}.{k}" if prefix else str(k), v, out)
    elif isinstance(x, list) and x and all(isinstance(v, (dict, list)) for v in x):
        for i, v in enumerate(x):
            _flatten(f"{prefix}[{i}]", v, out)
    else:
        out.append((prefix, json.dumps(x) if isinstance(x, (list, dict)) else x))


def render(doc: dict, lines: list[str], fmt: str) -> str:
    if fmt == "json":
        return json.dumps(doc, indent=2, sort_keys=False)
    if fmt == "text":
        return "\n".join(lines)
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["field", "value"])
    rows: list = []
    _flatten("", {k: doc[k] for k in ("command", "version", "seed", "config_hash")}, rows)
    _flatten("result", doc["result"], rows)
    w.writerows(rows)
    return buf.getvalue().rstrip("\n")


def run(argv: list[str] | None = None) -> tuple[int, str]:
    """Execute a command; returns (exit code, stdout text)."""
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return (EXIT_USAGE if exc.code else EXIT_OK), ""
    try:
        cfg = _resolve(args, _load_config())
        result, lines = COMMANDS[args.command](cfg)
    except UsageError as exc:
        parser.print_usage(sys.stderr)
        print(f"vassiliev: error: {exc}", file=sys.stderr)
        return EXIT_USAGE, ""
    except (ValueError, KeyError, RuntimeError, ArithmeticError, OSError) as exc:
        print(f"vassiliev {args.command}: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_FAIL, ""
    recorded = {k: v for k, v in cfg.items() if k != "command"}
    doc = {
        "command": args.command,
        "version": __version__,
        "seed": cfg.get("seed"),
        "config_hash": config_hash(cfg),
        "config": recorded,
        "result": result,
    }
    jsonschema.validate(doc, _schema("envelope"))
    jsonschema.validate(result, _schema(args.command))
    return EXIT_OK, render(doc, lines, cfg["output"])


def main(argv: list[str] | None = None) -> int:
    code, text = run(argv)
    if text:
        print(text)
    return code


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
