"""Command-line front end: ``ordpat <subcommand> ...``.

Every run writes the tool version and the exact invocation to stderr.
Exit codes: 0 success, 2 invalid flags, 3 and up one per package error class.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import os
import shlex
import sys
from fractions import Fraction
from typing import Optional, Sequence

from . import __version__, errors
from .perm import (Pattern, all_patterns, outgrowth_count, outgrowth_set,
                   outgrowth_union_bound, single_shift_count)
from .plmaps import (PatternCensus, builtin_map, cached_census, conjugate_endpoints,
                     orbit_pattern_at, tent_to_logistic)
from .series import (Series, baker_orbit, bernoulli, determinism_report, map_orbit,
                     markov, ordinal_census)
from .shift import (Family, Screen, classify_spiralling, is_allowed_for_shift,
                    is_root_pattern, named_forbidden_family, parse_spiralling,
                    r4_blocks, r4_screen, shift_witness, witness_short_pattern)
from .plmaps import logistic

# Most specific classes first; lookup walks the MRO so subclasses win.
EXIT_CODES = {
    errors.DuplicateValues: 3,
    errors.LengthMismatch: 4,
    errors.CapExceeded: 5,
    errors.PeriodicCollision: 6,
    errors.DuplicateShifts: 7,
    errors.AlphabetMismatch: 8,
    errors.HypothesisViolated: 9,
    errors.LengthTooLong: 10,
    errors.BadLength: 11,
    errors.UnknownName: 12,
    errors.ExcludedPoint: 13,
    errors.BadStochasticVector: 14,
    errors.NonStationary: 15,
    errors.WindowTooLong: 16,
    errors.DuplicatePoints: 17,
    errors.CensusError: 18,
    errors.OrdpatError: 19,
}
EXIT_IO = 20


class FlagError(Exception):
    def __init__(self, flag: str, message: str):
        super().__init__(f"{flag}: {message}")


def exit_code_for(exc: BaseException) -> int:
    for cls in type(exc).__mro__:
        if cls in EXIT_CODES:
            return EXIT_CODES[cls]
    return 1


# -- argument types -----------------------------------------------------------

def _pattern(text: str) -> Pattern:
    try:
        return Pattern.parse(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"not a pattern: {exc}")


def _positive(lo: int):
    def conv(text: str) -> int:
        try:
            v = int(text)
        except ValueError:
            raise argparse.ArgumentTypeError(f"not an integer: {text!r}")
        if v < lo:
            raise argparse.ArgumentTypeError(f"must be at least {lo}")
        return v
    return conv


def _vector(text: str) -> list[float]:
    try:
        return [float(t) for t in text.split(",")]
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a comma-separated vector: {text!r}")


def _matrix(text: str) -> list[list[float]]:
    return [_vector(row) for row in text.split(";")]


def _number(text: str):
    """Exact rational for ``a/b`` or integer text, binary64 otherwise."""
    try:
        if "." in text or "e" in text.lower():
            return float(text)
        return Fraction(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a number: {text!r}")


# -- formatting ---------------------------------------------------------------

def _fmt_num(x) -> str:
    if isinstance(x, float):
        return repr(x)
    if hasattr(x, "denominator"):
        return f"{x.numerator}/{x.denominator}"
    return str(x)


def _csv(rows: Sequence[Sequence]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerows(rows)
    return buf.getvalue()


def _json(doc) -> str:
    return json.dumps(doc, indent=1) + "\n"


def _map_census(name: str, L: int, N: Optional[int]) -> PatternCensus:
    if name == "sawtooth" and N is None:
        raise FlagError("--symbols", "sawtooth needs --symbols")
    return cached_census(name, L, N if name == "sawtooth" else None)


# -- subcommands --------------------------------------------------------------

def cmd_census(a) -> str:
    base = "tent" if a.map == "logistic" else a.map
    census = _map_census(base, a.length, a.symbols)
    if a.figure_csv:
        emit_figure_data(census, a.figure_csv, a.resolution, symbols=a.symbols)
    if a.map == "logistic":
        return _logistic_census(conjugate_endpoints(census), a.format)
    if a.format == "json":
        return census.to_json()
    if a.format == "csv":
        return census.to_csv()
    lines = [f"map {census.map_name}, length {census.length}: "
             f"{len(census.realized)} allowed, {len(census.forbidden)} forbidden"]
    for left, right, p in census.rows():
        lines.append(f"{p}  ({_fmt_num(left)}, {_fmt_num(right)})")
    lines.append("forbidden: " + " ".join(str(p) for p in census.forbidden))
    return "\n".join(lines) + "\n"


def _logistic_census(nc, fmt: str) -> str:
    rows = sorted((a, b, p) for p, iv in nc.realized.items() for a, b in iv)
    if fmt == "json":
        return _json({"length": nc.length, "map": nc.map_name,
                      "allowed": [{"pattern": list(p), "intervals": [list(i) for i in nc.realized[p]]}
                                  for p in nc.allowed],
                      "forbidden": [list(p) for p in nc.forbidden]})
    if fmt == "csv":
        return _csv([["pattern", "left", "right"]] + [[str(p), repr(a), repr(b)] for a, b, p in rows])
    lines = [f"{p}  ({a!r}, {b!r})" for a, b, p in rows]
    lines.append("forbidden: " + " ".join(str(p) for p in nc.forbidden))
    return "\n".join(lines) + "\n"


def emit_figure_data(census: PatternCensus, path: str, resolution: int = 0,
                     symbols: Optional[int] = None) -> None:
    """Write interval rows to ``path`` and, if ``resolution > 0``, sampled
    iterates ``x, f(x), ..., f^(L-1)(x)`` on ``resolution + 1`` grid points to
    ``<path stem>.curves.csv``.
    """
    rows = [["x_left", "x_right", "pattern"]]
    rows += [[_fmt_num(a), _fmt_num(b), str(p)] for a, b, p in census.rows()]
    with open(path, "w", newline="") as fh:
        fh.write(_csv(rows))
    if resolution <= 0:
        return
    name = census.map_name
    f = builtin_map("sawtooth", int(name[8:])) if name.startswith("sawtooth") else builtin_map(name)
    L = census.length
    curves = [["x"] + [f"f{k}" for k in range(1, L)]]
    for i in range(resolution + 1):
        x = Fraction(i, resolution)
        vals = [x]
        for _ in range(L - 1):
            vals.append(f(vals[-1]))
        curves.append([repr(float(v)) for v in vals])
    stem, _ = os.path.splitext(path)
    with open(stem + ".curves.csv", "w", newline="") as fh:
        fh.write(_csv(curves))


def cmd_shift(a) -> str:
    N, L = a.symbols, a.length
    verdicts = [(p, is_allowed_for_shift(p, N)) for p in all_patterns(L)]
    roots = {p for p, ok in verdicts if not ok and is_root_pattern(p, N)} if a.roots else set()
    allowed = [p for p, ok in verdicts if ok]
    forbidden = [p for p, ok in verdicts if not ok]
    if a.format == "json":
        doc = {"symbols": N, "length": L,
               "allowed": [list(p) for p in allowed],
               "forbidden": [list(p) for p in forbidden]}
        if a.roots:
            doc["roots"] = [list(p) for p in sorted(roots)]
        return _json(doc)
    if a.format == "csv":
        head = ["pattern", "verdict"] + (["root"] if a.roots else [])
        body = [[str(p), "allowed" if ok else "forbidden"]
                + ([str(p in roots).lower()] if a.roots else []) for p, ok in verdicts]
        return _csv([head] + body)
    lines = [f"{N}-shift, length {L}: {len(allowed)} allowed, {len(forbidden)} forbidden"]
    lines += [f"forbidden {p}" for p in forbidden]
    if a.roots:
        lines.append(f"roots ({len(roots)}):")
        lines += [f"root {p}" for p in sorted(roots)]
    return "\n".join(lines) + "\n"


def _shift_rule_chain(p: Pattern, N: int) -> list[str]:
    chain = []
    blocks = r4_blocks(p)
    screen = r4_screen(p, N)
    chain.append(f"block screen: {len(blocks)} block(s) vs {N} symbols, "
                 + ("ruled out" if screen is Screen.RULED_OUT else "inconclusive"))
    spiral = parse_spiralling(p)
    if spiral is not None:
        part, mirrored = spiral
        desc = f"spiralling, segments {list(part.lengths)}{' mirrored' if mirrored else ''}"
        try:
            desc += f": {classify_spiralling(part, N).value}"
        except errors.HypothesisViolated:
            desc += ": first segment too short for the closed form"
        chain.append(desc)
    chain.append("exact census: " + ("allowed" if is_allowed_for_shift(p, N) else "forbidden"))
    return chain


def cmd_classify(a) -> str:
    p = a.pattern
    doc = {"pattern": list(p)}
    if a.shift is not None:
        N = a.shift
        ok = is_allowed_for_shift(p, N)
        doc.update(target=f"{N}-shift", verdict="allowed" if ok else "forbidden")
        if ok:
            w = witness_short_pattern(p, N) if len(p) <= N + 1 else shift_witness(p, N)
            doc["witness"] = str(w)
        else:
            doc["root"] = is_root_pattern(p, N)
        doc["rules"] = _shift_rule_chain(p, N)
    else:
        if a.census_file:
            try:
                with open(a.census_file) as fh:
                    census = PatternCensus.from_json(fh.read())
            except (OSError, json.JSONDecodeError, KeyError) as exc:
                raise FlagError("--census-file", str(exc))
        else:
            census = _map_census(a.map, len(p), a.symbols)
        if census.length != len(p):
            raise FlagError("--pattern", f"length {len(p)} differs from census length {census.length}")
        ok = census.is_allowed(p)
        doc.update(target=census.map_name, verdict="allowed" if ok else "forbidden")
        if ok:
            u = census.realized[p]
            doc["witness"] = _fmt_num(u.interior_point())
            doc["intervals"] = [[_fmt_num(x), _fmt_num(y)] for x, y in u.intervals]
    if a.format == "json":
        return _json(doc)
    if a.format == "csv":
        return _csv([list(doc), [_cell(v) for v in doc.values()]])
    lines = [doc["verdict"]]
    lines += [f"{k}: {_cell(v)}" for k, v in doc.items() if k != "verdict"]
    return "\n".join(lines) + "\n"


def _cell(v) -> str:
    if isinstance(v, list):
        return json.dumps(v, separators=(",", ":"))
    if isinstance(v, bool):
        return str(v).lower()
    return str(v)


def cmd_outgrowth(a) -> str:
    p, M = a.pattern, a.length
    L = len(p)
    if M <= L:
        raise FlagError("--length", f"must exceed the pattern length {L}")
    doc = {"pattern": list(p), "length": M,
           "single_shift_count": single_shift_count(L, M),
           "union_bound": outgrowth_union_bound(L, M)}
    members = None
    if a.list:
        members = outgrowth_set(p, M, cap=a.cap)
        doc["count"] = len(members)
        doc["outgrowths"] = [list(s) for s in members]
    else:
        doc["count"] = outgrowth_count(p, M, cap=a.cap)
    if a.format == "json":
        return _json(doc)
    if a.format == "csv":
        return _csv([["outgrowth"]] + [[str(s)] for s in members or []]) if a.list else \
            _csv([["pattern", "length", "count", "union_bound"],
                  [str(p), M, doc["count"], doc["union_bound"]]])
    lines = [f"{p} in S_{M}: {doc['count']} outgrowths (union bound {doc['union_bound']})"]
    lines += [str(s) for s in members or []]
    return "\n".join(lines) + "\n"


def cmd_family(a) -> str:
    p = named_forbidden_family(a.name, a.symbols, a.length, a.mirrored)
    doc = {"family": a.name, "symbols": a.symbols, "length": a.length,
           "mirrored": a.mirrored, "pattern": list(p)}
    if a.check:
        doc["root"] = is_root_pattern(p, a.symbols)
    if a.format == "json":
        return _json(doc)
    if a.format == "csv":
        return _csv([list(doc), [_cell(v) for v in doc.values()]])
    return str(p) + ("" if not a.check else f"  root: {_cell(doc['root'])}") + "\n"


def cmd_series(a) -> str:
    try:
        s = Series.read(a.input)
    except OSError as exc:
        raise FlagError("--input", str(exc))
    except ValueError as exc:
        raise FlagError("--input", f"bad series: {exc}")
    if a.determinism:
        if a.seed is None:
            raise FlagError("--seed", "required with --determinism")
        rep = determinism_report(s, a.length, a.trials, a.seed, jobs=a.jobs)
        if a.format == "json":
            return rep.to_json()
        d = rep.to_dict()
        if a.format == "csv":
            keys = ["length", "n", "observed_missing", "null_trials", "null_mean_missing", "exceedance"]
            return _csv([keys, [d[k] for k in keys]])
        lines = [f"{k}: {_cell(v)}" for k, v in d.items() if v is not None]
        return "\n".join(lines) + "\n"
    rep = ordinal_census(s, a.length)
    d = rep.to_dict()
    if a.format == "json":
        return _json(d)
    if a.format == "csv":
        return _csv([["pattern", "count"]] + [[str(p), c] for p, c in rep.counts.items()])
    lines = [f"windows {rep.total_windows}, ties {rep.tie_windows}, missing {rep.n_missing}"]
    lines += [f"{p} {c}" for p, c in rep.counts.items()]
    lines += [f"missing {p}" for p in rep.missing]
    return "\n".join(lines) + "\n"


def cmd_generate(a) -> str:
    m = a.model
    if m == "bernoulli":
        if a.p is None:
            raise FlagError("--p", "bernoulli needs --p")
        rows = [[s] for s in bernoulli(a.p, a.n, a.seed)]
        head = ["symbol"]
    elif m == "markov":
        if a.p is None or a.P is None:
            raise FlagError("--P", "markov needs --p and --P")
        rows = [[s] for s in markov(a.p, a.P, a.n, a.seed)]
        head = ["symbol"]
    elif m == "baker":
        if a.x0 is None or a.y0 is None:
            raise FlagError("--x0", "baker needs --x0 and --y0")
        rows = [[_fmt_num(x), _fmt_num(y)] for x, y in baker_orbit(Fraction(a.x0), Fraction(a.y0), a.n)]
        head = ["x", "y"]
    else:
        if a.x0 is None:
            raise FlagError("--x0", f"{m} needs --x0")
        if m == "logistic":
            f = logistic
        elif m == "sawtooth":
            if a.symbols is None:
                raise FlagError("--symbols", "sawtooth needs --symbols")
            f = builtin_map("sawtooth", a.symbols)
        else:
            f = builtin_map(m)
        orb = map_orbit(f, a.x0, a.n)
        vals = orb.values.tolist() if isinstance(orb, Series) else orb
        rows = [[_fmt_num(v)] for v in vals]
        head = ["x"]
    if a.format == "json":
        return _json([r if len(r) > 1 else r[0] for r in rows])
    if a.format == "csv":
        return _csv([head] + rows)
    return "".join(" ".join(str(c) for c in r) + "\n" for r in rows)


# -- parser -------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    fmt = argparse.ArgumentParser(add_help=False)
    fmt.add_argument("--format", choices=("json", "csv", "text"), default="text")
    fmt.add_argument("--output", help="write to this file instead of stdout")
    fmt.add_argument("--jobs", type=_positive(1), default=1, help="worker cap")

    ap = argparse.ArgumentParser(prog="ordpat", description="Order patterns of maps, shifts and series.")
    ap.add_argument("--version", action="version", version=f"ordpat {__version__}")
    sub = ap.add_subparsers(dest="command", required=True)

    c = sub.add_parser("census", parents=[fmt], help="exact pattern census of a map")
    c.add_argument("--map", required=True, choices=("tent", "sawtooth", "logistic"))
    c.add_argument("--symbols", type=_positive(2))
    c.add_argument("--length", type=_positive(2), required=True)
    c.add_argument("--figure-csv", help="also write interval (and curve) data here")
    c.add_argument("--resolution", type=_positive(0), default=0)
    c.set_defaults(func=cmd_census)

    s = sub.add_parser("shift", parents=[fmt], help="allowed/forbidden patterns of the N-shift")
    s.add_argument("--symbols", type=_positive(2), required=True)
    s.add_argument("--length", type=_positive(2), required=True)
    s.add_argument("--roots", action="store_true")
    s.set_defaults(func=cmd_shift)

    k = sub.add_parser("classify", parents=[fmt], help="verdict for one pattern")
    k.add_argument("--pattern", type=_pattern, required=True)
    tgt = k.add_mutually_exclusive_group(required=True)
    tgt.add_argument("--shift", type=_positive(2), metavar="N")
    tgt.add_argument("--map", choices=("tent", "sawtooth"))
    tgt.add_argument("--census-file")
    k.add_argument("--symbols", type=_positive(2))
    k.set_defaults(func=cmd_classify)

    o = sub.add_parser("outgrowth", parents=[fmt], help="outgrowths of a pattern")
    o.add_argument("--pattern", type=_pattern, required=True)
    o.add_argument("--length", type=_positive(2), required=True)
    o.add_argument("--list", action="store_true")
    o.add_argument("--cap", type=_positive(2), default=9)
    o.set_defaults(func=cmd_outgrowth)

    f = sub.add_parser("family", parents=[fmt], help="named forbidden root families")
    f.add_argument("--name", required=True, choices=[x.value for x in Family])
    f.add_argument("--symbols", type=_positive(2), required=True)
    f.add_argument("--length", type=_positive(2), required=True)
    f.add_argument("--mirrored", action="store_true")
    f.add_argument("--check", action="store_true", help="verify root property")
    f.set_defaults(func=cmd_family)

    r = sub.add_parser("series", parents=[fmt], help="ordinal census of a series file")
    r.add_argument("--input", required=True)
    r.add_argument("--length", type=_positive(2), required=True)
    r.add_argument("--determinism", action="store_true")
    r.add_argument("--trials", type=_positive(1), default=100)
    r.add_argument("--seed", type=int)
    r.set_defaults(func=cmd_series)

    g = sub.add_parser("generate", parents=[fmt], help="generate a test series")
    g.add_argument("--model", required=True,
                   choices=("bernoulli", "markov", "tent", "sawtooth", "logistic", "baker"))
    g.add_argument("--n", type=_positive(1), required=True)
    g.add_argument("--seed", type=int, required=True)
    g.add_argument("--p", type=_vector)
    g.add_argument("--P", type=_matrix)
    g.add_argument("--x0", type=_number)
    g.add_argument("--y0", type=_number)
    g.add_argument("--symbols", type=_positive(2))
    g.set_defaults(func=cmd_generate)
    return ap


def main(argv: Optional[Sequence[str]] = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    print(f"ordpat {__version__}: ordpat {shlex.join(argv)}", file=sys.stderr)
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        text = args.func(args)
    except FlagError as exc:
        print(f"ordpat: error: argument {exc}", file=sys.stderr)
        return 2
    except errors.OrdpatError as exc:
        print(f"ordpat: {type(exc).__name__}: {exc}", file=sys.stderr)
        return exit_code_for(exc)
    except OSError as exc:
        print(f"ordpat: {exc}", file=sys.stderr)
        return EXIT_IO
    if args.output:
        try:
            with open(args.output, "w", newline="") as fh:
                fh.write(text)
        except OSError as exc:
            print(f"ordpat: {exc}", file=sys.stderr)
            return EXIT_IO
    else:
        sys.stdout.write(text)
    return 0


if __name__ == "__main__":
    sys.exit(main())
