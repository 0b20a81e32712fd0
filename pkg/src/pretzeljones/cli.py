"""Command line front end: polynomials, degree tables, and self checks.

Three subcommands.  `jones` evaluates exact colored Jones polynomials of a
pretzel knot (state sum, brute-force bracket, or both with an equality
verdict) or the bracket of a diagram JSON file.  `degree` emits the
closed-form degree report with per-residue quadratic structure.  `verify`
runs a built-in check registry: `fast` for a smoke pass, `full` for the
oracle sweeps and enumeration equalities.

All emitted q-exponents are exact rationals (halves come from framing).
Output is byte-deterministic for a fixed invocation: every iteration order
is sorted, colors ascending, exponents descending.  Exit codes: 0 success,
1 verification mismatch, 2 usage or unsupported-regime error.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Dict, List, Optional, Sequence, Tuple

from . import degree as dg
from . import pretzel, qring, skein
from .pretzel import PretzelSpec


class UsageError(ValueError):
    pass


# --- config ----------------------------------------------------------------------


@dataclass(frozen=True)
class RunConfig:
    pretzel: Optional[Tuple[int, ...]]
    colors: Tuple[int, ...]
    method: str
    emit: str
    verify_level: str
    diagram_in: Optional[str] = None


def _parse_pretzel(text: str) -> Tuple[int, ...]:
    try:
        return tuple(int(v) for v in text.split(","))
    except ValueError:
        raise UsageError(f"bad pretzel vector {text!r}; want e.g. -5,4,3")


def _parse_colors(text: str) -> Tuple[int, ...]:
    """Accepts '4', '2,3,5', or '2..20' (inclusive range)."""
    text = text.strip()
    try:
        if ".." in text:
            lo, hi = text.split("..")
            out = tuple(range(int(lo), int(hi) + 1))
        else:
            out = tuple(int(v) for v in text.split(","))
    except ValueError:
        raise UsageError(f"bad colors {text!r}; want N, N1,N2,..., or lo..hi")
    out = tuple(sorted(set(out)))
    if not out or out[0] < 2:
        raise UsageError("colors must be integers >= 2")
    return out


_CONFIG_KEYS = {"pretzel", "colors", "method", "emit", "verify-level",
                "verify_level", "diagram-in", "diagram_in"}


def _load_config(path: str) -> Dict[str, object]:
    with open(path, "r", encoding="utf-8") as fh:
        data = json.load(fh)
    if not isinstance(data, dict):
        raise UsageError("config file must hold a JSON object")
    bad = set(data) - _CONFIG_KEYS
    if bad:
        raise UsageError(f"unknown config keys: {sorted(bad)}")
    return {k.replace("-", "_"): v for k, v in data.items()}


def _build_config(args: argparse.Namespace) -> RunConfig:
    conf: Dict[str, object] = {}
    if getattr(args, "config", None):
        conf = _load_config(args.config)

    def pick(flag, key, fallback=None):
        if flag is not None:
            return flag
        return conf.get(key, fallback)

    pre = pick(getattr(args, "pretzel", None), "pretzel")
    if isinstance(pre, str):
        pre = _parse_pretzel(pre)
    elif isinstance(pre, list):
        pre = tuple(int(v) for v in pre)

    colors = pick(getattr(args, "colors", None), "colors")
    if isinstance(colors, str):
        colors = _parse_colors(colors)
    elif isinstance(colors, list):
        colors = tuple(sorted(set(int(v) for v in colors)))
        if colors and colors[0] < 2:
            raise UsageError("colors must be integers >= 2")
    elif colors is None:
        colors = ()

    method = pick(getattr(args, "method", None), "method", "statesum")
    emit = pick(getattr(args, "emit", None), "emit", "text")
    level = pick(getattr(args, "level", None), "verify_level", "fast")
    diagram = pick(getattr(args, "diagram_in", None), "diagram_in")
    if method not in ("statesum", "bracket", "both"):
        raise UsageError(f"unknown method {method!r}")
    if emit not in ("text", "json", "csv"):
        raise UsageError(f"unknown emit format {emit!r}")
    if level not in ("fast", "full"):
        raise UsageError(f"unknown verify level {level!r}")
    return RunConfig(pretzel=pre, colors=tuple(colors), method=method,
                     emit=emit, verify_level=level, diagram_in=diagram)


def _thread_count() -> int:
    raw = os.environ.get("PRETZELJONES_THREADS", "1")
    try:
        return max(1, int(raw))
    except ValueError:
        return 1


# --- jones -----------------------------------------------------------------------


def _oracle_guard(w: Tuple[int, ...], N: int) -> None:
    # brute-force bracket cost explodes with cable width and crossing count
    n = N - 1
    if n <= 2:
        return
    if n == 3 and sum(abs(v) for v in w) <= 15:
        return
    raise UsageError(
        f"bracket oracle infeasible for {w} at color {N}; use --method statesum")


def _poly_payload(poly: qring.HalfLaurent) -> List[Tuple[str, str]]:
    return [(str(Fraction(e, 2)), c) for e, c in poly.to_terms()]


def _jones_one(w: Tuple[int, ...], method: str, N: int):
    spec = PretzelSpec(w)
    res: Dict[str, object] = {"color": N}
    js = jb = None
    if method in ("statesum", "both"):
        js = pretzel.colored_jones_statesum(spec, N)
    if method in ("bracket", "both"):
        _oracle_guard(w, N)
        n = N - 1
        br = skein.bracket(skein.cable_pretzel(w, n)).as_laurent()
        jb = qring.framing_factor(skein.writhe(w), n) * br
    poly = js if js is not None else jb
    res["poly"] = poly
    res["equal"] = (js == jb) if method == "both" else None
    return res


def cmd_jones(cfg: RunConfig, out) -> int:
    if cfg.diagram_in is not None:
        if cfg.pretzel is not None or cfg.colors:
            raise UsageError("--diagram-in replaces --pretzel/--colors")
        try:
            with open(cfg.diagram_in, "r", encoding="utf-8") as fh:
                diag = skein.PlanarDiagram.from_json(fh.read())
        except OSError as exc:
            raise UsageError(f"cannot read {cfg.diagram_in}: {exc}")
        except (ValueError, KeyError, TypeError) as exc:
            raise UsageError(f"bad diagram file {cfg.diagram_in}: {exc}")
        try:
            val = skein.bracket(diag)
        except skein.DiagramError as exc:
            raise UsageError(f"cannot evaluate diagram: {exc}")
        try:
            poly = val.as_laurent()
        except qring.InexactDivision:
            # projector networks can be honestly rational; emit them reduced
            red = val.reduced()
            if cfg.emit == "csv":
                raise UsageError(
                    "diagram bracket is not a Laurent polynomial; "
                    "csv emits term rows only (use --emit text or json)")
            if cfg.emit == "json":
                out.write(json.dumps({"input": cfg.diagram_in,
                                      "rational": repr(red)},
                                     indent=2, sort_keys=True) + "\n")
            else:
                out.write(f"{cfg.diagram_in}: {red!r}\n")
            return 0
        results = [{"color": None, "poly": poly, "equal": None}]
        label = cfg.diagram_in
    else:
        if cfg.pretzel is None:
            raise UsageError("need --pretzel or --diagram-in")
        if not cfg.colors:
            raise UsageError("need --color/--colors")
        try:
            spec = PretzelSpec(cfg.pretzel)
        except ValueError as exc:
            raise UsageError(str(exc))
        if not spec.knot:
            raise UsageError(f"{cfg.pretzel} is a link; only knots supported")
        threads = min(_thread_count(), len(cfg.colors))
        if threads > 1:
            with ThreadPoolExecutor(max_workers=threads) as pool:
                results = list(pool.map(
                    lambda N: _jones_one(cfg.pretzel, cfg.method, N),
                    cfg.colors))
        else:
            results = [_jones_one(cfg.pretzel, cfg.method, N)
                       for N in cfg.colors]
        label = "P(" + ",".join(str(v) for v in cfg.pretzel) + ")"

    status = 0
    if cfg.method == "both" and any(r["equal"] is False for r in results):
        status = 1

    if cfg.emit == "json":
        doc = {"input": label, "method": cfg.method, "results": [
            {"color": r["color"],
             "degree": str(Fraction(r["poly"].degree())) if r["poly"] else None,
             "terms": _poly_payload(r["poly"]),
             "equal": r["equal"]} for r in results]}
        out.write(json.dumps(doc, indent=2, sort_keys=True) + "\n")
    elif cfg.emit == "csv":
        wr = csv.writer(out, lineterminator="\n")
        wr.writerow(["color", "exponent", "coefficient", "equal"])
        for r in results:
            eq = "" if r["equal"] is None else str(r["equal"]).lower()
            col = "" if r["color"] is None else str(r["color"])
            for e, c in _poly_payload(r["poly"]):
                wr.writerow([col, e, c, eq])
    else:
        for r in results:
            head = label if r["color"] is None else f"{label} N={r['color']}"
            out.write(f"{head}: {r['poly']!r}\n")
            if r["equal"] is not None:
                verdict = "equal" if r["equal"] else "UNEQUAL"
                out.write(f"{head}: statesum vs bracket: {verdict}\n")
    return status


# --- degree ----------------------------------------------------------------------


def cmd_degree(cfg: RunConfig, out) -> int:
    if cfg.pretzel is None:
        raise UsageError("need --pretzel")
    colors = cfg.colors or tuple(range(2, 21))
    w = cfg.pretzel
    try:
        reason = dg.hypothesis_failure(w)
        if reason is None:
            degrees = {N: dg.predicted_degree(w, N) for N in colors}
            try:
                report = dg.empirical_degree_fit(w, degrees)
            except ValueError as exc:
                m = dg.cancellation_modulus(w)
                raise UsageError(f"{exc}; widen --colors so every residue "
                                 f"class mod {m} has three colors "
                                 f"(e.g. 2..{2 + 3 * m})")
        else:
            report = None
    except UsageError:
        raise
    except ValueError as exc:
        raise UsageError(str(exc))

    if report is not None:
        if cfg.emit == "json":
            out.write(report.to_json() + "\n")
        elif cfg.emit == "csv":
            wr = csv.writer(out, lineterminator="\n")
            for row in report.csv_rows():
                wr.writerow(row)
        else:
            out.write(f"P({','.join(str(v) for v in w)}): "
                      f"s={report.s} s1={report.s1} js={report.js} "
                      f"modulus={report.modulus}\n")
            for r, v in sorted(report.jx.items()):
                tag = " (cancellation)" if r in report.cancellation_residues \
                    else ""
                out.write(f"  residue {r}: jx={v} c={report.c[r]}{tag}\n")
            for row in report.rows:
                out.write(f"  N={row.N} residue={row.residue} "
                          f"degree={row.degree}\n")
        return 0

    # outside the theorem: report framed lattice maxima, no cancellation claims
    caveat = f"unsupported regime: {reason}; no cancellation analysis"
    rows = []
    for N in colors:
        n = N - 1
        top = dg.lattice_max(w, n)[0].delta
        try:
            top += Fraction(skein.writhe(w) * (n * n + 2 * n), 2)
        except skein.DiagramError:
            caveat = (f"unsupported regime: {reason}; link, unframed; "
                      "no cancellation analysis")
        rows.append((N, top))
    if cfg.emit == "json":
        out.write(json.dumps({
            "w": list(w), "caveat": caveat,
            "rows": [{"N": N, "lattice_max_degree": str(v)} for N, v in rows],
        }, indent=2, sort_keys=True) + "\n")
    elif cfg.emit == "csv":
        wr = csv.writer(out, lineterminator="\n")
        wr.writerow(["N", "lattice_max_degree", "caveat"])
        for N, v in rows:
            wr.writerow([str(N), str(v), caveat])
    else:
        out.write(f"caveat: {caveat}\n")
        for N, v in rows:
            out.write(f"  N={N} lattice max degree={v}\n")
    return 0


# --- verify ----------------------------------------------------------------------


def _check_unknot(hi: int) -> None:
    for N in range(2, hi + 1):
        want = qring.HalfLaurent.monomial(0, (-1) ** (N - 1)) * qring.qint(N)
        got = pretzel.unknot_jones(N)
        assert got == want, f"unknot color {N}: {got!r} != {want!r}"


def _oracle_agree(w: Tuple[int, ...], colors: Sequence[int]) -> None:
    spec = PretzelSpec(w)
    for N in colors:
        n = N - 1
        br = skein.bracket(skein.cable_pretzel(w, n)).as_laurent()
        want = qring.framing_factor(skein.writhe(w), n) * br
        got = pretzel.colored_jones_statesum(spec, N)
        assert got == want, f"{w} color {N}: state sum != bracket oracle"


def _check_small_oracles() -> None:
    for w in [(-1, -1, -1), (2, 3)]:
        _oracle_agree(w, (2, 3))


def _check_theta() -> None:
    rng = range(0, 5, 2)
    for a in rng:
        for b in rng:
            for c in rng:
                if not qring.admissible(a, b, c):
                    continue
                net = skein.bracket(skein.theta_network(a, b, c))
                assert net == qring.theta(a, b, c), f"theta({a},{b},{c})"


def _check_projector() -> None:
    for n in range(2, 5):
        d = skein.PlanarDiagram()
        box = d.add_jw(n)
        cap = d.add_cap()
        cup = d.add_cup()
        d.connect((cap, 0), (box, 0))
        d.connect((cap, 1), (box, 1))
        d.connect((cup, 0), (box, n))
        d.connect((cup, 1), (box, n + 1))
        for i in range(2, n):
            d.connect((box, i), (box, n + i))
        assert not skein.bracket(d), f"turnback through width {n} projector"
    for n in range(1, 5):
        val = skein.bracket(skein.unknot_diagram(n)).as_laurent()
        want = qring.HalfLaurent.monomial(0, (-1) ** n) * qring.qint(n + 1)
        assert val == want, f"closed width {n} projector"


def _check_543_degrees(colors: Sequence[int]) -> None:
    w = (-5, 4, 3)
    spec = PretzelSpec(w)
    for N in colors:
        J = pretzel.colored_jones_statesum(spec, N)
        want = dg.predicted_degree(w, N)
        assert J.degree() == want, f"deg J_{N} = {J.degree()} != {want}"


def _check_degree_constants() -> None:
    w = (-5, 4, 3)
    assert dg.s_value(w) == Fraction(-14, 5)
    assert dg.s1_value(w) == Fraction(-18, 5)
    assert dg.js_value(w) == Fraction(4, 5)
    assert dg.jx_value(w, False) == -3
    assert dg.jx_value(w, True) == Fraction(-19, 5)
    cells = dg.lattice_max(w, 4)
    assert sorted(c.k for c in cells) == [(4, 1, 3), (4, 2, 2)]
    assert {c.sign for c in cells} == {1, -1}


def _check_cancellation_gap() -> None:
    assert dg.cancellation_pair_gap((-5, 4, 3), 1) == -4


def _check_oracle_sweep() -> None:
    vals = (-3, -2, 2, 3)
    for w0 in vals:
        for w1 in vals:
            for w2 in vals:
                w = (w0, w1, w2)
                if skein.pretzel_components(w) != 1:
                    continue
                _oracle_agree(w, (2, 3))


def _check_pruned_vs_generic() -> None:
    for w in [(-3, 3, 2), (-5, 4, 3)]:
        spec = PretzelSpec(w)
        for N in (2, 3):
            a = pretzel.colored_jones_statesum(spec, N, prune=True)
            b = pretzel.colored_jones_statesum(spec, N, prune=False)
            assert a == b, f"pruned != generic for {w} color {N}"


def _check_quadratic_classes() -> None:
    w = (-5, 4, 3)
    degs = {N: dg.predicted_degree(w, N) for N in range(2, 51)}
    rep = dg.empirical_degree_fit(w, degs)
    assert rep.js == Fraction(4, 5)
    assert rep.jx == {0: Fraction(-19, 5), 1: -3, 2: -3, 3: -3, 4: -3}


def _check_mirror() -> None:
    spec = PretzelSpec((-3, 3, 2))
    mir = spec.mirror()
    for N in (2, 3):
        J = pretzel.colored_jones_statesum(spec, N)
        Jm = pretzel.colored_jones_statesum(mir, N)
        assert J.min_degree() == -Jm.degree() and J.degree() == -Jm.min_degree()


FAST_CHECKS: List[Tuple[str, Callable[[], None]]] = [
    ("unknot normalization (colors 2..6)", lambda: _check_unknot(6)),
    ("small knot oracle agreement", _check_small_oracles),
    ("theta closed form", _check_theta),
    ("projector annihilation and closure", _check_projector),
    ("P(-5,4,3) degrees at colors 2,3", lambda: _check_543_degrees((2, 3))),
    ("degree constants P(-5,4,3)", _check_degree_constants),
    ("cancellation pair gap j=1", _check_cancellation_gap),
]

FULL_CHECKS: List[Tuple[str, Callable[[], None]]] = FAST_CHECKS + [
    ("unknot normalization (colors 2..8)", lambda: _check_unknot(8)),
    ("oracle sweep |w_i| <= 3, colors 2,3", _check_oracle_sweep),
    ("pruned vs generic enumeration, colors 2,3", _check_pruned_vs_generic),
    ("P(-5,4,3) degrees at colors 4,5", lambda: _check_543_degrees((4, 5))),
    ("per-residue quadratic fit to color 50", _check_quadratic_classes),
    ("mirror degree reflection", _check_mirror),
]


def cmd_verify(level: str, out) -> int:
    checks = FAST_CHECKS if level == "fast" else FULL_CHECKS
    failed = 0
    t_all = time.time()
    for name, check in checks:
        t0 = time.time()
        try:
            check()
        except Exception as exc:
            failed += 1
            out.write(f"FAIL {name}: {exc}\n")
        else:
            out.write(f"ok {name} ({time.time() - t0:.1f}s)\n")
    out.write(f"{'FAILED' if failed else 'passed'} {len(checks) - failed}/"
              f"{len(checks)} checks ({time.time() - t_all:.1f}s)\n")
    return 1 if failed else 0


# --- entry point -----------------------------------------------------------------


def _make_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="pretzeljones",
        description="exact colored Jones polynomials of pretzel knots")
    sub = p.add_subparsers(dest="command", required=True)

    pj = sub.add_parser("jones", help="evaluate colored Jones polynomials")
    pj.add_argument("--pretzel", type=_parse_pretzel, default=None,
                    help="twist vector, e.g. -5,4,3")
    pj.add_argument("--color", dest="colors", type=_parse_colors, default=None,
                    help="single color N >= 2")
    pj.add_argument("--colors", dest="colors", type=_parse_colors,
                    help="colors: N, N1,N2,..., or lo..hi")
    pj.add_argument("--method", choices=("statesum", "bracket", "both"),
                    default=None)
    pj.add_argument("--emit", choices=("text", "json", "csv"), default=None)
    pj.add_argument("--diagram-in", dest="diagram_in", default=None,
                    help="evaluate the bracket of a diagram JSON file")
    pj.add_argument("--config", default=None, help="RunConfig as JSON file")

    pd = sub.add_parser("degree", help="closed-form degree report")
    pd.add_argument("--pretzel", type=_parse_pretzel, default=None)
    pd.add_argument("--colors", dest="colors", type=_parse_colors, default=None)
    pd.add_argument("--emit", choices=("text", "json", "csv"), default=None)
    pd.add_argument("--config", default=None)

    pv = sub.add_parser("verify", help="run the built-in check registry")
    pv.add_argument("--level", choices=("fast", "full"), default=None)
    pv.add_argument("--config", default=None)
    return p


def main(argv: Optional[Sequence[str]] = None, out=None) -> int:
    out = out if out is not None else sys.stdout
    argv = list(sys.argv[1:] if argv is None else argv)
    # glue the value onto --pretzel so argparse does not read -5,4,3 as a flag
    merged: List[str] = []
    skip = False
    for i, tok in enumerate(argv):
        if skip:
            skip = False
            continue
        if tok == "--pretzel" and i + 1 < len(argv):
            merged.append(f"--pretzel={argv[i + 1]}")
            skip = True
        else:
            merged.append(tok)
    parser = _make_parser()
    args = parser.parse_args(merged)
    try:
        cfg = _build_config(args)
        if args.command == "jones":
            return cmd_jones(cfg, out)
        if args.command == "degree":
            return cmd_degree(cfg, out)
        return cmd_verify(cfg.verify_level, out)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
