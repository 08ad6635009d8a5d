"""geobracket: closed geodesics, intersection numbers and the Goldman bracket.

Exit codes: 0 ok, 1 verification failure, 2 parse error, 3 identity class,
4 non-primitive class, 5 I/O error.
"""

from __future__ import annotations

import argparse
import io
import json
import random
import sys
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional

from . import bracket as br
from . import engine, verify
from .engine import DEFAULT_RADIUS, NonPrimitive
from .surface import BUILTIN_NAMES, InvalidSurface, SurfaceSpec, UnknownSurface, builtin, load_surface
from .svg import Figure
from .words import CyclicWord, IdentityClass, WordError, canonical_class, cyclic_classes, is_power, parse_word

EXIT_OK, EXIT_FAIL, EXIT_PARSE, EXIT_IDENTITY, EXIT_NONPRIMITIVE, EXIT_IO = range(6)
FORMATS = ("text", "json", "tsv")
SUITES = ("beardon", "midpoints", "angles", "reflections", "oracle", "stability", "jacobi", "exact")


class CliError(Exception):
    def __init__(self, code: int, message: str):
        super().__init__(message)
        self.code = code


@dataclass
class RunConfig:
    surface: Optional[str] = None
    radius: int = DEFAULT_RADIUS
    fmt: str = "text"
    seed: int = 0
    tolerances: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.radius < 2:
            raise CliError(EXIT_PARSE, "radius must be at least 2")
        if self.fmt not in FORMATS:
            raise CliError(EXIT_PARSE, f"format must be one of {FORMATS}")

    def surfaces(self, default_all: bool = False) -> list[SurfaceSpec]:
        if self.surface is None:
            names = BUILTIN_NAMES if default_all else ("pants",)
            return [builtin(n) for n in names]
        try:
            return [load_surface(self.surface)]
        except UnknownSurface:
            raise CliError(EXIT_IO, f"no builtin or file named {self.surface!r}") from None
        except OSError as exc:
            raise CliError(EXIT_IO, str(exc)) from None
        except (InvalidSurface, ValueError) as exc:
            raise CliError(EXIT_PARSE, f"bad surface config: {exc}") from None


def _class(text: str) -> CyclicWord:
    try:
        return canonical_class(parse_word(text))
    except IdentityClass:
        raise CliError(EXIT_IDENTITY, f"{text!r} is the identity class") from None
    except WordError as exc:
        raise CliError(EXIT_PARSE, str(exc)) from None


def _primitive(text: str) -> CyclicWord:
    c = _class(text)
    root, n = is_power(c)
    if n != 1:
        raise CliError(EXIT_NONPRIMITIVE, f"{c} is {root} to the power {n}")
    return c


def _header(s: SurfaceSpec, cfg: RunConfig) -> str:
    return f"# surface {s.label}  radius {cfg.radius}"


def _emit(out, cfg: RunConfig, s: SurfaceSpec, text_lines: list[str], payload: dict, rows=None) -> None:
    if cfg.fmt == "json":
        data = {"surface": s.label, "radius": cfg.radius, **payload}
        out.write(json.dumps(data, sort_keys=True) + "\n")
    elif cfg.fmt == "tsv":
        out.write(_header(s, cfg) + "\n")
        for row in rows if rows is not None else [[k, json.dumps(v, sort_keys=True)] for k, v in payload.items()]:
            out.write("\t".join(str(x) for x in row) + "\n")
    else:
        out.write(_header(s, cfg) + "\n")
        for line in text_lines:
            out.write(line + "\n")


def _crossing_rows(crs) -> list[dict]:
    return [
        {"t": round(cr.t, 12), "sign": cr.sign, "angle": round(cr.angle, 12), "term": str(engine.loop_product_class(cr))}
        for cr in crs
    ]


# ------------------------------------------------------------------ commands


def cmd_length(args, cfg, out) -> int:
    c = _class(args.word)
    for s in cfg.surfaces():
        ell = engine.geodesic_of(s, c).length
        _emit(out, cfg, s, [f"{ell:.12g}"], {"class": str(c), "length": ell}, [[str(c), f"{ell:.12g}"]])
    return EXIT_OK


def cmd_selfint(args, cfg, out) -> int:
    c = _primitive(args.word)
    for s in cfg.surfaces():
        crs = engine.crossings(s, c, c, cfg.radius)
        sl = engine.self_intersection_number(s, c, cfg.radius)
        rows = _crossing_rows(crs)
        _emit(
            out, cfg, s, [str(sl)], {"class": str(c), "self_intersection": sl, "crossings": rows},
            [[str(c), sl]] + [[r["t"], r["sign"], r["angle"], r["term"]] for r in rows],
        )
    return EXIT_OK


def cmd_intersect(args, cfg, out) -> int:
    x, y = _class(args.word1), _class(args.word2)
    for s in cfg.surfaces():
        crs = engine.crossings(s, x, y, cfg.radius)
        rows = _crossing_rows(crs)
        _emit(
            out, cfg, s, [str(len(crs))], {"x": str(x), "y": str(y), "intersection": len(crs), "crossings": rows},
            [[str(x), str(y), len(crs)]] + [[r["t"], r["sign"], r["angle"], r["term"]] for r in rows],
        )
    return EXIT_OK


def cmd_bracket(args, cfg, out) -> int:
    if args.bar or args.power is not None:
        if args.word2 is not None:
            raise CliError(EXIT_PARSE, "--bar and --power take a single word")
        x = _primitive(args.word1)
        if args.bar and args.power is not None:
            raise CliError(EXIT_PARSE, "choose one of --bar and --power")
        if args.power is not None and args.power < 2:
            raise CliError(EXIT_PARSE, "--power needs n >= 2")
        y = br.partner(x, "bar" if args.bar else args.power)
    else:
        if args.word2 is None:
            raise CliError(EXIT_PARSE, "bracket needs two words, or one word with --bar or --power")
        x, y = _class(args.word1), _class(args.word2)
    for s in cfg.surfaces():
        r = br.bracket(s, x, y, cfg.radius)
        terms = r.to_dict()
        _emit(
            out, cfg, s, [r.to_json()], {"x": str(x), "y": str(y), "terms": terms, "term_count": br.term_count(r)},
            [[k, v] for k, v in terms.items()],
        )
    return EXIT_OK


def cmd_simple(args, cfg, out) -> int:
    x = _primitive(args.word)
    modes = {"bar": ["bar"], "power": [args.n], "all": ["bar", 2, 3]}[args.mode]
    for s in cfg.surfaces():
        sl = engine.self_intersection_number(s, x, cfg.radius)
        evidence = {}
        verdicts = set()
        for mode in modes:
            r = br.bracket(s, x, br.partner(x, mode), cfg.radius)
            name = "bar" if mode == "bar" else f"power{mode}"
            evidence[name] = br.term_count(r)
            verdicts.add(not r)
        if len(verdicts) != 1 or verdicts.pop() != (sl == 0):
            raise CliError(EXIT_FAIL, f"{x}: bracket modes disagree with SL={sl}: {evidence}")
        verdict = "simple" if sl == 0 else "non-simple"
        detail = ", ".join(f"{k} terms {v}" for k, v in evidence.items())
        _emit(
            out, cfg, s, [verdict, f"SL {sl}; {detail}"],
            {"class": str(x), "verdict": verdict, "self_intersection": sl, "term_counts": evidence},
            [[str(x), verdict, sl, *evidence.values()]],
        )
    return EXIT_OK


def _sweep_row(s: SurfaceSpec, x: CyclicWord, radius: int) -> dict:
    sl = engine.self_intersection_number(s, x, radius)
    bar = br.term_count(br.bracket_bar(s, x, radius))
    sq = br.term_count(br.bracket_power(s, x, 2, radius))
    hard = []
    if (bar == 0) != (sl == 0):
        hard.append("bar")
    if sl > 0 and sq == 0:
        hard.append("power")
    soft = []
    if bar != 2 * sl:
        soft.append("bar!=2SL")
    if sq != 4 * sl:
        soft.append("power2!=4SL")
    return {
        "class": str(x), "SL": sl, "bar_terms": bar, "power2_terms": sq,
        "verdict": "simple" if sl == 0 else "non-simple",
        "hard": ",".join(hard) or "-", "soft": ",".join(soft) or "-",
    }


def cmd_sweep(args, cfg, out) -> int:
    if args.max_len > 7:
        raise CliError(EXIT_PARSE, "--max-len is capped at 7")
    status = EXIT_OK
    for s in cfg.surfaces():
        rows = [_sweep_row(s, x, cfg.radius) for x in cyclic_classes(s.rank, args.max_len)]
        if any(r["hard"] != "-" for r in rows):
            status = EXIT_FAIL
        cols = list(rows[0]) if rows else []
        soft = sum(r["soft"] != "-" for r in rows)
        hard = sum(r["hard"] != "-" for r in rows)
        if cfg.fmt == "json":
            _emit(out, cfg, s, [], {"rows": rows, "hard_failures": hard, "soft_violations": soft})
        else:
            out.write(_header(s, cfg) + "\n")
            out.write("\t".join(cols) + "\n")
            for r in rows:
                out.write("\t".join(str(r[c]) for c in cols) + "\n")
            out.write(f"# {len(rows)} classes, {hard} hard failures, {soft} conjecture violations\n")
    return status


def _corpus_pairs(s: SurfaceSpec, max_len: int):
    cs = cyclic_classes(s.rank, max_len)
    return [(x, y) for x in cs for y in cs]


def _suite(name: str, s: SurfaceSpec, args, cfg) -> list[verify.VerificationReport]:
    L = cfg.radius
    if name in ("beardon", "midpoints"):
        trials = verify.product_trials(args.trials, cfg.seed)
        if name == "beardon":
            return [trials["beardon"], trials["rotations"]]
        rep = trials["midpoints"]
        for x, y in _corpus_pairs(s, min(args.max_len, 3)):
            rep = rep.merge(verify.half_length_check(s, x, y, L))
        return [rep]
    if name == "angles":
        cong = verify.VerificationReport("angles")
        small = verify.VerificationReport("smaller-angle")
        pairs = _corpus_pairs(s, args.max_len)
        pairs += [(x, br.partner(x, m)) for x in cyclic_classes(s.rank, args.max_len) for m in ("bar", 2)]
        for x, y in pairs:
            crs = br.bracket_crossings(s, x, y, L)
            cp = br.canceling_pairs(s, x, y, L, crs=crs)
            cong.merge(verify.check_forward_angle_congruence(s, x, y, L, pairs=cp))
            if cp:
                small.merge(verify.check_smaller_angle_exists(s, x, y, L, crs=crs))
        return [cong, small]
    if name == "reflections":
        rep = verify.VerificationReport("reflections")
        for x, y in _corpus_pairs(s, args.max_len):
            rep.merge(verify.reflection_check_all(s, x, y, L))
        return [rep]
    if name == "oracle":
        return [verify.oracle_check(s, _corpus_pairs(s, args.max_len), L)]
    if name == "exact":
        rep = verify.VerificationReport("exact")
        for x in cyclic_classes(s.rank, args.max_len):
            rep.instances += 1
            a = len(engine.crossings(s, x, x, L))
            b = verify.exact_crossing_count(s, x, x, L + 4)
            if a != b:
                rep.failures.append(f"{s.label} {x}: engine {a}, exact search {b}")
        return [rep]
    if name == "stability":
        rep = verify.VerificationReport("stability")
        pairs = _corpus_pairs(s, args.max_len)
        pairs += [(x, br.partner(x, m)) for x in cyclic_classes(s.rank, args.max_len) for m in (2, 3)]
        for x, y in pairs:
            rep.merge(verify.radius_stability(s, x, y, L))
        return [rep]
    if name == "jacobi":
        rng = random.Random(cfg.seed)
        cs = cyclic_classes(s.rank, min(args.max_len, 3))
        triples = [tuple(rng.sample(cs, 3)) for _ in range(args.triples)]
        return [verify.jacobi_check(s, triples, L)]
    raise CliError(EXIT_PARSE, f"unknown suite {name!r}")


def cmd_verify(args, cfg, out) -> int:
    status = EXIT_OK
    for s in cfg.surfaces(default_all=True):
        reports = _suite(args.suite, s, args, cfg)
        if any(not r.passed for r in reports):
            status = EXIT_FAIL
        _emit(
            out, cfg, s, [r.summary() for r in reports] + [f"  {f}" for r in reports for f in r.failures[:20]],
            {"suite": args.suite, "reports": [r.to_dict() for r in reports]},
            [[r.name, r.instances, len(r.failures), f"{r.max_residual:.3g}", "pass" if r.passed else "fail"] for r in reports],
        )
    return status


def _draw_figure(s: SurfaceSpec, args, cfg) -> Figure:
    x = _class(args.word1)
    y = _class(args.word2) if args.word2 else x
    gx = engine.geodesic_of(s, x)
    crs = engine.crossings(s, x, y, cfg.radius)
    if args.pair is None:
        fig = Figure(f"{s.label}: {x} and {y}", model=args.model)
        fig.line(gx.ax, "#1f4e9e", 2.5, label=str(x))
        fig.point(gx.point_at(0.0), "#1f4e9e", "t=0")
        fig.point(gx.point_at(gx.length), "#1f4e9e", "t=l")
        for cr in crs:
            fig.line(cr.lift, "#c0392b", 1.5, label=str(cr.other_class))
            fig.point(cr.point, "black", f"{cr.sign:+d}")
        return fig
    pairs = br.canceling_pairs(s, x, y, cfg.radius, crs=br.bracket_crossings(s, x, y, cfg.radius))
    if not 0 <= args.pair < len(pairs):
        raise CliError(EXIT_PARSE, f"there are {len(pairs)} canceling pairs")
    return verify.pair_figure(s, pairs[args.pair], args.model)


def cmd_draw(args, cfg, out) -> int:
    s = cfg.surfaces()[0]
    text = _draw_figure(s, args, cfg).render()
    if args.output in (None, "-"):
        out.write(text)
        return EXIT_OK
    try:
        Path(args.output).write_text(text)
    except OSError as exc:
        raise CliError(EXIT_IO, str(exc)) from None
    out.write(f"{_header(s, cfg)}\nwrote {args.output}\n")
    return EXIT_OK


# ------------------------------------------------------------------ parser


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--surface", help=f"builtin ({', '.join(BUILTIN_NAMES)}) or JSON config path")
    common.add_argument("-L", "--radius", type=int, default=DEFAULT_RADIUS, help="lift enumeration radius")
    common.add_argument("--format", dest="fmt", choices=FORMATS, default="text")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--vertex-tol", type=float, help="reflection check vertex tolerance")
    common.add_argument("--angle-tol", type=float, help="forward angle congruence tolerance")

    p = argparse.ArgumentParser(prog="geobracket", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    q = sub.add_parser("length", parents=[common], help="length of the closed geodesic of a class")
    q.add_argument("word")
    q.set_defaults(func=cmd_length)

    q = sub.add_parser("selfint", parents=[common], help="self-intersection number")
    q.add_argument("word")
    q.set_defaults(func=cmd_selfint)

    q = sub.add_parser("intersect", parents=[common], help="number of crossings of two geodesics")
    q.add_argument("word1")
    q.add_argument("word2")
    q.set_defaults(func=cmd_intersect)

    q = sub.add_parser("bracket", parents=[common], help="Goldman bracket as a term map")
    q.add_argument("word1")
    q.add_argument("word2", nargs="?")
    q.add_argument("--bar", action="store_true", help="bracket with the reversed class")
    q.add_argument("--power", type=int, help="bracket with the n-th power")
    q.set_defaults(func=cmd_bracket)

    q = sub.add_parser("simple", parents=[common], help="simplicity test through the bracket")
    q.add_argument("word")
    q.add_argument("--mode", choices=("bar", "power", "all"), default="bar")
    q.add_argument("--n", type=int, default=2)
    q.set_defaults(func=cmd_simple)

    q = sub.add_parser("verify", parents=[common], help="run a verification suite")
    q.add_argument("suite", choices=SUITES)
    q.add_argument("--trials", type=int, default=1000)
    q.add_argument("--max-len", type=int, default=4)
    q.add_argument("--triples", type=int, default=20)
    q.set_defaults(func=cmd_verify)

    q = sub.add_parser("sweep", parents=[common], help="table of SL and bracket term counts")
    q.add_argument("--max-len", type=int, default=5)
    q.set_defaults(func=cmd_sweep)

    q = sub.add_parser("draw", parents=[common], help="SVG of axes, lifts and zigzags")
    q.add_argument("word1")
    q.add_argument("word2", nargs="?")
    q.add_argument("--pair", type=int, help="draw the zigzags of this canceling pair")
    q.add_argument("--model", choices=("half-plane", "band"), default="half-plane")
    q.add_argument("-o", "--output")
    q.set_defaults(func=cmd_draw)
    return p


def main(argv: Optional[list[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    buf = io.StringIO()
    saved = {"VERTEX_TOL": verify.VERTEX_TOL, "ANGLE_TOL": verify.ANGLE_TOL}
    try:
        tols = {"VERTEX_TOL": args.vertex_tol, "ANGLE_TOL": args.angle_tol}
        cfg = RunConfig(args.surface, args.radius, args.fmt, args.seed, {k: v for k, v in tols.items() if v is not None})
        for name, value in cfg.tolerances.items():
            setattr(verify, name, value)
        code = args.func(args, cfg, buf)
    except CliError as exc:
        sys.stdout.write(buf.getvalue())
        print(f"error: {exc}", file=sys.stderr)
        return exc.code
    except NonPrimitive as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_NONPRIMITIVE
    except IdentityClass as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IDENTITY
    except br.ConsistencyError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_FAIL
    finally:
        for name, value in saved.items():
            setattr(verify, name, value)
    sys.stdout.write(buf.getvalue())
    return code


if __name__ == "__main__":
    sys.exit(main())
