"""Command-line entry point: ``arcgraph <command> [options]``.

Exit codes are 0 on success, 1 when a suite finds a violation, 2 for bad
input and 3 when the input is well formed but outside a computation's
domain.  Reports are JSON and embed the resolved configuration, including
the seed.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .boundary_lab import default_metric, run_convergence, run_divergence
from .diagram import crossing_sequence, crossings_csv
from .errors import DomainError, InputError, LemmaViolated, MalformedInput
from .graph import AC, ARCS, build_subgraph
from .suites import SUITES, SuiteConfig, orbit_arcs, run_suite
from .surface import OrientedArc, Surface, builtin_surface, load_coordinates, load_surface
from .torus import is_standard_torus, slope_coords
from .triangulation import puncture_classes
from .unicorn import unicorn_path

OK, VIOLATION, INPUT_ERROR, DOMAIN_ERROR = 0, 1, 2, 3


def dump(obj) -> str:
    """The JSON text used for every report."""
    return json.dumps(obj, indent=2, sort_keys=True) + "\n"


def _seed(text: str) -> int:
    v = int(text)
    if not 0 <= v < 2**64:
        raise argparse.ArgumentTypeError("seed must be an unsigned 64-bit integer")
    return v


def _surface(src: str | None) -> Surface:
    if src is None:
        return builtin_surface("s11")
    if src in ("s11", "s04") and not Path(src).exists():
        return builtin_surface(src)
    return load_surface(src)


def parse_class(text: str, S: Surface) -> tuple[int, ...]:
    """Read ``p/q`` (standard torus only), ``w0,w1,...`` or a coordinates file."""
    text = text.strip()
    if "/" in text:
        if not is_standard_torus(S.T):
            raise MalformedInput("slopes p/q are only understood on the standard torus")
        try:
            p, q = (int(v) for v in text.split("/"))
        except ValueError as exc:
            raise MalformedInput(f"bad slope {text!r}") from exc
        return slope_coords(p, q)
    if "," in text or text.lstrip("-").isdigit():
        return load_coordinates([v for v in text.split(",") if v.strip()], S.T)
    return load_coordinates(text, S.T)


def _emit(args, text: str) -> None:
    if args.out:
        Path(args.out).write_text(text)
    else:
        sys.stdout.write(text)


def _base_config(args) -> dict:
    return {"command": args.command, "seed": args.seed, "surface": args.surface or "s11", "bound": args.bound,
            "mode": args.mode, "out": args.out}


# -- commands ----------------------------------------------------------------

def cmd_validate(args) -> int:
    S = load_surface(args.file)
    T = S.T
    classes = puncture_classes(T)
    report = {
        "config": {**_base_config(args), "surface": args.file, "file": args.file},
        "E": T.E,
        "F": T.F,
        "P": len(classes),
        "chi": T.euler_characteristic,
        "genus": T.genus,
        "punctures": [[list(c) for c in cls] for cls in classes],
        "twists": sorted(S.twists),
    }
    _emit(args, dump(report))
    return OK


def cmd_unicorn(args) -> int:
    S = _surface(args.surface)
    a = OrientedArc(parse_class(args.a, S), args.a_end)
    b = OrientedArc(parse_class(args.b, S), args.b_end)
    P = unicorn_path(S.T, a, b)
    config = {**_base_config(args), "a": list(a.coords), "aEnd": a.end, "b": list(b.coords), "bEnd": b.end}
    _emit(args, dump({"config": config, "path": P.to_json()}))
    return OK


def cmd_suite(args) -> int:
    cfg = SuiteConfig(
        seed=args.seed,
        pairs=args.pairs,
        height=args.height,
        horizon=args.horizon,
        bound=args.bound,
        mode=args.mode,
        word=args.word,
        surface=_surface(args.surface),
        workers=args.workers,
        self_test=args.self_test,
    )
    rep = run_suite(args.name, cfg)
    out = rep.to_json()
    out["config"] = {**_base_config(args), **out["config"]}
    _emit(args, dump(out))
    status = "pass" if rep.passed else f"FAIL ({len(rep.violations)} violations)"
    print(f"{args.name}: {status}", file=sys.stderr)
    return OK if rep.passed else VIOLATION


def cmd_svg(args) -> int:
    S = _surface(args.surface)
    a, b = orbit_arcs(S)
    f = S.word(args.word or "RL")
    rep = run_convergence(S.T, a, b, f, args.horizon or 12, default_metric(S.T, args.mode, args.bound))
    _emit(args, rep.to_svg())
    return OK


def cmd_crossings(args) -> int:
    S = _surface(args.surface)
    a = OrientedArc(parse_class(args.a, S), args.a_end)
    _emit(args, crossings_csv(crossing_sequence(S.T, a, parse_class(args.b, S))))
    return OK


def _class_field(raw, S: Surface) -> tuple[int, ...]:
    if isinstance(raw, str):
        return parse_class(raw, S)
    return load_coordinates(raw, S.T)


def cmd_experiment(args) -> int:
    """Run a convergence (or, with ``g``, divergence) experiment from a JSON config."""
    try:
        raw = json.loads(Path(args.config).read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise MalformedInput(f"cannot read {args.config}: {exc}") from exc
    if not isinstance(raw, dict) or not {"a", "b", "f", "N"} <= set(raw):
        raise MalformedInput("experiment config needs a, b, f and N")
    S = _surface(raw.get("surface", args.surface))
    a = OrientedArc(_class_field(raw["a"], S), int(raw.get("aEnd", 0)))
    b = OrientedArc(_class_field(raw["b"], S), int(raw.get("bEnd", 0)))
    mode = raw.get("mode", args.mode)
    metric = default_metric(S.T, mode, int(raw.get("bound", args.bound)))
    f = S.word(raw["f"])
    if raw.get("g") is not None:
        rep = run_divergence(S.T, a, f, S.word(raw["g"]), b, int(raw["N"]), metric)
    else:
        rep = run_convergence(S.T, a, b, f, int(raw["N"]), metric)
        if args.csv:
            Path(args.csv).write_text(rep.to_csv())
    out = rep.to_json()
    out["config"] = {**_base_config(args), "seed": int(raw.get("seed", args.seed)), "mode": mode,
                     "file": args.config, "experiment": raw, **out["config"]}
    _emit(args, dump(out))
    return OK if rep.passed else VIOLATION


def cmd_graph(args) -> int:
    S = _surface(args.surface)
    sub = build_subgraph(S.T, args.bound, (), args.mode)
    _emit(args, sub.to_csv())
    return OK


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--surface", help="surface JSON file or a bundled name (s11, s04); default s11")
    common.add_argument("--bound", type=int, default=12, help="coordinate bound B for subgraphs")
    common.add_argument("--seed", type=_seed, default=0)
    common.add_argument("--mode", choices=(ARCS, AC), default=ARCS)
    common.add_argument("--out", help="write the report here instead of stdout")

    parser = argparse.ArgumentParser(prog="arcgraph", description="Unicorn paths and arc graph experiments.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("validate", parents=[common], help="check a triangulation file")
    p.add_argument("file")
    p.set_defaults(run=cmd_validate)

    p = sub.add_parser("unicorn", parents=[common], help="print the unicorn path P(a, b)")
    p.add_argument("a", help="p/q, comma-separated weights, or a coordinates file")
    p.add_argument("b")
    p.add_argument("--a-end", type=int, choices=(0, 1), default=0)
    p.add_argument("--b-end", type=int, choices=(0, 1), default=0)
    p.set_defaults(run=cmd_unicorn)

    p = sub.add_parser("suite", parents=[common], help="run a property suite")
    p.add_argument("name", choices=SUITES)
    p.add_argument("--pairs", type=int)
    p.add_argument("--height", type=int)
    p.add_argument("--horizon", type=int)
    p.add_argument("--word")
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--self-test", action="store_true", help="inject a known fault; the suite must fail")
    p.set_defaults(run=cmd_suite)

    p = sub.add_parser("svg", parents=[common], help="chart a convergence experiment as SVG")
    p.add_argument("--word")
    p.add_argument("--horizon", type=int)
    p.set_defaults(run=cmd_svg)

    p = sub.add_parser("crossings", parents=[common], help="crossings of arc a with b as CSV, in order along a")
    p.add_argument("a")
    p.add_argument("b")
    p.add_argument("--a-end", type=int, choices=(0, 1), default=0)
    p.set_defaults(run=cmd_crossings)

    p = sub.add_parser("experiment", parents=[common], help="run a boundary experiment from a JSON config")
    p.add_argument("config")
    p.add_argument("--csv", help="also write the convergence time series here")
    p.set_defaults(run=cmd_experiment)

    p = sub.add_parser("graph", parents=[common], help="edge list of the bounded subgraph as CSV")
    p.set_defaults(run=cmd_graph)
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.run(args)
    except InputError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return INPUT_ERROR
    except DomainError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return DOMAIN_ERROR
    except LemmaViolated as exc:
        print(f"violation: {exc}", file=sys.stderr)
        return VIOLATION


if __name__ == "__main__":
    sys.exit(main())
