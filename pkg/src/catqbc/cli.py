"""Command-line front end.

Subcommands:

  wigner        Wigner function grid of a cat state (CSV or SVG contours)
  photon-dist   photon-number histogram, optionally after the cheating shift
  cheat         Alice's maximum control C_max and C'_max, one value or a sweep
  distinguish   Bob's information gain G_max, one value or a sweep
  tradeoff      N-copy C_max^(N) vs G_max^(N) table
  run           Monte-Carlo protocol run with a JSON-lines transcript

Relative output paths are resolved against ``$CATQBC_OUTPUT_DIR`` when set.
Errors exit nonzero with ``{"error": ..., "message": ...}`` on stderr.
"""

from __future__ import annotations

import argparse
import dataclasses
import json
import math
import os
import sys
from pathlib import Path
from typing import List, Optional, Sequence

import numpy as np

from . import cheat, distinguish, protocol, wigner
from .fock import CatSpec, Parity, cat_state, dim_for_cat, parity_expectation, photon_number_distribution

OUTPUT_DIR_ENV = "CATQBC_OUTPUT_DIR"
SVG_LEVELS = tuple(round(v, 2) for v in np.arange(-0.30, 0.3001, 0.05) if abs(v) > 1e-9)


class CliError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        _emit_error("UsageError", message)
        sys.exit(2)


def _emit_error(kind: str, message: str) -> None:
    sys.stderr.write(json.dumps({"error": kind, "message": message}) + "\n")


def _num(v: float) -> str:
    return f"{v:.17g}"


def parse_sweep(text: str) -> List[float]:
    """``min:max:step`` inclusive of max (to within half a step)."""
    try:
        lo, hi, step = (float(v) for v in text.split(":"))
    except ValueError:
        raise CliError(f"sweep must look like min:max:step, got {text!r}") from None
    if step <= 0 or hi < lo:
        raise CliError(f"invalid sweep {text!r}")
    count = int(math.floor((hi - lo) / step + 0.5)) + 1
    return [round(lo + i * step, 12) for i in range(count)]


def _parse_list(text: str, kind=float) -> list:
    try:
        return [kind(v) for v in text.split(",") if v.strip()]
    except ValueError:
        raise CliError(f"could not parse list {text!r}") from None


def _write(text: str, output: Optional[str], force: bool) -> None:
    if output is None or output == "-":
        sys.stdout.write(text)
        return
    path = Path(output)
    env_dir = os.environ.get(OUTPUT_DIR_ENV)
    if env_dir and not path.is_absolute():
        path = Path(env_dir) / path
    if path.exists() and not force:
        raise CliError(f"refusing to overwrite {path} without --force")
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", newline="\n") as fh:
        fh.write(text)


def _csv(header: Sequence[str], rows: Sequence[Sequence[str]]) -> str:
    return "\n".join([",".join(header)] + [",".join(r) for r in rows]) + "\n"


def _json(obj) -> str:
    return json.dumps(obj, indent=2) + "\n"


def _require_format(fmt: str, allowed: Sequence[str], cmd: str) -> None:
    if fmt not in allowed:
        raise CliError(f"{cmd} supports --format {'/'.join(allowed)}, got {fmt}")


# -- wigner -----------------------------------------------------------------


def render_contour_svg(grid: wigner.WignerGrid, levels: Sequence[float] = SVG_LEVELS, size: int = 480) -> str:
    """Polyline contours of ``grid`` at fixed ``levels`` with a tick-marked frame."""
    import contourpy

    pad = 40
    x0, x1 = grid.x_range
    p0, p1 = grid.p_range
    span = size - 2 * pad

    def sx(x):
        return pad + (x - x0) / (x1 - x0) * span

    def sy(p):
        return pad + (p1 - p) / (p1 - p0) * span

    gen = contourpy.contour_generator(grid.x, grid.p, grid.values, line_type=contourpy.LineType.Separate)
    out = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{size}" height="{size}" viewBox="0 0 {size} {size}">',
        f'<rect x="{pad}" y="{pad}" width="{span}" height="{span}" fill="none" stroke="black"/>',
    ]
    for t in np.arange(math.ceil(x0), math.floor(x1) + 1):
        X = sx(t)
        out.append(f'<line x1="{X:.3f}" y1="{pad + span}" x2="{X:.3f}" y2="{pad + span + 5}" stroke="black"/>')
        out.append(f'<text x="{X:.3f}" y="{pad + span + 18}" font-size="10" text-anchor="middle">{t:g}</text>')
    for t in np.arange(math.ceil(p0), math.floor(p1) + 1):
        Y = sy(t)
        out.append(f'<line x1="{pad - 5}" y1="{Y:.3f}" x2="{pad}" y2="{Y:.3f}" stroke="black"/>')
        out.append(f'<text x="{pad - 8}" y="{Y + 3:.3f}" font-size="10" text-anchor="end">{t:g}</text>')
    out.append(f'<text x="{size / 2:.1f}" y="{size - 6}" font-size="12" text-anchor="middle">x</text>')
    out.append(f'<text x="12" y="{size / 2:.1f}" font-size="12">p</text>')
    for level in levels:
        colour = "#1f4e9c" if level > 0 else "#b22222"
        for line in gen.lines(level):
            pts = " ".join(f"{sx(x):.3f},{sy(p):.3f}" for x, p in line)
            out.append(f'<polyline data-level="{level:g}" points="{pts}" fill="none" stroke="{colour}"/>')
    out.append("</svg>")
    return "\n".join(out) + "\n"


def cmd_wigner(args) -> str:
    _require_format(args.format, ("csv", "svg"), "wigner")
    if args.resolution < 2:
        raise CliError("--resolution must be >= 2")
    spec = CatSpec(args.alpha_prime, Parity.parse(args.parity))
    rng = (-args.range, args.range)
    if args.method == "closed-form":
        grid = wigner.cat_wigner_grid(spec, rng, rng, args.resolution, args.resolution)
    else:
        state = cat_state(spec, dim_for_cat(spec.alpha_prime))
        grid = wigner.wigner_grid(state, rng, rng, args.resolution, args.resolution)
    return render_contour_svg(grid) if args.format == "svg" else grid.to_csv()


# -- photon distribution ----------------------------------------------------


def cmd_photon_dist(args) -> str:
    _require_format(args.format, ("csv", "json"), "photon-dist")
    parity = Parity.parse(args.parity)
    if args.displace == "optimal":
        d = cheat.optimal_displacement(args.alpha_prime, parity)
    else:
        try:
            d = float(args.displace)
        except ValueError:
            raise CliError(f"--displace takes a number or 'optimal', got {args.displace!r}") from None
    dim = dim_for_cat(args.alpha_prime)
    state = cheat.displaced_cat_state(args.alpha_prime, parity, d, dim)
    probs = photon_number_distribution(state)
    mean_parity = parity_expectation(state)
    if args.format == "json":
        return _json(
            {
                "alpha_prime": args.alpha_prime,
                "parity_label": parity.label,
                "displace": d,
                "mean_parity": mean_parity,
                "probabilities": [float(v) for v in probs],
            }
        )
    head = (
        f"# alpha_prime: {_num(args.alpha_prime)}\n# parity_label: {parity.label}\n"
        f"# displace: {_num(d)}\n# mean_parity: {_num(mean_parity)}\n"
    )
    return head + _csv(("n", "probability"), [(str(n), _num(p)) for n, p in enumerate(probs)])


# -- cheat ------------------------------------------------------------------


def cmd_cheat(args) -> str:
    _require_format(args.format, ("csv", "json"), "cheat")
    if args.sweep:
        alphas = parse_sweep(args.sweep)
        parities = [Parity.ODD, Parity.EVEN] if args.parity == "both" else [Parity.parse(args.parity)]
    elif args.alpha_prime is not None:
        alphas = [args.alpha_prime]
        parities = [Parity.ODD if args.parity == "both" else Parity.parse(args.parity)]
    else:
        raise CliError("cheat needs --alpha-prime or --sweep")
    reports = [cheat.c_max(a, p) for a in alphas for p in parities]
    if args.format == "json":
        payload = [r.to_dict() for r in reports]
        return _json(payload[0] if len(payload) == 1 and not args.sweep else payload)
    return _csv(cheat.CSV_COLUMNS, [cheat.report_csv_row(r) for r in reports])


# -- distinguish ------------------------------------------------------------


def cmd_distinguish(args) -> str:
    _require_format(args.format, ("csv", "json"), "distinguish")
    if args.sweep:
        alphas = parse_sweep(args.sweep)
    elif args.alpha is not None:
        alphas = [args.alpha]
    else:
        raise CliError("distinguish needs --alpha or --sweep")
    reports = [distinguish.distinguish(a) for a in alphas]
    if args.format == "json":
        payload = [r.to_dict() for r in reports]
        return _json(payload[0] if len(payload) == 1 and not args.sweep else payload)
    return _csv(distinguish.CSV_COLUMNS, [r.csv_row() for r in reports])


# -- tradeoff ---------------------------------------------------------------


def cmd_tradeoff(args) -> str:
    _require_format(args.format, ("csv", "json"), "tradeoff")
    alphas = _parse_list(args.alpha_prime_list)
    ns = _parse_list(args.n_list, int)
    if any(n < 1 for n in ns):
        raise CliError("--n-list entries must be >= 1")
    points = protocol.tradeoff_curve(alphas, ns)
    if args.format == "json":
        return _json([dataclasses.asdict(p) for p in points])
    rows = [(_num(p.alpha_prime), str(p.n), _num(p.c_max_n), _num(p.g_max_n)) for p in points]
    return _csv(("alpha_prime", "n", "c_max_n", "g_max_n"), rows)


# -- run --------------------------------------------------------------------


def cmd_run(args) -> str:
    _require_format(args.format, ("json",), "run")
    config = protocol.RunConfig(
        alpha_prime=args.alpha_prime,
        n_copies=args.n,
        trials=args.trials,
        seed=args.seed,
        alice_strategy=protocol.parse_alice_strategy(args.alice),
        bob_strategy=args.bob,
        monitor_vacuum=args.monitor_vacuum,
        count_photons_at_unveil=args.count_photons,
        dim_override=args.dim,
        bit=args.bit,
    )
    outcome, transcript = protocol.run(config)
    if args.transcript:
        _write(transcript.to_jsonl(), args.transcript, args.force)
    return _json(outcome.to_dict())


# -- wiring -----------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="catqbc", description="Cat-state quantum bit commitment simulator.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def common(p, formats, default):
        p.add_argument("-o", "--output", help="output file (default: stdout)")
        p.add_argument("--format", choices=formats, default=default)
        p.add_argument("--force", action="store_true", help="overwrite an existing output file")

    p = sub.add_parser("wigner", help="Wigner function grid of a cat state")
    p.add_argument("--alpha-prime", type=float, required=True)
    p.add_argument("--parity", choices=("odd", "even"), default="odd")
    p.add_argument("--range", type=float, default=5.0, help="half-width of the square grid")
    p.add_argument("--resolution", type=int, default=201, help="points per axis")
    p.add_argument("--method", choices=("fock", "closed-form"), default="fock")
    common(p, ("csv", "svg"), "csv")
    p.set_defaults(func=cmd_wigner)

    p = sub.add_parser("photon-dist", help="photon-number distribution, optionally displaced")
    p.add_argument("--alpha-prime", type=float, required=True)
    p.add_argument("--parity", choices=("odd", "even"), default="odd")
    p.add_argument("--displace", default="0", help="origin shift d along p, or 'optimal'")
    common(p, ("csv", "json"), "csv")
    p.set_defaults(func=cmd_photon_dist)

    p = sub.add_parser("cheat", help="Alice's maximum control")
    p.add_argument("--alpha-prime", type=float)
    p.add_argument("--parity", choices=("odd", "even", "both"), default="odd")
    p.add_argument("--sweep", help="min:max:step over alpha'")
    common(p, ("csv", "json"), "json")
    p.set_defaults(func=cmd_cheat)

    p = sub.add_parser("distinguish", help="Bob's maximum information gain")
    p.add_argument("--alpha", type=float, help="coherent amplitude alpha = alpha'/sqrt2")
    p.add_argument("--sweep", help="min:max:step over alpha")
    common(p, ("csv", "json"), "json")
    p.set_defaults(func=cmd_distinguish)

    p = sub.add_parser("tradeoff", help="N-copy trade-off table")
    p.add_argument("--alpha-prime-list", required=True, help="comma-separated alpha' values")
    p.add_argument("--n-list", required=True, help="comma-separated copy counts N")
    common(p, ("csv", "json"), "csv")
    p.set_defaults(func=cmd_tradeoff)

    p = sub.add_parser("run", help="Monte-Carlo protocol run")
    p.add_argument("--alpha-prime", type=float, required=True)
    p.add_argument("--n", type=int, default=1, help="copies per commitment")
    p.add_argument("--trials", type=int, default=1000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--alice", default="honest", help="honest | displace-optimal | displace:D | non-gaussian | over-amplitude:A | gaussian:BR,BI,PHI,R,THETA")
    p.add_argument("--bob", choices=protocol.BOB_STRATEGIES, default="honest")
    p.add_argument("--bit", type=int, choices=(0, 1), help="fixed committed bit (default: random per trial)")
    p.add_argument("--monitor-vacuum", action="store_true")
    p.add_argument("--count-photons", action="store_true", help="photon-number check at unveil")
    p.add_argument("--dim", type=int, help="override the Fock cutoff")
    p.add_argument("--transcript", help="JSON-lines transcript path")
    common(p, ("json",), "json")
    p.set_defaults(func=cmd_run)
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        text = args.func(args)
        _write(text, args.output, args.force)
    except Exception as exc:  # every error class leaves as a JSON object
        _emit_error(type(exc).__name__, str(exc))
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
