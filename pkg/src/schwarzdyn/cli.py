"""Command-line surface.

Subcommands render the deltoid plane, dynamical and parameter planes of the
circle-and-cardioid family, and export orbits, rays, question-mark values,
and conjugacy tables.  Exit codes: 0 success, 2 usage error, 3 domain error
(e.g. a parameter on the excluded slit).
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction

from . import cnc, raster, rays, symbolic
from .core import INFINITY, is_infinity
from .errors import SchwarzDynError

BUILTIN = {
    "center": 0j,
    "width": 4.0,
    "px": 512,
    "max_iter": 256,
    "palette": "classic",
}


def _parse_complex(text: str) -> complex:
    if text.strip().lower() == "inf":
        return INFINITY
    re_s, _, im_s = text.partition(",")
    return complex(float(re_s), float(im_s) if im_s else 0.0)


def _parse_rational(text: str) -> Fraction:
    num, _, den = text.partition("/")
    return Fraction(int(num), int(den) if den else 1)


def _fmt_point(p) -> object:
    if is_infinity(p):
        return "inf"
    return [p.real, p.imag]


def _load_config(path: str) -> dict:
    cfg = {}
    with open(path, "r", encoding="utf-8") as fh:
        for line in fh:
            line = line.split("#", 1)[0].strip()
            if not line:
                continue
            key, _, value = line.partition("=")
            cfg[key.strip()] = value.strip()
    return cfg


def _setting(args, cfg: dict, name: str):
    val = getattr(args, name, None)
    if val is not None:
        return val
    if name == "center":
        if "center_re" in cfg or "center_im" in cfg:
            return complex(float(cfg.get("center_re", 0.0)),
                           float(cfg.get("center_im", 0.0)))
    elif name in cfg:
        cast = {"width": float, "px": int, "max_iter": int,
                "palette": str}[name]
        return cast(cfg[name])
    return BUILTIN[name]


def _grid(args, cfg) -> raster.GridSpec:
    px = _setting(args, cfg, "px")
    return raster.GridSpec(center=_setting(args, cfg, "center"),
                           width=_setting(args, cfg, "width"),
                           pixels_x=px, pixels_y=px)


def _emit(text: str, out: str | None) -> None:
    if out:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _render_command(args, cfg, kind, a=None) -> int:
    job = raster.RenderJob(kind=kind, grid=_grid(args, cfg),
                           max_iter=_setting(args, cfg, "max_iter"),
                           palette=_setting(args, cfg, "palette"), a=a)
    result = raster.render(job, workers=args.workers)
    fmt = args.format or "ppm"
    if fmt == "json":
        _emit(json.dumps(result.stats, indent=2) + "\n", args.out)
    elif fmt in ("ppm", "png"):
        out = args.out or f"{kind.value}.{fmt}"
        raster.write_image(result.pixels, out, fmt)
        print(json.dumps(result.stats))
    else:
        raise ValueError(f"format {fmt!r} not supported for renders")
    return 0


def _orbit_command(args, cfg) -> int:
    m = cnc.build_cnc(_parse_complex(args.a))
    z0 = _parse_complex(args.z)
    max_iter = _setting(args, cfg, "max_iter")
    verdict = cnc.classify_orbit(m, z0, max_iter)
    pts = []
    w = z0
    budget = verdict.rank if verdict.rank is not None else min(max_iter, 64)
    pts.append(_fmt_point(w))
    for _ in range(budget):
        w = cnc.apply_F(m, w)
        pts.append(_fmt_point(w))
    vd = {"tag": verdict.tag.value}
    if verdict.rank is not None:
        vd["rank"] = verdict.rank
    if verdict.word is not None:
        vd["word"] = list(verdict.word.symbols)
    if verdict.cycle is not None:
        vd["cycle"] = {
            "period": verdict.cycle.period,
            "representative": _fmt_point(verdict.cycle.representative),
            "multiplier_magnitude": verdict.cycle.multiplier_magnitude,
            "kind": verdict.cycle.kind.value,
        }
    doc = {"a": _fmt_point(m.a), "z0": _fmt_point(z0), "orbit": pts,
           "verdict": vd}
    _emit(json.dumps(doc, indent=2) + "\n", args.out)
    return 0


def _ray_command(args, cfg) -> int:
    m = cnc.build_cnc(_parse_complex(args.a))
    theta = _parse_rational(args.angle)
    ray = rays.trace_ray(m, theta, depth=args.depth)
    doc = {
        "angle": f"{ray.angle.numerator}/{ray.angle.denominator}",
        "points": [[p.real, p.imag] for p in ray.points],
        "landing": _fmt_point(ray.landing) if ray.landing is not None else None,
        "converged": ray.converged,
    }
    _emit(json.dumps(doc) + "\n", args.out)
    return 0


def _qmark_command(args, cfg) -> int:
    if args.table_max_q:
        lines = ["input,output,error_bound"]
        for f in symbolic.farey_fractions(args.table_max_q):
            v = symbolic.question_mark(f.numerator, f.denominator)
            lines.append(f"{f},{v},0")
        _emit("\n".join(lines) + "\n", args.out)
        return 0
    q = _parse_rational(args.rational)
    v = symbolic.question_mark(q.numerator, q.denominator)
    _emit(f"{v}\n", args.out)
    return 0


def _conj_e_command(args, cfg) -> int:
    depth = args.depth
    lines = ["input,output,error_bound"]
    if args.angle:
        theta = _parse_rational(args.angle)
        pt, width = symbolic.conjugacy_E_inverse(theta, depth)
        lines.append(f"{theta},{pt.real}{pt.imag:+}j,{width}")
    elif args.point:
        z = _parse_complex(args.point)
        mid, width = symbolic.conjugacy_E(z, depth)
        lines.append(f"{z.real}{z.imag:+}j,{mid},{width}")
    else:
        print("conj-e: one of --angle or --point is required", file=sys.stderr)
        return 2
    _emit("\n".join(lines) + "\n", args.out)
    return 0


def _circum_command(args, cfg) -> int:
    m = cnc.build_cnc(_parse_complex(args.a))
    if args.format == "json":
        _emit(json.dumps({"a": _fmt_point(m.a), "r": m.r,
                          "alpha": _fmt_point(m.alpha),
                          "tangency_angle": m.tangency_angle}) + "\n", args.out)
    else:
        _emit(f"r={m.r!r}\nalpha={m.alpha.real!r},{m.alpha.imag!r}\n", args.out)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="schwarzdyn",
        description="Schwarz reflection dynamics: deltoid and circle-and-cardioid families")
    sub = parser.add_subparsers(dest="command", required=True)

    def shared(p, grid=True):
        if grid:
            p.add_argument("--center", type=_parse_complex, default=None,
                           metavar="RE,IM")
            p.add_argument("--width", type=float, default=None)
            p.add_argument("--px", type=int, default=None)
        p.add_argument("--max-iter", dest="max_iter", type=int, default=None)
        p.add_argument("--out", default=None, metavar="PATH")
        p.add_argument("--format", default=None,
                       choices=["ppm", "png", "json", "csv"])
        p.add_argument("--config", default=None, metavar="PATH")
        p.add_argument("--palette", default=None)
        p.add_argument("--workers", type=int, default=1)

    p = sub.add_parser("deltoid", help="render the deltoid dynamical plane")
    shared(p)
    p = sub.add_parser("dyn", help="render a circle-and-cardioid dynamical plane")
    p.add_argument("--a", required=True, metavar="RE,IM")
    shared(p)
    p = sub.add_parser("param", help="render the parameter plane")
    shared(p)
    p = sub.add_parser("orbit", help="export one orbit as JSON")
    p.add_argument("--a", required=True, metavar="RE,IM")
    p.add_argument("--z", required=True, metavar="RE,IM|inf")
    shared(p, grid=False)
    p = sub.add_parser("ray", help="trace a dynamical ray")
    p.add_argument("--a", required=True, metavar="RE,IM")
    p.add_argument("--angle", required=True, metavar="P/Q")
    p.add_argument("--depth", type=int, default=rays.DEFAULT_DEPTH)
    shared(p, grid=False)
    p = sub.add_parser("qmark", help="evaluate the question-mark function")
    p.add_argument("--rational", metavar="P/Q")
    p.add_argument("--table-max-q", type=int, default=None)
    shared(p, grid=False)
    p = sub.add_parser("conj-e", help="evaluate the circle conjugacy")
    p.add_argument("--angle", metavar="P/Q")
    p.add_argument("--point", metavar="RE,IM")
    p.add_argument("--depth", type=int, default=24)
    shared(p, grid=False)
    p = sub.add_parser("circum", help="solve the circumcircle for a center")
    p.add_argument("--a", required=True, metavar="RE,IM")
    shared(p, grid=False)
    return parser


COMMANDS = {
    "deltoid": lambda a, c: _render_command(a, c, raster.JobKind.DELTOID_PLANE),
    "dyn": lambda a, c: _render_command(a, c, raster.JobKind.CNC_DYNAMICAL,
                                        _parse_complex(a.a)),
    "param": lambda a, c: _render_command(a, c, raster.JobKind.CNC_PARAMETER),
    "orbit": _orbit_command,
    "ray": _ray_command,
    "qmark": _qmark_command,
    "conj-e": _conj_e_command,
    "circum": _circum_command,
}


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if exc.code is not None else 2
    cfg = _load_config(args.config) if getattr(args, "config", None) else {}
    try:
        return COMMANDS[args.command](args, cfg)
    except SchwarzDynError as exc:
        print(f"{exc.code}: {exc}", file=sys.stderr)
        return 3
    except (ValueError, OSError) as exc:
        print(f"USAGE_ERROR: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
