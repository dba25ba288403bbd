"""Command-line front end.

Subcommands:

    curvature    forms and curvatures over a grid, as CSV
    verify       check a catalog family's constancy claim
    generate     export a surface mesh (OBJ or CSV), optionally a figure
    probe-ratio  search for a constant lambda with H + lambda*K = 0
    selftest     run the acceptance suite

Exit codes: 0 success, 1 evaluation/verification failure (non-admissible
point, regularity loss, failed claim), 2 configuration or parse errors.
A config file of key=value lines can pre-set any long option via
``--config``; command-line flags win.  ISOCURV_THREADS caps worker
threads used by grid sweeps.
"""

from __future__ import annotations

import argparse
import math
import sys
from dataclasses import dataclass

import numpy as np

from . import expr
from .errors import (
    BlowUp,
    DomainError,
    InvalidConstants,
    IsocurvError,
    NotAdmissible,
    RadicandNonpositive,
    RegularityError,
)
from .factorable import (
    BUILTIN_EXAMPLES,
    FAMILY_IDS,
    PHI2,
    PHI3,
    FactorableSpec,
    FamilySpec,
    curvature_grid,
    family_claim,
    make_patch,
    ratio_probe,
    verify_family,
)
from .geometry import GridSpec, Rectangle, SurfacePatch, curvatures, fundamental_forms
from .meshing import (
    fmt17,
    sample_grid,
    write_curvature_csv,
    write_obj,
    write_points_csv,
)
from .runtime import grid_map

EXIT_OK = 0
EXIT_FAILURE = 1
EXIT_CONFIG = 2


@dataclass(frozen=True)
class RunConfig:
    """Validated run parameters shared by the subcommands."""

    grid: GridSpec
    tol: float
    output: str | None
    fmt: str
    figure: str | None

    @staticmethod
    def from_args(args) -> "RunConfig":
        nu, nv = _parse_grid(getattr(args, "grid", None) or "64x64")
        if nu < 2 or nv < 2:
            raise _ConfigError("grid resolution must be at least 2 per axis")
        tol = float(getattr(args, "tol", None) or 1e-8)
        if not tol > 0:
            raise _ConfigError("tolerance must be positive")
        margin = getattr(args, "margin", None)
        margin = 1e-3 if margin is None else float(margin)
        return RunConfig(
            grid=GridSpec(nu, nv, margin=margin),
            tol=tol,
            output=getattr(args, "output", None),
            fmt=getattr(args, "format", None) or "csv",
            figure=getattr(args, "figure", None),
        )


class _ConfigError(IsocurvError):
    pass


def _parse_grid(text: str) -> tuple[int, int]:
    try:
        a, b = text.lower().split("x")
        return int(a), int(b)
    except ValueError as exc:
        raise _ConfigError(f"bad grid {text!r}; expected like 64x64") from exc


def _parse_domain(text: str) -> Rectangle:
    try:
        parts = [float(p) for p in text.split(",")]
        if len(parts) != 4:
            raise ValueError
        return Rectangle(*parts)
    except ValueError as exc:
        raise _ConfigError(
            f"bad domain {text!r}; expected u_min,u_max,v_min,v_max"
        ) from exc


def _parse_constants(items: list[str] | None) -> dict[str, float]:
    consts: dict[str, float] = {}
    for item in items or []:
        for pair in item.split(","):
            pair = pair.strip()
            if not pair:
                continue
            if "=" not in pair:
                raise _ConfigError(f"bad constant {pair!r}; expected name=value")
            name, _, value = pair.partition("=")
            try:
                consts[name.strip()] = float(value)
            except ValueError as exc:
                raise _ConfigError(f"bad constant value in {pair!r}") from exc
    return consts


def _parse_pair_spec(text: str, type_tag: str) -> FactorableSpec:
    """Parse 'f=<expr>; g=<expr>' into a factorable spec (domain filled in
    later)."""
    f_var = "y" if type_tag == PHI3 else "x"
    parts: dict[str, tuple[str, int]] = {}
    offset = 0
    for chunk in text.split(";"):
        stripped = chunk.strip()
        if not stripped:
            offset += len(chunk) + 1
            continue
        name, eq, body = stripped.partition("=")
        name = name.strip()
        if not eq or name not in ("f", "g"):
            raise expr.ParseError(
                expr.ParseDiagnostic(
                    offset, f"expected 'f=...' or 'g=...' in {stripped!r}", expr.UNEXPECTED_TOKEN
                )
            )
        body_offset = offset + chunk.index("=") + 1
        parts[name] = (body, body_offset)
        offset += len(chunk) + 1

    def parse_part(name: str, var: str) -> expr.ExprAst:
        body, base = parts[name]
        try:
            return expr.parse(body, {var})
        except expr.ParseError as e:
            d = e.diagnostic
            raise expr.ParseError(
                expr.ParseDiagnostic(base + d.offset, d.message, d.kind)
            ) from None

    # parse what is present first so syntax problems surface with offsets
    f_ast = parse_part("f", f_var) if "f" in parts else None
    g_ast = parse_part("g", "z") if "g" in parts else None
    if f_ast is None or g_ast is None:
        raise expr.ParseError(
            expr.ParseDiagnostic(0, "surface spec needs both f= and g= entries", expr.EMPTY_INPUT)
        )
    placeholder = Rectangle(0.0, 1.0, 0.0, 1.0)
    return FactorableSpec(
        type_tag,
        f_ast,
        g_ast,
        placeholder,
        f_var=f_var,
        f_text=parts["f"][0].strip(),
        g_text=parts["g"][0].strip(),
    )


def _surface_from_args(args, need_domain: bool = True) -> tuple[SurfacePatch, FactorableSpec | None]:
    """Build the requested surface: a factorable pair or three raw
    coordinate expressions over (u, v)."""
    given = [x for x in (args.phi3, args.phi2, getattr(args, "surface", None)) if x]
    if len(given) != 1:
        raise _ConfigError("give exactly one of --phi3, --phi2" + (", --surface" if hasattr(args, "surface") else ""))
    domain = _parse_domain(args.domain) if args.domain else None
    if getattr(args, "surface", None):
        if domain is None:
            raise _ConfigError("--surface needs an explicit --domain")
        coords: dict[str, expr.ExprAst] = {}
        for chunk in args.surface.split(";"):
            stripped = chunk.strip()
            if not stripped:
                continue
            name, eq, body = stripped.partition("=")
            name = name.strip()
            if not eq or name not in ("x", "y", "z"):
                raise _ConfigError(f"expected x=, y= and z= entries, got {stripped!r}")
            coords[name] = expr.parse(body, {"u", "v"})
        if set(coords) != {"x", "y", "z"}:
            raise _ConfigError("surface spec needs x=, y= and z= entries")
        patch = SurfacePatch(coords["x"], coords["y"], coords["z"], ("u", "v"), domain)
        return patch, None
    text, tag = (args.phi3, PHI3) if args.phi3 else (args.phi2, PHI2)
    spec = _parse_pair_spec(text, tag)
    if domain is None:
        if need_domain:
            raise _ConfigError("a factorable spec needs an explicit --domain")
    else:
        spec = FactorableSpec(
            spec.type_tag,
            spec.f,
            spec.g,
            domain,
            f_var=spec.f_var,
            g_var=spec.g_var,
            f_text=spec.f_text,
            g_text=spec.g_text,
        )
    return make_patch(spec), spec


def _open_output(path: str | None):
    if path is None or path == "-":
        return sys.stdout, False
    return open(path, "w", encoding="utf-8", newline="\n"), True


# -- subcommands ----------------------------------------------------------------


def cmd_curvature(args) -> int:
    config = RunConfig.from_args(args)
    patch, _ = _surface_from_args(args)
    us, vs = patch.domain.axes(config.grid)

    def eval_row(u: float):
        out = []
        for v in vs:
            jx, jy, jz = patch.eval_jets(u, float(v))
            forms = fundamental_forms(patch, u, float(v))
            c = curvatures(forms)
            out.append(
                (
                    u, v, jx.val, jy.val, jz.val,
                    forms.E, forms.F, forms.G,
                    forms.l, forms.m, forms.n,
                    c.K, c.H,
                )
            )
        return out

    row_chunks = grid_map(eval_row, (float(u) for u in us))
    rows = [row for chunk in row_chunks for row in chunk]
    ks = np.array([[row[11] for row in chunk] for chunk in row_chunks])
    stream, close = _open_output(config.output)
    try:
        write_curvature_csv(stream, rows)
    finally:
        if close:
            stream.close()
    if config.figure:
        from .figures import render_surface

        _, _, X, Y, Z = sample_grid(patch, config.grid)
        render_surface(X, Y, Z, config.figure, color_values=ks, color_label="K")
    return EXIT_OK


def _machine_line(report, engine: str) -> str:
    kind, target = report.claim
    return (
        f"check engine={engine} family={report.family_id or '-'} "
        f"claim={kind}={fmt17(target)} grid={report.grid[0]}x{report.grid[1]} "
        f"max_residual={fmt17(report.max_residual)} tol={fmt17(report.tolerance)} "
        f"pass={'true' if report.passed else 'false'}"
    )


def cmd_verify(args) -> int:
    config = RunConfig.from_args(args)
    if args.family not in FAMILY_IDS:
        raise _ConfigError(f"unknown family {args.family!r}; choose from {', '.join(FAMILY_IDS)}")
    fam = FamilySpec(
        args.family,
        _parse_constants(args.const),
        domain=_parse_domain(args.domain) if args.domain else None,
        ode_steps=args.ode_steps,
    )
    report = verify_family(fam, config.grid, tol=config.tol)
    kind, target = report.claim
    lines = [
        f"family: {report.family_id}",
        f"constants: {', '.join(f'{k}={v:g}' for k, v in sorted(report.constants.items())) or '(defaults)'}",
        f"claim: {kind} = {target:g}",
        f"grid: {report.grid[0]}x{report.grid[1]} on "
        f"[{report.domain.u_min:g},{report.domain.u_max:g}]x[{report.domain.v_min:g},{report.domain.v_max:g}]",
        f"max residual: {report.max_residual:.6e} (tolerance {report.tolerance:g})",
        f"result: {'PASS' if report.passed else 'FAIL'}",
        _machine_line(report, "both"),
    ]
    out = "\n".join(lines) + "\n"
    stream, close = _open_output(config.output)
    try:
        stream.write(out)
    finally:
        if close:
            stream.close()
    return EXIT_OK if report.passed else EXIT_FAILURE


def cmd_generate(args) -> int:
    config = RunConfig.from_args(args)
    if args.example is not None:
        if args.example not in BUILTIN_EXAMPLES:
            raise _ConfigError(
                f"unknown example {args.example}; available: {sorted(BUILTIN_EXAMPLES)}"
            )
        example = BUILTIN_EXAMPLES[args.example]
        spec = example.spec()
        if args.domain:
            spec = FactorableSpec(
                spec.type_tag, spec.f, spec.g, _parse_domain(args.domain),
                f_var=spec.f_var, g_var=spec.g_var,
                f_text=spec.f_text, g_text=spec.g_text, family_id=spec.family_id,
            )
        patch = make_patch(spec)
        title = example.description
    else:
        patch, _ = _surface_from_args(args)
        title = None
    mesh_grid = GridSpec(config.grid.nu, config.grid.nv, margin=0.0)
    us, vs, X, Y, Z = sample_grid(patch, mesh_grid)
    stream, close = _open_output(config.output)
    try:
        if config.fmt == "obj":
            write_obj(stream, X, Y, Z)
        else:
            write_points_csv(stream, us, vs, X, Y, Z)
    finally:
        if close:
            stream.close()
    if config.figure:
        from .figures import render_surface

        render_surface(X, Y, Z, config.figure, title=title)
    return EXIT_OK


def cmd_probe_ratio(args) -> int:
    config = RunConfig.from_args(args)
    _, spec = _surface_from_args(args)
    if spec is None:
        raise _ConfigError("probe-ratio works on factorable specs (--phi3/--phi2)")
    report = ratio_probe(spec, config.grid)
    stream, close = _open_output(config.output)
    try:
        if report.degenerate is not None:
            stream.write(f"degenerate: {report.degenerate}\n")
        else:
            stream.write(f"best_lambda: {fmt17(report.best_lambda)}\n")
            stream.write(f"min_scaled_residual: {fmt17(report.min_scaled_residual)}\n")
            stream.write(f"ratio_stddev: {fmt17(report.ratio_stddev)}\n")
    finally:
        if close:
            stream.close()
    return EXIT_OK


def cmd_selftest(args) -> int:
    from .acceptance import run_all

    results = run_all(echo=print)
    return EXIT_OK if all(r.passed for r in results) else EXIT_FAILURE


# -- argument plumbing ------------------------------------------------------------


def _add_common(p: argparse.ArgumentParser, surface: bool = False):
    p.add_argument("--config", help="key=value file supplying defaults for long options")
    p.add_argument("--grid", help="grid resolution, e.g. 64x64 (default)")
    p.add_argument("--domain", help="parameter rectangle u_min,u_max,v_min,v_max")
    p.add_argument("--margin", type=float, help="fractional grid inset (default 1e-3)")
    p.add_argument("--tol", type=float, help="tolerance where applicable (default 1e-8)")
    p.add_argument("--output", "-o", help="output path ('-' or omitted for stdout)")
    if surface:
        p.add_argument("--phi3", help="factorable spec 'f=<expr in y>; g=<expr in z>' for x = f*g")
        p.add_argument("--phi2", help="factorable spec 'f=<expr in x>; g=<expr in z>' for y = f*g")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="isocurv",
        description="Curvature toolkit for admissible surfaces in simply isotropic 3-space.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("curvature", help="fundamental forms and curvatures over a grid (CSV)")
    _add_common(p, surface=True)
    p.add_argument("--surface", help="raw patch 'x=<expr>; y=<expr>; z=<expr>' over (u, v)")
    p.add_argument("--figure", help="also render the surface (colored by K) to this image file")
    p.set_defaults(func=cmd_curvature)

    p = sub.add_parser("verify", help="verify a catalog family's constancy claim")
    _add_common(p)
    p.add_argument("--family", required=True, help=f"one of {', '.join(FAMILY_IDS)}")
    p.add_argument("--const", action="append", help="family constants, e.g. c1=1,c2=0.3")
    p.add_argument("--ode-steps", type=int, default=2000, help="trajectory steps for T2_II2")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("generate", help="export a surface mesh (OBJ or CSV point cloud)")
    _add_common(p, surface=True)
    p.add_argument("--example", type=int, help="bundled example number (1-4)")
    p.add_argument("--format", choices=("obj", "csv"), default=None, help="mesh format (default obj)")
    p.add_argument("--figure", help="also render the surface to this image file")
    p.set_defaults(func=cmd_generate, default_format="obj")

    p = sub.add_parser("probe-ratio", help="search for a constant lambda with H + lambda*K = 0")
    _add_common(p, surface=True)
    p.set_defaults(func=cmd_probe_ratio)

    p = sub.add_parser("selftest", help="run the acceptance suite")
    p.set_defaults(func=cmd_selftest)

    return parser


def _apply_config_file(args) -> None:
    path = getattr(args, "config", None)
    if not path:
        return
    try:
        with open(path, "r", encoding="utf-8") as fh:
            for line in fh:
                line = line.strip()
                if not line or line.startswith("#"):
                    continue
                if "=" not in line:
                    raise _ConfigError(f"bad config line {line!r}; expected key=value")
                key, _, value = line.partition("=")
                key = key.strip().replace("-", "_")
                value = value.strip()
                if not hasattr(args, key):
                    raise _ConfigError(f"unknown config key {key!r}")
                if getattr(args, key) is None:
                    if key in ("tol", "margin"):
                        setattr(args, key, float(value))
                    elif key in ("example", "ode_steps"):
                        setattr(args, key, int(value))
                    elif key == "const":
                        setattr(args, key, [value])
                    else:
                        setattr(args, key, value)
    except OSError as exc:
        raise _ConfigError(f"cannot read config file {path!r}: {exc}") from exc


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        _apply_config_file(args)
        if getattr(args, "format", None) is None and hasattr(args, "default_format"):
            args.format = args.default_format
        return args.func(args)
    except expr.ParseError as exc:
        d = exc.diagnostic
        print(f"error: {d.kind} at byte offset {d.offset}: {d.message}", file=sys.stderr)
        return EXIT_CONFIG
    except (_ConfigError, InvalidConstants, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (NotAdmissible, RegularityError, DomainError, RadicandNonpositive, BlowUp) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_FAILURE


if __name__ == "__main__":
    raise SystemExit(main())
