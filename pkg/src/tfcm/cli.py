"""Command-line front end: duality verification, parameter sweeps, fidelities.

Exit codes: 0 success, 1 check failure, 2 usage or specification error.
"""

from __future__ import annotations

import argparse
import json
import sys
import time

from .exact import cluster_state, expectation, gap, ground_state
from .fermion import solve_tfim, zz_correlator
from .lattice import BLUE, RED, Lattice, line, square
from .mbqc import pattern_csign, pattern_identity, pattern_zrot, simulate
from .model import (
    CSignLayout,
    csign_characterizing_stabilizers,
    dual_tfim_expected,
    duality_1d,
    duality_2d,
    duality_2d_boundary_fixes,
    order_string_1d,
    plaquette_terms,
    self_duality_map,
    stabilizer,
    sublattice_ham,
    tfcm,
)
from .pauli import check_canonical, conjugate, conjugate_sum

MAX_ED_QUBITS = 20


def _fmt(x: float) -> str:
    return f"{x:.12g}"


def _parse_grid(text: str) -> list[float]:
    text = text.strip()
    if ":" in text:
        a, b, step = (float(t) for t in text.split(":"))
        if step <= 0:
            raise ValueError("grid step must be positive")
        out = []
        x = a
        while x <= b + 1e-12:
            out.append(round(x, 12))
            x += step
        return out
    return [float(t) for t in text.split(",") if t.strip()]


def _lattice_from_args(args) -> Lattice:
    if args.line is not None and args.square is not None:
        raise ValueError("give either --line or --square, not both")
    if args.line is not None:
        return line(args.line)
    if args.square is not None:
        return square(args.square[0], args.square[1])
    raise ValueError("a lattice is required: --line N or --square R C")


def _add_common(p):
    p.add_argument("--line", type=int, metavar="N", help="open chain of N sites (ED cap: 20 qubits)")
    p.add_argument("--square", type=int, nargs=2, metavar=("R", "C"), help="open R x C grid")
    p.add_argument("--b-grid", default="0", metavar="GRID",
                   help="field values: 'a:b:step' or comma list")
    p.add_argument("--tol", type=float, default=1e-10, help="eigensolver residual tolerance")
    p.add_argument("--max-iter", type=int, default=300, help="eigensolver iteration cap")
    p.add_argument("--seed", type=int, default=7, help="eigensolver start-vector seed")
    p.add_argument("--out", metavar="FILE", help="write output here instead of stdout")
    p.add_argument("--config", metavar="FILE", help="key-value defaults file; flags override")


def _load_config(path: str) -> dict:
    values: dict = {}
    with open(path) as fh:
        for raw in fh:
            text = raw.split("#", 1)[0].strip()
            if not text:
                continue
            if "=" in text:
                key, val = (t.strip() for t in text.split("=", 1))
            else:
                parts = text.split(None, 1)
                if len(parts) != 2:
                    raise ValueError(f"bad config line: {raw.rstrip()}")
                key, val = parts
            key = key.replace("-", "_")
            if key == "observable":
                values.setdefault("observable", []).append(val)
            elif key == "square":
                values[key] = [int(t) for t in val.split()]
            elif key in ("line", "seed", "max_iter"):
                values[key] = int(val)
            elif key in ("tol", "theta"):
                values[key] = float(val)
            else:
                values[key] = val
    return values


def _known_dests(parser) -> set:
    dests = {a.dest for a in parser._actions}
    for a in parser._actions:
        if isinstance(a, argparse._SubParsersAction):
            for sub in a.choices.values():
                dests |= {x.dest for x in sub._actions}
    return dests


def _emit(text: str, out_path):
    if out_path:
        with open(out_path, "w") as fh:
            fh.write(text)
            if not text.endswith("\n"):
                fh.write("\n")
    else:
        print(text)


# ---------------------------------------------------------------------------
# verify-duality
# ---------------------------------------------------------------------------

def _check(name: str, ok: bool, lines: list) -> bool:
    lines.append(f"{'PASS' if ok else 'FAIL'}  {name}")
    return ok


def cmd_verify_duality(args) -> int:
    lat = _lattice_from_args(args)
    lines: list[str] = []
    all_ok = True
    dyadic = (0.25, 0.5, 2.0, 4.0)

    if lat.kind == "line":
        N = lat.dims[0]
        dual = duality_1d(lat)
        all_ok &= _check(f"line({N}): duality map canonical", check_canonical(dual).passed, lines)
        for color in (RED, BLUE):
            ok = all(
                conjugate_sum(dual, sublattice_ham(lat, B, color))
                == dual_tfim_expected(N, B, color)
                for B in (0.0, 0.5, 0.75, 2.0)
            )
            all_ok &= _check(
                f"line({N}): {color} half maps to the open Ising chain term-for-term", ok, lines
            )
    else:
        dual = duality_2d(lat)
        all_ok &= _check(f"{lat.describe()}: duality map canonical", check_canonical(dual).passed, lines)
        imgs = {mu: conjugate(dual, stabilizer(lat, mu)) for mu in lat.sites}
        all_ok &= _check(
            f"{lat.describe()}: every stabilizer image is Z-only",
            all(img.x_mask == 0 for img in imgs.values()),
            lines,
        )
        all_ok &= _check(
            f"{lat.describe()}: interior stabilizers map to 4-site plaquettes",
            all(
                imgs[mu].weight == 4
                for mu in lat.sites
                if not lat.on_boundary(mu)
            ),
            lines,
        )
        fixes = duality_2d_boundary_fixes(lat)
        lines.append(f"boundary touch-up sites: {list(fixes) if fixes else 'none'}")
        _, boundary = plaquette_terms(lat, 0.5, RED)
        lines.append(f"boundary terms of the red dual model at B=0.5 ({len(boundary)} terms):")
        for c, s in boundary:
            lines.append(f"  {c:+g} {s.to_text()}")

    sd = self_duality_map(lat)
    ok = all(conjugate_sum(sd, tfcm(lat, B)) == B * tfcm(lat, 1.0 / B) for B in dyadic)
    all_ok &= _check(f"{lat.describe()}: CSIGN self-duality H(B) -> B H(1/B)", ok, lines)

    _emit("\n".join(lines), args.out)
    return 0 if all_ok else 1


# ---------------------------------------------------------------------------
# sweep
# ---------------------------------------------------------------------------

def _ground_vector(lat, B, args):
    if B == 0.0:
        return cluster_state(lat)
    return ground_state(tfcm(lat, B), k=1, tol=args.tol,
                        max_iter=args.max_iter, seed=args.seed).vectors[0]


def _sweep_point_ed(lat, B, obs, args):
    if obs == "gap":
        return gap(tfcm(lat, B), tol=args.tol, max_iter=args.max_iter, seed=args.seed)
    v = _ground_vector(lat, B, args)
    if obs == "energy":
        return expectation(v, tfcm(lat, B))
    parts = obs.split(":")
    if parts[0] == "order":
        if len(parts) != 4:
            raise ValueError(f"order observable needs order:parity:i:j, got {obs!r}")
        parity, i, j = parts[1], int(parts[2]), int(parts[3])
        return expectation(v, order_string_1d(lat, i, j, parity))
    if parts[0] == "fidelity":
        return _fidelity_value(lat, v, parts, args)
    raise ValueError(f"unknown observable {obs!r}")


def _fidelity_value(lat, v, parts, args):
    gate = parts[1] if len(parts) > 1 else "identity"
    if gate == "identity":
        if lat.kind == "line":
            pat = pattern_identity(lat, 1, lat.dims[0])
        else:
            d = min(lat.dims) - 1
            pat = pattern_identity(lat, (1, 1), (1 + d, 1 + d))
        return simulate(pat, v).direct_fidelity
    if gate == "zrot":
        theta = float(parts[2]) if len(parts) > 2 else getattr(args, "theta", 0.0)
        pat = pattern_zrot(lat, theta)
        # gate fidelity = the angle-independent correlator channel
        return simulate(pat, v).correlator_fidelity
    if gate == "csign":
        pat = pattern_csign(lat, CSignLayout(anchor=(1, 1)))
        return simulate(pat, v).direct_fidelity
    raise ValueError(f"unknown gate {gate!r}")


def _sweep_point_fermion(M, B, obs):
    sol = solve_tfim(M, B)
    if obs == "energy":
        return sol.energy
    parts = obs.split(":")
    if parts[0] == "zz" and len(parts) == 3:
        return zz_correlator(sol, int(parts[1]), int(parts[2]))
    raise ValueError(f"fermion method supports energy and zz:i:j, got {obs!r}")


def cmd_sweep(args) -> int:
    grid = _parse_grid(args.b_grid)
    if not grid:
        raise ValueError("empty field grid")
    observables = args.observable or ["energy"]
    rows = []
    if args.method == "fermion":
        if args.line is None:
            raise ValueError("fermion sweeps need --line M (the dual chain length)")
        M = args.line
        for B in grid:
            for obs in observables:
                t0 = time.perf_counter()
                val = _sweep_point_fermion(M, B, obs)
                ms = int(1000 * (time.perf_counter() - t0))
                rows.append({"B": B, "observable_id": obs, "value": val,
                             "method": "fermion", "n": M, "runtime_ms": ms})
    else:
        lat = _lattice_from_args(args)
        if lat.n > MAX_ED_QUBITS:
            raise ValueError(
                f"{lat.n} qubits exceeds the ED capacity ({MAX_ED_QUBITS}); "
                "use --method fermion for long chains"
            )
        for B in grid:
            for obs in observables:
                t0 = time.perf_counter()
                val = _sweep_point_ed(lat, B, obs, args)
                ms = int(1000 * (time.perf_counter() - t0))
                rows.append({"B": B, "observable_id": obs, "value": val,
                             "method": "ed", "n": lat.n, "runtime_ms": ms})
    rows.sort(key=lambda r: (r["B"], r["observable_id"]))

    if args.format == "json":
        text = json.dumps(rows, indent=2)
    else:
        out = ["B,observable_id,value,method,n,runtime_ms"]
        for r in rows:
            out.append(
                f"{_fmt(r['B'])},{r['observable_id']},{_fmt(r['value'])},"
                f"{r['method']},{r['n']},{r['runtime_ms']}"
            )
        text = "\n".join(out)
    _emit(text, args.out)

    if args.plot:
        from .plotting import save_sweep_figure

        save_sweep_figure(rows, args.plot)
        print(f"figure written to {args.plot}", file=sys.stderr)
    return 0


# ---------------------------------------------------------------------------
# fidelity
# ---------------------------------------------------------------------------

def cmd_fidelity(args) -> int:
    lat = _lattice_from_args(args)
    if lat.n > MAX_ED_QUBITS:
        raise ValueError(f"{lat.n} qubits exceeds the ED capacity ({MAX_ED_QUBITS})")
    grid = _parse_grid(args.b_grid)
    reports = []
    for B in grid:
        v = _ground_vector(lat, B, args)
        if args.gate == "identity":
            if lat.kind == "line":
                pat = pattern_identity(lat, 1, lat.dims[0])
            else:
                d = min(lat.dims) - 1
                pat = pattern_identity(lat, (1, 1), (1 + d, 1 + d))
        elif args.gate == "zrot":
            pat = pattern_zrot(lat, args.theta)
        elif args.gate == "csign":
            pat = pattern_csign(lat, CSignLayout(anchor=(1, 1)))
        else:
            raise ValueError(f"unknown gate {args.gate!r}")
        rep = simulate(pat, v, field_strength=B)
        d = rep.to_json_dict()
        if args.gate == "csign":
            layout = CSignLayout(anchor=(1, 1))
            d["characterizing_expectations"] = [
                expectation(v, s) for s in csign_characterizing_stabilizers(lat, layout)
            ]
        reports.append(d)
    payload = reports[0] if len(reports) == 1 else reports
    _emit(json.dumps(payload, indent=2), args.out)
    return 0


# ---------------------------------------------------------------------------
# entry point
# ---------------------------------------------------------------------------

def build_parser(config_defaults: dict | None = None) -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="tfcm",
        description="Transverse-field cluster model: dualities, sweeps, gate fidelities.",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    subparsers = []

    p = sub.add_parser("verify-duality", help="run the symbolic duality checks")
    _add_common(p)
    p.set_defaults(func=cmd_verify_duality)
    subparsers.append(p)

    p = sub.add_parser("sweep", help="evaluate observables over a field grid")
    _add_common(p)
    p.add_argument("--observable", action="append", metavar="OBS",
                   help="energy | gap | order:parity:i:j | fidelity:gate[:theta] | zz:i:j")
    p.add_argument("--method", choices=("ed", "fermion"), default="ed")
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    p.add_argument("--theta", type=float, default=0.0, help="angle for fidelity:zrot")
    p.add_argument("--plot", metavar="FILE", help="also render the sweep to an image")
    p.set_defaults(func=cmd_sweep)
    subparsers.append(p)

    p = sub.add_parser("fidelity", help="gate-fidelity report as JSON")
    _add_common(p)
    p.add_argument("--gate", choices=("identity", "zrot", "csign"), default="identity")
    p.add_argument("--theta", type=float, default=0.0, help="angle for the zrot gate")
    p.set_defaults(func=cmd_fidelity)
    subparsers.append(p)

    if config_defaults:
        for sp in subparsers:
            sp.set_defaults(**{k: v for k, v in config_defaults.items()
                               if k in {a.dest for a in sp._actions}})
    return parser


def main(argv=None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        if getattr(args, "config", None):
            defaults = _load_config(args.config)
            unknown = set(defaults) - _known_dests(parser)
            if unknown:
                raise ValueError(f"unknown config keys: {sorted(unknown)}")
            args = build_parser(defaults).parse_args(argv)
        return args.func(args)
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
