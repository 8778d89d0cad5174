"""The ``sigma3`` command line."""
from __future__ import annotations

import argparse
import json
import sys
from typing import Sequence

import numpy as np

from .. import curvering, dynsys, flows, sigmalimit
from ..exactalg import Series2, parse_rational
from .config import RunConfig
from .expr import ParseError, parse_poly
from .presets import PRESET_NAMES, load_preset

SCHEMA = "sigma3/v1"
EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_BLOWUP = 0, 1, 2, 3


class UsageError(Exception):
    pass


# -- argument helpers --------------------------------------------------------


def _parse_values(text: str, n: Sequence[int], what: str) -> list[complex]:
    """Comma-separated reals (rationals allowed) -> complex list of an allowed length."""
    try:
        vals = [complex(float(parse_rational(v)) if "/" in v else float(v)) for v in text.split(",")]
    except ValueError as exc:
        raise UsageError(f"cannot parse {what} {text!r}: {exc}") from None
    if len(vals) not in n:
        raise UsageError(f"{what} needs {' or '.join(map(str, n))} values, got {len(vals)}")
    return vals


def _parse_complex_list(text: str, n: int, what: str) -> list[complex]:
    parts = text.split(";")
    if len(parts) != n:
        raise UsageError(f"{what} needs {n} ';'-separated 're,im' entries, got {len(parts)}")
    try:
        return [flows.cparse(p.strip()) for p in parts]
    except ValueError as exc:
        raise UsageError(f"cannot parse {what}: {exc}") from None


def _series_json(s: Series2) -> dict:
    return s.to_json()


def _emit(text: str, output: str | None) -> None:
    if output:
        with open(output, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
            if not text.endswith("\n"):
                fh.write("\n")
    else:
        sys.stdout.write(text if text.endswith("\n") else text + "\n")


def _dump(obj: dict) -> str:
    return json.dumps(obj, indent=2, sort_keys=True)


# -- verify ------------------------------------------------------------------


def _entry(suite: str, name: str, ok: bool, witness: str = "", **extra) -> dict:
    out = {"suite": suite, "identity": name, "status": "pass" if ok else "fail"}
    if not ok:
        out["witness"] = witness
    out.update(extra)
    return out


def suite_symbolic() -> list[dict]:
    out = []
    for r in curvering.verify_theorem_5_1():
        out.append(_entry("symbolic", f"theorem:{r.name}", r.ok, r.witness))
    for name, p in dynsys.conservation_identities().items():
        out.append(_entry("symbolic", f"conservation:{name}", p.is_zero(), str(p)))
    br = dynsys.lie_bracket(dynsys.make_system("I"), dynsys.make_system("II"))
    out.append(_entry("symbolic", "bracket:[I,II]", br.is_zero(), str(br)))
    for name, comps in sigmalimit.check_Lkl_commutators().items():
        ok = all(c.is_zero() for c in comps)
        out.append(_entry("symbolic", f"lemma:{name}", ok, "; ".join(repr(c) for c in comps)))
    return out


def suite_numeric(trials: int, seed: int, tol: float) -> list[dict]:
    H12, H14 = curvering.build_H()
    rng = np.random.default_rng(seed)
    params = curvering.CurveParams.numeric([float(v) for v in rng.uniform(-1, 1, 6)])
    out = []
    for name, f in (("H12", H12), ("H14", H14)):
        v = curvering.ideal_T_member(f, params, trials=trials, seed=seed, tol=tol)
        out.append(_entry("numeric", f"membership:{name}", v.member, f"max residual {v.max_residual!r}",
                          max_residual=v.max_residual, trials=trials))
    return out


def suite_series(order: int) -> list[dict]:
    out = []
    for kind, n in (("p_zero", order), ("p_root5", min(order, 8))):
        res = sigmalimit.verify_series_solution(sigmalimit.SeedSpec(kind), n)
        for name, r in res.items():
            out.append(_entry("series", f"{kind}:{name}", r.is_zero(), repr(r), order=n - 1))
    return out


def cmd_verify(args, cfg: RunConfig) -> int:
    suites = ["symbolic", "numeric", "series"] if args.suite == "all" else [args.suite]
    results = []
    for s in suites:
        if s == "symbolic":
            results += suite_symbolic()
        elif s == "numeric":
            results += suite_numeric(args.trials, args.seed, args.tol)
        else:
            results += suite_series(args.order)
    ok = all(r["status"] == "pass" for r in results)
    report = {"schema": SCHEMA, "kind": "verify", "config": cfg.to_json(),
              "status": "pass" if ok else "fail", "results": results}
    _emit(_dump(report), args.output)
    if not ok:
        first = next(r for r in results if r["status"] == "fail")
        print(f"verification failed: {first['identity']}: {first.get('witness', '')[:500]}", file=sys.stderr)
    return EXIT_OK if ok else EXIT_FAIL


# -- flow --------------------------------------------------------------------


def cmd_flow(args, cfg: RunConfig) -> int:
    sources = [x for x in (args.init, args.from_curve_points, args.preset) if x]
    if len(sources) != 1:
        raise UsageError("give exactly one of --init, --from-curve-points, --preset")
    preset = None
    if args.preset:
        preset = load_preset(args.preset)
        system = args.system or preset.system
        y = list(preset.y) if args.y is None else _parse_values(args.y, (4,), "--y")
        init = preset.initial()
        t_end = preset.t_end if args.t_end is None else flows.cparse(args.t_end)
    else:
        system = args.system or "I"
        t_end = flows.cparse(args.t_end or "0,0")
        if args.from_curve_points:
            y6 = _parse_values(args.y or "0,0,0,0", (4, 6), "--y")
            y6 = y6 + [0j, 0j] if len(y6) == 4 else y6
            X1, Y1, X2, Y2 = _parse_complex_list(args.from_curve_points, 4, "--from-curve-points")
            try:
                init = flows.initial_from_curve_points(y6, (X1, Y1), (X2, Y2))
            except (flows.OffCurvePoint, flows.CoincidentX) as exc:
                raise UsageError(str(exc)) from None
            y = y6[:4]
        else:
            y = _parse_values(args.y or "0,0,0,0", (4,), "--y")
            init = _parse_complex_list(args.init, 4, "--init")
    if system not in ("I", "II"):
        raise UsageError("--system must be I or II")
    try:
        traj = flows.integrate(system, init, y, t_end, rel_tol=args.rel_tol, abs_tol=args.abs_tol,
                               max_step=args.max_step)
    except flows.FlowError as exc:
        err = {"schema": SCHEMA, "kind": "blowup", "config": cfg.to_json(), "reason": exc.reason,
               "s_last": exc.s_last, "time_last": flows.cformat(exc.time_last),
               "state_last": [flows.cformat(z) for z in exc.state_last]}
        _emit(_dump(err), args.output)
        print(f"integration stopped: {exc}", file=sys.stderr)
        return EXIT_BLOWUP
    d12, d14 = flows.drift_report(traj)
    traj.meta["drift"] = {"I12": d12, "I14": d14}
    if preset is not None:
        exact = np.array(preset.exact(t_end))
        final = traj.final.state
        rel = np.abs(final - exact) / np.maximum(np.abs(exact), 1e-300)
        traj.meta["preset"] = {"name": preset.name, "source": preset.source,
                               "closed_form_final": [flows.cformat(z) for z in exact],
                               "max_rel_error": float(rel.max())}
    if args.format == "csv":
        text = traj.to_csv()
    else:
        text = flows.trajectory_json(traj, cfg.to_json())
    _emit(text, args.output)
    return EXIT_OK


# -- series ------------------------------------------------------------------


def _ext_json(seed: sigmalimit.SeedSpec) -> dict | None:
    return seed.extension.to_json() if seed.extension is not None else None


def cmd_series(args, cfg: RunConfig) -> int:
    if args.order < 1:
        raise UsageError("--order must be at least 1")
    seed = sigmalimit.SeedSpec.parse(args.seed)
    bundle = {"schema": SCHEMA, "kind": "series", "config": cfg.to_json(), "seed": seed.kind,
              "extension": _ext_json(seed), "order": args.order}
    if seed.kind == "q_root":
        ex = sigmalimit.example3_curve(args.order, seed.extension)
        res = sigmalimit.example3_residuals(ex)
        ok = all(r.is_zero() for r in res.values()) and ex.sigma_on_path.is_zero()
        bundle["path"] = "(q(1+t)^(1/3), 1+t, 0)"
        bundle["F"] = {k: _series_json(v) for k, v in ex.F.items()}
        bundle["matches_printed"] = ex.matches_printed
        bundle["matches_corrected"] = ex.matches_corrected
        bundle["residuals"] = {k: "zero" if r.is_zero() else repr(r) for k, r in res.items()}
    else:
        gs = sigmalimit.G_series(seed, args.order)
        res = sigmalimit.verify_series_solution(seed, args.order)
        ok = all(r.is_zero() for r in res.values())
        bundle["phi"] = _series_json(gs.phi)
        bundle["phi_denominators_ok"] = not sigmalimit.denominator_audit(gs.phi)
        bundle["G"] = {k: _series_json(v) for k, v in gs.G.items()}
        bundle["closed_form_agreement"] = gs.closed
        bundle["residuals"] = {k: "zero" if r.is_zero() else repr(r) for k, r in res.items()}
    bundle["status"] = "pass" if ok else "fail"
    _emit(_dump(bundle), args.output)
    return EXIT_OK if ok else EXIT_FAIL


# -- symmetrize --------------------------------------------------------------


def cmd_symmetrize(args, cfg: RunConfig) -> int:
    try:
        f = parse_poly(args.expr, curvering.XY_RING)
    except ParseError as exc:
        print(exc.caret(), file=sys.stderr)
        return EXIT_USAGE
    try:
        r = curvering.symmetrize(f)
    except curvering.AsymmetricInput as exc:
        print(f"asymmetric input: {exc}", file=sys.stderr)
        return EXIT_USAGE
    _emit(str(r), args.output)
    return EXIT_OK


# -- sample ------------------------------------------------------------------


def cmd_sample(args, cfg: RunConfig) -> int:
    y = _parse_values(args.y, (6,), "--y")
    if any(v.imag for v in y):
        raise UsageError("--y values must be real")
    params = curvering.CurveParams.numeric([v.real for v in y])
    records = []
    for i in range(args.count):
        rng = np.random.default_rng([args.seed, i])
        pt = curvering.sample_sym_square(params, rng)
        i12, i14 = dynsys.eval_integrals(pt.u, y[:4])
        records.append({
            "P1": [flows.cformat(z) for z in pt.P1],
            "P2": [flows.cformat(z) for z in pt.P2],
            "state": [flows.cformat(z) for z in pt.u],
            "I12": flows.cformat(i12),
            "I14": flows.cformat(i14),
            "residual_I12": abs(i12 - y[4]),
            "residual_I14": abs(i14 - y[5]),
        })
    out = {"schema": SCHEMA, "kind": "sample", "config": cfg.to_json(), "records": records}
    _emit(_dump(out), args.output)
    return EXIT_OK


# -- entry point -------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="sigma3", description="Symmetric-square dynamics of genus-3 curves.")
    sub = ap.add_subparsers(dest="command", required=True)

    v = sub.add_parser("verify", help="run identity suites and print a JSON report")
    v.add_argument("--suite", choices=("symbolic", "numeric", "series", "all"), default="all")
    v.add_argument("--trials", type=int, default=100)
    v.add_argument("--seed", type=int, default=0)
    v.add_argument("--order", type=int, default=12)
    v.add_argument("--tol", type=float, default=1e-9)
    v.add_argument("--output")

    f = sub.add_parser("flow", help="integrate system I or II along a complex-time segment")
    f.add_argument("--system", choices=("I", "II"))
    f.add_argument("--y", help="y4,y6,y8,y10 (or y4..y14 with --from-curve-points)")
    f.add_argument("--init", help="initial state 're,im;re,im;re,im;re,im'")
    f.add_argument("--from-curve-points", dest="from_curve_points", help="'X1;Y1;X2;Y2', each 're,im'")
    f.add_argument("--preset", choices=PRESET_NAMES)
    f.add_argument("--t-end", dest="t_end", help="end time 're,im'")
    f.add_argument("--rel-tol", dest="rel_tol", type=float, default=1e-10)
    f.add_argument("--abs-tol", dest="abs_tol", type=float, default=1e-12)
    f.add_argument("--max-step", dest="max_step", type=float, default=0.05)
    f.add_argument("--format", choices=("csv", "json"), default="json")
    f.add_argument("--output")

    s = sub.add_parser("series", help="exact series solutions in the rational limit")
    s.add_argument("--seed", choices=("p0", "p5", "q"), default="p0")
    s.add_argument("--order", type=int, default=12)
    s.add_argument("--output")

    y = sub.add_parser("symmetrize", help="express a symmetric polynomial in u2, u4, u5, u7")
    y.add_argument("expr")
    y.add_argument("--output")

    m = sub.add_parser("sample", help="random points of the symmetric square and their integrals")
    m.add_argument("--y", default="0,0,0,0,0,0", help="y4..y14")
    m.add_argument("--count", type=int, default=10)
    m.add_argument("--seed", type=int, default=0)
    m.add_argument("--output")
    return ap


def _config(args) -> RunConfig:
    d = {k: v for k, v in vars(args).items() if v is not None}
    if d.get("command") == "series":
        d["seed_kind"] = d.pop("seed")
    return RunConfig.from_json(d)


COMMANDS = {"verify": cmd_verify, "flow": cmd_flow, "series": cmd_series,
            "symmetrize": cmd_symmetrize, "sample": cmd_sample}


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    cfg = _config(args)
    try:
        return COMMANDS[args.command](args, cfg)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


def main_exit() -> None:
    sys.exit(main())
