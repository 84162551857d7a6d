"""Command-line front end.

Exit codes: 0 when every reported check passes, 1 when any check fails,
2 for usage or configuration errors (the diagnostic names the offending
field).  All machine output is JSON via --format json; convergence traces
are CSV.
"""
from __future__ import annotations

import argparse
import os
import sys
import time

import numpy as np

from caligeo import orbifold as orb
from caligeo import pde, pdegrid, suite, wproj
from caligeo.calibration import OrientedPlane, classify_plane, comass
from caligeo.report import Report
from caligeo.structures import model_form, phi0, spin7_omega0, stabilizer_algebra
from caligeo.suite import packaged_config


def _resolve_config(path: str) -> str:
    """Literal path if it exists, else the shipped config with that basename."""
    if os.path.exists(path):
        return path
    candidate = packaged_config(os.path.basename(path))
    if os.path.exists(candidate):
        return candidate
    raise ValueError(f"config file not found: {path}")


def _emit(rep: Report, fmt: str, verbose: bool = False) -> int:
    print(rep.to_json() if fmt == "json" else rep.to_text(verbose=verbose))
    return 0 if rep.all_passed() else 1


# -- subcommand handlers --------------------------------------------------------
def _cmd_verify(args) -> int:
    if args.what != "structures":
        raise ValueError(f"unknown verification target: {args.what}")
    from caligeo.structures import verify_product_structures

    t0 = time.perf_counter()
    rep = verify_product_structures()
    d7 = stabilizer_algebra(phi0()).dimension
    rep.add("g2-stabilizer", d7 == 14, "stabilizer algebra of the 3-form has dimension 14", "14", str(d7))
    d8 = stabilizer_algebra(spin7_omega0()).dimension
    rep.add("spin7-stabilizer", d8 == 21, "stabilizer algebra of the 4-form has dimension 21", "21", str(d8))
    rep.elapsed_s = time.perf_counter() - t0
    return _emit(rep, args.format)


def _cmd_comass(args) -> int:
    t0 = time.perf_counter()
    form = model_form(args.form)
    res = comass(form, restarts=args.restarts, seed=args.seed, tol=args.tol)
    rep = Report(command=f"comass --form {args.form}")
    rep.add(
        "comass",
        abs(res.value - 1.0) <= 1e-4,
        f"best restriction of {args.form} over oriented planes",
        "1 within 1e-4",
        f"{res.value:.10f} ({res.converged}/{res.restarts} restarts converged)",
    )
    rep.elapsed_s = time.perf_counter() - t0
    return _emit(rep, args.format, verbose=True)


def _cmd_plane_classify(args) -> int:
    t0 = time.perf_counter()
    try:
        frame = np.loadtxt(args.frame, ndmin=2)
    except OSError as exc:
        raise ValueError(f"frame file: {exc}") from exc
    plane = OrientedPlane(frame)
    cls = classify_plane(plane, tol=args.tol)
    rep = Report(command="plane classify")
    rep.add(
        "classification",
        cls.kind.value != "none",
        f"{plane.degree}-plane in R^{plane.ambient_dim} against the model calibration",
        "calibrated class",
        f"{cls.kind.value} (value {cls.value:.12f})",
    )
    rep.elapsed_s = time.perf_counter() - t0
    return _emit(rep, args.format, verbose=True)


def _load_group(path: str):
    cfg = orb.load_config(_resolve_config(path))
    return cfg, orb.generate_group(cfg.generators)


def _cmd_orbifold_analyze(args) -> int:
    t0 = time.perf_counter()
    cfg, G = _load_group(args.config)
    rep = Report(command=f"orbifold analyze {args.config}")
    rep.add("group", True, "group generated by the config", f"order {G.order}", f"order {G.order}, abelian {G.abelian}")
    if cfg.form_label:
        form = model_form(cfg.form_label)
        signs = {name: orb.preserves_form(g, form) for name, g in cfg.generators.items()}
        rep.add(
            "form-signs",
            all(s == 1 for s in signs.values()),
            f"every generator preserves {cfg.form_label}",
            "+1 for all generators",
            str(signs),
        )
    sing = orb.singular_set(G)
    dims = sing.quotient_dimensions()
    rep.add(
        "singular-set",
        True,
        "fixed loci of nonidentity elements, grouped into quotient components",
        "component census",
        f"{len(sing.orbits)} components, dims {dims}, {sing.upstairs_count} upstairs",
    )
    rep.add("disjoint", sing.all_disjoint, "quotient components are pairwise disjoint", "disjoint", f"intersections {sing.intersections}")
    models = sorted({o.label for o in sing.orbits if o.label})
    if models:
        rep.add("local-models", True, "normal models of the singular components", "labels", ", ".join(models))
    if cfg.involution is not None:
        loc = orb.involution_locus(cfg.involution, G, sing)
        rep.add(
            f"{cfg.involution_name}-locus",
            True,
            "fixed locus of the extra involution in the quotient",
            "component census",
            f"{len(loc.orbits)} components, dims {loc.quotient_dimensions()}, "
            f"{loc.upstairs_count} upstairs, free {loc.free_on_components}, "
            f"meets singular set {loc.meets_singular_set}",
        )
    rep.elapsed_s = time.perf_counter() - t0
    return _emit(rep, args.format, verbose=True)


def _cmd_orbifold_fixed(args) -> int:
    t0 = time.perf_counter()
    cfg, G = _load_group(args.config)
    try:
        g = G.element_by_word(args.element)
    except KeyError as exc:
        raise ValueError(f"element: no group element with word {args.element!r}") from exc
    fs = orb.fixed_set(g)
    rep = Report(command=f"orbifold fixed {args.config} --element {args.element}")
    rep.add(
        "fixed-set",
        True,
        f"solutions of {args.element}(x) = x on the torus",
        "component census",
        f"{fs.count} components, dims {fs.dimensions()}" if fs.count else "empty",
    )
    for i, comp in enumerate(fs.components[: args.limit]):
        rep.add(
            f"component-{i}",
            True,
            f"dimension {comp.dimension} affine subtorus",
            "representative",
            "(" + ", ".join(str(x) for x in comp.representative) + ")",
        )
    if fs.count > args.limit:
        rep.add("truncated", True, "component list shortened", f"limit {args.limit}", f"{fs.count - args.limit} more")
    rep.elapsed_s = time.perf_counter() - t0
    return _emit(rep, args.format, verbose=True)


def _cmd_orbifold_betti(args) -> int:
    t0 = time.perf_counter()
    cfg, G = _load_group(args.config)
    by_rank = orb.orbifold_betti(G)
    by_char = suite._betti_by_character(G)
    rep = Report(command=f"orbifold betti {args.config}")
    rep.add("betti", True, "dimensions of the invariant constant forms per degree", "rank route", str(by_rank))
    rep.add("routes-agree", by_rank == by_char, "rank and character-average routes agree", str(by_rank), str(by_char))
    rep.elapsed_s = time.perf_counter() - t0
    return _emit(rep, args.format, verbose=True)


def _cmd_wps(args) -> int:
    if args.what != "check-example":
        raise ValueError(f"unknown wps action: {args.what}")
    t0 = time.perf_counter()
    rep = wproj.check_example(conductor=args.conductor)
    rep.elapsed_s = time.perf_counter() - t0
    return _emit(rep, args.format)


def _cmd_pde_residual(args) -> int:
    t0 = time.perf_counter()
    try:
        with open(args.jet, encoding="utf-8") as fh:
            jet = pde.Jet1.from_json(fh.read())
    except OSError as exc:
        raise ValueError(f"jet file: {exc}") from exc
    except ValueError as exc:
        raise ValueError(f"jet file {args.jet}: {exc}") from exc
    except (KeyError, TypeError) as exc:
        raise ValueError(f"jet file {args.jet}: missing or malformed field {exc}") from exc
    if jet.kind != args.kind:
        raise ValueError(f"jet kind {jet.kind!r} does not match --kind {args.kind!r}")
    r = pde.residual(jet)
    sup = max(abs(float(c)) for c in r.components)
    small = sup <= args.tol
    calibrated = pde.jet_plane_calibrated(jet)
    rep = Report(command=f"pde residual --kind {args.kind}")
    rep.add(
        "residual",
        True,
        "quaternion defect of the graph equation at the jet",
        "components",
        "(" + ", ".join(f"{float(c):.6e}" for c in r.components) + f"), sup {sup:.6e}",
    )
    rep.add(
        "plane-agreement",
        small == calibrated,
        "vanishing residual must coincide with a calibrated graph plane",
        "residual test == plane test",
        f"residual <= {args.tol:g}: {small}; plane calibrated: {calibrated}",
    )
    rep.elapsed_s = time.perf_counter() - t0
    return _emit(rep, args.format, verbose=True)


def _cmd_pde_solve(args) -> int:
    t0 = time.perf_counter()
    res = pdegrid.solve_graph(
        kind=args.kind,
        grid=args.grid,
        eps=args.eps,
        seed=args.seed,
        tol=args.tol,
        max_iter=args.max_iter,
    )
    rep = Report(command=f"pde solve --kind {args.kind} --grid {args.grid}")
    rep.add(
        "converged",
        res.converged,
        "damped Newton iteration on the periodic grid",
        f"residual < {args.tol:g} within {args.max_iter} iterations",
        f"residual {res.residual:.3e} after {res.iterations} iterations ({res.message})",
    )
    rep.elapsed_s = time.perf_counter() - t0
    if args.trace:
        with open(args.trace, "w", encoding="utf-8") as fh:
            fh.write(res.trace_csv())
    code = _emit(rep, args.format, verbose=True)
    if args.format == "text" and not args.trace:
        print(res.trace_csv(), end="")
    return code


def _parse_eps_sweep(text: str) -> list[float]:
    """'1e-2:1e-4' -> decade steps; comma lists pass through."""
    if ":" in text:
        lo_s, hi_s = text.split(":", 1)
        a, b = float(lo_s), float(hi_s)
        if a <= 0 or b <= 0:
            raise ValueError("eps-sweep endpoints must be positive")
        hi, lo = max(a, b), min(a, b)
        out = [hi]
        while out[-1] > lo * 1.0000001:
            out.append(out[-1] / 10.0)
        return out
    return [float(x) for x in text.split(",") if x]


def _cmd_pde_mclean(args) -> int:
    t0 = time.perf_counter()
    eps = _parse_eps_sweep(args.eps_sweep)
    res = pdegrid.coassoc_deformation_linearization(
        grid=args.grid, eps_sequence=eps, samples=args.samples, seed=args.seed
    )
    rep = Report(command=f"pde mclean --grid {args.grid}")
    finals = [errs[-1] for errs in res.rel_errors]
    rep.add(
        "linearization",
        all(r < 1e-3 for r in finals),
        "scaled pullback of the normal graph matches the exterior derivative",
        "relative error < 1e-3 at the smallest eps",
        f"max {max(finals):.3e}, slopes {[round(s, 3) for s in res.slopes]}",
    )
    rep.add("constant-fields", res.constant_zero_sup == 0.0, "constant self-dual fields give zero pullback", "0", f"{res.constant_zero_sup:.3e}")
    rep.add("additive", res.additivity_rel < 1e-4, "the linearization is additive", "< 1e-4 relative", f"{res.additivity_rel:.3e}")
    rep.elapsed_s = time.perf_counter() - t0
    code = _emit(rep, args.format, verbose=True)
    if args.format == "text":
        lines = ["sample,eps,rel_error"]
        for s, errs in enumerate(res.rel_errors):
            for e, r in zip(res.eps, errs):
                lines.append(f"{s},{e:g},{r:.6e}")
        print("\n".join(lines))
    return code


def _cmd_pde_index(args) -> int:
    inv = pde.TopologyInvariants(args.tau, args.chi, args.self_int)
    idx = pde.dirac_index(inv)  # ValueError on odd parity -> exit 2
    rep = Report(command="pde index")
    rep.add(
        "index",
        True,
        f"tau - (chi + self-intersection)/2 for tau {args.tau}, chi {args.chi}, self-intersection {args.self_int}",
        "integer",
        str(idx),
    )
    return _emit(rep, args.format, verbose=True)


def _cmd_report_all(args) -> int:
    results = suite.run_all()
    if args.format == "json":
        import json

        payload = [
            {
                "criterion": res.number,
                "title": res.title,
                "passed": res.passed,
                "report": json.loads(res.report.to_json()),
            }
            for res in results
        ]
        print(json.dumps(payload, indent=2))
    else:
        for res in results:
            print(res.report.to_text())
            print()
        n_pass = sum(res.passed for res in results)
        print(f"== {n_pass}/{len(results)} criteria passed ==")
    return 0 if all(res.passed for res in results) else 1


# -- parser ----------------------------------------------------------------------
def _add_format(p: argparse.ArgumentParser) -> None:
    p.add_argument("--format", choices=("text", "json"), default="text")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="caligeo",
        description="exact exterior algebra, exceptional calibrations, flat orbifolds, and calibrated graph equations",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("verify", help="exact identities of the model structures")
    p.add_argument("what", choices=("structures",))
    _add_format(p)
    p.set_defaults(func=_cmd_verify)

    p = sub.add_parser("comass", help="multi-start comass of a model form")
    p.add_argument("--form", required=True, choices=("g2-phi", "g2-star-phi", "spin7-omega"))
    p.add_argument("--restarts", type=int, default=200)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--tol", type=float, default=1e-10)
    _add_format(p)
    p.set_defaults(func=_cmd_comass)

    p = sub.add_parser("plane", help="plane-level tests")
    psub = p.add_subparsers(dest="plane_command", required=True)
    pc = psub.add_parser("classify", help="classify an oriented plane from a frame file")
    pc.add_argument("--frame", required=True, help="whitespace-separated n x k matrix, columns span the plane")
    pc.add_argument("--tol", type=float, default=1e-9)
    _add_format(pc)
    pc.set_defaults(func=_cmd_plane_classify)

    p = sub.add_parser("orbifold", help="torus group actions from config files")
    osub = p.add_subparsers(dest="orbifold_command", required=True)
    oa = osub.add_parser("analyze", help="full singular-set analysis")
    oa.add_argument("config")
    _add_format(oa)
    oa.set_defaults(func=_cmd_orbifold_analyze)
    of = osub.add_parser("fixed", help="fixed set of one element")
    of.add_argument("config")
    of.add_argument("--element", required=True, help="word in the generators, e.g. alpha*beta")
    of.add_argument("--limit", type=int, default=20, help="component list cap")
    _add_format(of)
    of.set_defaults(func=_cmd_orbifold_fixed)
    ob = osub.add_parser("betti", help="invariant Betti numbers by two routes")
    ob.add_argument("config")
    _add_format(ob)
    ob.set_defaults(func=_cmd_orbifold_betti)

    p = sub.add_parser("wps", help="weighted projective checks")
    p.add_argument("what", choices=("check-example",))
    p.add_argument("--conductor", type=int, default=24)
    _add_format(p)
    p.set_defaults(func=_cmd_wps)

    p = sub.add_parser("pde", help="calibrated graph equations")
    dsub = p.add_subparsers(dest="pde_command", required=True)
    dr = dsub.add_parser("residual", help="residual of a first-order jet")
    dr.add_argument("--kind", required=True, choices=("assoc", "coassoc", "cayley"))
    dr.add_argument("--jet", required=True, help="JSON file with kind, value and partials")
    dr.add_argument("--tol", type=float, default=1e-10)
    _add_format(dr)
    dr.set_defaults(func=_cmd_pde_residual)
    ds = dsub.add_parser("solve", help="Newton solver on the periodic grid")
    ds.add_argument("--kind", default="assoc", choices=("assoc", "cayley"))
    ds.add_argument("--grid", type=int, default=16)
    ds.add_argument("--eps", type=float, default=1e-2)
    ds.add_argument("--seed", type=int, default=0)
    ds.add_argument("--tol", type=float, default=1e-8)
    ds.add_argument("--max-iter", type=int, default=25)
    ds.add_argument("--trace", help="write the convergence trace CSV to this file")
    _add_format(ds)
    ds.set_defaults(func=_cmd_pde_solve)
    dm = dsub.add_parser("mclean", help="deformation linearization on the flat 4-torus")
    dm.add_argument("--grid", type=int, default=12)
    dm.add_argument("--eps-sweep", default="1e-2:1e-4", help="start:end by decades, or a comma list")
    dm.add_argument("--samples", type=int, default=5)
    dm.add_argument("--seed", type=int, default=0)
    _add_format(dm)
    dm.set_defaults(func=_cmd_pde_mclean)
    di = dsub.add_parser("index", help="index arithmetic from topological invariants")
    di.add_argument("--tau", type=int, required=True)
    di.add_argument("--chi", type=int, required=True)
    di.add_argument("--self-int", type=int, required=True, dest="self_int")
    _add_format(di)
    di.set_defaults(func=_cmd_pde_index)

    p = sub.add_parser("report", help="acceptance suite")
    p.add_argument("what", choices=("all",))
    _add_format(p)
    p.set_defaults(func=_cmd_report_all)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
