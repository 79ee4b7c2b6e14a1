"""Batch command-line front end.

Every verification is exposed as a reproducible experiment that writes a
JSON report: {"schema", "config", "result", "meta"}.  The config and
result sections are deterministic functions of the inputs (fixed
summation orders, no timestamps); wall time lives only in "meta".  Exit
status is 0 when all residuals meet the requested tolerance, 1 on a
tolerance failure (the report is still written), and 2 on invalid
configuration.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
import time

import numpy as np

SCHEMA = "dolbglue-report/1"


def _geometry(args):
    from .spectra import ModelGeometry

    v = args.geometry
    if v == "torus":
        return ModelGeometry.torus(args.a, args.b)
    if v == "cylinder":
        return ModelGeometry.cylinder(args.a, args.b)
    if v == "disk":
        return ModelGeometry.disk(args.radius)
    if v == "sphere":
        return ModelGeometry.sphere(args.radius)
    if v == "hemisphere":
        return ModelGeometry.hemisphere(args.radius)
    raise ValueError(f"unknown geometry {v}")


def _regularizer(args):
    from .regdet import Regularizer

    kind = getattr(args, "q_kind", "default")
    param = getattr(args, "q_param", 1.0)
    return Regularizer(kind, param)


def cmd_spectrum(args):
    from .spectra import enumerate_spectrum

    gen = enumerate_spectrum(_geometry(args), args.bc)
    lams, mults = gen.levels(args.lam_max)
    rows = [(k, float(l), int(m)) for k, (l, m) in enumerate(zip(lams, mults))]
    result = {
        "count": len(rows),
        "dim_ker": gen.dim_ker,
        "heat_coeffs": list(gen.heat_coeffs),
        "first_levels": rows[: args.head],
    }
    if args.csv:
        with open(args.csv, "w") as fh:
            fh.write("k,lambda,mult\n")
            for k, l, m in rows:
                fh.write(f"{k},{l:.17g},{m}\n")
        result["csv"] = args.csv
    return result, True


def cmd_det(args):
    from .spectra import enumerate_spectrum, zeta_det

    gen = enumerate_spectrum(_geometry(args), args.bc)
    res = zeta_det(gen, args.lam, lam_max=args.lam_max)
    return res.to_dict(), True


def cmd_bfk(args):
    from .glue import CutDecomposition, bfk_verify

    cut = CutDecomposition.torus_cut(args.a, args.b)
    rep = bfk_verify(cut, args.lam, _regularizer(args), n_max=args.n_max)
    out = rep.to_dict()
    return out, abs(rep.residual) < args.tol


def cmd_zero_modes(args):
    from .glue import CutDecomposition, zero_mode_bfk_verify

    cut = CutDecomposition.torus_cut(args.a, args.b, framing="twist", twist=args.twist)
    rep = zero_mode_bfk_verify(cut, _regularizer(args), n_max=args.n_max)
    return rep.to_dict(), abs(rep.residual) < args.tol


def cmd_degenerate(args):
    from .glue import jump_asymptotics

    eps = tuple(float(e) for e in args.eps.split(","))
    rep = jump_asymptotics(args.framing, eps, _regularizer(args), n_max=args.n_max)
    return rep.to_dict(), abs(rep.residual) < args.tol


def cmd_anomaly(args):
    from .anomaly import anomaly_verify

    out = anomaly_verify(args.config_name)
    return out, abs(out["residual"]) < args.tol


def cmd_index(args):
    from .anomaly import index
    from .spectra import ModelGeometry

    if args.geometry == "disk":
        geom = ModelGeometry.disk(args.radius)
    elif args.geometry == "annulus":
        geom = ModelGeometry.annulus(args.r_in, args.radius)
    else:
        raise ValueError("index supports disk and annulus")
    bundle, q = "trivial", 0
    if args.bundle.startswith("K"):
        bundle = "canonical_q"
        q = 1 if args.bundle == "K" else int(args.bundle.split("^")[1])
    return index(geom, bundle, q), True


def cmd_sphere(args):
    from .glue import sphere_equator_check

    rep = sphere_equator_check(args.radius)
    return rep.to_dict(), abs(rep.residual) < args.tol


def cmd_bosonize(args):
    from .genus1 import Genus1Data, bosonization_verify

    tau = complex(args.tau_re, args.tau_im)
    data = Genus1Data(tau)
    pts = [0.731 + 0.412 * tau, 0.227 + 0.661 * tau][: args.degree]
    out = bosonization_verify(args.degree, pts, data, grid=args.grid)
    return out, abs(out["residual"]) < args.tol


def cmd_insertion(args):
    from .genus1 import Genus1Data, insertion_verify

    tau = complex(args.tau_re, args.tau_im)
    data = Genus1Data(tau)
    out = insertion_verify(args.degree, complex(*[float(x) for x in args.point.split(",")]),
                           data, grid=args.grid)
    return out, abs(out["residual"]) < args.tol


def cmd_selftest(args):
    """Fast closed-form checks across the modules."""
    from .boundary import BoundaryData, RealBoundaryField, apply_mirror, apply_star, pairing
    from .diskops import annulus_transfer, disk_alvarez_operator
    from .regdet import Regularizer, c_Q, det_Q
    from .blockop import BlockCircleOperator

    checks = {}
    u = BoundaryData(RealBoundaryField.from_modes(8, {0: 1.0}), RealBoundaryField.zero(8))
    checks["pairing_constant"] = abs(pairing(u, u) - 4.0 * math.pi)
    v = BoundaryData.random(8, np.random.default_rng(0))
    w = apply_star(apply_star(v))
    checks["star_involution"] = float(np.abs(w.f.coeffs - v.f.coeffs).max())
    w = apply_mirror(apply_mirror(v))
    checks["mirror_involution"] = float(np.abs(w.f.coeffs - v.f.coeffs).max())
    A = disk_alvarez_operator(1.0, 8)
    checks["disk_block"] = float(np.abs(A.block(1) - np.array([[0, -1j], [1j, -1.0]])).max())
    S, U, T = annulus_transfer(0.5, 4)
    checks["transfer_U"] = float(np.abs(U.block(1) - np.diag([1.6, 0.8])).max())
    Q = Regularizer()
    checks["det_identity"] = abs(det_Q(BlockCircleOperator.identity(16), Q)[0])
    checks["c_Q"] = abs(c_Q(Q) - 1.0)
    ok = all(val < 1e-10 for val in checks.values())
    return {"checks": checks}, ok


def build_parser():
    p = argparse.ArgumentParser(prog="dolbglue", description=__doc__)
    p.add_argument("--output", help="write the JSON report to this path")
    p.add_argument("--config-file", help="flat JSON file with defaults; flags override")
    p.add_argument("--threads", type=int,
                   default=int(os.environ.get("GLUE_THREADS", "1")),
                   help="parallelism hint (results are thread-count independent)")
    sub = p.add_subparsers(dest="command", required=True)

    def add(name, fn, **defaults):
        sp = sub.add_parser(name)
        sp.set_defaults(func=fn)
        return sp

    sp = add("spectrum", cmd_spectrum)
    sp.add_argument("--geometry", required=True)
    sp.add_argument("--bc", default="closed")
    sp.add_argument("--a", type=float, default=1.0)
    sp.add_argument("--b", type=float, default=1.0)
    sp.add_argument("--radius", type=float, default=1.0)
    sp.add_argument("--lam-max", type=float, default=1e3)
    sp.add_argument("--head", type=int, default=16)
    sp.add_argument("--csv")

    sp = add("det", cmd_det)
    sp.add_argument("--geometry", required=True)
    sp.add_argument("--bc", default="closed")
    sp.add_argument("--a", type=float, default=1.0)
    sp.add_argument("--b", type=float, default=1.0)
    sp.add_argument("--radius", type=float, default=1.0)
    sp.add_argument("--lam", type=float, default=0.0)
    sp.add_argument("--lam-max", type=float, default=4e5)

    sp = add("bfk", cmd_bfk)
    sp.add_argument("--geometry", default="torus")
    sp.add_argument("--a", type=float, default=1.0)
    sp.add_argument("--b", type=float, default=1.0)
    sp.add_argument("--lambda", dest="lam", type=float, default=1.0)
    sp.add_argument("--n-max", type=int, default=512)
    sp.add_argument("--q-kind", default="default")
    sp.add_argument("--q-param", type=float, default=1.0)
    sp.add_argument("--tol", type=float, default=1e-6)

    sp = add("zero-modes", cmd_zero_modes)
    sp.add_argument("--a", type=float, default=1.0)
    sp.add_argument("--b", type=float, default=1.0)
    sp.add_argument("--twist", type=int, default=1)
    sp.add_argument("--n-max", type=int, default=1024)
    sp.add_argument("--q-kind", default="default")
    sp.add_argument("--q-param", type=float, default=1.0)
    sp.add_argument("--tol", type=float, default=1e-5)

    sp = add("degenerate", cmd_degenerate)
    sp.add_argument("--framing", default="global_section",
                    choices=["global_section", "meromorphic_simple_pole"])
    sp.add_argument("--eps", default="0.5,0.25,0.125,0.0625")
    sp.add_argument("--n-max", type=int, default=128)
    sp.add_argument("--q-kind", default="default")
    sp.add_argument("--q-param", type=float, default=1.0)
    sp.add_argument("--tol", type=float, default=1e-3)

    sp = add("anomaly", cmd_anomaly)
    sp.add_argument("--config-name", default="disk_hemisphere",
                    choices=["torus_rescale", "sphere_rescale", "disk_hemisphere"])
    sp.add_argument("--tol", type=float, default=1e-4)

    sp = add("index", cmd_index)
    sp.add_argument("--geometry", default="disk")
    sp.add_argument("--bundle", default="trivial")
    sp.add_argument("--radius", type=float, default=1.0)
    sp.add_argument("--r-in", type=float, default=0.5)

    sp = add("sphere", cmd_sphere)
    sp.add_argument("--radius", type=float, default=1.0)
    sp.add_argument("--tol", type=float, default=1e-6)

    sp = add("bosonize", cmd_bosonize)
    sp.add_argument("--tau-re", type=float, default=0.0)
    sp.add_argument("--tau-im", type=float, default=1.0)
    sp.add_argument("--degree", type=int, default=1)
    sp.add_argument("--grid", type=int, default=384)
    sp.add_argument("--tol", type=float, default=1e-3)

    sp = add("insertion", cmd_insertion)
    sp.add_argument("--tau-re", type=float, default=0.0)
    sp.add_argument("--tau-im", type=float, default=1.0)
    sp.add_argument("--degree", type=int, default=1)
    sp.add_argument("--point", default="0.63,0.29")
    sp.add_argument("--grid", type=int, default=384)
    sp.add_argument("--tol", type=float, default=1e-3)

    add("selftest", cmd_selftest)
    return p


def _jsonable(obj):
    if isinstance(obj, dict):
        return {k: _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, (np.floating, float)):
        v = float(obj)
        return v if math.isfinite(v) else repr(v)
    if isinstance(obj, (np.integer,)):
        return int(obj)
    if isinstance(obj, complex):
        return [obj.real, obj.imag]
    return obj


def run(argv=None) -> int:
    parser = build_parser()
    args, extra = parser.parse_known_args(argv)
    if extra:
        parser.error(f"unknown arguments: {extra}")
    if args.config_file:
        try:
            with open(args.config_file) as fh:
                defaults = json.load(fh)
        except (OSError, json.JSONDecodeError) as exc:
            print(f"bad config file: {exc}", file=sys.stderr)
            return 2
        given = set(argv if argv is not None else sys.argv[1:])
        for key, val in defaults.items():
            attr = key.replace("-", "_")
            flag = "--" + key.replace("_", "-")
            if hasattr(args, attr) and flag not in given:
                setattr(args, attr, val)
    t0 = time.perf_counter()
    config = {k: _jsonable(v) for k, v in sorted(vars(args).items())
              if k not in ("func", "output", "config_file") and v is not None}
    try:
        result, ok = args.func(args)
    except (ValueError, KeyError) as exc:
        print(f"invalid configuration: {exc}", file=sys.stderr)
        return 2
    report = {
        "schema": SCHEMA,
        "config": config,
        "result": _jsonable(result),
        "meta": {"wall_time_s": time.perf_counter() - t0, "passed": bool(ok)},
    }
    text = json.dumps(report, indent=2, sort_keys=True)
    if args.output:
        with open(args.output, "w") as fh:
            fh.write(text + "\n")
    else:
        print(text)
    return 0 if ok else 1


def main():
    raise SystemExit(run())


if __name__ == "__main__":
    main()
