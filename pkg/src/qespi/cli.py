"""Command-line driver: verification suites with deterministic JSON/CSV output.

Exit status: 0 when every verification passes, 2 on a verification failure,
1 on invalid arguments.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import random
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

EXIT_OK, EXIT_USAGE, EXIT_FAIL = 0, 1, 2
WORKERS_ENV = "QESPI_WORKERS"


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        raise UsageError(message)


@dataclass
class RunConfig:
    subcommand: str
    params: dict
    out: str | None = None
    csv: str | None = None
    seed: int | None = None
    extra_csv: dict = field(default_factory=dict)


def _frac(s: str) -> Fraction:
    try:
        return Fraction(s)
    except (ValueError, ZeroDivisionError) as exc:
        raise argparse.ArgumentTypeError(f"not a rational number: {s!r}") from exc


def _cnum(z) -> dict:
    z = complex(z)
    return {"re": z.real, "im": z.imag}


def _workers() -> int:
    raw = os.environ.get(WORKERS_ENV, "1")
    try:
        return max(1, int(raw))
    except ValueError as exc:
        raise UsageError(f"{WORKERS_ENV} must be an integer, got {raw!r}") from exc


def _pmap(fn, items):
    items = list(items)
    w = _workers()
    if w == 1 or len(items) < 2:
        return [fn(x) for x in items]
    with ProcessPoolExecutor(max_workers=w) as ex:
        return list(ex.map(fn, items))


# ---------------------------------------------------------------------------
# suites


def _gl2_for_n(args):
    from .gl2qes import HeunCoeffs, gl2_generators, h2_operator, pi_integral_gl2, poly_space, verify_commutant
    from .polyops import annihilates, commutator

    n, seed, samples = args
    g = gl2_generators(n)
    relations = {
        "[j0,jm]+jm": (commutator(g.j0, g.jm) + g.jm).is_zero(),
        "[j0,jp]-jp": (commutator(g.j0, g.jp) - g.jp).is_zero(),
        "[jm,jp]-2j0-n": (commutator(g.jm, g.jp) - g.j0 * 2 - g.t0 * n).is_zero(),
    }
    rng = random.Random(f"{seed}:{n}")
    s = poly_space(n)
    annih = True
    for _ in range(samples):
        h = h2_operator(HeunCoeffs.random(rng), n)
        for k in range(-1, n + 1):
            annih &= verify_commutant(h, pi_integral_gl2(n, k), s).exact_zero
    involution = all(
        annihilates(commutator(pi_integral_gl2(n, k), pi_integral_gl2(n, m)), s)
        for k in range(-1, n + 1)
        for m in range(k + 1, n + 1)
    )
    return {"n": n, "relations": relations, "annihilation_exact_zero": annih, "involution_exact_zero": involution}


def run_gl2_verify(cfg: RunConfig):
    from .gl2qes import HeunCoeffs, flag_preservation_report, h2_operator

    p = cfg.params
    rows = _pmap(_gl2_for_n, [(n, cfg.seed, p["samples"]) for n in range(p["n"] + 1)])
    rng = random.Random(f"{cfg.seed}:flag")
    lt = h2_operator(HeunCoeffs.random(rng, lower_triangular=True), 0)
    flag = [e.ok for e in flag_preservation_report(lt, min(p["n"], 6))]
    ok = all(all(r["relations"].values()) and r["annihilation_exact_zero"] and r["involution_exact_zero"] for r in rows)
    ok = ok and all(flag)
    report = {"suite": "gl2-verify", "n_max": p["n"], "samples": p["samples"], "per_n": rows,
              "flag_lower_triangular_ok": flag, "exact_zero": ok}
    return report, ok, None


def _coeffs_from_args(p, rng):
    from .gl2qes import HeunCoeffs

    if not p["coeff"]:
        return HeunCoeffs.random(rng), "random"
    vals = {}
    names = set(HeunCoeffs().as_dict())
    for item in p["coeff"]:
        if "=" not in item:
            raise UsageError(f"--coeff expects NAME=VALUE, got {item!r}")
        k, v = item.split("=", 1)
        if k not in names:
            raise UsageError(f"unknown coefficient {k!r}; choose from {sorted(names)}")
        vals[k] = _frac(v)
    return HeunCoeffs(**vals), "given"


def run_qes_heun(cfg: RunConfig):
    from .gl2qes import h2_operator, pi_integral_gl2, poly_space, qes_block_spectrum, verify_commutant
    from .polyops import rational_str, to_json

    p = cfg.params
    n = p["n"]
    rng = random.Random(cfg.seed)
    c, source = _coeffs_from_args(p, rng)
    h = h2_operator(c, n)
    spec = qes_block_spectrum(h, n)
    comm = {str(k): verify_commutant(h, pi_integral_gl2(n, k), poly_space(n)).exact_zero for k in range(-1, n + 1)}
    ok = all(comm.values())
    rows = [(i, float(v.real), float(v.imag)) for i, v in enumerate(spec.eigenvalues)]
    report = {
        "suite": "qes-heun",
        "n": n,
        "coefficients": {k: rational_str(v) for k, v in c.as_dict().items()},
        "coefficient_source": source,
        "operator": to_json(h),
        "char_poly": [list(x.parts()) for x in spec.char_poly],
        "eigenvalues": [_cnum(v) for v in spec.eigenvalues],
        "max_residual": float(np.max(spec.residuals)) if len(spec.residuals) else 0.0,
        "commutant_exact_zero": comm,
        "exact_zero": ok,
    }
    return report, ok, (("index", "re", "im"), rows)


def run_qes_sextic(cfg: RunConfig):
    from .gl2qes import (
        gauge_intertwining_witness,
        hamiltonian_x,
        qes_block_spectrum,
        quasipoly_basis,
        sextic_model,
        sextic_pi_integral_quantum,
        verify_commutant,
    )
    from .polyops import rational_str, to_json
    from .schrodnum import GridSpec, PotentialSpec, compare_spectra, sextic_energies

    p = cfg.params
    m = sextic_model(p["n"], p["q"], p["a"], p["b"])
    spec = qes_block_spectrum(m.h2p, m.n)
    ipi = sextic_pi_integral_quantum(m)
    comm = verify_commutant(hamiltonian_x(m), ipi.expanded, quasipoly_basis(m))
    intertwine = gauge_intertwining_witness(m) is None
    sector = "even" if m.q == 0 else "odd"
    report = {
        "suite": "qes-sextic",
        "params": m.params(),
        "potential": [rational_str(c) for c in m.v6],
        "h2p": to_json(m.h2p),
        "char_poly": [list(x.parts()) for x in spec.char_poly],
        "eigenvalues": [_cnum(v) for v in spec.eigenvalues],
        "x_commutant_exact_zero": comm.exact_zero,
        "gauge_intertwining_exact": intertwine,
        "origin_potential": rational_str(m.v6[3]),
    }
    ok = comm.exact_zero and intertwine
    rows = [(i, float(v.real), sector) for i, v in enumerate(spec.eigenvalues)]
    if p["compare_numeric"]:
        num = sextic_energies(m, N=p["grid"])
        cmp = compare_spectra(spec.eigenvalues, num, rel_tol=p["rel_tol"])
        report["numeric"] = {"energies": [float(e) for e in num], "grid_N": p["grid"], "comparison": cmp.to_dict()}
        ok = ok and cmp.ok
    if p.get("potential_csv"):
        g = GridSpec.for_sextic(m, N=p["grid"], parity="none")
        xs = np.linspace(-g.L, g.L, 401)
        vs = PotentialSpec.sextic(m)(xs)
        cfg.extra_csv[p["potential_csv"]] = (("x", "V"), [(float(x), float(v)) for x, v in zip(xs, vs)])
    report["exact_zero"] = ok
    return report, ok, (("index", "energy", "sector"), rows)


def run_classical(cfg: RunConfig):
    from .classmech import (
        bracket_at_special_point,
        bracket_vanishing_certificate,
        classical_functions,
        integrate,
        origin_value_closed_form,
        special_points,
    )
    from .gl2qes import sextic_model
    from .polyops import rational_str

    p = cfg.params
    m = sextic_model(p["n"], p["q"], p["a"], p["b"])
    cm = classical_functions(m)
    cert = bracket_vanishing_certificate(cm)
    pts = []
    for sp in special_points(cm):
        val = bracket_at_special_point(cm, sp, cert.bracket)
        pts.append({"x": sp.x, "p": 0.0, "bracket": _cnum(val)})
    i00 = cm.In.evaluate([0, 0])
    closed = origin_value_closed_form(m.n, m.q)
    traj = integrate(cm, p["x0"], p["p0"], p["T"], p["dt"], record_every=p["record_every"])
    report = {
        "suite": "classical",
        "params": m.params(),
        "certificate": cert.to_dict(),
        "special_points": pts,
        "I_origin": list(i00.parts()),
        "I_origin_closed_form": rational_str(closed),
        "trajectory": {
            "x0": p["x0"], "p0": p["p0"], "T": p["T"], "dt": p["dt"],
            "aborted": traj.aborted,
            "energy_drift": traj.energy_drift(),
            "integral_drift": traj.integral_drift(),
            "I_start": _cnum(traj.I[0]),
            "I_end": _cnum(traj.I[-1]),
            "samples": len(traj.time),
        },
    }
    ok = cert.ok and i00 == closed and not traj.aborted
    report["exact_zero"] = ok
    header = ("time", "x", "p", "H", "ReI", "ImI")
    rows = [tuple(float(v) for v in r) for r in traj.rows()]
    return report, ok, (header, rows)


def run_cs_verify(cfg: RunConfig):
    from .weylcs import build_rational_model, model_to_json, sutherland_a1_model
    from .polyops import to_json

    p = cfg.params
    if p["trig"]:
        if p["rank"] != 1:
            raise UsageError("the trigonometric model is implemented for rank 1 only")
        s = sutherland_a1_model(p["beta"], p["mu"], n_max=p["n_max"] if p["n_max"] is not None else 4)
        report = {
            "suite": "cs-verify",
            "family": "A",
            "rank": 1,
            "trigonometric": True,
            "h_terms": to_json(s.operator.h)["terms"],
            "h_variables": list(s.operator.variables),
            "E0": dict(zip(("re", "im"), s.operator.E0.parts())),
            **s.to_dict(),
            "algebraicity_witness": s.operator.algebraicity_witness,
        }
        reports = s.reports
        h1 = s.operator.annihilates_constants()
    else:
        if p["rank"] >= 3 and not p["expensive"]:
            raise UsageError("rank >= 3 is slow; pass --expensive to run it")
        res = build_rational_model(p["rank"], p["nu"], p["omega"], n_max=p["n_max"])
        report = {"suite": "cs-verify", "trigonometric": False, **model_to_json(res)}
        reports = res["reports"]
        h1 = res["operator"].annihilates_constants()
    ok = h1 and all(r["exact_zero"] and r["preserves"] for r in reports)
    report["h_on_constant_zero"] = h1
    report["exact_zero"] = ok
    return report, ok, None


SUITES = {
    "gl2-verify": run_gl2_verify,
    "qes-heun": run_qes_heun,
    "qes-sextic": run_qes_sextic,
    "classical": run_classical,
    "cs-verify": run_cs_verify,
}


# ---------------------------------------------------------------------------
# output


def dumps_report(report: dict) -> str:
    return json.dumps(report, sort_keys=True, indent=2, allow_nan=True) + "\n"


def dumps_csv(header, rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for r in rows:
        w.writerow([repr(v) if isinstance(v, float) else v for v in r])
    return buf.getvalue()


def emit_report(report: dict | None, out: str | None, table=None, csv_path: str | None = None, extra=None):
    """Write JSON (stdout when ``out`` is None) and optional CSV files."""
    text = dumps_report(report or {})
    if out:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    if csv_path and table is not None:
        with open(csv_path, "w", encoding="utf-8") as fh:
            fh.write(dumps_csv(*table))
    for path, tab in (extra or {}).items():
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(dumps_csv(*tab))


def run(cfg: RunConfig) -> int:
    report, ok, table = SUITES[cfg.subcommand](cfg)
    report["seed"] = cfg.seed
    emit_report(report, cfg.out, table, cfg.csv, cfg.extra_csv)
    return EXIT_OK if ok else EXIT_FAIL


# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    ap = _Parser(prog="qespi", description="Quasi-exact solvability verification suites.")
    sub = ap.add_subparsers(dest="subcommand", required=True, parser_class=_Parser)

    def common(sp, seed_required=False):
        sp.add_argument("--out", help="JSON report path (default: stdout)")
        sp.add_argument("--csv", help="CSV data path")
        sp.add_argument("--seed", type=int, required=seed_required, default=None if seed_required else 0)

    sp = sub.add_parser("gl2-verify", help="gl(2) relations, annihilation, involution and flag suites")
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--samples", type=int, default=20)
    common(sp, seed_required=True)

    sp = sub.add_parser("qes-heun", help="finite spectrum and commutant of a quadratic gl(2) element")
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--coeff", action="append", default=[], metavar="NAME=VALUE")
    common(sp)

    def sextic_args(sp):
        sp.add_argument("--n", type=int, required=True)
        sp.add_argument("--q", type=int, required=True)
        sp.add_argument("--a", type=_frac, required=True)
        sp.add_argument("--b", type=_frac, required=True)

    sp = sub.add_parser("qes-sextic", help="sextic oscillator: block spectrum, x-space commutant")
    sextic_args(sp)
    sp.add_argument("--compare-numeric", action="store_true")
    sp.add_argument("--grid", type=int, default=1500)
    sp.add_argument("--rel-tol", type=float, default=1e-6)
    sp.add_argument("--potential-csv")
    common(sp)

    sp = sub.add_parser("classical", help="bracket certificate and a trajectory")
    sextic_args(sp)
    sp.add_argument("--x0", type=float, default=0.0)
    sp.add_argument("--p0", type=float, default=0.0)
    sp.add_argument("--T", type=float, default=10.0)
    sp.add_argument("--dt", type=float, default=1e-3)
    sp.add_argument("--record-every", type=int, default=100)
    common(sp)

    sp = sub.add_parser("cs-verify", help="Calogero-Sutherland A_N suites")
    sp.add_argument("--family", default="A", choices=["A"])
    sp.add_argument("--rank", type=int, default=1)
    sp.add_argument("--nu", type=_frac, default=Fraction(1, 2))
    sp.add_argument("--omega", type=_frac, default=Fraction(1))
    sp.add_argument("--trig", action="store_true", help="trigonometric A_1 model")
    sp.add_argument("--beta", type=_frac, default=Fraction(1))
    sp.add_argument("--mu", type=_frac, default=Fraction(1, 2))
    sp.add_argument("--n-max", type=int, default=None)
    sp.add_argument("--expensive", action="store_true", help="allow rank >= 3")
    common(sp)
    return ap


def parse_config(argv) -> RunConfig:
    ns = build_parser().parse_args(argv)
    params = {k: v for k, v in vars(ns).items() if k not in ("subcommand", "out", "csv", "seed")}
    for key in ("n", "samples", "grid", "record_every"):
        if key in params and params[key] is not None and params[key] < 0:
            raise UsageError(f"--{key.replace('_', '-')} must be non-negative")
    if ns.subcommand in ("gl2-verify",) and params["n"] > 12:
        raise UsageError("--n above 12 is not supported by gl2-verify")
    if "dt" in params and (params["dt"] <= 0 or params["T"] <= 0):
        raise UsageError("--T and --dt must be positive")
    return RunConfig(ns.subcommand, params, ns.out, ns.csv, ns.seed)


def _verification_errors():
    from .classmech import CertificateError
    from .gl2qes import NotQESError
    from .weylcs import AlgebraicityError, CharacteristicVectorError

    return (CertificateError, NotQESError, AlgebraicityError, CharacteristicVectorError)


def main(argv=None) -> int:
    try:
        cfg = parse_config(sys.argv[1:] if argv is None else argv)
        return run(cfg)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except _verification_errors() as exc:
        print(f"verification failed: {exc}", file=sys.stderr)
        return EXIT_FAIL
    except (ValueError, ArithmeticError) as exc:
        # module preconditions (e.g. q not in {0,1}, non-confining parameters)
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
