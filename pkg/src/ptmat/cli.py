"""Command-line front end.

Exit codes: 0 success, 1 selftest failure, 2 usage or input error,
3 verification failure. ``PTMAT_TOL`` overrides the default tolerance of
every subcommand. ``-`` as a path means stdin or stdout.
"""
import argparse
import csv
import io as _io
import itertools
import json
import os
import sys

import numpy as np

from . import acceptance, cpt, special
from .construct import (PTParams2, PTParams3, build_h2, build_h3, check_pt_symmetry,
                        classify2, fit_pt2)
from .cpt import NEAR_EXCEPTIONAL
from .errors import (DimensionMismatch, DimensionOutOfRange, MatrixFormatError, PTMatError)
from .io import complex_list, dump, load, matrix_from_json, matrix_to_json
from .linalg import DEFAULT_TOL, eigenvalues, fro, residuals
from .parity import parity2, parity3, parity_from_json, parity_trivial
from .search import SEARCH_TOL, search_parity3
from .sun import build_basis, structure_constants_csv

EXIT_OK, EXIT_SELFTEST, EXIT_USAGE, EXIT_VERIFY = 0, 1, 2, 3
GRID_CAP = 10 ** 7
PT2_KEYS = ("epsilon", "gamma", "mu", "nu", "theta", "phi")
PT3_KEYS = ("epsilon", "gamma1", "gamma2", "gamma3", "gamma4",
            "mu1", "mu2", "mu3", "mu4", "chi", "theta", "rho", "phi")
SCAN_TAIL = ("discriminant", "label", "max_im_eig", "pt_residual")


class UsageError(Exception):
    pass


def _tol(args, default=DEFAULT_TOL):
    if getattr(args, "tol", None) is not None:
        return args.tol
    env = os.environ.get("PTMAT_TOL")
    if env is None:
        return default
    try:
        value = float(env)
    except ValueError:
        raise UsageError(f"PTMAT_TOL is not a number: {env!r}") from None
    if not np.isfinite(value) or value <= 0:
        raise UsageError("PTMAT_TOL must be a positive finite number")
    return value


def _floats(text):
    try:
        return tuple(float(x) for x in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}") from None


def _complex(text):
    try:
        return complex(text.replace(" ", ""))
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a complex number: {text!r}") from None


def _finite(text):
    try:
        value = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a number: {text!r}") from None
    if not np.isfinite(value):
        raise argparse.ArgumentTypeError(f"not finite: {text!r}")
    return value


def _spectrum_label(h, vals):
    """unbroken / broken from the spectrum; exceptional only for a defective degeneracy."""
    scale = max(1.0, fro(h))
    guard = NEAR_EXCEPTIONAL * scale
    n = len(vals)
    for k in range(n):
        cluster = np.abs(vals - vals[k]) < guard
        if cluster.sum() > 1:
            sv = np.linalg.svd(h - vals[k] * np.eye(n), compute_uv=False)
            if np.sum(sv < np.sqrt(guard * scale)) < cluster.sum():
                return "exceptional"
    return "broken" if np.max(np.abs(vals.imag)) > guard else "unbroken"


def _load_matrix(path):
    return matrix_from_json(load(path))


# -- subcommands -----------------------------------------------------------

def cmd_parity(args):
    tol = _tol(args)
    if args.trivial:
        par = parity_trivial(args.n, args.sign)
    elif args.n == 2:
        _require(args, "theta", "phi")
        par = parity2(args.theta, args.phi)
    elif args.n == 3:
        _require(args, "chi", "theta", "rho", "phi")
        par = parity3(args.chi, args.theta, args.rho, args.phi, args.sign)
    else:
        raise UsageError("nontrivial parameterized parities exist for --n 2 and --n 3; use --trivial")
    res = residuals(par.matrix)
    report = {"hermiticity": res.hermiticity, "involution": res.involution}
    dump({"parity": par.to_json(), "matrix": matrix_to_json(par.matrix), "residuals": report},
         args.output)
    return EXIT_OK if max(report.values()) <= tol else EXIT_VERIFY


def _require(args, *names):
    missing = [n for n in names if getattr(args, n) is None]
    if missing:
        raise UsageError("missing " + ", ".join("--" + n.replace("_", "-") for n in missing))


def _params2(args):
    if args.params:
        obj = load(args.params)
        return PTParams2(**{k: float(obj.get(k, 0.0)) for k in PT2_KEYS})
    return PTParams2(*(getattr(args, k) or 0.0 for k in PT2_KEYS))


def _params3(args):
    if args.params:
        obj = load(args.params)
        return PTParams3(float(obj.get("epsilon", 0.0)), tuple(obj.get("gammas", (0,) * 4)),
                         tuple(obj.get("mus", (0,) * 4)),
                         *(float(obj.get(k, 0.0)) for k in ("chi", "theta", "rho", "phi")))
    return PTParams3(args.epsilon or 0.0, args.gammas or (0.0,) * 4, args.mus or (0.0,) * 4,
                     args.chi or 0.0, args.theta or 0.0, args.rho or 0.0, args.phi or 0.0)


def cmd_build(args):
    tol = _tol(args)
    if args.family == "pt2":
        p = _params2(args)
        h = build_h2(p)
        label = classify2(p, tol * max(1.0, p.gamma ** 2)).label
        parity = p.parity()
    else:
        p = _params3(args)
        h = build_h3(p, allow_degenerate=True)
        label = _spectrum_label(h, eigenvalues(h))
        parity = p.parity()
    dump({"params": p.to_dict(), "parity": parity.to_json(), "H": matrix_to_json(h),
          "phase": label, "eigenvalues": complex_list(eigenvalues(h))}, args.output)
    return EXIT_OK


def cmd_verify(args):
    tol = _tol(args)
    h = _load_matrix(args.hamiltonian)
    par = parity_from_json(load(args.parity))
    res = check_pt_symmetry(h, par)
    scale = max(1.0, fro(h))
    ok = res <= tol * scale
    dump({"pt_residual": res, "relative_residual": res / scale, "tol": tol, "pt_symmetric": ok},
         args.output)
    return EXIT_OK if ok else EXIT_VERIFY


def cmd_cpt(args):
    tol = _tol(args, 1e-9)
    h = _load_matrix(args.hamiltonian)
    par = parity_from_json(load(args.parity))
    frame = cpt.cpt_frame(h, par, min(tol, DEFAULT_TOL))
    dump(frame.to_json(), args.output)
    return EXIT_OK if frame.ok(tol) else EXIT_VERIFY


def _reduce_general(h, target, tol):
    """C from the general machinery, or None outside the unbroken phase."""
    try:
        return cpt.build_c(h, target.parity(), tol)
    except PTMatError:
        return None


def cmd_reduce(args):
    tol = _tol(args)
    case = args.case
    res = {}
    caveats = []
    if case in ("hermitian", "bbj", "bmw"):
        _require(args, *{"hermitian": ("gamma",), "bbj": ("gamma", "mu"),
                         "bmw": ("gamma", "mu", "theta")}[case])
    eps = args.epsilon or 0.0
    if case == "hermitian":
        target = PTParams2(eps, args.gamma, 0.0, 0.0, args.theta or 0.0, args.phi or 0.0)
        h = special.hermitian_case(eps, args.gamma, target.theta, target.phi)
        c = _reduce_general(h, target, tol)
        if c is not None:
            res["C_minus_P"] = fro(c - target.parity().matrix)
    elif case == "bbj":
        target = PTParams2(eps, args.gamma, args.mu, 0.0, np.pi / 2, 0.0)
        h, c = special.bbj_case(eps, args.gamma, args.mu)
        res["C_vs_general"] = fro(c - cpt.build_c(h, target.parity(), tol))
    elif case == "bmw":
        target = PTParams2(eps, args.gamma, args.mu, 0.0, args.theta, 0.0)
        h, c = special.bmw_case(eps, args.gamma, args.mu, args.theta)
        res["C_vs_general"] = fro(c - cpt.build_c(h, target.parity(), tol))
        res["H_symmetry"] = fro(h - h.T)
    elif case == "mostafazadeh":
        _require(args, "r", "s", "t", "u", "phi_ext")
        rec = special.map_mostafazadeh(args.r, args.s, args.t, args.u, args.phi_ext)
        target, caveats = rec.target, rec.caveats
        h = special.mostafazadeh_matrix(args.r, args.s, args.t, args.u, args.phi_ext)
        c = _reduce_general(h, target, tol)
    else:
        _require(args, "q", "E", "Theta", "Phi")
        rec = special.map_mo(args.q, args.E, args.Theta, args.Phi, tol)
        target, caveats = rec.target, rec.caveats
        h = special.mo_matrix(args.q, args.E, args.Theta, args.Phi)
        c = _reduce_general(h, target, tol)
    res["H_vs_general"] = fro(h - build_h2(target))
    scale = max(1.0, fro(h))
    ok = all(v <= tol * scale for v in res.values())
    dump({"case": case, "H": matrix_to_json(h),
          "C": matrix_to_json(c) if c is not None else None,
          "mapped_params": target.to_dict(), "caveats": caveats, "residuals": res}, args.output)
    return EXIT_OK if ok else EXIT_VERIFY


def cmd_fit(args):
    tol = _tol(args)
    h = _load_matrix(args.hamiltonian)
    if h.shape != (2, 2):
        raise DimensionMismatch(f"fit needs a 2x2 matrix, got {h.shape[0]}x{h.shape[0]}")
    p, par = fit_pt2(h, tol)
    err = fro(build_h2(p) - h)
    dump({"params": p.to_dict(), "parity": par.to_json(), "roundtrip_error": err}, args.output)
    return EXIT_OK if err <= 10 * tol * max(1.0, fro(h)) else EXIT_VERIFY


def cmd_search(args):
    tol = _tol(args, SEARCH_TOL)
    h = _load_matrix(args.hamiltonian)
    res = search_parity3(h, restarts=args.restarts, tol=tol, seed=args.seed)
    dump(res.to_json(), args.output)
    return EXIT_OK if res.certified else EXIT_VERIFY


def _parse_assign(items, keys):
    out = {}
    for item in items or []:
        for part in item.split(","):
            if not part:
                continue
            name, _, value = part.partition("=")
            if name not in keys or not value:
                raise UsageError(f"bad --fixed entry {part!r}; parameters are {', '.join(keys)}")
            out[name] = float(value)
    return out


def _parse_sweep(items, keys):
    sweeps = []
    for item in items or []:
        fields = item.split(":")
        if len(fields) != 4 or fields[0] not in keys:
            raise UsageError(f"bad --sweep {item!r}; expected NAME:MIN:MAX:STEPS")
        try:
            lo, hi, steps = float(fields[1]), float(fields[2]), int(fields[3])
        except ValueError:
            raise UsageError(f"bad --sweep {item!r}") from None
        if steps < 1:
            raise UsageError("sweep steps must be >= 1")
        sweeps.append((fields[0], np.linspace(lo, hi, steps) if steps > 1 else np.array([lo])))
    if len(sweeps) > 3:
        raise UsageError("at most 3 swept parameters")
    if len({s[0] for s in sweeps}) != len(sweeps):
        raise UsageError("a parameter is swept twice")
    return sweeps


def scan_rows(family, fixed, sweeps, tol=DEFAULT_TOL):
    """Yield one CSV row (list of strings) per grid point, in grid order."""
    keys = PT2_KEYS if family == "pt2" else PT3_KEYS
    names = [s[0] for s in sweeps]
    for point in itertools.product(*(s[1] for s in sweeps)):
        values = {k: 0.0 for k in keys}
        values.update(fixed)
        values.update(zip(names, (float(x) for x in point)))
        if family == "pt2":
            p = PTParams2(*(values[k] for k in keys))
            h = build_h2(p)
            phase = classify2(p, tol * max(1.0, p.gamma ** 2))
            disc, label = repr(float(phase.discriminant)), phase.label
        else:
            p = PTParams3(values["epsilon"], tuple(values[f"gamma{i}"] for i in range(1, 5)),
                          tuple(values[f"mu{i}"] for i in range(1, 5)),
                          values["chi"], values["theta"], values["rho"], values["phi"])
            h = build_h3(p, allow_degenerate=True)
            disc, label = "", _spectrum_label(h, eigenvalues(h))
        vals = eigenvalues(h)
        row = [repr(values[k]) for k in keys]
        row += [disc, label, repr(float(np.max(np.abs(vals.imag)))),
                repr(check_pt_symmetry(h, p.parity()))]
        yield row


def cmd_scan(args):
    tol = _tol(args)
    keys = PT2_KEYS if args.family == "pt2" else PT3_KEYS
    if args.config:
        cfg = load(args.config)
        family = cfg.get("family", args.family)
        keys = PT2_KEYS if family == "pt2" else PT3_KEYS
        fixed = {k: float(v) for k, v in cfg.get("fixed", {}).items()}
        bad = set(fixed) - set(keys)
        if bad:
            raise UsageError(f"unknown fixed parameters {sorted(bad)}")
        sweeps = _parse_sweep([f"{k}:{v['min']}:{v['max']}:{v['steps']}"
                               for k, v in cfg.get("swept", {}).items()], keys)
        args.family = family
    else:
        fixed = _parse_assign(args.fixed, keys)
        sweeps = _parse_sweep(args.sweep, keys)
    points = int(np.prod([len(s[1]) for s in sweeps])) if sweeps else 1
    if points > GRID_CAP:
        raise UsageError(f"grid has {points} points, cap is {GRID_CAP}")
    buf = _io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(list(keys) + list(SCAN_TAIL))
    for row in scan_rows(args.family, fixed, sweeps, tol):
        writer.writerow(row)
    if args.output == "-":
        sys.stdout.write(buf.getvalue())
    else:
        with open(args.output, "w", newline="") as fh:
            fh.write(buf.getvalue())
    return EXIT_OK


def cmd_selftest(args):
    results = acceptance.run_all(seed=args.seed, quick=args.quick,
                                 echo=lambda line: print(line, flush=True))
    failed = [r for r in results if not r.passed]
    print(f"{len(results) - len(failed)}/{len(results)} criteria passed")
    return EXIT_SELFTEST if failed else EXIT_OK


def cmd_basis(args):
    text = structure_constants_csv(build_basis(args.n))
    if args.output == "-":
        sys.stdout.write(text)
    else:
        with open(args.output, "w", newline="") as fh:
            fh.write(text)
    return EXIT_OK


# -- parser ----------------------------------------------------------------

SCAN_HELP = f"""\
CSV columns, in this order: the family's parameters
(pt2: {', '.join(PT2_KEYS)};
 pt3: {', '.join(PT3_KEYS)}),
then {', '.join(SCAN_TAIL)}.  discriminant is gamma^2 - mu^2 - nu^2 for pt2
and empty for pt3; label is unbroken, broken or exceptional; pt_residual is
|P H^dag P - H|_F.  Rows follow the grid order (last --sweep varies fastest).
"""


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="ptmat", description="PT-symmetric matrix Hamiltonian toolkit",
                                 allow_abbrev=False)
    sub = ap.add_subparsers(dest="command", required=True)

    def add(name, **kw):
        return sub.add_parser(name, allow_abbrev=False, **kw)

    def common(p, out=True):
        p.add_argument("--tol", type=_finite, default=None,
                       help="tolerance (default: PTMAT_TOL or the command's default)")
        if out:
            p.add_argument("--output", "-o", default="-", help="output path, '-' for stdout")

    p = add("parity", help="build a parity matrix")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--trivial", action="store_true", help="P = sign * identity")
    p.add_argument("--sign", type=int, choices=(1, -1), default=1)
    for name in ("chi", "theta", "rho", "phi"):
        p.add_argument(f"--{name}", type=_finite)
    common(p)
    p.set_defaults(func=cmd_parity)

    p = add("build", help="build a PT-symmetric Hamiltonian from parameters")
    p.add_argument("--family", choices=("pt2", "pt3"), required=True)
    p.add_argument("--params", help="JSON file with the parameters instead of flags")
    for name in ("epsilon", "gamma", "mu", "nu", "chi", "theta", "rho", "phi"):
        p.add_argument(f"--{name}", type=_finite)
    p.add_argument("--gammas", type=_floats, help="pt3: four comma-separated values")
    p.add_argument("--mus", type=_floats, help="pt3: four comma-separated values")
    common(p)
    p.set_defaults(func=cmd_build)

    for name, func, hlp in (("verify", cmd_verify, "check P H^dag P = H"),
                            ("cpt", cmd_cpt, "C operator, metric, eta and Hermitian partner")):
        p = add(name, help=hlp)
        if name == "cpt":
            p.add_argument("action", nargs="?", choices=("build",), default="build")
        p.add_argument("--hamiltonian", "-H", required=True, help="matrix JSON, '-' for stdin")
        p.add_argument("--parity", "-P", required=True, help="parity JSON")
        common(p)
        p.set_defaults(func=func)

    p = add("reduce", help="named special cases and external parameter maps")
    p.add_argument("--case", required=True, choices=("hermitian", "bbj", "bmw", "mostafazadeh", "mo"))
    for name in ("epsilon", "gamma", "mu", "theta", "phi", "r", "s", "t", "u", "q", "E"):
        p.add_argument(f"--{name}", type=_finite)
    p.add_argument("--phi-ext", dest="phi_ext", type=_finite)
    p.add_argument("--Theta", type=_complex, help="complex, e.g. 0.3+0.1j")
    p.add_argument("--Phi", type=_complex, help="complex, e.g. 0.2-0.4j")
    common(p)
    p.set_defaults(func=cmd_reduce)

    p = add("fit", help="recover 2x2 parameters from a matrix with real spectrum")
    p.add_argument("--hamiltonian", "-H", required=True)
    common(p)
    p.set_defaults(func=cmd_fit)

    p = add("search", help="numerically find a 3x3 parity for a matrix")
    p.add_argument("--hamiltonian", "-H", required=True)
    p.add_argument("--restarts", type=int, default=50)
    p.add_argument("--seed", type=int, default=0)
    common(p)
    p.set_defaults(func=cmd_search)

    p = add("scan", help="phase-diagram sweep to CSV", epilog=SCAN_HELP,
                       formatter_class=argparse.RawDescriptionHelpFormatter)
    p.add_argument("--family", choices=("pt2", "pt3"), default="pt2")
    p.add_argument("--config", help="JSON {family, fixed: {name: value}, swept: {name: {min, max, steps}}}")
    p.add_argument("--fixed", action="append", help="name=value[,name=value...]")
    p.add_argument("--sweep", action="append", help="NAME:MIN:MAX:STEPS (repeatable, at most 3)")
    p.add_argument("--seed", type=int, default=0, help="accepted for reproducibility records; scans are deterministic")
    common(p)
    p.set_defaults(func=cmd_scan)

    p = add("selftest", help="run the acceptance suite")
    p.add_argument("--quick", action="store_true", help="one tenth of the samples")
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_selftest)

    p = add("basis", help="structure constants of the generalized Gell-Mann basis as CSV")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--output", "-o", default="-")
    p.set_defaults(func=cmd_basis)
    return ap


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (UsageError, MatrixFormatError, DimensionMismatch, DimensionOutOfRange,
            json.JSONDecodeError, OSError, KeyError, TypeError) as exc:
        print(f"ptmat {args.command}: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except PTMatError as exc:
        print(f"ptmat {args.command}: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_VERIFY
    except ValueError as exc:
        print(f"ptmat {args.command}: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
