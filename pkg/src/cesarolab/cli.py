"""Command-line front end.

Exit codes: 0 success, 1 a consistency or identity check failed, 2 usage error.
"""
from __future__ import annotations

import argparse
import csv
import json
import sys
from fractions import Fraction

import numpy as np

from . import criteria, dynamics, sections, spectra
from .weights import GalleryError, gallery, gallery_summary, load_definition
from .weightlang import WeightLangError

CAVEAT = "numerical evidence at finite budget"


class UsageError(Exception):
    pass


# ------------------------------------------------------------- parsing

def parse_scalar(text: str):
    """``"re,im"``, ``"p/q"`` or a plain number; rationals stay exact."""
    text = text.strip()
    try:
        if "," in text:
            re_s, im_s = text.split(",", 1)
            re_v, im_v = _real(re_s), _real(im_s)
            if isinstance(re_v, Fraction) and isinstance(im_v, Fraction):
                return (re_v, im_v)
            return complex(float(re_v), float(im_v))
        return _real(text)
    except (ValueError, ZeroDivisionError) as exc:
        raise UsageError(f"cannot parse complex number {text!r}: {exc}") from exc


def _real(text):
    text = text.strip()
    if "/" in text or text.lstrip("+-").isdigit():
        return Fraction(text)
    return float(text)


def _as_complex(v):
    if isinstance(v, tuple):
        return complex(float(v[0]), float(v[1]))
    return complex(float(v) if isinstance(v, Fraction) else v)


def parse_grid(text: str):
    parts = text.split(",")
    if len(parts) not in (1, 2):
        raise UsageError(f"--grid expects re0:re1:step[,im0:im1:step], got {text!r}")
    axes = []
    for p in parts:
        try:
            a, b, h = (float(t) for t in p.split(":"))
        except ValueError as exc:
            raise UsageError(f"bad grid axis {p!r}") from exc
        if h <= 0 or b < a:
            raise UsageError(f"bad grid axis {p!r}: need start <= stop and step > 0")
        count = int(round((b - a) / h)) + 1
        axes.append([round(a + k * h, 12) for k in range(count)])
    if len(axes) == 1:
        axes.append([0.0])
    return axes


def _params(items):
    out = {}
    for item in items or []:
        if "=" not in item:
            raise UsageError(f"--param expects key=value, got {item!r}")
        k, v = item.split("=", 1)
        try:
            out[k] = float(v)
        except ValueError:
            out[k] = v
    return out


def _family(args):
    if args.definition and args.space:
        raise UsageError("give either a gallery key or --def FILE, not both")
    if args.definition:
        return load_definition(args.definition)
    if not args.space:
        raise UsageError("a gallery key or --def FILE is required")
    return gallery(args.space, _params(args.param))


def _budget(args):
    try:
        return criteria.Budget(args.imax, args.nmax, args.mmax)
    except criteria.BudgetError as exc:
        raise UsageError(str(exc)) from exc


def _dump(obj, out):
    out.write(json.dumps(obj, sort_keys=True, indent=2, default=_json_default) + "\n")


def _json_default(o):
    if isinstance(o, Fraction):
        return str(o)
    if isinstance(o, complex):
        return [o.real, o.imag]
    if isinstance(o, (np.floating, np.integer)):
        return o.item()
    raise TypeError(type(o))


# ------------------------------------------------------------ commands

def cmd_gallery(args, out):
    rows = gallery_summary()
    if args.json:
        _dump({"gallery": [{"key": k, "description": d} for k, d in rows]}, out)
    else:
        for k, d in rows:
            out.write(f"{k:16s} {d}\n")
    return 0


def cmd_classify(args, out):
    fam = _family(args)
    cls = criteria.classify(fam, _budget(args))
    mismatches = cls.declared_mismatches(fam.declared)
    if args.json:
        d = cls.to_dict()
        d["declared_mismatches"] = [list(m) for m in mismatches]
        _dump(d, out)
    else:
        out.write(f"{fam.name}  budget {cls.budget.as_dict()}  ({CAVEAT})\n")
        for k, v in cls.aggregates.items():
            out.write(f"  {k:20s} {v}\n")
        for v in cls.verdicts.values():
            out.write(f"  {v.summary()}\n")
        for issue in cls.inconsistencies:
            out.write(f"  INCONSISTENT: {issue}\n")
        for key, want, got in mismatches:
            out.write(f"  declared {key}={want} but got {got}\n")
    return 1 if cls.inconsistencies else 0


def cmd_spectrum(args, out):
    fam = _family(args)
    budget = _budget(args)
    cls = criteria.classify(fam, budget)
    try:
        desc = spectra.predict(cls)
    except spectra.InsufficientClassification as exc:
        sys.stderr.write(f"{exc}\n")
        return 1
    report = desc.to_dict()
    report.update({"family": fam.name, "budget": budget.as_dict(), "caveat": CAVEAT})
    if args.lam is not None:
        lam = parse_scalar(args.lam)
        report["query"] = {"lambda": args.lam, "membership": spectra.member(desc, lam)}
    if args.grid:
        re_axis, im_axis = parse_grid(args.grid)
        rows = []
        for im in im_axis:
            for re in re_axis:
                lam = complex(re, im)
                trend = ""
                if args.evidence:
                    trend = _evidence_label(fam, lam, args)
                rows.append((re, im, spectra.member(desc, lam), trend))
        if args.csv:
            w = csv.writer(out, lineterminator="\n")
            w.writerow(["re", "im", "membership", "evidence_trend"])
            w.writerows(rows)
            return 0
        report["grid"] = [list(r) for r in rows]
    _dump(report, out)
    return 0


def _evidence_label(fam, lam, args):
    if lam == 0 or spectra.in_sigma(lam):
        return "singular"
    try:
        return spectra.row_sum_evidence(fam, lam, 1, 2, args.N or 2 ** 13).classification
    except (sections.SingularParameterError, ValueError):
        return "singular"


def cmd_resolvent(args, out):
    if args.mu is None:
        raise UsageError("--mu is required")
    mu = _as_complex(parse_scalar(args.mu))
    N = args.N or 8
    try:
        R = sections.resolvent(mu, N)
    except sections.SingularParameterError as exc:
        sys.stderr.write(f"{exc}\n")
        return 2
    residual = sections.shifted_product_residual(mu, R)
    if args.csv:
        out.write(R.to_csv())
        return 0
    obj = R.to_json_obj()
    obj["residual_max"] = residual
    obj["mu"] = [mu.real, mu.imag]
    D, E = sections.split(mu, N)
    obj["split_scaled_error"] = sections.reconstruct(mu, D, E).max_scaled_diff(R)
    obj["notes"] = ["off-diagonal part E includes the j = 1 column (entries e_i1), "
                    "fixed by requiring D - E/mu^2 to reproduce the resolvent"]
    if args.fam_evidence:
        fam = _family(args)
        t = spectra.row_sum_evidence(fam, mu, 1, 2, max(256, 1 << (max(N, 256) - 1).bit_length()))
        obj["row_sum_evidence"] = t.to_dict()
    _dump(obj, out)
    return 0


def _identity_checks(N):
    checks = {}
    checks["inverse*cesaro=I"] = (sections.inverse(N) @ sections.cesaro(N)).is_identity()
    D = sections.delta(N)
    checks["delta^2=I"] = (D @ D).is_identity()
    ddd = D @ sections.diag_reciprocal(N) @ D
    checks["delta*diag*delta=cesaro"] = ddd.entries.tolist() == sections.cesaro(N).entries.tolist()
    comp = sections.diff_op(N)
    basis_ok = True
    for k in range(N):
        e = [0] * N
        e[k] = 1
        basis_ok &= comp.apply(e) == sections.inverse_formula(e)
    checks["(I-S)DS=inverse formula"] = basis_ok
    checks["range inverse T*B=B*T=I"] = dynamics.range_inverse_check(max(N, 2)).ok
    checks["C1=1"] = dynamics.fixed_point_exact(N)
    for s in range(1, min(N, 12) + 1):
        u = sections.eig_dual(s)
        checks.setdefault("dual eigenvectors", True)
        checks["dual eigenvectors"] &= sections.dual_apply(u) == [x / s for x in u.entries]
    C = sections.cesaro(N)
    for m in range(1, min(N, 8) + 1):
        x = sections.eig_direct(m, N)
        checks.setdefault("direct eigenvectors", True)
        checks["direct eigenvectors"] &= C.apply(x.entries) == [v / m for v in x.entries]
    return checks


def cmd_verify(args, out):
    what = args.what
    if what == "identities":
        N = args.N or 20
        checks = _identity_checks(N)
        ok = all(checks.values())
        if args.json:
            _dump({"N": N, "checks": checks, "ok": ok}, out)
        else:
            for k, v in checks.items():
                out.write(f"{'PASS' if v else 'FAIL'}  {k}  (N={N}, exact)\n")
        return 0 if ok else 1
    if what == "gallery":
        budget = _budget(args)
        bad = {}
        report = {}
        for key, _ in gallery_summary():
            fam = gallery(key, {"s": 3} if key == "example-3.4ii" else {})
            cls = criteria.classify(fam, budget)
            mism = cls.declared_mismatches(fam.declared)
            report[key] = {"inconsistencies": cls.inconsistencies,
                           "declared_mismatches": [list(m) for m in mism]}
            if cls.inconsistencies or mism:
                bad[key] = report[key]
        if args.json:
            _dump({"budget": budget.as_dict(), "families": report, "ok": not bad,
                   "caveat": CAVEAT}, out)
        else:
            for key, r in report.items():
                flag = "FAIL" if key in bad else "PASS"
                out.write(f"{flag}  {key}  {r}\n")
        return 1 if bad else 0
    raise UsageError(f"unknown verify target {what!r}")


def cmd_dynamics(args, out):
    fam = _family(args)
    N = args.N or 64
    if args.seed is not None:
        rng = np.random.default_rng(args.seed)
        x = rng.uniform(-1, 1, N) + 1j * rng.uniform(-1, 1, N)
        x /= np.maximum(1.0, np.abs(x))
    else:
        x = np.zeros(N)
        x[0] = 1.0
    n = args.norm_index
    sched = [2 ** k for k in range(4, 12)]
    try:
        rep = dynamics.cesaro_means(fam, n, x, sched)
    except dynamics.TruncationGuardError as exc:
        sys.stderr.write(f"{exc}\n")
        return 2
    if args.json:
        _dump({"family": fam.name, "n": n, "N": N, "seed": args.seed, "k": rep.k_schedule,
               "distances": rep.distances, "norm_ratios": rep.norm_ratios,
               "bound_violations": rep.bound_violations, "halving_ok": rep.halving_ok,
               "eventually_decreasing": rep.eventually_decreasing, "caveat": CAVEAT}, out)
    else:
        w = csv.writer(out, lineterminator="\n")
        w.writerow(["k", "distance", "norm_ratio"])
        for k, d, r in rep.rows():
            w.writerow([k, repr(d), repr(r)])
    return 0


def cmd_eigvec(args, out):
    if (args.m is None) == (args.s is None):
        raise UsageError("give exactly one of --m (direct) or --s (dual)")
    if args.m is not None:
        N = args.N or 16
        v = sections.eig_direct(args.m, N)
        ok = sections.cesaro(N).apply(v.entries) == [x * v.eigenvalue for x in v.entries]
    else:
        v = sections.eig_dual(args.s)
        ok = sections.dual_apply(v) == [x * v.eigenvalue for x in v.entries]
    obj = {"side": v.side, "eigenvalue": str(v.eigenvalue),
           "entries": [str(x) for x in v.entries], "verified_exactly": ok}
    if args.json:
        _dump(obj, out)
    else:
        out.write(f"{v.side} eigenvector for {v.eigenvalue}: {', '.join(obj['entries'])}\n")
        out.write(f"verified exactly: {ok}\n")
    return 0 if ok else 1


# -------------------------------------------------------------- parser

def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="cesarolab",
                                description="Cesàro operator laboratory on weighted sequence spaces.")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp, space=True):
        if space:
            sp.add_argument("space", nargs="?", help="gallery key")
            sp.add_argument("--def", dest="definition", metavar="FILE",
                            help="JSON weight definition instead of a gallery key")
            sp.add_argument("--param", action="append", metavar="KEY=VALUE",
                            help="gallery parameter (repeatable)")
        sp.add_argument("--imax", type=int, default=2 ** 14)
        sp.add_argument("--nmax", type=int, default=4)
        sp.add_argument("--mmax", type=int, default=8)
        sp.add_argument("--N", type=int, default=None)
        sp.add_argument("--json", action="store_true")
        sp.add_argument("--csv", action="store_true")
        sp.add_argument("--seed", type=int, default=None)

    sp = sub.add_parser("gallery", help="list built-in weight families")
    common(sp, space=False)
    sp.set_defaults(func=cmd_gallery)

    sp = sub.add_parser("classify", help="run every condition on a family")
    common(sp)
    sp.set_defaults(func=cmd_classify)

    sp = sub.add_parser("spectrum", help="predict the spectrum and query membership")
    common(sp)
    sp.add_argument("--lambda", dest="lam", default=None, help='"re,im" or "p/q"')
    sp.add_argument("--grid", default=None, help="re0:re1:step[,im0:im1:step]")
    sp.add_argument("--evidence", action="store_true", help="add row-sum evidence per grid point")
    sp.set_defaults(func=cmd_spectrum)

    sp = sub.add_parser("resolvent", help="finite section of the resolvent")
    common(sp)
    sp.add_argument("--mu", default=None, help='"re,im" or "p/q"')
    sp.add_argument("--evidence", dest="fam_evidence", action="store_true",
                    help="also report row-sum evidence for the given family at mu")
    sp.set_defaults(func=cmd_resolvent)

    sp = sub.add_parser("verify", help="exact identity checks or gallery regression")
    sp.add_argument("what", choices=["identities", "gallery"])
    common(sp, space=False)
    sp.set_defaults(func=cmd_verify)

    sp = sub.add_parser("dynamics", help="Cesàro means of iterates, CSV of distances")
    common(sp)
    sp.add_argument("--norm-index", type=int, default=1, help="weight index n of the norm q_n")
    sp.set_defaults(func=cmd_dynamics)

    sp = sub.add_parser("eigvec", help="exact eigenvectors of C or its dual")
    common(sp, space=False)
    sp.add_argument("--m", type=int, default=None)
    sp.add_argument("--s", type=int, default=None)
    sp.set_defaults(func=cmd_eigvec)
    return p


_VALUE_FLAGS = ("--grid", "--mu", "--lambda")


def _glue_negative_values(argv):
    # "--grid -0.2:1.2:0.01" would otherwise read the value as an option
    out, k = [], 0
    while k < len(argv):
        tok = argv[k]
        if tok in _VALUE_FLAGS and k + 1 < len(argv) and argv[k + 1].startswith("-"):
            out.append(f"{tok}={argv[k + 1]}")
            k += 2
            continue
        out.append(tok)
        k += 1
    return out


def run(argv=None, out=None) -> int:
    out = out or sys.stdout
    parser = build_parser()
    argv = _glue_negative_values(list(sys.argv[1:] if argv is None else argv))
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code) if exc.code is not None else 0
    try:
        return args.func(args, out)
    except (UsageError, GalleryError, WeightLangError, criteria.BudgetError, OSError) as exc:
        sys.stderr.write(f"cesarolab {args.command}: {exc}\n")
        return 2


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()
