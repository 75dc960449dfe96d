"""Command-line front end.

Subcommands:
  figure    curve table of one of the seven worked examples (CSV + JSON sidecar)
  partner   partner potential for user parameters (CSV)
  spectrum  analytic, numerical and partner spectra with the law verdict
  verify    run a verification suite, JSON lines out, exit 0 iff all pass

Complex parameters use the literal syntax ``RE+IMi`` (e.g. ``6.1-5i``).
"""

from __future__ import annotations

import argparse
import csv
import json
import sys
import warnings
from pathlib import Path

import numpy as np

from . import intertwine1, intertwine2, model, numspec, presets, verify
from .errors import IsospecError
from .model import Modification, ModelParams

POLE_LIMIT = 1e6


def parse_complex(text: str) -> complex:
    """``"6.1-5i"`` -> ``(6.1-5j)``; plain reals and pure imaginaries are accepted."""
    t = text.strip().replace(" ", "")
    if not t:
        raise argparse.ArgumentTypeError("empty number")
    if t.endswith("i"):
        try:
            return complex(t[:-1] + "j")
        except ValueError:
            pass
    else:
        try:
            return complex(float(t))
        except ValueError:
            pass
    raise argparse.ArgumentTypeError(f"cannot parse {text!r}; use RE+IMi, e.g. 6.1-5i")


def parse_range(text: str) -> tuple[float, float]:
    try:
        lo, hi = (float(v) for v in text.split(":"))
    except ValueError:
        raise argparse.ArgumentTypeError(f"range must look like LO:HI, got {text!r}") from None
    if not lo < hi:
        raise argparse.ArgumentTypeError("range needs LO < HI")
    return lo, hi


def _plain(value):
    """JSON-friendly version of numbers, arrays and enums."""
    if isinstance(value, complex):
        return value.real if value.imag == 0 else {"re": value.real, "im": value.imag}
    if isinstance(value, np.generic):
        return _plain(value.item())
    if isinstance(value, np.ndarray):
        return [_plain(v) for v in value.tolist()]
    if isinstance(value, (list, tuple)):
        return [_plain(v) for v in value]
    if isinstance(value, dict):
        return {k: _plain(v) for k, v in value.items()}
    if hasattr(value, "value") and not isinstance(value, (int, float, str)):
        return value.value
    return value


def write_csv(columns: dict[str, np.ndarray], handle) -> None:
    writer = csv.writer(handle, lineterminator="\r\n")
    names = list(columns)
    writer.writerow(names)
    data = np.column_stack([np.real(columns[n]) for n in names])
    for row in data:
        writer.writerow([f"{v:.12e}" for v in row])


def _emit_csv(columns, out: str | None) -> None:
    if out is None:
        write_csv(columns, sys.stdout)
        return
    with open(out, "w", newline="", encoding="utf-8") as fh:
        write_csv(columns, fh)


def _pole_scan(columns) -> float:
    return float(max(np.max(np.abs(columns[n])) for n in columns if n.startswith("Vbar")))


# --- figure --------------------------------------------------------------------


def cmd_figure(args) -> int:
    pre = presets.get(args.fig)
    nu = args.nu if args.nu is not None else None
    cols = pre.curves(nu=nu)
    _emit_csv(cols, args.out)
    peak = _pole_scan(cols)
    side = {
        "figure": pre.id,
        "params": _params_dict(pre.params),
        "order": pre.order,
        "modification": pre.modification,
        "x_range": list(pre.x_range),
        "rows": len(cols["x"]),
        "columns": list(cols),
        "max_abs_vbar": peak,
        "pole_free": peak <= POLE_LIMIT,
        "max_imag_vbar": pre.max_imag_vbar(),
        "notes": pre.notes,
    }
    if pre.order == 2 and pre.params.is_real:
        side["nu2"] = nu if nu is not None else pre.nu2
    if args.out is not None:
        Path(args.out).with_suffix(".json").write_text(json.dumps(_plain(side), indent=2) + "\n")
    else:
        print(json.dumps(_plain(side)), file=sys.stderr)
    return 0 if side["pole_free"] else 1


def _params_dict(p: ModelParams) -> dict:
    return {k: _plain(getattr(p, k)) for k in ("a", "b", "c", "p", "lam", "alpha", "beta", "nu")}


# --- partner -------------------------------------------------------------------

_MODES = {
    1: {"delete": Modification.DELETE_GROUND, "iso": Modification.STRICT_ISO, "create": Modification.CREATE_BELOW_GROUND},
    2: {
        "delete": intertwine2.Modification2.DELETE_TWO,
        "iso": intertwine2.Modification2.STRICT_ISO,
        "create": intertwine2.Modification2.CREATE_TWO,
    },
}


def _params_from(args, nu: float = 0.0) -> ModelParams:
    return ModelParams(args.a, args.b, args.c, p=args.p, lam=args.lam, alpha=args.alpha, beta=args.beta, nu=nu)


def build_partner(args):
    """First order: seed at ``nu``.  Second order: seeds at 0 and ``nu`` (real) or one complex seed."""
    if args.order == 1:
        return intertwine1.first_order_partner(model.seed(_params_from(args, args.nu)))
    params = _params_from(args)
    if params.is_real:
        return intertwine2.model_pair(params, args.nu)
    return intertwine2.complex_partner(params.replace(nu=args.nu))


def _check_mode(args, partner) -> None:
    if args.mode is None:
        return
    want = _MODES[args.order][args.mode]
    if partner.modification is not want:
        raise IsospecError(f"requested {want.value}, but these parameters give {partner.modification.value}")


def cmd_partner(args) -> int:
    partner = build_partner(args)
    _check_mode(args, partner)
    lo, hi = args.range
    x = np.linspace(lo, hi, args.samples)
    params = partner.seed.params if args.order == 1 else partner.seed1.params
    v = model.potential(params.replace(nu=0.0), x)
    if args.order == 1:
        vbar = partner.partner_potential(x)
    else:
        vbar = np.real(partner.partner_potential_jet(x, 0).value)
    _emit_csv({"x": x, "V": v, "Vbar": vbar}, args.out)
    print(json.dumps({"modification": partner.modification.value}), file=sys.stderr)
    return 0


# --- spectrum ------------------------------------------------------------------


def cmd_spectrum(args) -> int:
    params = _params_from(args)
    k = args.k
    analytic = model.energies(params, k)
    h = intertwine1.model_hamiltonian(params)
    numeric = numspec.converged_spectrum(h.mass, h.potential, k)
    out = {"params": _params_dict(params), "analytic": analytic, "numerical": numeric.to_dict()}
    if args.order:
        partner = build_partner(args)
        _check_mode(args, partner)
        law, inserted = partner.law
        pspec = numspec.converged_spectrum(partner.hamiltonian.mass, partner.partner_hamiltonian.potential, k)
        ref = numspec.Spectrum.analytic(model.energies(params, k + 2))
        report = numspec.verify_isospectral(ref, pspec, law, args.tol, inserted)
        out.update(
            modification=partner.modification.value,
            law=law.value,
            inserted=list(inserted),
            partner=pspec.to_dict(),
            law_passed=report.passed,
            law_report=report.to_dict(),
        )
    print(_spectrum_table(out))
    if args.json:
        Path(args.json).write_text(json.dumps(_plain(out), indent=2) + "\n")
    return 0 if out.get("law_passed", True) else 1


def _spectrum_table(out: dict) -> str:
    lines = []
    num = out["numerical"]["eigenvalues"]
    part = out.get("partner", {}).get("eigenvalues")
    head = f"{'n':>3}  {'analytic':>16}  {'numerical':>16}"
    if part is not None:
        head += f"  {'partner':>16}"
    lines.append(head)
    for i, e in enumerate(out["analytic"]):
        row = f"{i:>3}  {e:>16.10f}  {num[i]:>16.10f}"
        if part is not None:
            row += f"  {part[i]:>16.10f}"
        lines.append(row)
    if part is not None:
        lines.append(f"modification {out['modification']}, law {out['law']}: {'PASS' if out['law_passed'] else 'FAIL'}")
    return "\n".join(lines)


# --- verify --------------------------------------------------------------------


def cmd_verify(args) -> int:
    reports = verify.run(args.suite, args.tol_scale)
    lines = [r.to_json() for r in reports]
    if args.json:
        Path(args.json).write_text("\n".join(lines) + "\n")
    else:
        for line in lines:
            print(line)
    for r in reports:
        print(r.summary(), file=sys.stderr)
    return 0 if all(r.passed for r in reports) else 1


# --- parser --------------------------------------------------------------------


def _add_model_args(p: argparse.ArgumentParser) -> None:
    p.add_argument("--a", type=parse_complex, required=True)
    p.add_argument("--b", type=parse_complex, required=True)
    p.add_argument("--c", type=parse_complex, required=True)
    p.add_argument("--p", type=float, default=1.0, help="mass scale p (default 1)")
    p.add_argument("--lam", type=float, default=1.0, help="mass scale lambda (default 1)")
    p.add_argument("--alpha", type=parse_complex, default=1.0)
    p.add_argument("--beta", type=parse_complex, default=0.0)
    p.add_argument("--nu", type=float, default=0.0, help="seed shift (second seed for real order 2)")
    p.add_argument("--mode", choices=("delete", "iso", "create"), help="require this spectral modification")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="pdm-isospec", description="Isospectral partners of position-dependent-mass Hamiltonians")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("figure", help="curve table of a worked example")
    p.add_argument("fig", choices=tuple(presets.PRESETS))
    p.add_argument("--out", help="CSV path (sidecar JSON next to it); stdout if omitted")
    p.add_argument("--nu", type=float, help="override the second-seed shift (fig4-fig6)")
    p.set_defaults(func=cmd_figure)

    p = sub.add_parser("partner", help="partner potential on a grid")
    p.add_argument("--order", type=int, choices=(1, 2), required=True)
    _add_model_args(p)
    p.add_argument("--range", type=parse_range, default=(-5.0, 5.0), help="LO:HI (default -5:5)")
    p.add_argument("--samples", type=int, default=presets.CURVE_ROWS)
    p.add_argument("--out", help="CSV path; stdout if omitted")
    p.set_defaults(func=cmd_partner)

    p = sub.add_parser("spectrum", help="analytic, numerical and partner spectra")
    p.add_argument("--order", type=int, choices=(1, 2), help="also build and check a partner of this order")
    _add_model_args(p)
    p.add_argument("-k", type=int, default=4, help="number of levels")
    p.add_argument("--tol", type=float, default=verify.SPECTRUM_TOL)
    p.add_argument("--json", help="write the full record to this file")
    p.set_defaults(func=cmd_spectrum)

    p = sub.add_parser("verify", help="run a verification suite")
    p.add_argument("--suite", choices=verify.SUITES, default="all")
    p.add_argument("--tol-scale", type=float, default=1.0, help="multiply every tolerance by this factor")
    p.add_argument("--json", help="write JSON lines here instead of stdout")
    p.set_defaults(func=cmd_verify)
    return parser


def _join_negative_values(argv: list[str]) -> list[str]:
    """``--range -1:1`` -> ``--range=-1:1`` so argparse does not read the value as a flag."""
    out: list[str] = []
    i = 0
    while i < len(argv):
        tok = argv[i]
        nxt = argv[i + 1] if i + 1 < len(argv) else None
        if tok.startswith("--") and "=" not in tok and nxt is not None and len(nxt) > 1 and nxt[0] == "-" and (nxt[1].isdigit() or nxt[1] == "."):
            out.append(f"{tok}={nxt}")
            i += 2
            continue
        out.append(tok)
        i += 1
    return out


def main(argv: list[str] | None = None) -> int:
    argv = sys.argv[1:] if argv is None else list(argv)
    args = build_parser().parse_args(_join_negative_values(argv))
    try:
        with warnings.catch_warnings():
            warnings.simplefilter("ignore", RuntimeWarning)
            return args.func(args)
    except (IsospecError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
