"""``diffbrauer`` command line: subcommand dispatch and reporting.

Every run produces a report {operation, inputs, result, certificates,
window, config}; ``--json`` prints it as sorted, indented JSON so identical
invocations give byte-identical output.
"""
from __future__ import annotations

import argparse
import json
import logging
import sys
from dataclasses import asdict, dataclass

from .. import adelic, bm, brauer_local, cartier, witt
from ..ff import FieldError, parse_field
from ..poly import Poly, RationalFunction
from ..series import DiffForm, LaurentSeries, NotExact, PrecisionLoss, format_series
from .evaluate import (InputError, MPolyDomain, RationalDomain, SeriesDomain, as_form,
                       as_scalar, eval_text)
from .parser import ParseError

logger = logging.getLogger("diffbrauer.cli")

DEFAULT_FIELD = "gf(2,1)"
DEFAULT_PREC = 64
DEFAULT_SEED = 20240611


@dataclass(frozen=True)
class Config:
    field: str = DEFAULT_FIELD
    prec: int = DEFAULT_PREC
    level: int = 1
    witt_cap: int = 3
    trials: int = adelic.DEFAULT_TRIAL_BOUND
    output: str = "human"
    seed: int = DEFAULT_SEED


class DomainFailure(Exception):
    """Wraps a mathematical failure for exit code 1."""

    def __init__(self, kind: str, message: str, **extra):
        super().__init__(message)
        self.kind, self.extra = kind, extra


# --- formatting -----------------------------------------------------------------

def show_series(s: LaurentSeries, var="t") -> str:
    return format_series(s, var)


def show_form(form: DiffForm, var="t") -> str:
    c = form.coeff
    body = show_series(c, var) if isinstance(c, LaurentSeries) else str(c)
    return f"({body}) d{var}"


def show_witt(v: witt.WittVector, var="t") -> list:
    return [show_series(e, var) if isinstance(e, LaurentSeries) else str(e) for e in v]


def show_place(v: adelic.Place) -> str:
    return "inf" if v.is_infinite else str(v.pi)


# --- input helpers --------------------------------------------------------------

def _field(cfg: Config):
    return parse_field(cfg.field)


def _series_dom(cfg: Config, field=None):
    return SeriesDomain(field or _field(cfg), "t", cfg.prec)


def _series_form(text: str, cfg: Config) -> DiffForm:
    dom = _series_dom(cfg)
    coeff = as_form(eval_text(text, dom), "t")
    return DiffForm(coeff)


def _series(text: str, cfg: Config) -> LaurentSeries:
    return as_scalar(eval_text(text, _series_dom(cfg)))


def _witt_entries(text: str, cfg: Config) -> witt.WittVector:
    parts = [p for p in text.split(";")]
    return witt.WittVector([_series(p, cfg) for p in parts])


def _rational_form(text: str, field) -> RationalFunction:
    coeff = as_form(eval_text(text, RationalDomain(field)), "t")
    return coeff


def _place(text: str, field) -> adelic.Place:
    text = text.strip()
    if text in ("inf", "infinity", "oo"):
        return adelic.Place.infinity(field)
    r = as_scalar(eval_text(text, RationalDomain(field)))
    if not r.is_polynomial():
        raise InputError(f"place {text!r} must be a monic irreducible polynomial in t")
    try:
        return adelic.Place.finite(r.num)
    except adelic.PlaceError as exc:
        raise InputError(str(exc)) from exc


def _local_dom(v: adelic.Place, prec):
    fv = v.residue_field
    base = v.base
    names = {}
    if v.is_infinite:
        names["t"] = LaurentSeries.monomial(fv, -1, 1)
        var = "u"
        names["s"] = LaurentSeries.t(fv)
    else:
        theta = v.theta
        names["theta"] = LaurentSeries.monomial(fv, 0, theta)
        names["t"] = LaurentSeries.t(fv) + theta
        var = "s"
    return SeriesDomain(fv, var, prec, names, gen_field=base)


def _local_form(text: str, v: adelic.Place, prec) -> DiffForm:
    dom = _local_dom(v, prec)
    return DiffForm(as_form(eval_text(text, dom), dom.var))


def _load_json(path: str) -> dict:
    try:
        with open(path, encoding="utf-8") as fh:
            return json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise InputError(f"cannot read {path}: {exc}") from exc


def _trial_list(text: str | None, field) -> list:
    if not text:
        return []
    return [as_scalar(eval_text(p, RationalDomain(field))) for p in text.split(";") if p.strip()]


# --- commands -------------------------------------------------------------------

def cmd_cartier(args, cfg):
    form = _series_form(args.form, cfg)
    out = cartier.cartier(form) if args.action == "apply" else cartier.cartier_inverse(form)
    return {"form": show_form(out)}, {}, out.prec


def cmd_bn(args, cfg):
    form = _series_form(args.form, cfg)
    n = cfg.level
    if args.action == "member":
        res = cartier.bn_member(form, n)
        img = cartier.cartier_power(form, n)
        return ({"member": res.value, "level": n},
                {"cartier_image": show_form(img), "certified_below": res.window}, res.window)
    dec = cartier.bn_decompose(form, n)
    ok = dec.recompose() == form
    return ({"witt_part": show_witt(dec.witt_part), "h": show_series(dec.h), "level": n},
            {"recomposes": ok}, form.prec)


def cmd_witt(args, cfg):
    if args.action == "invert-dn":
        if not args.form:
            raise InputError("witt invert-dn needs --form")
        form = _series_form(args.form, cfg)
        vec = witt.invert_dn(form, cfg.level)
        back = witt.d_n(vec)
        return ({"witt": show_witt(vec), "level": cfg.level},
                {"dn_roundtrip": back == form}, form.prec)
    if not args.a:
        raise InputError(f"witt {args.action} needs --a")
    a = _witt_entries(args.a, cfg)
    if a.n > min(cfg.witt_cap, witt.max_length(a.p)):
        raise InputError(f"Witt length {a.n} exceeds the cap")
    if args.action == "dn":
        out = witt.d_n(a)
        return {"form": show_form(out)}, {}, out.prec
    if not args.b:
        raise InputError(f"witt {args.action} needs --b")
    b = _witt_entries(args.b, cfg)
    out = witt.witt_add(a, b) if args.action == "add" else witt.witt_mul(a, b)
    precs = [e.prec for e in out if e.prec is not None]
    return {"witt": show_witt(out)}, {}, min(precs) if precs else None


def cmd_brauer(args, cfg):
    if args.action == "inv":
        form = _series_form(args.form, cfg)
        inv = brauer_local.local_invariant(form)
        from ..series import residue

        return ({"invariant": inv.value},
                {"residue": str(residue(form)), "trace": inv.value}, form.prec)
    if args.action == "solve-1mc":
        form = _series_form(args.form, cfg)
        sol = brauer_local.solve_one_minus_c(form)
        inv = brauer_local.local_invariant(form)
        if sol is None:
            return ({"solution": None, "invariant": inv.value},
                    {"reason": "invariant is nonzero"}, form.prec)
        img = brauer_local.one_minus_c(sol)
        return ({"solution": show_form(sol), "invariant": inv.value},
                {"image_matches": img == form}, form.prec)
    f = _series(args.f, cfg)
    g = _series(args.g, cfg)
    if args.action == "symbol":
        desc, inv = brauer_local.symbol_to_brauer(f, g)
        return ({"algebra": f"[{show_series(desc.f)}, {show_series(desc.g)})",
                 "invariant": inv.value},
                {"relations": list(desc.relations())}, None)
    pc = brauer_local.pairing_alpha_p(f, g)
    swapped = brauer_local.pairing_alpha_p(g, f)
    alt = brauer_local.same_class(pc.form + swapped.form, DiffForm(LaurentSeries.zero(f.field)))
    return ({"form": show_form(pc.form), "invariant": pc.invariant.value},
            {"alternating": alt}, pc.form.prec)


def cmd_global(args, cfg):
    field = _field(cfg)
    if args.action == "residues":
        f = _rational_form(args.form, field)
        rows = []
        for v in adelic.poles(f) + [adelic.Place.infinity(field)]:
            r = adelic.residue_at(f, v)
            rows.append({"place": show_place(v), "degree": v.degree, "residue": str(r),
                         "rel_trace": str(adelic.rel_trace(r, field))})
        total = adelic.residue_sum(f)
        return {"residues": rows, "sum": str(total)}, {"reciprocity": total.is_zero()}, None
    if not args.adelic:
        raise InputError("global check needs --adelic FILE")
    doc = _load_json(args.adelic)
    if "field" in doc:
        field = parse_field(doc["field"])
    support = {}
    for entry in doc.get("places", []):
        v = _place(str(entry.get("pi", "inf")), field)
        support[v] = _local_form(entry["form"], v, int(entry.get("prec", cfg.prec)))
    default = doc.get("default", 0)
    dflt = None
    if default not in (0, "0", None):
        # either a form "f dt" or its coefficient f
        val = eval_text(str(default), RationalDomain(field))
        dflt = as_form(val, "t") if isinstance(val, dict) else val
    ad = adelic.AdelicForm(field, support, dflt)
    verdict = adelic.tate_global_test(ad, _trial_list(args.mult, field), cfg.trials)
    return _verdict_dict(verdict), {"field": doc.get("field", cfg.field), "trial_bound": cfg.trials,
                                    "trial_bounded": True}, None


def _verdict_dict(v) -> dict:
    out = {"verdict": v.verdict}
    if hasattr(v, "witness"):
        out["witness"] = str(v.witness)
        out["value"] = v.value
    if hasattr(v, "trials"):
        out["trials"] = v.trials
    ev = getattr(v, "evidence", None) or getattr(v, "reconstruction", None)
    if ev is not None:
        out["reconstruction"] = {
            "form": None if ev.form is None else f"({ev.form}) dt",
            "place": None if ev.place is None else show_place(ev.place),
            "validated": [[("default" if pl is None else show_place(pl)), ok]
                          for pl, ok in ev.validated],
        }
    if getattr(v, "form", None) is not None and ev is None:
        out["form"] = f"({v.form}) dt"
    if hasattr(v, "reason"):
        out["reason"] = v.reason
    if getattr(v, "spot_checks", None):
        out["spot_checks"] = [[show_place(pl), ok] for pl, ok in v.spot_checks]
    return out


def _load_bm(path: str, cfg: Config):
    doc = _load_json(path)
    field = parse_field(doc.get("field", cfg.field))
    patch_doc = doc.get("patch", {"coords": ["x"], "relations": []})
    coords = tuple(patch_doc["coords"])
    mdom = MPolyDomain(field, coords)
    rels = [as_scalar(eval_text(r, mdom), "relation") for r in patch_doc.get("relations", [])]
    patch = bm.AffinePatch(coords, rels, field)
    fval = eval_text(doc["form"], mdom)
    if not isinstance(fval, dict):
        raise InputError("form must be a 1-form in the patch differentials")
    zero = mdom.const(0)
    form = bm.AbsoluteForm([fval.get(c, zero) for c in coords], fval.get("t", zero),
                           int(doc.get("level", cfg.level)))
    points = {}
    for entry in doc.get("points", []):
        v = _place(str(entry.get("place", "t")), field)
        prec = int(entry.get("prec", cfg.prec))
        dom = _local_dom(v, prec)
        vals = [as_scalar(eval_text(c, dom), "coordinate") for c in entry["coords"]]
        points[v] = bm.LocalPoint(v, vals)
    default = None
    if doc.get("default_point") is not None:
        rdom = RationalDomain(field)
        default = [as_scalar(eval_text(str(c), rdom)) for c in doc["default_point"]]
        patch.check_global(default)
    return form, bm.AdelicPoint(patch, points, default), doc.get("field", cfg.field)


def cmd_bm(args, cfg):
    if not args.input:
        raise InputError(f"bm {args.action} needs --input FILE")
    form, point, fname = _load_bm(args.input, cfg)
    field = point.patch.base
    for v, pt in point.points.items():
        point.patch.check_local(pt)
    if args.action == "pair":
        mults = _trial_list(args.mult, field) or adelic.default_trials(field, cfg.trials)
        values = [{"multiplier": str(m), "value": bm.bm_pairing(form, point, m)} for m in mults]
        return ({"pairings": values, "level": form.level},
                {"field": fname, "spot_checks": [[show_place(v), ok]
                                 for v, ok in bm.spot_check_integrality(point, seed=cfg.seed)]},
                None)
    verdict = bm.check_theorem1(form, point, form.level, _trial_list(args.mult, field), cfg.trials)
    return _verdict_dict(verdict), {"field": fname, "trial_bound": cfg.trials,
                                    "trial_bounded": True}, None


def cmd_demo(args, cfg):
    rep = bm.legendre_check(args.p)
    return rep.as_dict(), {"series_window": rep.series_window}, None


COMMANDS = {
    "cartier": (cmd_cartier, ("apply", "inverse")),
    "bn": (cmd_bn, ("member", "decompose")),
    "witt": (cmd_witt, ("add", "mul", "dn", "invert-dn")),
    "brauer": (cmd_brauer, ("inv", "solve-1mc", "symbol", "pair")),
    "global": (cmd_global, ("residues", "check")),
    "bm": (cmd_bm, ("pair", "check")),
    "demo": (cmd_demo, ("legendre",)),
}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--field", default=None, help=f"field descriptor (default {DEFAULT_FIELD})")
    common.add_argument("--prec", type=int, default=None, help=f"working precision (default {DEFAULT_PREC})")
    common.add_argument("--level", type=int, default=None, help="level n (default 1)")
    common.add_argument("--trials", type=int, default=None,
                        help=f"trial multipliers t^j, |j| <= J (default {adelic.DEFAULT_TRIAL_BOUND})")
    common.add_argument("--json", action="store_true", help="print the JSON report")
    common.add_argument("--seed", type=int, default=None, help=f"seed (default {DEFAULT_SEED})")
    common.add_argument("-v", "--verbose", action="store_true")

    ap = argparse.ArgumentParser(prog="diffbrauer", parents=[common],
                                 description="Cartier operators, Witt differentials and "
                                             "Brauer pairings over F_q(t).")
    sub = ap.add_subparsers(dest="command", required=True)
    for name, (_, actions) in COMMANDS.items():
        sp = sub.add_parser(name, parents=[common])
        sp.add_argument("action", choices=actions)
        if name in ("cartier", "bn", "witt", "brauer", "global"):
            sp.add_argument("--form", help="form such as 't^-1 dt + O(t^10)'")
        if name == "witt":
            sp.add_argument("--a", help="Witt entries separated by ';'")
            sp.add_argument("--b", help="Witt entries separated by ';'")
        if name == "brauer":
            sp.add_argument("--f")
            sp.add_argument("--g")
        if name == "global":
            sp.add_argument("--adelic", help="adelic form JSON file")
        if name in ("global", "bm"):
            sp.add_argument("--mult", help="extra multipliers separated by ';'")
        if name == "bm":
            sp.add_argument("--input", help="adelic point JSON file")
        if name == "demo":
            sp.add_argument("--p", type=int, default=5)
    return ap


def _config(args) -> Config:
    return Config(field=args.field or DEFAULT_FIELD,
                  prec=DEFAULT_PREC if args.prec is None else args.prec,
                  level=1 if args.level is None else args.level,
                  trials=adelic.DEFAULT_TRIAL_BOUND if args.trials is None else args.trials,
                  output="json" if args.json else "human",
                  seed=DEFAULT_SEED if args.seed is None else args.seed)


def _inputs(args) -> dict:
    skip = {"command", "action", "json", "verbose", "field", "prec", "level", "trials", "seed"}
    return {k: v for k, v in sorted(vars(args).items()) if k not in skip and v is not None}


_DOMAIN_ERRORS = (witt.NotInBn, NotExact, PrecisionLoss, FieldError, bm.RelationViolation,
                  witt.WittError, brauer_local.ZeroG, ZeroDivisionError, adelic.PlaceError)


def run(argv=None, out=None) -> int:
    out = out or sys.stdout
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(name)s: %(message)s")
    cfg = _config(args)
    logger.info("effective config: %s", asdict(cfg))
    op = f"{args.command} {args.action}"
    report = {"operation": op, "inputs": _inputs(args), "config": asdict(cfg)}
    handler = COMMANDS[args.command][0]
    try:
        parse_field(cfg.field)
    except FieldError as exc:
        return _fail(out, report, cfg, 2, {"error": "FieldError", "message": str(exc)})
    try:
        result, certs, window = handler(args, cfg)
    except ParseError as exc:
        return _fail(out, report, cfg, 2, exc.as_dict())
    except (InputError, FieldError) as exc:
        code = 2 if isinstance(exc, InputError) else 1
        return _fail(out, report, cfg, code, {"error": type(exc).__name__, "message": str(exc)})
    except _DOMAIN_ERRORS as exc:
        diag = {"error": type(exc).__name__, "message": str(exc)}
        if isinstance(exc, NotExact):
            diag["exponent"] = exc.exponent
        return _fail(out, report, cfg, 1, diag)
    report.update(result=result, certificates=certs, window=window)
    _emit(out, report, cfg)
    return 0


def _fail(out, report, cfg, code, diag) -> int:
    report.update(result=None, error=diag)
    if cfg.output == "json":
        _emit(out, report, cfg)
    else:
        print(f"error: {diag.get('message', diag)}", file=sys.stderr)
    return code


def _emit(out, report, cfg):
    if cfg.output == "json":
        out.write(json.dumps(report, sort_keys=True, indent=2, ensure_ascii=False) + "\n")
        return
    out.write(f"{report['operation']}\n")
    for key, val in (report.get("result") or {}).items():
        out.write(f"  {key}: {val}\n")
    for key, val in (report.get("certificates") or {}).items():
        out.write(f"  [{key}] {val}\n")
    if report.get("window") is not None:
        out.write(f"  window: known mod t^{report['window']}\n")


def main():  # pragma: no cover - console entry
    sys.exit(run())
