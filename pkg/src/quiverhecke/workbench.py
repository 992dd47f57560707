"""Command-line workbench: configuration, orchestration, reports.

Subcommands: quiver | orbits | dim | verify-iso | series | report.
Exit codes: 0 all checks pass, 1 check failure, 2 configuration error,
3 dimension cap exceeded.
"""

import argparse
import concurrent.futures
import csv
import io
import json
import sys

from .scalars import (FieldCtx, Params, FieldError, order_e, offset_e_prime,
                      lambda_class)
from .quiverweyl import (WeylGroup, enumerate_orbit, orbit_rep,
                         dimension_vector, quiver_window,
                         check_disjoint_lines, arrow_class, p_class)
from .engine import NFAlgebra, closure, elem_add_into, DimensionCapExceeded
from .polyengine import Series1, series_f, check_lemma_fg
from .presentations import (poly_relators, laurent_relators, relator_exprs,
                            describe)
from .heckeengine import HeckeQuotient, HeckeBlocks
from .morphisms import (Coupler, ModelView, conditions_ok,
                        required_series_order, GradedToDeformed,
                        DeformedToGraded, RescalingAutomorphism,
                        HeckeToDeformed, DeformedToHecke,
                        verify_generator_map, roundtrip_ok,
                        intertwiner_checks)


class ConfigError(ValueError):
    pass


_DEFAULTS = {
    "field": "Fp:13",
    "type": "B",
    "n": 2,
    "trunc": 4,
    "cap_dim": 20000,
    "radius": 0,
    "jobs": 1,
    "checks": "series,conditions,grading,homomorphy,roundtrip,"
              "automorphism,hecke",
}


def _parse_kv(path: str) -> dict:
    out = {}
    with open(path) as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise ConfigError("%s:%d: expected key = value" %
                                  (path, lineno))
            k, v = line.split("=", 1)
            out[k.strip()] = v.strip()
    return out


def _parse_scalar_list(text: str):
    return [t.strip() for t in str(text).split(",") if t.strip()]


def _parse_mult_map(text: str):
    out = {}
    for item in _parse_scalar_list(text):
        if ":" not in item:
            raise ConfigError("multiplicity entries look like scalar:count")
        k, v = item.split(":", 1)
        out[k.strip()] = int(v)
    return out


class RunConfig:
    """Validated run parameters; all scalars exact."""

    def __init__(self, raw: dict):
        data = dict(_DEFAULTS)
        data.update(raw)
        try:
            self.field = FieldCtx.parse(str(data["field"]))
            self.params = Params(self.field, self.field.of(data["p"]),
                                 self.field.of(data["q"]))
        except KeyError as exc:
            raise ConfigError("missing config key %s" % exc)
        except (FieldError, ValueError) as exc:
            raise ConfigError(str(exc))
        self.kind = str(data["type"]).strip().upper()
        if self.kind not in ("A", "B"):
            raise ConfigError("type must be A or B")
        self.n = int(data["n"])
        if self.n < 1:
            raise ConfigError("n must be >= 1")
        if "lambda" not in data:
            raise ConfigError("missing config key 'lambda'")
        self.lambdas = [self.field.of(x)
                        for x in _parse_scalar_list(data["lambda"])]
        if not self.lambdas:
            raise ConfigError("empty lambda list")
        if "m" in data:
            self.m = {self.field.of(k): v
                      for k, v in _parse_mult_map(data["m"]).items()}
        else:
            self.m = {lam: 1 for lam in self.lambdas}
        for lam, s in self.m.items():
            if self.field.is_zero(lam):
                raise ConfigError("multiplicity base must be nonzero")
            if s < 0:
                raise ConfigError("multiplicities must be >= 0")
        self.trunc = int(data["trunc"])
        self.cap_dim = int(data["cap_dim"])
        self.radius = int(data["radius"]) or self.n
        self.jobs = int(data["jobs"])
        self.checks = set(_parse_scalar_list(data["checks"]))
        try:
            check_disjoint_lines(self.field, self.params, self.lambdas)
        except ValueError as exc:
            raise ConfigError(str(exc))

    def echo(self) -> dict:
        return {
            "field": "Q" if self.field.kind == "Q" else
                     "Fp:%d" % self.field.char,
            "p": str(self.params.p),
            "q": str(self.params.q),
            "type": self.kind,
            "n": self.n,
            "lambda": [str(x) for x in self.lambdas],
            "m": {str(k): v for k, v in sorted(self.m.items(),
                                               key=lambda t: repr(t[0]))},
            "trunc": self.trunc,
            "cap_dim": self.cap_dim,
            "radius": self.radius,
        }


def _s(x) -> str:
    return str(x)


def _orbit_key(orbit: tuple) -> list:
    return [[_s(v) for v in blk] for blk in orbit]


# ---------------------------------------------------------------------------
# Subcommands
# ---------------------------------------------------------------------------

def cmd_series(cfg: RunConfig) -> dict:
    f13 = cfg.field
    report = {"checks": []}
    ok_all = True
    for order in range(2, 17):
        f = series_f(f13, order)
        g = f.comp_inverse()
        ok = (f[1] == f13.of(2)
              and f.compose(g) == Series1(f13, [0, 1] + [0] * (order - 2))
              and g.compose(f) == Series1(f13, [0, 1] + [0] * (order - 2))
              and check_lemma_fg(f13, order))
        ok_all = ok_all and ok
        report["checks"].append({"order": order, "ok": ok})
    report["ok"] = ok_all
    return report


def cmd_quiver(cfg: RunConfig) -> dict:
    f = cfg.field
    pr = cfg.params
    verts, arrows = quiver_window(f, pr, cfg.lambdas, cfg.radius)
    e = order_e(pr)
    ep = offset_e_prime(pr, e)
    return {
        "e": e,
        "e_prime": ep,
        "lambda_classes": {_s(lam): lambda_class(pr, lam)
                           for lam in cfg.lambdas},
        "vertices": [{"value": _s(v),
                      "inverse": _s(f.inv(v)),
                      "p_class": p_class(f, pr, v)} for v in verts],
        "arrows": [[_s(a), _s(b)] for a, b in arrows],
        "ok": True,
    }


def _orbit_seeds(cfg: RunConfig):
    """Representative seeds of the W-orbits inside the vertex window."""
    verts, _ = quiver_window(cfg.field, cfg.params, cfg.lambdas, cfg.radius)
    seen = set()
    reps = []
    for seq in _tuples(verts, cfg.n):
        orb = enumerate_orbit(cfg.field, seq, cfg.kind)
        key = tuple(tuple(repr(x) for x in blk) for blk in orb)
        if key not in seen:
            seen.add(key)
            reps.append(orbit_rep(orb))
    return reps


def _tuples(vals, n):
    if n == 0:
        yield ()
        return
    for rest in _tuples(vals, n - 1):
        for v in vals:
            yield rest + (v,)


def cmd_orbits(cfg: RunConfig) -> dict:
    out = []
    for seed in _orbit_seeds(cfg):
        orb = enumerate_orbit(cfg.field, seed, cfg.kind)
        d = dimension_vector(cfg.field, seed)
        out.append({
            "seed": [_s(x) for x in seed],
            "size": len(orb),
            "dimension_vector": {_s(k): v
                                 for k, v in sorted(d.items(),
                                                    key=lambda t: repr(t[0]))},
        })
    return {"orbits": out, "ok": True}


def _models(cfg: RunConfig, seed, cyclotomic=True, trunc=None):
    blocks = enumerate_orbit(cfg.field, seed, cfg.kind)
    N = trunc if trunc is not None else cfg.trunc
    gr = NFAlgebra(cfg.field, cfg.params, "poly", cfg.kind, blocks,
                   cfg.m, N, cyclotomic=cyclotomic)
    df = NFAlgebra(cfg.field, cfg.params, "laurent", cfg.kind, blocks,
                   cfg.m, N, cyclotomic=cyclotomic)
    return gr, df


def _dim_orbit(cfg: RunConfig, seed) -> dict:
    gr, df = _models(cfg, seed)
    relg = poly_relators(gr, cfg.kind == "B", True)
    reld = laurent_relators(df)
    cg = closure(gr, relator_exprs(relg), cap_dim=cfg.cap_dim)
    cd = closure(df, relator_exprs(reld), cap_dim=cfg.cap_dim)
    dg = len(cg.basis())
    dd = len(cd.basis())
    return {
        "seed": [_s(x) for x in seed],
        "graded_dim": dg,
        "deformed_dim": dd,
        "graded_dims_by_degree": {str(k): v
                                  for k, v in cg.graded_dims().items()},
        "ok": dg == dd,
    }


def _run_orbits(cfg: RunConfig, fn, seeds):
    if cfg.jobs > 1:
        with concurrent.futures.ProcessPoolExecutor(cfg.jobs) as pool:
            results = list(pool.map(fn, [cfg] * len(seeds), seeds))
    else:
        results = [fn(cfg, s) for s in seeds]
    results.sort(key=lambda r: r["seed"])
    return results


def cmd_dim(cfg: RunConfig) -> dict:
    h = HeckeQuotient(cfg.field, cfg.params, cfg.kind, cfg.n, cfg.m)
    hc = h.closure(cap_dim=cfg.cap_dim)
    hb = HeckeBlocks(hc)
    odims = hb.orbit_dims()
    rows = []
    ok_all = True
    total = 0
    for orbit, hdim in sorted(odims.items(),
                              key=lambda t: _orbit_key(t[0])):
        total += hdim
        row = _dim_orbit(cfg, orbit[0])
        row["hecke_block_dim"] = hdim
        row["ok"] = (row["graded_dim"] == row["deformed_dim"] == hdim)
        ok_all = ok_all and row["ok"]
        rows.append(row)
    block_sum_ok = (total == hc.dim)
    return {
        "hecke_dim": hc.dim,
        "hecke_block_sum_ok": block_sum_ok,
        "orbits": rows,
        "ok": ok_all and block_sum_ok,
    }


def _relator_homogeneous(alg: NFAlgebra, expr) -> bool:
    elem = alg.eval_expr(expr)
    degs = {alg.coord_degree(c) for c in elem}
    return len(degs) <= 1


def _verify_orbit(cfg: RunConfig, seed) -> dict:
    f = cfg.field
    pr = cfg.params
    out = {"seed": [_s(x) for x in seed], "checks": {}}
    gr, df = _models(cfg, seed)
    relg = poly_relators(gr, cfg.kind == "B", True)
    reld = laurent_relators(df)

    if "conditions" in cfg.checks:
        gru, dfu = _models(cfg, seed, cyclotomic=False)
        ok = True
        for alg in (gru, dfu):
            fser = series_f(f, required_series_order(alg))
            rep = Coupler(f, pr).check_conditions(ModelView(alg, fser))
            ok = ok and conditions_ok(rep)
        out["checks"]["conditions"] = ok

    if "grading" in cfg.checks:
        out["checks"]["grading"] = all(
            _relator_homogeneous(gr, expr) for _, expr in relg)

    need_fg = cfg.checks & {"homomorphy", "roundtrip"}
    if need_fg:
        cg = closure(gr, relator_exprs(relg), cap_dim=cfg.cap_dim)
        cd = closure(df, relator_exprs(reld), cap_dim=cfg.cap_dim)
        fser = series_f(f, max(required_series_order(gr),
                               required_series_order(df)))
        cp = Coupler(f, pr)
        fwd = GradedToDeformed(gr, df, cp, fser, cd)
        back = DeformedToGraded(df, gr, cp, fser, cg)
        if "homomorphy" in cfg.checks:
            ok1, _ = verify_generator_map(fwd, relg)
            ok2, _ = verify_generator_map(back, reld)
            out["checks"]["homomorphy"] = ok1 and ok2
        if "roundtrip" in cfg.checks:
            out["checks"]["roundtrip"] = (roundtrip_ok(fwd, back, cg)
                                          and roundtrip_ok(back, fwd, cd))
        out["graded_dim"] = len(cg.basis())
        out["deformed_dim"] = len(cd.basis())

    if "automorphism" in cfg.checks:
        blocks = enumerate_orbit(f, seed, cfg.kind)
        grA = NFAlgebra(f, pr, "poly", "A", blocks, cfg.m, cfg.trunc)
        relA = poly_relators(grA, False, True)
        cA = closure(grA, relator_exprs(relA), cap_dim=cfg.cap_dim)
        need = required_series_order(grA)

        def ser(coeffs):
            return Series1(f, coeffs + [0] * (need - len(coeffs)))
        ok = True
        for fam in ([0, 1], [0, 2], [0, 1, 1]):
            fser = ser(fam)
            auto = RescalingAutomorphism(grA, fser, cA)
            okv, _ = verify_generator_map(auto, relA)
            ok = ok and okv
            back = RescalingAutomorphism(grA, fser.comp_inverse(), cA)
            for a in grA.weyl.gens:
                x = grA.rmul_gen(grA.unit(), a)
                img = back.image_elem(auto.image_elem(x))
                diff = dict(img)
                elem_add_into(f, diff, x, f.neg(f.one))
                ok = ok and cA.is_zero_mod_ideal(diff)
        out["checks"]["automorphism"] = ok

    out["ok"] = all(out["checks"].values())
    return out


def cmd_verify(cfg: RunConfig) -> dict:
    report = {"orbits": [], "checks": {}}
    ok_all = True
    if "series" in cfg.checks:
        s = cmd_series(cfg)
        report["checks"]["series"] = s["ok"]
        ok_all = ok_all and s["ok"]

    h = HeckeQuotient(cfg.field, cfg.params, cfg.kind, cfg.n, cfg.m)
    hc = h.closure(cap_dim=cfg.cap_dim)
    hb = HeckeBlocks(hc)
    odims = hb.orbit_dims()
    live = sorted((orb for orb, d in odims.items() if d),
                  key=_orbit_key)

    rows = _run_orbits(cfg, _verify_orbit, [orb[0] for orb in live])
    for row, orb in zip(rows, live):
        row["hecke_block_dim"] = odims[orb]
        ok_all = ok_all and row["ok"]
        report["orbits"].append(row)

    if "hecke" in cfg.checks:
        ok = True
        for a in range(1, cfg.n):
            ic = intertwiner_checks(hc, a)
            ok = ok and ic["exchange"] and ic["square"]
        for orb in live:
            blocks = enumerate_orbit(cfg.field, orb[0], cfg.kind)
            df = NFAlgebra(cfg.field, cfg.params, "laurent", cfg.kind,
                           blocks, cfg.m, cfg.trunc)
            reld = laurent_relators(df)
            cd = closure(df, relator_exprs(reld), cap_dim=cfg.cap_dim)
            sig = HeckeToDeformed(h, df, cd)
            ok1, _ = verify_generator_map(sig, h.relators())
            rho = DeformedToHecke(df, hc, hb)
            if df.N < rho.required_truncation():
                ok = False
                continue
            ok2, _ = verify_generator_map(rho, reld)
            ok = ok and ok1 and ok2
        report["checks"]["hecke"] = ok
        ok_all = ok_all and ok

    report["ok"] = ok_all
    return report


def cmd_report(args) -> dict:
    with open(args.input) as fh:
        return json.load(fh)


# ---------------------------------------------------------------------------
# Entry point
# ---------------------------------------------------------------------------

def _flatten(prefix: str, obj, rows: list):
    if isinstance(obj, dict):
        for k in obj:
            _flatten("%s.%s" % (prefix, k) if prefix else str(k),
                     obj[k], rows)
    elif isinstance(obj, list):
        for t, v in enumerate(obj):
            _flatten("%s[%d]" % (prefix, t), v, rows)
    else:
        rows.append((prefix, obj))


def _emit(report: dict, fmt: str, out_path):
    if fmt == "json":
        text = json.dumps(report, indent=2, sort_keys=True) + "\n"
    else:
        rows: list = []
        _flatten("", report, rows)
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["key", "value"])
        for k, v in rows:
            w.writerow([k, v])
        text = buf.getvalue()
    if out_path:
        with open(out_path, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _build_parser():
    ap = argparse.ArgumentParser(
        prog="quiverhecke",
        description="Exact verification workbench for cyclotomic "
                    "Hecke-type quotients and their graded models.")
    ap.add_argument("--config", help="key = value configuration file")
    ap.add_argument("--out", help="write the report here instead of stdout")
    ap.add_argument("--format", choices=("json", "csv"), default="json")
    ap.add_argument("--jobs", type=int, default=None)
    ap.add_argument("--cap-dim", type=int, default=None)
    ap.add_argument("--trunc", type=int, default=None)
    sub = ap.add_subparsers(dest="command", required=True)
    for name in ("quiver", "orbits", "dim", "verify-iso", "series"):
        sub.add_parser(name)
    rp = sub.add_parser("report")
    rp.add_argument("input", help="previously written JSON report")
    return ap


_COMMANDS = {
    "quiver": cmd_quiver,
    "orbits": cmd_orbits,
    "dim": cmd_dim,
    "verify-iso": cmd_verify,
    "series": cmd_series,
}


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        if args.command == "report":
            report = cmd_report(args)
        else:
            raw = _parse_kv(args.config) if args.config else {}
            for key, val in (("jobs", args.jobs), ("cap_dim", args.cap_dim),
                             ("trunc", args.trunc)):
                if val is not None:
                    raw[key] = val
            cfg = RunConfig(raw)
            report = _COMMANDS[args.command](cfg)
            report["config"] = cfg.echo()
    except (ConfigError, FileNotFoundError, json.JSONDecodeError) as exc:
        print("config error: %s" % exc, file=sys.stderr)
        return 2
    except DimensionCapExceeded as exc:
        print("dimension cap exceeded: %s" % exc, file=sys.stderr)
        return 3
    _emit(report, args.format, args.out)
    return 0 if report.get("ok", True) else 1


if __name__ == "__main__":
    sys.exit(main())
