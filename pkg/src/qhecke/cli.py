"""Command-line interface: describe, check, braid, act, localize, euler,
preset.  Configs and reports are JSON with exact rationals as "p/q" strings;
all orderings are deterministic so reports reproduce bit-for-bit.

Operator expressions use a small grammar:

    expr   := term (('+'|'-') term)*
    term   := factor ('*' factor)*
    factor := '1(' i ')' | 'z(' i ',' t ')' | 's(' i ',' k ')'
            | rational | '(' expr ')'

Indices are 0-based into the coset table and the simple-root list.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from fractions import Fraction

from . import algebra, localize, presets, repdata
from .config import Config, build_setting, emit_config, parse_config
from .errors import ParseError, QheckeError, UnknownIndex
from .polyops import Poly, RatFun, coeff_str
from .report import CheckResult
from .subgroup import factorization_check, length_comparison_check, s_adapted


class _Tokens:
    def __init__(self, text: str):
        self.text = text
        self.pos = 0

    def skip_ws(self):
        while self.pos < len(self.text) and self.text[self.pos].isspace():
            self.pos += 1

    def peek(self):
        self.skip_ws()
        return self.text[self.pos] if self.pos < len(self.text) else ""

    def take(self, expected: str):
        self.skip_ws()
        if not self.text.startswith(expected, self.pos):
            raise ParseError(f"expected {expected!r}", self.pos)
        self.pos += len(expected)

    def integer(self) -> int:
        self.skip_ws()
        start = self.pos
        if self.peek() == "-":
            self.pos += 1
        while self.pos < len(self.text) and self.text[self.pos].isdigit():
            self.pos += 1
        if self.pos == start:
            raise ParseError("expected an integer", start)
        return int(self.text[start : self.pos])


def parse_opexpr(text: str, data, table) -> algebra.TwistedOperator:
    """Parse and evaluate an operator expression against a built setting."""
    toks = _Tokens(text)
    op = _parse_expr(toks, data, table)
    toks.skip_ws()
    if toks.pos != len(text):
        raise ParseError("trailing input", toks.pos)
    return op


def _check_index(i: int, table):
    if not 0 <= i < len(table.indices):
        raise UnknownIndex(f"coset index {i} out of range")


def _parse_expr(toks, data, table):
    sign = 1
    if toks.peek() == "-":
        toks.take("-")
        sign = -1
    op = _parse_term(toks, data, table)
    if sign < 0:
        op = op.scale(-1)
    while toks.peek() in ("+", "-"):
        if toks.peek() == "+":
            toks.take("+")
            op = op + _parse_term(toks, data, table)
        else:
            toks.take("-")
            op = op - _parse_term(toks, data, table)
    return op


def _parse_term(toks, data, table):
    op = _parse_factor(toks, data, table)
    while toks.peek() == "*":
        toks.take("*")
        op = op * _parse_factor(toks, data, table)
    return op


def _parse_factor(toks, data, table):
    ch = toks.peek()
    if ch == "(":
        toks.take("(")
        op = _parse_expr(toks, data, table)
        toks.take(")")
        return op
    if ch == "1" and toks.text.startswith("1(", toks.pos):
        toks.take("1(")
        i = toks.integer()
        toks.take(")")
        _check_index(i, table)
        return algebra.gen_unit(table, i)
    if ch == "z":
        toks.take("z(")
        i = toks.integer()
        toks.take(",")
        t = toks.integer()
        toks.take(")")
        _check_index(i, table)
        if not 0 <= t < data.datum.ambient_rank:
            raise UnknownIndex(f"variable index {t} out of range")
        return algebra.gen_var(table, i, t)
    if ch == "s":
        toks.take("s(")
        i = toks.integer()
        toks.take(",")
        k = toks.integer()
        toks.take(")")
        _check_index(i, table)
        if not 0 <= k < data.datum.rank:
            raise UnknownIndex(f"simple reflection index {k} out of range")
        return algebra.gen_sigma(data, table, i, k)
    # rational scalar: integer with optional /denominator
    num = toks.integer()
    if toks.peek() == "/":
        toks.take("/")
        den = toks.integer()
        scalar = Fraction(num, den)
    else:
        scalar = Fraction(num)
    # scalar multiple of the identity operator
    out = algebra.TwistedOperator(table)
    for i in table.indices:
        out = out + algebra.gen_unit(table, i).scale(scalar)
    return out


def _ratfun_json(c: RatFun):
    return {
        "numerator": c.num.to_pairs(),
        "denominator": c.den.to_pairs(),
    }


def _module_element_json(m: algebra.ModuleElement):
    return {str(i): f.to_pairs() for i, f in sorted(m.components.items())}


def _fp_matrix_json(mat, group):
    rows = []
    for (x, y) in sorted(mat):
        c = mat[(x, y)]
        rows.append(
            {
                "x_word": list(group.reduced_word(x)),
                "y_word": list(group.reduced_word(y)),
                "numerator": c.num.to_pairs(),
                "denominator": c.den.to_pairs(),
            }
        )
    return rows


def run_checks(cfg: Config, selected=None) -> list:
    """Run the selected named check suites on a config; returns CheckResults."""
    datum, sub, table, data = build_setting(cfg)
    lambdas = None

    def lam():
        nonlocal lambdas
        if lambdas is None:
            lambdas = localize.lambda_table(data, sub)
        return lambdas

    suites = {}
    suites["suitability"] = lambda: repdata.validate(
        data, sub, strict=cfg.strict_suitability
    )
    suites["coset"] = lambda: _coset_checks(sub, table)
    suites["length"] = lambda: length_comparison_check(sub)
    suites["factorization"] = lambda: _factorization_checks(sub)
    suites["fibers"] = lambda: repdata.fiber_split_check(data, table)
    suites["relations"] = lambda: algebra.check_relations(data, table)
    suites["grading"] = lambda: algebra.generator_grading_check(data, table)
    suites["euler"] = lambda: localize.euler_identities_check(data, sub, table, lam())
    suites["localization"] = lambda: (
        localize.pathway_agreement_check(data, sub, table, lam())
        + localize.intertwining_check(data, sub, table, lam())
        + localize.theta_equivariance_check(data, sub, table, lam())
    )
    suites["leading"] = lambda: localize.leading_term_suite(data, sub, table, lam())
    suites["inversions"] = lambda: (
        localize.inversion_additivity_suite(datum, sub.group, datum.positive_roots)
        + localize.inversion_additivity_suite(
            datum, sub.group, tuple(tuple(-x for x in a) for a in datum.positive_roots)
        )
    )
    suites["integrality"] = lambda: _integrality_checks(data, table, cfg.degree_bound)
    suites["products"] = lambda: _product_checks(data, table, cfg.seed, cfg.degree_bound)

    if selected is None:
        selected = cfg.checks if cfg.checks is not None else sorted(suites)
    results = []
    for name in selected:
        if name not in suites:
            raise UnknownIndex(f"unknown check suite {name!r}")
        for r in suites[name]():
            results.append(CheckResult(f"{name}:{r.name}", r.passed, r.details, r.counterexample))
    return results


def _monomials_up_to(n: int, degree: int):
    from itertools import combinations_with_replacement

    out = []
    for d in range(degree + 1):
        for combo in combinations_with_replacement(range(n), d):
            e = [0] * n
            for k in combo:
                e[k] += 1
            out.append(tuple(e))
    return out


def _all_generators(data, table):
    gens = []
    n = data.datum.ambient_rank
    for i in table.indices:
        gens.append((f"unit({i})", algebra.gen_unit(table, i)))
        for t in range(n):
            gens.append((f"var({i},{t})", algebra.gen_var(table, i, t)))
        for s in range(data.datum.rank):
            gens.append((f"crossing({i},{s})", algebra.gen_sigma(data, table, i, s)))
    return gens


def _integrality_checks(data, table, degree_bound: int) -> list:
    """Generators stay polynomial on every monomial up to the degree bound.

    This is the documented property test, not a proof: exact divisibility is
    certified on the monomial family only.
    """
    from .errors import NonIntegralResult

    n = data.datum.ambient_rank
    monos = _monomials_up_to(n, degree_bound)
    ok = True
    bad = None
    for name, gen in _all_generators(data, table):
        for i in table.indices:
            for e in monos:
                m = algebra.ModuleElement.monomial(n, i, e)
                try:
                    gen.apply(m)
                except NonIntegralResult:
                    ok, bad = False, {"generator": name, "component": i, "monomial": e}
    return [CheckResult("generators-integral", ok, f"degree bound {degree_bound}", bad)]


def _product_checks(data, table, seed: int, degree_bound: int) -> list:
    """Sampled associativity and module-action compatibility."""
    import random

    rng = random.Random(seed)
    gens = _all_generators(data, table)
    n = data.datum.ambient_rank
    monos = _monomials_up_to(n, min(degree_bound, 2))
    results = []
    ok = True
    bad = None
    for _ in range(12):
        (na, A), (nb, B), (nc, C) = (rng.choice(gens) for _ in range(3))
        if (A * B) * C != A * (B * C):
            ok, bad = False, {"triple": (na, nb, nc)}
        m = algebra.ModuleElement.monomial(
            n, rng.randrange(len(table.indices)), rng.choice(monos)
        )
        if (A * B).apply(m) != A.apply(B.apply(m)):
            ok, bad = False, {"pair": (na, nb), "monomial": True}
    results.append(CheckResult("associativity-sampled", ok, "12 seeded triples", bad))
    return results


def _coset_checks(sub, table) -> list:
    group = sub.group
    results = []
    ok = True
    bad = None
    pos_big = sub.datum._positive_set
    target = set(sub.positives)
    for g in range(len(group)):
        ginv = group.inv(g)
        P = {a for a in sub.roots if group.act(ginv, a) in pos_big}
        canonical = P == target
        if canonical != (g in set(table.reps)):
            ok, bad = False, {"element": group.reduced_word(g)}
    results.append(CheckResult("canonical-reps-unique", ok, f"#W_big={len(group)}", bad))

    ok = True
    bad = None
    for i in table.indices:
        for k in range(sub.datum.rank):
            j = table.act(i, k)
            if j != i:
                if table.reps[j] != group.mul(table.reps[i], group.simple[k]):
                    ok, bad = False, {"i": i, "k": k}
            else:
                conj = group.mul(
                    group.mul(table.reps[i], group.simple[k]), group.inv(table.reps[i])
                )
                from .subgroup import member_of_W

                if not member_of_W(sub, conj) or conj not in sub.members:
                    ok, bad = False, {"i": i, "k": k}
    results.append(CheckResult("action-and-stabilizers", ok, "", bad))

    ok = len(table.indices) * sub.group_order == len(group)
    results.append(
        CheckResult("counting", ok, f"#I * #W = {len(table.indices)} * {sub.group_order}")
    )

    ok = True
    bad = None
    for i in table.indices:
        for k1 in range(sub.datum.rank):
            for k2 in range(sub.datum.rank):
                lhs = table.act(table.act(i, k1), k2)
                prod = group.mul(group.simple[k1], group.simple[k2])
                rhs = table.act_elem(i, prod)
                if lhs != rhs:
                    ok, bad = False, {"i": i, "pair": (k1, k2)}
    results.append(CheckResult("action-well-defined", ok, "", bad))
    return results


def _factorization_checks(sub) -> list:
    from itertools import combinations

    rank = sub.datum.rank
    results = []
    adapted = []
    for size in range(rank + 1):
        for J in combinations(range(rank), size):
            if s_adapted(sub, J):
                adapted.append(J)
    results.append(
        CheckResult(
            "adapted-subsets",
            bool(adapted),
            f"{len(adapted)} adapted subsets incl. empty and full",
        )
    )
    for J in adapted:
        for K in adapted:
            results.extend(factorization_check(sub, J, K))
    return results


def cmd_describe(cfg: Config) -> dict:
    datum, sub, table, data = build_setting(cfg)
    group = sub.group
    out = {
        "ambient_rank": datum.ambient_rank,
        "rank": datum.rank,
        "big_group_order": len(group),
        "roots": [list(r) for r in datum.roots],
        "subsystem_roots": [list(r) for r in sorted(sub.roots)],
        "subsystem_order": sub.group_order,
        "coset_count": len(table.indices),
        "legend": {
            str(i): list(group.reduced_word(table.rep(i))) for i in table.indices
        },
    }
    if data.borel_flag:
        out["h_table"] = {
            str(i): [repdata.h_count(data, table, i, s) for s in range(datum.rank)]
            for i in table.indices
        }
    out["q_table"] = {
        str(i): [
            repdata.q_poly(data, table, i, s).to_pairs() for s in range(datum.rank)
        ]
        for i in table.indices
    }
    return out


def cmd_braid(cfg: Config, i: int, s: int, t: int) -> dict:
    datum, sub, table, data = build_setting(cfg)
    _check_index(i, table)
    for k in (s, t):
        if not 0 <= k < datum.rank:
            raise UnknownIndex(f"simple reflection index {k} out of range")
    defect = algebra.braid_defect(data, table, i, s, t)
    group = sub.group
    rows = []
    for g in sorted(defect.coefficients, key=lambda g: (group.length(g), g)):
        c = defect.coefficients[g]
        rows.append(
            {
                "word": list(defect.words[g]),
                "coefficient": _ratfun_json(c),
                "polynomial": defect.polynomial_flags[g],
            }
        )
    return {
        "order": defect.order,
        "coefficients": rows,
        "all_polynomial": defect.all_polynomial(),
        "all_zero": defect.all_zero(),
    }


def cmd_act(cfg: Config, expr: str, component: int | None, poly_pairs) -> dict:
    datum, sub, table, data = build_setting(cfg)
    op = parse_opexpr(expr, data, table)
    n = datum.ambient_rank
    if component is None:
        results = {}
        for i in table.indices:
            m = algebra.ModuleElement.unit(n, i)
            results[str(i)] = _module_element_json(op.apply(m))
        return {"operator_terms": _operator_json(op, sub.group), "unit_images": results}
    _check_index(component, table)
    f = Poly.from_pairs(n, poly_pairs) if poly_pairs else Poly.const(n, 1)
    m = algebra.ModuleElement(n, {component: f})
    return {
        "operator_terms": _operator_json(op, sub.group),
        "image": _module_element_json(op.apply(m)),
    }


def _operator_json(op, group):
    rows = []
    for (i, g) in sorted(op.terms):
        rows.append(
            {
                "component": i,
                "word": list(group.reduced_word(g)),
                "coefficient": _ratfun_json(op.terms[(i, g)]),
            }
        )
    return rows


def cmd_localize(cfg: Config) -> dict:
    datum, sub, table, data = build_setting(cfg)
    lambdas = localize.lambda_table(data, sub)
    group = sub.group
    out = {"generators": {}, "checks": []}
    for i in table.indices:
        for s in range(datum.rank):
            mat = localize.localize_sigma(data, sub, table, lambdas, i, s)
            out["generators"][f"sigma({i},{s})"] = _fp_matrix_json(mat, group)
    for r in localize.pathway_agreement_check(data, sub, table, lambdas):
        out["checks"].append(r.as_dict())
    for r in localize.intertwining_check(data, sub, table, lambdas):
        out["checks"].append(r.as_dict())
    return out


def cmd_euler(cfg: Config) -> dict:
    datum, sub, table, data = build_setting(cfg)
    lambdas = localize.lambda_table(data, sub)
    group = sub.group
    out = {"lambda": [], "crossing_cells": []}
    for g in range(len(group)):
        out["lambda"].append(
            {"word": list(group.reduced_word(g)), "value": lambdas[g].to_pairs()}
        )
    for g in range(len(group)):
        i = table.coset_of[g]
        for s in range(datum.rank):
            value = localize.eu_zbar_s(data, sub, table, g, s)
            out["crossing_cells"].append(
                {
                    "word": list(group.reduced_word(g)),
                    "s": s,
                    "value": value.to_pairs(),
                    "diagonal": table.stab(i, s),
                }
            )
    return out


def cmd_preset(name: str, quiver_json: str | None) -> Config:
    if name.startswith("nilhecke:"):
        return presets.preset_nilhecke(name.split(":", 1)[1])
    if name.startswith("skew:"):
        return presets.preset_skew(name.split(":", 1)[1])
    if name == "klr":
        if not quiver_json:
            raise ParseError("klr preset needs --quiver")
        raw = json.loads(quiver_json)
        unknown = set(raw) - {"vertices", "arrows", "dimension"}
        if unknown:
            raise ParseError(f"unknown quiver fields {sorted(unknown)}")
        vertices = tuple(raw["vertices"])
        dims_raw = raw["dimension"]
        if isinstance(dims_raw, dict):
            # JSON keys are strings; map them back onto the vertex objects
            by_name = {str(v): v for v in vertices}
            dimension = {}
            for key, value in dims_raw.items():
                if key not in by_name:
                    raise ParseError(f"dimension at unknown vertex {key!r}")
                dimension[by_name[key]] = int(value)
        else:
            dimension = {q: int(v) for q, v in zip(vertices, dims_raw)}
        quiver = presets.QuiverSpec(
            vertices=vertices,
            arrows=tuple(tuple(a) for a in raw["arrows"]),
            dimension=dimension,
        )
        return presets.preset_klr(quiver)
    raise ParseError(f"unknown preset {name!r}")


def _load_config(path: str) -> Config:
    with open(path, "r", encoding="utf-8") as fh:
        return parse_config(fh.read())


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="qhecke",
        description="exact construction and verification of twisted convolution algebras",
    )
    sub_parsers = parser.add_subparsers(dest="command", required=True)

    def add_common(p, config_required=True):
        p.add_argument("--config", required=config_required, help="config JSON path")
        p.add_argument("--out", help="report JSON path (default stdout)")

    p = sub_parsers.add_parser("describe", help="group, subsystem, cosets, h/q tables")
    add_common(p)
    p = sub_parsers.add_parser("check", help="run verification suites")
    add_common(p)
    p.add_argument("--checks", help="comma-separated suite names")
    p.add_argument("--strict", action="store_true", help="strict suitability")
    p.add_argument("--degree-bound", type=int, default=None)
    p.add_argument("--seed", type=int, default=None)
    p = sub_parsers.add_parser("braid", help="braid defect extraction at (i, s, t)")
    add_common(p)
    p.add_argument("--i", type=int, required=True)
    p.add_argument("--s", type=int, required=True)
    p.add_argument("--t", type=int, required=True)
    p = sub_parsers.add_parser("act", help="evaluate an operator expression")
    add_common(p)
    p.add_argument("--expr", required=True)
    p.add_argument("--component", type=int, default=None)
    p.add_argument("--poly", help="JSON list of [exponents, coefficient] pairs")
    p = sub_parsers.add_parser("localize", help="fixed-point matrices and cross-checks")
    add_common(p)
    p = sub_parsers.add_parser("euler", help="Euler class tables")
    add_common(p)
    p = sub_parsers.add_parser("preset", help="emit a preset config")
    p.add_argument("--name", required=True, help="nilhecke:LABEL | skew:LABEL | klr")
    p.add_argument("--quiver", help="quiver JSON for klr")
    p.add_argument("--out", help="output path (default stdout)")

    args = parser.parse_args(argv)
    t0 = time.time()
    try:
        if args.command == "preset":
            cfg = cmd_preset(args.name, args.quiver)
            text = emit_config(cfg)
            if args.out:
                with open(args.out, "w", encoding="utf-8") as fh:
                    fh.write(text + "\n")
            else:
                print(text)
            return 0

        cfg = _load_config(args.config)
        if args.command == "check":
            if args.strict:
                cfg.strict_suitability = True
            if args.degree_bound is not None:
                cfg.degree_bound = args.degree_bound
            if args.seed is not None:
                cfg.seed = args.seed
            selected = args.checks.split(",") if args.checks else None
            results = run_checks(cfg, selected)
            report = {
                "config_echo": json.loads(emit_config(cfg)),
                "checks": [r.as_dict() for r in results],
                "timings": {"total_s": round(time.time() - t0, 3)},
            }
            _emit(report, args.out)
            failures = [r for r in results if not r.passed]
            if failures:
                print(f"FAILED: {failures[0].name}", file=sys.stderr)
                return 1
            return 0

        handlers = {
            "describe": lambda: cmd_describe(cfg),
            "braid": lambda: cmd_braid(cfg, args.i, args.s, args.t),
            "act": lambda: cmd_act(
                cfg,
                args.expr,
                args.component,
                json.loads(args.poly) if args.poly else None,
            ),
            "localize": lambda: cmd_localize(cfg),
            "euler": lambda: cmd_euler(cfg),
        }
        payload = handlers[args.command]()
        report = {
            "config_echo": json.loads(emit_config(cfg)),
            "result": payload,
            "timings": {"total_s": round(time.time() - t0, 3)},
        }
        _emit(report, args.out)
        if args.command == "localize":
            bad = [c for c in payload["checks"] if c["status"] != "pass"]
            if bad:
                print(f"FAILED: {bad[0]['name']}", file=sys.stderr)
                return 1
        return 0
    except (QheckeError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


def _emit(report: dict, out_path: str | None):
    text = json.dumps(report, indent=2, sort_keys=True)
    if out_path:
        with open(out_path, "w", encoding="utf-8") as fh:
            fh.write(text + "\n")
    else:
        print(text)


if __name__ == "__main__":
    sys.exit(main())
