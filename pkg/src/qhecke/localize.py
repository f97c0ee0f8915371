"""Euler classes of fixed points and the localization pathway.

Every fixed point carries an Euler class: the product of the weights of its
fiber and tangent data.  Localizing turns module elements into vectors
indexed by group elements (coefficients w(c)/Lambda_w) and operators into
sparse matrices over the fraction field, with the rescaled product
psi_{x,w} * psi_{w,y} = Lambda_w psi_{x,y}.  Comparing the operator
translation of a generator with the multiplicity-formula matrix built from
weight multisets is the central cross-check between the two pathways.

Orientation convention: n_w is computed from its definition (weights of the
subsystem lying in w(negatives)), and the Euler class of the closure of a
crossing cell at the pair (x, xw) uses the curve-direction multiset at the
*target* point, n_{xw} minus (n_{xw} cap n_x).  With this placement the
multiset pathway reproduces the closed forms x(alpha_s) Q_x(s)^{-1} Lambda_x
exactly; the swapped placement flips the sign.
"""

from __future__ import annotations

from collections import Counter
from fractions import Fraction

from .errors import ZeroEulerClass, ZeroWeight
from .polyops import Poly, RatFun
from .repdata import SpringerData, fiber_pair_weights, fiber_weights, h_count, q_poly
from .report import CheckResult
from .subgroup import CosetTable, SubSystem
from .algebra import ModuleElement, TwistedOperator, gen_sigma, module_act


def euler(ms: Counter, nvars: int) -> Poly:
    """Product of the linear forms of a weight multiset; empty product is 1."""
    out = Poly.const(nvars, 1)
    for w in sorted(ms):
        mult = ms[w]
        if mult <= 0:
            continue
        if not any(w):
            raise ZeroWeight("zero weight has zero Euler class")
        out = out * Poly.linear(w) ** mult
    return out


def tangent_n(sub: SubSystem, g: int) -> Counter:
    """Weights of the tangent space at the fixed point of g: the subsystem
    roots landing in the image of the negatives."""
    group = sub.group
    neg_big = sub.datum._negative_set
    ginv = group.inv(g)
    return Counter(a for a in sorted(sub.roots) if group.act(ginv, a) in neg_big)


def tangent_m(sub: SubSystem, gx: int, gy: int) -> Counter:
    """n_x minus (n_x cap n_y), as a multiset."""
    nx = tangent_n(sub, gx)
    ny = tangent_n(sub, gy)
    return nx - (nx & ny)


def lambda_poly(data: SpringerData, sub: SubSystem, g: int) -> Poly:
    """Euler class of the fixed point of g: fiber weights plus tangent weights."""
    ms = fiber_weights(data, sub.group, g) + tangent_n(sub, g)
    return euler(ms, data.datum.ambient_rank)


def lambda_table(data: SpringerData, sub: SubSystem):
    """Lambda_w for every group element; aborts on zero Euler classes."""
    out = []
    for g in range(len(sub.group)):
        lam = lambda_poly(data, sub, g)
        if lam.is_zero():
            raise ZeroEulerClass(f"Lambda vanishes at element {g}")
        out.append(lam)
    return tuple(out)


def q_translate(data: SpringerData, sub: SubSystem, gx: int, s: int) -> Poly:
    """Euler class of F_x / F_{x,xs}: the x-translate of the q-support."""
    group = sub.group
    xs = group.mul(gx, group.simple[s])
    diff = fiber_weights(data, group, gx) - fiber_pair_weights(data, group, gx, xs)
    return euler(diff, data.datum.ambient_rank)


def eu_zbar_w(data: SpringerData, sub: SubSystem, gx: int, w: int) -> Poly:
    """Euler class of the closed cell of w at the pair (x, xw):
    fiber pair weights, tangent at x, and the curve direction at xw."""
    group = sub.group
    gxw = group.mul(gx, w)
    ms = (
        fiber_pair_weights(data, group, gx, gxw)
        + tangent_n(sub, gx)
        + tangent_m(sub, gxw, gx)
    )
    return euler(ms, data.datum.ambient_rank)


def eu_zbar_s(data: SpringerData, sub: SubSystem, table: CosetTable, gx: int, s: int, diagonal: bool = False):
    """Euler class of the crossing cell at (x, xs) (or at (x, x) for the
    diagonal entry on stabilized cosets, which is minus the off entry)."""
    value = eu_zbar_w(data, sub, gx, sub.group.simple[s])
    if diagonal:
        i = table.coset_of[gx]
        if not table.stab(i, s):
            raise ValueError("diagonal entries exist only on stabilized cosets")
        return -value
    return value


def theta(data: SpringerData, sub: SubSystem, table: CosetTable, lambdas, m: ModuleElement) -> dict:
    """Localization of a module element: coefficient w(c)/Lambda_w at each
    fixed point of the coset carrying the component."""
    group = sub.group
    out = {}
    for i, f in m.components.items():
        for g in table.fixed_points_of(i):
            val = RatFun(f.substitute_linear(group.matrix(g)), lambdas[g])
            if val:
                cur = out.get(g)
                out[g] = val if cur is None else cur + val
    return {g: v for g, v in out.items() if v}


def fp_mul(A: dict, B: dict, lambdas) -> dict:
    """Rescaled matrix product: (A*B)_{x,y} = sum_w A_{x,w} Lambda_w B_{w,y}."""
    by_row: dict[int, list] = {}
    for (w, y), c in B.items():
        by_row.setdefault(w, []).append((y, c))
    out: dict[tuple, RatFun] = {}
    for (x, w), a in A.items():
        cols = by_row.get(w)
        if not cols:
            continue
        mid = a * lambdas[w]
        for y, b in cols:
            c = mid * b
            key = (x, y)
            cur = out.get(key)
            s = c if cur is None else cur + c
            if s:
                out[key] = s
            elif key in out:
                del out[key]
    return out


def fp_apply(A: dict, v: dict, lambdas) -> dict:
    """(A*v)_x = sum_w A_{x,w} Lambda_w v_w."""
    out: dict[int, RatFun] = {}
    for (x, w), a in A.items():
        b = v.get(w)
        if b is None:
            continue
        c = a * lambdas[w] * b
        cur = out.get(x)
        s = c if cur is None else cur + c
        if s:
            out[x] = s
        elif x in out:
            del out[x]
    return out


def fp_identity(table: CosetTable, lambdas) -> dict:
    return {
        (g, g): RatFun(Poly.const(lambdas[g].n, 1), lambdas[g])
        for g in range(len(table.group))
    }


def localize_unit(data: SpringerData, sub: SubSystem, table: CosetTable, lambdas, i: int) -> dict:
    n = data.datum.ambient_rank
    return {
        (g, g): RatFun(Poly.const(n, 1), lambdas[g])
        for g in table.fixed_points_of(i)
    }


def localize_var(data: SpringerData, sub: SubSystem, table: CosetTable, lambdas, i: int, t: int) -> dict:
    n = data.datum.ambient_rank
    group = sub.group
    out = {}
    for g in table.fixed_points_of(i):
        num = Poly.variable(n, t).substitute_linear(group.matrix(g))
        val = RatFun(num, lambdas[g])
        if val:
            out[(g, g)] = val
    return out


def localize_sigma(data: SpringerData, sub: SubSystem, table: CosetTable, lambdas, i: int, s: int) -> dict:
    """Multiplicity-formula matrix of a crossing generator: inverse Euler
    classes of the crossing cell at every fixed-point pair it touches."""
    group = sub.group
    n = data.datum.ambient_rank
    one = Poly.const(n, 1)
    stab = table.stab(i, s)
    s_elem = group.simple[s]
    out = {}
    for g in table.fixed_points_of(i):
        gs = group.mul(g, s_elem)
        off = eu_zbar_s(data, sub, table, g, s)
        if off.is_zero():
            raise ZeroEulerClass(f"crossing cell Euler class vanishes at ({g},{gs})")
        out[(g, gs)] = RatFun(one, off)
        if stab:
            out[(g, g)] = RatFun(one, -off)
    return out


def localize_op(sub: SubSystem, table: CosetTable, lambdas, op: TwistedOperator) -> dict:
    """Translate a twisted operator into the fixed-point matrix compatible
    with localization of module elements: entry u(c)/Lambda_u at (u, uw)."""
    group = sub.group
    out: dict[tuple, RatFun] = {}
    for (i, w), c in op.terms.items():
        for u in table.fixed_points_of(i):
            uw = group.mul(u, w)
            val = c.substitute_linear(group.matrix(u)) / RatFun(lambdas[u])
            key = (u, uw)
            cur = out.get(key)
            s = val if cur is None else cur + val
            if s:
                out[key] = s
            elif key in out:
                del out[key]
    return out


def pathway_agreement_check(data: SpringerData, sub: SubSystem, table: CosetTable, lambdas) -> list:
    """Operator translation vs multiplicity formula, entry by entry, for
    every generator."""
    from .algebra import gen_unit, gen_var

    results = []
    n = data.datum.ambient_rank
    for i in table.indices:
        geo = localize_unit(data, sub, table, lambdas, i)
        alg = localize_op(sub, table, lambdas, gen_unit(table, i))
        ok = _fp_equal(geo, alg)
        results.append(CheckResult(f"pathway-unit(i={i})", ok))
        for t in range(n):
            geo = localize_var(data, sub, table, lambdas, i, t)
            alg = localize_op(sub, table, lambdas, gen_var(table, i, t))
            ok = _fp_equal(geo, alg)
            results.append(CheckResult(f"pathway-var(i={i},t={t})", ok))
        for s in range(data.datum.rank):
            geo = localize_sigma(data, sub, table, lambdas, i, s)
            alg = localize_op(sub, table, lambdas, gen_sigma(data, table, i, s))
            ok = _fp_equal(geo, alg)
            results.append(CheckResult(f"pathway-crossing(i={i},s={s})", ok))
    return results


def _fp_equal(A: dict, B: dict) -> bool:
    if set(A) != set(B):
        return False
    return all(A[k] == B[k] for k in A)


def intertwining_check(data: SpringerData, sub: SubSystem, table: CosetTable, lambdas, degree: int = 3) -> list:
    """The localization map intertwines crossing generators with their
    fixed-point matrices on all monomials up to the given degree."""
    from itertools import combinations_with_replacement

    n = data.datum.ambient_rank
    results = []
    monomials = []
    for d in range(degree + 1):
        for combo in combinations_with_replacement(range(n), d):
            e = [0] * n
            for k in combo:
                e[k] += 1
            monomials.append(tuple(e))
    for i in table.indices:
        for s in range(data.datum.rank):
            mat = localize_sigma(data, sub, table, lambdas, i, s)
            sig = gen_sigma(data, table, i, s)
            src = table.act(i, s)
            ok = True
            bad = None
            for e in monomials:
                f = ModuleElement.monomial(n, src, e)
                lhs = fp_apply(mat, theta(data, sub, table, lambdas, f), lambdas)
                rhs = theta(data, sub, table, lambdas, sig.apply(f))
                if not _fp_vec_equal(lhs, rhs):
                    ok, bad = False, {"i": i, "s": s, "monomial": e}
                    break
            results.append(CheckResult(f"intertwine(i={i},s={s})", ok, "", bad))
    return results


def _fp_vec_equal(a: dict, b: dict) -> bool:
    if set(a) != set(b):
        return False
    return all(a[k] == b[k] for k in a)


def theta_injectivity_check(data: SpringerData, sub: SubSystem, table: CosetTable, lambdas, degree: int = 3) -> list:
    """Distinct monomials of bounded degree have distinct localizations."""
    from itertools import combinations_with_replacement

    n = data.datum.ambient_rank
    images = []
    for i in table.indices:
        for d in range(degree + 1):
            for combo in combinations_with_replacement(range(n), d):
                e = [0] * n
                for k in combo:
                    e[k] += 1
                m = ModuleElement.monomial(n, i, tuple(e))
                images.append(((i, tuple(e)), theta(data, sub, table, lambdas, m)))
    ok = True
    bad = None
    for a in range(len(images)):
        for b in range(a + 1, len(images)):
            if _fp_vec_equal(images[a][1], images[b][1]):
                ok, bad = False, {"first": images[a][0], "second": images[b][0]}
    return [CheckResult("localization-injective", ok, f"{len(images)} monomials", bad)]


def theta_equivariance_check(data: SpringerData, sub: SubSystem, table: CosetTable, lambdas, degree: int = 3) -> list:
    """Group-equivariance of localization in the rescaled basis: the
    normalized coefficient of w(c) at x equals that of c at xw."""
    from itertools import combinations_with_replacement

    n = data.datum.ambient_rank
    group = sub.group
    results = []
    monomials = []
    for d in range(degree + 1):
        for combo in combinations_with_replacement(range(n), d):
            e = [0] * n
            for k in combo:
                e[k] += 1
            monomials.append(tuple(e))
    for k in range(data.datum.rank):
        w = group.simple[k]
        ok = True
        bad = None
        for i in table.indices:
            for e in monomials:
                c = ModuleElement.monomial(n, i, e)
                lhs = theta(data, sub, table, lambdas, module_act(table, w, c))
                rhs = theta(data, sub, table, lambdas, c)
                lhs_n = {x: v * RatFun(lambdas[x]) for x, v in lhs.items()}
                rhs_n = {
                    group.mul(x, group.inv(w)): v * RatFun(lambdas[x])
                    for x, v in rhs.items()
                }
                lhs_n = {x: v for x, v in lhs_n.items() if v}
                rhs_n = {x: v for x, v in rhs_n.items() if v}
                if not _fp_vec_equal(lhs_n, rhs_n):
                    ok, bad = False, {"i": i, "monomial": e, "simple": k}
        results.append(CheckResult(f"equivariance(s={k})", ok, "", bad))
    return results


def euler_identities_check(data: SpringerData, sub: SubSystem, table: CosetTable, lambdas) -> list:
    """Sign law, power forms, curve Euler classes and duality, exhaustively."""
    group = sub.group
    datum = data.datum
    n = datum.ambient_rank
    results = []

    ok = True
    bad = None
    for g in range(len(group)):
        ms = tangent_n(sub, g) + fiber_weights(data, group, g)
        dual = Counter({tuple(-x for x in w): m for w, m in ms.items()})
        size = sum(ms.values())
        if euler(dual, n) != euler(ms, n) * Fraction((-1) ** size):
            ok, bad = False, {"element": group.reduced_word(g)}
    results.append(CheckResult("euler-duality", ok, "", bad))

    ok = True
    bad = None
    for g in range(len(group)):
        i = table.coset_of[g]
        for s in range(datum.rank):
            gs = group.mul(g, group.simple[s])
            alpha_img = Poly.linear(group.act(g, datum.simple_roots[s]))
            if table.stab(i, s):
                if euler(tangent_m(sub, gs, g), n) != alpha_img:
                    ok, bad = False, {"element": group.reduced_word(g), "s": s, "which": "target"}
                if euler(tangent_m(sub, g, gs), n) != -alpha_img:
                    ok, bad = False, {"element": group.reduced_word(g), "s": s, "which": "source"}
            else:
                if tangent_n(sub, g) != tangent_n(sub, gs):
                    ok, bad = False, {"element": group.reduced_word(g), "s": s, "which": "equal-n"}
                if tangent_m(sub, g, gs) or tangent_m(sub, gs, g):
                    ok, bad = False, {"element": group.reduced_word(g), "s": s, "which": "empty-m"}
    results.append(CheckResult("curve-euler-classes", ok, "", bad))

    if data.borel_flag:
        ok = True
        bad = None
        for g in range(len(group)):
            i = table.coset_of[g]
            for s in range(datum.rank):
                if not table.stab(i, s):
                    continue
                gs = group.mul(g, group.simple[s])
                h = h_count(data, table, i, s)
                lhs = RatFun(lambdas[g])
                rhs = RatFun(lambdas[gs]) * Fraction((-1) ** (1 + h))
                if lhs != rhs:
                    ok, bad = False, {"element": group.reduced_word(g), "s": s}
        results.append(CheckResult("lambda-sign-law", ok, "", bad))

        ok = True
        bad = None
        for g in range(len(group)):
            i = table.coset_of[g]
            for s in range(datum.rank):
                h = h_count(data, table, i, s)
                alpha_img = RatFun(Poly.linear(group.act(g, datum.simple_roots[s])))
                value = RatFun(eu_zbar_s(data, sub, table, g, s))
                lam = RatFun(lambdas[g])
                want = lam * alpha_img ** ((1 - h) if table.stab(i, s) else -h)
                if value != want:
                    ok, bad = False, {"element": group.reduced_word(g), "s": s}
        results.append(CheckResult("power-forms", ok, "", bad))

    ok = True
    bad = None
    for g in range(len(group)):
        for s in range(datum.rank):
            via_fibers = q_translate(data, sub, g, s)
            i = table.coset_of[g]
            translated = q_poly(data, table, i, s).substitute_linear(group.matrix(g))
            if via_fibers != translated:
                ok, bad = False, {"element": group.reduced_word(g), "s": s}
    results.append(CheckResult("q-translation", ok, "", bad))

    return results


def leading_term_check(data: SpringerData, sub: SubSystem, table: CosetTable, lambdas, s: int, w: int) -> CheckResult:
    """Composition of crossing-cell classes matches the longer cell at all
    leading pairs (u, u*sw); needs l(sw) = l(w) + 1."""
    group = sub.group
    s_elem = group.simple[s]
    sw = group.mul(s_elem, w)
    if group.length(sw) != group.length(w) + 1:
        raise ValueError("length must be additive")
    n = data.datum.ambient_rank
    one = Poly.const(n, 1)
    bad = None
    ok = True
    for u in range(len(group)):
        us = group.mul(u, s_elem)
        lhs = (
            RatFun(one, eu_zbar_w(data, sub, u, s_elem))
            * RatFun(lambdas[us])
            * RatFun(one, eu_zbar_w(data, sub, us, w))
        )
        rhs = RatFun(one, eu_zbar_w(data, sub, u, sw))
        if lhs != rhs:
            ok = False
            bad = {"u": group.reduced_word(u)}
            break
    return CheckResult(
        f"leading-term(s={s},w={group.reduced_word(w)})", ok, "", bad
    )


def leading_term_suite(data: SpringerData, sub: SubSystem, table: CosetTable, lambdas) -> list:
    """All length-additive pairs (s, w), for positive-system twisting data.

    The multiplicativity rests on cut additivity of the twisting weight sets,
    which can fail for asymmetric custom data (e.g. a single highest-root
    copy); the suite is asserted only where the statement is available.
    """
    if not data.borel_flag:
        return [
            CheckResult(
                "leading-term",
                True,
                "skipped: asserted for positive-system twisting data only",
            )
        ]
    group = sub.group
    results = []
    for s in range(data.datum.rank):
        s_elem = group.simple[s]
        for w in range(len(group)):
            if group.length(group.mul(s_elem, w)) == group.length(w) + 1:
                results.append(leading_term_check(data, sub, table, lambdas, s, w))
    return results


def inversion_additivity_check(datum, group, F, x: int, w: int, s: int) -> bool:
    """For a stable weight set F and l(sw) = l(w)+1, the x-translate of the
    cut of sw splits as the s-translate of the cut of w plus the cut of s."""
    s_elem = group.simple[s]
    sw = group.mul(s_elem, w)
    if group.length(sw) != group.length(w) + 1:
        raise ValueError("length must be additive")
    F = frozenset(map(tuple, F))

    def cut(y: int) -> Counter:
        yF = {group.act(y, f) for f in F}
        return Counter(f for f in F if f not in yF)

    lhs = Counter()
    for f, mult in cut(w).items():
        lhs[group.act(x, group.act(s_elem, f))] += mult
    for f, mult in cut(s_elem).items():
        lhs[group.act(x, f)] += mult
    rhs = Counter()
    for f, mult in cut(sw).items():
        rhs[group.act(x, f)] += mult
    return lhs == rhs


def inversion_additivity_suite(datum, group, F) -> list:
    """Exhaustive over all (x, w, s) with additive lengths."""
    ok = True
    bad = None
    count = 0
    for s in range(datum.rank):
        s_elem = group.simple[s]
        for w in range(len(group)):
            if group.length(group.mul(s_elem, w)) != group.length(w) + 1:
                continue
            for x in range(len(group)):
                count += 1
                if not inversion_additivity_check(datum, group, F, x, w, s):
                    ok, bad = False, {
                        "x": group.reduced_word(x),
                        "w": group.reduced_word(w),
                        "s": s,
                    }
    return [CheckResult("inversion-additivity", ok, f"{count} triples", bad)]
