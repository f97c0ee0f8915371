"""Weight-level representation input: the twisting data and its fibers.

The input is r copies of a weight set U_k (the nilpotent directions) and r
copies of a weight set V_k (the target representation).  Everything the
algebra needs is derived here: the h-counts and q-polynomials twisting the
crossing generators, and the fiber weight multisets F_w, F_{x,y} over fixed
points.  Zero weights of V are dropped at ingestion; no derived quantity ever
references them.

Suitability is checked conservatively at weight level (closure under adding
positive roots, and the same for U_k cap s(U_k)); a lenient mode downgrades
failures to warnings since the weight test is sufficient but not necessary.
"""

from __future__ import annotations

from collections import Counter

from .errors import UnsuitableData
from .polyops import Poly
from .report import CheckResult
from .rootcore import RootDatum
from .subgroup import CosetTable, SubSystem


class SpringerData:
    """Immutable bundle of U/V weight sets over a fixed root datum."""

    def __init__(self, datum: RootDatum, U_sets, V_sets):
        self.datum = datum
        self.U_sets = tuple(frozenset(map(tuple, u)) for u in U_sets)
        vs = []
        for v in V_sets:
            cleaned = frozenset(t for t in map(tuple, v) if any(t))
            vs.append(cleaned)
        self.V_sets = tuple(vs)
        if len(self.U_sets) != len(self.V_sets):
            raise ValueError("U and V must have the same number of copies")
        self.r = len(self.U_sets)
        pos = frozenset(datum.positive_roots)
        self.borel_flag = all(u == pos for u in self.U_sets)

    def __repr__(self):
        return f"SpringerData(r={self.r}, borel={self.borel_flag})"


def validate(data: SpringerData, sub: SubSystem, strict: bool = False) -> list:
    """All weight-level invariants; raises UnsuitableData in strict mode."""
    datum = data.datum
    root_set = set(datum.roots)
    pos = datum._positive_set
    group = sub.group
    results = []

    def closed_under(add_set, weights):
        for a in weights:
            for b in add_set:
                s = tuple(x + y for x, y in zip(a, b))
                if s in root_set and s not in weights:
                    return (a, b, s)
        return None

    for k, U in enumerate(data.U_sets):
        ok = U <= root_set
        results.append(
            CheckResult(
                f"U[{k}]-weights-are-roots", ok, "", None if ok else {"copy": k}
            )
        )
        if not ok:
            continue
        bad = closed_under(pos, U)
        results.append(
            CheckResult(
                f"U[{k}]-closed-under-positives",
                bad is None,
                "",
                None if bad is None else {"weight": bad[0], "added": bad[1]},
            )
        )
        for s_idx in range(datum.rank):
            mat = datum.simple_reflection_matrix(s_idx)
            sU = frozenset(tuple(sum(row[j] * a[j] for j in range(len(a))) for row in mat) for a in U)
            inter = U & sU
            bad = closed_under(pos, inter)
            results.append(
                CheckResult(
                    f"U[{k}]-cap-s{s_idx}U-closed",
                    bad is None,
                    "",
                    None if bad is None else {"weight": bad[0], "added": bad[1]},
                )
            )

    phi = sub.roots
    for k, V in enumerate(data.V_sets):
        ok = V <= root_set
        results.append(
            CheckResult(f"V[{k}]-weights-are-roots", ok, "", None if ok else {"copy": k})
        )
        if not ok:
            continue
        stable = all(group.act(g, v) in V for g in sub.members for v in V)
        results.append(CheckResult(f"V[{k}]-W-stable", stable))
        bad = closed_under(phi, V)
        results.append(
            CheckResult(
                f"V[{k}]-closed-under-Phi",
                bad is None,
                "",
                None if bad is None else {"weight": bad[0], "added": bad[1]},
            )
        )

    failures = [r for r in results if not r.passed]
    results.append(
        CheckResult(
            "summary",
            not failures,
            f"{len(results)} weight-level checks over r={data.r} copies",
        )
    )
    if strict and failures:
        raise UnsuitableData("; ".join(r.name for r in failures))
    return results


def h_count(data: SpringerData, table: CosetTable, i: int, s: int) -> int:
    """Number of copies V_k containing x_i(alpha_s); the crossing exponent.

    Only meaningful with the positive-system twisting data.  The wall/loop
    split is asserted: across a wall only weights outside Phi contribute,
    on a stabilized index only weights inside Phi contribute.
    """
    if not data.borel_flag:
        raise ValueError("h-counts require the positive-system twisting data")
    group = table.group
    w = group.act(table.rep(i), data.datum.simple_roots[s])
    total = sum(1 for V in data.V_sets if w in V)
    in_phi = w in table.sub.roots
    if table.stab(i, s):
        split = sum(1 for V in data.V_sets if w in V and in_phi)
    else:
        split = sum(1 for V in data.V_sets if w in V and not in_phi)
    if split != total:
        raise AssertionError(
            f"wall/loop split mismatch at (i={i}, s={s}): {split} != {total}"
        )
    return total


def q_poly(data: SpringerData, table: CosetTable, i: int, s: int) -> Poly:
    """Product of the linear forms alpha over all copies k and weights
    alpha in U_k with s(alpha) outside U_k and x_i(alpha) in V_k."""
    datum = data.datum
    group = table.group
    mat = datum.simple_reflection_matrix(s)
    x = table.rep(i)
    out = Poly.const(datum.ambient_rank, 1)
    for U, V in zip(data.U_sets, data.V_sets):
        for a in sorted(U):
            sa = tuple(sum(row[j] * a[j] for j in range(len(a))) for row in mat)
            if sa in U:
                continue
            if group.act(x, a) in V:
                out = out * Poly.linear(a)
    if data.borel_flag:
        h = h_count(data, table, i, s)
        expected = Poly.linear(datum.simple_roots[s]) ** h
        if out != expected:
            raise AssertionError(f"q != alpha_s^h at (i={i}, s={s})")
    return out


def fiber_weights(data: SpringerData, group, g: int) -> Counter:
    """Multiset of weights of the fiber over the fixed point of g:
    one copy of V_k cap g(U_k) per k."""
    out = Counter()
    for U, V in zip(data.U_sets, data.V_sets):
        gU = {group.act(g, a) for a in U}
        for w in V & gU:
            out[w] += 1
    return out


def fiber_pair_weights(data: SpringerData, group, gx: int, gy: int) -> Counter:
    """Multiset of weights of V_k cap x(U_k) cap y(U_k), summed over k."""
    out = Counter()
    for U, V in zip(data.U_sets, data.V_sets):
        xU = {group.act(gx, a) for a in U}
        yU = {group.act(gy, a) for a in U}
        for w in V & xU & yU:
            out[w] += 1
    return out


def fiber_split_check(data: SpringerData, table: CosetTable) -> list:
    """F_{x_i} minus F_{x_i, x_i s} is the multiset of x_i-translates of the
    q-support; with positive-system twisting data this is x_i(alpha_s)
    repeated h_i(s) times."""
    group = table.group
    datum = data.datum
    results = []
    for i in table.indices:
        x = table.rep(i)
        for s in range(datum.rank):
            xs = group.mul(x, group.simple[s])
            lhs = fiber_weights(data, group, x)
            rhs = fiber_pair_weights(data, group, x, xs)
            mat = datum.simple_reflection_matrix(s)
            expected = Counter()
            for U, V in zip(data.U_sets, data.V_sets):
                for a in U:
                    sa = tuple(sum(row[j] * a[j] for j in range(len(a))) for row in mat)
                    xa = group.act(x, a)
                    if sa not in U and xa in V:
                        expected[xa] += 1
            ok = lhs - rhs == expected and rhs - lhs == Counter()
            if ok and data.borel_flag:
                h = h_count(data, table, i, s)
                ok = expected == Counter(
                    {group.act(x, datum.simple_roots[s]): h} if h else {}
                )
            results.append(
                CheckResult(
                    f"fiber-split(i={i},s={s})",
                    ok,
                    "",
                    None if ok else {"lhs": sorted(lhs.items()), "rhs": sorted(rhs.items())},
                )
            )
    return results
