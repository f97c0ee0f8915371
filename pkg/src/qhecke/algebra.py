"""The twisted-operator algebra acting on a direct sum of polynomial rings.

An operator is a finite sum of terms (i, c, w): the term consumes the
component indexed by the coset i*w, substitutes the group element w into the
input polynomial, multiplies by the rational-function coefficient c and
deposits the result in component i.  Products follow the induced rule
(i, c, w) * (i*w, c', w') = (i, c*w(c'), w*w'); everything is exact.

Generators: unit projections, multiplication by coordinate variables, and
the crossing generators built from the q-polynomials (divided difference on
stabilized indices, twisted shift across walls).  Normal forms and the
braid-defect extraction both run descending-length elimination against the
crossing-word basis.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .errors import (
    ExtractionStuck,
    NonIntegralResult,
    NonPolynomialCoefficient,
    NotInSpan,
)
from .polyops import Poly, RatFun
from .repdata import SpringerData, h_count, q_poly
from .report import CheckResult
from .subgroup import CosetTable


class ModuleElement:
    """Finitely supported element of the direct sum of component rings."""

    __slots__ = ("n", "components")

    def __init__(self, n: int, components=None):
        self.n = n
        comp = {}
        if components:
            for i, f in components.items():
                if f:
                    comp[i] = f
        self.components = comp

    @classmethod
    def monomial(cls, n: int, i: int, exponents) -> "ModuleElement":
        return cls(n, {i: Poly(n, {tuple(exponents): 1})})

    @classmethod
    def unit(cls, n: int, i: int) -> "ModuleElement":
        return cls(n, {i: Poly.const(n, 1)})

    def __add__(self, other):
        out = dict(self.components)
        for i, f in other.components.items():
            g = out.get(i)
            s = f if g is None else g + f
            if s:
                out[i] = s
            elif i in out:
                del out[i]
        return ModuleElement(self.n, out)

    def __sub__(self, other):
        return self + ModuleElement(other.n, {i: -f for i, f in other.components.items()})

    def __mul__(self, scalar):
        return ModuleElement(self.n, {i: f * scalar for i, f in self.components.items()})

    __rmul__ = __mul__

    def __eq__(self, other):
        return isinstance(other, ModuleElement) and self.components == other.components

    def __bool__(self):
        return bool(self.components)

    def is_zero(self):
        return not self.components

    def __repr__(self):
        return f"ModuleElement({self.components!r})"


def module_act(table: CosetTable, g: int, m: ModuleElement) -> ModuleElement:
    """Left group action on the module: component i lands in i*g^{-1}."""
    group = table.group
    mat = group.matrix(g)
    ginv = group.inv(g)
    out = {}
    for i, f in m.components.items():
        j = table.act_elem(i, ginv)
        img = f.substitute_linear(mat)
        if j in out:
            img = out[j] + img
        if img:
            out[j] = img
    return ModuleElement(m.n, out)


class TwistedOperator:
    """Finite sum of twisted terms keyed by (component index, group element)."""

    __slots__ = ("table", "terms")

    def __init__(self, table: CosetTable, terms=None):
        self.table = table
        t = {}
        if terms:
            for key, c in terms.items():
                if c:
                    t[key] = c
        self.terms = t

    def _n(self):
        return self.table.sub.datum.ambient_rank

    def __add__(self, other):
        out = dict(self.terms)
        for key, c in other.terms.items():
            cur = out.get(key)
            s = c if cur is None else cur + c
            if s:
                out[key] = s
            elif key in out:
                del out[key]
        return TwistedOperator(self.table, out)

    def __sub__(self, other):
        return self + (-other)

    def __neg__(self):
        return TwistedOperator(self.table, {k: -c for k, c in self.terms.items()})

    def scale(self, scalar):
        if isinstance(scalar, (int, Fraction)):
            if not scalar:
                return TwistedOperator(self.table)
        return TwistedOperator(
            self.table, {k: c * scalar for k, c in self.terms.items()}
        )

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        table, group = self.table, self.table.group
        out = {}
        for (i, g1), c1 in self.terms.items():
            j = table.act_elem(i, g1)
            m1 = group.matrix(g1)
            for (j2, g2), c2 in other.terms.items():
                if j2 != j:
                    continue
                key = (i, group.mul(g1, g2))
                c = c1 * c2.substitute_linear(m1)
                cur = out.get(key)
                s = c if cur is None else cur + c
                if s:
                    out[key] = s
                elif key in out:
                    del out[key]
        return TwistedOperator(table, out)

    __rmul__ = scale

    def __eq__(self, other):
        if not isinstance(other, TwistedOperator):
            return NotImplemented
        if set(self.terms) != set(other.terms):
            return False
        return all(self.terms[k] == other.terms[k] for k in self.terms)

    def is_zero(self):
        return not self.terms

    def support(self):
        return sorted(self.terms)

    def apply(self, m: ModuleElement) -> ModuleElement:
        """Evaluate on a module element; results must clear denominators."""
        table, group = self.table, self.table.group
        acc: dict[int, RatFun] = {}
        for (i, g), c in self.terms.items():
            j = table.act_elem(i, g)
            f = m.components.get(j)
            if f is None:
                continue
            val = c * RatFun(f.substitute_linear(group.matrix(g)))
            cur = acc.get(i)
            acc[i] = val if cur is None else cur + val
        out = {}
        for i, val in acc.items():
            if val.is_zero():
                continue
            if not val.is_polynomial():
                raise NonIntegralResult(
                    f"component {i} evaluated to a non-polynomial: {val!r}"
                )
            out[i] = val.as_poly()
        return ModuleElement(m.n, out)

    def graded_degree(self):
        """Common artifact degree of all terms, or None if inhomogeneous."""
        deg = None
        for c in self.terms.values():
            if not c.is_homogeneous():
                return None
            d = c.artifact_degree()
            if deg is None:
                deg = d
            elif deg != d:
                return None
        return 0 if deg is None else deg

    def __repr__(self):
        group = self.table.group
        parts = [
            f"({i}, {c!r}, {group.reduced_word(g)})"
            for (i, g), c in sorted(self.terms.items())
        ]
        return "TwistedOperator[" + ", ".join(parts) + "]"


def gen_unit(table: CosetTable, i: int) -> TwistedOperator:
    n = table.sub.datum.ambient_rank
    return TwistedOperator(
        table, {(i, table.group.identity): RatFun.from_scalar(n, 1)}
    )


def gen_var(table: CosetTable, i: int, t: int) -> TwistedOperator:
    n = table.sub.datum.ambient_rank
    return TwistedOperator(
        table, {(i, table.group.identity): RatFun(Poly.variable(n, t))}
    )


def gen_sigma(data: SpringerData, table: CosetTable, i: int, s: int) -> TwistedOperator:
    """Crossing generator at (i, s): q-twisted divided difference when the
    reflection stabilizes the coset, q-twisted shift across the wall."""
    datum = data.datum
    group = table.group
    q = q_poly(data, table, i, s)
    s_elem = group.simple[s]
    if table.stab(i, s):
        alpha = Poly.linear(datum.simple_roots[s])
        c = RatFun(q, alpha)
        return TwistedOperator(table, {(i, s_elem): c, (i, group.identity): -c})
    return TwistedOperator(table, {(i, s_elem): RatFun(q)})


def left_mult(table: CosetTable, i: int, c) -> TwistedOperator:
    """Multiplication by a coefficient inside component i."""
    if isinstance(c, Poly):
        c = RatFun(c)
    elif isinstance(c, (int, Fraction)):
        c = RatFun.from_scalar(table.sub.datum.ambient_rank, c)
    return TwistedOperator(table, {(i, table.group.identity): c})


def diag_mult(table: CosetTable, m: ModuleElement) -> TwistedOperator:
    """Left multiplication by a module element, acting diagonally."""
    e = table.group.identity
    return TwistedOperator(table, {(i, e): RatFun(f) for i, f in m.components.items()})


def sigma_word(data: SpringerData, table: CosetTable, i: int, word) -> TwistedOperator:
    """Left-to-right crossing product with index tracking along the word."""
    op = gen_unit(table, i)
    cur = i
    for k in word:
        op = op * gen_sigma(data, table, cur, k)
        cur = table.act(cur, k)
    return op


def sigma_basis_element(data: SpringerData, table: CosetTable, g: int) -> TwistedOperator:
    """sigma(w) summed over all components, for the fixed reduced word of w."""
    word = table.group.reduced_word(g)
    op = TwistedOperator(table)
    for i in table.indices:
        op = op + sigma_word(data, table, i, word)
    return op


def straightening_poly(data: SpringerData, table: CosetTable, i: int, s: int, t: int) -> ModuleElement:
    """The polynomial correction in the variable-crossing commutation."""
    n = data.datum.ambient_rank
    result = gen_sigma(data, table, i, s).apply(
        ModuleElement(n, {i: Poly.variable(n, t)})
    )
    return result


@dataclass
class BraidDefect:
    """Extraction result: defect coefficients over the short-word basis."""

    i: int
    s: int
    t: int
    order: int
    coefficients: dict  # group element -> RatFun
    polynomial_flags: dict  # group element -> bool
    words: dict  # group element -> reduced word

    def all_zero(self) -> bool:
        return all(c.is_zero() for c in self.coefficients.values())

    def all_polynomial(self) -> bool:
        return all(self.polynomial_flags.values())


def _dihedral_elements(group, s: int, t: int, m: int):
    """Elements of <s,t> keyed by length; each короткое word is unique."""
    out = {0: [group.identity]}
    words = {group.identity: ()}
    for length in range(1, m + 1):
        elems = []
        for first in (s, t):
            word = tuple((first, (s + t) - first)[j % 2] for j in range(length))
            g = group.mul_word(word)
            if g not in words:
                words[g] = word
                elems.append(g)
        out[length] = elems
    return out, words


def braid_defect(data: SpringerData, table: CosetTable, i: int, s: int, t: int) -> BraidDefect:
    """Difference of the two alternating crossing words, eliminated against
    the shorter crossing words by descending length."""
    group = table.group
    m = group.braid_order(s, t)
    if m not in (3, 4, 6):
        raise ValueError(f"braid extraction needs order 3, 4 or 6; got {m}")
    word_s = tuple((s, t)[j % 2] for j in range(m))
    word_t = tuple((t, s)[j % 2] for j in range(m))
    delta = sigma_word(data, table, i, word_s) - sigma_word(data, table, i, word_t)
    by_length, word_of = _dihedral_elements(group, s, t, m)
    x = group.mul_word(word_s)
    allowed = set(word_of) - {x}

    coefficients = {}
    guard = 0
    while delta.terms:
        guard += 1
        if guard > 8 * m:
            raise ExtractionStuck("descending elimination did not terminate")
        support = sorted(delta.terms)
        for (row, g) in support:
            if row != i:
                raise ExtractionStuck(f"stray row {row} in defect support")
            if g not in word_of or not group.bruhat_leq(g, x):
                raise ExtractionStuck(
                    f"support element {group.reduced_word(g)} outside the interval"
                )
        v = max((g for (_, g) in support), key=lambda g: (group.length(g), g))
        if v not in allowed:
            raise ExtractionStuck(
                f"maximal support element {group.reduced_word(v)} not below the braid word"
            )
        basis = sigma_word(data, table, i, word_of[v])
        lead = basis.terms[(i, v)]
        qv = delta.terms[(i, v)] / lead
        coefficients[v] = qv
        delta = delta - left_mult(table, i, qv) * basis

    for length in range(m):
        for g in by_length[length]:
            coefficients.setdefault(g, RatFun.from_scalar(data.datum.ambient_rank, 0))
    flags = {g: c.is_polynomial() for g, c in coefficients.items()}
    return BraidDefect(
        i, s, t, m, coefficients, flags, {g: word_of[g] for g in coefficients}
    )


def braid_assumptions_hold(data: SpringerData, table: CosetTable, s: int, t: int) -> bool:
    """Exponent bounds under which defect coefficients are certified
    polynomial: order 4 needs h in {0,1,2} on doubly stabilized indices,
    order 6 needs h = 0 there."""
    if not data.borel_flag:
        return False
    m = table.group.braid_order(s, t)
    if m in (2, 3):
        return True
    for i in table.indices:
        if table.stab(i, s) and table.stab(i, t):
            hs = h_count(data, table, i, s)
            ht = h_count(data, table, i, t)
            if m == 4 and not (hs in (0, 1, 2) and ht in (0, 1, 2)):
                return False
            if m == 6 and not (hs == 0 and ht == 0):
                return False
    return True


@dataclass
class NormalForm:
    """Coefficients of an operator over the crossing-word basis sigma(w)."""

    coefficients: dict  # group element -> ModuleElement

    def support(self):
        return sorted(self.coefficients)


def normal_form(data: SpringerData, table: CosetTable, op: TwistedOperator) -> NormalForm:
    """Descending-length elimination against sigma(w) for the fixed reduced
    words; coefficients must come out polynomial and the remainder zero."""
    group = table.group
    n = data.datum.ambient_rank
    basis_cache: dict[int, TwistedOperator] = {}
    coeffs: dict[int, dict[int, Poly]] = {}
    remaining = TwistedOperator(table, dict(op.terms))
    guard = 0
    while remaining.terms:
        guard += 1
        if guard > len(group) * (1 + len(table.indices)):
            raise NotInSpan("elimination did not terminate")
        v = max(
            (g for (_, g) in remaining.terms),
            key=lambda g: (group.length(g), g),
        )
        basis = basis_cache.get(v)
        if basis is None:
            basis = sigma_basis_element(data, table, v)
            basis_cache[v] = basis
        row_coeffs = {}
        for i in table.indices:
            c = remaining.terms.get((i, v))
            if c is None:
                continue
            lead = basis.terms[(i, v)]
            q = c / lead
            if not q.is_polynomial():
                raise NonPolynomialCoefficient(
                    f"coefficient of sigma({group.reduced_word(v)}) at row {i}"
                )
            row_coeffs[i] = q.as_poly()
        if not row_coeffs:
            raise NotInSpan(
                f"no eliminable row at {group.reduced_word(v)}"
            )
        coeffs[v] = row_coeffs
        correction = TwistedOperator(table)
        for i, q in row_coeffs.items():
            correction = correction + left_mult(table, i, q) * basis
        remaining = remaining - correction
        for i in table.indices:
            if (i, v) in remaining.terms:
                raise NotInSpan("leading coefficient failed to cancel")
    return NormalForm({g: ModuleElement(n, cs) for g, cs in coeffs.items()})


def reassemble(data: SpringerData, table: CosetTable, nf: NormalForm) -> TwistedOperator:
    out = TwistedOperator(table)
    for g, me in nf.coefficients.items():
        out = out + diag_mult(table, me) * sigma_basis_element(data, table, g)
    return out


def check_relations(data: SpringerData, table: CosetTable) -> list:
    """Exact verification of the defining relations on all generators."""
    datum = data.datum
    group = table.group
    n = datum.ambient_rank
    results = []

    ok = True
    bad = None
    for i in table.indices:
        for j in table.indices:
            prod = gen_unit(table, i) * gen_unit(table, j)
            want = gen_unit(table, i) if i == j else TwistedOperator(table)
            if prod != want:
                ok, bad = False, {"i": i, "j": j}
    results.append(CheckResult("idempotents", ok, f"#I={len(table.indices)}", bad))

    ok = True
    bad = None
    for i in table.indices:
        for t in range(n):
            z = gen_var(table, i, t)
            if gen_unit(table, i) * z * gen_unit(table, i) != z:
                ok, bad = False, {"i": i, "t": t}
        for s in range(datum.rank):
            sig = gen_sigma(data, table, i, s)
            if gen_unit(table, i) * sig * gen_unit(table, table.act(i, s)) != sig:
                ok, bad = False, {"i": i, "s": s}
    results.append(CheckResult("idempotent-sandwich", ok, "", bad))

    ok = True
    bad = None
    for i in table.indices:
        for t1 in range(n):
            for t2 in range(t1 + 1, n):
                a, b = gen_var(table, i, t1), gen_var(table, i, t2)
                if a * b != b * a:
                    ok, bad = False, {"i": i, "t": (t1, t2)}
    results.append(CheckResult("polynomial-commutation", ok, "", bad))

    if data.borel_flag:
        ok = True
        bad = None
        for i in table.indices:
            for s in range(datum.rank):
                isx = table.act(i, s)
                lhs = gen_sigma(data, table, i, s) * gen_sigma(data, table, isx, s)
                alpha = Poly.linear(datum.simple_roots[s])
                h_i = h_count(data, table, i, s)
                if isx == i:
                    if h_i % 2 == 0:
                        rhs = TwistedOperator(table)
                    else:
                        rhs = (
                            left_mult(table, i, alpha ** (h_i - 1))
                            * gen_sigma(data, table, i, s)
                        ).scale(-2)
                else:
                    h_is = h_count(data, table, isx, s)
                    value = alpha ** (h_i + h_is) * Fraction((-1) ** h_is)
                    rhs = left_mult(table, i, value)
                if lhs != rhs:
                    ok, bad = False, {"i": i, "s": s}
        results.append(CheckResult("square-closed-form", ok, "", bad))

    ok = True
    bad = None
    for i in table.indices:
        for s in range(datum.rank):
            isx = table.act(i, s)
            smat = group.matrix(group.simple[s])
            sig = gen_sigma(data, table, i, s)
            for t in range(n):
                lhs = sig * gen_var(table, isx, t) - left_mult(
                    table, i, Poly.variable(n, t).substitute_linear(smat)
                ) * sig
                c = straightening_poly(data, table, i, s, t)
                rhs = diag_mult(table, c) if isx == i else TwistedOperator(table)
                if lhs != rhs:
                    ok, bad = False, {"i": i, "s": s, "t": t}
    results.append(CheckResult("straightening", ok, "", bad))

    ok = True
    bad = None
    for s in range(datum.rank):
        for t in range(s + 1, datum.rank):
            if group.braid_order(s, t) != 2:
                continue
            for i in table.indices:
                lhs = gen_sigma(data, table, i, s) * gen_sigma(
                    data, table, table.act(i, s), t
                )
                rhs = gen_sigma(data, table, i, t) * gen_sigma(
                    data, table, table.act(i, t), s
                )
                if lhs != rhs:
                    ok, bad = False, {"i": i, "s": s, "t": t}
    results.append(CheckResult("commuting-braid", ok, "", bad))

    if data.borel_flag:
        ok = True
        bad = None
        details = []
        for s in range(datum.rank):
            for t in range(s + 1, datum.rank):
                m = group.braid_order(s, t)
                if m == 2:
                    continue
                certified = braid_assumptions_hold(data, table, s, t)
                for i in table.indices:
                    try:
                        defect = braid_defect(data, table, i, s, t)
                    except ExtractionStuck as exc:
                        ok, bad = False, {"i": i, "s": s, "t": t, "error": str(exc)}
                        continue
                    if certified and not defect.all_polynomial():
                        ok, bad = False, {"i": i, "s": s, "t": t, "nonpoly": True}
                details.append(f"m({s},{t})={m}{'' if certified else ' (uncertified)'}")
        results.append(
            CheckResult("braid-defect-extraction", ok, "; ".join(details), bad)
        )

    return results


def generator_grading_check(data: SpringerData, table: CosetTable) -> list:
    """Degree bookkeeping: units 0, variables 2, crossings 2 deg q - 2 on
    stabilized indices and 2 deg q across walls."""
    datum = data.datum
    results = []
    ok = True
    bad = None
    for i in table.indices:
        if gen_unit(table, i).graded_degree() != 0:
            ok, bad = False, {"i": i, "gen": "unit"}
        for t in range(datum.ambient_rank):
            if gen_var(table, i, t).graded_degree() != 2:
                ok, bad = False, {"i": i, "gen": f"var{t}"}
        for s in range(datum.rank):
            sig = gen_sigma(data, table, i, s)
            q = q_poly(data, table, i, s)
            want = 2 * q.degree() - 2 if table.stab(i, s) else 2 * q.degree()
            if sig.graded_degree() != want:
                ok, bad = False, {"i": i, "s": s, "want": want}
    results.append(CheckResult("generator-grading", ok, "", bad))
    return results
