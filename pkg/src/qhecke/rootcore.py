"""Root data, Weyl groups, lengths, reduced words and Bruhat order.

Roots live in an ambient character lattice Z^N that may exceed the span of
the simple roots (GL-style data keeps its central torus); pairings are plain
dot products against explicitly stored rational coroots, so one reflection
formula v -> v - <v, coroot> * root covers every case.

Cartan labels are realized in simple-root coordinates (the ambient basis IS
the simple roots, coroots are the Cartan-matrix columns), which keeps every
reflection an integer matrix uniformly, including F4.  GL-style data uses the
standard e_a - e_b realization in Z^d.

Elements of the Weyl group are N x N integer matrices; the group object
enumerates them once (desk scale), caches products and inverses, and orders
elements canonically by (length, reduced word).
"""

from __future__ import annotations

from fractions import Fraction

from .errors import InvalidRootDatum

Vec = tuple

# Cartan matrices C[i][j] = <alpha_i, alpha_j^vee>, Bourbaki numbering.
_CARTAN_BUILDERS = {}


def _register(prefix, builder):
    _CARTAN_BUILDERS[prefix] = builder


def _cartan_a(n):
    C = [[0] * n for _ in range(n)]
    for i in range(n):
        C[i][i] = 2
        if i + 1 < n:
            C[i][i + 1] = -1
            C[i + 1][i] = -1
    return C


def _cartan_b(n):
    # alpha_n short: <alpha_{n-1}, alpha_n^vee> = -2
    C = _cartan_a(n)
    if n >= 2:
        C[n - 2][n - 1] = -2
    return C


def _cartan_c(n):
    # alpha_n long: <alpha_n, alpha_{n-1}^vee> = -2
    C = _cartan_a(n)
    if n >= 2:
        C[n - 1][n - 2] = -2
    return C


def _cartan_d(n):
    C = _cartan_a(n)
    if n >= 2:
        C[n - 2][n - 1] = 0
        C[n - 1][n - 2] = 0
    if n >= 3:
        C[n - 3][n - 1] = -1
        C[n - 1][n - 3] = -1
    return C


def _cartan_g2():
    return [[2, -1], [-3, 2]]


def _cartan_f4():
    return [
        [2, -1, 0, 0],
        [-1, 2, -2, 0],
        [0, -1, 2, -1],
        [0, 0, -1, 2],
    ]


_register("A", (_cartan_a, range(1, 5)))
_register("B", (_cartan_b, range(2, 5)))
_register("C", (_cartan_c, range(2, 5)))
_register("D", (_cartan_d, range(2, 5)))


def _dot(a, b):
    return sum(x * y for x, y in zip(a, b))


def _vec(values) -> Vec:
    out = []
    for v in values:
        f = Fraction(v)
        out.append(int(f) if f.denominator == 1 else f)
    return tuple(out)


def _int_vec(values) -> Vec:
    out = tuple(int(v) for v in values)
    if any(Fraction(v) != o for v, o in zip(values, out)):
        raise InvalidRootDatum(f"root is not an integer vector: {values}")
    return out


def _reflection_matrix(n, root, coroot):
    rows = []
    for i in range(n):
        row = []
        for j in range(n):
            c = (1 if i == j else 0) - root[i] * coroot[j]
            f = Fraction(c)
            if f.denominator != 1:
                raise InvalidRootDatum(
                    f"reflection in {root} is not integral on the lattice"
                )
            row.append(int(f))
        rows.append(tuple(row))
    return tuple(rows)


def _mat_mul(a, b):
    n = len(a)
    bt = tuple(zip(*b))
    return tuple(tuple(_dot(row, col) for col in bt) for row in a)


def _mat_vec(m, v):
    return tuple(_dot(row, v) for row in m)


def _mat_transpose(m):
    return tuple(zip(*m))


def _identity(n):
    return tuple(tuple(1 if i == j else 0 for j in range(n)) for i in range(n))


class RootDatum:
    """Ambient lattice, roots, coroots and the generated positive system."""

    def __init__(self, ambient_rank, simple_roots, coroots, roots=None):
        self.ambient_rank = ambient_rank
        self.simple_roots = tuple(_int_vec(a) for a in simple_roots)
        self.simple_coroots = tuple(_vec(c) for c in coroots)
        if len(self.simple_roots) != len(self.simple_coroots):
            raise InvalidRootDatum("simple roots and coroots must align")
        self.rank = len(self.simple_roots)
        self._simple_refl = tuple(
            _reflection_matrix(ambient_rank, a, c)
            for a, c in zip(self.simple_roots, self.simple_coroots)
        )
        gen_roots, coroot_of = self._generate_roots()
        if roots is not None:
            given = {_int_vec(r) for r in roots}
            if given != set(gen_roots):
                raise InvalidRootDatum("explicit roots differ from the generated system")
        self.roots = tuple(sorted(gen_roots))
        self._coroot_of = coroot_of
        self.positive_roots = tuple(sorted(r for r in self.roots if self._is_positive(r)))
        self._positive_set = frozenset(self.positive_roots)
        self._negative_set = frozenset(tuple(-x for x in r) for r in self.positive_roots)
        self._validate()
        self._weyl = None

    def _generate_roots(self):
        frontier = list(self.simple_roots)
        coroot_of = dict(zip(self.simple_roots, self.simple_coroots))
        seen = set(self.simple_roots)
        while frontier:
            new = []
            for r in frontier:
                for k, m in enumerate(self._simple_refl):
                    img = _mat_vec(m, r)
                    if img not in seen:
                        # coroot transforms by the inverse transpose; simple
                        # reflections are involutions so that is plain M^T.
                        mt = _mat_transpose(m)
                        coroot_of[img] = _vec(_mat_vec(mt, coroot_of[r]))
                        seen.add(img)
                        new.append(img)
            frontier = new
            if len(seen) > 10000:
                raise InvalidRootDatum("root generation did not terminate (desk scale)")
        return sorted(seen), coroot_of

    def _simple_combination(self, root):
        """Solve root = sum c_k alpha_k over Q, or None if outside the span."""
        n, m = self.ambient_rank, self.rank
        rows = [
            [Fraction(self.simple_roots[k][i]) for k in range(m)] + [Fraction(root[i])]
            for i in range(n)
        ]
        piv_cols, piv_rows = [], []
        r = 0
        for c in range(m):
            pivot = next((i for i in range(r, n) if rows[i][c] != 0), None)
            if pivot is None:
                continue
            rows[r], rows[pivot] = rows[pivot], rows[r]
            pr = rows[r]
            inv = Fraction(1) / pr[c]
            rows[r] = pr = [x * inv for x in pr]
            for i in range(n):
                if i != r and rows[i][c] != 0:
                    f = rows[i][c]
                    rows[i] = [x - f * y for x, y in zip(rows[i], pr)]
            piv_cols.append(c)
            piv_rows.append(r)
            r += 1
        for i in range(r, n):
            if rows[i][m] != 0:
                return None
        coeffs = [Fraction(0)] * m
        for c, i in zip(piv_cols, piv_rows):
            coeffs[c] = rows[i][m]
        return coeffs

    def _is_positive(self, root):
        coeffs = self._simple_combination(root)
        if coeffs is None:
            raise InvalidRootDatum(f"root {root} outside the simple-root span")
        if all(c >= 0 for c in coeffs):
            return True
        if all(c <= 0 for c in coeffs):
            return False
        raise InvalidRootDatum(f"root {root} is neither positive nor negative")

    def _validate(self):
        root_set = set(self.roots)
        if any(not any(r) for r in root_set):
            raise InvalidRootDatum("zero vector among roots")
        for a, c in zip(self.simple_roots, self.simple_coroots):
            if _dot(a, c) != 2:
                raise InvalidRootDatum(f"<{a}, {c}> != 2")
            if self._simple_combination(_vec(c)) is None:
                raise InvalidRootDatum(f"coroot {c} outside the root span")
        for m in self._simple_refl:
            for r in root_set:
                if _mat_vec(m, r) not in root_set:
                    raise InvalidRootDatum("simple reflection does not permute the roots")
        pos = set(self.positive_roots)
        neg = {tuple(-x for x in r) for r in pos}
        if pos | neg != root_set or pos & neg:
            raise InvalidRootDatum("roots are not a disjoint union of +/- positives")

    def coroot(self, root) -> Vec:
        return self._coroot_of[tuple(root)]

    def pairing(self, v, coroot):
        return _dot(v, coroot)

    def simple_reflection_matrix(self, k: int):
        return self._simple_refl[k]

    def reflection_matrix(self, root):
        return _reflection_matrix(self.ambient_rank, tuple(root), self.coroot(root))

    def weyl(self) -> "WeylGroup":
        if self._weyl is None:
            self._weyl = WeylGroup(self)
        return self._weyl

    def __repr__(self):
        return (
            f"RootDatum(ambient_rank={self.ambient_rank}, rank={self.rank}, "
            f"#roots={len(self.roots)})"
        )


class WeylGroup:
    """Finite Weyl group enumerated as integer matrices, ordered canonically."""

    def __init__(self, datum: RootDatum):
        self.datum = datum
        n = datum.ambient_rank
        ident = _identity(n)
        elems = {ident}
        frontier = [ident]
        gens = datum._simple_refl
        while frontier:
            new = []
            for g in frontier:
                for s in gens:
                    h = _mat_mul(g, s)
                    if h not in elems:
                        elems.add(h)
                        new.append(h)
            frontier = new
            if len(elems) > 2000000:
                raise InvalidRootDatum("Weyl group enumeration exceeded desk scale")
        pos = datum.positive_roots
        neg = {tuple(-x for x in r) for r in pos}

        def inv_count(m):
            return sum(1 for a in pos if _mat_vec(m, a) in neg)

        lengths = {m: inv_count(m) for m in elems}
        words = {}

        def word_of(m):
            w = words.get(m)
            if w is not None:
                return w
            out = []
            cur = m
            while lengths[cur] > 0:
                k = next(
                    k
                    for k in range(datum.rank)
                    if _mat_vec(cur, datum.simple_roots[k]) in neg
                )
                out.append(k)
                cur = _mat_mul(cur, gens[k])
            out.reverse()
            words[m] = tuple(out)
            return words[m]

        ordered = sorted(elems, key=lambda m: (lengths[m], word_of(m)))
        self.elements = tuple(ordered)
        self.index = {m: i for i, m in enumerate(ordered)}
        self._length = tuple(lengths[m] for m in ordered)
        self._word = tuple(word_of(m) for m in ordered)
        self.identity = self.index[ident]
        self.simple = tuple(self.index[s] for s in gens)
        self._mul_cache = {}
        self._inv_cache = {}
        self._downset_cache = {}

    def __len__(self):
        return len(self.elements)

    def matrix(self, g: int):
        return self.elements[g]

    def mul(self, a: int, b: int) -> int:
        key = (a, b)
        r = self._mul_cache.get(key)
        if r is None:
            r = self.index[_mat_mul(self.elements[a], self.elements[b])]
            self._mul_cache[key] = r
        return r

    def mul_word(self, word) -> int:
        g = self.identity
        for k in word:
            g = self.mul(g, self.simple[k])
        return g

    def inv(self, a: int) -> int:
        r = self._inv_cache.get(a)
        if r is None:
            word = self._word[a]
            r = self.mul_word(reversed(word))
            self._inv_cache[a] = r
        return r

    def act(self, g: int, vec) -> Vec:
        return _mat_vec(self.elements[g], tuple(vec))

    def length(self, g: int) -> int:
        return self._length[g]

    def reduced_word(self, g: int) -> tuple:
        return self._word[g]

    def descends_right(self, g: int, k: int) -> bool:
        """True iff l(g s_k) < l(g), i.e. g(alpha_k) is negative."""
        img = self.act(g, self.datum.simple_roots[k])
        return img in self.datum._negative_set

    def downset(self, g: int) -> frozenset:
        """All elements below g in Bruhat order (subword property)."""
        ds = self._downset_cache.get(g)
        if ds is None:
            cur = {self.identity}
            for k in self._word[g]:
                s = self.simple[k]
                cur |= {self.mul(u, s) for u in cur}
            ds = frozenset(cur)
            self._downset_cache[g] = ds
        return ds

    def bruhat_leq(self, u: int, g: int) -> bool:
        return u in self.downset(g)

    def all_reduced_words(self, g: int):
        """Every reduced word of g (desk scale; used by exhaustive checks)."""
        if self._length[g] == 0:
            return [()]
        out = []
        for k in range(self.datum.rank):
            if self.descends_right(g, k):
                prev = self.mul(g, self.simple[k])
                out.extend(w + (k,) for w in self.all_reduced_words(prev))
        return out

    def braid_order(self, k1: int, k2: int) -> int:
        """Order m of s_{k1} s_{k2}."""
        prod = self.mul(self.simple[k1], self.simple[k2])
        m = 1
        g = prod
        while g != self.identity:
            g = self.mul(g, prod)
            m += 1
        return m


class WeylElement:
    """Thin handle on a group element: a matrix plus its enumeration index."""

    __slots__ = ("group", "idx")

    def __init__(self, group: WeylGroup, idx: int):
        self.group = group
        self.idx = idx

    @property
    def matrix(self):
        return self.group.matrix(self.idx)

    def __eq__(self, other):
        return (
            isinstance(other, WeylElement)
            and self.group is other.group
            and self.idx == other.idx
        )

    def __hash__(self):
        return hash((id(self.group), self.idx))

    def __repr__(self):
        return f"WeylElement({self.group.reduced_word(self.idx)})"


def build_root_datum(spec) -> RootDatum:
    """Root datum from a Cartan label, a GL-style spec, or explicit lists.

    Accepted specs: "A2".."A4", "B2".."B4", "C2".."C4", "D2".."D4", "G2",
    "F4", "GL2".."GL6" (or {"gl": d}), or a dict with ambient_rank,
    simple_roots, coroots and optionally roots.
    """
    if isinstance(spec, str):
        label = spec.strip().upper()
        if label.startswith("GL"):
            return _gl_datum(int(label[2:]))
        if label == "G2":
            return _cartan_datum(_cartan_g2())
        if label == "F4":
            return _cartan_datum(_cartan_f4())
        family, n = label[0], label[1:]
        if family in _CARTAN_BUILDERS and n.isdigit():
            builder, allowed = _CARTAN_BUILDERS[family]
            n = int(n)
            if n in allowed:
                return _cartan_datum(builder(n))
        raise InvalidRootDatum(f"unsupported label {spec!r}")
    if isinstance(spec, dict):
        if set(spec) == {"gl"}:
            return _gl_datum(int(spec["gl"]))
        unknown = set(spec) - {"ambient_rank", "simple_roots", "coroots", "roots"}
        if unknown:
            raise InvalidRootDatum(f"unknown root-datum fields {sorted(unknown)}")
        return RootDatum(
            int(spec["ambient_rank"]),
            [_int_vec(a) for a in spec["simple_roots"]],
            [_vec(c) for c in spec["coroots"]],
            roots=spec.get("roots"),
        )
    raise InvalidRootDatum(f"unsupported root datum spec {spec!r}")


def _cartan_datum(C) -> RootDatum:
    n = len(C)
    simples = [tuple(1 if j == k else 0 for j in range(n)) for k in range(n)]
    coroots = [tuple(C[i][k] for i in range(n)) for k in range(n)]
    return RootDatum(n, simples, coroots)


def _gl_datum(d: int) -> RootDatum:
    if d < 2:
        raise InvalidRootDatum("GL datum needs d >= 2")
    simples = []
    for a in range(d - 1):
        v = [0] * d
        v[a], v[a + 1] = 1, -1
        simples.append(tuple(v))
    return RootDatum(d, simples, simples)


def weyl_mul(a: WeylElement, b: WeylElement) -> WeylElement:
    if a.group is not b.group:
        raise ValueError("elements of different groups")
    return WeylElement(a.group, a.group.mul(a.idx, b.idx))


def weyl_inv(a: WeylElement) -> WeylElement:
    return WeylElement(a.group, a.group.inv(a.idx))


def weyl_act(a: WeylElement, v) -> Vec:
    return a.group.act(a.idx, v)


def length(w: WeylElement) -> int:
    return w.group.length(w.idx)


def reduced_word(w: WeylElement) -> tuple:
    return w.group.reduced_word(w.idx)


def all_elements(datum: RootDatum):
    group = datum.weyl()
    return [WeylElement(group, i) for i in range(len(group))]


def bruhat_leq(u: WeylElement, w: WeylElement) -> bool:
    if u.group is not w.group:
        raise ValueError("elements of different groups")
    return u.group.bruhat_leq(u.idx, w.idx)
