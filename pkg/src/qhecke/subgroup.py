"""Torus constraints, fixed root subsystems and coset combinatorics.

A finite list of constraint vectors cuts out the subsystem of roots killed by
the defining subgroup: torsion constraints test integrality of the pairing,
generic (one-parameter) constraints test vanishing.  The reflections in that
subsystem generate the small Weyl group W inside the big one, and the right
cosets W\\W_big get canonical representatives characterized by
Phi cap x(Phi_big^+) = Phi^+ (a Borel-compatibility condition, not
length-minimality).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .errors import NonCanonicalizable
from .report import CheckResult
from .rootcore import RootDatum, WeylGroup, _dot, _vec


@dataclass(frozen=True)
class TorusConstraint:
    """One defining constraint: kind "torsion" (pairing in Z) or "generic"
    (pairing zero)."""

    kind: str
    values: tuple

    def __post_init__(self):
        if self.kind not in ("torsion", "generic"):
            raise ValueError(f"unknown constraint kind {self.kind!r}")
        object.__setattr__(self, "values", _vec(self.values))

    def keeps(self, root) -> bool:
        p = Fraction(_dot(root, self.values))
        if self.kind == "torsion":
            return p.denominator == 1
        return p == 0


class SubSystem:
    """The fixed subsystem Phi with its positives, simples and Weyl group W."""

    def __init__(self, datum: RootDatum, roots):
        self.datum = datum
        self.roots = frozenset(roots)
        self.positives = tuple(sorted(r for r in self.roots if r in datum._positive_set))
        self.negatives = frozenset(tuple(-x for x in r) for r in self.positives)
        pos = set(self.positives)
        self.simples = tuple(
            sorted(
                b
                for b in pos
                if not any(
                    tuple(x - y for x, y in zip(b, g)) in pos for g in pos if g != b
                )
            )
        )
        group = datum.weyl()
        self.group = group
        self._refl = tuple(
            group.index[datum.reflection_matrix(b)] for b in self.simples
        )
        members = {group.identity}
        frontier = [group.identity]
        while frontier:
            new = []
            for g in frontier:
                for s in self._refl:
                    h = group.mul(g, s)
                    if h not in members:
                        members.add(h)
                        new.append(h)
            frontier = new
        self.members = frozenset(members)
        self.group_order = len(members)

    def reflection(self, simple_index: int) -> int:
        """Group index of the reflection in the simple_index-th simple of Phi."""
        return self._refl[simple_index]

    def length_in(self, g: int) -> int:
        """Length of g inside W: inversions of Phi^+ (only sensible for g in W)."""
        group = self.group
        return sum(1 for b in self.positives if group.act(g, b) in self.negatives)

    def __repr__(self):
        return (
            f"SubSystem(#roots={len(self.roots)}, #simples={len(self.simples)}, "
            f"#W={self.group_order})"
        )


def fixed_subsystem(datum: RootDatum, constraints) -> SubSystem:
    """Subsystem of roots surviving every constraint (all of them if none)."""
    constraints = tuple(constraints)
    for c in constraints:
        if len(c.values) != datum.ambient_rank:
            raise ValueError(
                f"constraint vector has length {len(c.values)}, "
                f"ambient rank is {datum.ambient_rank}"
            )
    kept = [r for r in datum.roots if all(c.keeps(r) for c in constraints)]
    return SubSystem(datum, kept)


def member_of_W(sub: SubSystem, g: int) -> bool:
    """Descent to the identity through simple reflections of Phi.

    Repeatedly multiplies by a reflection whose simple root is sent negative
    (in Phi); membership in W is equivalent to reaching the identity.
    """
    group = sub.group
    limit = len(sub.positives) + 1
    for _ in range(limit):
        if g == group.identity:
            return True
        k = next(
            (
                k
                for k, b in enumerate(sub.simples)
                if group.act(g, b) in sub.negatives
            ),
            None,
        )
        if k is None:
            return False
        g = group.mul(g, sub.reflection(k))
    return g == group.identity


class CosetTable:
    """Canonical representatives of W\\W_big with the right action by W_big."""

    def __init__(self, sub: SubSystem):
        self.sub = sub
        self.group = sub.group
        group = self.group
        canon = [self._canonicalize(g) for g in range(len(group))]
        reps = sorted(set(canon), key=lambda g: (group.length(g), group.reduced_word(g)))
        self.reps = tuple(reps)
        rep_index = {g: i for i, g in enumerate(reps)}
        self.coset_of = tuple(rep_index[c] for c in canon)
        self.indices = tuple(range(len(reps)))
        rank = sub.datum.rank
        self.action = tuple(
            tuple(self.coset_of[group.mul(x, group.simple[k])] for k in range(rank))
            for x in reps
        )
        self.stab_flags = tuple(
            tuple(self.action[i][k] == i for k in range(rank))
            for i in range(len(reps))
        )

    def _canonicalize(self, g: int) -> int:
        """Replace g by the representative of Wg with Phi cap g(Phi_big^+) = Phi^+."""
        sub, group = self.sub, self.group
        pos_big = sub.datum._positive_set
        ginv = group.inv(g)
        current = {a for a in sub.roots if group.act(ginv, a) in pos_big}
        for _ in range(len(sub.positives) + 1):
            k = next(
                (k for k, b in enumerate(sub.simples) if tuple(-x for x in b) in current),
                None,
            )
            if k is None:
                if set(sub.positives) != current:
                    raise NonCanonicalizable("canonicalization stalled off the positives")
                return g
            s = sub.reflection(k)
            current = {group.act(s, a) for a in current}
            g = group.mul(s, g)
        raise NonCanonicalizable("canonicalization exceeded the iteration bound")

    def __len__(self):
        return len(self.reps)

    def rep(self, i: int) -> int:
        return self.reps[i]

    def act(self, i: int, k: int) -> int:
        """Index of coset i moved by the k-th simple reflection of W_big."""
        return self.action[i][k]

    def act_elem(self, i: int, g: int) -> int:
        """Index of coset i moved by an arbitrary group element."""
        return self.coset_of[self.group.mul(self.reps[i], g)]

    def stab(self, i: int, k: int) -> bool:
        return self.stab_flags[i][k]

    def fixed_points_of(self, i: int):
        """All group elements in the coset Wx_i, in enumeration order."""
        return [g for g in range(len(self.group)) if self.coset_of[g] == i]


def build_coset_table(sub: SubSystem) -> CosetTable:
    return CosetTable(sub)


def length_comparison_check(sub: SubSystem) -> list:
    """l_S(w) <= l_Sbig(w) on W, and simple reflections of W_big lying in W
    are reflections in simples of Phi."""
    group = sub.group
    results = []
    bad = [
        g
        for g in sorted(sub.members)
        if sub.length_in(g) > group.length(g)
    ]
    results.append(
        CheckResult(
            "length-comparison",
            not bad,
            f"checked {len(sub.members)} elements of W",
            None if not bad else {"element_words": [group.reduced_word(g) for g in bad]},
        )
    )
    refl = set(sub._refl)
    bad2 = [k for k, s in enumerate(group.simple) if s in sub.members and s not in refl]
    results.append(
        CheckResult(
            "big-simples-in-W-are-simples",
            not bad2,
            f"checked {len(group.simple)} simple reflections",
            None if not bad2 else {"simple_indices": bad2},
        )
    )
    return results


def _subgroup_elements(group: WeylGroup, gen_indices) -> frozenset:
    members = {group.identity}
    frontier = [group.identity]
    gens = tuple(gen_indices)
    while frontier:
        new = []
        for g in frontier:
            for s in gens:
                h = group.mul(g, s)
                if h not in members:
                    members.add(h)
                    new.append(h)
        frontier = new
    return frozenset(members)


def s_adapted(sub: SubSystem, J) -> bool:
    """Adaptedness of J: every reduced expression of a simple reflection of W
    either avoids J or stays inside J."""
    group = sub.group
    J = frozenset(J)
    for s in sub._refl:
        for word in group.all_reduced_words(s):
            letters = set(word)
            if letters & J and not letters <= J:
                return False
    return True


def _minimal_coset_reps(group: WeylGroup, J) -> frozenset:
    """Elements with no right descent in J (representatives of W_big/W_J)."""
    return frozenset(
        g
        for g in range(len(group))
        if not any(group.descends_right(g, k) for k in J)
    )


def _w_minimal_reps(sub: SubSystem, L_refl) -> frozenset:
    """Elements of W with no right descent along the reflections in L_refl,
    descents measured by Phi-inversion count."""
    group = sub.group
    out = set()
    for g in sub.members:
        lg = sub.length_in(g)
        if all(sub.length_in(group.mul(g, t)) > lg for t in L_refl):
            out.add(g)
    return frozenset(out)


def factorization_check(sub: SubSystem, J, K) -> list:
    """Coset factorizations of W against parabolic data of W_big.

    For S-adapted J (and K): minimal coset representatives restrict, the
    two-sided minimal representatives restrict, and the canonical
    factorization w = w^J w_J of any w in W has both parts in W.
    """
    group = sub.group
    J = tuple(sorted(set(J)))
    K = tuple(sorted(set(K)))
    results = []
    WJ = _subgroup_elements(group, (group.simple[k] for k in J))
    WK = _subgroup_elements(group, (group.simple[k] for k in K))
    L_refl = tuple(t for t in sub._refl if t in WJ)
    M_refl = tuple(t for t in sub._refl if t in WK)

    big_minJ = _minimal_coset_reps(group, J)
    WL_min = _w_minimal_reps(sub, L_refl)
    lhs = WL_min
    rhs = sub.members & big_minJ
    results.append(
        CheckResult(
            "minimal-reps-restrict",
            lhs == rhs,
            f"J={J}: {len(lhs)} vs {len(rhs)} representatives",
            None
            if lhs == rhs
            else {"only_W_side": sorted(map(group.reduced_word, lhs - rhs)),
                  "only_big_side": sorted(map(group.reduced_word, rhs - lhs))},
        )
    )

    bad = []
    for w in sorted(sub.members):
        y = w
        while True:
            k = next((k for k in J if group.descends_right(y, k)), None)
            if k is None:
                break
            y = group.mul(y, group.simple[k])
        wJ = group.mul(group.inv(y), w)
        if y not in sub.members or wJ not in sub.members:
            bad.append(group.reduced_word(w))
    results.append(
        CheckResult(
            "factorization-parts-in-W",
            not bad,
            f"J={J}: checked {len(sub.members)} elements",
            None if not bad else {"elements": bad},
        )
    )

    big_minK = _minimal_coset_reps(group, K)
    two_sided_big = frozenset(
        g for g in range(len(group)) if group.inv(g) in big_minJ and g in big_minK
    )
    WM_min = _w_minimal_reps(sub, M_refl)
    two_sided_W = frozenset(g for g in sub.members if group.inv(g) in WL_min and g in WM_min)
    lhs2 = two_sided_big & sub.members
    results.append(
        CheckResult(
            "two-sided-reps-restrict",
            lhs2 == two_sided_W,
            f"J={J}, K={K}: {len(lhs2)} vs {len(two_sided_W)}",
            None
            if lhs2 == two_sided_W
            else {"only_big": sorted(map(group.reduced_word, lhs2 - two_sided_W)),
                  "only_W": sorted(map(group.reduced_word, two_sided_W - lhs2))},
        )
    )
    return results
