import pytest

from qhecke.errors import InvalidRootDatum
from qhecke.rootcore import (
    WeylElement,
    all_elements,
    bruhat_leq,
    build_root_datum,
    length,
    reduced_word,
    weyl_act,
    weyl_inv,
    weyl_mul,
)


@pytest.fixture(scope="module")
def a2():
    return build_root_datum("A2")


@pytest.fixture(scope="module")
def b2():
    return build_root_datum("B2")


@pytest.fixture(scope="module")
def g2():
    return build_root_datum("G2")


class TestBuild:
    def test_a2_positive_system(self, a2):
        assert set(a2.positive_roots) == {(1, 0), (0, 1), (1, 1)}

    def test_b2_reflection_identities(self, b2):
        # the short simple root pairs to -2 against the long one's coroot
        group = b2.weyl()
        short = next(
            k
            for k in range(2)
            if b2.pairing(b2.simple_roots[1 - k], b2.coroot(b2.simple_roots[k])) == -2
        )
        long = 1 - short
        s, t = group.simple[short], group.simple[long]
        a_s, a_t = b2.simple_roots[short], b2.simple_roots[long]
        # s(alpha_t) = 2 alpha_s + alpha_t, t(alpha_s) = alpha_s + alpha_t
        assert group.act(s, a_t) == tuple(2 * x + y for x, y in zip(a_s, a_t))
        assert group.act(t, a_s) == tuple(x + y for x, y in zip(a_s, a_t))
        # st(alpha_s) = alpha_s + alpha_t
        st = group.mul(s, t)
        assert group.act(st, a_s) == tuple(x + y for x, y in zip(a_s, a_t))

    def test_g2_reflection_identities(self, g2):
        group = g2.weyl()
        a_s, a_t = g2.simple_roots  # short, long
        s, t = group.simple
        assert group.act(s, a_t) == tuple(3 * x + y for x, y in zip(a_s, a_t))
        ts = group.mul(t, s)
        assert group.act(ts, a_t) == tuple(3 * x + 2 * y for x, y in zip(a_s, a_t))

    @pytest.mark.parametrize(
        "label,n_roots,order",
        [
            ("A1", 2, 2),
            ("A2", 6, 6),
            ("A3", 12, 24),
            ("B2", 8, 8),
            ("B3", 18, 48),
            ("C3", 18, 48),
            ("D4", 24, 192),
            ("G2", 12, 12),
            ("F4", 48, 1152),
        ],
    )
    def test_cardinalities(self, label, n_roots, order):
        datum = build_root_datum(label)
        assert len(datum.roots) == n_roots
        assert len(datum.weyl()) == order

    def test_gl_style(self):
        datum = build_root_datum("GL3")
        assert datum.ambient_rank == 3
        assert len(datum.roots) == 6
        group = datum.weyl()
        assert len(group) == 6
        # matrices fix the diagonal direction orthogonal to the root span
        for g in range(len(group)):
            assert group.act(g, (1, 1, 1)) == (1, 1, 1)

    def test_explicit_datum(self):
        datum = build_root_datum(
            {
                "ambient_rank": 2,
                "simple_roots": [[1, 0], [0, 1]],
                "coroots": [[2, -1], [-1, 2]],
            }
        )
        assert set(datum.positive_roots) == {(1, 0), (0, 1), (1, 1)}

    def test_invalid_label(self):
        with pytest.raises(InvalidRootDatum):
            build_root_datum("E8")
        with pytest.raises(InvalidRootDatum):
            build_root_datum("A9")

    def test_invalid_pairing(self):
        with pytest.raises(InvalidRootDatum):
            build_root_datum(
                {
                    "ambient_rank": 2,
                    "simple_roots": [[1, 0], [0, 1]],
                    "coroots": [[1, 0], [0, 2]],
                }
            )

    def test_explicit_roots_must_match(self):
        with pytest.raises(InvalidRootDatum):
            build_root_datum(
                {
                    "ambient_rank": 2,
                    "simple_roots": [[1, 0], [0, 1]],
                    "coroots": [[2, -1], [-1, 2]],
                    "roots": [[1, 0], [-1, 0]],
                }
            )


class TestGroupOps:
    def test_involutions(self, a2):
        for w in all_elements(a2):
            s = w
            for k in range(a2.rank):
                gen = WeylElement(w.group, w.group.simple[k])
                assert weyl_mul(gen, gen).idx == w.group.identity

    def test_inverse(self, b2):
        for w in all_elements(b2):
            assert weyl_mul(w, weyl_inv(w)).idx == w.group.identity

    def test_action_example(self, a2):
        group = a2.weyl()
        s1 = WeylElement(group, group.simple[0])
        assert weyl_act(s1, a2.simple_roots[1]) == (1, 1)

    def test_identity_has_empty_word(self, a2):
        group = a2.weyl()
        e = WeylElement(group, group.identity)
        assert length(e) == 0 and reduced_word(e) == ()

    @pytest.mark.parametrize("label", ["A2", "B2", "G2", "A3"])
    def test_reduced_words_remultiply(self, label):
        datum = build_root_datum(label)
        group = datum.weyl()
        for g in range(len(group)):
            word = group.reduced_word(g)
            assert len(word) == group.length(g)
            assert group.mul_word(word) == g

    def test_longest_elements(self, a2, b2):
        ga, gb = a2.weyl(), b2.weyl()
        assert max(ga.length(g) for g in range(len(ga))) == 3
        assert ga.reduced_word(max(range(len(ga)), key=ga.length)) == (0, 1, 0)
        assert max(gb.length(g) for g in range(len(gb))) == 4

    @pytest.mark.parametrize("label", ["A2", "B2"])
    def test_length_subadditive(self, label):
        group = build_root_datum(label).weyl()
        for a in range(len(group)):
            for b in range(len(group)):
                ab = group.mul(a, b)
                assert group.length(ab) <= group.length(a) + group.length(b)


def subword_closure(group, word):
    """All products of subwords of a word, by brute-force enumeration."""
    from itertools import combinations

    out = set()
    for r in range(len(word) + 1):
        for positions in combinations(range(len(word)), r):
            out.add(group.mul_word(word[p] for p in positions))
    return out


class TestBruhat:
    def test_identity_below_everything(self, a2):
        group = a2.weyl()
        for g in range(len(group)):
            assert group.bruhat_leq(group.identity, g)
            assert group.bruhat_leq(g, g)

    def test_spec_examples(self, a2):
        group = a2.weyl()
        s1, s2 = group.simple
        s1s2 = group.mul(s1, s2)
        s2s1 = group.mul(s2, s1)
        assert group.bruhat_leq(s1, s1s2)
        assert not group.bruhat_leq(s1s2, s2s1)

    @pytest.mark.parametrize("label", ["A2", "B2", "G2", "B3"])
    def test_against_subword_oracle(self, label):
        datum = build_root_datum(label)
        group = datum.weyl()
        assert len(group) <= 48
        for w in range(len(group)):
            expected = subword_closure(group, group.reduced_word(w))
            for u in range(len(group)):
                assert group.bruhat_leq(u, w) == (u in expected)

    @pytest.mark.parametrize("label", ["A2", "B2", "G2"])
    def test_subword_closure_word_independent(self, label):
        datum = build_root_datum(label)
        group = datum.weyl()
        for w in range(len(group)):
            closures = {
                frozenset(subword_closure(group, word))
                for word in group.all_reduced_words(w)
            }
            assert len(closures) == 1

    def test_module_level_wrapper(self, a2):
        elems = all_elements(a2)
        e = elems[0]
        for w in elems:
            assert bruhat_leq(e, w)
