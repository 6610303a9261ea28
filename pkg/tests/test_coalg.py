import itertools
import random
from fractions import Fraction

import pytest

from linfty.coalg import (CoalgElem, CoalgOperator, GradedBasisModule,
                          OrderOverflowError, TaylorSeq, check_coderivation,
                          check_comorphism, coder_from_taylor, compose, exp,
                          is_grouplike, is_invertible, is_primitive, ln,
                          morph_from_taylor, pi_tilde, tau, taylor_of,
                          tensor_comult, tensor_of, vect_add, vect_is_zero,
                          word_degree)
from linfty.scalars import make_truncated_poly_dga, rational_field

W = 4


@pytest.fixture
def C():
    return make_truncated_poly_dga([0], 3)


@pytest.fixture
def module(C):
    # two even letters, one odd, one negative: exercises every sign path
    return GradedBasisModule("g", [("a", 0), ("b", 0), ("c", 1), ("e", -1)], C)


def rand_vect(rng, module, degree):
    out = {}
    for i in range(len(module)):
        if module.degree(i) == degree and rng.random() < 0.7:
            q = Fraction(rng.randint(-2, 2))
            c = module.coeff.basis_elem(rng.randint(0, 2)).scale(q)
            if c:
                out[i] = c
    return out


def rand_taylor(rng, module, intent, max_j):
    shift = 1 if intent == "coderivation" else 0
    maps = {}
    for j in range(1, max_j + 1):
        tab = {}
        for w in module.words(j):
            v = rand_vect(rng, module, word_degree(module, w) + shift)
            if v:
                tab[w] = v
        if tab:
            maps[j] = tab
    return TaylorSeq(module, module, maps, intent)


class TestComult:
    def test_unit(self, module, C):
        one = CoalgElem.unit(module, W)
        assert one.comult() == {((), ()): C.one()}

    def test_generator_is_primitive_formula(self, module, C):
        ga = CoalgElem.generator(module, "a", W)
        assert ga.comult() == {((0,), ()): C.one(), ((), (0,)): C.one()}

    def test_product_of_primitives(self, module, C):
        ga = CoalgElem.generator(module, "a", W)
        gc = CoalgElem.generator(module, "c", W)
        d = (ga * gc).comult()
        # cross terms carry the Koszul sign of moving c past a (even*odd: +)
        assert d[((0,), (2,))] == C.one()
        assert d[((2,), (0,))] == C.one()
        assert d[((0, 2), ())] == C.one() and d[((), (0, 2))] == C.one()

    def test_order_preserved(self, module):
        x = CoalgElem.generator(module, "a", W) * CoalgElem.generator(module, "b", W)
        for (w1, w2), _ in x.comult().items():
            assert len(w1) + len(w2) == 2

    def test_odd_square_dies(self, module):
        gc = CoalgElem.generator(module, "c", W)
        assert (gc * gc).is_zero()

    def test_order_overflow_is_loud(self, module, C):
        with pytest.raises(OrderOverflowError):
            CoalgElem(module, {(0, 0, 0): C.one()}, 2)


class TestSymmetrization:
    def test_tau_single_letter(self, module, C):
        ga = CoalgElem.generator(module, "a", W)
        assert tau(ga) == {(0,): C.one()}

    def test_tau_two_letters_with_sign(self, module, C):
        x = CoalgElem(module, {(2, 3): C.one()}, W)  # c (odd) * e (odd)
        t = tau(x)
        assert t == {(2, 3): C.one(), (3, 2): -C.one()}

    def test_symmetrization_is_coalgebra_iso_exhaustive(self, module, C):
        # tau is a coalgebra morphism onto the invariants and pi_tilde inverts it
        for w in module.words_up_to(4):
            x = CoalgElem(module, {w: C.one()}, W)
            assert pi_tilde(module, tau(x), W) == x
            lhs = {}
            for (w1, w2), c in x.comult().items():
                for v1, c1 in tau(CoalgElem(module, {w1: C.one()}, W)).items():
                    for v2, c2 in tau(CoalgElem(module, {w2: C.one()}, W)).items():
                        key = (v1, v2)
                        add = c * c1 * c2
                        prev = lhs.get(key)
                        s = add if prev is None else prev + add
                        if s:
                            lhs[key] = s
                        else:
                            lhs.pop(key, None)
            assert lhs == tensor_comult(tau(x))

    def test_pi_tilde_tau_random_words(self, module, C):
        rng = random.Random(17)
        for _ in range(100):
            words = {}
            for _ in range(rng.randint(1, 3)):
                j = rng.randint(0, 4)
                w = tuple(sorted(rng.choices(range(len(module)), k=j)))
                q = Fraction(rng.randint(-2, 2))
                if q:
                    words[w] = C.scalar(q)
            try:
                x = CoalgElem(module, words, W)
            except OrderOverflowError:
                continue
            assert pi_tilde(module, tau(x), W) == x


class TestCoderivations:
    def test_leibniz_on_two_letters(self, module, C):
        d_table = {1: {(0,): {2: C.one()}}}  # d(a) = c
        T = TaylorSeq(module, module, d_table, "coderivation")
        Q = coder_from_taylor(T, W)
        ga, gb = CoalgElem.generator(module, "a", W), CoalgElem.generator(module, "b", W)
        gc = CoalgElem.generator(module, "c", W)
        assert Q(ga * gb) == gc * gb
        assert Q(CoalgElem.unit(module, W)).is_zero()

    def test_pair_taylor_expansion(self, module, C):
        rng = random.Random(23)
        T = rand_taylor(rng, module, "coderivation", 2)
        Q = coder_from_taylor(T, W)
        # on a three-letter word the order-2 part acts through every pair
        w = (0, 0, 1)
        got = Q(CoalgElem(module, {w: C.one()}, W))
        manual = CoalgElem.zero(module, W)
        for positions in itertools.combinations(range(3), 2):
            sub = tuple(w[i] for i in positions)
            rest = tuple(w[i] for i in range(3) if i not in positions)
            val = T.eval_word(sub)
            for g, c in val.items():
                manual = manual + CoalgElem(module, {(g,) + rest: c}, W)
        for positions in [(0,), (1,), (2,)]:
            sub = (w[positions[0]],)
            rest = tuple(w[i] for i in range(3) if i != positions[0])
            for g, c in T.eval_word(sub).items():
                manual = manual + CoalgElem(module, {(g,) + rest: c}, W)
        assert got == manual  # even letters: no signs anywhere

    def test_axioms_and_roundtrip_random(self, module):
        rng = random.Random(29)
        for _ in range(8):
            T = rand_taylor(rng, module, "coderivation", 3)
            Q = coder_from_taylor(T, W)
            assert check_coderivation(Q, W, max_order=4).ok
            for j, tab in T.maps.items():
                assert taylor_of(Q, j, W) == tab

    def test_uniqueness(self, module, C):
        rng = random.Random(31)
        T = rand_taylor(rng, module, "coderivation", 3)
        Q1 = coder_from_taylor(T, W)
        Q2 = coder_from_taylor(TaylorSeq(module, module, T.maps, "coderivation"), W)
        for w in module.words_up_to(W):
            x = CoalgElem(module, {w: C.one()}, W)
            assert Q1(x) == Q2(x)

    def test_corrupted_operator_fails_with_witness(self, module, C):
        rng = random.Random(37)
        T = rand_taylor(rng, module, "coderivation", 2)
        Q = coder_from_taylor(T, W)

        def tampered(x):
            y = Q(x)
            if x.max_order() == 2 and not x.is_zero():
                y = y + CoalgElem(module, {(0, 0): C.one()}, y.W)
            return y

        rep = check_coderivation(CoalgOperator(module, module, 1, tampered), W,
                                 max_order=3)
        assert not rep.ok
        assert rep.violations[0]["witness"]


class TestMorphisms:
    def test_strict_is_multiplicative(self, module, C):
        table = {(i,): {i: C.one()} for i in range(len(module))}
        table[(0,)] = {1: C.one()}  # a -> b
        T = TaylorSeq(module, module, {1: table}, "morphism")
        Psi = morph_from_taylor(T, W)
        ga = CoalgElem.generator(module, "a", W)
        gc = CoalgElem.generator(module, "c", W)
        gb = CoalgElem.generator(module, "b", W)
        assert Psi(ga * gc) == gb * gc
        assert Psi(CoalgElem.unit(module, W)) == CoalgElem.unit(module, W)

    def test_axioms_and_roundtrip_random(self, module):
        rng = random.Random(41)
        for _ in range(8):
            T = rand_taylor(rng, module, "morphism", 3)
            Psi = morph_from_taylor(T, W)
            assert check_comorphism(Psi, W, max_order=4).ok
            for j, tab in T.maps.items():
                assert taylor_of(Psi, j, W) == tab

    def test_fifty_random_taylor_sequences_pass_axioms(self, module):
        rng = random.Random(47)
        for _ in range(50):
            T = rand_taylor(rng, module, "morphism", rng.randint(1, 3))
            assert check_comorphism(morph_from_taylor(T, W), W, max_order=3).ok

    def test_composition_is_morphism(self, module):
        rng = random.Random(43)
        P1 = morph_from_taylor(rand_taylor(rng, module, "morphism", 2), W)
        P2 = morph_from_taylor(rand_taylor(rng, module, "morphism", 2), W)
        assert check_comorphism(compose(P1, P2), W, max_order=3).ok

    def test_morphism_uniqueness(self, module, C):
        rng = random.Random(53)
        T = rand_taylor(rng, module, "morphism", 3)
        P1 = morph_from_taylor(T, W)
        P2 = morph_from_taylor(TaylorSeq(module, module, T.maps, "morphism"), W)
        for w in module.words_up_to(W):
            x = CoalgElem(module, {w: C.one()}, W)
            assert P1(x) == P2(x)

    def test_taylor_of_identity(self, module, C):
        table = {(i,): {i: C.one()} for i in range(len(module))}
        ident = morph_from_taylor(TaylorSeq(module, module, {1: table}, "morphism"), W)
        assert taylor_of(ident, 1, W) == table
        assert taylor_of(ident, 2, W) == {}
        assert taylor_of(ident, 3, W) == {}


class TestExpLn:
    def test_h_squared_truncation(self):
        C2 = make_truncated_poly_dga([0], 2)
        m = GradedBasisModule("g", [("g1", 0)], C2)
        om = CoalgElem.generator(m, "g1", 3).scale(C2.gen("h"))
        e = exp(om)
        assert e == CoalgElem.unit(m, 3) + om

    def test_h_cubed(self, C):
        m = GradedBasisModule("g", [("g1", 0)], C)
        h = C.gen("h")
        om = CoalgElem.generator(m, "g1", 4).scale(h)
        e = exp(om)
        want = CoalgElem.unit(m, 4) + om + (om * om).scale(Fraction(1, 2))
        assert e == want
        assert is_grouplike(e)

    def test_exp_requires_nilpotent(self, module):
        with pytest.raises(ValueError, match="nilpotent"):
            exp(CoalgElem.generator(module, "a", W))

    def test_exp_requires_degree_zero(self, module, C):
        with pytest.raises(ValueError):
            exp(CoalgElem.generator(module, "c", W).scale(C.gen("h")))

    def test_exp_ln_bijection_lattice_exhaustive(self, C):
        # exp and ln are mutually inverse between nilpotent degree-0 elements
        # and invertible group-likes, over the lattice {0,±1,±1/2}·h^k
        m = GradedBasisModule("g", [("g1", 0), ("g2", 0)], C)
        h = C.gen("h")
        lattice = [C.zero()]
        for q in (1, -1, Fraction(1, 2), Fraction(-1, 2)):
            for k in (1, 2):
                lattice.append((h if k == 1 else h * h).scale(q))
        count = 0
        for c1 in lattice:
            for c2 in lattice:
                om = CoalgElem(m, {(0,): c1, (1,): c2}, 4)
                e = exp(om)
                assert is_grouplike(e) and is_invertible(e)
                assert ln(e) == om
                assert exp(ln(e)) == e
                count += 1
        assert count == len(lattice) ** 2

    def test_invertible_grouplikes_are_exponentials(self, C):
        # scan a one-generator lattice of candidates e = 1 + w + x
        m = GradedBasisModule("g", [("g1", 0)], C)
        h = C.gen("h")
        lattice = [C.zero()]
        for q in (1, -1, Fraction(1, 2), Fraction(-1, 2)):
            for k in (1, 2):
                lattice.append((h if k == 1 else h * h).scale(q))
        grouplikes = 0
        expected = sum(1 for c1 in lattice for c2 in lattice
                       if (c1 * c1).scale(Fraction(1, 2)) == c2)
        for c1 in lattice:
            for c2 in lattice:
                e = CoalgElem(m, {(): C.one(), (0,): c1, (0, 0): c2}, 4)
                if is_grouplike(e) and is_invertible(e):
                    grouplikes += 1
                    assert exp(ln(e)) == e
        # the group-likes in the scan are exactly the exponentials it contains
        assert grouplikes == expected == 7


class TestPrimitives:
    def test_primitives_are_exactly_order_one(self, module, C):
        # primitives are exactly the order-1 part, over the truncated basis
        for w in module.words_up_to(3):
            x = CoalgElem(module, {w: C.one()}, W)
            assert is_primitive(x) == (len(w) == 1)

    def test_unit_is_grouplike(self, module):
        one = CoalgElem.unit(module, W)
        assert is_grouplike(one) and not is_primitive(one)

    def test_mixed_sums(self, module, C):
        ga = CoalgElem.generator(module, "a", W)
        gc = CoalgElem.generator(module, "c", W)
        assert is_primitive(ga + gc.scale(Fraction(2)))
        assert not is_primitive(ga + ga * ga)
