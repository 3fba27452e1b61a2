import random

import pytest

from qalinks.diagram import Diagram
from qalinks.invariants import determinant, signature
from qalinks.montesinos import compile_montesinos, compile_rational
from qalinks.seifert_oracle import (
    OracleError,
    braid_closure,
    braid_word,
    det_oracle,
    seifert_form,
    seifert_form_from_word,
    signature_oracle,
    to_braid_form,
)


class TestBraidClosure:
    def test_positive_trefoil(self):
        d = braid_closure([(0, 1)] * 3)
        assert d.n == 3 and d.components == 1
        assert d.writhe() == 3
        assert determinant(d) == 3 and signature(d) == -2

    def test_fig8(self):
        d = braid_closure([(0, 1), (1, -1)] * 2)
        assert determinant(d) == 5 and signature(d) == 0

    def test_torus_2_4(self):
        d = braid_closure([(0, 1)] * 4)
        assert d.components == 2
        assert determinant(d) == 4 and signature(d) == -3

    def test_identity_braid_unknots(self):
        d = braid_closure([], strands=1)
        assert d.n == 0 and d.components == 1

    def test_bad_letter(self):
        with pytest.raises(OracleError):
            braid_closure([(5, 1)], strands=2)


class TestSeifertForm:
    def test_trefoil_form(self):
        m = seifert_form_from_word([(0, 1)] * 3)
        assert len(m) == 2
        assert abs(determinant_of(m)) == 3

    def test_matches_diagram_route(self):
        word = [(0, 1), (1, -1), (0, 1), (1, -1)]
        d = braid_closure(word)
        assert seifert_form(d) is not None
        assert det_oracle(d) == determinant(d)
        assert signature_oracle(d) == signature(d)


def determinant_of(m):
    from qalinks.invariants import det_exact
    return det_exact(m)


class TestBraiding:
    def test_already_braided_fixed_point(self):
        d = braid_closure([(0, 1)] * 3)
        b = to_braid_form(d)
        assert b.n == d.n  # no moves needed on a closed braid

    def test_word_roundtrip(self):
        word = [(0, 1), (1, 1), (0, 1), (1, 1)]
        d = braid_closure(word)
        w2, s = braid_word(d)
        assert s == 3 and len(w2) == 4
        assert sorted(x for _, x in w2) == [1, 1, 1, 1]

    def test_vogel_moves_terminate(self):
        d = compile_montesinos(2, [[-2], [-2, -2], [-2, -2]]).oriented()
        b = to_braid_form(d)
        word, s = braid_word(d)
        assert b.n == len(word)
        assert s == len(b.seifert_circles())

    def test_disconnected_rejected(self):
        with pytest.raises(OracleError):
            braid_word(Diagram((), free_loops=2).oriented())


class TestOracleAgreement:
    def test_fixture_values(self):
        cases = [
            (compile_rational([2, 2]), 3),
            (compile_rational([2, -2]), 5),
            (compile_rational([2]), 2),
            (compile_montesinos(0, [[2], [3], [7]]), 41),
            (compile_montesinos(2, [[-2], [-2, -2], [-2, -2]]), 3),
        ]
        for d, det in cases:
            for o in d.orientations():
                assert det_oracle(o) == determinant(o) == det
                assert signature_oracle(o) == signature(o)

    def test_random_rational(self):
        rng = random.Random(17)
        done = 0
        while done < 12:
            entries = [rng.choice((-3, -2, 2, 3))
                       for _ in range(rng.randint(1, 4))]
            d = compile_rational(entries)
            if not d.is_connected():
                continue
            for o in d.orientations():
                assert det_oracle(o) == determinant(o)
                assert signature_oracle(o) == signature(o)
            done += 1

    def test_random_braids(self):
        rng = random.Random(23)
        for _ in range(15):
            strands = rng.randint(2, 3)
            word = [(rng.randrange(strands - 1), rng.choice((-1, 1)))
                    for _ in range(rng.randint(1, 6))]
            d = braid_closure(word, strands)
            if not d.is_connected():
                continue
            assert det_oracle(d) == determinant(d)
            assert signature_oracle(d) == signature(d)
