import json

import pytest

from qalinks.cfrac import Rational
from qalinks.cli import (
    ParseError,
    corpus_inputs,
    main,
    parse,
    to_diagram,
)
from qalinks.diagram import Diagram
from qalinks.invariants import determinant
from qalinks.montesinos import MontesinosData, TwoBridge


class TestParse:
    def test_montesinos(self):
        m = parse("M(0; 1/2, 1/3, 1/7)")
        assert isinstance(m, MontesinosData)
        assert m.r == 3 and m.e == 0

    def test_whitespace_insensitive(self):
        a = parse("M(0;1/2,1/3,1/7)")
        b = parse("  M( 0 ;  1/2 ,1/3,  1/7 )  ")
        assert a == b

    def test_two_bridge(self):
        t = parse("R(2/5)")
        assert isinstance(t, TwoBridge)
        assert t.slope == Rational(2, 5) and t.p == 5

    def test_pretzel_sugar(self):
        m = parse("P(2, 3, 7)")
        assert isinstance(m, MontesinosData)
        assert m.slopes == (Rational(1, 2), Rational(1, 3), Rational(1, 7))

    def test_short_montesinos_routes_to_two_bridge(self):
        t = parse("M(0; 1/2, 1/3)")
        assert isinstance(t, TwoBridge)
        assert t.slope == (Rational(1, 2) + Rational(1, 3)).reciprocal()

    def test_cf(self):
        d = parse("CF[2, -2]")
        assert isinstance(d, Diagram)
        assert determinant(d) == 5

    def test_pd(self):
        d = parse("PD[(4,2,5,1),(6,4,1,3),(2,6,3,5)]")
        assert isinstance(d, Diagram)
        assert determinant(d) == 3

    def test_errors_carry_position(self):
        for text in ("", "Q(1)", "R(2/0)", "R(1/2", "P(1)", "M(0; 1/2, 1/3,)",
                     "PD[(1,2,3)]", "R(1/2) x"):
            with pytest.raises(ParseError):
                parse(text)

    def test_integer_tangle_rejected(self):
        with pytest.raises(ParseError):
            parse("M(0; 2, 1/3, 1/3)")


class TestCommands:
    def test_invariants_json(self, capsys):
        assert main(["invariants", "R(2/3)"]) == 0
        rep = json.loads(capsys.readouterr().out)
        assert rep["determinant"] == 3
        assert rep["signature"] == -2
        assert rep["genus"] == {"value": 1, "method": "alternating-reduced"}

    def test_invariants_oracle_agrees(self, capsys):
        assert main(["invariants", "M(0; 1/2, 1/3, 1/7)"]) == 0
        fast = json.loads(capsys.readouterr().out)
        assert main(["invariants", "M(0; 1/2, 1/3, 1/7)", "--oracle"]) == 0
        slow = json.loads(capsys.readouterr().out)
        assert fast["determinant"] == slow["determinant"] == 41
        assert fast["signature"] == slow["signature"]

    def test_certify_qa(self, capsys):
        assert main(["certify-qa", "R(2/3)"]) == 0
        rep = json.loads(capsys.readouterr().out)
        assert rep["qa"]["outcome"] == "Certified"
        assert rep["qa"]["valid"] is True
        assert rep["qa"]["certificate"]["det"] == 3

    def test_budget_exit_code(self, capsys):
        assert main(["certify-qa", "M(0; 1/2, 1/3, 1/7)", "--budget", "2"]) == 2
        rep = json.loads(capsys.readouterr().out)
        assert rep["qa"]["outcome"] == "BudgetExceeded"

    def test_classify_sqp(self, capsys):
        assert main(["classify-sqp", "M(0; 1/2, 2/5, -2/5)"]) == 0
        rep = json.loads(capsys.readouterr().out)
        assert rep["sqp"]["verdict"] == "NotSQP"
        assert rep["sqp"]["witness"]["genus"] == 2
        assert rep["sqp"]["witness"]["g4_bound"] == 1

    def test_genus(self, capsys):
        assert main(["genus", "P(2,3,7)"]) == 0
        rep = json.loads(capsys.readouterr().out)
        assert rep["genus"]["value"] == 5

    def test_validate_single(self, capsys):
        assert main(["validate", "R(2/3)"]) == 0
        rep = json.loads(capsys.readouterr().out)
        assert rep["validate"]["ok"] is True

    def test_parse_error_exit_code(self, capsys):
        assert main(["invariants", "R(2/0)"]) == 1
        assert "parse error" in capsys.readouterr().err

    def test_stdin(self, capsys, monkeypatch):
        import io
        monkeypatch.setattr("sys.stdin", io.StringIO(" R(2/3) \n"))
        assert main(["invariants", "-"]) == 0
        assert json.loads(capsys.readouterr().out)["determinant"] == 3

    def test_text_format(self, capsys):
        assert main(["invariants", "R(2/3)", "--format", "text"]) == 0
        out = capsys.readouterr().out
        assert "determinant: 3" in out and "signature: -2" in out

    def test_deterministic_output(self, capsys):
        outs = []
        for _ in range(2):
            assert main(["invariants", "M(1; 1/2, -2/5, 1/3)"]) == 0
            rep = json.loads(capsys.readouterr().out)
            del rep["timings"]
            outs.append(json.dumps(rep, sort_keys=True))
        assert outs[0] == outs[1]


class TestCorpus:
    def test_size_and_determinism(self):
        a = corpus_inputs(0)
        b = corpus_inputs(0)
        assert a == b
        assert len(a) >= 200
        assert len(set(a)) == len(a)

    def test_two_bridge_coverage(self):
        from math import gcd
        labels = set(corpus_inputs(0))
        want = sum(1 for p in range(2, 14) for q in range(1, p)
                   if gcd(q, p) == 1)
        assert want == 57
        got = sum(1 for s in labels if s.startswith("R("))
        assert got == 57

    def test_all_parse_and_compile(self):
        for label in corpus_inputs(0)[:80]:
            d = to_diagram(parse(label))
            d.validate()

    def test_seed_changes_sample(self):
        assert corpus_inputs(0) != corpus_inputs(1)

    def test_corpus_command(self, capsys):
        assert main(["corpus"]) == 0
        rep = json.loads(capsys.readouterr().out)
        assert len(rep["corpus"]) >= 200
