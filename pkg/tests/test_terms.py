import pytest
from hypothesis import given
from hypothesis import strategies as st

from tracekit.errors import ParseError
from tracekit.terms import (Gen, Id, Seq, Sym, Tensor, Trace, parse_term,
                            print_term)


class TestParse:
    def test_trace_of_symmetry(self):
        assert parse_term("tr[U](sym[X,X])") == Trace("U", Sym("X", "X"))

    def test_precedence_tensor_binds_tighter(self):
        assert parse_term("f ; g * h") == Seq(Gen("f"), Tensor(Gen("g"), Gen("h")))

    def test_seq_left_associates(self):
        assert parse_term("f ; g ; h") == Seq(Seq(Gen("f"), Gen("g")), Gen("h"))

    def test_parentheses(self):
        assert parse_term("(f ; g) * h") == Tensor(Seq(Gen("f"), Gen("g")), Gen("h"))

    def test_identifier_with_hyphen(self):
        assert parse_term("my-gen ; other_gen") == Seq(Gen("my-gen"), Gen("other_gen"))

    def test_keywords_need_brackets_to_be_special(self):
        assert parse_term("id") == Gen("id")
        assert parse_term("id[X]") == Id("X")

    def test_double_semicolon_is_an_error(self):
        with pytest.raises(ParseError) as err:
            parse_term("f ;;")
        assert err.value.line == 1
        assert err.value.col == 4

    def test_error_positions_track_lines(self):
        with pytest.raises(ParseError) as err:
            parse_term("f ;\n g * * h")
        assert err.value.line == 2

    def test_unbalanced_brackets(self):
        with pytest.raises(ParseError):
            parse_term("tr[U](f")
        with pytest.raises(ParseError):
            parse_term("id[X")

    def test_empty_input(self):
        with pytest.raises(ParseError):
            parse_term("   ")

    def test_trailing_garbage(self):
        with pytest.raises(ParseError):
            parse_term("f g")


names = st.sampled_from(["f", "g", "h", "cc", "my-gen", "X", "U"])


def terms(depth=3):
    leaf = st.one_of(
        names.map(Gen),
        names.map(Id),
        st.tuples(names, names).map(lambda ab: Sym(*ab)),
    )
    return st.recursive(
        leaf,
        lambda sub: st.one_of(
            st.tuples(sub, sub).map(lambda ab: Seq(*ab)),
            st.tuples(sub, sub).map(lambda ab: Tensor(*ab)),
            st.tuples(names, sub).map(lambda ut: Trace(*ut)),
        ),
        max_leaves=12,
    )


class TestPrintParseRoundTrip:
    @given(terms())
    def test_round_trip(self, t):
        assert parse_term(print_term(t)) == t

    def test_canonical_examples(self):
        assert print_term(parse_term("f ; g * h")) == "f ; g * h"
        assert print_term(parse_term("(f ; g) * h")) == "(f ; g) * h"
        assert print_term(parse_term("tr[U](sym[X,X])")) == "tr[U](sym[X,X])"
