import pathlib

import pytest

from dagkit import graph, metamath
from dagkit.metamath import MetamathError, parse_metamath

FIXTURES = pathlib.Path(__file__).parent / "fixtures"

# hand-extracted from fixtures/tiny.mm before the parser existed
TINY_ORACLE = [
    ("wi", "syntax", "wff", ()),
    ("ax-1", "axiom", "|-", ()),
    ("ax-2", "axiom", "|-", ()),
    ("df-self", "definition", "|-", ()),
    ("ax-mp", "axiom", "|-", ()),
    ("dup", "theorem", "|-", ("wi", "ax-1", "ax-mp")),
    ("imim", "theorem", "|-", ("wi", "ax-1", "ax-2", "ax-mp")),
    ("also", "theorem", "|-", ("dup", "ax-mp")),
]


class TestParse:
    def test_minimal_database(self):
        statements = parse_metamath("$c |- ph $. ax-1 $a |- ph $. th $p |- ph $= ax-1 $.")
        assert len(statements) == 2
        assert statements[0].label == "ax-1"
        assert statements[0].kind == "axiom"
        assert statements[1].kind == "theorem"
        assert statements[1].proof_labels == ("ax-1",)

    def test_tiny_fixture_matches_oracle(self):
        statements = metamath.parse_metamath_file(FIXTURES / "tiny.mm")
        got = [(s.label, s.kind, s.typecode, s.proof_labels) for s in statements]
        assert got == TINY_ORACLE

    def test_kind_counts(self):
        statements = metamath.parse_metamath_file(FIXTURES / "tiny.mm")
        counts = metamath.kind_counts(statements)
        assert counts["axiom"] == 3
        assert counts["definition"] == 1
        assert counts["syntax"] == 1
        assert counts["theorem"] == 3

    def test_provable_typecode_defaults_without_theorems(self):
        statements = parse_metamath("$c |- term x $. foo $a |- x $. bar $a term x $.")
        assert [s.kind for s in statements] == ["axiom", "syntax"]

    def test_unknown_proof_label_errors_with_line(self):
        with pytest.raises(MetamathError, match="line 3.*nope"):
            parse_metamath("$c |- ph $.\nax-1 $a |- ph $.\nth $p |- ph $= nope $.")

    def test_forward_reference_is_unknown(self):
        src = "$c |- ph $.\nth $p |- ph $= later $.\nlater $a |- ph $.\n"
        with pytest.raises(MetamathError, match="unknown label"):
            parse_metamath(src)

    def test_unbalanced_scope(self):
        with pytest.raises(MetamathError, match="unclosed"):
            parse_metamath("${ $c x $.")
        with pytest.raises(MetamathError, match=r"unmatched"):
            parse_metamath("$} ")

    def test_unterminated_comment(self):
        with pytest.raises(MetamathError, match="unterminated comment"):
            parse_metamath("$( no end")

    def test_malformed_compressed_block(self):
        src = "$c |- ph $. ax $a |- ph $. th $p |- ph $= ( ax ) AB1C $."
        with pytest.raises(MetamathError, match="compressed proof block"):
            parse_metamath(src)

    def test_question_mark_steps_tolerated(self):
        src = "$c |- ph $. ax $a |- ph $. th $p |- ph $= ax ? $."
        statements = parse_metamath(src)
        assert statements[1].proof_labels == ("ax",)

    def test_duplicate_label_rejected(self):
        with pytest.raises(MetamathError, match="duplicate label"):
            parse_metamath("$c |- ph ps $. ax $a |- ph $. ax $a |- ps $.")

    def test_label_without_statement(self):
        with pytest.raises(MetamathError, match="cannot carry label"):
            parse_metamath("dangling $c x $.")
        with pytest.raises(MetamathError, match="dangling label"):
            parse_metamath("$c x $. orphan")

    def test_file_inclusion_rejected(self):
        with pytest.raises(MetamathError, match="inclusion"):
            parse_metamath("$[ other.mm $]")


class TestTheoremNetwork:
    def statements(self):
        return metamath.parse_metamath_file(FIXTURES / "tiny.mm")

    def test_nodes_are_axioms_and_theorems_only(self):
        g = metamath.theorem_network(self.statements())
        assert g.labels == ["ax-1", "ax-2", "ax-mp", "dup", "imim", "also"]
        assert g.node_count == 6

    def test_edges_match_oracle(self):
        g = metamath.theorem_network(self.statements())
        pairs = {(g.labels[i], g.labels[j]) for i, j in g.edge_array()}
        assert pairs == {
            ("dup", "ax-1"), ("dup", "ax-mp"),
            ("imim", "ax-1"), ("imim", "ax-2"), ("imim", "ax-mp"),
            ("also", "dup"), ("also", "ax-mp"),
        }

    def test_repeated_use_single_edge(self):
        statements = parse_metamath(
            "$c |- ph $. ax $a |- ph $. th $p |- ph $= ax ax ax $."
        )
        g = metamath.theorem_network(statements)
        assert g.edge_count == 1

    def test_definition_only_reference_gives_no_edges(self):
        statements = parse_metamath(
            "$c |- wff ph $. df-x $a |- ph $. wz $a wff ph $. "
            "th $p |- ph $= df-x wz $."
        )
        g = metamath.theorem_network(statements)
        # the only node-set members are th itself (df-x and wz are excluded)
        assert g.labels == ["th"]
        assert g.edge_count == 0

    def test_node_count_identity(self):
        statements = self.statements()
        counts = metamath.kind_counts(statements)
        g = metamath.theorem_network(statements)
        assert g.node_count == counts["axiom"] + counts["theorem"]

    def test_network_is_acyclic(self):
        g = metamath.theorem_network(self.statements())
        assert graph.is_acyclic(g)

    def test_field_vectors_one_hot(self):
        fields = {"ax-1": "logic", "ax-2": "logic", "dup": "algebra"}
        g = metamath.theorem_network(self.statements(), fields=fields)
        assert g.field_vectors.shape == (6, 2)  # algebra, logic
        assert g.field_vectors[g.labels.index("ax-1")].tolist() == [0, 1]
        assert g.field_vectors[g.labels.index("dup")].tolist() == [1, 0]
        assert g.field_vectors[g.labels.index("also")].tolist() == [0, 0]
