"""Metamath database parsing and theorem-network extraction.

Reads `.mm` databases (tokens, ``$( $)`` comments, ``${ $}`` scoping,
``$c $v $d $f $e $a $p`` statements, normal and compressed proofs) and
extracts, for every assertion, the set of earlier statements its proof
references.  Proofs are not verified: for compressed proofs only the
parenthesized label list matters for dependencies, so the letter-encoded
step stream is tokenized but never replayed.
"""

from __future__ import annotations

import io
from dataclasses import dataclass, field

import numpy as np

from . import graph

#: statement kinds.  ``$p`` statements are theorems; ``$a`` statements split
#: into axioms, definitions and syntax by typecode and label prefix.
KINDS = ("axiom", "definition", "syntax", "theorem", "hypothesis", "other")

_LABEL_CHARS = frozenset(
    "ABCDEFGHIJKLMNOPQRSTUVWXYZabcdefghijklmnopqrstuvwxyz0123456789-_."
)


class MetamathError(ValueError):
    """Parse failure, carrying the 1-based source line number."""

    def __init__(self, message: str, line: int):
        super().__init__(f"line {line}: {message}")
        self.line = line


@dataclass(frozen=True)
class MmStatement:
    """One ``$a`` or ``$p`` statement of the database."""

    label: str
    kind: str
    typecode: str
    proof_labels: tuple[str, ...] = ()
    field: str | None = None


class _Tokens:
    """Whitespace token stream with comment skipping and line tracking."""

    def __init__(self, stream: io.TextIOBase):
        self._lines = iter(stream)
        self._buf: list[str] = []
        self.line = 0

    def _raw(self) -> str | None:
        while not self._buf:
            line = next(self._lines, None)
            if line is None:
                return None
            self.line += 1
            self._buf = line.split()
            self._buf.reverse()
        return self._buf.pop()

    def read(self) -> str | None:
        """Next token outside comments, or None at end of input."""
        tok = self._raw()
        while tok == "$(":
            start = self.line
            while tok != "$)":
                tok = self._raw()
                if tok is None:
                    raise MetamathError("unterminated comment", start)
            tok = self._raw()
        return tok

    def need(self, context: str) -> str:
        tok = self.read()
        if tok is None:
            raise MetamathError(f"unexpected end of input in {context}", self.line)
        return tok


@dataclass
class _RawAssertion:
    label: str
    keyword: str  # '$a' or '$p'
    typecode: str
    proof_labels: tuple[str, ...]
    line: int


def _check_label(tok: str, line: int) -> str:
    if not tok or not set(tok) <= _LABEL_CHARS:
        raise MetamathError(f"malformed label token {tok!r}", line)
    return tok


def _check_symbol(tok: str, line: int) -> str:
    if "$" in tok:
        raise MetamathError(f"unexpected keyword {tok!r} inside statement", line)
    return tok


def _read_statement_body(toks: _Tokens, stop: frozenset[str], context: str) -> tuple[list[str], str]:
    body: list[str] = []
    while True:
        tok = toks.need(context)
        if tok in stop:
            return body, tok
        body.append(_check_symbol(tok, toks.line))


_STOP_END = frozenset(("$.",))
_STOP_PROOF = frozenset(("$=", "$."))


def parse_metamath(source) -> list[MmStatement]:
    """Parse a database into one :class:`MmStatement` per ``$a``/``$p``.

    ``source`` may be a text string, bytes, or a readable text stream.
    Raises :class:`MetamathError` (with line number) on malformed input,
    unbalanced scopes, or a proof referencing an unknown label.
    """
    if isinstance(source, bytes):
        source = source.decode("ascii")
    if isinstance(source, str):
        source = io.StringIO(source)
    toks = _Tokens(source)

    labels: dict[str, str] = {}  # every label seen -> its keyword
    raw: list[_RawAssertion] = []
    depth = 0
    pending: str | None = None

    while True:
        tok = toks.read()
        if tok is None:
            break
        if tok == "${":
            if pending is not None:
                raise MetamathError(f"label {pending!r} not followed by a statement", toks.line)
            depth += 1
        elif tok == "$}":
            depth -= 1
            if depth < 0:
                raise MetamathError("unmatched '$}'", toks.line)
        elif tok in ("$c", "$v", "$d"):
            if pending is not None:
                raise MetamathError(f"{tok} statement cannot carry label {pending!r}", toks.line)
            _read_statement_body(toks, _STOP_END, tok)
        elif tok in ("$f", "$e", "$a", "$p"):
            if pending is None:
                raise MetamathError(f"{tok} statement lacks a label", toks.line)
            label, pending = pending, None
            if label in labels:
                raise MetamathError(f"duplicate label {label!r}", toks.line)
            line = toks.line
            if tok == "$p":
                body, terminator = _read_statement_body(toks, _STOP_PROOF, "$p")
                if terminator != "$=":
                    raise MetamathError(f"theorem {label!r} has no proof", toks.line)
                proof = _read_proof(toks, labels, label)
            else:
                body, _ = _read_statement_body(toks, _STOP_END, tok)
                proof = ()
            if not body:
                raise MetamathError(f"statement {label!r} has no typecode", line)
            labels[label] = tok
            if tok in ("$a", "$p"):
                raw.append(_RawAssertion(label, tok, body[0], proof, line))
        elif tok == "$[":
            raise MetamathError("file inclusion is not supported; flatten the database", toks.line)
        elif tok.startswith("$"):
            raise MetamathError(f"unexpected keyword {tok!r}", toks.line)
        else:
            if pending is not None:
                raise MetamathError(
                    f"label {pending!r} not followed by a statement keyword", toks.line
                )
            pending = _check_label(tok, toks.line)

    if depth != 0:
        raise MetamathError("unclosed '${' scope at end of input", toks.line)
    if pending is not None:
        raise MetamathError(f"dangling label {pending!r} at end of input", toks.line)
    return _classify(raw)


def _read_proof(toks: _Tokens, labels: dict[str, str], owner: str) -> tuple[str, ...]:
    """Labels referenced by the proof, in first-reference order,
    excluding ``$e``/``$f`` hypothesis labels."""
    refs: list[str] = []
    seen: set[str] = set()

    def add(tok: str) -> None:
        kind = labels.get(tok)
        if kind is None:
            raise MetamathError(f"proof of {owner!r} references unknown label {tok!r}", toks.line)
        if kind in ("$a", "$p") and tok not in seen:
            seen.add(tok)
            refs.append(tok)

    tok = toks.need("proof")
    if tok == "(":  # compressed proof: dependency labels live in the parens
        while True:
            tok = toks.need("compressed proof label list")
            if tok == ")":
                break
            add(tok)
        while True:
            tok = toks.need("compressed proof steps")
            if tok == "$.":
                break
            if not all("A" <= c <= "Z" or c == "?" for c in tok):
                raise MetamathError(f"malformed compressed proof block {tok!r}", toks.line)
    else:
        while tok != "$.":
            if tok != "?":
                add(tok)
            tok = toks.need("proof")
    return tuple(refs)


def _classify(raw: list[_RawAssertion]) -> list[MmStatement]:
    """Split assertions into theorem/axiom/definition/syntax.

    ``$p`` statements are theorems.  An ``$a`` whose typecode never appears
    on a theorem is syntax; provable ``$a`` statements are definitions when
    the label starts with ``df-`` and axioms otherwise (the ``ax-`` prefix
    is the usual convention but older axioms predate it).
    """
    provable = {r.typecode for r in raw if r.keyword == "$p"} or {"|-"}
    out: list[MmStatement] = []
    for r in raw:
        if r.keyword == "$p":
            kind = "theorem"
        elif r.typecode not in provable:
            kind = "syntax"
        elif r.label.startswith("df-"):
            kind = "definition"
        else:
            kind = "axiom"
        out.append(MmStatement(r.label, kind, r.typecode, r.proof_labels))
    return out


def parse_metamath_file(path) -> list[MmStatement]:
    with open(path, "r", encoding="ascii") as handle:
        return parse_metamath(handle)


def theorem_network(statements: list[MmStatement], fields: dict[str, str] | None = None) -> graph.Dag:
    """Dependency graph over theorems and axioms.

    Nodes appear in statement order; definitions and syntax statements are
    not nodes, and references to them are dropped.  Repeated uses of the
    same statement inside one proof collapse to a single edge.

    ``fields`` optionally maps labels to field names; when given, nodes get
    one-hot field vectors (dimension = number of distinct field names).
    """
    nodes = [s for s in statements if s.kind in ("axiom", "theorem")]
    index = {s.label: i for i, s in enumerate(nodes)}
    if len(index) != len(nodes):
        raise ValueError("statement labels are not unique")
    edges = [
        (i, index[ref])
        for i, s in enumerate(nodes)
        for ref in s.proof_labels
        if ref in index
    ]
    vectors = None
    if fields:
        names = sorted(set(fields.values()))
        dim = {name: d for d, name in enumerate(names)}
        vectors = np.zeros((len(nodes), len(names)), dtype=np.uint8)
        for i, s in enumerate(nodes):
            name = fields.get(s.label)
            if name is not None:
                vectors[i, dim[name]] = 1
    return graph.build(
        len(nodes), edges, labels=[s.label for s in nodes], field_vectors=vectors
    )


def kind_counts(statements: list[MmStatement]) -> dict[str, int]:
    """Number of statements of each kind (absent kinds included as 0)."""
    counts = dict.fromkeys(KINDS, 0)
    for s in statements:
        counts[s.kind] += 1
    return counts
