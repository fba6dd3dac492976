"""Parser and serializer for the textual knowledge-base and structure formats.

A ``.kb`` file declares a vocabulary and two theory blocks::

    vocabulary {
      env SocialHousing : Bool
      dec TaxRate : Int[1..10] goal
      dec RegistrationType : { Social, Modest, Other }
    }
    theory environment { SocialHousing => LowRent. }
    theory solution { TaxRate = 1 <=> RegistrationType = Social. }

Formulas use ``~ & | => <=>`` (tightest to loosest, ``=>`` right-associative),
parentheses, bare names for Boolean symbols, and comparisons against literal
constants (``= !=`` everywhere, ``< <= > >=`` on integer symbols).  A sentence
prefixed ``define`` must be an equivalence whose left side is an atom.  ``//``
starts a line comment.

A ``.struct`` file is a list of ``name = value`` lines.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

from .logic import (
    And,
    BoolAtom,
    BoolDomain,
    Compare,
    Const,
    Domain,
    EnumDomain,
    Formula,
    Iff,
    Implies,
    IntRange,
    Kind,
    KnowledgeBase,
    Not,
    Or,
    PartialStructure,
    Sentence,
    Symbol,
    Value,
    Vocabulary,
    format_value,
)

KEYWORDS = {
    "vocabulary", "theory", "environment", "solution",
    "env", "dec", "goal", "define", "Bool", "Int", "true", "false",
}


@dataclass(frozen=True)
class SourceSpan:
    line: int
    column: int
    offset: int

    def __str__(self) -> str:
        return "line %d, column %d" % (self.line, self.column)


class ParseError(Exception):
    def __init__(self, message: str, span: SourceSpan):
        super().__init__("%s: %s" % (span, message))
        self.message = message
        self.span = span


# ---------------------------------------------------------------------------
# Lexer
# ---------------------------------------------------------------------------

_PUNCT = ("<=>", "=>", "..", "!=", "<=", ">=", "{", "}", "[", "]", "(", ")",
          ":", ",", ".", "~", "&", "|", "=", "<", ">")


@dataclass(frozen=True)
class _Token:
    kind: str  # "name", "int", "punct", "eof"
    text: str
    span: SourceSpan


def _tokenize(text: str) -> list[_Token]:
    tokens: list[_Token] = []
    i, line, col = 0, 1, 1
    n = len(text)
    while i < n:
        c = text[i]
        if c == "\n":
            i += 1
            line += 1
            col = 1
            continue
        if c in " \t\r":
            i += 1
            col += 1
            continue
        if text.startswith("//", i):
            while i < n and text[i] != "\n":
                i += 1
            continue
        span = SourceSpan(line, col, i)
        if c.isalpha() or c == "_":
            j = i
            while j < n and (text[j].isalnum() or text[j] == "_"):
                j += 1
            tokens.append(_Token("name", text[i:j], span))
            col += j - i
            i = j
            continue
        if c.isdigit() or (c == "-" and i + 1 < n and text[i + 1].isdigit()):
            j = i + 1
            while j < n and text[j].isdigit():
                j += 1
            tokens.append(_Token("int", text[i:j], span))
            col += j - i
            i = j
            continue
        for p in _PUNCT:
            if text.startswith(p, i):
                tokens.append(_Token("punct", p, span))
                i += len(p)
                col += len(p)
                break
        else:
            raise ParseError("unexpected character %r" % c, span)
    tokens.append(_Token("eof", "", SourceSpan(line, col, n)))
    return tokens


# ---------------------------------------------------------------------------
# Parser
# ---------------------------------------------------------------------------

class _Parser:
    def __init__(self, text: str):
        self.tokens = _tokenize(text)
        self.pos = 0

    @property
    def cur(self) -> _Token:
        return self.tokens[self.pos]

    def advance(self) -> _Token:
        tok = self.cur
        self.pos += 1
        return tok

    def fail(self, message: str) -> "ParseError":
        return ParseError(message, self.cur.span)

    def at_punct(self, text: str) -> bool:
        return self.cur.kind == "punct" and self.cur.text == text

    def at_word(self, word: str) -> bool:
        return self.cur.kind == "name" and self.cur.text == word

    def expect_punct(self, text: str) -> _Token:
        if not self.at_punct(text):
            raise self.fail("expected %r, found %r" % (text, self.cur.text or "end of input"))
        return self.advance()

    def expect_word(self, word: str) -> _Token:
        if not self.at_word(word):
            raise self.fail("expected %r, found %r" % (word, self.cur.text or "end of input"))
        return self.advance()

    def expect_identifier(self, what: str) -> _Token:
        if self.cur.kind != "name":
            raise self.fail("expected %s, found %r" % (what, self.cur.text or "end of input"))
        if self.cur.text in KEYWORDS:
            raise self.fail("%r is a reserved word and cannot be used as %s" % (self.cur.text, what))
        return self.advance()

    # -- vocabulary ---------------------------------------------------------

    def parse_kb(self) -> KnowledgeBase:
        self.expect_word("vocabulary")
        self.expect_punct("{")
        symbols: list[Symbol] = []
        while not self.at_punct("}"):
            symbols.append(self.parse_decl())
        self.advance()
        try:
            vocab = Vocabulary(symbols)
        except ValueError as exc:
            raise ParseError(str(exc), self.cur.span) from None

        tenv = self.parse_theory_block(vocab, "environment")
        tsol = self.parse_theory_block(vocab, "solution")
        if self.cur.kind != "eof":
            raise self.fail("unexpected trailing input")
        return KnowledgeBase(vocab, tenv, tsol)

    def parse_decl(self) -> Symbol:
        if self.at_word("env"):
            kind = Kind.ENV
        elif self.at_word("dec"):
            kind = Kind.DEC
        else:
            raise self.fail("expected 'env' or 'dec'")
        self.advance()
        name = self.expect_identifier("a symbol name").text
        self.expect_punct(":")
        domain = self.parse_domain()
        goal = False
        if self.at_word("goal"):
            self.advance()
            goal = True
        return Symbol(name, kind, domain, goal)

    def parse_domain(self) -> Domain:
        if self.at_word("Bool"):
            self.advance()
            return BoolDomain()
        if self.at_word("Int"):
            self.advance()
            self.expect_punct("[")
            lo = self.parse_int()
            self.expect_punct("..")
            hi = self.parse_int()
            close = self.expect_punct("]")
            if lo > hi:
                raise ParseError("empty integer range [%d..%d]" % (lo, hi), close.span)
            return IntRange(lo, hi)
        if self.at_punct("{"):
            self.advance()
            names = [self.expect_identifier("an enumeration value").text]
            while self.at_punct(","):
                self.advance()
                names.append(self.expect_identifier("an enumeration value").text)
            close = self.expect_punct("}")
            if len(set(names)) != len(names):
                raise ParseError("duplicate enumeration value", close.span)
            return EnumDomain(tuple(names))
        raise self.fail("expected a domain (Bool, Int[lo..hi] or {A, B, ...})")

    def parse_int(self) -> int:
        if self.cur.kind != "int":
            raise self.fail("expected an integer")
        return int(self.advance().text)

    # -- theories -----------------------------------------------------------

    def parse_theory_block(self, vocab: Vocabulary, which: str) -> list[Sentence]:
        self.expect_word("theory")
        self.expect_word(which)
        self.expect_punct("{")
        sentences: list[Sentence] = []
        env_only = which == "environment"
        while not self.at_punct("}"):
            sentences.append(self.parse_sentence(vocab, env_only))
        self.advance()
        return sentences

    def parse_sentence(self, vocab: Vocabulary, env_only: bool) -> Sentence:
        is_definition = False
        if self.at_word("define"):
            self.advance()
            is_definition = True
        start = self.cur.span
        formula = self.parse_formula(vocab, env_only)
        self.expect_punct(".")
        if is_definition:
            if not isinstance(formula, Iff) or not isinstance(formula.left, (BoolAtom, Compare)):
                raise ParseError(
                    "a define sentence must be an equivalence with an atom on the left", start
                )
            return Sentence.definition(formula, formula.left.name)
        return Sentence.plain(formula)

    # Precedence, tightest first: ~, &, |, => (right-assoc), <=>.

    def parse_formula(self, vocab: Vocabulary, env_only: bool) -> Formula:
        left = self.parse_implies(vocab, env_only)
        while self.at_punct("<=>"):
            self.advance()
            right = self.parse_implies(vocab, env_only)
            left = Iff(left, right)
        return left

    def parse_implies(self, vocab: Vocabulary, env_only: bool) -> Formula:
        left = self.parse_or(vocab, env_only)
        if self.at_punct("=>"):
            self.advance()
            right = self.parse_implies(vocab, env_only)
            return Implies(left, right)
        return left

    def parse_or(self, vocab: Vocabulary, env_only: bool) -> Formula:
        left = self.parse_and(vocab, env_only)
        while self.at_punct("|"):
            self.advance()
            left = Or(left, self.parse_and(vocab, env_only))
        return left

    def parse_and(self, vocab: Vocabulary, env_only: bool) -> Formula:
        left = self.parse_unary(vocab, env_only)
        while self.at_punct("&"):
            self.advance()
            left = And(left, self.parse_unary(vocab, env_only))
        return left

    def parse_unary(self, vocab: Vocabulary, env_only: bool) -> Formula:
        if self.at_punct("~"):
            self.advance()
            return Not(self.parse_unary(vocab, env_only))
        if self.at_punct("("):
            self.advance()
            inner = self.parse_formula(vocab, env_only)
            self.expect_punct(")")
            return inner
        return self.parse_atom(vocab, env_only)

    def parse_atom(self, vocab: Vocabulary, env_only: bool) -> Formula:
        tok = self.expect_identifier("a symbol name")
        if tok.text not in vocab:
            raise ParseError("undeclared symbol %r" % tok.text, tok.span)
        sym = vocab[tok.text]
        if env_only and sym.kind is not Kind.ENV:
            raise ParseError(
                "decision symbol %r may not occur in the environment theory" % sym.name, tok.span
            )
        op = None
        for candidate in ("!=", "<=", ">=", "=", "<", ">"):
            if self.at_punct(candidate):
                op = candidate
                break
        if op is None:
            if not isinstance(sym.domain, BoolDomain):
                raise ParseError(
                    "%r is not Boolean; compare it against a constant" % sym.name, tok.span
                )
            return BoolAtom(sym.name)
        op_tok = self.advance()
        if op in ("<", "<=", ">", ">=") and not isinstance(sym.domain, IntRange):
            raise ParseError("ordering comparisons need an integer symbol", op_tok.span)
        value = self.parse_literal(sym)
        if isinstance(sym.domain, BoolDomain):
            # Normalize Boolean comparisons to plain atoms.
            positive = (op == "=") == bool(value)
            return BoolAtom(sym.name) if positive else Not(BoolAtom(sym.name))
        return Compare(sym.name, op, value)

    def parse_literal(self, sym: Symbol) -> Value:
        tok = self.cur
        value: Optional[Value] = None
        if tok.kind == "int":
            self.advance()
            value = int(tok.text)
        elif tok.kind == "name" and tok.text in ("true", "false"):
            self.advance()
            value = tok.text == "true"
        elif tok.kind == "name":
            self.advance()
            value = tok.text
        else:
            raise ParseError("expected a constant", tok.span)
        if not sym.domain.contains(value):
            raise ParseError(
                "constant %s is outside the domain %s of %s"
                % (format_value(value), sym.domain.describe(), sym.name),
                tok.span,
            )
        return value


def parse_kb(text: str) -> KnowledgeBase:
    return _Parser(text).parse_kb()


# ---------------------------------------------------------------------------
# Structure files
# ---------------------------------------------------------------------------

def parse_structure(text: str, vocab: Vocabulary) -> PartialStructure:
    parser = _Parser(text)
    values: dict[str, Value] = {}
    while parser.cur.kind != "eof":
        tok = parser.expect_identifier("a symbol name")
        if tok.text not in vocab:
            raise ParseError("undeclared symbol %r" % tok.text, tok.span)
        if tok.text in values:
            raise ParseError("duplicate assignment to %r" % tok.text, tok.span)
        parser.expect_punct("=")
        values[tok.text] = parser.parse_literal(vocab[tok.text])
    return PartialStructure(vocab, values)


def serialize_structure(structure: PartialStructure) -> str:
    """Canonical text form; ``parse_structure`` inverts it exactly."""
    return "\n".join(
        "%s = %s" % (name, format_value(value)) for name, value in structure.items()
    )


# ---------------------------------------------------------------------------
# Canonical knowledge-base re-print
# ---------------------------------------------------------------------------

_PREC = {Iff: 1, Implies: 2, Or: 3, And: 4, Not: 5}


def format_formula(formula: Formula, parent_prec: int = 0) -> str:
    if isinstance(formula, BoolAtom):
        return formula.name
    if isinstance(formula, Compare):
        return "%s %s %s" % (formula.name, formula.op, format_value(formula.value))
    if isinstance(formula, Const):
        return "true" if formula.value else "false"
    if isinstance(formula, Not):
        inner = formula.arg
        if isinstance(inner, BoolAtom):
            return "~" + inner.name
        return "~" + format_formula(inner, _PREC[Not])
    if isinstance(formula, And):
        op, prec = "&", _PREC[And]
    elif isinstance(formula, Or):
        op, prec = "|", _PREC[Or]
    elif isinstance(formula, Implies):
        op, prec = "=>", _PREC[Implies]
    else:
        op, prec = "<=>", _PREC[Iff]
    if isinstance(formula, Implies):
        # Right-associative: left operand needs strictly higher precedence.
        text = "%s %s %s" % (
            format_formula(formula.left, prec + 1),
            op,
            format_formula(formula.right, prec),
        )
    else:
        text = "%s %s %s" % (
            format_formula(formula.left, prec),
            op,
            format_formula(formula.right, prec + 1),
        )
    if prec < parent_prec:
        return "(%s)" % text
    return text


def serialize_kb(kb: KnowledgeBase) -> str:
    lines = ["vocabulary {"]
    for sym in kb.vocabulary.symbols:
        goal = " goal" if sym.goal else ""
        lines.append("  %s %s : %s%s" % (sym.kind.value, sym.name, sym.domain.describe(), goal))
    lines.append("}")
    for title, sentences in (("environment", kb.tenv), ("solution", kb.tsol)):
        lines.append("theory %s {" % title)
        for sentence in sentences:
            prefix = "define " if sentence.is_definition else ""
            lines.append("  %s%s." % (prefix, format_formula(sentence.formula)))
        lines.append("}")
    return "\n".join(lines) + "\n"
