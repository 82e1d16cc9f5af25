"""
Recursive-descent parser for formula text.

Precedence, loosest first: `<->`, `->` (right associative), `or`/`|`,
`and`/`&`, `not`/`~`. A quantifier body extends as far right as possible.
"""

import re
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Tuple

from matic.errors import FormulaSyntaxError

from .syntax import (
    COMPARATORS,
    BinOp,
    Comprehension,
    Definition,
    Definitions,
    Equal,
    Formula,
    FuncApp,
    Member,
    Modifier,
    Not,
    Num,
    Quant,
    QuantKind,
    Rel,
    SetLit,
    St,
    Term,
    Var,
)

KEYWORDS = {"forall", "exists", "not", "and", "or", "in", "def"}

_TOKEN = re.compile(
    r"\s*(?:(?P<num>\d+)|(?P<ident>[A-Za-z_][A-Za-z0-9_']*)"
    r"|(?P<op><->|->|:=|<=|>=|[<>=()\[\]{},.|&~^*+]))"
)


@dataclass(frozen=True)
class Token:
    kind: str  # num | ident | op | end
    text: str
    position: int


def tokenize(text: str) -> List[Token]:
    tokens = []
    pos = 0
    while pos < len(text):
        if text[pos:].strip() == "":
            break
        match = _TOKEN.match(text, pos)
        if match is None:
            offset = pos + len(text[pos:]) - len(text[pos:].lstrip())
            raise FormulaSyntaxError(f"Unexpected character {text[offset]!r}", offset)
        kind = match.lastgroup
        tokens.append(Token(kind, match.group(kind), match.start(kind)))
        pos = match.end()
    tokens.append(Token("end", "", len(text)))
    return tokens


class FormulaParser:
    def __init__(self, text: str):
        self.text = text
        self.tokens = tokenize(text)
        self.pos = 0

    # Token helpers

    def _peek(self, ahead: int = 0) -> Token:
        return self.tokens[min(self.pos + ahead, len(self.tokens) - 1)]

    def _at(self, *texts: str) -> bool:
        token = self._peek()
        return token.kind in ("op", "ident") and token.text in texts

    def _error(self, message: str, token: Optional[Token] = None) -> FormulaSyntaxError:
        token = token or self._peek()
        found = "end of input" if token.kind == "end" else repr(token.text)
        return FormulaSyntaxError(f"{message}, found {found}", token.position)

    def _consume(self, expected: Optional[str] = None) -> Token:
        token = self._peek()
        if token.kind == "end":
            raise self._error(f"Expected {expected!r}" if expected else "Unexpected end of input")
        if expected is not None and token.text != expected:
            raise self._error(f"Expected {expected!r}")
        self.pos += 1
        return token

    def _name(self, what: str) -> str:
        token = self._peek()
        if token.kind != "ident" or token.text in KEYWORDS:
            raise self._error(f"Expected {what}")
        self.pos += 1
        return token.text

    def _finish(self) -> None:
        if self._peek().kind != "end":
            raise self._error("Unexpected token")

    # Formulas

    def parse(self) -> Formula:
        formula = self.formula()
        self._finish()
        return formula

    def formula(self) -> Formula:
        left = self._implies()
        while self._at("<->"):
            self._consume()
            left = BinOp("<->", left, self._implies())
        return left

    def _implies(self) -> Formula:
        left = self._or()
        if self._at("->"):
            self._consume()
            return BinOp("->", left, self._implies())
        return left

    def _or(self) -> Formula:
        left = self._and()
        while self._at("or", "|"):
            self._consume()
            left = BinOp("or", left, self._and())
        return left

    def _and(self) -> Formula:
        left = self._unary()
        while self._at("and", "&"):
            self._consume()
            left = BinOp("and", left, self._unary())
        return left

    def _unary(self) -> Formula:
        if self._at("not", "~"):
            self._consume()
            return Not(self._unary())
        if self._at("forall", "exists"):
            return self._quantifier()
        if self._at("("):
            self._consume("(")
            inner = self.formula()
            self._consume(")")
            return inner
        return self._atom()

    def _quantifier(self) -> Quant:
        kind = QuantKind(self._consume().text)
        modifier = Modifier.PLAIN
        if self._at("^"):
            self._consume()
            token = self._peek()
            if token.text not in ("st", "stfin"):
                raise self._error("Expected quantifier modifier 'st' or 'stfin'")
            self._consume()
            modifier = Modifier(token.text)
        var = self._name("a bound variable")
        bound = None
        if self._at("in"):
            self._consume()
            bound = self.term()
        self._consume(".")
        return Quant(kind, var, self.formula(), modifier, bound)

    def _atom(self) -> Formula:
        start = self._peek()
        left = self.term()
        if self._at("in"):
            self._consume()
            return Member(left, self.term())
        if self._at("="):
            self._consume()
            return Equal(left, self.term())
        if self._at(*COMPARATORS):
            op = self._consume().text
            return Rel(op, (left, self.term()))
        if isinstance(left, FuncApp) and left.name.isidentifier():
            if left.name == "st":
                if len(left.args) != 1:
                    raise self._error("st takes exactly one argument", start)
                return St(left.args[0])
            return Rel(left.name, left.args)
        raise self._error("Expected a relation after term")

    # Terms

    def term(self) -> Term:
        left = self._product()
        while self._at("+"):
            self._consume()
            left = FuncApp("+", (left, self._product()))
        return left

    def _product(self) -> Term:
        left = self._primary_term()
        while self._at("*"):
            self._consume()
            left = FuncApp("*", (left, self._primary_term()))
        return left

    def _primary_term(self) -> Term:
        token = self._peek()
        if token.kind == "num":
            self._consume()
            return Num(int(token.text))
        if self._at("["):
            self._consume()
            elements = self._term_list("]")
            return SetLit(tuple(elements))
        if self._at("{"):
            self._consume()
            var = self._name("a comprehension variable")
            self._consume("|")
            body = self.formula()
            self._consume("}")
            return Comprehension(var, body)
        name = self._name("a term")
        if self._at("("):
            self._consume()
            return FuncApp(name, tuple(self._term_list(")")))
        return Var(name)

    def _term_list(self, closing: str) -> List[Term]:
        items: List[Term] = []
        if self._at(closing):
            self._consume()
            return items
        while True:
            items.append(self.term())
            if self._at(closing):
                self._consume()
                return items
            self._consume(",")

    # Definitions

    def definition(self) -> Definition:
        self._consume("def")
        name = self._name("a definition name")
        self._consume("(")
        params: List[str] = []
        if not self._at(")"):
            params.append(self._name("a parameter"))
            while self._at(","):
                self._consume()
                params.append(self._name("a parameter"))
        self._consume(")")
        self._consume(":=")
        body = self.formula()
        self._finish()
        return Definition(name, tuple(params), body)


def parse_formula(text: str) -> Formula:
    """
    Parse formula text into an AST.

    Raises:
        FormulaSyntaxError: with the character offset of the offending token
    """
    return FormulaParser(text).parse()


def parse_term(text: str) -> Term:
    parser = FormulaParser(text)
    term = parser.term()
    parser._finish()
    return term


def parse_definition(text: str) -> Definition:
    return FormulaParser(text).definition()


BUILTIN_DEFINITIONS: Definitions = {
    d.name: d
    for d in (
        parse_definition("def limited(n) := exists^st r . n <= r"),
        parse_definition("def infinitesimal(x) := forall^st e . (e > 0 -> x <= e)"),
    )
}


@dataclass
class FormulaDocument:
    """Parsed formula file: definitions plus (line number, formula) entries."""

    definitions: Definitions = field(default_factory=lambda: dict(BUILTIN_DEFINITIONS))
    formulas: List[Tuple[int, str, Formula]] = field(default_factory=list)


def parse_document(text: str) -> FormulaDocument:
    """One formula or definition per line; blank lines and `#` comments are skipped."""
    doc = FormulaDocument()
    for number, line in enumerate(text.splitlines(), start=1):
        stripped = line.strip()
        if not stripped or stripped.startswith("#"):
            continue
        try:
            if stripped.startswith("def "):
                definition = parse_definition(stripped)
                doc.definitions[definition.name] = definition
            else:
                doc.formulas.append((number, stripped, parse_formula(stripped)))
        except FormulaSyntaxError as e:
            raise FormulaSyntaxError(f"Line {number}: {e.message.rsplit(' at position', 1)[0]}", e.position)
    return doc


def definitions_with(extra: Optional[Dict[str, Definition]] = None) -> Definitions:
    merged = dict(BUILTIN_DEFINITIONS)
    merged.update(extra or {})
    return merged
