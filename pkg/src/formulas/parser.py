import re
from dataclasses import dataclass
from typing import Generator, List, Tuple, Union

from src.formulas.ast import (
    Add, And, Const, Dep, Der, Eq0, ExistsP, ExistsPth, FALSE, Formula, InP, Lam, LamN, LamP,
    Language, Mul, Neg, Nonzero, Not, Or, PDep, PDepN, Pow, Sroot, Sub, TRUE, Var,
)
from src.utils.errors import FormulaSyntaxError, LanguageTagError

HEADER_PATTERN = re.compile(r"^;;\s*lang:\s*(\S+)\s+p:\s*(\d+)\s*$")
TOKEN_PATTERN = re.compile(r"(?P<space>[ \t\r]+)|(?P<newline>\n)|(?P<comment>;[^\n]*)"
                           r"|(?P<open>\()|(?P<close>\))|(?P<int>-?\d+(?![^\s();]))|(?P<name>[^\s();]+)")
NAME_PATTERN = re.compile(r"^[A-Za-z_][A-Za-z0-9_]*$")


@dataclass(frozen=True)
class Token:
    kind: str
    text: str
    line: int
    column: int


@dataclass(frozen=True)
class SList:
    items: Tuple[Union["SList", Token], ...]
    line: int
    column: int


Item = Union[SList, Token]


def tokenize(text: str, first_line: int = 1) -> Generator[Token, None, None]:
    """
    Splits formula text into tokens, dropping whitespace and comments.

    Args:
        text: The formula body (everything after the header line).
        first_line: Line number of the first line of ``text``.

    Yields:
        Tokens of kind 'open', 'close', 'int' or 'name' with 1-based positions.
    """
    line, line_start, position = first_line, 0, 0
    while position < len(text):
        match = TOKEN_PATTERN.match(text, position)
        column = position - line_start + 1
        if match is None:
            raise FormulaSyntaxError(f"unexpected character {text[position]!r}", line, column)
        kind = match.lastgroup
        if kind == "newline":
            line += 1
            line_start = match.end()
        elif kind not in ("space", "comment"):
            yield Token(kind, match.group(), line, column)
        position = match.end()


def read_items(tokens: List[Token]) -> List[Item]:
    """Groups a token stream into nested lists."""
    stack: List[Tuple[Token, List[Item]]] = []
    top: List[Item] = []
    for token in tokens:
        if token.kind == "open":
            stack.append((token, top))
            top = []
        elif token.kind == "close":
            if not stack:
                raise FormulaSyntaxError("unbalanced ')'", token.line, token.column)
            opener, parent = stack.pop()
            parent.append(SList(tuple(top), opener.line, opener.column))
            top = parent
        else:
            top.append(token)
    if stack:
        opener = stack[-1][0]
        raise FormulaSyntaxError("'(' is never closed", opener.line, opener.column)
    return top


class _FormulaReader:
    """Turns nested lists into AST nodes."""

    def fail(self, item: Item, message: str):
        raise FormulaSyntaxError(message, item.line, item.column)

    def head(self, item: SList) -> str:
        if not item.items:
            self.fail(item, "empty list")
        first = item.items[0]
        if not isinstance(first, Token) or first.kind != "name":
            self.fail(first, "expected an operator name")
        return first.text

    def natural(self, item: Item) -> int:
        if not isinstance(item, Token) or item.kind != "int" or int(item.text) < 0:
            self.fail(item, "expected a natural number")
        return int(item.text)

    def variable(self, item: Item) -> str:
        if not isinstance(item, Token) or item.kind != "name" or not NAME_PATTERN.match(item.text):
            self.fail(item, "expected a variable name")
        return item.text

    def expect_count(self, item: SList, count: int, what: str):
        if len(item.items) - 1 != count:
            self.fail(item, f"'{what}' takes {count} operand(s), got {len(item.items) - 1}")

    def expect_some(self, item: SList, minimum: int, what: str):
        if len(item.items) - 1 < minimum:
            self.fail(item, f"'{what}' needs at least {minimum} operand(s)")

    # --- terms ---

    def term(self, item: Item):
        if isinstance(item, Token):
            if item.kind == "int":
                return Const(int(item.text))
            return Var(self.variable(item))
        op = self.head(item)
        args = item.items[1:]
        if op == "+":
            self.expect_count(item, 2, op)
            return Add(self.term(args[0]), self.term(args[1]))
        if op == "-":
            if len(args) == 1:
                return Neg(self.term(args[0]))
            self.expect_count(item, 2, op)
            return Sub(self.term(args[0]), self.term(args[1]))
        if op == "*":
            self.expect_count(item, 2, op)
            return Mul(self.term(args[0]), self.term(args[1]))
        if op == "^":
            self.expect_count(item, 2, op)
            return Pow(self.term(args[0]), self.natural(args[1]))
        if op in ("lam", "lamP"):
            self.expect_some(item, 3, op)
            n, i = self.natural(args[0]), self.natural(args[1])
            cls = Lam if op == "lam" else LamP
            return cls(n, i, tuple(self.term(a) for a in args[2:]))
        if op == "lamN":
            self.expect_some(item, 4, op)
            width, n, i = (self.natural(a) for a in args[:3])
            return LamN(width, n, i, tuple(self.term(a) for a in args[3:]))
        if op == "d":
            self.expect_count(item, 1, op)
            return Der(self.term(args[0]))
        if op == "s":
            self.expect_count(item, 1, op)
            return Sroot(self.term(args[0]))
        self.fail(item, f"unknown term operator '{op}'")

    # --- formulas ---

    def formula(self, item: Item):
        if isinstance(item, Token):
            if item.text == "true":
                return TRUE
            if item.text == "false":
                return FALSE
            self.fail(item, f"expected a formula, got '{item.text}'")
        op = self.head(item)
        args = item.items[1:]
        if op == "eq0":
            self.expect_count(item, 1, op)
            return Eq0(self.term(args[0]))
        if op in ("pdep", "dep"):
            self.expect_some(item, 2, op)
            cls = PDep if op == "pdep" else Dep
            return cls(self.natural(args[0]), tuple(self.term(a) for a in args[1:]))
        if op == "pdepN":
            self.expect_some(item, 3, op)
            return PDepN(self.natural(args[0]), self.natural(args[1]), tuple(self.term(a) for a in args[2:]))
        if op == "P":
            self.expect_count(item, 1, op)
            return InP(self.term(args[0]))
        if op == "nonzero":
            self.expect_some(item, 1, op)
            return Nonzero(tuple(self.term(a) for a in args))
        if op in ("and", "or"):
            self.expect_some(item, 1, op)
            cls = And if op == "and" else Or
            return cls(tuple(self.formula(a) for a in args))
        if op == "not":
            self.expect_count(item, 1, op)
            return Not(self.formula(args[0]))
        if op == "existsP":
            self.expect_count(item, 2, op)
            if not isinstance(args[0], SList):
                self.fail(args[0], "existsP expects a variable list")
            names = tuple(self.variable(v) for v in args[0].items)
            return ExistsP(names, self.formula(args[1]))
        if op == "existsPth":
            self.expect_count(item, 3, op)
            return ExistsPth(self.variable(args[0]), self.term(args[1]), self.formula(args[2]))
        self.fail(item, f"unknown formula operator '{op}'")


def parse_header(line: str) -> Tuple[Language, int]:
    match = HEADER_PATTERN.match(line.strip())
    if match is None:
        raise FormulaSyntaxError("expected a header ';; lang: scf|dcf|pair  p: <prime|0>'", 1, 1)
    tag, characteristic = match.groups()
    try:
        language = Language(tag)
    except ValueError:
        raise LanguageTagError(f"unknown language '{tag}', expected one of: scf, dcf, pair") from None
    return language, int(characteristic)


def parse_formula(text: str) -> Formula:
    """
    Parses one formula in the ``.eqf`` format.

    Args:
        text: Header line followed by exactly one s-expression formula.

    Returns:
        The validated ``Formula``. Syntax problems raise FormulaSyntaxError
        with the offending position; arity and language problems raise
        ArityError and LanguageTagError.
    """
    lines = text.split("\n")
    header_index = next((i for i, line in enumerate(lines) if line.strip()), None)
    if header_index is None:
        raise FormulaSyntaxError("empty formula file", 1, 1)
    language, characteristic = parse_header(lines[header_index])
    body = "\n".join(lines[header_index + 1:])
    tokens = list(tokenize(body, first_line=header_index + 2))
    items = read_items(tokens)
    if not items:
        raise FormulaSyntaxError("missing formula after the header", header_index + 2, 1)
    if len(items) > 1:
        extra = items[1]
        raise FormulaSyntaxError("more than one formula in the file", extra.line, extra.column)
    root = _FormulaReader().formula(items[0])
    return Formula(language, characteristic, root)


def load_formula(path: str) -> Formula:
    with open(path, "r", encoding="utf-8") as f:
        return parse_formula(f.read())
