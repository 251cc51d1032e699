"""Lexer and recursive-descent parser for ``.as`` model files.

The concrete syntax follows the Prolog-flavoured listing notation::

    type(enum_State, X) :- X in 0..7.
    var([aState], enum_State).
    state_def([aState]).
    init([6]).
    as :-
        actions(
            'Lock'::(true) => ( ((aState #= 6) => (aState := 5)) ),
            'after'(T)::(true) => ( ((T #= 20 /\\ aState #= 3) => (aState := 2)) )
        ),
        dood( 'Lock' [] [X:int]:'after'(X) ).

The full grammar is documented in docs/grammar.md. Errors report the
farthest position the parser reached together with every token it would
have accepted there.
"""

import logging
import re
from collections.abc import Callable
from dataclasses import dataclass
from typing import NoReturn, Optional, TypeVar

from .exceptions import ParseError
from .model import (
    Action,
    ArithOp,
    Assign,
    BinOp,
    Body,
    BoolConst,
    Choice,
    Compare,
    CompareOp,
    Conjunction,
    Const,
    Disjunction,
    DoodEntry,
    Expr,
    Guard,
    Guarded,
    Location,
    Model,
    Negation,
    Param,
    Seq,
    TypeDef,
    VarDecl,
    VarRef,
)

logger = logging.getLogger(__name__)

T = TypeVar("T")

# =============================================================================
# LEXER
# =============================================================================

_OPERATORS = [
    "#\\/",
    "#/\\",
    "#\\=",
    "#=<",
    "#>=",
    "#=",
    "#<",
    "#>",
    "#\\",
    "\\/",
    "/\\",
    "\\+",
    ":-",
    "::",
    ":=",
    "=>",
    "..",
    "[]",
    "(",
    ")",
    "[",
    "]",
    ",",
    ".",
    ";",
    ":",
    "+",
    "-",
    "*",
]

_ALIASES = {"#/\\": "/\\", "#\\/": "\\/", "#\\": "\\+"}

_TOKEN_RE = re.compile(
    "|".join(
        [
            r"(?P<NEWLINE>\n)",
            r"(?P<WS>[ \t\r\f]+)",
            r"(?P<COMMENT>%[^\n]*)",
            r"(?P<LABEL>'[^'\n]*')",
            r"(?P<INT>\d+)",
            r"(?P<IDENT>[A-Za-z_][A-Za-z0-9_]*)",
            "(?P<OP>" + "|".join(re.escape(op) for op in _OPERATORS) + ")",
        ]
    )
)

KEYWORDS = frozenset(
    {"type", "var", "state_def", "init", "as", "actions", "dood", "in", "true", "false"}
)

_COMPARE_TOKENS = {op.value: op for op in CompareOp}

_KIND_NAMES = {
    "IDENT": "identifier",
    "INT": "integer",
    "LABEL": "quoted label",
    "EOF": "end of input",
}


@dataclass(frozen=True)
class Token:
    kind: str
    text: str
    loc: Location

    def describe(self) -> str:
        if self.kind == "EOF":
            return "end of input"
        return f"'{self.text}'"


def tokenize(text: str) -> list[Token]:
    """Split model text into tokens, dropping whitespace and ``%`` comments.

    Raises:
        ParseError: On a character no token starts with
    """
    tokens: list[Token] = []
    line, line_start, pos = 1, 0, 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if m is None:
            loc = Location(line, pos - line_start + 1)
            raise ParseError(f"unexpected character {text[pos]!r}", loc)
        kind = m.lastgroup or ""
        value = m.group()
        if kind == "NEWLINE":
            line += 1
            line_start = m.end()
        elif kind not in ("WS", "COMMENT"):
            loc = Location(line, pos - line_start + 1)
            if kind == "OP":
                value = _ALIASES.get(value, value)
                kind = value
            elif kind == "LABEL":
                value = value[1:-1]
            tokens.append(Token(kind, value, loc))
        pos = m.end()
    tokens.append(Token("EOF", "", Location(line, pos - line_start + 1)))
    return tokens


# =============================================================================
# PARSER
# =============================================================================


class Parser:
    """Recursive-descent parser over a token list.

    Alternatives that share a prefix are tried with ``attempt``, which
    rewinds on failure. The farthest failure seen so far is kept for
    error reporting.
    """

    def __init__(self, tokens: list[Token]) -> None:
        self.tokens = tokens
        self.pos = 0
        self._far_pos = -1
        self._far_expected: set[str] = set()

    # -- token helpers -------------------------------------------------------

    @property
    def current(self) -> Token:
        return self.tokens[self.pos]

    def peek(self, offset: int = 1) -> Token:
        return self.tokens[min(self.pos + offset, len(self.tokens) - 1)]

    def _note(self, what: str) -> None:
        if self.pos > self._far_pos:
            self._far_pos = self.pos
            self._far_expected = {what}
        elif self.pos == self._far_pos:
            self._far_expected.add(what)

    def fail(self) -> NoReturn:
        if self._far_pos < self.pos:
            self._far_pos = self.pos
        tok = self.tokens[self._far_pos]
        raise ParseError(f"unexpected {tok.describe()}", tok.loc, list(self._far_expected))

    def check(self, kind: str) -> bool:
        if self.current.kind == kind:
            return True
        self._note(_KIND_NAMES.get(kind, f"'{kind}'"))
        return False

    def check_keyword(self, word: str) -> bool:
        if self.current.kind == "IDENT" and self.current.text == word:
            return True
        self._note(f"'{word}'")
        return False

    def accept(self, kind: str) -> Optional[Token]:
        if self.check(kind):
            tok = self.current
            self.pos += 1
            return tok
        return None

    def expect(self, kind: str) -> Token:
        tok = self.accept(kind)
        if tok is None:
            self.fail()
        return tok

    def expect_keyword(self, word: str) -> Token:
        if not self.check_keyword(word):
            self.fail()
        tok = self.current
        self.pos += 1
        return tok

    def expect_name(self) -> Token:
        """An identifier that is not a reserved word."""
        if self.check("IDENT") and self.current.text not in KEYWORDS:
            tok = self.current
            self.pos += 1
            return tok
        self._note("identifier")
        self.fail()

    def attempt(self, rule: Callable[[], T]) -> Optional[T]:
        saved = self.pos
        try:
            return rule()
        except ParseError:
            self.pos = saved
            return None

    # -- declarations --------------------------------------------------------

    def parse_model(self) -> Model:
        start = self.current.loc
        types: list[TypeDef] = []
        variables: list[VarDecl] = []
        while True:
            if self.check_keyword("type"):
                types.append(self.parse_type())
            elif self.check_keyword("var"):
                variables.extend(self.parse_var())
            else:
                break
        state_def = self.parse_state_def()
        init = self.parse_init()
        actions, dood = self.parse_system()
        self.expect("EOF")
        return Model(
            types=tuple(types),
            variables=tuple(variables),
            state_def=state_def,
            init=init,
            actions=actions,
            dood=dood,
            loc=start,
        )

    def parse_int(self) -> int:
        negative = self.accept("-") is not None
        value = int(self.expect("INT").text)
        return -value if negative else value

    def parse_type(self) -> TypeDef:
        start = self.expect_keyword("type").loc
        self.expect("(")
        name = self.expect_name().text
        self.expect(",")
        binder = self.expect_name().text
        self.expect(")")
        self.expect(":-")
        bound = self.expect_name()
        if bound.text != binder:
            raise ParseError(f"type binder '{binder}' does not match '{bound.text}'", bound.loc)
        self.expect_keyword("in")
        lo = self.parse_int()
        self.expect("..")
        hi = self.parse_int()
        self.expect(".")
        return TypeDef(name, lo, hi, loc=start)

    def parse_name_list(self) -> list[Token]:
        if self.accept("[]"):
            return []
        self.expect("[")
        names: list[Token] = []
        if not self.check("]"):
            names.append(self.expect_name())
            while self.accept(","):
                names.append(self.expect_name())
        self.expect("]")
        return names

    def parse_var(self) -> list[VarDecl]:
        self.expect_keyword("var")
        self.expect("(")
        names = self.parse_name_list()
        self.expect(",")
        type_name = self.expect_name().text
        self.expect(")")
        self.expect(".")
        return [VarDecl(tok.text, type_name, loc=tok.loc) for tok in names]

    def parse_state_def(self) -> tuple[str, ...]:
        self.expect_keyword("state_def")
        self.expect("(")
        names = self.parse_name_list()
        self.expect(")")
        self.expect(".")
        return tuple(tok.text for tok in names)

    def parse_init(self) -> tuple[int, ...]:
        self.expect_keyword("init")
        self.expect("(")
        values: list[int] = []
        if not self.accept("[]"):
            self.expect("[")
            if not self.check("]"):
                values.append(self.parse_int())
                while self.accept(","):
                    values.append(self.parse_int())
            self.expect("]")
        self.expect(")")
        self.expect(".")
        return tuple(values)

    def parse_system(self) -> tuple[tuple[Action, ...], tuple[DoodEntry, ...]]:
        self.expect_keyword("as")
        self.expect(":-")
        self.expect_keyword("actions")
        self.expect("(")
        actions: list[Action] = []
        if not self.check(")"):
            actions.append(self.parse_action())
            while self.accept(","):
                actions.append(self.parse_action())
        self.expect(")")
        self.expect(",")
        self.expect_keyword("dood")
        self.expect("(")
        dood: list[DoodEntry] = []
        if not self.check(")"):
            dood.append(self.parse_dood_entry())
            while self.accept("[]"):
                dood.append(self.parse_dood_entry())
        self.expect(")")
        self.expect(".")
        return tuple(actions), tuple(dood)

    def parse_label(self) -> Token:
        if self.check("LABEL"):
            tok = self.current
            self.pos += 1
            return tok
        return self.expect_name()

    def parse_action(self) -> Action:
        label = self.parse_label()
        params: list[Param] = []
        if self.accept("("):
            tok = self.expect_name()
            params.append(Param(tok.text, loc=tok.loc))
            while self.accept(","):
                tok = self.expect_name()
                params.append(Param(tok.text, loc=tok.loc))
            self.expect(")")
        self.expect("::")
        guard = self.parse_guard()
        self.expect("=>")
        body = self.parse_body()
        return Action(label.text, tuple(params), guard, body, loc=label.loc)

    def parse_dood_entry(self) -> DoodEntry:
        start = self.current.loc
        if not self.accept("["):
            return DoodEntry(self.parse_label().text, (), loc=start)
        bindings: dict[str, Param] = {}
        while True:
            name = self.expect_name()
            self.expect(":")
            type_name = self.expect_name().text
            if name.text in bindings:
                raise ParseError(f"parameter '{name.text}' bound twice", name.loc)
            bindings[name.text] = Param(name.text, type_name, loc=name.loc)
            if not self.accept(","):
                break
        self.expect("]")
        self.expect(":")
        label = self.parse_label()
        args: list[Token] = []
        self.expect("(")
        args.append(self.expect_name())
        while self.accept(","):
            args.append(self.expect_name())
        self.expect(")")
        params = []
        for tok in args:
            if tok.text not in bindings:
                raise ParseError(f"argument '{tok.text}' is not bound in the dood entry", tok.loc)
            params.append(bindings[tok.text])
        if len(params) != len(bindings):
            raise ParseError(f"unused binding in dood entry for '{label.text}'", start)
        return DoodEntry(label.text, tuple(params), loc=start)

    # -- bodies --------------------------------------------------------------

    def parse_body(self) -> Body:
        first = self.parse_seq()
        if self.check("[]"):
            loc = self.current.loc
            self.pos += 1
            return Choice(first, self.parse_body(), loc=loc)
        return first

    def parse_seq(self) -> Body:
        first = self.parse_guarded()
        if self.check(";"):
            loc = self.current.loc
            self.pos += 1
            return Seq(first, self.parse_seq(), loc=loc)
        return first

    def _guard_arrow(self) -> Guard:
        guard = self.parse_guard()
        self.expect("=>")
        return guard

    def parse_guarded(self) -> Body:
        start = self.current
        if start.kind == "IDENT" and self.peek().kind == ":=":
            return self.parse_primary()
        guard = self.attempt(self._guard_arrow)
        if guard is not None:
            return Guarded(guard, self.parse_guarded(), loc=start.loc)
        return self.parse_primary()

    def parse_primary(self) -> Body:
        if self.accept("("):
            body = self.parse_body()
            self.expect(")")
            return body
        target = self.expect_name()
        self.expect(":=")
        return Assign(target.text, self.parse_expr(), loc=target.loc)

    # -- guards --------------------------------------------------------------

    def parse_guard(self) -> Guard:
        left = self.parse_conjunction()
        while self.check("\\/"):
            loc = self.current.loc
            self.pos += 1
            left = Disjunction(left, self.parse_conjunction(), loc=loc)
        return left

    def parse_conjunction(self) -> Guard:
        left = self.parse_unary()
        while self.check("/\\"):
            loc = self.current.loc
            self.pos += 1
            left = Conjunction(left, self.parse_unary(), loc=loc)
        return left

    def _parenthesized_guard(self) -> Guard:
        self.expect("(")
        guard = self.parse_guard()
        self.expect(")")
        return guard

    def parse_unary(self) -> Guard:
        tok = self.current
        if self.accept("\\+"):
            return Negation(self.parse_unary(), loc=tok.loc)
        if self.check_keyword("true") or self.check_keyword("false"):
            self.pos += 1
            return BoolConst(tok.text == "true", loc=tok.loc)
        if self.check("("):
            guard = self.attempt(self._parenthesized_guard)
            if guard is not None:
                return guard
        return self.parse_comparison()

    def parse_comparison(self) -> Compare:
        left = self.parse_expr()
        tok = self.current
        op = _COMPARE_TOKENS.get(tok.kind)
        if op is None:
            for text in _COMPARE_TOKENS:
                self._note(f"'{text}'")
            self.fail()
        self.pos += 1
        right = self.parse_expr()
        return Compare(op, left, right, loc=tok.loc)

    # -- expressions ---------------------------------------------------------

    def parse_expr(self) -> Expr:
        left = self.parse_term()
        while self.check("+") or self.check("-"):
            tok = self.current
            self.pos += 1
            left = BinOp(ArithOp(tok.kind), left, self.parse_term(), loc=tok.loc)
        return left

    def parse_term(self) -> Expr:
        left = self.parse_factor()
        while self.check("*"):
            tok = self.current
            self.pos += 1
            left = BinOp(ArithOp.MUL, left, self.parse_factor(), loc=tok.loc)
        return left

    def parse_factor(self) -> Expr:
        tok = self.current
        if self.check("INT") or self.check("-"):
            return Const(self.parse_int(), loc=tok.loc)
        if self.accept("("):
            expr = self.parse_expr()
            self.expect(")")
            return expr
        name = self.expect_name()
        return VarRef(name.text, loc=name.loc)


def parse_unvalidated(text: str) -> Model:
    """Parse model text without running the static checks."""
    return Parser(tokenize(text)).parse_model()


def parse_model(text: str) -> Model:
    """Parse and validate model text.

    Returns a model satisfying every static rule, with parameter types bound
    from the do-od block.

    Raises:
        ParseError: If the text does not match the grammar
        ModelValidationError: If a static rule is violated
    """
    from .validation import validate_model

    model = validate_model(parse_unvalidated(text))
    logger.debug(
        f"Parsed model: {len(model.types)} types, {len(model.variables)} variables, "
        f"{len(model.actions)} actions"
    )
    return model
