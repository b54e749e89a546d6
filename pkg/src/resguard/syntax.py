"""Concrete syntax: lexer, precedence-climbing parser, printer, problem files."""

from __future__ import annotations

import json
import re
from dataclasses import dataclass
from pathlib import Path

from .terms import (
    E, LAMBDA, ZERO, Bin, Conclusion, Const, Scale, Signature, Term, Un,
    UndeclaredVariable, Var, VarContext,
)


class ParseError(ValueError):
    def __init__(self, message: str, line: int = 1, col: int = 1, expected=()):
        self.message = message
        self.line = line
        self.col = col
        self.expected = sorted(set(expected))
        exp = f" (expected one of: {', '.join(self.expected)})" if self.expected else ""
        super().__init__(f"{line}:{col}: {message}{exp}")


# longest alternatives first so that the regex alternation behaves like longest match
_TERM_SYMBOLS = ["|>", "++", "&", "|", "*", "\\", "/", "+", "-", "~", "D", "(", ")"]
_FORMULA_SYMBOLS = ["&&", "||", "->", "<=", ">=", "!=", "|>", "++", "&", "|", "*", "\\", "/",
                    "+", "-", "~", "D", "(", ")", "<", ">", "=", "!", ","]


def _lexer(symbols):
    syms = sorted(symbols, key=len, reverse=True)
    pat = "|".join(re.escape(s) for s in syms)
    return re.compile(rf"(?P<ws>\s+)|(?P<ident>[a-z][a-zA-Z0-9_]*)|(?P<int>[0-9]+)|(?P<sym>{pat})|(?P<kw>[A-Z][A-Z]+)")


_TERM_LEX = _lexer(_TERM_SYMBOLS)
_FORMULA_LEX = _lexer(_FORMULA_SYMBOLS)


@dataclass
class Token:
    kind: str  # ident | int | sym | kw | eof
    text: str
    line: int
    col: int


def tokenize(src: str, formula: bool = False) -> list[Token]:
    lex = _FORMULA_LEX if formula else _TERM_LEX
    out: list[Token] = []
    pos, line, line_start = 0, 1, 0
    while pos < len(src):
        m = lex.match(src, pos)
        if m is None:
            raise ParseError(f"unexpected character {src[pos]!r}", line, pos - line_start + 1)
        kind = m.lastgroup
        text = m.group()
        if kind == "ws":
            nl = text.count("\n")
            if nl:
                line += nl
                line_start = pos + text.rfind("\n") + 1
        else:
            if kind == "kw" and not formula:
                raise ParseError(f"unexpected word {text!r}", line, pos - line_start + 1)
            out.append(Token(kind, text, line, pos - line_start + 1))
        pos = m.end()
    out.append(Token("eof", "", line, pos - line_start + 1))
    return out


_BINARY_LEVELS = {
    "|>": (1, "guard"),
    "|": (2, "join"),
    "&": (3, "meet"),
    "+": (4, "plus"), "-": (4, "minus"), "++": (4, "oplus"),
    "*": (5, "prod"), "\\": (5, "lres"), "/": (5, "rres"),
}
_LA_ONLY = {"plus", "minus", "neg"}
_MV_ONLY = {"oplus", "not", "delta"}


class TermParser:
    def __init__(self, tokens: list[Token], sig: Signature, pos: int = 0):
        self.toks = tokens
        self.pos = pos
        self.sig = sig

    @property
    def tok(self) -> Token:
        return self.toks[self.pos]

    def error(self, msg, expected=()):
        t = self.tok
        raise ParseError(msg, t.line, t.col, expected)

    def advance(self) -> Token:
        t = self.toks[self.pos]
        self.pos += 1
        return t

    def _allowed(self, op: str):
        fam = self.sig.family
        if op == "guard" and not self.sig.guarded:
            self.error(f"'|>' is not available in {self.sig.value}")
        if op in _LA_ONLY and fam != "LA":
            self.error(f"group sugar is not available in {self.sig.value}")
        if op in _MV_ONLY and fam != "MV":
            self.error(f"MV sugar is not available in {self.sig.value}")
        if op == "delta" and not self.sig.guarded:
            self.error(f"'D' needs a guarded signature, not {self.sig.value}")

    def parse(self, min_level: int = 1) -> Term:
        left = self.parse_unary()
        while True:
            t = self.tok
            if t.kind != "sym" or t.text not in _BINARY_LEVELS:
                return left
            level, op = _BINARY_LEVELS[t.text]
            if level < min_level:
                return left
            if op == "minus" and self.sig.family != "LA":
                return left
            self._allowed(op)
            self.advance()
            # guard is right-associative, everything else left-associative
            right = self.parse(level if op == "guard" else level + 1)
            left = Bin(op, left, right)

    def parse_unary(self) -> Term:
        t = self.tok
        if t.kind == "sym" and t.text in ("-", "~", "D"):
            op = {"-": "neg", "~": "not", "D": "delta"}[t.text]
            self._allowed(op)
            self.advance()
            return Un(op, self.parse_unary())
        return self.parse_atom()

    def parse_atom(self) -> Term:
        t = self.tok
        if t.kind == "ident":
            self.advance()
            return E if t.text == "e" else Var(t.text)
        if t.kind == "int":
            nxt = self.toks[self.pos + 1]
            if self.sig.family == "LA" and nxt.kind == "sym" and nxt.text == "*":
                self.advance()
                self.advance()
                return Scale(int(t.text), self.parse_unary())
            if t.text == "0":
                self.advance()
                return ZERO
            self.error(f"integer {t.text} is only allowed as a scalar factor in LA terms")
        if t.kind == "sym" and t.text == "(":
            self.advance()
            inner = self.parse(1)
            if not (self.tok.kind == "sym" and self.tok.text == ")"):
                self.error("unbalanced parenthesis", [")"])
            self.advance()
            return inner
        self.error("expected a term", ["identifier", "e", "0", "(", "-", "~", "D"])


def parse_term(src: str, sig: Signature | str = Signature.PRL_GUARD) -> Term:
    if isinstance(sig, str):
        sig = Signature.parse(sig)
    p = TermParser(tokenize(src), sig)
    term = p.parse()
    if p.tok.kind != "eof":
        p.error(f"unexpected token {p.tok.text!r}", ["operator", "end of input"])
    return term


def parse_conclusion(src: str, sig: Signature | str) -> Conclusion:
    if src.strip() == "LAMBDA":
        return LAMBDA
    return parse_term(src, sig)


# --- printer -----------------------------------------------------------------

_OP_SYMBOL = {"guard": "|>", "join": "|", "meet": "&", "plus": "+", "minus": "-", "oplus": "++",
              "prod": "*", "lres": "\\", "rres": "/"}
_OP_LEVEL = {"guard": 1, "join": 2, "meet": 3, "plus": 4, "minus": 4, "oplus": 4,
             "prod": 5, "lres": 5, "rres": 5}
_UN_SYMBOL = {"neg": "-", "not": "~", "delta": "D "}


_TRAILING_ZERO = re.compile(r"(?<![A-Za-z0-9_])0$")


def _level(t: Term) -> int:
    if isinstance(t, Bin):
        return _OP_LEVEL[t.op]
    if isinstance(t, Scale):
        return 5
    if isinstance(t, Un):
        return 6
    return 7


def print_term(t: Conclusion, sig: Signature | None = None) -> str:
    if t is LAMBDA:
        return "LAMBDA"
    return _print(t)


def _print(t: Term) -> str:
    if isinstance(t, Var):
        return t.name
    if isinstance(t, Const):
        return t.kind
    if isinstance(t, Un):
        arg = _print(t.arg)
        if _level(t.arg) < 6:
            arg = f"({arg})"
        return _UN_SYMBOL[t.op] + arg
    if isinstance(t, Scale):
        arg = _print(t.arg)
        if _level(t.arg) <= 5:
            arg = f"({arg})"
        if t.n < 0:
            return f"-({-t.n}*{arg})"
        return f"{t.n}*{arg}"
    assert isinstance(t, Bin)
    lvl = _OP_LEVEL[t.op]
    l, r = _print(t.left), _print(t.right)
    ll, rl = _level(t.left), _level(t.right)
    if t.op == "guard":
        lp, rp = ll <= lvl, rl < lvl
    else:
        lp, rp = ll < lvl, rl <= lvl
        if lvl == 5 and ll == 5 and not (isinstance(t.left, Bin) and t.left.op == t.op):
            lp = True  # mixed product/residual chains
    if t.op == "prod" and not lp and _TRAILING_ZERO.search(l):
        lp = True  # "0 *" would read as a scalar in LA
    if lp:
        l = f"({l})"
    if rp:
        r = f"({r})"
    return f"{l} {_OP_SYMBOL[t.op]} {r}"


# --- problem files -----------------------------------------------------------

class ProblemError(ValueError):
    """Problem-file failure; ``code`` is one of ``schema``, ``parse``, ``undeclared``."""

    def __init__(self, code: str, message: str, where: ParseError | None = None):
        self.code = code
        self.where = where  # the underlying parse error, when there is one
        super().__init__(f"[{code}] {message}")


@dataclass
class Problem:
    sig: Signature
    ctx: VarContext
    premises: list[Term]
    conclusion: Conclusion


def _names(obj, key) -> list[str]:
    val = obj.get(key, [])
    if not isinstance(val, list) or not all(isinstance(v, str) for v in val):
        raise ProblemError("schema", f"vars.{key} must be a list of names")
    for v in val:
        if not re.fullmatch(r"[a-z][a-zA-Z0-9_]*", v) or v == "e":
            raise ProblemError("schema", f"bad variable name {v!r}")
    return val


def problem_from_dict(data) -> Problem:
    if not isinstance(data, dict):
        raise ProblemError("schema", "top level must be an object")
    for key in ("signature", "premises", "conclusion"):
        if key not in data:
            raise ProblemError("schema", f"missing field {key!r}")
    try:
        sig = Signature.parse(data["signature"]) if isinstance(data["signature"], str) else None
    except ValueError as exc:
        raise ProblemError("schema", str(exc)) from None
    if sig is None:
        raise ProblemError("schema", "signature must be a string")
    vars_ = data.get("vars", {})
    if not isinstance(vars_, dict):
        raise ProblemError("schema", "vars must be an object")
    y = vars_.get("y")
    if y is not None and not isinstance(y, str):
        raise ProblemError("schema", "vars.y must be a name")
    try:
        ctx = VarContext(tuple(_names(vars_, "xs")), y, tuple(_names(vars_, "zs")))
    except ValueError as exc:
        if isinstance(exc, ProblemError):
            raise
        raise ProblemError("schema", str(exc)) from None
    prem_src = data["premises"]
    if not isinstance(prem_src, list) or not all(isinstance(p, str) for p in prem_src):
        raise ProblemError("schema", "premises must be a list of strings")
    if not isinstance(data["conclusion"], str):
        raise ProblemError("schema", "conclusion must be a string")
    try:
        premises = [parse_term(p, sig) for p in prem_src]
        conclusion = parse_conclusion(data["conclusion"], sig)
    except ParseError as exc:
        raise ProblemError("parse", str(exc), where=exc) from None
    if "vars" not in data:
        # no declarations at all: take the variables as they occur
        ctx = VarContext.infer(*premises, conclusion)
    try:
        ctx.check_declared(*premises, conclusion)
    except UndeclaredVariable as exc:
        raise ProblemError("undeclared", str(exc)) from None
    return Problem(sig, ctx, premises, conclusion)


def load_problem(path) -> Problem:
    try:
        raw = Path(path).read_text(encoding="utf-8")
        data = json.loads(raw)
    except (OSError, UnicodeDecodeError, json.JSONDecodeError) as exc:
        raise ProblemError("schema", f"cannot read problem file: {exc}") from None
    return problem_from_dict(data)


def problem_to_dict(p: Problem) -> dict:
    out = {"signature": p.sig.value,
           "vars": {"xs": list(p.ctx.xs), "zs": list(p.ctx.params)},
           "premises": [print_term(s) for s in p.premises],
           "conclusion": print_term(p.conclusion)}
    if p.ctx.eliminable is not None:
        out["vars"]["y"] = p.ctx.eliminable
    return out
