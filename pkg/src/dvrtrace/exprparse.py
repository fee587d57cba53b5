"""Tiny arithmetic-expression evaluator for exact scalar strings.

Grammar:  expr  := term (('+'|'-') term)*
          term  := unary (('*'|'/') unary)*
          unary := '-' unary | power
          power := atom (('^'|'**') INT)?
          atom  := INT | NAME | '(' expr ')'

Evaluation happens directly in the caller's ring: integers go through
``embed`` and names through ``env``, so the same parser serves rationals,
finite fields and rational-function fields.
"""

from __future__ import annotations

from .errors import InputError

_TOKEN_CHARS = set("+-*/^()")


def _tokenize(text: str) -> list[str]:
    tokens = []
    i, n = 0, len(text)
    while i < n:
        c = text[i]
        if c.isspace():
            i += 1
        elif c.isdigit():
            j = i
            while j < n and text[j].isdigit():
                j += 1
            tokens.append(text[i:j])
            i = j
        elif c.isalpha() or c == "_":
            j = i
            while j < n and (text[j].isalnum() or text[j] == "_"):
                j += 1
            tokens.append(text[i:j])
            i = j
        elif c == "*" and i + 1 < n and text[i + 1] == "*":
            tokens.append("^")
            i += 2
        elif c in _TOKEN_CHARS:
            tokens.append(c)
            i += 1
        else:
            raise InputError(f"unexpected character {c!r} in {text!r}")
    return tokens


class _Parser:
    def __init__(self, tokens, env, embed):
        self.tokens = tokens
        self.pos = 0
        self.env = env
        self.embed = embed

    def peek(self):
        return self.tokens[self.pos] if self.pos < len(self.tokens) else None

    def next(self):
        tok = self.peek()
        self.pos += 1
        return tok

    def expr(self):
        value = self.term()
        while self.peek() in ("+", "-"):
            op = self.next()
            rhs = self.term()
            value = value + rhs if op == "+" else value - rhs
        return value

    def term(self):
        value = self.unary()
        while self.peek() in ("*", "/"):
            op = self.next()
            rhs = self.unary()
            if op == "*":
                value = value * rhs
            else:
                try:
                    value = value / rhs
                except ZeroDivisionError:
                    raise InputError("division by zero in scalar expression") from None
        return value

    def unary(self):
        if self.peek() == "-":
            self.next()
            return -self.unary()
        return self.power()

    def power(self):
        base = self.atom()
        if self.peek() == "^":
            self.next()
            tok = self.next()
            if tok is None or not tok.isdigit():
                raise InputError("exponent must be a nonnegative integer")
            return base ** int(tok)
        return base

    def atom(self):
        tok = self.next()
        if tok is None:
            raise InputError("unexpected end of expression")
        if tok.isdigit():
            return self.embed(int(tok))
        if tok == "(":
            value = self.expr()
            if self.next() != ")":
                raise InputError("unbalanced parentheses")
            return value
        if tok in self.env:
            return self.env[tok]
        raise InputError(f"unknown symbol {tok!r}")


def evaluate(text: str, env: dict, embed):
    """Parse ``text`` and evaluate it with symbols from ``env``.

    ``embed`` maps Python ints into the target ring.
    """
    tokens = _tokenize(text)
    if not tokens:
        raise InputError("empty scalar expression")
    parser = _Parser(tokens, env, embed)
    value = parser.expr()
    if parser.peek() is not None:
        raise InputError(f"trailing tokens in {text!r}")
    return value
