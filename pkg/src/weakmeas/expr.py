"""Tiny arithmetic grammar for CLI parameters: numbers, pi, + - * /.

Accepts single values ("8pi/9", "-0.5", "2*pi/3"), comma lists, ellipsis
progressions ("0,pi/9,...,8pi/9" continues the step of the first pair),
and colon ranges ("0:6:0.05" = start:stop:step, stop inclusive up to
rounding).
"""

from __future__ import annotations

import math

from .exceptions import ConfigError

_RANGE_ROUND = 1e-9


class _Parser:
    def __init__(self, text: str):
        self.text = text.replace(" ", "")
        self.pos = 0

    def peek(self) -> str:
        return self.text[self.pos] if self.pos < len(self.text) else ""

    def parse(self) -> float:
        value = self.expr()
        if self.pos != len(self.text):
            raise ConfigError(f"trailing input in expression {self.text!r}")
        return value

    def expr(self) -> float:
        value = self.term()
        while self.peek() in ("+", "-"):
            op = self.text[self.pos]
            self.pos += 1
            rhs = self.term()
            value = value + rhs if op == "+" else value - rhs
        return value

    def term(self) -> float:
        value = self.factor()
        while self.peek() in ("*", "/"):
            op = self.text[self.pos]
            self.pos += 1
            rhs = self.factor()
            if op == "/":
                if rhs == 0:
                    raise ConfigError(f"division by zero in {self.text!r}")
                value /= rhs
            else:
                value *= rhs
        return value

    def factor(self) -> float:
        if self.peek() == "-":
            self.pos += 1
            return -self.factor()
        if self.peek() == "+":
            self.pos += 1
            return self.factor()
        if self.peek() == "(":
            self.pos += 1
            value = self.expr()
            if self.peek() != ")":
                raise ConfigError(f"unbalanced parentheses in {self.text!r}")
            self.pos += 1
            return value
        return self.atom()

    def atom(self) -> float:
        start = self.pos
        if self.text[self.pos:self.pos + 2] == "pi":
            self.pos += 2
            # allow "2pi" handled below; bare pi here
            return math.pi
        while self.pos < len(self.text) and (self.text[self.pos].isdigit()
                                             or self.text[self.pos] in ".eE"
                                             or (self.text[self.pos] in "+-"
                                                 and self.text[self.pos - 1] in "eE")):
            self.pos += 1
        if self.pos == start:
            raise ConfigError(f"expected a number at {self.text[start:]!r}")
        value = float(self.text[start:self.pos])
        if self.text[self.pos:self.pos + 2] == "pi":  # juxtaposition: 8pi == 8*pi
            self.pos += 2
            value *= math.pi
        return value


def parse_scalar(text: str) -> float:
    """Evaluate one pi-arithmetic expression."""
    if not text:
        raise ConfigError("empty expression")
    return _Parser(text).parse()


def parse_values(text: str) -> list[float]:
    """Parse a flag value into a list of floats.

    Forms: single expression; comma list; "a,b,...,c" arithmetic
    progression; "start:stop:step" range (endpoints inclusive).
    """
    text = text.strip()
    if ":" in text:
        parts = text.split(":")
        if len(parts) != 3:
            raise ConfigError(f"range must be start:stop:step, got {text!r}")
        start, stop, step = (parse_scalar(p) for p in parts)
        if step <= 0:
            raise ConfigError("range step must be positive")
        count = int(math.floor((stop - start) / step + _RANGE_ROUND)) + 1
        if count < 1:
            raise ConfigError(f"empty range {text!r}")
        return [start + i * step for i in range(count)]
    items = [p for p in text.split(",") if p != ""]
    if "..." in items:
        i = items.index("...")
        if i < 2 or i != len(items) - 2:
            raise ConfigError("ellipsis form is a,b,...,c")
        a, b = parse_scalar(items[i - 2]), parse_scalar(items[i - 1])
        c = parse_scalar(items[i + 1])
        step = b - a
        if step == 0:
            raise ConfigError("ellipsis progression has zero step")
        head = [parse_scalar(p) for p in items[:i - 2]]
        seq = [a, b]
        while (c - seq[-1]) / step > _RANGE_ROUND:
            seq.append(seq[-1] + step)
        if abs(seq[-1] - c) > 1e-6:
            raise ConfigError(f"ellipsis endpoint {c} not on the progression")
        seq[-1] = c
        return head + seq
    return [parse_scalar(p) for p in items]
