"""Parser for the textual map-spec language.

Grammar (whitespace is ignored everywhere)::

    spec   := 'rot:' NUM
            | 'mobius:kappa=' NUM ',sigma=' NUM ('+'|'-') NUM 'i'
            | 'arnold:a=' NUM ',b=' NUM
            | 'comp(' spec ',' spec ')'
            | 'inv(' spec ')'
            | 'pow(' spec ',' INT ')'
            | 'conj(' spec ',' spec ')'

``str(expr)`` prints a spec that parses back to an equal tree.
"""

from __future__ import annotations

import re

from projcocycle.geometry import MobiusMap
from projcocycle.maps import Arnold, CircleMap, Compose, Conjugate, Inverse, Mobius, Power, Rotation

_NUM = re.compile(r"[+-]?(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?")
_UNSIGNED = re.compile(r"(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?")
_INT = re.compile(r"[+-]?\d+")
_WORD = re.compile(r"[a-z]+")


class MapSpecError(ValueError):
    """Syntax or semantic error in a map spec.

    ``position`` is the byte offset into the original text; ``path`` names the
    offending node for semantic errors (e.g. ``comp[1].arnold``).
    """

    def __init__(self, message: str, position: int, path: str | None = None):
        self.message = message
        self.position = position
        self.path = path
        where = f"at node `{path}` " if path else ""
        super().__init__(f"{message} ({where}at offset {position})")


class _Parser:
    def __init__(self, text: str):
        self.text = text
        # byte offsets of each kept (non-whitespace) character
        self.chars = []
        self.offsets = []
        for i, ch in enumerate(text):
            if not ch.isspace():
                self.chars.append(ch)
                self.offsets.append(len(text[:i].encode()))
        self.s = "".join(self.chars)
        self.i = 0

    def offset(self, i: int | None = None) -> int:
        i = self.i if i is None else i
        if i < len(self.offsets):
            return self.offsets[i]
        return len(self.text.encode())

    def fail(self, expected: str):
        found = repr(self.s[self.i]) if self.i < len(self.s) else "end of input"
        raise MapSpecError(f"expected {expected}, found {found}", self.offset())

    def expect(self, literal: str):
        if not self.s.startswith(literal, self.i):
            self.fail(repr(literal))
        self.i += len(literal)

    def match(self, pattern: re.Pattern, what: str) -> str:
        m = pattern.match(self.s, self.i)
        if m is None:
            self.fail(what)
        self.i = m.end()
        return m.group()

    def number(self) -> float:
        return float(self.match(_NUM, "a decimal number"))

    def spec(self, path: str) -> CircleMap:
        start = self.i
        word = self.match(_WORD, "a map kind (rot, mobius, arnold, comp, inv, pow, conj)")
        here = f"{path}.{word}" if path else word

        def semantic(err: ValueError):
            raise MapSpecError(str(err), self.offset(start), here) from None

        if word == "rot":
            self.expect(":")
            return Rotation(self.number())
        if word == "mobius":
            self.expect(":kappa=")
            kappa = self.number()
            self.expect(",sigma=")
            re_ = self.number()
            sign = self.match(re.compile(r"[+-]"), "'+' or '-'")
            im = float(self.match(_UNSIGNED, "an unsigned decimal number"))
            self.expect("i")
            try:
                return Mobius(MobiusMap(kappa, complex(re_, -im if sign == "-" else im)))
            except ValueError as err:
                semantic(err)
        if word == "arnold":
            self.expect(":a=")
            a = self.number()
            self.expect(",b=")
            b = self.number()
            try:
                return Arnold(a, b)
            except ValueError as err:
                semantic(err)
        if word in ("comp", "conj"):
            self.expect("(")
            first = self.spec(f"{here}[0]")
            self.expect(",")
            second = self.spec(f"{here}[1]")
            self.expect(")")
            return Compose(first, second) if word == "comp" else Conjugate(first, second)
        if word == "inv":
            self.expect("(")
            inner = self.spec(f"{here}[0]")
            self.expect(")")
            return Inverse(inner)
        if word == "pow":
            self.expect("(")
            inner = self.spec(f"{here}[0]")
            self.expect(",")
            n = int(self.match(_INT, "an integer exponent"))
            self.expect(")")
            return Power(inner, n)
        self.i = start
        self.fail("a map kind (rot, mobius, arnold, comp, inv, pow, conj)")


def parse_map_spec(text: str) -> CircleMap:
    p = _Parser(text)
    tree = p.spec("")
    if p.i != len(p.s):
        p.fail("end of input")
    return tree


def format_map_spec(f: CircleMap) -> str:
    return f.to_spec()
