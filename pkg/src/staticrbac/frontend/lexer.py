"""Tokenizer for the supported Java subset."""

from __future__ import annotations

import re
from typing import NamedTuple

from staticrbac.errors import SourceParseError

KEYWORDS = frozenset("""
    abstract assert boolean break byte case catch char class const continue
    default do double else enum extends final finally float for goto if
    implements import instanceof int interface long native new package
    private protected public return short static strictfp super switch
    synchronized this throw throws transient try void volatile while
    true false null
""".split())

PRIMITIVES = frozenset(["boolean", "byte", "char", "short", "int", "long",
                        "float", "double", "void"])

_OPERATORS = sorted("""
    >>>= <<= >>= >>> ... -> :: ++ -- && || == != <= >= += -= *= /= %= &= |=
    ^= << >> ( ) { } [ ] ; , . @ = > < ! ~ ? : + - * / & | ^ %
""".split(), key=len, reverse=True)

_TOKEN_RE = re.compile(r"""
    (?P<skip>[ \t\f\r]+|//[^\n]*|/\*.*?\*/)
  | (?P<nl>\n)
  | (?P<id>[A-Za-z_$][A-Za-z0-9_$]*)
  | (?P<float>(?:\d[\d_]*\.[\d_]*|\.\d[\d_]*)(?:[eE][+-]?\d+)?[fFdD]?
              |\d[\d_]*(?:[eE][+-]?\d+[fFdD]?|[fFdD]))
  | (?P<int>0[xX][0-9a-fA-F_]+[lL]?|0[bB][01_]+[lL]?|\d[\d_]*[lL]?)
  | (?P<str>"(?:[^"\\\n]|\\.)*")
  | (?P<char>'(?:[^'\\\n]|\\.)+')
  | (?P<op>""" + "|".join(re.escape(op) for op in _OPERATORS) + r""")
""", re.VERBOSE | re.DOTALL)


class Token(NamedTuple):
    kind: str       # id kw int float str char op eof
    value: str
    line: int
    column: int


def tokenize(text: str, path: str = "<string>") -> list[Token]:
    tokens: list[Token] = []
    append = tokens.append
    match = _TOKEN_RE.match
    pos = 0
    line = 1
    line_start = 0
    n = len(text)
    while pos < n:
        m = match(text, pos)
        if m is None:
            if text.startswith("/*", pos):
                msg = "unterminated comment"
            elif text[pos] in "\"'":
                msg = "unterminated literal"
            else:
                msg = f"unexpected character {text[pos]!r}"
            raise SourceParseError(msg, path, line, pos - line_start + 1)
        kind = m.lastgroup
        end = m.end()
        if kind == "nl":
            line += 1
            line_start = end
        elif kind == "skip":
            if text[pos] == "/" and "\n" in m.group():
                chunk = m.group()
                line += chunk.count("\n")
                line_start = pos + chunk.rfind("\n") + 1
        else:
            value = m.group()
            if kind == "id" and value in KEYWORDS:
                kind = "kw"
            append(Token(kind, value, line, pos - line_start + 1))
        pos = end
    append(Token("eof", "", line, pos - line_start + 1))
    return tokens
