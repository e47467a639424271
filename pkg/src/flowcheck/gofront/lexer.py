"""Tokenizer for the supported Go subset, with automatic semicolon insertion."""

from __future__ import annotations

from dataclasses import dataclass


class GoSyntaxError(Exception):
    def __init__(self, line, message):
        super().__init__("line %d: %s" % (line, message))
        self.line = line
        self.message = message


KEYWORDS = {
    "package", "import", "func", "go", "defer", "if", "else", "return",
    "var", "type", "struct", "chan", "for", "select", "switch", "case",
    "map", "interface", "range", "const", "break", "continue", "goto",
    "fallthrough", "default",
}

# tokens that allow a statement to end before a newline
_SEMI_AFTER = {"ident", "int", "string", ")", "}", "]", "return", "break",
               "continue", "fallthrough"}

_TWO_CHAR = ("<-", ":=", "==", "!=", "<=", ">=", "&&", "||", "//", "/*")
_ONE_CHAR = "(){}[],;.:<>=!+-*/%&|"


@dataclass(frozen=True)
class Token:
    kind: str  # "ident" | "int" | "string" | keyword or punctuation literal
    value: str
    line: int


def tokenize(source: str) -> list[Token]:
    tokens: list[Token] = []
    line = 1
    k = 0
    n = len(source)

    def emit(kind, value):
        tokens.append(Token(kind, value, line))

    def maybe_semicolon():
        if tokens and tokens[-1].kind in _SEMI_AFTER and tokens[-1].value != ";":
            emit(";", ";")

    while k < n:
        ch = source[k]
        if ch == "\n":
            maybe_semicolon()
            line += 1
            k += 1
            continue
        if ch in " \t\r":
            k += 1
            continue
        two = source[k : k + 2]
        if two == "//":
            while k < n and source[k] != "\n":
                k += 1
            continue
        if two == "/*":
            end = source.find("*/", k + 2)
            if end < 0:
                raise GoSyntaxError(line, "unterminated comment")
            body = source[k : end + 2]
            if "\n" in body:
                maybe_semicolon()
                line += body.count("\n")
            k = end + 2
            continue
        if ch.isalpha() or ch == "_":
            j = k
            while j < n and (source[j].isalnum() or source[j] == "_"):
                j += 1
            word = source[k:j]
            emit(word if word in KEYWORDS else "ident", word)
            k = j
            continue
        if ch.isdigit():
            j = k
            while j < n and source[j].isdigit():
                j += 1
            if j < n and source[j] == ".":  # float literals are out of scope
                j += 1
                while j < n and source[j].isdigit():
                    j += 1
                emit("float", source[k:j])
            else:
                emit("int", source[k:j])
            k = j
            continue
        if ch in "\"'`":
            quote = ch
            j = k + 1
            while j < n and source[j] != quote:
                if source[j] == "\\" and quote == '"':
                    j += 1
                if source[j] == "\n":
                    raise GoSyntaxError(line, "unterminated string literal")
                j += 1
            if j >= n:
                raise GoSyntaxError(line, "unterminated string literal")
            emit("string", source[k : j + 1])
            k = j + 1
            continue
        if two in _TWO_CHAR:
            emit(two, two)
            k += 2
            continue
        if ch in _ONE_CHAR:
            emit(ch, ch)
            k += 1
            continue
        raise GoSyntaxError(line, "stray character %r" % ch)
    maybe_semicolon()
    tokens.append(Token("eof", "", line))
    return tokens
