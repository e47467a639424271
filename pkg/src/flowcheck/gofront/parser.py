"""Recursive-descent parser for the supported Go subset.

Anything outside the subset raises Unsupported naming the construct and the
line, so the analyzer can refuse the file instead of guessing: buffered or
directional channels, select, close, for loops, switch, pointers, maps,
sync primitives, and if-statements with init clauses.
"""

from __future__ import annotations

from .goast import (
    Assign,
    Binary,
    BoolLit,
    Call,
    ChanType,
    DeferStmt,
    ExprStmt,
    Func,
    FuncLit,
    FuncType,
    GoStmt,
    Ident,
    If,
    IntLit,
    MakeExpr,
    NamedType,
    NilLit,
    Program,
    Recv,
    Return,
    Selector,
    Send,
    ShortVarDecl,
    SliceType,
    StringLit,
    TypeDecl,
    Unary,
    VarDecl,
)
from .lexer import GoSyntaxError, Token, tokenize


class Unsupported(Exception):
    def __init__(self, feature, line):
        super().__init__("%s (line %d)" % (feature, line))
        self.feature = feature
        self.line = line


_UNSUPPORTED_STMTS = {
    "for": "for loop",
    "select": "select statement",
    "switch": "switch statement",
    "range": "range clause",
    "const": "const declaration",
    "goto": "goto statement",
    "break": "break statement",
    "continue": "continue statement",
}

_UNSUPPORTED_TYPES = {
    "map": "map type",
    "interface": "interface type",
    "struct": "inline struct type",
}


class Parser:
    def __init__(self, source: str):
        self.tokens = tokenize(source)
        self.pos = 0
        self.anon_funcs: list[Func] = []

    # -- token plumbing ----------------------------------------------------

    def peek(self, ahead=0) -> Token:
        k = min(self.pos + ahead, len(self.tokens) - 1)
        return self.tokens[k]

    def next(self) -> Token:
        tok = self.tokens[self.pos]
        if tok.kind != "eof":
            self.pos += 1
        return tok

    def accept(self, kind) -> bool:
        if self.peek().kind == kind:
            self.next()
            return True
        return False

    def expect(self, kind) -> Token:
        tok = self.next()
        if tok.kind != kind:
            raise GoSyntaxError(tok.line, "expected %r, found %r" % (kind, tok.value))
        return tok

    def skip_semis(self):
        while self.accept(";"):
            pass

    # -- declarations --------------------------------------------------------

    def parse_program(self) -> Program:
        self.skip_semis()
        self.expect("package")
        package = self.expect("ident").value
        self.skip_semis()
        imports = []
        while self.peek().kind == "import":
            self.next()
            if self.accept("("):
                self.skip_semis()
                while not self.accept(")"):
                    imports.append(self.expect("string").value.strip('"'))
                    self.skip_semis()
            else:
                imports.append(self.expect("string").value.strip('"'))
            self.skip_semis()
        globals_, functions, types = [], {}, []
        while self.peek().kind != "eof":
            tok = self.peek()
            if tok.kind == "func":
                f = self.parse_func_decl()
                if f.name in functions:
                    raise GoSyntaxError(f.line, "duplicate function %s" % f.name)
                functions[f.name] = f
            elif tok.kind == "var":
                globals_.append(self.parse_var_decl())
            elif tok.kind == "type":
                types.append(self.parse_type_decl())
            else:
                raise GoSyntaxError(tok.line, "unexpected %r at top level" % tok.value)
            self.skip_semis()
        for f in self.anon_funcs:
            functions[f.name] = f
        return Program(package, tuple(imports), tuple(globals_), functions, tuple(types))

    def parse_func_decl(self) -> Func:
        line = self.expect("func").line
        name = self.expect("ident").value
        params = self.parse_params()
        result = None
        if self.peek().kind not in ("{", ";"):
            result = self.parse_type()
        body = self.parse_block()
        return Func(name, params, result, body, line)

    def parse_params(self) -> tuple:
        self.expect("(")
        groups: list[list] = []  # [names, type|None]
        while not self.accept(")"):
            name = self.expect("ident").value
            if self.peek().kind in (",", ")"):
                groups.append([[name], None])
            else:
                groups.append([[name], self.parse_type()])
            if not self.accept(","):
                self.expect(")")
                break
        # back-fill grouped parameters: `a, b int` gives both the int type
        params = []
        pending: list[str] = []
        for names, gotype in groups:
            if gotype is None:
                pending.extend(names)
            else:
                for n in pending + names:
                    params.append((n, gotype))
                pending = []
        if pending:
            raise GoSyntaxError(self.peek().line, "parameters missing a type")
        return tuple(params)

    def parse_var_decl(self) -> VarDecl:
        line = self.expect("var").line
        name = self.expect("ident").value
        gotype = None
        expr = None
        if self.peek().kind not in ("=", ";"):
            gotype = self.parse_type()
        if self.accept("="):
            expr = self.parse_expr()
        return VarDecl(name, gotype, expr, line)

    def parse_type_decl(self) -> TypeDecl:
        line = self.expect("type").line
        name = self.expect("ident").value
        if self.peek().kind != "struct":
            raise Unsupported(
                _UNSUPPORTED_TYPES.get(self.peek().kind, "non-struct type declaration"),
                self.peek().line,
            )
        self.next()
        self.expect("{")
        self.skip_semis()
        embedded, named = [], []
        while not self.accept("}"):
            field = self.expect("ident").value
            if self.peek().kind in (";", "}"):
                embedded.append(field)
            else:
                named.append((field, self.parse_type()))
            self.skip_semis()
        return TypeDecl(name, tuple(embedded), tuple(named), line)

    # -- types ----------------------------------------------------------------

    def parse_type(self):
        tok = self.peek()
        if tok.kind == "chan":
            self.next()
            if self.peek().kind == "<-":
                raise Unsupported("directional channel type", tok.line)
            return ChanType(self.parse_type())
        if tok.kind == "<-":
            raise Unsupported("directional channel type", tok.line)
        if tok.kind == "[":
            self.next()
            self.expect("]")
            return SliceType(self.parse_type())
        if tok.kind == "func":
            self.next()
            self.expect("(")
            params = []
            while not self.accept(")"):
                params.append(self.parse_type())
                if not self.accept(","):
                    self.expect(")")
                    break
            result = None
            if self.peek().kind not in ("{", ")", ",", ";", "eof"):
                result = self.parse_type()
            return FuncType(tuple(params), result)
        if tok.kind == "*":
            raise Unsupported("pointer type", tok.line)
        if tok.kind in _UNSUPPORTED_TYPES:
            raise Unsupported(_UNSUPPORTED_TYPES[tok.kind], tok.line)
        name = self.expect("ident").value
        if self.accept("."):
            qualified = "%s.%s" % (name, self.expect("ident").value)
            if name == "sync":
                raise Unsupported("sync primitives", tok.line)
            return NamedType(qualified)
        return NamedType(name)

    # -- statements -------------------------------------------------------------

    def parse_block(self) -> tuple:
        self.expect("{")
        self.skip_semis()
        stmts = []
        while not self.accept("}"):
            stmts.append(self.parse_stmt())
            self.skip_semis()
        return tuple(stmts)

    def parse_stmt(self):
        tok = self.peek()
        if tok.kind in _UNSUPPORTED_STMTS:
            raise Unsupported(_UNSUPPORTED_STMTS[tok.kind], tok.line)
        if tok.kind == "go":
            self.next()
            call = self.parse_expr()
            if not isinstance(call, Call):
                raise GoSyntaxError(tok.line, "go requires a function call")
            return GoStmt(call, tok.line)
        if tok.kind == "defer":
            self.next()
            call = self.parse_expr()
            if not isinstance(call, Call):
                raise GoSyntaxError(tok.line, "defer requires a function call")
            return DeferStmt(call, tok.line)
        if tok.kind == "if":
            return self.parse_if()
        if tok.kind == "return":
            self.next()
            if self.peek().kind in (";", "}"):
                return Return(None, tok.line)
            return Return(self.parse_expr(), tok.line)
        if tok.kind == "var":
            return self.parse_var_decl()
        if tok.kind == "ident" and self.peek(1).kind == ":=":
            self.next()
            self.next()
            return ShortVarDecl(tok.value, self.parse_expr(), tok.line)
        if tok.kind == "ident" and self.peek(1).kind == "=":
            self.next()
            self.next()
            return Assign(tok.value, self.parse_expr(), tok.line)
        expr = self.parse_expr()
        if self.peek().kind == "<-":
            self.next()
            return Send(expr, self.parse_expr(), tok.line)
        return ExprStmt(expr, tok.line)

    def parse_if(self) -> If:
        line = self.expect("if").line
        cond = self.parse_expr()
        if self.peek().kind == ";":
            raise Unsupported("if with init statement", line)
        then = self.parse_block()
        els = None
        if self.accept("else"):
            if self.peek().kind == "if":
                els = self.parse_if()
            else:
                els = self.parse_block()
        return If(cond, then, els, line)

    # -- expressions ---------------------------------------------------------------

    def parse_expr(self):
        return self.parse_or()

    def parse_or(self):
        left = self.parse_and()
        while self.peek().kind == "||":
            self.next()
            left = Binary("||", left, self.parse_and())
        return left

    def parse_and(self):
        left = self.parse_cmp()
        while self.peek().kind == "&&":
            self.next()
            left = Binary("&&", left, self.parse_cmp())
        return left

    def parse_cmp(self):
        left = self.parse_add()
        if self.peek().kind in ("==", "!=", "<", "<=", ">", ">="):
            op = self.next().kind
            return Binary(op, left, self.parse_add())
        return left

    def parse_add(self):
        left = self.parse_unary()
        while self.peek().kind in ("+", "-", "*", "/", "%"):
            op = self.next().kind
            left = Binary(op, left, self.parse_unary())
        return left

    def parse_unary(self):
        tok = self.peek()
        if tok.kind == "!":
            self.next()
            return Unary("!", self.parse_unary())
        if tok.kind == "-":
            self.next()
            operand = self.parse_unary()
            if isinstance(operand, IntLit):
                return IntLit(-operand.value)
            return Unary("-", operand)
        if tok.kind == "<-":
            self.next()
            return Recv(self.parse_unary())
        return self.parse_postfix()

    def parse_postfix(self):
        expr = self.parse_primary()
        while True:
            if self.peek().kind == "(":
                args = self.parse_args()
                expr = self.make_call(expr, args)
            elif self.peek().kind == "." and isinstance(expr, Ident):
                self.next()
                expr = Selector(expr.name, self.expect("ident").value)
            else:
                return expr

    def parse_args(self) -> tuple:
        self.expect("(")
        args = []
        while not self.accept(")"):
            args.append(self.parse_expr())
            if not self.accept(","):
                self.expect(")")
                break
        return tuple(args)

    def make_call(self, fn, args) -> Call:
        line = self.peek().line
        if isinstance(fn, Ident) and fn.name == "close":
            raise Unsupported("close", line)
        if isinstance(fn, Selector) and fn.pkg == "sync":
            raise Unsupported("sync primitives", line)
        return Call(fn, args)

    def parse_primary(self):
        tok = self.peek()
        if tok.kind == "int":
            self.next()
            return IntLit(int(tok.value))
        if tok.kind == "float":
            raise Unsupported("floating point literal", tok.line)
        if tok.kind == "string":
            self.next()
            return StringLit(tok.value)
        if tok.kind == "func":
            return self.parse_func_lit()
        if tok.kind == "(":
            self.next()
            inner = self.parse_expr()
            self.expect(")")
            return inner
        if tok.kind in _UNSUPPORTED_STMTS:
            raise Unsupported(_UNSUPPORTED_STMTS[tok.kind], tok.line)
        if tok.kind == "chan":
            raise Unsupported("channel type in expression", tok.line)
        if tok.kind == "ident":
            self.next()
            if tok.value == "true":
                return BoolLit(True)
            if tok.value == "false":
                return BoolLit(False)
            if tok.value == "nil":
                return NilLit()
            if tok.value == "make" and self.peek().kind == "(":
                return self.parse_make(tok.line)
            return Ident(tok.value)
        raise GoSyntaxError(tok.line, "unexpected %r in expression" % tok.value)

    def parse_make(self, line) -> MakeExpr:
        self.expect("(")
        gotype = self.parse_type()
        size = None
        if self.accept(","):
            size = self.parse_expr()
        self.expect(")")
        if isinstance(gotype, ChanType):
            if size is not None and not (isinstance(size, IntLit) and size.value == 0):
                raise Unsupported("buffered channel", line)
        return MakeExpr(gotype, size)

    def parse_func_lit(self) -> FuncLit:
        line = self.expect("func").line
        params = self.parse_params()
        result = None
        if self.peek().kind != "{":
            result = self.parse_type()
        body = self.parse_block()
        name = "anon@%d" % line
        taken = {f.name for f in self.anon_funcs}
        k = 2
        while name in taken:
            name = "anon@%d.%d" % (line, k)
            k += 1
        func = Func(name, params, result, body, line, anonymous=True)
        self.anon_funcs.append(func)
        return FuncLit(func)


def parse(source: str) -> Program:
    return Parser(source).parse_program()
