"""Recursive-descent ECMAScript parser.

Produces ESTree-shaped nodes as plain dicts: ``{"type", "start", "end",
<child fields in source order>, <scalar fields>}``. Offsets are character
offsets into the source string. The grammar is deliberately lenient (one
universal mode accepting both script and module constructs) because the
consumer only needs a deterministic, structure-faithful tree; it is not an
engine front end.
"""

from __future__ import annotations

import sys

from .lexer import KEYWORDS, Lexer, ParseError, Token

ASSIGN_OPS = frozenset(
    "= += -= *= /= %= **= <<= >>= >>>= |= ^= &= &&= ||= ??=".split()
)

BIN_PREC = {
    "??": 4, "||": 4, "&&": 5,
    "|": 6, "^": 7, "&": 8,
    "==": 9, "!=": 9, "===": 9, "!==": 9,
    "<": 10, ">": 10, "<=": 10, ">=": 10, "in": 10, "instanceof": 10,
    "<<": 11, ">>": 11, ">>>": 11,
    "+": 12, "-": 12,
    "*": 13, "/": 13, "%": 13,
    "**": 14,
}

UNARY_PUNCT = frozenset("+ - ! ~".split())
UNARY_KW = frozenset("typeof void delete".split())

_EXPR_STOP_PUNCT = frozenset(") ] } , ; : =>".split())


class Parser:
    def __init__(self, source: str):
        self.src = source
        self.lx = Lexer(source)
        self.tok = self.lx.next_token()
        self.prev_end = 0
        self.in_async = True  # top-level await tolerated
        self.in_generator = False

    # -- token plumbing ----------------------------------------------------

    def advance(self) -> Token:
        t = self.tok
        self.prev_end = t.end
        self.tok = self.lx.next_token()
        return t

    def peek(self) -> Token:
        save = self.lx.pos
        t = self.lx.next_token()
        self.lx.pos = save
        return t

    def snapshot(self):
        return (self.lx.pos, self.tok, self.prev_end)

    def restore(self, state) -> None:
        self.lx.pos, self.tok, self.prev_end = state

    def error(self, message: str, position: int | None = None) -> ParseError:
        pos = self.tok.start if position is None else position
        return ParseError(message, self.src, pos)

    def at_punct(self, value: str) -> bool:
        return self.tok.kind == "punct" and self.tok.value == value

    def at_word(self, value: str) -> bool:
        t = self.tok
        return t.kind == "ident" and not t.escaped and t.value == value

    def eat_punct(self, value: str) -> bool:
        if self.at_punct(value):
            self.advance()
            return True
        return False

    def expect_punct(self, value: str) -> None:
        if not self.eat_punct(value):
            raise self.error(f"Expected {value!r}")

    def expect_word(self, value: str) -> None:
        if not self.at_word(value):
            raise self.error(f"Expected {value!r}")
        self.advance()

    def semicolon(self) -> None:
        if self.eat_punct(";"):
            return
        if self.at_punct("}") or self.tok.kind == "eof" or self.tok.nl:
            return
        raise self.error("Expected semicolon")

    # -- entry ---------------------------------------------------------------

    def parse_program(self, source_type: str) -> dict:
        body = []
        while self.tok.kind != "eof":
            body.append(self.parse_statement())
        return {
            "type": "Program", "start": 0, "end": len(self.src),
            "body": body, "sourceType": source_type,
        }

    # -- statements ----------------------------------------------------------

    def parse_statement(self) -> dict:
        tok = self.tok
        if tok.kind == "punct":
            if tok.value == "{":
                return self.parse_block()
            if tok.value == ";":
                self.advance()
                return {"type": "EmptyStatement", "start": tok.start, "end": tok.end}
        if tok.kind == "ident" and not tok.escaped:
            v = tok.value
            if v in ("var", "const"):
                return self.parse_var_statement(v)
            if v == "let" and self._let_is_declaration():
                return self.parse_var_statement("let")
            if v == "function":
                return self.parse_function(declaration=True)
            if v == "async":
                nxt = self.peek()
                if nxt.kind == "ident" and nxt.value == "function" and not nxt.nl:
                    start = tok.start
                    self.advance()
                    return self.parse_function(declaration=True, is_async=True, start=start)
            if v == "class":
                return self.parse_class(declaration=True)
            if v == "if":
                return self.parse_if()
            if v == "for":
                return self.parse_for()
            if v == "while":
                return self.parse_while()
            if v == "do":
                return self.parse_do_while()
            if v == "switch":
                return self.parse_switch()
            if v == "try":
                return self.parse_try()
            if v == "throw":
                return self.parse_throw()
            if v == "return":
                return self.parse_return()
            if v in ("break", "continue"):
                return self.parse_break_continue(v)
            if v == "debugger":
                self.advance()
                self.semicolon()
                return {"type": "DebuggerStatement", "start": tok.start, "end": self.prev_end}
            if v == "with":
                return self.parse_with()
            if v == "import":
                nxt = self.peek()
                if not (nxt.kind == "punct" and nxt.value in ("(", ".")):
                    return self.parse_import()
            if v == "export":
                return self.parse_export()
            if v not in KEYWORDS:
                nxt = self.peek()
                if nxt.kind == "punct" and nxt.value == ":":
                    return self.parse_labeled()
        expr = self.parse_expression()
        self.semicolon()
        return {
            "type": "ExpressionStatement", "start": expr["start"], "end": self.prev_end,
            "expression": expr,
        }

    def _let_is_declaration(self) -> bool:
        nxt = self.peek()
        if nxt.kind == "ident" and nxt.value not in KEYWORDS:
            return True
        return nxt.kind == "punct" and nxt.value in ("[", "{")

    def parse_block(self) -> dict:
        start = self.tok.start
        self.expect_punct("{")
        body = []
        while not self.at_punct("}"):
            if self.tok.kind == "eof":
                raise self.error("Unterminated block")
            body.append(self.parse_statement())
        self.advance()
        return {"type": "BlockStatement", "start": start, "end": self.prev_end, "body": body}

    def parse_var_statement(self, kind: str) -> dict:
        node = self.parse_var_declaration(kind)
        self.semicolon()
        node["end"] = self.prev_end
        return node

    def parse_var_declaration(self, kind: str, no_in: bool = False) -> dict:
        start = self.tok.start
        self.advance()
        declarations = [self.parse_declarator(no_in)]
        while self.eat_punct(","):
            declarations.append(self.parse_declarator(no_in))
        return {
            "type": "VariableDeclaration", "start": start, "end": self.prev_end,
            "declarations": declarations, "kind": kind,
        }

    def parse_declarator(self, no_in: bool) -> dict:
        target = self.parse_binding_target()
        init = None
        if self.eat_punct("="):
            init = self.parse_assignment(no_in)
        return {
            "type": "VariableDeclarator", "start": target["start"], "end": self.prev_end,
            "id": target, "init": init,
        }

    def parse_if(self) -> dict:
        start = self.tok.start
        self.advance()
        self.expect_punct("(")
        test = self.parse_expression()
        self.expect_punct(")")
        consequent = self.parse_statement()
        alternate = None
        if self.at_word("else"):
            self.advance()
            alternate = self.parse_statement()
        return {
            "type": "IfStatement", "start": start, "end": self.prev_end,
            "test": test, "consequent": consequent, "alternate": alternate,
        }

    def parse_for(self) -> dict:
        start = self.tok.start
        self.advance()
        is_await = False
        if self.at_word("await"):
            is_await = True
            self.advance()
        self.expect_punct("(")
        init = None
        if self.at_punct(";"):
            self.advance()
        elif self.tok.kind == "ident" and not self.tok.escaped and (
            self.tok.value in ("var", "const")
            or (self.tok.value == "let" and self._let_is_declaration())
        ):
            kind = self.tok.value
            kw_start = self.tok.start
            self.advance()
            target = self.parse_binding_target()
            if self.at_word("of") or self.at_word("in"):
                decl = {
                    "type": "VariableDeclaration", "start": kw_start, "end": self.prev_end,
                    "declarations": [{
                        "type": "VariableDeclarator", "start": target["start"],
                        "end": target["end"], "id": target, "init": None,
                    }],
                    "kind": kind,
                }
                return self._finish_for_in_of(start, decl, is_await)
            declarations = [self._finish_declarator(target, no_in=True)]
            while self.eat_punct(","):
                declarations.append(self.parse_declarator(no_in=True))
            init = {
                "type": "VariableDeclaration", "start": kw_start, "end": self.prev_end,
                "declarations": declarations, "kind": kind,
            }
            self.expect_punct(";")
        else:
            expr = self.parse_expression(no_in=True)
            if self.at_word("of") or self.at_word("in"):
                return self._finish_for_in_of(start, self.to_pattern(expr), is_await)
            init = expr
            self.expect_punct(";")
        test = None if self.at_punct(";") else self.parse_expression()
        self.expect_punct(";")
        update = None if self.at_punct(")") else self.parse_expression()
        self.expect_punct(")")
        body = self.parse_statement()
        return {
            "type": "ForStatement", "start": start, "end": self.prev_end,
            "init": init, "test": test, "update": update, "body": body,
        }

    def _finish_declarator(self, target: dict, no_in: bool) -> dict:
        init = None
        if self.eat_punct("="):
            init = self.parse_assignment(no_in)
        return {
            "type": "VariableDeclarator", "start": target["start"], "end": self.prev_end,
            "id": target, "init": init,
        }

    def _finish_for_in_of(self, start: int, left: dict, is_await: bool) -> dict:
        is_of = self.at_word("of")
        self.advance()
        if is_of:
            right = self.parse_assignment()
        else:
            right = self.parse_expression()
        self.expect_punct(")")
        body = self.parse_statement()
        node = {
            "type": "ForOfStatement" if is_of else "ForInStatement",
            "start": start, "end": self.prev_end,
            "left": left, "right": right, "body": body,
        }
        if is_of:
            node["await"] = is_await
        return node

    def parse_while(self) -> dict:
        start = self.tok.start
        self.advance()
        self.expect_punct("(")
        test = self.parse_expression()
        self.expect_punct(")")
        body = self.parse_statement()
        return {
            "type": "WhileStatement", "start": start, "end": self.prev_end,
            "test": test, "body": body,
        }

    def parse_do_while(self) -> dict:
        start = self.tok.start
        self.advance()
        body = self.parse_statement()
        self.expect_word("while")
        self.expect_punct("(")
        test = self.parse_expression()
        self.expect_punct(")")
        self.eat_punct(";")
        return {
            "type": "DoWhileStatement", "start": start, "end": self.prev_end,
            "body": body, "test": test,
        }

    def parse_switch(self) -> dict:
        start = self.tok.start
        self.advance()
        self.expect_punct("(")
        discriminant = self.parse_expression()
        self.expect_punct(")")
        self.expect_punct("{")
        cases = []
        while not self.at_punct("}"):
            case_start = self.tok.start
            if self.at_word("case"):
                self.advance()
                test = self.parse_expression()
            elif self.at_word("default"):
                self.advance()
                test = None
            else:
                raise self.error("Expected case or default")
            self.expect_punct(":")
            consequent = []
            while not (self.at_punct("}") or self.at_word("case") or self.at_word("default")):
                if self.tok.kind == "eof":
                    raise self.error("Unterminated switch")
                consequent.append(self.parse_statement())
            cases.append({
                "type": "SwitchCase", "start": case_start, "end": self.prev_end,
                "test": test, "consequent": consequent,
            })
        self.advance()
        return {
            "type": "SwitchStatement", "start": start, "end": self.prev_end,
            "discriminant": discriminant, "cases": cases,
        }

    def parse_try(self) -> dict:
        start = self.tok.start
        self.advance()
        block = self.parse_block()
        handler = None
        finalizer = None
        if self.at_word("catch"):
            h_start = self.tok.start
            self.advance()
            param = None
            if self.eat_punct("("):
                param = self.parse_binding_target()
                self.expect_punct(")")
            body = self.parse_block()
            handler = {
                "type": "CatchClause", "start": h_start, "end": self.prev_end,
                "param": param, "body": body,
            }
        if self.at_word("finally"):
            self.advance()
            finalizer = self.parse_block()
        if handler is None and finalizer is None:
            raise self.error("Missing catch or finally after try")
        return {
            "type": "TryStatement", "start": start, "end": self.prev_end,
            "block": block, "handler": handler, "finalizer": finalizer,
        }

    def parse_throw(self) -> dict:
        start = self.tok.start
        self.advance()
        if self.tok.nl:
            raise self.error("Illegal newline after throw")
        argument = self.parse_expression()
        self.semicolon()
        return {
            "type": "ThrowStatement", "start": start, "end": self.prev_end,
            "argument": argument,
        }

    def parse_return(self) -> dict:
        start = self.tok.start
        self.advance()
        argument = None
        if not (self.at_punct(";") or self.at_punct("}") or self.tok.kind == "eof" or self.tok.nl):
            argument = self.parse_expression()
        self.semicolon()
        return {
            "type": "ReturnStatement", "start": start, "end": self.prev_end,
            "argument": argument,
        }

    def parse_break_continue(self, word: str) -> dict:
        start = self.tok.start
        self.advance()
        label = None
        if self.tok.kind == "ident" and not self.tok.nl and self.tok.value not in KEYWORDS:
            label = self.parse_identifier()
        self.semicolon()
        return {
            "type": "BreakStatement" if word == "break" else "ContinueStatement",
            "start": start, "end": self.prev_end, "label": label,
        }

    def parse_with(self) -> dict:
        start = self.tok.start
        self.advance()
        self.expect_punct("(")
        obj = self.parse_expression()
        self.expect_punct(")")
        body = self.parse_statement()
        return {
            "type": "WithStatement", "start": start, "end": self.prev_end,
            "object": obj, "body": body,
        }

    def parse_labeled(self) -> dict:
        label = self.parse_identifier()
        self.expect_punct(":")
        body = self.parse_statement()
        return {
            "type": "LabeledStatement", "start": label["start"], "end": self.prev_end,
            "label": label, "body": body,
        }

    # -- modules ---------------------------------------------------------------

    def parse_import(self) -> dict:
        start = self.tok.start
        self.advance()
        specifiers = []
        if self.tok.kind == "str":
            source = self.parse_literal()
            self.semicolon()
            return {
                "type": "ImportDeclaration", "start": start, "end": self.prev_end,
                "specifiers": specifiers, "source": source,
            }
        if self.tok.kind == "ident" and self.tok.value not in KEYWORDS:
            local = self.parse_identifier()
            specifiers.append({
                "type": "ImportDefaultSpecifier", "start": local["start"],
                "end": local["end"], "local": local,
            })
            if not self.at_word("from"):
                self.expect_punct(",")
        if self.at_punct("*"):
            s = self.tok.start
            self.advance()
            self.expect_word("as")
            local = self.parse_identifier()
            specifiers.append({
                "type": "ImportNamespaceSpecifier", "start": s, "end": self.prev_end,
                "local": local,
            })
        elif self.at_punct("{"):
            self.advance()
            while not self.at_punct("}"):
                imported = self.parse_module_export_name()
                local = imported
                if self.at_word("as"):
                    self.advance()
                    local = self.parse_identifier()
                specifiers.append({
                    "type": "ImportSpecifier", "start": imported["start"],
                    "end": self.prev_end, "imported": imported, "local": local,
                })
                if not self.at_punct("}"):
                    self.expect_punct(",")
            self.advance()
        self.expect_word("from")
        if self.tok.kind != "str":
            raise self.error("Expected module source string")
        source = self.parse_literal()
        self.semicolon()
        return {
            "type": "ImportDeclaration", "start": start, "end": self.prev_end,
            "specifiers": specifiers, "source": source,
        }

    def parse_module_export_name(self) -> dict:
        if self.tok.kind == "str":
            return self.parse_literal()
        return self.parse_ident_name()

    def parse_export(self) -> dict:
        start = self.tok.start
        self.advance()
        if self.at_punct("*"):
            self.advance()
            exported = None
            if self.at_word("as"):
                self.advance()
                exported = self.parse_module_export_name()
            self.expect_word("from")
            source = self.parse_literal()
            self.semicolon()
            return {
                "type": "ExportAllDeclaration", "start": start, "end": self.prev_end,
                "exported": exported, "source": source,
            }
        if self.at_word("default"):
            self.advance()
            if self.at_word("function"):
                declaration = self.parse_function(declaration=True, allow_anonymous=True)
            elif self.at_word("async") and self.peek().value == "function":
                d_start = self.tok.start
                self.advance()
                declaration = self.parse_function(
                    declaration=True, is_async=True, start=d_start, allow_anonymous=True)
            elif self.at_word("class"):
                declaration = self.parse_class(declaration=True, allow_anonymous=True)
            else:
                declaration = self.parse_assignment()
                self.semicolon()
            return {
                "type": "ExportDefaultDeclaration", "start": start, "end": self.prev_end,
                "declaration": declaration,
            }
        if self.at_punct("{"):
            self.advance()
            specifiers = []
            while not self.at_punct("}"):
                local = self.parse_module_export_name()
                exported = local
                if self.at_word("as"):
                    self.advance()
                    exported = self.parse_module_export_name()
                specifiers.append({
                    "type": "ExportSpecifier", "start": local["start"],
                    "end": self.prev_end, "local": local, "exported": exported,
                })
                if not self.at_punct("}"):
                    self.expect_punct(",")
            self.advance()
            source = None
            if self.at_word("from"):
                self.advance()
                source = self.parse_literal()
            self.semicolon()
            return {
                "type": "ExportNamedDeclaration", "start": start, "end": self.prev_end,
                "declaration": None, "specifiers": specifiers, "source": source,
            }
        declaration = self.parse_statement()
        return {
            "type": "ExportNamedDeclaration", "start": start, "end": self.prev_end,
            "declaration": declaration, "specifiers": [], "source": None,
        }

    # -- functions and classes ---------------------------------------------------

    def parse_function(self, declaration: bool, is_async: bool = False,
                       start: int | None = None, allow_anonymous: bool = False) -> dict:
        if start is None:
            start = self.tok.start
        self.advance()  # `function`
        generator = self.eat_punct("*")
        ident = None
        if self.tok.kind == "ident" and self.tok.value not in KEYWORDS:
            ident = self.parse_identifier()
        elif declaration and not allow_anonymous:
            raise self.error("Function declaration requires a name")
        params = self.parse_params()
        body = self._with_flags(is_async, generator, self.parse_block)
        return {
            "type": "FunctionDeclaration" if declaration else "FunctionExpression",
            "start": start, "end": self.prev_end,
            "id": ident, "params": params, "body": body,
            "generator": generator, "async": is_async,
        }

    def _with_flags(self, is_async: bool, is_generator: bool, thunk):
        saved = (self.in_async, self.in_generator)
        self.in_async, self.in_generator = is_async, is_generator
        try:
            return thunk()
        finally:
            self.in_async, self.in_generator = saved

    def parse_params(self) -> list:
        self.expect_punct("(")
        params = []
        while not self.at_punct(")"):
            if self.at_punct("..."):
                s = self.tok.start
                self.advance()
                argument = self.parse_binding_target()
                params.append({
                    "type": "RestElement", "start": s, "end": self.prev_end,
                    "argument": argument,
                })
            else:
                params.append(self.parse_binding_element())
            if not self.at_punct(")"):
                self.expect_punct(",")
        self.advance()
        return params

    def parse_binding_element(self) -> dict:
        target = self.parse_binding_target()
        if self.eat_punct("="):
            right = self.parse_assignment()
            return {
                "type": "AssignmentPattern", "start": target["start"], "end": self.prev_end,
                "left": target, "right": right,
            }
        return target

    def parse_binding_target(self) -> dict:
        if self.at_punct("["):
            return self.parse_array_pattern()
        if self.at_punct("{"):
            return self.parse_object_pattern()
        return self.parse_identifier()

    def parse_array_pattern(self) -> dict:
        start = self.tok.start
        self.advance()
        elements = []
        while not self.at_punct("]"):
            if self.at_punct(","):
                elements.append(None)
                self.advance()
                continue
            if self.at_punct("..."):
                s = self.tok.start
                self.advance()
                argument = self.parse_binding_target()
                elements.append({
                    "type": "RestElement", "start": s, "end": self.prev_end,
                    "argument": argument,
                })
            else:
                elements.append(self.parse_binding_element())
            if not self.at_punct("]"):
                self.expect_punct(",")
        self.advance()
        return {
            "type": "ArrayPattern", "start": start, "end": self.prev_end,
            "elements": elements,
        }

    def parse_object_pattern(self) -> dict:
        start = self.tok.start
        self.advance()
        properties = []
        while not self.at_punct("}"):
            if self.at_punct("..."):
                s = self.tok.start
                self.advance()
                argument = self.parse_binding_target()
                properties.append({
                    "type": "RestElement", "start": s, "end": self.prev_end,
                    "argument": argument,
                })
            else:
                key, computed, key_start = self.parse_property_key()
                if self.eat_punct(":"):
                    value = self.parse_binding_element()
                    shorthand = False
                elif self.at_punct("="):
                    self.advance()
                    right = self.parse_assignment()
                    value = {
                        "type": "AssignmentPattern", "start": key["start"],
                        "end": self.prev_end, "left": key, "right": right,
                    }
                    shorthand = True
                else:
                    value = key
                    shorthand = True
                properties.append({
                    "type": "Property", "start": key_start, "end": self.prev_end,
                    "key": key, "value": value,
                    "kind": "init", "method": False,
                    "shorthand": shorthand, "computed": computed,
                })
            if not self.at_punct("}"):
                self.expect_punct(",")
        self.advance()
        return {
            "type": "ObjectPattern", "start": start, "end": self.prev_end,
            "properties": properties,
        }

    def parse_class(self, declaration: bool, allow_anonymous: bool = False) -> dict:
        start = self.tok.start
        self.advance()  # `class`
        ident = None
        if self.tok.kind == "ident" and self.tok.value not in KEYWORDS:
            ident = self.parse_identifier()
        elif declaration and not allow_anonymous:
            raise self.error("Class declaration requires a name")
        super_class = None
        if self.at_word("extends"):
            self.advance()
            super_class = self.parse_lhs()
        body = self.parse_class_body()
        return {
            "type": "ClassDeclaration" if declaration else "ClassExpression",
            "start": start, "end": self.prev_end,
            "id": ident, "superClass": super_class, "body": body,
        }

    def parse_class_body(self) -> dict:
        start = self.tok.start
        self.expect_punct("{")
        body = []
        while not self.at_punct("}"):
            if self.eat_punct(";"):
                continue
            body.append(self.parse_class_element())
        self.advance()
        return {"type": "ClassBody", "start": start, "end": self.prev_end, "body": body}

    def _word_is_modifier(self) -> bool:
        """Current word acts as a modifier, not as the element key itself."""
        nxt = self.peek()
        if nxt.kind == "punct" and nxt.value in ("(", "=", ";", "}"):
            return False
        return True

    def parse_class_element(self) -> dict:
        start = self.tok.start
        is_static = False
        if self.at_word("static") and self._word_is_modifier():
            is_static = True
            self.advance()
            if self.at_punct("{"):
                block = self.parse_block()
                return {
                    "type": "StaticBlock", "start": start, "end": self.prev_end,
                    "body": block["body"],
                }
        is_async = False
        is_generator = False
        kind = "method"
        if self.at_word("async") and self._word_is_modifier() and not self.peek().nl:
            is_async = True
            self.advance()
        if self.at_punct("*"):
            is_generator = True
            self.advance()
        if (self.at_word("get") or self.at_word("set")) and self._word_is_modifier():
            kind = self.tok.value
            self.advance()
        key, computed, _ = self.parse_property_key(allow_private=True)
        if self.at_punct("("):
            value = self.parse_method_value(is_async, is_generator)
            if (kind == "method" and not is_static and not computed
                    and key["type"] == "Identifier" and key.get("name") == "constructor"):
                kind = "constructor"
            return {
                "type": "MethodDefinition", "start": start, "end": self.prev_end,
                "key": key, "value": value,
                "kind": kind, "static": is_static, "computed": computed,
            }
        value = None
        if self.eat_punct("="):
            value = self.parse_assignment()
        self.semicolon()
        return {
            "type": "PropertyDefinition", "start": start, "end": self.prev_end,
            "key": key, "value": value,
            "static": is_static, "computed": computed,
        }

    def parse_method_value(self, is_async: bool, is_generator: bool) -> dict:
        start = self.tok.start
        params = self.parse_params()
        body = self._with_flags(is_async, is_generator, self.parse_block)
        return {
            "type": "FunctionExpression", "start": start, "end": self.prev_end,
            "id": None, "params": params, "body": body,
            "generator": is_generator, "async": is_async,
        }

    def parse_property_key(self, allow_private: bool = False) -> tuple[dict, bool, int]:
        tok = self.tok
        if self.at_punct("["):
            self.advance()
            key = self.parse_assignment()
            self.expect_punct("]")
            return key, True, tok.start
        if tok.kind in ("num", "str"):
            return self.parse_literal(), False, tok.start
        if allow_private and self.at_punct("#"):
            return self.parse_private_identifier(), False, tok.start
        return self.parse_ident_name(), False, tok.start

    def parse_private_identifier(self) -> dict:
        start = self.tok.start
        self.advance()  # '#'
        if self.tok.kind != "ident":
            raise self.error("Expected private name")
        name = self.tok.value
        self.advance()
        return {"type": "PrivateIdentifier", "start": start, "end": self.prev_end, "name": name}

    # -- expressions -------------------------------------------------------------

    def parse_expression(self, no_in: bool = False) -> dict:
        expr = self.parse_assignment(no_in)
        if self.at_punct(","):
            expressions = [expr]
            while self.eat_punct(","):
                expressions.append(self.parse_assignment(no_in))
            return {
                "type": "SequenceExpression", "start": expr["start"], "end": self.prev_end,
                "expressions": expressions,
            }
        return expr

    def parse_assignment(self, no_in: bool = False) -> dict:
        if self.in_generator and self.at_word("yield"):
            return self.parse_yield(no_in)
        start = self.tok.start
        expr = self.parse_conditional(no_in)
        if self.at_punct("=>") and not self.tok.nl:
            return self.finish_arrow(start, self.arrow_params(expr), is_async=False)
        if expr["type"] == "_Cover":
            raise self.error("Unexpected token", expr["start"])
        if self.tok.kind == "punct" and self.tok.value in ASSIGN_OPS:
            op = self.tok.value
            left = self.to_pattern(expr) if op == "=" else expr
            self.advance()
            right = self.parse_assignment(no_in)
            return {
                "type": "AssignmentExpression", "start": start, "end": self.prev_end,
                "left": left, "right": right, "operator": op,
            }
        return expr

    def parse_yield(self, no_in: bool) -> dict:
        start = self.tok.start
        self.advance()
        delegate = self.eat_punct("*")
        argument = None
        if not (self.tok.nl or self.tok.kind == "eof"
                or (self.tok.kind == "punct" and self.tok.value in _EXPR_STOP_PUNCT)):
            argument = self.parse_assignment(no_in)
        return {
            "type": "YieldExpression", "start": start, "end": self.prev_end,
            "argument": argument, "delegate": delegate,
        }

    def parse_conditional(self, no_in: bool) -> dict:
        expr = self.parse_binary(no_in)
        if expr["type"] == "_Cover":
            return expr
        if self.at_punct("?"):
            self.advance()
            consequent = self.parse_assignment()
            self.expect_punct(":")
            alternate = self.parse_assignment(no_in)
            return {
                "type": "ConditionalExpression", "start": expr["start"], "end": self.prev_end,
                "test": expr, "consequent": consequent, "alternate": alternate,
            }
        return expr

    def _peek_binop(self, no_in: bool) -> str | None:
        tok = self.tok
        if tok.kind == "punct" and tok.value in BIN_PREC:
            return tok.value
        if tok.kind == "ident" and not tok.escaped:
            if tok.value == "instanceof":
                return "instanceof"
            if tok.value == "in" and not no_in:
                return "in"
        return None

    def parse_binary(self, no_in: bool, min_prec: int = 1) -> dict:
        left = self.parse_unary()
        if left["type"] == "_Cover":
            return left
        while True:
            op = self._peek_binop(no_in)
            if op is None:
                break
            prec = BIN_PREC[op]
            if prec < min_prec:
                break
            self.advance()
            # ** is right-associative
            right = self.parse_binary(no_in, prec if op == "**" else prec + 1)
            ntype = "LogicalExpression" if op in ("&&", "||", "??") else "BinaryExpression"
            left = {
                "type": ntype, "start": left["start"], "end": right["end"],
                "left": left, "right": right, "operator": op,
            }
        return left

    def parse_unary(self) -> dict:
        tok = self.tok
        if tok.kind == "punct":
            if tok.value in UNARY_PUNCT:
                self.advance()
                argument = self.parse_unary()
                return {
                    "type": "UnaryExpression", "start": tok.start, "end": self.prev_end,
                    "argument": argument, "operator": tok.value, "prefix": True,
                }
            if tok.value in ("++", "--"):
                self.advance()
                argument = self.parse_unary()
                return {
                    "type": "UpdateExpression", "start": tok.start, "end": self.prev_end,
                    "argument": argument, "operator": tok.value, "prefix": True,
                }
        if tok.kind == "ident" and not tok.escaped:
            if tok.value in UNARY_KW:
                self.advance()
                argument = self.parse_unary()
                return {
                    "type": "UnaryExpression", "start": tok.start, "end": self.prev_end,
                    "argument": argument, "operator": tok.value, "prefix": True,
                }
            if tok.value == "await" and self.in_async:
                self.advance()
                argument = self.parse_unary()
                return {
                    "type": "AwaitExpression", "start": tok.start, "end": self.prev_end,
                    "argument": argument,
                }
        expr = self.parse_lhs()
        if expr["type"] == "_Cover":
            return expr
        if self.tok.kind == "punct" and self.tok.value in ("++", "--") and not self.tok.nl:
            op = self.tok.value
            self.advance()
            return {
                "type": "UpdateExpression", "start": expr["start"], "end": self.prev_end,
                "argument": expr, "operator": op, "prefix": False,
            }
        return expr

    def parse_lhs(self) -> dict:
        if self.at_word("new"):
            expr = self.parse_new()
        else:
            expr = self.parse_primary()
            if expr["type"] == "_Cover":
                return expr
        return self.parse_chain(expr)

    def parse_new(self) -> dict:
        start = self.tok.start
        self.advance()
        if self.at_punct("."):
            self.advance()
            prop = self.parse_ident_name()
            return {
                "type": "MetaProperty", "start": start, "end": self.prev_end,
                "meta": {"type": "Identifier", "start": start, "end": start + 3, "name": "new"},
                "property": prop,
            }
        if self.at_word("new"):
            callee = self.parse_new()
        else:
            callee = self.parse_primary()
            callee = self.parse_chain(callee, no_calls=True)
        arguments = self.parse_arguments() if self.at_punct("(") else []
        return {
            "type": "NewExpression", "start": start, "end": self.prev_end,
            "callee": callee, "arguments": arguments,
        }

    def parse_chain(self, expr: dict, no_calls: bool = False) -> dict:
        optional_seen = False
        while True:
            if self.at_punct("."):
                self.advance()
                prop = self.parse_ident_name(allow_private=True)
                expr = {
                    "type": "MemberExpression", "start": expr["start"], "end": self.prev_end,
                    "object": expr, "property": prop,
                    "computed": False, "optional": False,
                }
            elif self.at_punct("?."):
                optional_seen = True
                self.advance()
                if self.at_punct("(") and not no_calls:
                    arguments = self.parse_arguments()
                    expr = {
                        "type": "CallExpression", "start": expr["start"], "end": self.prev_end,
                        "callee": expr, "arguments": arguments, "optional": True,
                    }
                elif self.at_punct("["):
                    self.advance()
                    prop = self.parse_expression()
                    self.expect_punct("]")
                    expr = {
                        "type": "MemberExpression", "start": expr["start"], "end": self.prev_end,
                        "object": expr, "property": prop,
                        "computed": True, "optional": True,
                    }
                else:
                    prop = self.parse_ident_name(allow_private=True)
                    expr = {
                        "type": "MemberExpression", "start": expr["start"], "end": self.prev_end,
                        "object": expr, "property": prop,
                        "computed": False, "optional": True,
                    }
            elif self.at_punct("["):
                self.advance()
                prop = self.parse_expression()
                self.expect_punct("]")
                expr = {
                    "type": "MemberExpression", "start": expr["start"], "end": self.prev_end,
                    "object": expr, "property": prop,
                    "computed": True, "optional": False,
                }
            elif self.at_punct("(") and not no_calls:
                arguments = self.parse_arguments()
                expr = {
                    "type": "CallExpression", "start": expr["start"], "end": self.prev_end,
                    "callee": expr, "arguments": arguments, "optional": False,
                }
            elif self.at_punct("`"):
                quasi = self.parse_template()
                expr = {
                    "type": "TaggedTemplateExpression", "start": expr["start"],
                    "end": self.prev_end, "tag": expr, "quasi": quasi,
                }
            else:
                break
        if optional_seen:
            expr = {
                "type": "ChainExpression", "start": expr["start"], "end": expr["end"],
                "expression": expr,
            }
        return expr

    def parse_arguments(self) -> list:
        self.expect_punct("(")
        args = []
        while not self.at_punct(")"):
            if self.at_punct("..."):
                s = self.tok.start
                self.advance()
                argument = self.parse_assignment()
                args.append({
                    "type": "SpreadElement", "start": s, "end": self.prev_end,
                    "argument": argument,
                })
            else:
                args.append(self.parse_assignment())
            if not self.at_punct(")"):
                self.expect_punct(",")
        self.advance()
        return args

    # -- primaries ---------------------------------------------------------------

    def parse_primary(self) -> dict:
        tok = self.tok
        if tok.kind in ("num", "str"):
            return self.parse_literal()
        if tok.kind == "punct":
            if tok.value == "(":
                return self.parse_group()
            if tok.value == "[":
                return self.parse_array()
            if tok.value == "{":
                return self.parse_object()
            if tok.value in ("/", "/="):
                rx = self.lx.scan_regex(tok.start)
                self.prev_end = rx.end
                self.tok = self.lx.next_token()
                return {
                    "type": "Literal", "start": rx.start, "end": rx.end,
                    "value": None, "raw": self.src[rx.start:rx.end], "regex": dict(rx.value),
                }
            if tok.value == "`":
                return self.parse_template()
            if tok.value == "#":
                return self.parse_private_identifier()
        if tok.kind == "ident":
            v = tok.value
            if not tok.escaped:
                if v == "this":
                    self.advance()
                    return {"type": "ThisExpression", "start": tok.start, "end": tok.end}
                if v in ("true", "false"):
                    self.advance()
                    return {
                        "type": "Literal", "start": tok.start, "end": tok.end,
                        "value": v == "true", "raw": v,
                    }
                if v == "null":
                    self.advance()
                    return {
                        "type": "Literal", "start": tok.start, "end": tok.end,
                        "value": None, "raw": v,
                    }
                if v == "function":
                    return self.parse_function(declaration=False)
                if v == "class":
                    return self.parse_class(declaration=False)
                if v == "super":
                    self.advance()
                    return {"type": "Super", "start": tok.start, "end": tok.end}
                if v == "import":
                    return self.parse_import_expression()
                if v == "async":
                    result = self.parse_async_prefixed()
                    if result is not None:
                        return result
                elif v in KEYWORDS:
                    raise self.error(f"Unexpected keyword {v!r}")
            return self.parse_identifier()
        raise self.error("Unexpected token")

    def parse_async_prefixed(self) -> dict | None:
        """Handle `async function`, `async x =>`, `async (...) =>`; None means
        plain identifier `async`."""
        tok = self.tok
        nxt = self.peek()
        if nxt.nl:
            return None
        if nxt.kind == "ident" and not nxt.escaped:
            if nxt.value == "function":
                self.advance()
                return self.parse_function(declaration=False, is_async=True, start=tok.start)
            if nxt.value not in KEYWORDS:
                # `async x => ...`
                self.advance()
                param = self.parse_identifier()
                if not (self.at_punct("=>") and not self.tok.nl):
                    raise self.error("Expected => after async arrow parameter")
                return self.finish_arrow(tok.start, [param], is_async=True)
            return None
        if nxt.kind == "punct" and nxt.value == "(":
            state = self.snapshot()
            self.advance()
            try:
                group = self.parse_group()
                if self.at_punct("=>") and not self.tok.nl:
                    return self.finish_arrow(tok.start, self.arrow_params(group), is_async=True)
            except ParseError:
                pass
            self.restore(state)
        return None

    def parse_import_expression(self) -> dict:
        start = self.tok.start
        self.advance()
        if self.at_punct("."):
            self.advance()
            prop = self.parse_ident_name()
            return {
                "type": "MetaProperty", "start": start, "end": self.prev_end,
                "meta": {"type": "Identifier", "start": start, "end": start + 6,
                         "name": "import"},
                "property": prop,
            }
        self.expect_punct("(")
        source = self.parse_assignment()
        options = None
        if self.eat_punct(","):
            if not self.at_punct(")"):
                options = self.parse_assignment()
                self.eat_punct(",")
        self.expect_punct(")")
        node = {
            "type": "ImportExpression", "start": start, "end": self.prev_end,
            "source": source,
        }
        if options is not None:
            node["options"] = options
        return node

    def parse_identifier(self) -> dict:
        tok = self.tok
        if tok.kind != "ident":
            raise self.error("Expected identifier")
        if tok.keyword:
            raise self.error(f"Unexpected reserved word {tok.value!r}")
        self.advance()
        return {"type": "Identifier", "start": tok.start, "end": tok.end, "name": tok.value}

    def parse_ident_name(self, allow_private: bool = False) -> dict:
        if allow_private and self.at_punct("#"):
            return self.parse_private_identifier()
        tok = self.tok
        if tok.kind != "ident":
            raise self.error("Expected property name")
        self.advance()
        return {"type": "Identifier", "start": tok.start, "end": tok.end, "name": tok.value}

    def parse_literal(self) -> dict:
        tok = self.advance()
        return {
            "type": "Literal", "start": tok.start, "end": tok.end,
            "value": tok.value, "raw": self.src[tok.start:tok.end],
        }

    def parse_group(self) -> dict:
        start = self.tok.start
        self.advance()  # '('
        if self.at_punct(")"):
            self.advance()
            return {"type": "_Cover", "start": start, "end": self.prev_end, "items": []}
        items = []
        cover_only = False
        while True:
            if self.at_punct("..."):
                cover_only = True
                s = self.tok.start
                self.advance()
                argument = self.parse_assignment()
                items.append({
                    "type": "SpreadElement", "start": s, "end": self.prev_end,
                    "argument": argument,
                })
            else:
                items.append(self.parse_assignment())
            if self.eat_punct(","):
                if self.at_punct(")"):
                    cover_only = True
                    break
                continue
            break
        self.expect_punct(")")
        if cover_only:
            return {"type": "_Cover", "start": start, "end": self.prev_end, "items": items}
        if len(items) == 1:
            return items[0]
        return {
            "type": "SequenceExpression", "start": items[0]["start"],
            "end": items[-1]["end"], "expressions": items,
        }

    def parse_array(self) -> dict:
        start = self.tok.start
        self.advance()
        elements = []
        while not self.at_punct("]"):
            if self.at_punct(","):
                elements.append(None)
                self.advance()
                continue
            if self.at_punct("..."):
                s = self.tok.start
                self.advance()
                argument = self.parse_assignment()
                elements.append({
                    "type": "SpreadElement", "start": s, "end": self.prev_end,
                    "argument": argument,
                })
            else:
                elements.append(self.parse_assignment())
            if not self.at_punct("]"):
                self.expect_punct(",")
        self.advance()
        return {
            "type": "ArrayExpression", "start": start, "end": self.prev_end,
            "elements": elements,
        }

    def parse_object(self) -> dict:
        start = self.tok.start
        self.advance()
        properties = []
        while not self.at_punct("}"):
            if self.at_punct("..."):
                s = self.tok.start
                self.advance()
                argument = self.parse_assignment()
                properties.append({
                    "type": "SpreadElement", "start": s, "end": self.prev_end,
                    "argument": argument,
                })
            else:
                properties.append(self.parse_object_property())
            if not self.at_punct("}"):
                self.expect_punct(",")
        self.advance()
        return {
            "type": "ObjectExpression", "start": start, "end": self.prev_end,
            "properties": properties,
        }

    def parse_object_property(self) -> dict:
        start = self.tok.start
        kind = "init"
        is_async = False
        is_generator = False
        if (self.at_word("get") or self.at_word("set")) and self._word_is_modifier() \
                and not (self.peek().kind == "punct" and self.peek().value in (",", ":")):
            kind = self.tok.value
            self.advance()
        if kind == "init" and self.at_word("async") and self._word_is_modifier() \
                and not self.peek().nl \
                and not (self.peek().kind == "punct" and self.peek().value in (",", ":")):
            is_async = True
            self.advance()
        if self.at_punct("*"):
            is_generator = True
            self.advance()
        key, computed, key_start = self.parse_property_key()
        if self.at_punct("("):
            value = self.parse_method_value(is_async, is_generator)
            return {
                "type": "Property", "start": start, "end": self.prev_end,
                "key": key, "value": value,
                "kind": kind if kind in ("get", "set") else "init",
                "method": kind == "init", "shorthand": False, "computed": computed,
            }
        if kind in ("get", "set") or is_async or is_generator:
            raise self.error("Expected method parameters")
        if self.eat_punct(":"):
            value = self.parse_assignment()
            return {
                "type": "Property", "start": key_start, "end": self.prev_end,
                "key": key, "value": value,
                "kind": "init", "method": False, "shorthand": False, "computed": computed,
            }
        if key["type"] != "Identifier":
            raise self.error("Expected ':' after property name")
        if self.at_punct("="):
            # shorthand-with-default; only meaningful under a destructuring cover
            self.advance()
            right = self.parse_assignment()
            value = {
                "type": "AssignmentPattern", "start": key["start"], "end": self.prev_end,
                "left": key, "right": right,
            }
        else:
            value = key
        return {
            "type": "Property", "start": key_start, "end": self.prev_end,
            "key": key, "value": value,
            "kind": "init", "method": False, "shorthand": True, "computed": False,
        }

    def parse_template(self) -> dict:
        start = self.tok.start  # at '`'
        quasis = []
        expressions = []
        part = self.lx.scan_template_part(self.tok.end)
        while True:
            raw_end = part.start + len(part.raw)
            quasis.append({
                "type": "TemplateElement", "start": part.start, "end": raw_end,
                "value": {"raw": part.raw, "cooked": part.cooked}, "tail": part.tail,
            })
            if part.tail:
                break
            self.lx.pos = part.end
            self.prev_end = part.end
            self.tok = self.lx.next_token()
            expressions.append(self.parse_expression())
            if not self.at_punct("}"):
                raise self.error("Expected } in template literal")
            part = self.lx.scan_template_part(self.tok.end)
        self.lx.pos = part.end
        self.prev_end = part.end
        self.tok = self.lx.next_token()
        return {
            "type": "TemplateLiteral", "start": start, "end": part.end,
            "quasis": quasis, "expressions": expressions,
        }

    # -- arrows and patterns -------------------------------------------------------

    def arrow_params(self, expr: dict) -> list:
        t = expr["type"]
        if t == "Identifier":
            return [expr]
        if t == "_Cover":
            return [self.to_pattern(item) for item in expr["items"]]
        if t == "SequenceExpression":
            return [self.to_pattern(e) for e in expr["expressions"]]
        return [self.to_pattern(expr)]

    def finish_arrow(self, start: int, params: list, is_async: bool) -> dict:
        self.expect_punct("=>")
        if self.at_punct("{"):
            body = self._with_flags(is_async, False, self.parse_block)
            is_expression = False
        else:
            body = self._with_flags(is_async, False, self.parse_assignment)
            is_expression = True
        return {
            "type": "ArrowFunctionExpression", "start": start, "end": self.prev_end,
            "id": None, "params": params, "body": body,
            "generator": False, "async": is_async, "expression": is_expression,
        }

    def to_pattern(self, node: dict) -> dict:
        """Reinterpret an expression parsed under the cover grammar as a
        binding/assignment pattern (in place)."""
        t = node["type"]
        if t in ("Identifier", "MemberExpression", "ArrayPattern", "ObjectPattern",
                 "AssignmentPattern", "RestElement"):
            return node
        if t == "ArrayExpression":
            node["type"] = "ArrayPattern"
            node["elements"] = [
                None if el is None else self.to_pattern(el) for el in node["elements"]
            ]
            return node
        if t == "ObjectExpression":
            node["type"] = "ObjectPattern"
            for prop in node["properties"]:
                if prop["type"] == "SpreadElement":
                    prop["type"] = "RestElement"
                    prop["argument"] = self.to_pattern(prop["argument"])
                elif prop["type"] == "Property":
                    if prop["kind"] != "init":
                        raise self.error("Invalid destructuring target", prop["start"])
                    prop["value"] = self.to_pattern(prop["value"])
            return node
        if t == "AssignmentExpression":
            if node.get("operator") != "=":
                raise self.error("Invalid destructuring target", node["start"])
            node["type"] = "AssignmentPattern"
            node["left"] = self.to_pattern(node["left"])
            node.pop("operator", None)
            return node
        if t == "SpreadElement":
            node["type"] = "RestElement"
            node["argument"] = self.to_pattern(node["argument"])
            return node
        raise self.error("Invalid destructuring or parameter target", node["start"])


def parse(source: str, source_type: str = "auto") -> dict:
    """Parse ECMAScript source into an ESTree-shaped dict tree.

    `source_type` is recorded on the Program node; the grammar itself is
    universal (module and script constructs both accepted).
    """
    parser = Parser(source)
    limit = sys.getrecursionlimit()
    if limit < 10000:
        sys.setrecursionlimit(10000)
    try:
        return parser.parse_program(source_type)
    finally:
        if limit < 10000:
            sys.setrecursionlimit(limit)
