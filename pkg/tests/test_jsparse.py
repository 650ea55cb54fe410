"""Parser and lexer behavior the fingerprinting relies on."""

from __future__ import annotations

import pytest

from astrack.jsparse import ParseError, parse, tokenize


def types_of(body):
    return [n["type"] for n in body]


def test_statement_kinds():
    tree = parse(
        "var a = 1; if (a) {} for (;;) break; while (a) break; "
        "do a--; while (a); switch (a) { default: } try {} finally {} "
        "lbl: a++; debugger; ;")
    assert types_of(tree["body"]) == [
        "VariableDeclaration", "IfStatement", "ForStatement", "WhileStatement",
        "DoWhileStatement", "SwitchStatement", "TryStatement",
        "LabeledStatement", "DebuggerStatement", "EmptyStatement",
    ]


def test_spans_slice_back_to_source():
    src = "function outer(a, b) { return a + b; }"
    tree = parse(src)
    fn = tree["body"][0]
    assert src[fn["start"]:fn["end"]] == src
    body = fn["body"]
    assert src[body["start"]:body["end"]] == "{ return a + b; }"


def test_asi_and_restricted_productions():
    tree = parse("var a = 1\nvar b = 2\nreturn_ok()")
    assert len(tree["body"]) == 3
    # a newline after return means no argument
    fn = parse("function f() { return\n1; }")["body"][0]
    ret = fn["body"]["body"][0]
    assert ret["type"] == "ReturnStatement" and ret["argument"] is None
    with pytest.raises(ParseError):
        parse("throw\nnew Error('x');")


def test_regex_vs_division():
    tree = parse("var r = /ab+c/gi; var q = a / b / c;")
    lit = tree["body"][0]["declarations"][0]["init"]
    assert lit["regex"] == {"pattern": "ab+c", "flags": "gi"}
    div = tree["body"][1]["declarations"][0]["init"]
    assert div["type"] == "BinaryExpression" and div["operator"] == "/"


def test_template_literaddal_nesting():
    tree = parse("var s = `a${1 + `x${inner}y`}b`;")
    tpl = tree["body"][0]["declarations"][0]["init"]
    assert tpl["type"] == "TemplateLiteral"
    assert len(tpl["quasis"]) == 2 and len(tpl["expressions"]) == 1
    nested = tpl["expressions"][0]["right"]
    assert nested["type"] == "TemplateLiteral"


def test_arrow_cover_grammar():
    simple = parse("x => x * 2;")["body"][0]["expression"]
    assert simple["type"] == "ArrowFunctionExpression"
    multi = parse("(a, b = 1, ...rest) => a;")["body"][0]["expression"]
    assert [p["type"] for p in multi["params"]] == [
        "Identifier", "AssignmentPattern", "RestElement"]
    destr = parse("({x, y: [z]}) => z;")["body"][0]["expression"]
    assert destr["params"][0]["type"] == "ObjectPattern"
    empty = parse("() => 1;")["body"][0]["expression"]
    assert empty["params"] == []
    # parenthesized sequences that are NOT arrows stay expressions
    seq = parse("(a, b);")["body"][0]["expression"]
    assert seq["type"] == "SequenceExpression"


def test_async_forms():
    a1 = parse("async x => x;")["body"][0]["expression"]
    assert a1["type"] == "ArrowFunctionExpression" and a1["async"]
    a2 = parse("async (a, b) => a;")["body"][0]["expression"]
    assert a2["async"] and len(a2["params"]) == 2
    call = parse("async(a, b);")["body"][0]["expression"]
    assert call["type"] == "CallExpression"
    fn = parse("async function f() { await g(); }")["body"][0]
    assert fn["async"] and fn["type"] == "FunctionDeclaration"


def test_class_elements():
    tree = parse(
        "class A extends B { constructor(){super();} static m(){} get g(){return 1} "
        "set g(v){} *it(){} async load(){} #priv = 1; static #sp; [k](){} "
        "static { boot(); } }")
    body = tree["body"][0]["body"]["body"]
    kinds = [(el["type"], el.get("kind"), el.get("static")) for el in body]
    assert ("MethodDefinition", "constructor", False) in kinds
    assert ("StaticBlock", None, None) in kinds
    assert any(el["type"] == "PropertyDefinition" and el["static"] for el in body)


def test_optional_chaining_and_nullish():
    expr = parse("a?.b?.[c]?.(d) ?? e;")["body"][0]["expression"]
    assert expr["type"] == "LogicalExpression" and expr["operator"] == "??"
    assert expr["left"]["type"] == "ChainExpression"


def test_destructuring_assignment_targets():
    left = parse("[a, {b: c = 1}, ...rest] = arr;")["body"][0]["expression"]["left"]
    assert left["type"] == "ArrayPattern"
    assert left["elements"][1]["type"] == "ObjectPattern"
    assert left["elements"][2]["type"] == "RestElement"


def test_modules_roundtrip_node_types():
    tree = parse(
        "import d, {a as b} from 'm'; import * as ns from 'n'; import 'side';\n"
        "export default class {}\nexport const k = 1;\nexport {k as kk};\n"
        "export * from 'o';")
    kinds = types_of(tree["body"])
    assert kinds.count("ImportDeclaration") == 3
    assert "ExportDefaultDeclaration" in kinds
    assert "ExportAllDeclaration" in kinds


def test_parse_error_carries_position():
    with pytest.raises(ParseError) as err:
        parse("var x = ;\n")
    assert err.value.position == 8
    assert err.value.line == 1


@pytest.mark.parametrize("bad", [
    "function(){}", "var 1a;", "'open", "a +", "for(;;", "{", "x = ;",
    "(a,) + 1", "class {}", "`no ${end", "obj.", "do x; while y;",
])
def test_rejections(bad):
    with pytest.raises(ParseError):
        parse(bad)


def test_numeric_literal_values():
    decls = parse("var a=0x1F, b=0b101, c=0o17, d=017, e=1_000, f=1e-3, g=10n;")
    values = [d["init"]["value"] for d in decls["body"][0]["declarations"]]
    assert values == [31, 5, 15, 15, 1000, 0.001, 10]


def test_identifier_escapes_resolve():
    tree = parse("var \\u0063ow = 1; use(c\\u006fw);")
    assert tree["body"][0]["declarations"][0]["id"]["name"] == "cow"
    assert tree["body"][1]["expression"]["arguments"][0]["name"] == "cow"


def test_tokenize_utility_covers_templates():
    toks = tokenize("a = `x${f(1)}y`; b /= 2;")
    kinds = [t.kind for t in toks]
    assert "template" in kinds
    assert kinds[-1] == "eof"


def test_deeply_nested_expressions_parse():
    src = "x = " + "(" * 300 + "1" + ")" * 300 + ";"
    assert parse(src)["body"][0]["type"] == "ExpressionStatement"


def test_hashbang_comment():
    tree = parse("#!/usr/bin/env node\nconsole.log(1);\n")
    assert types_of(tree["body"]) == ["ExpressionStatement"]
    # only legal at offset zero
    with pytest.raises(ParseError):
        parse("var x = 1;\n#!/usr/bin/env node\n")


def test_webpack_fixture_headers_parse(fixtures_dir):
    for i in range(1, 5):
        tree = parse((fixtures_dir / f"webpack_{i}.js").read_text())
        expr = tree["body"][0]["expression"]
        assert expr["type"] == "CallExpression"
        assert expr["callee"]["property"]["name"] == "push"
