"""Node-type label vocabulary and aperture/closure label assignment.

Every syntax-tree node type gets an integer aperture label, emitted when a
traversal enters the node. Container types additionally get a closure label,
emitted on exit, so the resulting label chain encodes the tree shape
unambiguously. Leaf types and fixed-arity operator types need no closure:
their subtree extent is implied. Operator token identity is folded into the
vocabulary as composite names (``BinaryExpression:*``), so ``a+b`` and
``a*b`` produce different chains.
"""

from __future__ import annotations

from dataclasses import dataclass

VOCABULARY_VERSION = "estree-2022.1"

# Node types that never carry children.
LEAF_TYPES = frozenset([
    "Identifier", "PrivateIdentifier", "Literal", "TemplateElement",
    "ThisExpression", "Super", "EmptyStatement", "DebuggerStatement",
])

# Fixed-arity operator node types; the operator token joins the type name.
OPERATOR_TYPES = frozenset([
    "UnaryExpression", "BinaryExpression", "LogicalExpression",
    "AssignmentExpression", "UpdateExpression",
])

_UNARY_OPS = ["+", "-", "!", "~", "typeof", "void", "delete"]
_BINARY_OPS = [
    "==", "!=", "===", "!==", "<", ">", "<=", ">=", "in", "instanceof",
    "<<", ">>", ">>>", "+", "-", "*", "/", "%", "**", "|", "^", "&",
]
_LOGICAL_OPS = ["&&", "||", "??"]
_ASSIGN_OPS = [
    "=", "+=", "-=", "*=", "/=", "%=", "**=", "<<=", ">>=", ">>>=",
    "|=", "^=", "&=", "&&=", "||=", "??=",
]
_UPDATE_OPS = ["++", "--"]

_CONTAINER_TYPES = [
    "Program",
    "ExpressionStatement", "BlockStatement", "WithStatement", "ReturnStatement",
    "LabeledStatement", "BreakStatement", "ContinueStatement", "IfStatement",
    "SwitchStatement", "SwitchCase", "ThrowStatement", "TryStatement",
    "CatchClause", "WhileStatement", "DoWhileStatement", "ForStatement",
    "ForInStatement", "ForOfStatement",
    "VariableDeclaration", "VariableDeclarator",
    "FunctionDeclaration", "FunctionExpression", "ArrowFunctionExpression",
    "ClassDeclaration", "ClassExpression", "ClassBody", "MethodDefinition",
    "PropertyDefinition", "StaticBlock",
    "ImportDeclaration", "ImportSpecifier", "ImportDefaultSpecifier",
    "ImportNamespaceSpecifier", "ExportNamedDeclaration", "ExportSpecifier",
    "ExportDefaultDeclaration", "ExportAllDeclaration", "ImportExpression",
    "MetaProperty",
    "ArrayExpression", "ObjectExpression", "Property",
    "TemplateLiteral", "TaggedTemplateExpression",
    "MemberExpression", "CallExpression", "NewExpression",
    "SequenceExpression", "ConditionalExpression", "YieldExpression",
    "AwaitExpression", "SpreadElement", "ChainExpression",
    "ObjectPattern", "ArrayPattern", "RestElement", "AssignmentPattern",
]

DEFAULT_VOCABULARY: tuple[str, ...] = tuple(
    _CONTAINER_TYPES
    + sorted(LEAF_TYPES)
    + [f"UnaryExpression:{op}" for op in _UNARY_OPS]
    + [f"BinaryExpression:{op}" for op in _BINARY_OPS]
    + [f"LogicalExpression:{op}" for op in _LOGICAL_OPS]
    + [f"AssignmentExpression:{op}" for op in _ASSIGN_OPS]
    + [f"UpdateExpression:{op}" for op in _UPDATE_OPS]
)


def closure_bearing(name: str) -> bool:
    base = name.split(":", 1)[0]
    return base not in LEAF_TYPES and base not in OPERATOR_TYPES


@dataclass(frozen=True)
class LabelEntry:
    aperture: int
    closure: int | None


class LabelTable:
    """Immutable node-type → label assignment, shareable across workers."""

    def __init__(self, entries: dict[str, LabelEntry], vocabulary_version: str):
        self.entries = dict(entries)
        self.vocabulary_version = vocabulary_version
        self._closure_to_aperture = {
            e.closure: e.aperture for e in entries.values() if e.closure is not None
        }
        self._paired_apertures = frozenset(self._closure_to_aperture.values())

    def aperture(self, name: str) -> int:
        return self.entries[name].aperture

    def closure(self, name: str) -> int | None:
        return self.entries[name].closure

    def is_closure_label(self, label: int) -> bool:
        return label in self._closure_to_aperture

    def aperture_for_closure(self, label: int) -> int:
        return self._closure_to_aperture[label]

    def aperture_opens_pair(self, label: int) -> bool:
        return label in self._paired_apertures

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, LabelTable)
            and self.entries == other.entries
            and self.vocabulary_version == other.vocabulary_version
        )

    def serialize(self) -> str:
        lines = [f"#label-table\t{self.vocabulary_version}"]
        for name, entry in self.entries.items():
            closure = "-" if entry.closure is None else str(entry.closure)
            lines.append(f"{name}\t{entry.aperture}\t{closure}")
        return "\n".join(lines) + "\n"

    @classmethod
    def deserialize(cls, text: str) -> "LabelTable":
        lines = text.splitlines()
        if not lines or not lines[0].startswith("#label-table\t"):
            raise ValueError("not a label table: missing header")
        version = lines[0].split("\t", 1)[1]
        entries: dict[str, LabelEntry] = {}
        for i, line in enumerate(lines[1:], start=2):
            if not line.strip():
                continue
            try:
                name, ap, cl = line.split("\t")
            except ValueError:
                raise ValueError(f"malformed label table line {i}") from None
            entries[name] = LabelEntry(int(ap), None if cl == "-" else int(cl))
        return cls(entries, version)


def build_label_table(
    vocabulary: tuple[str, ...] | list[str] = DEFAULT_VOCABULARY,
    vocabulary_version: str = VOCABULARY_VERSION,
) -> LabelTable:
    """Assign even apertures in vocabulary order; closure-bearing types get
    the succeeding odd integer. Deterministic for a fixed vocabulary."""
    if not vocabulary:
        raise ValueError("empty vocabulary")
    seen: set[str] = set()
    entries: dict[str, LabelEntry] = {}
    for index, name in enumerate(vocabulary):
        if name in seen:
            raise ValueError(f"duplicate node type {name!r}")
        seen.add(name)
        aperture = 2 * index
        closure = aperture + 1 if closure_bearing(name) else None
        entries[name] = LabelEntry(aperture, closure)
    return LabelTable(entries, vocabulary_version)


_DEFAULT_TABLE: LabelTable | None = None


def default_table() -> LabelTable:
    global _DEFAULT_TABLE
    if _DEFAULT_TABLE is None:
        _DEFAULT_TABLE = build_label_table()
    return _DEFAULT_TABLE
