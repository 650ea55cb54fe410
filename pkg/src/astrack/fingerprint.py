"""Structural fingerprints: label chains and their hashes.

A file is reduced to the label chain of its whole syntax tree plus one chain
slice per nested function/method/arrow. Hashing the chains yields identifiers
that survive renaming, literal changes, whitespace, and minification, while
any change to the tree shape produces a different chain.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass, field

from .jsparse import ParseError, parse
from .labels import LabelTable, default_table

FUNCTION_TYPES = frozenset([
    "FunctionDeclaration", "FunctionExpression", "ArrowFunctionExpression",
])

_OPERATOR_BEARING = frozenset([
    "UnaryExpression", "BinaryExpression", "LogicalExpression",
    "AssignmentExpression", "UpdateExpression",
])


def type_key(node: dict) -> str:
    """Vocabulary name for a node: plain type, or type:operator composite."""
    t = node["type"]
    if t in _OPERATOR_BEARING:
        return f"{t}:{node['operator']}"
    return t


def iter_children(node: dict):
    """Child nodes in source order (holes and scalar fields skipped)."""
    for key, value in node.items():
        if key == "type":
            continue
        if isinstance(value, dict):
            if "type" in value:
                yield value
        elif isinstance(value, list):
            for item in value:
                if isinstance(item, dict) and "type" in item:
                    yield item


def build_chain(root: dict, table: LabelTable) -> tuple[int, ...]:
    """Label chain of one subtree: aperture on entry, closure on exit."""
    chain: list[int] = []
    stack: list[tuple[dict, bool]] = [(root, False)]
    while stack:
        node, exiting = stack.pop()
        key = type_key(node)
        if exiting:
            chain.append(table.closure(key))  # type: ignore[arg-type]
            continue
        chain.append(table.aperture(key))
        if table.closure(key) is not None:
            stack.append((node, True))
        children = list(iter_children(node))
        for child in reversed(children):
            stack.append((child, False))
    return tuple(chain)


def encode_chain(chain) -> bytes:
    """Canonical little-endian varint (LEB128) encoding of a label chain."""
    out = bytearray()
    for value in chain:
        while True:
            byte = value & 0x7F
            value >>= 7
            if value:
                out.append(byte | 0x80)
            else:
                out.append(byte)
                break
    return bytes(out)


def hash_chain(chain) -> str:
    """128-bit digest of the canonical chain encoding, as 32 hex chars."""
    return hashlib.blake2b(encode_chain(chain), digest_size=16).hexdigest()


def check_balanced(chain, table: LabelTable) -> bool:
    """Bracket-balance check restricted to closure-bearing label pairs."""
    stack: list[int] = []
    for label in chain:
        if table.is_closure_label(label):
            if not stack or stack.pop() != table.aperture_for_closure(label):
                return False
        elif table.aperture_opens_pair(label):
            stack.append(label)
    return not stack


@dataclass(frozen=True)
class AstFingerprint:
    """Hashed structural identity of one subtree plus its source location."""

    id: str
    node_type: str
    span: tuple[int, int]  # byte offsets into the source
    chain_slice: tuple[int, int]  # (offset, length) within the file's root chain
    parent_id: str | None = None


@dataclass(frozen=True)
class FileFingerprint:
    """All fingerprints of one resource: the whole tree plus each function."""

    resource_id: str
    root: AstFingerprint
    nested: frozenset[AstFingerprint]
    root_chain: tuple[int, ...] = field(repr=False)

    def all_ids(self) -> set[str]:
        return {self.root.id} | {fp.id for fp in self.nested}


def _byte_offsets(source: str) -> list[int] | None:
    """char index → byte index map, or None when they coincide (ASCII)."""
    if source.isascii():
        return None
    offsets = [0] * (len(source) + 1)
    acc = 0
    for i, ch in enumerate(source):
        offsets[i] = acc
        acc += len(ch.encode("utf-8"))
    offsets[len(source)] = acc
    return offsets


def fingerprint_tree(tree: dict, table: LabelTable):
    """Walk a parsed tree once, returning the root chain and per-function
    records ``(node, chain_start, chain_end, parent_node_or_None)``."""
    chain: list[int] = []
    records: list[tuple[dict, int, int, dict | None]] = []
    open_at: dict[int, int] = {}
    rec_index: dict[int, int] = {}
    enclosing: list[dict] = []
    stack: list[tuple[dict, bool]] = [(tree, False)]
    while stack:
        node, exiting = stack.pop()
        key = type_key(node)
        if exiting:
            closure = table.closure(key)
            assert closure is not None, "exit event for a closure-less node"
            chain.append(closure)
            if node["type"] in FUNCTION_TYPES:
                i = rec_index[id(node)]
                n, s, _, p = records[i]
                records[i] = (n, s, len(chain), p)
                enclosing.pop()
            continue
        chain.append(table.aperture(key))
        if node["type"] in FUNCTION_TYPES:
            parent = enclosing[-1] if enclosing else None
            rec_index[id(node)] = len(records)
            records.append((node, len(chain) - 1, -1, parent))
            enclosing.append(node)
        if table.closure(key) is not None:
            stack.append((node, True))
        children = list(iter_children(node))
        for child in reversed(children):
            stack.append((child, False))
    return tuple(chain), records


def fingerprint_source(
    source: str,
    table: LabelTable | None = None,
    resource_id: str = "<memory>",
) -> FileFingerprint:
    """Parse and fingerprint one JavaScript source.

    Raises ParseError when the source does not parse; callers ingesting a
    corpus catch it and record the resource as unfingerprintable.
    """
    if table is None:
        table = default_table()
    tree = parse(source)
    chain, records = fingerprint_tree(tree, table)
    byte_of = _byte_offsets(source)
    source_bytes = len(source) if byte_of is None else byte_of[len(source)]

    def to_bytes(char_offset: int) -> int:
        return char_offset if byte_of is None else byte_of[char_offset]

    root_id = hash_chain(chain)
    root = AstFingerprint(
        id=root_id, node_type="Program", span=(0, source_bytes),
        chain_slice=(0, len(chain)), parent_id=None,
    )
    id_by_node: dict[int, str] = {}
    for node, start, end, _parent in records:
        id_by_node[id(node)] = hash_chain(chain[start:end])
    nested = []
    for node, start, end, parent in records:
        nested.append(AstFingerprint(
            id=id_by_node[id(node)],
            node_type=node["type"],
            span=(to_bytes(node["start"]), to_bytes(node["end"])),
            chain_slice=(start, end - start),
            parent_id=root_id if parent is None else id_by_node[id(parent)],
        ))
    return FileFingerprint(
        resource_id=resource_id, root=root,
        nested=frozenset(nested), root_chain=chain,
    )


def chain_digest(fp: FileFingerprint) -> str:
    """Integrity checksum of the full root chain (sha256, not the id hash)."""
    return hashlib.sha256(encode_chain(fp.root_chain)).hexdigest()


def fingerprint_record(fp: FileFingerprint) -> dict:
    """JSON-lines record for one resource, in the on-disk schema."""
    return {
        "resource_id": fp.resource_id,
        "root_id": fp.root.id,
        "nested": [
            {
                "id": n.id,
                "node_type": n.node_type,
                "byte_start": n.span[0],
                "byte_end": n.span[1],
                "parent_id": n.parent_id,
            }
            for n in sorted(fp.nested, key=lambda n: (n.span, n.id))
        ],
        "chain_digest": chain_digest(fp),
    }


def write_records(records, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        for record in records:
            fh.write(json.dumps(record, sort_keys=False) + "\n")


def read_records(path) -> list[dict]:
    out = []
    with open(path, "r", encoding="utf-8") as fh:
        for line in fh:
            line = line.strip()
            if line:
                out.append(json.loads(line))
    return out


def record_ids(record: dict) -> set[str]:
    """Every AST id a serialized resource contributes to the graph."""
    return {record["root_id"]} | {n["id"] for n in record["nested"]}


__all__ = [
    "AstFingerprint", "FileFingerprint", "FUNCTION_TYPES", "ParseError",
    "build_chain", "chain_digest", "check_balanced", "encode_chain",
    "fingerprint_record", "fingerprint_source", "fingerprint_tree",
    "hash_chain", "iter_children", "read_records", "record_ids",
    "type_key", "write_records",
]
