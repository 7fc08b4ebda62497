"""Minimal TOML reader covering the scenario-file subset.

The runtime this package targets ships neither a stdlib TOML module nor one
from its package index, so scenario files are parsed here. Supported syntax:

  - comments (#) and blank lines
  - [table] and [table.sub] headers, [[array-of-tables]] headers
  - key = value with string ("..."), boolean, integer, float, and
    (possibly nested) homogeneous array values

which is exactly what the committed scenario files use. Anything outside
the subset (inline tables, dotted keys, multiline strings, dates) raises
TomlError with a line number. Duplicate keys and redefined tables are
errors, matching standard TOML semantics.
"""

from __future__ import annotations


class TomlError(ValueError):
    pass


def loads(text: str) -> dict:
    root: dict = {}
    current = root
    lines = text.splitlines()
    i = 0
    while i < len(lines):
        lineno = i + 1
        line = _strip_comment(lines[i], lineno).strip()
        i += 1
        if not line:
            continue
        # arrays may span lines: join until brackets balance
        if "=" in line and not line.startswith("["):
            while _open_brackets(line) > 0:
                if i >= len(lines):
                    raise TomlError(f"line {lineno}: unterminated array")
                line += " " + _strip_comment(lines[i], i + 1).strip()
                i += 1
        if line.startswith("[["):
            if not line.endswith("]]"):
                raise TomlError(f"line {lineno}: malformed table array header")
            path = _split_key_path(line[2:-2].strip(), lineno)
            parent = _descend(root, path[:-1], lineno)
            arr = parent.setdefault(path[-1], [])
            if not isinstance(arr, list):
                raise TomlError(f"line {lineno}: {'.'.join(path)} is not a table array")
            current = {}
            arr.append(current)
        elif line.startswith("["):
            if not line.endswith("]"):
                raise TomlError(f"line {lineno}: malformed table header")
            path = _split_key_path(line[1:-1].strip(), lineno)
            parent = _descend(root, path[:-1], lineno)
            last = path[-1]
            if last in parent:
                existing = parent[last]
                if isinstance(existing, list):
                    raise TomlError(f"line {lineno}: {'.'.join(path)} already a table array")
                if not isinstance(existing, dict) or existing:
                    raise TomlError(f"line {lineno}: table {'.'.join(path)} redefined")
                current = existing
            else:
                current = {}
                parent[last] = current
        else:
            if "=" not in line:
                raise TomlError(f"line {lineno}: expected key = value")
            key, _, rest = line.partition("=")
            key = key.strip()
            if not key or not _is_bare_key(key):
                raise TomlError(f"line {lineno}: bad key {key!r}")
            if key in current:
                raise TomlError(f"line {lineno}: duplicate key {key!r}")
            value, remainder = _parse_value(rest.strip(), lineno)
            if remainder.strip():
                raise TomlError(f"line {lineno}: trailing content {remainder!r}")
            current[key] = value
    return root


def _open_brackets(line: str) -> int:
    depth = 0
    in_str = False
    for ch in line:
        if ch == '"':
            in_str = not in_str
        elif not in_str:
            if ch == "[":
                depth += 1
            elif ch == "]":
                depth -= 1
    return depth


def _strip_comment(line: str, lineno: int) -> str:
    out = []
    in_str = False
    for ch in line:
        if ch == '"':
            in_str = not in_str
        if ch == "#" and not in_str:
            break
        out.append(ch)
    if in_str:
        raise TomlError(f"line {lineno}: unterminated string")
    return "".join(out)


def _is_bare_key(key: str) -> bool:
    return all(c.isalnum() or c in "_-" for c in key)


def _split_key_path(text: str, lineno: int) -> list:
    parts = [p.strip() for p in text.split(".")]
    if not parts or any(not p or not _is_bare_key(p) for p in parts):
        raise TomlError(f"line {lineno}: bad table name {text!r}")
    return parts


def _descend(root: dict, path: list, lineno: int) -> dict:
    node = root
    for part in path:
        nxt = node.setdefault(part, {})
        if isinstance(nxt, list):
            nxt = nxt[-1]
        if not isinstance(nxt, dict):
            raise TomlError(f"line {lineno}: {part!r} is not a table")
        node = nxt
    return node


def _parse_value(text: str, lineno: int):
    if not text:
        raise TomlError(f"line {lineno}: missing value")
    if text[0] == '"':
        end = text.find('"', 1)
        while end != -1 and text[end - 1] == "\\":
            end = text.find('"', end + 1)
        if end == -1:
            raise TomlError(f"line {lineno}: unterminated string")
        body = text[1:end].replace('\\"', '"').replace("\\\\", "\\")
        return body, text[end + 1:]
    if text[0] == "[":
        items = []
        rest = text[1:].lstrip()
        while True:
            if not rest:
                raise TomlError(f"line {lineno}: unterminated array")
            if rest[0] == "]":
                return items, rest[1:]
            value, rest = _parse_value(rest, lineno)
            items.append(value)
            rest = rest.lstrip()
            if rest.startswith(","):
                rest = rest[1:].lstrip()
            elif not rest.startswith("]"):
                raise TomlError(f"line {lineno}: expected ',' or ']' in array")
    # scalar token: ends at comma/bracket/whitespace
    idx = 0
    while idx < len(text) and text[idx] not in ",]":
        idx += 1
    token = text[:idx].strip()
    rest = text[idx:]
    if token == "true":
        return True, rest
    if token == "false":
        return False, rest
    try:
        if any(c in token for c in ".eE") and not token.lstrip("+-").isdigit():
            return float(token), rest
        return int(token), rest
    except ValueError:
        raise TomlError(f"line {lineno}: cannot parse value {token!r}") from None
