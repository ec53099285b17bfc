"""Source discovery and ``#include`` extraction.

No preprocessing happens here: conditionals are not evaluated, so includes
from every branch are collected. ``//`` and ``/* */`` comments are blanked
before matching (string and character literals are respected so that a
``"/*"`` inside a literal does not open a comment). Raw strings and
trigraphs are not handled.
"""

from __future__ import annotations

import enum
import logging
import os
import re
from dataclasses import dataclass, field
from pathlib import Path

from .errors import ConfigurationError

log = logging.getLogger(__name__)

DEFAULT_EXTENSIONS = frozenset({".h", ".cpp"})


class Delimiter(str, enum.Enum):
    QUOTED = "QUOTED"
    ANGLED = "ANGLED"
    MACRO = "MACRO"  # `#include SOME_MACRO`, never resolvable


@dataclass(frozen=True)
class RepoSpec:
    name: str
    root: str
    extensions: frozenset = DEFAULT_EXTENSIONS
    exclude_dirs: frozenset = frozenset()
    include_dirs: tuple = ()
    mapping_file: str | None = None

    def __post_init__(self):
        if not self.name:
            raise ConfigurationError("repository name must be non-empty")
        exts = frozenset(self.extensions)
        if not exts:
            raise ConfigurationError(f"{self.name}: extensions must be non-empty")
        bad = sorted(e for e in exts if not e.startswith("."))
        if bad:
            raise ConfigurationError(f"{self.name}: extensions must start with '.': {bad}")
        object.__setattr__(self, "extensions", exts)
        object.__setattr__(self, "exclude_dirs", frozenset(self.exclude_dirs))
        object.__setattr__(self, "root", os.path.abspath(os.fspath(self.root)))
        object.__setattr__(self, "include_dirs", tuple(self.include_dirs))


@dataclass(frozen=True, order=True)
class RawInclude:
    including_file: str
    line: int
    directive_text: str = field(compare=False)
    delimiter: Delimiter = field(compare=False)


def check_root(root) -> str:
    root = os.path.abspath(os.fspath(root))
    if not os.path.isdir(root):
        raise ConfigurationError(f"repository root does not exist or is not a directory: {root}")
    if not os.access(root, os.R_OK | os.X_OK):
        raise ConfigurationError(f"repository root is not readable: {root}")
    return root


def scan_repo(spec: RepoSpec) -> list[str]:
    """Sorted absolute paths of every matching regular file under ``spec.root``."""
    root = check_root(spec.root)
    found = []

    def onerror(exc):
        log.warning("cannot list %s: %s", exc.filename, exc.strerror)

    for dirpath, dirnames, filenames in os.walk(root, onerror=onerror, followlinks=False):
        dirnames[:] = [
            d for d in dirnames
            if d not in spec.exclude_dirs and not os.path.islink(os.path.join(dirpath, d))
        ]
        for name in filenames:
            if os.path.splitext(name)[1] not in spec.extensions:
                continue
            full = os.path.join(dirpath, name)
            if os.path.islink(full) or not os.path.isfile(full):
                continue
            found.append(full)
    found.sort()
    return found


# Comment blanking: a small state machine over the whole text. Comment
# characters become spaces, newlines are kept so line numbers survive.
_CODE, _LINE_COMMENT, _BLOCK_COMMENT, _STRING, _CHAR = range(5)


def strip_comments(content: str) -> str:
    out = []
    state = _CODE
    i, n = 0, len(content)
    while i < n:
        c = content[i]
        nxt = content[i + 1] if i + 1 < n else ""
        if state == _CODE:
            if c == "/" and nxt == "/":
                state = _LINE_COMMENT
                out.append("  ")
                i += 2
                continue
            if c == "/" and nxt == "*":
                state = _BLOCK_COMMENT
                out.append("  ")
                i += 2
                continue
            if c == '"':
                state = _STRING
            elif c == "'":
                state = _CHAR
            out.append(c)
        elif state == _LINE_COMMENT:
            if c == "\n":
                state = _CODE
                out.append(c)
            elif c == "\\" and nxt == "\n":
                # continued line comment
                out.append(" \n")
                i += 2
                continue
            else:
                out.append(" ")
        elif state == _BLOCK_COMMENT:
            if c == "*" and nxt == "/":
                state = _CODE
                out.append("  ")
                i += 2
                continue
            out.append("\n" if c == "\n" else " ")
        else:
            quote = '"' if state == _STRING else "'"
            if c == "\\" and nxt:
                out.append(c + nxt)
                i += 2
                continue
            if c == quote or c == "\n":
                # an unterminated literal ends at the line break
                state = _CODE
            out.append(c)
        i += 1
    return "".join(out)


_INCLUDE_RE = re.compile(r"^[ \t]*#[ \t]*include(?![A-Za-z0-9_])[ \t]*(.*)$")
_QUOTED_RE = re.compile(r'"([^"\n]+)"')
_ANGLED_RE = re.compile(r"<([^>\n]+)>")
_MACRO_RE = re.compile(r"([A-Za-z_][A-Za-z0-9_]*)")


def _parse_operand(rest: str):
    if rest.startswith('"'):
        m = _QUOTED_RE.match(rest)
        return (m.group(1), Delimiter.QUOTED) if m else None
    if rest.startswith("<"):
        m = _ANGLED_RE.match(rest)
        return (m.group(1), Delimiter.ANGLED) if m else None
    m = _MACRO_RE.match(rest)
    return (m.group(1), Delimiter.MACRO) if m else None


def extract_includes(file_path, content: str) -> list[RawInclude]:
    """Every ``#include`` directive in ``content``, in source order."""
    file_path = os.fspath(file_path)
    result = []
    for lineno, line in enumerate(strip_comments(content).split("\n"), start=1):
        m = _INCLUDE_RE.match(line)
        if not m:
            continue
        parsed = _parse_operand(m.group(1))
        if parsed is None:
            log.debug("%s:%d: malformed include ignored", file_path, lineno)
            continue
        text, delim = parsed
        result.append(RawInclude(file_path, lineno, text, delim))
    return result


def read_source(path) -> str | None:
    """File contents as text, undecodable bytes replaced; None if unreadable."""
    try:
        data = Path(path).read_bytes()
    except OSError as exc:
        log.warning("cannot read %s: %s", path, exc.strerror)
        return None
    return data.decode("utf-8", errors="replace")


def extract_file(path) -> list[RawInclude]:
    content = read_source(path)
    if content is None:
        return []
    return extract_includes(path, content)
