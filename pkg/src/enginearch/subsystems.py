"""Subsystem vocabulary, folder mapping files and file tagging."""

from __future__ import annotations

import csv
import io
import os
from collections import Counter
from dataclasses import dataclass, field
from pathlib import Path, PurePosixPath

from .errors import ConfigurationError

# Canonical order; every ordered output in the package follows it.
SUBSYSTEMS: dict[str, str] = {
    "AUD": "Audio",
    "COR": "Core",
    "DEB": "Profiling and Debugging",
    "FES": "Front End",
    "GMP": "Gameplay Foundations",
    "HID": "Human Interface Devices",
    "LLR": "Low-Level Renderer",
    "OMP": "Online Multiplayer",
    "PHY": "Collision and Physics",
    "PLA": "Platform Independence Layer",
    "RES": "Resources",
    "SDK": "Third-party SDKs",
    "SGC": "Scene graph/culling optimizations",
    "SKA": "Skeletal Animation",
    "VFX": "Visual Effects",
    "EDI": "World Editor",
}
CODES: tuple[str, ...] = tuple(SUBSYSTEMS)
UNASSIGNED = "UNASSIGNED"

_RANK = {code: i for i, code in enumerate(CODES)}


def code_rank(code: str) -> int:
    """Position of ``code`` in canonical order; UNASSIGNED sorts last."""
    return _RANK.get(code, len(CODES))


def display_name(code: str) -> str:
    return SUBSYSTEMS[code]


def normalize_folder(folder: str) -> str:
    """Repo-relative folder key: ``/`` separators, no leading/trailing slash.

    The repository root itself is the empty string.
    """
    parts = [p for p in folder.strip().replace("\\", "/").split("/") if p not in ("", ".")]
    return "/".join(parts)


@dataclass(frozen=True)
class SubsystemMapping:
    entries: tuple[tuple[str, str], ...] = ()
    _lookup: dict = field(default=None, init=False, repr=False, compare=False)

    def __post_init__(self):
        seen = {}
        for folder, code in self.entries:
            if code not in SUBSYSTEMS:
                raise ConfigurationError(f"unknown subsystem code {code!r} for folder {folder!r}")
            if folder in seen:
                raise ConfigurationError(f"duplicate folder {folder!r} in mapping")
            seen[folder] = code
        object.__setattr__(self, "_lookup", seen)

    def __len__(self):
        return len(self.entries)

    def lookup(self, rel_path: str) -> str:
        """Longest componentwise prefix match of a repo-relative path."""
        parts = PurePosixPath(rel_path).parts
        for n in range(len(parts), -1, -1):
            code = self._lookup.get("/".join(parts[:n]))
            if code is not None:
                return code
        return UNASSIGNED


def parse_mapping(text: str, source: str = "<mapping>") -> SubsystemMapping:
    """Parse mapping-file text (header ``folder,subsystem``)."""
    rows = []
    header_seen = False
    first_row: dict[str, int] = {}
    for lineno, line in enumerate(io.StringIO(text), start=1):
        stripped = line.strip()
        if not stripped or stripped.startswith("#"):
            continue
        (fields,) = list(csv.reader([stripped]))
        if not header_seen:
            if [f.strip() for f in fields] != ["folder", "subsystem"]:
                raise ConfigurationError(
                    f"{source}:{lineno}: expected header 'folder,subsystem', got {stripped!r}"
                )
            header_seen = True
            continue
        if len(fields) != 2:
            raise ConfigurationError(f"{source}:{lineno}: expected 2 columns, got {len(fields)}")
        folder, code = normalize_folder(fields[0]), fields[1].strip()
        if code not in SUBSYSTEMS:
            raise ConfigurationError(f"{source}:{lineno}: unknown subsystem code {code!r}")
        if folder in first_row:
            raise ConfigurationError(
                f"{source}: duplicate folder {folder!r} on rows {first_row[folder]} and {lineno}"
            )
        first_row[folder] = lineno
        rows.append((folder, code))
    if not header_seen:
        raise ConfigurationError(f"{source}: missing header 'folder,subsystem'")
    return SubsystemMapping(tuple(rows))


def load_mapping(mapping_file) -> SubsystemMapping:
    path = Path(mapping_file)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise ConfigurationError(f"cannot read mapping file {path}: {exc.strerror}") from exc
    return parse_mapping(text, source=str(path))


def relative_to_root(file_path, repo_root) -> str:
    rel = os.path.relpath(os.fspath(file_path), os.fspath(repo_root))
    return rel.replace(os.sep, "/")


def assign_subsystem(file_path, repo_root, mapping: SubsystemMapping) -> str:
    rel = relative_to_root(file_path, repo_root)
    if rel == ".." or rel.startswith("../"):
        return UNASSIGNED
    return mapping.lookup(rel)


@dataclass(frozen=True)
class TaggedFile:
    path: str
    code: str


def tag_files(paths, repo_root, mapping: SubsystemMapping) -> list[TaggedFile]:
    return [TaggedFile(p, assign_subsystem(p, repo_root, mapping)) for p in paths]


@dataclass(frozen=True)
class CoverageReport:
    counts: dict[str, int]
    unassigned: int
    total: int

    @property
    def coverage(self) -> float:
        """Percentage of files that received a subsystem code."""
        if self.total == 0:
            return 100.0
        return 100.0 * (self.total - self.unassigned) / self.total

    @property
    def unassigned_pct(self) -> float:
        return 100.0 - self.coverage


def mapping_coverage(tagged) -> CoverageReport:
    counter = Counter(t.code for t in tagged)
    unassigned = counter.pop(UNASSIGNED, 0)
    counts = {code: counter[code] for code in CODES if counter[code]}
    return CoverageReport(counts=counts, unassigned=unassigned, total=sum(counts.values()) + unassigned)


def _name_matches(folder_name: str, code: str) -> bool:
    name = folder_name.lower().replace("_", " ").replace("-", " ")
    if len(name) < 3:
        return False
    display = SUBSYSTEMS[code].lower()
    if name == code.lower() or name in display:
        return True
    return any(len(word) >= 4 and word in name for word in display.replace("/", " ").split())


def suggest_mapping(folders) -> list[tuple[str, str]]:
    """Name-based guesses for repo-relative folders.

    Advisory only: a folder whose last component is a case-insensitive
    substring of a subsystem display name (or the other way round, per word)
    is suggested for the first such subsystem in canonical order.
    """
    out = []
    for folder in sorted({normalize_folder(f) for f in folders}):
        if not folder:
            continue
        leaf = folder.rsplit("/", 1)[-1]
        for code in CODES:
            if _name_matches(leaf, code):
                out.append((folder, code))
                break
    return out


def format_mapping(entries, comment: str | None = None) -> str:
    buf = io.StringIO()
    if comment:
        for line in comment.splitlines():
            buf.write(f"# {line}\n")
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["folder", "subsystem"])
    writer.writerows(entries)
    return buf.getvalue()
