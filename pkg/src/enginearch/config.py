"""Corpus configuration files.

INI syntax, one ``[repo:<name>]`` section per repository plus an optional
``[corpus]`` section for run options::

    [corpus]
    output_dir = out
    pair_threshold = 6

    [repo:godot]
    root = repos/godot
    mapping = mappings/godot.csv
    exclude_dirs = thirdparty
    commit = f9ac000d5d

Relative paths are resolved against the directory holding the config file.
Keys other than the ones read here (``commit``, ``branch``, ...) are kept
as documentation and ignored.
"""

from __future__ import annotations

import configparser
import dataclasses
import os
from dataclasses import dataclass, field

from .errors import ConfigurationError
from .metrics import AveragingMode
from .scanner import DEFAULT_EXTENSIONS, RepoSpec


@dataclass
class Options:
    pair_threshold: int = 6
    inner_core_size: int = 4
    averaging: AveragingMode = AveragingMode.PRESENT_ONLY
    strict_resolve: bool = False
    normalize_centrality: bool = False
    include_unassigned: bool = False

    def __post_init__(self):
        if self.pair_threshold < 1:
            raise ConfigurationError(f"pair_threshold must be >= 1, got {self.pair_threshold}")
        if self.inner_core_size < 1:
            raise ConfigurationError(f"inner_core_size must be >= 1, got {self.inner_core_size}")
        try:
            self.averaging = AveragingMode(self.averaging)
        except ValueError:
            raise ConfigurationError(f"unknown averaging mode {self.averaging!r}") from None


@dataclass
class CorpusConfig:
    repos: list[RepoSpec] = field(default_factory=list)
    output_dir: str = "enginearch-out"
    options: Options = field(default_factory=Options)

    def __post_init__(self):
        names = [r.name for r in self.repos]
        dupes = sorted({n for n in names if names.count(n) > 1})
        if dupes:
            raise ConfigurationError(f"duplicate repository names: {', '.join(dupes)}")

    def repo(self, name: str) -> RepoSpec:
        for r in self.repos:
            if r.name == name:
                return r
        raise ConfigurationError(f"unknown repository {name!r}")

    def with_repo(self, spec: RepoSpec) -> "CorpusConfig":
        repos = [r for r in self.repos if r.name != spec.name] + [spec]
        return dataclasses.replace(self, repos=repos)


def _words(value: str) -> list[str]:
    return value.replace(",", " ").split()


def _path(base: str, value: str) -> str:
    return os.path.normpath(os.path.join(base, os.path.expanduser(value.strip())))


def parse_config(text: str, base_dir: str = ".", source: str = "<config>") -> CorpusConfig:
    parser = configparser.ConfigParser(inline_comment_prefixes=(";",), interpolation=None)
    try:
        parser.read_string(text, source=source)
    except configparser.Error as exc:
        raise ConfigurationError(f"{source}: {exc}") from exc

    repos = []
    for section in parser.sections():
        if section == "corpus":
            continue
        if not section.startswith("repo:"):
            raise ConfigurationError(f"{source}: unknown section [{section}]")
        sec = parser[section]
        name = section[len("repo:"):].strip()
        if "root" not in sec:
            raise ConfigurationError(f"{source}: [{section}] has no root")
        exts = _words(sec.get("extensions", "")) or sorted(DEFAULT_EXTENSIONS)
        repos.append(RepoSpec(
            name=name,
            root=_path(base_dir, sec["root"]),
            extensions=frozenset(exts),
            exclude_dirs=frozenset(_words(sec.get("exclude_dirs", ""))),
            include_dirs=tuple(_words(sec.get("include_dirs", ""))),
            mapping_file=_path(base_dir, sec["mapping"]) if sec.get("mapping") else None,
        ))

    corpus = parser["corpus"] if parser.has_section("corpus") else {}
    try:
        options = Options(
            pair_threshold=int(corpus.get("pair_threshold", 6)),
            inner_core_size=int(corpus.get("inner_core_size", 4)),
            averaging=corpus.get("averaging", AveragingMode.PRESENT_ONLY.value),
            strict_resolve=_bool(corpus.get("strict_resolve", "false")),
            normalize_centrality=_bool(corpus.get("normalize_centrality", "false")),
            include_unassigned=_bool(corpus.get("include_unassigned", "false")),
        )
    except ValueError as exc:
        raise ConfigurationError(f"{source}: [corpus]: {exc}") from exc
    output_dir = _path(base_dir, corpus.get("output_dir", "enginearch-out"))
    return CorpusConfig(repos=repos, output_dir=output_dir, options=options)


def _bool(value: str) -> bool:
    v = str(value).strip().lower()
    if v in {"1", "true", "yes", "on"}:
        return True
    if v in {"0", "false", "no", "off"}:
        return False
    raise ValueError(f"not a boolean: {value!r}")


def load_config(path) -> CorpusConfig:
    path = os.path.abspath(os.fspath(path))
    try:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise ConfigurationError(f"cannot read config {path}: {exc.strerror}") from exc
    return parse_config(text, base_dir=os.path.dirname(path), source=path)
