"""Load the built-in corpus: packaged sources plus YAML expectations."""

from pathlib import Path
from typing import Literal

import yaml
from pydantic import BaseModel, Field, PrivateAttr, field_validator

from biconf.analysis.classify import TIERS
from biconf.core.errors import UnknownEntry
from biconf.core.tensor_registry import get_registry
from biconf.core.types import TierStatus
from biconf.dsl.ast import ManifoldSpec
from biconf.dsl.parser import parse_manifold

CORPUS_DIR = Path(__file__).parent
CORPUS_FILE = CORPUS_DIR / "corpus.yaml"


class RescalePair(BaseModel):
    z: str
    x: str


class CorpusEntry(BaseModel):
    """One corpus manifold with the results a correct build must report."""

    id: str
    source: str
    kind: Literal["literature", "trivial", "derived"]
    provenance: str
    citation: str = Field(min_length=1)
    tiers: dict[str, TierStatus] = Field(default_factory=dict)
    vanishing: list[str] = Field(default_factory=list)
    nonzero: dict[str, float] = Field(default_factory=dict)
    vectors: list[str] = Field(default_factory=list)
    rank: int | None = None
    finite: bool | None = None
    rescale: list[RescalePair] = Field(default_factory=list)

    _root: Path = PrivateAttr(default=CORPUS_DIR)

    @field_validator("tiers")
    @classmethod
    def _known_tiers(cls, value: dict[str, TierStatus]) -> dict[str, TierStatus]:
        unknown = sorted(set(value) - set(TIERS))
        if unknown:
            raise ValueError(f"unknown tiers: {', '.join(unknown)}")
        return value

    @field_validator("vanishing", "nonzero")
    @classmethod
    def _known_tensors(cls, value):
        registry = get_registry()
        unknown = sorted(t for t in value if registry.get_tensor(t) is None)
        if unknown:
            raise ValueError(f"unknown tensors: {', '.join(unknown)}")
        return value

    @property
    def path(self) -> Path:
        return self._root / "sources" / self.source

    def text(self) -> str:
        return self.path.read_text(encoding="utf-8")

    def spec(self) -> ManifoldSpec:
        return parse_manifold(self.text())


class Corpus(BaseModel):
    entries: list[CorpusEntry]

    def get(self, entry_id: str) -> CorpusEntry:
        for entry in self.entries:
            if entry.id == entry_id:
                return entry
        known = ", ".join(e.id for e in self.entries)
        raise UnknownEntry(f"no corpus entry '{entry_id}' (known: {known})")


def load_corpus(path: Path | None = None) -> Corpus:
    """Read a corpus file; source paths resolve against its directory.

    Entries come back sorted by id.
    """
    path = CORPUS_FILE if path is None else Path(path)
    with open(path, encoding="utf-8") as f:
        data = yaml.safe_load(f) or {}
    corpus = Corpus(**data)
    corpus.entries.sort(key=lambda entry: entry.id)
    for entry in corpus.entries:
        entry._root = path.parent
    return corpus
