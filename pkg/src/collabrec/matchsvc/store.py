"""Document persistence for the matching service.

A DocumentStore is a minimal get/put/scan interface over named
collections of JSON documents.  The file-backed implementation keeps one
file per document and writes through an atomic rename, so a crash can
lose at most the operation in flight, never corrupt an existing record.
Scans yield key-sorted entries in both implementations; callers rely on
that for reproducible corpus ordering.
"""

from __future__ import annotations

import json
import os
import re
import tempfile
from abc import ABC, abstractmethod
from pathlib import Path
from typing import Iterator

_KEY_RE = re.compile(r"^[A-Za-z0-9_.:@-]+$")


def _check_key(key: str) -> str:
    if not _KEY_RE.fullmatch(key):
        raise ValueError(f"illegal document key {key!r}")
    return key


class DocumentStore(ABC):
    @abstractmethod
    def get(self, collection: str, key: str) -> dict | None: ...

    @abstractmethod
    def put(self, collection: str, key: str, document: dict) -> None: ...

    @abstractmethod
    def scan(self, collection: str) -> Iterator[tuple[str, dict]]:
        """Yield (key, document) pairs in ascending key order."""

    def count(self, collection: str) -> int:
        return sum(1 for _ in self.scan(collection))


class MemoryDocumentStore(DocumentStore):
    """Ephemeral store for tests and library use."""

    def __init__(self):
        self._collections: dict[str, dict[str, dict]] = {}

    def get(self, collection, key):
        document = self._collections.get(collection, {}).get(_check_key(key))
        return json.loads(json.dumps(document)) if document is not None else None

    def put(self, collection, key, document):
        # round-trip through JSON so stored state is exactly what a
        # file-backed store would hold (tuples become lists, keys strings)
        self._collections.setdefault(collection, {})[_check_key(key)] = json.loads(
            json.dumps(document)
        )

    def scan(self, collection):
        for key in sorted(self._collections.get(collection, {})):
            yield key, self.get(collection, key)


class FileDocumentStore(DocumentStore):
    """One JSON file per document under root/<collection>/<key>.json."""

    def __init__(self, root: str | Path):
        self.root = Path(root)
        self.root.mkdir(parents=True, exist_ok=True)

    def _path(self, collection: str, key: str) -> Path:
        return self.root / collection / f"{_check_key(key)}.json"

    def get(self, collection, key):
        path = self._path(collection, key)
        try:
            with path.open(encoding="utf-8") as fh:
                return json.load(fh)
        except FileNotFoundError:
            return None

    def put(self, collection, key, document):
        path = self._path(collection, key)
        path.parent.mkdir(parents=True, exist_ok=True)
        payload = json.dumps(document, sort_keys=True, ensure_ascii=False)
        fd, tmp_name = tempfile.mkstemp(dir=path.parent, prefix=".tmp-", suffix=".json")
        try:
            with os.fdopen(fd, "w", encoding="utf-8") as fh:
                fh.write(payload)
            os.replace(tmp_name, path)
        except BaseException:
            try:
                os.unlink(tmp_name)
            except FileNotFoundError:
                pass
            raise

    def scan(self, collection):
        directory = self.root / collection
        if not directory.is_dir():
            return
        for path in sorted(directory.glob("*.json")):
            if path.name.startswith(".tmp-"):
                continue
            key = path.stem
            with path.open(encoding="utf-8") as fh:
                yield key, json.load(fh)


def dump_store(store: DocumentStore, collections: tuple[str, ...]) -> dict:
    """Stable snapshot of whole-store contents for state comparison."""
    return {
        collection: {key: document for key, document in store.scan(collection)}
        for collection in collections
    }
