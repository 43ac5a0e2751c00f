"""Content-addressed JSON cache with atomic writes."""
from __future__ import annotations

import hashlib
import json
import os
import tempfile
from dataclasses import asdict, dataclass
from pathlib import Path

__all__ = ["ENGINE_VERSION", "CACHE_ENV", "CacheError", "CacheCorrupt", "CacheKey", "Cache", "relation_hash"]

ENGINE_VERSION = "1"
CACHE_ENV = "CPCALC_CACHE_DIR"


class CacheError(RuntimeError):
    pass


class CacheCorrupt(CacheError):
    pass


@dataclass(frozen=True)
class CacheKey:
    kind: str
    N: int
    degree: int
    mode: str
    fingerprint: str
    relation_hash: str
    engine_version: str = ENGINE_VERSION

    def digest(self) -> str:
        blob = json.dumps(asdict(self), sort_keys=True).encode()
        return hashlib.sha256(blob).hexdigest()[:32]


def relation_hash(obj) -> str:
    blob = json.dumps(obj, sort_keys=True, default=str).encode()
    return hashlib.sha256(blob).hexdigest()[:16]


class Cache:
    """Entries live in ``<root>/<digest>.json`` as {"key": ..., "payload": ...}.

    A root of None disables caching.
    """

    def __init__(self, root=None):
        self.root = Path(root) if root else None
        self.events: list = []

    def path(self, key: CacheKey) -> Path:
        return self.root / f"{key.digest()}.json"

    def get(self, key: CacheKey):
        if self.root is None:
            return None
        p = self.path(key)
        if not p.exists():
            return None
        try:
            entry = json.loads(p.read_text())
        except (OSError, ValueError) as exc:
            raise CacheCorrupt(f"unreadable cache entry {p.name}: {exc}") from exc
        if not isinstance(entry, dict) or entry.get("key") != asdict(key) or "payload" not in entry:
            raise CacheCorrupt(f"cache entry {p.name} does not match its key")
        return entry["payload"]

    def put(self, key: CacheKey, payload) -> None:
        if self.root is None:
            return
        try:
            self.root.mkdir(parents=True, exist_ok=True)
            fd, tmp = tempfile.mkstemp(dir=self.root, prefix=".tmp-", suffix=".json")
            with os.fdopen(fd, "w") as fh:
                json.dump({"key": asdict(key), "payload": payload}, fh, sort_keys=True)
                fh.flush()
                os.fsync(fh.fileno())
            os.replace(tmp, self.path(key))
        except OSError as exc:
            raise CacheError(f"cannot write cache entry: {exc}") from exc

    def fetch(self, key: CacheKey, build):
        """Payload for ``key``, building and storing it on a miss.

        A corrupt entry is rebuilt and recorded in ``events``; the caller
        decides how to surface it.
        """
        try:
            hit = self.get(key)
        except CacheCorrupt as exc:
            self.events.append(str(exc))
            hit = None
        if hit is not None:
            return hit
        payload = build()
        self.put(key, payload)
        return payload
