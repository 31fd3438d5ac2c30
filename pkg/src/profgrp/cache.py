"""On-disk JSON cache for computed cells, keyed by a content hash."""

from __future__ import annotations

import hashlib
import json
import os
from pathlib import Path
from typing import Callable

import numpy as np

DEFAULT_DIR = ".profgrp-cache"


def default_cache_dir() -> Path:
    return Path(os.environ.get("PROFGRP_CACHE_DIR", DEFAULT_DIR))


def content_key(*parts) -> str:
    """sha256 over a canonical JSON rendering of ``parts``."""
    blob = json.dumps(parts, sort_keys=True, separators=(",", ":"), default=str)
    return hashlib.sha256(blob.encode()).hexdigest()


class ResultCache:
    """Cells are JSON-serialisable values stored one file per key.

    Every cell computed or read through :meth:`cell` during the lifetime of
    the object is remembered with its recipe, so :meth:`audit` can recompute
    a random sample and compare.
    """

    def __init__(self, directory: str | Path | None = None, enabled: bool = True):
        self.directory = Path(directory) if directory is not None else default_cache_dir()
        self.enabled = enabled
        self.hits = 0
        self.misses = 0
        self._recipes: dict[str, Callable[[], object]] = {}

    def _path(self, key: str) -> Path:
        return self.directory / key[:2] / f"{key}.json"

    def get(self, key: str):
        if not self.enabled:
            return None
        path = self._path(key)
        if not path.exists():
            return None
        with open(path) as fh:
            return json.load(fh)["value"]

    def put(self, key: str, value) -> None:
        if not self.enabled:
            return
        path = self._path(key)
        path.parent.mkdir(parents=True, exist_ok=True)
        tmp = path.with_suffix(".tmp")
        with open(tmp, "w") as fh:
            json.dump({"key": key, "value": value}, fh, sort_keys=True)
        os.replace(tmp, path)

    def invalidate(self, key: str) -> None:
        path = self._path(key)
        if path.exists():
            path.unlink()

    def cell(self, key: str, compute: Callable[[], object]):
        self._recipes[key] = compute
        value = self.get(key)
        if value is not None:
            self.hits += 1
            return value
        self.misses += 1
        value = compute()
        self.put(key, value)
        return value

    def audit(self, count: int = 10, seed: int = 0) -> list[dict]:
        """Invalidate up to ``count`` random cells seen so far, recompute them
        and compare with the stored values."""
        keys = sorted(self._recipes)
        if not keys or not self.enabled:
            return []
        rng = np.random.default_rng(seed)
        picked = rng.choice(len(keys), size=min(count, len(keys)), replace=False)
        out = []
        for i in sorted(picked):
            key = keys[i]
            stored = self.get(key)
            self.invalidate(key)
            fresh = self._recipes[key]()
            self.put(key, fresh)
            out.append({"key": key, "match": stored == fresh})
        return out
