"""Memo store for the recursion, with an optional on-disk cache.

One JSON file per key.  The header is checked against the key before the
payload is trusted; anything unreadable or mismatched is ignored and
recomputed, so the disk cache is purely advisory.
"""

from __future__ import annotations

import json
import logging
import os
import tempfile
import threading
from dataclasses import dataclass
from pathlib import Path
from typing import Callable, Dict, Optional, Union

from .serialize import terms_from_json, terms_to_json
from .series import BiSeries

log = logging.getLogger(__name__)

FORMAT_VERSION = "1"


@dataclass(frozen=True)
class MemoKey:
    n: int
    d_residue: int
    g: int
    cap: int
    # False when the degree is stored verbatim (shift-invariance checks)
    reduced: bool = True

    @classmethod
    def for_query(cls, n, d, g, cap, reduce_degree=True):
        return cls(n, d % n if reduce_degree else d, g, cap, reduce_degree)

    def filename(self) -> str:
        return f"F_n{self.n}_r{self.d_residue}_g{self.g}_cap{self.cap}.json"

    def header(self) -> dict:
        return {
            "n": self.n,
            "d_residue": self.d_residue,
            "g": self.g,
            "cap": self.cap,
            "format_version": FORMAT_VERSION,
        }


class MemoStore:
    """Thread-safe memo of computed series.

    Lookups and insertions hold a lock; the computation itself does not, so two
    threads may compute the same key concurrently.  Both produce identical
    series and the second insertion is a no-op.
    """

    def __init__(self, cache_dir: Union[str, os.PathLike, None] = None):
        self._data: Dict[MemoKey, BiSeries] = {}
        self._lock = threading.Lock()
        self.cache_dir = Path(cache_dir) if cache_dir else None
        self.disk_hits = 0
        self.disk_rejects = 0

    def __len__(self):
        with self._lock:
            return len(self._data)

    def __contains__(self, key):
        with self._lock:
            return key in self._data

    def clear(self):
        with self._lock:
            self._data.clear()

    def get(self, key: MemoKey) -> Optional[BiSeries]:
        with self._lock:
            hit = self._data.get(key)
        if hit is not None:
            return hit
        if self.cache_dir is not None and key.reduced:
            loaded = self._load(key)
            if loaded is not None:
                self.disk_hits += 1
                return self._insert(key, loaded)
        return None

    def put(self, key: MemoKey, value: BiSeries) -> BiSeries:
        stored = self._insert(key, value)
        if stored is value and self.cache_dir is not None and key.reduced:
            self._save(key, value)
        return stored

    def get_or_compute(self, key: MemoKey, compute: Callable[[], BiSeries]) -> BiSeries:
        hit = self.get(key)
        if hit is not None:
            return hit
        return self.put(key, compute())

    def _insert(self, key, value):
        with self._lock:
            return self._data.setdefault(key, value)

    def _path(self, key: MemoKey) -> Path:
        return self.cache_dir / key.filename()

    def _load(self, key: MemoKey) -> Optional[BiSeries]:
        path = self._path(key)
        if not path.exists():
            return None
        try:
            doc = json.loads(path.read_text())
            if doc.get("header") != key.header():
                raise ValueError(f"header {doc.get('header')!r} does not match {key}")
            return terms_from_json(doc["terms"], key.cap)
        except (OSError, ValueError, KeyError, TypeError) as exc:
            log.warning("rejecting cache file %s: %s", path, exc)
            self.disk_rejects += 1
            return None

    def _save(self, key: MemoKey, value: BiSeries) -> None:
        self.cache_dir.mkdir(parents=True, exist_ok=True)
        doc = {"header": key.header(), "terms": terms_to_json(value)}
        fd, tmp = tempfile.mkstemp(dir=self.cache_dir, suffix=".tmp")
        try:
            with os.fdopen(fd, "w") as fh:
                json.dump(doc, fh, sort_keys=True)
            os.replace(tmp, self._path(key))
        except OSError as exc:
            log.warning("could not write cache file for %s: %s", key, exc)
            try:
                os.unlink(tmp)
            except OSError:
                pass


default_store = MemoStore()
