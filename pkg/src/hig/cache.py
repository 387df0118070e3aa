"""On-disk cache for per-n structure tables.

Entries live under ``<root>/v<FORMAT_VERSION>/n<n>/<table>.json`` and hold the
payload text together with its SHA-256 checksum.  Writes go to a temporary
file in the same directory followed by an atomic rename.  An entry whose
checksum or format does not match is recomputed (and overwritten) with a
warning.
"""

from __future__ import annotations

import hashlib
import json
import os
import tempfile
import warnings
from fractions import Fraction
from pathlib import Path

from .scalars import Scalar

FORMAT_VERSION = 1
ENV_VAR = "HIG_CACHE_DIR"


class CacheWarning(UserWarning):
    pass


def default_cache_dir() -> Path:
    base = os.environ.get("XDG_CACHE_HOME") or os.path.join(os.path.expanduser("~"), ".cache")
    return Path(base) / "hig"


def resolve_cache_dir(flag: str | None = None, no_cache: bool = False) -> Path | None:
    """``--cache-dir`` beats ``HIG_CACHE_DIR`` beats the default; ``--no-cache`` disables."""
    if no_cache:
        return None
    if flag:
        return Path(flag)
    env = os.environ.get(ENV_VAR)
    if env:
        return Path(env)
    return default_cache_dir()


# payload encoding --------------------------------------------------------------

def _frac(q: Fraction):
    return [str(q.numerator), str(q.denominator)]


def encode(obj):
    """Tagged JSON-compatible form of nested tables of Scalars/Fractions."""
    if isinstance(obj, Scalar):
        return {"S": [[_frac(c) for c in obj.num], obj.shift, [_frac(c) for c in obj.den]]}
    if isinstance(obj, (bool, int, str)):
        return obj
    if isinstance(obj, Fraction):
        return {"F": _frac(obj)}
    if isinstance(obj, tuple):
        return {"T": [encode(x) for x in obj]}
    if isinstance(obj, list):
        return [encode(x) for x in obj]
    if isinstance(obj, dict):
        return {"D": [[encode(k), encode(v)] for k, v in obj.items()]}
    raise TypeError(f"cannot cache {type(obj).__name__}")


def _unfrac(p):
    return Fraction(int(p[0]), int(p[1]))


def decode(obj):
    if isinstance(obj, list):
        return [decode(x) for x in obj]
    if isinstance(obj, dict):
        (tag, val), = obj.items()
        if tag == "S":
            num, shift, den = val
            if not num:
                return Scalar(0)
            return Scalar.from_parts([_unfrac(c) for c in num], [_unfrac(c) for c in den], shift)
        if tag == "F":
            return _unfrac(val)
        if tag == "T":
            return tuple(decode(x) for x in val)
        if tag == "D":
            return {decode(k): decode(v) for k, v in val}
        raise ValueError(f"unknown tag {tag!r}")
    return obj


def payload_text(table) -> str:
    return json.dumps(encode(table), separators=(",", ":"))


def checksum(text: str) -> str:
    return hashlib.sha256(text.encode("utf-8")).hexdigest()


class DiskCache:
    """Table cache rooted at ``root``; pass an instance to ``set_default_cache``."""

    def __init__(self, root, version: int = FORMAT_VERSION):
        self.root = Path(root)
        self.version = version
        self.hits = 0
        self.misses = 0

    def path(self, n: int, name: str) -> Path:
        return self.root / f"v{self.version}" / f"n{n}" / f"{name}.json"

    def load_text(self, n: int, name: str) -> str | None:
        """Validated payload text, or None when absent, stale or corrupt."""
        p = self.path(n, name)
        if not p.exists():
            return None
        try:
            entry = json.loads(p.read_text(encoding="utf-8"))
            if entry.get("format_version") != self.version or entry.get("n") != n or entry.get("table") != name:
                raise ValueError("header mismatch")
            text = entry["payload"]
            if checksum(text) != entry["checksum"]:
                raise ValueError("checksum mismatch")
            return text
        except (OSError, ValueError, KeyError, TypeError) as exc:
            warnings.warn(f"corrupt cache entry {p} ({exc}); recomputing", CacheWarning, stacklevel=3)
            return None

    def store_text(self, n: int, name: str, text: str) -> None:
        p = self.path(n, name)
        entry = {"format_version": self.version, "n": n, "table": name, "checksum": checksum(text), "payload": text}
        try:
            p.parent.mkdir(parents=True, exist_ok=True)
            fd, tmp = tempfile.mkstemp(prefix=f".{name}.", suffix=".tmp", dir=p.parent)
            try:
                with os.fdopen(fd, "w", encoding="utf-8") as fh:
                    json.dump(entry, fh)
                    fh.flush()
                    os.fsync(fh.fileno())
                os.replace(tmp, p)
            except BaseException:
                if os.path.exists(tmp):
                    os.unlink(tmp)
                raise
        except OSError as exc:
            warnings.warn(f"could not write cache entry {p}: {exc}", CacheWarning, stacklevel=3)

    def fetch(self, n: int, name: str, builder):
        text = self.load_text(n, name)
        if text is not None:
            try:
                table = decode(json.loads(text))
                self.hits += 1
                return table
            except (ValueError, TypeError, KeyError) as exc:
                warnings.warn(f"undecodable cache entry {self.path(n, name)} ({exc}); recomputing",
                              CacheWarning, stacklevel=2)
        self.misses += 1
        table = builder()
        self.store_text(n, name, payload_text(table))
        return table

    def verify(self, n: int, name: str, builder) -> bool:
        """True iff the stored payload is byte-identical to a fresh recomputation."""
        text = self.load_text(n, name)
        return text is not None and text == payload_text(builder())

    def entries(self):
        base = self.root / f"v{self.version}"
        return sorted(base.glob("n*/*.json")) if base.exists() else []


__all__ = ["DiskCache", "CacheWarning", "FORMAT_VERSION", "ENV_VAR", "resolve_cache_dir",
           "default_cache_dir", "encode", "decode", "payload_text", "checksum"]
