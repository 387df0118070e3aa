import json
import os
import warnings
from fractions import Fraction

import pytest

from hig.cache import (ENV_VAR, FORMAT_VERSION, CacheWarning, DiskCache, checksum, decode, encode,
                       payload_text, resolve_cache_dir)
from hig.scalars import PI, Scalar
from hig.valuations import ValAlgebra


def test_encode_decode_round_trip():
    table = {"a": [(1, Fraction(2, 3)), [PI / (PI + 1), Scalar(0)]], (0, 1): True}
    assert decode(json.loads(payload_text(table))) == table
    with pytest.raises(TypeError):
        encode(object())


def test_resolution_precedence(tmp_path, monkeypatch):
    monkeypatch.setenv(ENV_VAR, str(tmp_path / "env"))
    assert resolve_cache_dir() == tmp_path / "env"
    assert resolve_cache_dir(str(tmp_path / "flag")) == tmp_path / "flag"
    assert resolve_cache_dir(str(tmp_path / "flag"), no_cache=True) is None
    monkeypatch.delenv(ENV_VAR)
    monkeypatch.setenv("XDG_CACHE_HOME", str(tmp_path / "xdg"))
    assert resolve_cache_dir() == tmp_path / "xdg" / "hig"


def test_hit_is_identical_to_recomputation(tmp_path):
    c1 = DiskCache(tmp_path)
    a1 = ValAlgebra(2, cache=c1)
    g1 = a1.gram_inverse("prim")
    assert c1.misses > 0 and c1.hits == 0
    c2 = DiskCache(tmp_path)
    a2 = ValAlgebra(2, cache=c2)
    assert a2.gram_inverse("prim") == g1
    assert c2.hits > 0 and c2.misses == 0
    fresh = ValAlgebra(2)
    for name, builder in [("gram-inv-prim", lambda: fresh.gram_inverse("prim")),
                          ("reduction", fresh._build_reduction), ("mult", fresh._build_mult)]:
        assert c2.verify(2, name, builder)
        assert c2.load_text(2, name) == payload_text(builder())


def test_entry_layout(tmp_path):
    c = DiskCache(tmp_path)
    c.fetch(3, "demo", lambda: [Fraction(1, 3)])
    p = tmp_path / f"v{FORMAT_VERSION}" / "n3" / "demo.json"
    entry = json.loads(p.read_text())
    assert entry["format_version"] == FORMAT_VERSION and entry["n"] == 3 and entry["table"] == "demo"
    assert entry["checksum"] == checksum(entry["payload"])
    assert c.entries() == [p]
    # no temporary files left behind
    assert sorted(os.listdir(p.parent)) == ["demo.json"]


@pytest.mark.parametrize("damage", ["garbage", "checksum", "header", "payload"])
def test_corrupt_entry_is_recomputed_with_warning(tmp_path, damage):
    c = DiskCache(tmp_path)
    c.fetch(1, "demo", lambda: [1, 2])
    p = c.path(1, "demo")
    entry = json.loads(p.read_text())
    if damage == "garbage":
        p.write_text("{not json")
    elif damage == "checksum":
        entry["checksum"] = "0" * 64
        p.write_text(json.dumps(entry))
    elif damage == "header":
        entry["n"] = 7
        p.write_text(json.dumps(entry))
    else:
        entry["payload"] = '{"Q": 1}'
        entry["checksum"] = checksum(entry["payload"])
        p.write_text(json.dumps(entry))
    c2 = DiskCache(tmp_path)
    with pytest.warns(CacheWarning):
        assert c2.fetch(1, "demo", lambda: [1, 2]) == [1, 2]
    assert c2.misses == 1
    # overwritten with a valid entry
    with warnings.catch_warnings():
        warnings.simplefilter("error")
        assert DiskCache(tmp_path).load_text(1, "demo") == payload_text([1, 2])


def test_version_bump_invalidates(tmp_path):
    DiskCache(tmp_path, version=1).fetch(1, "demo", lambda: [1])
    c2 = DiskCache(tmp_path, version=2)
    calls = []
    c2.fetch(1, "demo", lambda: calls.append(1) or [1])
    assert calls == [1] and c2.misses == 1
    # a v1 file copied into the v2 slot is stale, not silently reused
    src = DiskCache(tmp_path, version=1).path(1, "demo")
    c2.path(1, "other").write_text(src.read_text().replace('"table": "demo"', '"table": "other"'))
    with pytest.warns(CacheWarning):
        assert c2.load_text(1, "other") is None


def test_failed_write_leaves_no_partial_file(tmp_path, monkeypatch):
    c = DiskCache(tmp_path)

    def boom(*a, **k):
        raise OSError("disk full")

    monkeypatch.setattr(os, "replace", boom)
    with pytest.warns(CacheWarning):
        c.store_text(1, "demo", "[]")
    assert not c.path(1, "demo").exists()
    assert not any(p.name.endswith(".tmp") for p in c.path(1, "demo").parent.iterdir())
