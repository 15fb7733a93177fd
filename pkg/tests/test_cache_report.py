import io
import math
import struct

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from klooster.cache import CacheError, TableCache, decode, encode, read_table, spot_check, write_table
from klooster.kloosterman import kloosterman_table
from klooster.report import (
    REPORT_COLUMNS,
    ReportRow,
    csv_to_rows,
    fmt_real,
    json_to_rows,
    rows_to_csv,
    rows_to_json,
)


def test_klt1_layout(tmp_path):
    t = kloosterman_table(101)
    path = tmp_path / "t.klt"
    write_table(path, t)
    raw = path.read_bytes()
    assert len(raw) == 4 + 8 + 8 * 100
    assert raw[:4] == b"KLT1" and struct.unpack("<Q", raw[4:12])[0] == 101
    assert np.array_equal(np.frombuffer(raw[12:], "<f8"), t.values)
    assert np.array_equal(read_table(path).values, t.values)


@pytest.mark.parametrize(
    "mutate",
    [lambda b: b"KLT2" + b[4:], lambda b: b[:-8], lambda b: b[:6], lambda b: b[:4] + struct.pack("<Q", 103) + b[12:]],
)
def test_decode_rejects(mutate):
    with pytest.raises(CacheError):
        decode(mutate(encode(kloosterman_table(101))))


def test_spot_check(tmp_path):
    t = kloosterman_table(1009)
    assert spot_check(t) < 1e-12
    vals = t.values.copy()
    vals[:] += 1.0
    bad = decode(encode(t)[:12] + vals.astype("<f8").tobytes())
    assert spot_check(bad) > 1e-9


def test_cache_hit_and_repair(tmp_path):
    cache = TableCache(tmp_path)
    _, hit = cache.get(211)
    assert not hit and cache.path_for(211).exists()
    t, hit = cache.get(211)
    assert hit and np.array_equal(t.values, kloosterman_table(211).values)
    # corrupt file is recomputed, not trusted
    cache.path_for(211).write_bytes(b"garbage")
    _, hit = cache.get(211)
    assert not hit and read_table(cache.path_for(211)).p.p == 211


def test_cache_dir_from_environment(monkeypatch, tmp_path):
    monkeypatch.setenv("KLOOSTER_CACHE", str(tmp_path / "env"))
    assert TableCache().directory == tmp_path / "env"
    monkeypatch.delenv("KLOOSTER_CACHE")
    assert str(TableCache().directory) == ".klooster-cache"


finite = st.floats(allow_nan=False, allow_infinity=False)
rows = st.builds(
    ReportRow,
    p=st.integers(5, 10**6),
    k=st.integers(0, 60),
    kind=st.sampled_from(["signed", "abs", "katz", "weil"]),
    value=finite,
    predicted=st.none() | finite,
    residual=st.none() | finite,
    envelope_main=st.none() | finite,
    envelope_radius=st.none() | finite,
    passed=st.booleans(),
)


@settings(max_examples=200)
@given(st.lists(rows, max_size=8))
def test_csv_round_trip_is_byte_identical(rs):
    text = rows_to_csv(rs)
    assert rows_to_csv(csv_to_rows(text)) == text
    back = csv_to_rows(text)
    assert [r.value for r in back] == [r.value for r in rs]


@settings(max_examples=100)
@given(st.lists(rows, max_size=8))
def test_json_round_trip(rs):
    text = rows_to_json(rs)
    assert rows_to_json(json_to_rows(text)) == text


def test_csv_format():
    text = rows_to_csv([ReportRow(7, 2, "signed", 41.0, 41.0, 0.0, None, None, True)])
    assert text.splitlines() == [",".join(REPORT_COLUMNS), "7,2,signed,41,41,0,,,true"]
    assert fmt_real(0.1) == "0.10000000000000001" and fmt_real(None) == ""
    with pytest.raises(ValueError):
        csv_to_rows("a,b\n1,2\n")
