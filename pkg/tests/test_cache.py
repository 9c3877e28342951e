import struct

import pytest

from heckescope import cache
from heckescope.eigenform import build_form


def test_round_trip(tmp_path):
    t = build_form("k26", 500)
    path = cache.write_table(t, tmp_path / "t.hscf")
    raw = path.read_bytes()
    magic, version, weight, n_max, width = struct.unpack("<4sHHQB", raw[:17])
    assert (magic, version, weight, n_max) == (b"HSCF", 1, 26, 500)
    assert len(raw) == 17 + 500 * width
    back = cache.read_table(path)
    assert back.coeffs == t.coeffs and back.form == t.form
    assert cache.read_table(path, 100).coeffs == t.coeffs[:100]


def test_negative_values_two_complement(tmp_path):
    t = build_form("delta", 8)
    path = cache.write_table(t, tmp_path / "d.hscf")
    width = path.read_bytes()[16]
    assert width == 3  # largest |tau(n)| for n <= 8 is 84480, which needs 18 bits with the sign
    assert int.from_bytes(path.read_bytes()[17 + width:17 + 2 * width], "little", signed=True) == -24


def test_bad_files(tmp_path):
    bad = tmp_path / "bad.hscf"
    bad.write_bytes(b"XXXX" + bytes(13))
    with pytest.raises(cache.CacheFormatError):
        cache.read_table(bad)
    bad.write_bytes(b"HS")
    with pytest.raises(cache.CacheFormatError):
        cache.read_header(bad)
    t = build_form("delta", 50)
    path = cache.write_table(t, tmp_path / "ok.hscf")
    with pytest.raises(cache.CacheFormatError):
        cache.read_table(path, 51)
    path.write_bytes(path.read_bytes()[:-1])
    with pytest.raises(cache.CacheFormatError):
        cache.read_table(path)


def test_load_or_build_reuses_larger(tmp_path):
    big = cache.load_or_build("delta", 1000, tmp_path)
    assert (tmp_path / "delta_k12_n1000.hscf").exists()
    small = cache.load_or_build("delta", 300, tmp_path)
    assert small.coeffs == big.coeffs[:300]
    assert sorted(p.name for p in tmp_path.iterdir()) == ["delta_k12_n1000.hscf"]
    cache.load_or_build("delta", 2000, tmp_path)
    assert (tmp_path / "delta_k12_n2000.hscf").exists()
    assert cache.load_or_build("k16", 10, None).coeffs[:2] == (1, 216)
