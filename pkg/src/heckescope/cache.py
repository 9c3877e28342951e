"""On-disk coefficient tables.

Layout, little-endian::

    magic    4 bytes  b"HSCF"
    version  u16
    weight   u16
    n_max    u64
    width    u8       bytes per coefficient
    body     n_max fixed-width two's-complement integers a_f(1..n_max)
"""

from __future__ import annotations

import os
import re
import struct
from pathlib import Path

from .eigenform import EigenformTable, FormId, build_form, get_form

MAGIC = b"HSCF"
VERSION = 1
_HEADER = struct.Struct("<4sHHQB")


class CacheFormatError(ValueError):
    pass


def coefficient_width(coeffs) -> int:
    top = max(max(coeffs), -min(coeffs))
    # room for the sign bit
    return max(1, (top.bit_length() + 8) // 8)


def write_table(table: EigenformTable, path: str | os.PathLike) -> Path:
    path = Path(path)
    width = coefficient_width(table.coeffs)
    body = b"".join(c.to_bytes(width, "little", signed=True) for c in table.coeffs)
    tmp = path.with_suffix(path.suffix + ".tmp")
    with open(tmp, "wb") as fh:
        fh.write(_HEADER.pack(MAGIC, VERSION, table.weight, table.n_max, width))
        fh.write(body)
    os.replace(tmp, path)
    return path


def read_header(path: str | os.PathLike) -> tuple[int, int, int]:
    with open(path, "rb") as fh:
        raw = fh.read(_HEADER.size)
    if len(raw) < _HEADER.size:
        raise CacheFormatError(f"{path}: truncated header")
    magic, version, weight, n_max, width = _HEADER.unpack(raw)
    if magic != MAGIC:
        raise CacheFormatError(f"{path}: bad magic {magic!r}")
    if version != VERSION:
        raise CacheFormatError(f"{path}: unsupported version {version}")
    return weight, n_max, width


def read_table(path: str | os.PathLike, n_max: int | None = None) -> EigenformTable:
    """Load a table, optionally truncated to the first ``n_max`` coefficients."""
    weight, stored, width = read_header(path)
    count = stored if n_max is None else n_max
    if count > stored:
        raise CacheFormatError(f"{path}: holds {stored} coefficients, {count} requested")
    with open(path, "rb") as fh:
        fh.seek(_HEADER.size)
        body = fh.read(count * width)
    if len(body) != count * width:
        raise CacheFormatError(f"{path}: truncated body")
    fb = int.from_bytes
    coeffs = tuple(fb(body[i:i + width], "little", signed=True)
                   for i in range(0, count * width, width))
    return EigenformTable(get_form(weight), count, coeffs)


def cache_path(cache_dir: str | os.PathLike, form: FormId, n_max: int) -> Path:
    return Path(cache_dir) / f"{form.label}_k{form.weight}_n{n_max}.hscf"


def load_or_build(form, n_max: int, cache_dir: str | os.PathLike | None = None) -> EigenformTable:
    """Reuse any cached table of this form with at least ``n_max`` coefficients."""
    form = get_form(form)
    if cache_dir is None:
        return build_form(form, n_max)
    cache_dir = Path(cache_dir)
    cache_dir.mkdir(parents=True, exist_ok=True)
    pattern = re.compile(rf"{re.escape(form.label)}_k{form.weight}_n(\d+)\.hscf$")
    best = None
    for entry in cache_dir.iterdir():
        m = pattern.match(entry.name)
        if m and int(m.group(1)) >= n_max and (best is None or int(m.group(1)) < best[0]):
            best = (int(m.group(1)), entry)
    if best is not None:
        try:
            return read_table(best[1], n_max)
        except CacheFormatError:
            pass
    table = build_form(form, n_max)
    write_table(table, cache_path(cache_dir, form, n_max))
    return table
