"""On-disk, write-once store for Walsh spectra keyed by (field, f_hash).

File layout (little-endian): magic, u32 p, u32 m, u32 len(modulus), u32 modulus
coefficients, 32 raw bytes of the sha256 f_hash, u64 count, then count int64
coefficients.  A coefficient equal to INT64_MIN is an escape: the next u32 gives
a byte length and that many bytes hold the value as a signed little-endian integer.
"""

from __future__ import annotations

import io
import os
import struct
import tempfile
from pathlib import Path

import numpy as np
from filelock import FileLock

from .func import PFunc
from .gf import FieldCtx
from .walsh import WalshSpectrum, walsh_fast, walsh_naive

MAGIC = b"PARYWSP1"
ENV_VAR = "PARY_CACHE_DIR"
INT64_MIN = -(1 << 63)


class CacheFormatError(ValueError):
    pass


def resolve_cache_dir(flag: str | os.PathLike | None) -> Path | None:
    env = os.environ.get(ENV_VAR)
    if env:
        return Path(env)
    return Path(flag) if flag else None


def _encode_ints(values) -> bytes:
    out = io.BytesIO()
    for v in values:
        v = int(v)
        if INT64_MIN < v < (1 << 63):
            out.write(struct.pack("<q", v))
        else:
            raw = v.to_bytes((v.bit_length() + 8) // 8, "little", signed=True)
            out.write(struct.pack("<qI", INT64_MIN, len(raw)))
            out.write(raw)
    return out.getvalue()


def _decode_ints(buf: bytes, offset: int, count: int) -> tuple[list[int], int]:
    vals = []
    for _ in range(count):
        (v,) = struct.unpack_from("<q", buf, offset)
        offset += 8
        if v == INT64_MIN:
            (n,) = struct.unpack_from("<I", buf, offset)
            offset += 4
            v = int.from_bytes(buf[offset:offset + n], "little", signed=True)
            offset += n
        vals.append(v)
    return vals, offset


def encode_spectrum(spec: WalshSpectrum) -> bytes:
    fld = spec.field
    head = struct.pack("<III", fld.p, fld.m, len(fld.modulus))
    head += struct.pack(f"<{len(fld.modulus)}I", *fld.modulus)
    head += bytes.fromhex(spec.f_hash)
    coeffs = spec.coeffs.reshape(-1)
    if coeffs.dtype != object and coeffs.size and coeffs.min() > INT64_MIN:
        body = coeffs.astype("<i8").tobytes()
    else:
        body = _encode_ints(coeffs.tolist())
    return MAGIC + head + struct.pack("<Q", coeffs.size) + body


def decode_spectrum(data: bytes, field: FieldCtx) -> WalshSpectrum:
    if not data.startswith(MAGIC):
        raise CacheFormatError("bad magic")
    off = len(MAGIC)
    p, m, k = struct.unpack_from("<III", data, off)
    off += 12
    modulus = list(struct.unpack_from(f"<{k}I", data, off))
    off += 4 * k
    f_hash = data[off:off + 32].hex()
    off += 32
    (count,) = struct.unpack_from("<Q", data, off)
    off += 8
    if (p, m, modulus) != (field.p, field.m, list(field.modulus)):
        raise CacheFormatError("cached spectrum belongs to a different field")
    if count != field.q * (p - 1):
        raise CacheFormatError("coefficient count does not match the field")
    vals, off = _decode_ints(data, off, count)
    if off != len(data):
        raise CacheFormatError("trailing bytes")
    arr = np.array(vals, dtype=np.int64).reshape(field.q, p - 1)
    return WalshSpectrum(field, arr, f_hash)


class SpectrumCache:
    def __init__(self, root: str | os.PathLike):
        self.root = Path(root)

    def path_for(self, f: PFunc) -> Path:
        # f.digest already covers the field spec and the value table
        return self.root / f"{f.digest}.wsp"

    def get(self, f: PFunc) -> WalshSpectrum | None:
        path = self.path_for(f)
        if not path.exists():
            return None
        spec = decode_spectrum(path.read_bytes(), f.field)
        if spec.f_hash != f.digest:
            raise CacheFormatError(f"{path} holds a different function")
        return spec

    def put(self, spec: WalshSpectrum) -> Path:
        self.root.mkdir(parents=True, exist_ok=True)
        path = self.root / f"{spec.f_hash}.wsp"
        with FileLock(str(self.root / ".lock")):
            if path.exists():
                return path  # write-once: content addressing makes it identical
            fd, tmp = tempfile.mkstemp(dir=self.root, suffix=".tmp")
            with os.fdopen(fd, "wb") as fh:
                fh.write(encode_spectrum(spec))
            os.replace(tmp, path)
        return path


def cached_walsh(f: PFunc, cache_dir=None, method: str = "fast") -> WalshSpectrum:
    root = resolve_cache_dir(cache_dir)
    cache = SpectrumCache(root) if root is not None else None
    if cache is not None:
        hit = cache.get(f)
        if hit is not None:
            return hit
    spec = walsh_naive(f) if method == "naive" else walsh_fast(f)
    if cache is not None:
        cache.put(spec)
    return spec
