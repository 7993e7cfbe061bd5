"""PBM bitmaps (P1/P4) and the plain-text key file."""

from __future__ import annotations

import logging
import re
from dataclasses import dataclass

import numpy as np

from .codec import DegenerateKeyError, Key
from .maca import CAState, find_maca

log = logging.getLogger(__name__)


class FormatError(ValueError):
    pass


@dataclass(frozen=True, eq=False)
class PbmImage:
    """``pixels[i, j] == 1`` is black, following the PBM convention."""

    m: int
    n: int
    pixels: np.ndarray

    def __post_init__(self) -> None:
        px = np.asarray(self.pixels, dtype=np.uint8).reshape(self.m, self.n).copy()
        px.setflags(write=False)
        object.__setattr__(self, "pixels", px)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, PbmImage):
            return NotImplemented
        return self.pixels.shape == other.pixels.shape and bool(np.array_equal(self.pixels, other.pixels))

    __hash__ = None

    def to_state(self) -> CAState:
        return CAState(self.m, self.n, self.pixels)

    @classmethod
    def from_state(cls, state: CAState) -> "PbmImage":
        return cls(state.m, state.n, state.grid)


_TOKEN = re.compile(rb"\s*(?:#[^\n]*\n\s*)*")


def _header_tokens(data: bytes, count: int) -> tuple[list[bytes], int]:
    """Read ``count`` whitespace-separated header tokens, skipping comments."""
    tokens, pos = [], 0
    for _ in range(count):
        pos = _TOKEN.match(data, pos).end()
        end = pos
        while end < len(data) and not data[end:end + 1].isspace() and data[end:end + 1] != b"#":
            end += 1
        if end == pos:
            raise FormatError("truncated PBM header")
        tokens.append(data[pos:end])
        pos = end
    return tokens, pos


def pbm_read(data: bytes) -> PbmImage:
    magic = data[:2]
    if magic not in (b"P1", b"P4"):
        raise FormatError(f"unsupported format {magic!r}; expected P1 or P4")
    (width, height), pos = _header_tokens(data[2:], 2)
    pos += 2
    try:
        n, m = int(width), int(height)
    except ValueError:
        raise FormatError("PBM dimensions must be integers") from None
    if m < 1 or n < 1:
        raise FormatError(f"bad PBM dimensions {n}x{m}")

    if magic == b"P1":
        body = re.sub(rb"#[^\n]*", b"", data[pos:])
        digits = [c for c in body if not chr(c).isspace()]
        if len(digits) < m * n:
            raise FormatError(f"truncated pixel data: {len(digits)} of {m * n} pixels")
        if any(c not in b"01" for c in digits[: m * n]):
            raise FormatError("P1 pixels must be 0 or 1")
        return PbmImage(m, n, np.array(digits[: m * n], dtype=np.uint8) - ord("0"))

    if pos >= len(data) or not data[pos:pos + 1].isspace():
        raise FormatError("missing whitespace after P4 header")
    raw = np.frombuffer(data[pos + 1:], dtype=np.uint8)
    stride = -(-n // 8)
    if raw.size < m * stride:
        raise FormatError(f"truncated pixel data: {raw.size} of {m * stride} bytes")
    bits = np.unpackbits(raw[: m * stride].reshape(m, stride), axis=1)[:, :n]
    return PbmImage(m, n, bits)


def pbm_write(img: PbmImage, form: str = "P1") -> bytes:
    header = f"{form}\n{img.n} {img.m}\n".encode()
    if form == "P1":
        rows = (" ".join(map(str, row)) for row in img.pixels.tolist())
        return header + "".join(r + "\n" for r in rows).encode()
    if form == "P4":
        return header + np.packbits(img.pixels, axis=1).tobytes()
    raise ValueError(f"unknown PBM form {form!r}")


KEY_FIELDS = ("version", "block", "boundary", "rule", "enc")


def key_write(key: Key) -> str:
    return (
        "version 1\n"
        f"block {key.block_m} {key.block_n}\n"
        f"boundary {key.boundary}\n"
        f"rule {key.rule}\n"
        f"enc {key.enc_a} {key.enc_b}\n"
    )


def _ints(field_name: str, values: list[str], count: int) -> list[int]:
    if len(values) != count:
        raise FormatError(f"'{field_name}' takes {count} value(s)")
    try:
        return [int(v) for v in values]
    except ValueError:
        raise FormatError(f"'{field_name}' values must be integers") from None


def key_parse(text: str) -> Key:
    """Parse and validate a key file.  The rule must be a MACA with at least
    two attractors on the key's block dimensions."""
    fields: dict[str, list[str]] = {}
    for lineno, line in enumerate(text.splitlines(), 1):
        parts = line.split()
        if not parts:
            continue
        name, values = parts[0], parts[1:]
        if name not in KEY_FIELDS:
            raise FormatError(f"line {lineno}: unknown field {name!r}")
        if name in fields:
            raise FormatError(f"line {lineno}: duplicate field {name!r}")
        fields[name] = values
    missing = [f for f in KEY_FIELDS if f not in fields]
    if missing:
        raise FormatError(f"missing field(s): {', '.join(missing)}")
    if _ints("version", fields["version"], 1) != [1]:
        raise FormatError("unsupported key version")
    block_m, block_n = _ints("block", fields["block"], 2)
    (rule,) = _ints("rule", fields["rule"], 1)
    enc_a, enc_b = _ints("enc", fields["enc"], 2)
    if len(fields["boundary"]) != 1:
        raise FormatError("'boundary' takes one value")
    try:
        key = Key(block_m, block_n, fields["boundary"][0], rule, enc_a, enc_b)
    except ValueError as exc:
        raise FormatError(str(exc)) from None
    try:
        profile = key.validate()
    except DegenerateKeyError as exc:
        raise FormatError(f"{exc}; nearby usable rules: {nearby_rules(key)}") from None
    if profile.k == 1 << (block_m * block_n):
        log.warning("rule %d keeps every state (k=%d): compression ratio is 1", rule, profile.k)
    return key


def nearby_rules(key: Key, count: int = 5) -> list[int]:
    usable = [r for r, _ in find_maca(key.boundary, key.block_m, key.block_n, min_k=2)]
    return sorted(sorted(usable, key=lambda r: (abs(r - key.rule), r))[:count])
