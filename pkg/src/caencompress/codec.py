"""Encompression of binary images: MACA compression to PEF bits, then
encryption of the PEF matrix by a toroidal translation.

The image is zero-padded to whole blocks; each block is sent to its
attractor and only the attractor's PEF bits are kept.  The ``L`` PEF bits
are laid out in a ``p x q`` matrix (``p = ceil(sqrt(L))``), zero-padded, and
multiplied by ``M_8^a * M_2^b`` of the periodic ``p x q`` group.  Decoding
inverts the translation and rebuilds each block as its basin's attractor
(blocks overhanging the image edge use a basin member that is zero on the
overhang), so the reconstruction is lossy but never leaves the original basin.

The encryption step is a bit permutation with ``p*q`` possible keys; it hides
bit order, not content statistics.
"""

from __future__ import annotations

import math
import struct
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .algebra import translation_matrix
from .bitmatrix import MAX_DIM, BitMatrix, bool_product, gf2_solve_affine
from .maca import CAState, MacaProfile, attractors_from_pef_batch, classify_batch, maca_profile
from .rules import RuleSpec

MAGIC = b"CAEC"
VERSION = 1
_HEADER = struct.Struct(">4sBHHBBIHH")
HEADER_SIZE = _HEADER.size


class DegenerateKeyError(ValueError):
    pass


class ContainerError(ValueError):
    pass


@dataclass(frozen=True)
class Key:
    block_m: int
    block_n: int
    boundary: str
    rule: int
    enc_a: int = 0
    enc_b: int = 0

    def __post_init__(self) -> None:
        if not (1 <= self.block_m <= 255 and 1 <= self.block_n <= 255):
            raise ValueError("block dimensions must lie in 1..255")
        if self.enc_a < 0 or self.enc_b < 0:
            raise ValueError("encryption exponents must be non-negative")
        RuleSpec(self.rule, self.boundary, self.block_m, self.block_n)

    @property
    def spec(self) -> RuleSpec:
        return RuleSpec(self.rule, self.boundary, self.block_m, self.block_n)

    @property
    def profile(self) -> MacaProfile:
        return maca_profile(self.spec)

    def validate(self) -> MacaProfile:
        """Profile of the key's rule; raises unless it is a usable MACA."""
        profile = self.profile
        if not profile.is_maca:
            raise DegenerateKeyError(
                f"rule {self.rule} is not a MACA on {self.block_m}x{self.block_n} blocks ({self.boundary})"
            )
        if profile.k < 2:
            raise DegenerateKeyError(f"degenerate key: rule {self.rule} has a single attractor")
        return profile


@dataclass(frozen=True)
class Layout:
    image_m: int
    image_n: int
    padded_m: int
    padded_n: int
    blocks: int
    bits_per_block: int
    pef_len: int
    p: int
    q: int

    @property
    def pad_bits(self) -> int:
        return self.p * self.q - self.pef_len


def plan_layout(image_m: int, image_n: int, key: Key) -> Layout:
    if image_m < 1 or image_n < 1:
        raise ValueError("image dimensions must be positive")
    bits = key.validate().pef_bits
    padded_m = -(-image_m // key.block_m) * key.block_m
    padded_n = -(-image_n // key.block_n) * key.block_n
    blocks = (padded_m // key.block_m) * (padded_n // key.block_n)
    pef_len = blocks * bits
    p = math.isqrt(pef_len - 1) + 1
    q = -(-pef_len // p)
    return Layout(image_m, image_n, padded_m, padded_n, blocks, bits, pef_len, p, q)


def compression_ratio(key: Key) -> Fraction:
    return Fraction(key.validate().pef_bits, key.block_m * key.block_n)


def translate(vec: np.ndarray, a: int, b: int, p: int, q: int) -> np.ndarray:
    """Apply ``translation_matrix(a, b, p, q)`` to a flattened p x q matrix.

    Uses the Boolean matrix product while the matrix fits under MAX_DIM and the
    equivalent index roll beyond that.
    """
    a, b = a % p, b % q
    if p * q <= MAX_DIM:
        return bool_product(translation_matrix(a, b, p, q), vec)
    return np.roll(np.asarray(vec).reshape(p, q), (-a, -b), axis=(0, 1)).ravel()


def encrypt_stream(stream: np.ndarray, key: Key, p: int, q: int) -> np.ndarray:
    return translate(stream, key.enc_a, key.enc_b, p, q)


def decrypt_stream(payload: np.ndarray, key: Key, p: int, q: int) -> np.ndarray:
    a, b = key.enc_a % p, key.enc_b % q
    return translate(payload, (p - a) % p, (q - b) % q, p, q)


@dataclass(frozen=True)
class EncompressedContainer:
    image_m: int
    image_n: int
    block_m: int
    block_n: int
    pef_len: int
    p: int
    q: int
    payload: np.ndarray

    def __post_init__(self) -> None:
        payload = np.asarray(self.payload, dtype=np.uint8).ravel().copy()
        if payload.size != self.p * self.q:
            raise ContainerError(f"payload has {payload.size} bits, header says {self.p}x{self.q}")
        if self.pef_len > self.p * self.q:
            raise ContainerError("PEF length exceeds the payload")
        payload.setflags(write=False)
        object.__setattr__(self, "payload", payload)

    def to_bytes(self) -> bytes:
        for name, value, limit in (
            ("image_m", self.image_m, 0xFFFF), ("image_n", self.image_n, 0xFFFF),
            ("p", self.p, 0xFFFF), ("q", self.q, 0xFFFF), ("pef_len", self.pef_len, 0xFFFFFFFF),
        ):
            if value > limit:
                raise ContainerError(f"{name}={value} does not fit the header field")
        header = _HEADER.pack(MAGIC, VERSION, self.image_m, self.image_n,
                              self.block_m, self.block_n, self.pef_len, self.p, self.q)
        return header + np.packbits(self.payload).tobytes()

    @classmethod
    def from_bytes(cls, data: bytes) -> "EncompressedContainer":
        if len(data) < HEADER_SIZE:
            raise ContainerError("truncated header")
        magic, version, im, in_, bm, bn, pef_len, p, q = _HEADER.unpack_from(data)
        if magic != MAGIC:
            raise ContainerError(f"bad magic {magic!r}")
        if version != VERSION:
            raise ContainerError(f"unsupported container version {version}")
        body = data[HEADER_SIZE:]
        nbits = p * q
        if len(body) != -(-nbits // 8):
            raise ContainerError(f"payload is {len(body)} bytes, expected {-(-nbits // 8)}")
        bits = np.unpackbits(np.frombuffer(body, dtype=np.uint8))
        return cls(im, in_, bm, bn, pef_len, p, q, bits[:nbits])

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, EncompressedContainer):
            return NotImplemented
        return self.to_bytes() == other.to_bytes()

    __hash__ = None


def _blocks(grid: np.ndarray, bm: int, bn: int) -> np.ndarray:
    """Row-major list of flattened ``bm x bn`` blocks."""
    pm, pn = grid.shape
    return grid.reshape(pm // bm, bm, pn // bn, bn).transpose(0, 2, 1, 3).reshape(-1, bm * bn)


def _unblocks(rows: np.ndarray, pm: int, pn: int, bm: int, bn: int) -> np.ndarray:
    return rows.reshape(pm // bm, pn // bn, bm, bn).transpose(0, 2, 1, 3).reshape(pm, pn)


def _as_grid(image) -> np.ndarray:
    grid = image.grid if isinstance(image, CAState) else np.asarray(image, dtype=np.uint8)
    if grid.ndim != 2:
        raise ValueError("image must be a 2-D grid")
    return grid


def compress(image, key: Key) -> tuple[Layout, np.ndarray]:
    """PEF stream (length L) of an image, block by block in row-major order."""
    grid = _as_grid(image)
    layout = plan_layout(*grid.shape, key)
    padded = np.zeros((layout.padded_m, layout.padded_n), dtype=np.uint8)
    padded[: grid.shape[0], : grid.shape[1]] = grid
    pef = classify_batch(_blocks(padded, key.block_m, key.block_n), key.profile)
    return layout, pef.ravel()


def encompress(image, key: Key) -> EncompressedContainer:
    layout, stream = compress(image, key)
    padded = np.zeros(layout.p * layout.q, dtype=np.uint8)
    padded[: layout.pef_len] = stream
    payload = encrypt_stream(padded, key, layout.p, layout.q)
    return EncompressedContainer(layout.image_m, layout.image_n, key.block_m, key.block_n,
                                 layout.pef_len, layout.p, layout.q, payload)


def decrypt(container: EncompressedContainer, key: Key) -> np.ndarray:
    """Recover the PEF stream (length L) from a container."""
    layout = plan_layout(container.image_m, container.image_n, key)
    got = (container.block_m, container.block_n, container.pef_len, container.p, container.q)
    want = (key.block_m, key.block_n, layout.pef_len, layout.p, layout.q)
    if got != want:
        raise ContainerError(f"container header {got} does not match the key layout {want}")
    plain = decrypt_stream(container.payload, key, layout.p, layout.q)
    return plain[: layout.pef_len]


def dencompress(container: EncompressedContainer, key: Key) -> CAState:
    layout = plan_layout(container.image_m, container.image_n, key)
    stream = decrypt(container, key)
    pef_rows = stream.reshape(layout.blocks, layout.bits_per_block)
    blocks = attractors_from_pef_batch(pef_rows, key.profile)
    _fit_edge_blocks(blocks, layout, key)
    grid = _unblocks(blocks, layout.padded_m, layout.padded_n, key.block_m, key.block_n)
    return CAState(layout.image_m, layout.image_n, grid[: layout.image_m, : layout.image_n])


def _fit_edge_blocks(blocks: np.ndarray, layout: Layout, key: Key) -> None:
    """Swap each block that overhangs the image for a basin member that is
    zero on the overhang, so cropping and re-padding keeps it in its basin.

    The zero-padded original block is such a member, so one always exists.
    """
    if (layout.padded_m, layout.padded_n) == (layout.image_m, layout.image_n):
        return
    valid = np.zeros((layout.padded_m, layout.padded_n), dtype=np.uint8)
    valid[: layout.image_m, : layout.image_n] = 1
    masks = _blocks(valid, key.block_m, key.block_n)
    collapsed = key.profile.collapsed.bits
    for i, mask in enumerate(masks):
        if mask.all():
            continue
        keep = np.nonzero(mask)[0]
        members = gf2_solve_affine(BitMatrix(collapsed[:, keep]), blocks[i])
        blocks[i] = 0
        # No member only happens for a payload that was not produced by encompress.
        if not members.is_empty:
            blocks[i, keep] = members.particular


@dataclass(frozen=True)
class Distortion:
    hamming: int
    rate: float


def distortion(a, b) -> Distortion:
    ga, gb = _as_grid(a), _as_grid(b)
    if ga.shape != gb.shape:
        raise ValueError(f"cannot compare {ga.shape} with {gb.shape}")
    diff = int(np.count_nonzero(ga != gb))
    return Distortion(diff, diff / ga.size)


def block_classes(image, key: Key) -> np.ndarray:
    """PEF bits per block, one row per block; the classification the codec preserves."""
    layout, stream = compress(image, key)
    return stream.reshape(layout.blocks, layout.bits_per_block)
