"""Binary (P5) PGM images and least-significant-bit access."""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

from .gf2 import BitVector


class PGMError(ValueError):
    pass


@dataclass(frozen=True)
class GrayImage:
    width: int
    height: int
    maxval: int
    pixels: bytes

    def __post_init__(self):
        if not 0 < self.maxval <= 255:
            raise PGMError(f"maxval must be in 1..255, got {self.maxval}")
        if len(self.pixels) != self.width * self.height:
            raise PGMError(f"expected {self.width * self.height} pixels, got {len(self.pixels)}")
        if self.pixels and max(self.pixels) > self.maxval:
            raise PGMError(f"pixel value {max(self.pixels)} exceeds maxval {self.maxval}")

    @property
    def pixel_count(self) -> int:
        return self.width * self.height


def parse_pgm(data: bytes) -> GrayImage:
    pos = 0
    fields: list[int] = []
    if data[:2] != b"P5":
        raise PGMError(f"bad magic {data[:2]!r}; only binary PGM (P5) is supported")
    pos = 2
    while len(fields) < 3:
        # skip whitespace and comments between header fields
        while pos < len(data) and (data[pos : pos + 1].isspace() or data[pos : pos + 1] == b"#"):
            if data[pos : pos + 1] == b"#":
                while pos < len(data) and data[pos : pos + 1] not in (b"\n", b"\r"):
                    pos += 1
            else:
                pos += 1
        start = pos
        while pos < len(data) and data[pos : pos + 1].isdigit():
            pos += 1
        if start == pos:
            raise PGMError(f"malformed header at byte offset {start}")
        fields.append(int(data[start:pos]))
    if pos >= len(data) or not data[pos : pos + 1].isspace():
        raise PGMError(f"malformed header at byte offset {pos}: expected whitespace after maxval")
    pos += 1
    width, height, maxval = fields
    if maxval > 255:
        raise PGMError(f"maxval {maxval} > 255 (16-bit PGM is not supported)")
    need = width * height
    body = data[pos : pos + need]
    if len(body) < need:
        raise PGMError(f"pixel data truncated at byte offset {pos + len(body)}: expected {need} bytes from offset {pos}")
    return GrayImage(width, height, maxval, bytes(body))


def read_pgm(path: str | Path) -> GrayImage:
    return parse_pgm(Path(path).read_bytes())


def format_pgm(img: GrayImage) -> bytes:
    return f"P5\n{img.width} {img.height}\n{img.maxval}\n".encode() + img.pixels


def write_pgm(img: GrayImage, path: str | Path) -> None:
    Path(path).write_bytes(format_pgm(img))


def lsb_extract(img: GrayImage, n: int) -> BitVector:
    """LSBs of the first n pixels in row-major order."""
    if not 0 <= n <= img.pixel_count:
        raise PGMError(f"need {n} pixels, image has {img.pixel_count}")
    return BitVector.from_bits(p & 1 for p in img.pixels[:n])


def lsb_inject(img: GrayImage, x: BitVector) -> GrayImage:
    """Overwrite the LSBs of the first len(x) pixels with x.

    A pixel that would exceed an even maxval is decremented instead, which
    sets the same LSB.
    """
    if x.length > img.pixel_count:
        raise PGMError(f"need {x.length} pixels, image has {img.pixel_count}")
    px = bytearray(img.pixels)
    for i, b in enumerate(x.bits):
        if px[i] & 1 == b:
            continue
        if b and px[i] == img.maxval:
            px[i] -= 1
        else:
            px[i] ^= 1
    return GrayImage(img.width, img.height, img.maxval, bytes(px))
