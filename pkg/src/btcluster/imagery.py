"""Image decoding and channel splitting.

PPM (P3/P6, maxval 255) is decoded by hand so the raster is known bit for
bit; PNG and JPEG go through Pillow. Pixels are always held row-major,
top-left origin, as a ``(height, width, 3)`` uint8 array.
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .errors import DecodeError, ImageReadError

CHANNEL_TAGS = ("R", "G", "B")
PARTITION_TAGS = ("RH", "RL", "GH", "GL", "BH", "BL")

_WHITESPACE = b" \t\n\r\v\f"


@dataclass(frozen=True, eq=False)
class RgbImage:
    """A decoded raster of ``height`` rows by ``width`` columns."""

    pixels: np.ndarray

    def __post_init__(self):
        px = np.asarray(self.pixels)
        if px.ndim != 3 or px.shape[2] != 3:
            raise ValueError(f"pixels must have shape (height, width, 3), got {px.shape}")
        if px.shape[0] < 1 or px.shape[1] < 1:
            raise ValueError("image must have at least one pixel")
        if px.dtype != np.uint8:
            if px.dtype.kind not in "iu" or px.min() < 0 or px.max() > 255:
                raise ValueError("channel values must be integers in [0, 255]")
            px = px.astype(np.uint8)
        px = np.ascontiguousarray(px)
        px.setflags(write=False)
        object.__setattr__(self, "pixels", px)

    @classmethod
    def from_triples(cls, height, width, triples):
        """Build an image from a row-major sequence of ``(r, g, b)`` triples."""
        arr = np.asarray(list(triples), dtype=np.int64)
        if arr.shape != (height * width, 3):
            raise ValueError(
                f"expected {height * width} (r, g, b) triples, got array of shape {arr.shape}"
            )
        return cls(arr.reshape(height, width, 3))

    @property
    def height(self) -> int:
        return self.pixels.shape[0]

    @property
    def width(self) -> int:
        return self.pixels.shape[1]

    def triples(self):
        return [tuple(int(c) for c in p) for p in self.pixels.reshape(-1, 3)]

    def __eq__(self, other):
        if not isinstance(other, RgbImage):
            return NotImplemented
        return np.array_equal(self.pixels, other.pixels)

    def __repr__(self):
        return f"RgbImage(height={self.height}, width={self.width})"


@dataclass(frozen=True, eq=False)
class ChannelValues:
    """Intensities from one channel, or from one BTC partition of a channel."""

    values: np.ndarray
    source: str

    def __post_init__(self):
        if self.source not in CHANNEL_TAGS + PARTITION_TAGS:
            raise ValueError(f"unknown channel source {self.source!r}")
        vals = np.asarray(self.values)
        if vals.ndim != 1:
            vals = vals.reshape(-1)
        if vals.size == 0 and self.source in CHANNEL_TAGS:
            raise ValueError(f"full plane {self.source} cannot be empty")
        object.__setattr__(self, "values", vals)

    def __len__(self):
        return self.values.size

    def __eq__(self, other):
        if not isinstance(other, ChannelValues):
            return NotImplemented
        return self.source == other.source and np.array_equal(self.values, other.values)


def split_channels(image: RgbImage):
    """Return the R, G and B planes as flat, row-major :class:`ChannelValues`."""
    flat = image.pixels.reshape(-1, 3)
    return tuple(
        ChannelValues(np.ascontiguousarray(flat[:, i]), tag) for i, tag in enumerate(CHANNEL_TAGS)
    )


# -- PPM ---------------------------------------------------------------------


def _next_token(data, pos):
    """Read one whitespace-delimited header token, skipping ``#`` comments.

    Returns ``(token, start, end)`` where ``end`` indexes the byte right
    after the token.
    """
    n = len(data)
    while pos < n:
        b = data[pos : pos + 1]
        if b == b"#":
            nl = data.find(b"\n", pos)
            pos = n if nl < 0 else nl + 1
        elif b in _WHITESPACE:
            pos += 1
        else:
            break
    if pos >= n:
        raise DecodeError("unexpected end of header", offset=pos)
    start = pos
    while pos < n and data[pos : pos + 1] not in _WHITESPACE and data[pos : pos + 1] != b"#":
        pos += 1
    return data[start:pos], start, pos


def _header_int(data, pos, what):
    tok, start, end = _next_token(data, pos)
    if not tok.isdigit():
        raise DecodeError(f"expected {what}, got {tok[:16]!r}", offset=start)
    return int(tok), start, end


def decode_ppm(data: bytes) -> RgbImage:
    """Decode a binary (P6) or ASCII (P3) PPM with maxval 255."""
    data = bytes(data)
    if len(data) < 2:
        raise DecodeError("file too short for a PPM header", offset=0)
    magic = data[:2]
    if magic not in (b"P3", b"P6"):
        raise DecodeError(f"unsupported magic number {magic!r}", offset=0)
    width, wpos, pos = _header_int(data, 2, "width")
    height, hpos, pos = _header_int(data, pos, "height")
    maxval, mpos, pos = _header_int(data, pos, "maxval")
    if width < 1:
        raise DecodeError("width must be positive", offset=wpos)
    if height < 1:
        raise DecodeError("height must be positive", offset=hpos)
    if maxval != 255:
        raise DecodeError(f"maxval must be 255, got {maxval}", offset=mpos)

    count = width * height * 3
    if magic == b"P6":
        # exactly one whitespace byte separates maxval from the raster
        if pos >= len(data) or data[pos : pos + 1] not in _WHITESPACE:
            raise DecodeError("missing whitespace after maxval", offset=pos)
        body = pos + 1
        have = len(data) - body
        if have < count:
            raise DecodeError(
                f"truncated body: need {count} sample bytes, found {have}", offset=len(data)
            )
        samples = np.frombuffer(data, dtype=np.uint8, count=count, offset=body)
    else:
        samples = np.empty(count, dtype=np.int64)
        for i in range(count):
            try:
                tok, start, pos = _next_token(data, pos)
            except DecodeError as exc:
                raise DecodeError(
                    f"truncated body: need {count} samples, found {i}", offset=exc.offset
                ) from None
            if not tok.isdigit():
                raise DecodeError(f"bad sample {tok[:16]!r}", offset=start)
            value = int(tok)
            if value > 255:
                raise DecodeError(f"sample {value} exceeds maxval 255", offset=start)
            samples[i] = value
    return RgbImage(samples.reshape(height, width, 3).astype(np.uint8))


def encode_ppm(image: RgbImage) -> bytes:
    """Serialize as binary P6."""
    header = f"P6\n{image.width} {image.height}\n255\n".encode("ascii")
    return header + image.pixels.tobytes()


def load_image(path) -> RgbImage:
    """Read a PPM, PNG or JPEG file into an :class:`RgbImage`.

    PPM files go through :func:`decode_ppm`; everything else is handed to
    Pillow and converted to RGB (grayscale and paletted images are expanded).
    """
    path = Path(path)
    try:
        data = path.read_bytes()
    except OSError as exc:
        raise ImageReadError(f"{path}: cannot read file ({exc.strerror or exc})") from exc
    if data[:2] in (b"P3", b"P6"):
        try:
            return decode_ppm(data)
        except DecodeError as exc:
            raise DecodeError(f"{path}: {exc}") from exc

    from PIL import Image, UnidentifiedImageError

    try:
        with Image.open(path) as im:
            if im.format not in ("PNG", "JPEG", "PPM"):
                raise ImageReadError(f"{path}: unsupported image format {im.format}")
            rgb = im.convert("RGB")
            arr = np.asarray(rgb, dtype=np.uint8)
    except UnidentifiedImageError as exc:
        raise ImageReadError(f"{path}: unsupported or unrecognized image format") from exc
    except OSError as exc:
        if isinstance(exc, ImageReadError):
            raise
        raise ImageReadError(f"{path}: cannot decode image ({exc})") from exc
    return RgbImage(arr)
