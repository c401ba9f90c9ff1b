#!/usr/bin/env python3
"""
Image Formats
Binary PPM (P6, maxval 255) reader and writer, with PNG through Pillow when installed
"""

import logging
from pathlib import Path
from typing import Tuple

import numpy as np

from ..app_config import get_app_config
from ..errors import ImageFormatError, UsageError

logger = logging.getLogger(__name__)

WHITESPACE = b' \t\n\r\x0b\x0c'
PNG_SUFFIXES = ('.png',)
PPM_SUFFIXES = ('.ppm', '.pnm')


def _skip_space_and_comments(data: bytes, pos: int) -> int:
    while pos < len(data):
        ch = data[pos:pos + 1]
        if ch == b'#':
            while pos < len(data) and data[pos:pos + 1] not in (b'\n', b'\r'):
                pos += 1
        elif ch in WHITESPACE:
            pos += 1
        else:
            break
    return pos


def _read_header_int(data: bytes, pos: int, what: str) -> Tuple[int, int]:
    pos = _skip_space_and_comments(data, pos)
    start = pos
    while pos < len(data) and data[pos:pos + 1].isdigit():
        pos += 1
    if pos == start:
        raise ImageFormatError(f"Expected {what} in PPM header", start)
    return int(data[start:pos]), pos


def decode_ppm(data: bytes) -> np.ndarray:
    """Decode P6 bytes into a (H, W, 3) uint8 array"""
    if data[:2] != b'P6':
        raise ImageFormatError("Not a binary PPM: magic number must be P6", 0)
    pos = 2
    if pos >= len(data) or data[pos] not in WHITESPACE:
        raise ImageFormatError("Expected whitespace after magic number", pos)
    width, pos = _read_header_int(data, pos, 'width')
    height, pos = _read_header_int(data, pos, 'height')
    maxval_at = _skip_space_and_comments(data, pos)
    maxval, pos = _read_header_int(data, pos, 'maxval')
    if width < 1 or height < 1:
        raise ImageFormatError(f"Image size must be positive, got {width}x{height}", maxval_at)
    if maxval != 255:
        raise ImageFormatError(f"Only maxval 255 is supported, got {maxval}", maxval_at)
    if pos >= len(data) or data[pos] not in WHITESPACE:
        raise ImageFormatError("Expected a single whitespace byte before pixel data", pos)
    pos += 1
    expected = width * height * 3
    available = len(data) - pos
    if available < expected:
        raise ImageFormatError(f"Pixel data truncated: expected {expected} bytes, found {available}",
                               pos + available)
    pixels = np.frombuffer(data, dtype=np.uint8, count=expected, offset=pos)
    return pixels.reshape(height, width, 3).copy()


def encode_ppm(img: np.ndarray) -> bytes:
    img = np.ascontiguousarray(img, dtype=np.uint8)
    if img.ndim != 3 or img.shape[2] != 3:
        raise UsageError(f"Expected an (H, W, 3) image, got shape {img.shape}")
    height, width = img.shape[:2]
    return f"P6\n{width} {height}\n255\n".encode('ascii') + img.tobytes()


def _require_png():
    if not get_app_config().is_available('png'):
        raise UsageError("PNG support needs Pillow; install it or use a .ppm path")


def read_image(path) -> np.ndarray:
    """Read a PPM, or a PNG when Pillow is available"""
    path = Path(path)
    if path.suffix.lower() in PNG_SUFFIXES:
        _require_png()
        from PIL import Image, UnidentifiedImageError
        try:
            with Image.open(path) as im:
                img = np.asarray(im.convert('RGB'), dtype=np.uint8).copy()
        except UnidentifiedImageError as e:
            raise ImageFormatError(f"Cannot decode PNG {path.name}: {e}", 0)
    else:
        img = decode_ppm(path.read_bytes())
    logger.debug("Read %s: %dx%d", path.name, img.shape[1], img.shape[0])
    return img


def write_image(img: np.ndarray, path) -> int:
    """Write a PPM, or a PNG when the suffix asks for one; returns bytes written"""
    path = Path(path)
    if path.suffix.lower() in PNG_SUFFIXES:
        _require_png()
        from PIL import Image
        Image.fromarray(np.ascontiguousarray(img, dtype=np.uint8), 'RGB').save(path, format='PNG')
        return path.stat().st_size
    data = encode_ppm(img)
    path.write_bytes(data)
    return len(data)
