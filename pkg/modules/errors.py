#!/usr/bin/env python3
"""
QuasiSample Errors
Exception hierarchy shared by the library modules and the CLI
"""

from typing import List, Optional, Sequence


class QuasiSampleError(Exception):
    """Base class for every error raised by QuasiSample"""


class RingOverflowError(QuasiSampleError):
    """A checked 64-bit ring operation left the representable range"""


class EnumerationBoundError(QuasiSampleError):
    """Derived enumeration bounds are larger than the supported box"""


class DegenerateInputError(QuasiSampleError):
    """Too few points, or points that span no area"""


class DimensionMismatchError(QuasiSampleError):
    """Two rasters that must agree in size do not"""


class ImageFormatError(QuasiSampleError):
    """Malformed image file; ``offset`` is the byte where parsing failed"""

    def __init__(self, message: str, offset: int = 0):
        super().__init__(f"{message} (at byte offset {offset})")
        self.offset = offset


class PointFormatError(QuasiSampleError):
    """Malformed points CSV; ``line`` is 1-based"""

    def __init__(self, message: str, line: int = 0):
        super().__init__(f"{message} (line {line})")
        self.line = line


class ConfigError(QuasiSampleError):
    """Bad key or value in a key=value config file"""

    def __init__(self, message: str, line: Optional[int] = None):
        if line is not None:
            message = f"{message} (config line {line})"
        super().__init__(message)
        self.line = line


class UsageError(QuasiSampleError):
    """Invalid identifier or parameter supplied by the caller"""

    def __init__(self, message: str, valid: Optional[Sequence[str]] = None):
        self.valid: List[str] = list(valid) if valid else []
        if self.valid:
            message = f"{message}. Valid choices: {', '.join(self.valid)}"
        super().__init__(message)
