#!/usr/bin/env python3
"""
Filename Utilities Module
Sanitizes identifiers used in derived artifact names and checks output paths
"""

import os
import re
from pathlib import Path
from typing import Iterable, Optional, Tuple


class FilenameHandler:
    """Builds safe artifact names for sweep cells and checks output paths"""

    # Characters that are problematic in filenames across different operating systems
    UNSAFE_CHARS = r'[<>:"/\\|?*\x00-\x1f\s]'

    RESERVED_NAMES = {
        'CON', 'PRN', 'AUX', 'NUL',
        'COM1', 'COM2', 'COM3', 'COM4', 'COM5', 'COM6', 'COM7', 'COM8', 'COM9',
        'LPT1', 'LPT2', 'LPT3', 'LPT4', 'LPT5', 'LPT6', 'LPT7', 'LPT8', 'LPT9'
    }

    DEFAULT_NAME = 'artifact'

    def __init__(self, max_length: int = 100):
        self.max_length = max_length

    def sanitize_filename(self, filename: str, replacement_char: str = '_') -> str:
        """
        Make a name safe across operating systems

        Args:
            filename: The original name
            replacement_char: Character to replace unsafe characters with

        Returns:
            A sanitized name; never empty
        """
        if not filename or not str(filename).strip():
            return self.DEFAULT_NAME

        sanitized = re.sub(self.UNSAFE_CHARS, replacement_char, str(filename).strip())
        sanitized = re.sub(f'{re.escape(replacement_char)}+', replacement_char, sanitized)
        sanitized = sanitized.strip(f'{replacement_char}.')

        stem = os.path.splitext(sanitized)[0].upper()
        if stem in self.RESERVED_NAMES:
            sanitized = f"{sanitized}_file"

        sanitized = self._truncate_filename(sanitized)
        return sanitized or self.DEFAULT_NAME

    def _truncate_filename(self, filename: str) -> str:
        """Truncate while preserving the extension"""
        if len(filename) <= self.max_length:
            return filename
        name, ext = os.path.splitext(filename)
        available = self.max_length - len(ext)
        if available > 0:
            return name[:available] + ext
        return filename[:self.max_length]

    def cell_artifact_name(self, strategy: str, n: int, seed: int, method: str, extension: str = '.ppm') -> str:
        """Name of one evaluation cell's reconstruction: {strategy}_{n}_{seed}_{method}"""
        base = self.sanitize_filename(f"{strategy}_{int(n)}_{int(seed)}_{method}")
        return f"{base}{extension}"

    def validate_output_path(self, path: str, allowed_extensions: Optional[Iterable[str]] = None) -> Tuple[bool, str]:
        """
        Check a user-supplied output path

        Returns:
            Tuple of (is_valid, feedback_message)
        """
        if not path or not str(path).strip():
            return False, "Output path cannot be empty"
        p = Path(path)
        if not p.name or p.name in ('.', '..'):
            return False, f"Output path '{path}' has no file name"
        if p.stem.upper() in self.RESERVED_NAMES:
            return False, f"'{p.stem}' is a reserved filename"
        if allowed_extensions is not None:
            allowed = tuple(e.lower() for e in allowed_extensions)
            if p.suffix.lower() not in allowed:
                return False, f"Output '{path}' must end with one of: {', '.join(allowed)}"
        if p.exists() and p.is_dir():
            return False, f"Output path '{path}' is a directory"
        return True, "ok"
