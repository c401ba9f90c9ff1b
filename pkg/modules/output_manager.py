#!/usr/bin/env python3
"""
QuasiSample Output Manager
Writes only explicitly requested artifacts and keeps a log of everything written
"""

import logging
from pathlib import Path
from typing import Callable, Dict, List, Optional

import pandas as pd

from .errors import UsageError

logger = logging.getLogger(__name__)


class OutputManager:
    """Gatekeeper and ledger for files written during a run"""

    def __init__(self):
        self.artifacts: List[Dict] = []
        self._allowed_files = set()
        self._allowed_dirs = set()

    def allow(self, path) -> Path:
        """Register a path the user named on the command line"""
        p = Path(path).resolve()
        self._allowed_files.add(p)
        return p

    def allow_directory(self, directory) -> Path:
        """Register a directory whose derived artifact names may be written"""
        d = Path(directory).resolve()
        self._allowed_dirs.add(d)
        return d

    def is_allowed(self, path) -> bool:
        p = Path(path).resolve()
        return p in self._allowed_files or p.parent in self._allowed_dirs

    def write(self, path, kind: str, writer: Callable[[Path], Optional[int]]) -> int:
        """
        Write one artifact through ``writer`` and record it

        Args:
            path: destination; must have been registered with allow/allow_directory
            kind: artifact kind for the log, e.g. 'points' or 'image'
            writer: callable that writes the file and may return its byte size

        Returns:
            Size of the written file in bytes
        """
        p = Path(path)
        if not self.is_allowed(p):
            raise UsageError(f"Refusing to write '{p}': output paths must be given explicitly")
        p.parent.mkdir(parents=True, exist_ok=True)
        size = writer(p)
        if size is None:
            size = p.stat().st_size
        self.artifacts.append({'path': str(p), 'kind': kind, 'bytes': int(size)})
        logger.info("Wrote %s %s (%d bytes)", kind, p, size)
        return int(size)

    def summary(self) -> pd.DataFrame:
        """Artifacts written so far"""
        return pd.DataFrame(self.artifacts, columns=['path', 'kind', 'bytes'])

    def clear(self):
        self.artifacts.clear()
        self._allowed_files.clear()
        self._allowed_dirs.clear()


# Global instance
_output_manager = None


def get_output_manager() -> OutputManager:
    """Get the global output manager instance"""
    global _output_manager
    if _output_manager is None:
        _output_manager = OutputManager()
    return _output_manager


def reset_output_manager() -> OutputManager:
    global _output_manager
    _output_manager = OutputManager()
    return _output_manager
