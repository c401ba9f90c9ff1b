#!/usr/bin/env python3
"""
QuasiSample Application Configuration
Typed settings sections, key=value config files, and optional-feature detection
"""

import hashlib
import json
import logging
from dataclasses import asdict, dataclass, fields
from pathlib import Path
from typing import Any, Dict, Iterable, List, Optional, Tuple

from .cut_project import REFERENCE_ACCEPT_RADIUS
from .errors import ConfigError
from .golden_ring import TAU

logger = logging.getLogger(__name__)

RGB = Tuple[int, int, int]

TRUE_WORDS = {'true', '1', 'yes'}
FALSE_WORDS = {'false', '0', 'no'}


@dataclass
class QuasicrystalSettings:
    """Acceptance and viewing windows of the quasicrystal sampler"""

    accept_kind: str = 'decagon'
    accept_radius: float = REFERENCE_ACCEPT_RADIUS
    accept_rotation: float = 0.0
    accept_closed: bool = True
    view_half_extent: float = 1.0
    view_closed: bool = True
    view_offset_x: float = 0.0
    view_offset_y: float = 0.0
    growth_factor: float = TAU
    map_to_unit_square: bool = True
    construction: str = 'cut_project'
    product_accept_length: float = TAU


@dataclass
class SamplerSettings:
    jitter_amount: float = 1.0
    farthest_random_start: bool = False


@dataclass
class ReconstructionSettings:
    shepard_k: int = 4
    shepard_power: float = 2.0
    shepard_eps: float = 1e-9


@dataclass
class RenderSettings:
    grout_color: RGB = (0, 0, 0)
    edge_color: RGB = (0, 0, 0)
    point_radius: int = 2
    background: RGB = (255, 255, 255)
    ramp_start: RGB = (0, 0, 96)
    ramp_end: RGB = (160, 255, 160)
    paint_depth: int = 1


@dataclass
class SpectrumSettings:
    size: int = 129
    fmax: float = 64.0
    realizations: int = 1
    profile_bins: int = 32
    peak_count: int = 20


@dataclass
class EvaluationSettings:
    methods: Tuple[str, ...] = ('shepard', 'gouraud')
    workers: int = 1
    test_image_size: int = 256


SECTIONS = {
    'quasicrystal': QuasicrystalSettings,
    'samplers': SamplerSettings,
    'reconstruction': ReconstructionSettings,
    'render': RenderSettings,
    'spectrum': SpectrumSettings,
    'evaluation': EvaluationSettings,
}


def _parse_value(raw: str, default: Any, key: str, line: Optional[int]) -> Any:
    """Parse raw text by the type of the field's default value"""
    text = raw.strip()
    try:
        if isinstance(default, bool):
            word = text.lower()
            if word in TRUE_WORDS:
                return True
            if word in FALSE_WORDS:
                return False
            raise ValueError(f"expected one of {sorted(TRUE_WORDS | FALSE_WORDS)}")
        if isinstance(default, int):
            return int(text)
        if isinstance(default, float):
            return float(text)
        if isinstance(default, tuple) and default and isinstance(default[0], int):
            parts = [int(p) for p in text.split(',')]
            if len(parts) != 3 or not all(0 <= p <= 255 for p in parts):
                raise ValueError("expected r,g,b with components in 0..255")
            return tuple(parts)
        if isinstance(default, tuple):
            return tuple(p.strip() for p in text.split(',') if p.strip())
        return text
    except ValueError as e:
        raise ConfigError(f"Bad value '{text}' for {key}: {e}", line)


class AppConfig:
    """Centralized settings and feature detection for QuasiSample"""

    def __init__(self):
        self.quasicrystal = QuasicrystalSettings()
        self.samplers = SamplerSettings()
        self.reconstruction = ReconstructionSettings()
        self.render = RenderSettings()
        self.spectrum = SpectrumSettings()
        self.evaluation = EvaluationSettings()
        self.feature_status: Dict[str, bool] = {}
        self._detect_all_features()

    def _detect_all_features(self):
        """Detect optional packages"""
        try:
            import PIL.Image  # noqa: F401
            self.feature_status['png'] = True
        except ImportError:
            self.feature_status['png'] = False

        try:
            import plotly.graph_objects  # noqa: F401
            self.feature_status['charts'] = True
        except ImportError:
            self.feature_status['charts'] = False

        logger.debug("Feature status: %s", self.feature_status)

    def is_available(self, feature_name: str) -> bool:
        """Check if a feature is available"""
        return self.feature_status.get(feature_name, False)

    def get_system_health(self) -> Dict[str, Any]:
        """Feature availability summary"""
        total = len(self.feature_status)
        enabled = sum(self.feature_status.values())
        return {
            'total_features': total,
            'enabled_features': enabled,
            'missing': [name for name, ok in self.feature_status.items() if not ok],
        }

    def section(self, name: str):
        if name not in SECTIONS:
            raise ConfigError(f"Unknown config section '{name}'")
        return getattr(self, name)

    def set_value(self, key: str, raw: str, line: Optional[int] = None):
        """Apply one 'section.field' = raw assignment"""
        if '.' not in key:
            raise ConfigError(f"Config key '{key}' must look like section.field", line)
        section_name, field_name = key.split('.', 1)
        if section_name not in SECTIONS:
            raise ConfigError(f"Unknown config section '{section_name}' in key '{key}'", line)
        section = getattr(self, section_name)
        names = {f.name for f in fields(section)}
        if field_name not in names:
            raise ConfigError(f"Unknown config key '{key}'", line)
        value = _parse_value(raw, getattr(section, field_name), key, line)
        setattr(section, field_name, value)

    def apply_lines(self, lines: Iterable[str]):
        """Apply key=value lines; '#' starts a comment"""
        for number, raw_line in enumerate(lines, start=1):
            text = raw_line.split('#', 1)[0].strip()
            if not text:
                continue
            if '=' not in text:
                raise ConfigError(f"Expected key=value, got '{text}'", number)
            key, value = text.split('=', 1)
            self.set_value(key.strip(), value, number)

    def load_file(self, path):
        """Apply a key=value config file"""
        with open(path, 'r', encoding='utf-8') as f:
            self.apply_lines(f.readlines())
        logger.info("Loaded config %s", Path(path).name)

    def to_dict(self) -> Dict[str, Dict[str, Any]]:
        return {name: asdict(getattr(self, name)) for name in SECTIONS}

    def config_hash(self) -> str:
        """sha256 of the canonical settings"""
        canonical = json.dumps(self.to_dict(), sort_keys=True, separators=(',', ':'), default=list)
        return hashlib.sha256(canonical.encode('utf-8')).hexdigest()

    def describe(self) -> List[str]:
        """Flattened 'section.field = value' lines"""
        lines = []
        for name, values in self.to_dict().items():
            for field_name, value in values.items():
                if isinstance(value, (tuple, list)):
                    value = ','.join(str(v) for v in value)
                lines.append(f"{name}.{field_name} = {value}")
        return lines


# Global instance
_app_config = None


def get_app_config() -> AppConfig:
    """Get the global application config instance"""
    global _app_config
    if _app_config is None:
        _app_config = AppConfig()
    return _app_config


def reset_app_config() -> AppConfig:
    """Replace the global instance with defaults"""
    global _app_config
    _app_config = AppConfig()
    return _app_config
