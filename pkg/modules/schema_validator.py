#!/usr/bin/env python3
"""
Parameter validation for QuasiSample requests
Checks identifiers and numeric parameters before any work starts
"""

from typing import Any, Dict, List, Optional, Sequence, Tuple

from .reconstruct import METHODS
from .render import STYLES
from .samplers import ALL_STRATEGIES
from .test_images import KINDS, MIN_SIZE


class ParameterValidator:
    """Validate command parameters; every check returns (is_valid, errors)"""

    @staticmethod
    def _choice(value: str, valid: Sequence[str], what: str) -> Tuple[bool, List[str]]:
        if value not in valid:
            return False, [f"Invalid {what}: '{value}'. Valid choices: {', '.join(valid)}"]
        return True, []

    @staticmethod
    def validate_strategy(strategy: str) -> Tuple[bool, List[str]]:
        return ParameterValidator._choice(strategy, ALL_STRATEGIES, 'strategy')

    @staticmethod
    def validate_style(style: str) -> Tuple[bool, List[str]]:
        return ParameterValidator._choice(style, STYLES, 'style')

    @staticmethod
    def validate_method(method: str) -> Tuple[bool, List[str]]:
        return ParameterValidator._choice(method, METHODS, 'method')

    @staticmethod
    def validate_testimage_kind(kind: str) -> Tuple[bool, List[str]]:
        return ParameterValidator._choice(kind, KINDS, 'test image kind')

    @staticmethod
    def validate_count(n: Any, what: str = 'n') -> Tuple[bool, List[str]]:
        """Sample counts are positive integers"""
        try:
            value = int(n)
        except (ValueError, TypeError):
            return False, [f"{what} must be an integer, got '{n}'"]
        if value != n and str(value) != str(n).strip():
            return False, [f"{what} must be an integer, got '{n}'"]
        if value < 1:
            return False, [f"{what} must be at least 1, got {value}"]
        return True, []

    @staticmethod
    def validate_spectrum_grid(size: Any, fmax: Any) -> Tuple[bool, List[str]]:
        errors = []
        try:
            k = int(size)
            if k < 3 or k % 2 == 0:
                errors.append(f"Spectrum size must be odd and at least 3, got {k}")
        except (ValueError, TypeError):
            errors.append(f"Spectrum size must be an integer, got '{size}'")
        try:
            if not float(fmax) > 0:
                errors.append(f"fmax must be positive, got {fmax}")
        except (ValueError, TypeError):
            errors.append(f"fmax must be a number, got '{fmax}'")
        return len(errors) == 0, errors

    @staticmethod
    def validate_image_size(width: Any, height: Any, test_image: bool = False) -> Tuple[bool, List[str]]:
        """At least 1x1, or MIN_SIZE for synthetic test images"""
        minimum = MIN_SIZE if test_image else 1
        errors = []
        for name, value in (('width', width), ('height', height)):
            try:
                if int(value) < minimum:
                    errors.append(f"Image {name} must be at least {minimum}, got {value}")
            except (ValueError, TypeError):
                errors.append(f"Image {name} must be an integer, got '{value}'")
        return len(errors) == 0, errors

    @staticmethod
    def validate_run_request(request: Dict[str, Any]) -> Tuple[bool, List[str]]:
        """
        Aggregate the checks that apply to one CLI request

        Args:
            request: parameter name to value; only present keys are checked

        Returns:
            Tuple of (is_valid, list of all error messages)
        """
        errors: List[str] = []

        def run(result: Tuple[bool, List[str]]):
            errors.extend(result[1])

        for strategy in _as_list(request.get('strategies', request.get('strategy'))):
            run(ParameterValidator.validate_strategy(strategy))
        for method in _as_list(request.get('methods', request.get('method'))):
            run(ParameterValidator.validate_method(method))
        if request.get('style') is not None:
            run(ParameterValidator.validate_style(request['style']))
        if request.get('kind') is not None:
            run(ParameterValidator.validate_testimage_kind(request['kind']))
        for n in _as_list(request.get('counts', request.get('n'))):
            run(ParameterValidator.validate_count(n))
        if request.get('workers') is not None:
            run(ParameterValidator.validate_count(request['workers'], 'workers'))
        if request.get('blocks') is not None:
            run(ParameterValidator.validate_count(request['blocks'], 'blocks'))
        if request.get('spectrum_size') is not None or request.get('fmax') is not None:
            run(ParameterValidator.validate_spectrum_grid(request.get('spectrum_size', 129), request.get('fmax', 64.0)))
        if request.get('size') is not None:
            w, h = request['size']
            run(ParameterValidator.validate_image_size(w, h, request.get('kind') is not None))
        return len(errors) == 0, errors


def _as_list(value: Optional[Any]) -> List[Any]:
    if value is None:
        return []
    if isinstance(value, (list, tuple)):
        return list(value)
    return [value]
