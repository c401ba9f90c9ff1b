#!/usr/bin/env python3
"""
QuasiSample command line
Subcommands for sampling, reconstruction, rendering, spectra and evaluation sweeps
"""

import argparse
import logging
import sys
from pathlib import Path
from typing import Callable, Dict, List, Optional, Tuple

import numpy as np

from .app_config import get_app_config
from .errors import ConfigError, QuasiSampleError, UsageError
from .evaluation import run_evaluation
from .formats.filename_utils import FilenameHandler
from .formats.image_io import read_image, write_image
from .formats.point_io import read_points, write_points
from .formats.report_io import (order_chart, profile_chart, report_to_csv, sweep_chart,
                                write_chart, write_report)
from .metrics import sampling_scorecard
from .output_manager import get_output_manager
from .reconstruct import METHODS, image_size, psnr, reconstruct, sample_colors
from .render import STYLES, render
from .samplers import ALL_STRATEGIES, generate
from .schema_validator import ParameterValidator
from .spectrum import find_peaks, power_spectrum, radial_profile, spectrum_image
from .test_images import KINDS, testimage

logger = logging.getLogger(__name__)

LOG_FORMAT = '%(levelname)s %(name)s: %(message)s'
EXIT_OK = 0
EXIT_RUNTIME = 1
EXIT_USAGE = 2


def parse_size(text: str) -> Tuple[int, int]:
    """'WxH' or a single number for a square"""
    parts = text.lower().split('x')
    try:
        if len(parts) == 1:
            w = h = int(parts[0])
        elif len(parts) == 2:
            w, h = int(parts[0]), int(parts[1])
        else:
            raise ValueError(text)
    except ValueError:
        raise UsageError(f"Invalid size '{text}': expected WxH, e.g. 512x512")
    return w, h


def _int_list(text: str) -> List[int]:
    try:
        return [int(v) for v in text.split(',') if v.strip()]
    except ValueError:
        raise UsageError(f"Expected a comma-separated list of integers, got '{text}'")


def _str_list(text: str) -> List[str]:
    return [v.strip() for v in text.split(',') if v.strip()]


def _check(request: Dict) -> None:
    is_valid, errors = ParameterValidator.validate_run_request(request)
    if not is_valid:
        raise UsageError('; '.join(errors))


def _write(path: str, kind: str, writer: Callable[[Path], Optional[int]]) -> int:
    is_valid, message = FilenameHandler().validate_output_path(path)
    if not is_valid:
        raise UsageError(message)
    manager = get_output_manager()
    manager.allow(path)
    return manager.write(path, kind, writer)


def _source_and_size(args) -> Tuple[np.ndarray, Tuple[int, int]]:
    image = read_image(args.image)
    size = parse_size(args.size) if args.size else image_size(image)
    _check({'size': size})
    return image, size


def cmd_generate(args) -> int:
    _check({'strategy': args.strategy, 'n': args.n})
    config = get_app_config()
    seq = generate(args.strategy, args.n, args.seed, config)
    _write(args.out, 'points', lambda p: write_points(seq, p))
    if args.chart:
        fig = order_chart(seq)
        _write(args.chart, 'chart', lambda p: write_chart(fig, p))
    return EXIT_OK


def cmd_reconstruct(args) -> int:
    _check({'method': args.method})
    config = get_app_config()
    image, size = _source_and_size(args)
    sampled = sample_colors(image, read_points(args.points))
    out = reconstruct(args.method, sampled, size, config.reconstruction)
    _write(args.out, 'image', lambda p: write_image(out, p))
    # PSNR is always measured at the source resolution
    if size != image_size(image):
        out = reconstruct(args.method, sampled, image_size(image), config.reconstruction)
    print(f"{psnr(image, out):.4f}")
    return EXIT_OK


def cmd_render(args) -> int:
    _check({'style': args.style})
    config = get_app_config()
    image, size = _source_and_size(args)
    sampled = sample_colors(image, read_points(args.points))
    out = render(args.style, sampled, size, config.render)
    _write(args.out, 'image', lambda p: write_image(out, p))
    return EXIT_OK


def cmd_spectrum(args) -> int:
    config = get_app_config()
    size = args.spectrum_size if args.spectrum_size is not None else config.spectrum.size
    fmax = args.fmax if args.fmax is not None else config.spectrum.fmax
    _check({'spectrum_size': size, 'fmax': fmax})
    seq = read_points(args.points)
    grid = power_spectrum(seq, size, fmax)
    _write(args.out, 'image', lambda p: write_image(spectrum_image(grid), p))
    profile = radial_profile(grid, config.spectrum.profile_bins)
    if args.profile:
        _write(args.profile, 'profile', lambda p: profile.to_csv(p, index=False, lineterminator='\n'))
    if args.peaks:
        peaks = find_peaks(grid, config.spectrum.peak_count)
        _write(args.peaks, 'peaks', lambda p: peaks.to_csv(p, index=False, lineterminator='\n'))
    if args.chart:
        fig = profile_chart(profile)
        _write(args.chart, 'chart', lambda p: write_chart(fig, p))
    return EXIT_OK


def cmd_evaluate(args) -> int:
    config = get_app_config()
    strategies = _str_list(args.strategies)
    counts = _int_list(args.counts)
    seeds = _int_list(args.seeds)
    methods = _str_list(args.methods) if args.methods else list(config.evaluation.methods)
    workers = args.workers if args.workers is not None else config.evaluation.workers
    _check({'strategies': strategies, 'counts': counts, 'methods': methods, 'workers': workers})
    if not seeds:
        raise UsageError("--seeds needs at least one seed")
    image = read_image(args.image)
    report = run_evaluation(image, strategies, counts, seeds, methods, config, workers,
                            artifacts_dir=args.artifacts_dir, image_id=Path(args.image).name)
    _write(args.out, 'report', lambda p: write_report(report, p))
    if args.chart:
        fig = sweep_chart(report)
        _write(args.chart, 'chart', lambda p: write_chart(fig, p))
    logger.info("Evaluation finished: %d rows, %d failed", len(report), len(report.failures))
    logger.debug("Report:\n%s", report_to_csv(report))
    return EXIT_OK


def cmd_testimage(args) -> int:
    size = parse_size(args.size)
    if size[0] != size[1]:
        raise UsageError(f"Test images are square, got {size[0]}x{size[1]}")
    _check({'kind': args.kind, 'size': size, 'blocks': args.blocks})
    img = testimage(args.kind, size[0], args.blocks)
    _write(args.out, 'image', lambda p: write_image(img, p))
    return EXIT_OK


def cmd_metrics(args) -> int:
    seq = read_points(args.points)
    image = read_image(args.image) if args.image else None
    card = sampling_scorecard(seq, image, get_app_config())
    _write(args.out, 'scorecard', lambda p: card.to_csv(p, index=False, lineterminator='\n'))
    return EXIT_OK


def cmd_config(args) -> int:
    """Print the effective settings after --config is applied"""
    config = get_app_config()
    for line in config.describe():
        print(line)
    health = config.get_system_health()
    logger.info("Optional features: %d of %d available", health['enabled_features'], health['total_features'])
    for name in health['missing']:
        logger.warning("Optional feature '%s' is unavailable", name)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog='quasisample',
        description="Golden-ratio quasicrystal sampling and sampling-pattern evaluation",
    )
    verbosity = parser.add_mutually_exclusive_group()
    verbosity.add_argument('--verbose', '-v', action='store_true', help="debug logging")
    verbosity.add_argument('--quiet', '-q', action='store_true', help="warnings and errors only")
    parser.add_argument('--config', help="key=value settings file, e.g. quasicrystal.accept_radius = 15")
    sub = parser.add_subparsers(dest='command', metavar='COMMAND')
    sub.required = True

    p = sub.add_parser('generate', help="write a point sequence")
    p.add_argument('--strategy', required=True, help=f"one of {', '.join(ALL_STRATEGIES)}")
    p.add_argument('--n', type=int, required=True)
    p.add_argument('--seed', type=int, default=0)
    p.add_argument('--out', required=True, help="points CSV")
    p.add_argument('--chart', help="HTML chart of the point order")
    p.set_defaults(handler=cmd_generate)

    p = sub.add_parser('reconstruct', help="rebuild an image from its samples; prints PSNR")
    p.add_argument('--method', required=True, help=f"one of {', '.join(METHODS)}")
    p.add_argument('--points', required=True)
    p.add_argument('--image', required=True)
    p.add_argument('--out', required=True)
    p.add_argument('--size', help="output WxH, defaults to the source size")
    p.set_defaults(handler=cmd_reconstruct)

    p = sub.add_parser('render', help="stylised rendering from samples")
    p.add_argument('--style', required=True, help=f"one of {', '.join(STYLES)}")
    p.add_argument('--points', required=True)
    p.add_argument('--image', required=True)
    p.add_argument('--out', required=True)
    p.add_argument('--size', help="output WxH, defaults to the source size")
    p.set_defaults(handler=cmd_render)

    p = sub.add_parser('spectrum', help="power spectrum of a point set")
    p.add_argument('--points', required=True)
    p.add_argument('--out', required=True, help="spectrum image")
    p.add_argument('--profile', help="radial profile CSV")
    p.add_argument('--peaks', help="strongest peaks CSV")
    p.add_argument('--size', dest='spectrum_size', type=int, help="grid size K (odd)")
    p.add_argument('--fmax', type=float)
    p.add_argument('--chart', help="HTML chart of the radial profile")
    p.set_defaults(handler=cmd_spectrum)

    p = sub.add_parser('evaluate', help="PSNR sweep over strategies, counts and seeds")
    p.add_argument('--image', required=True)
    p.add_argument('--strategies', required=True, help="comma-separated")
    p.add_argument('--counts', required=True, help="comma-separated")
    p.add_argument('--seeds', default='0', help="comma-separated")
    p.add_argument('--methods', help="comma-separated, defaults to evaluation.methods")
    p.add_argument('--out', required=True, help="report CSV")
    p.add_argument('--workers', type=int)
    p.add_argument('--chart', help="HTML chart of the sweep")
    p.add_argument('--artifacts-dir', help="directory for per-cell reconstructions")
    p.set_defaults(handler=cmd_evaluate)

    p = sub.add_parser('testimage', help="synthetic test image")
    p.add_argument('--kind', required=True, help=f"one of {', '.join(KINDS)}")
    p.add_argument('--size', required=True)
    p.add_argument('--out', required=True)
    p.add_argument('--blocks', type=int, default=8, help="checker blocks per side")
    p.set_defaults(handler=cmd_testimage)

    p = sub.add_parser('metrics', help="sampling-quality scorecard")
    p.add_argument('--points', required=True)
    p.add_argument('--image')
    p.add_argument('--out', required=True, help="scorecard CSV")
    p.set_defaults(handler=cmd_metrics)

    p = sub.add_parser('config', help="print the effective settings")
    p.set_defaults(handler=cmd_config)
    return parser


def configure_logging(verbose: bool = False, quiet: bool = False):
    level = logging.DEBUG if verbose else logging.WARNING if quiet else logging.INFO
    logging.basicConfig(level=level, format=LOG_FORMAT, stream=sys.stderr)


def main(argv: Optional[List[str]] = None) -> int:
    """
    Run one subcommand

    Returns:
        0 on success, 2 for usage and config errors, 1 for runtime failures
    """
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return e.code if isinstance(e.code, int) else EXIT_USAGE
    configure_logging(args.verbose, args.quiet)

    try:
        if args.config:
            get_app_config().load_file(args.config)
        return args.handler(args)
    except (UsageError, ConfigError) as e:
        logger.error("%s", e)
        return EXIT_USAGE
    except (QuasiSampleError, OSError) as e:
        logger.error("%s", e)
        return EXIT_RUNTIME


if __name__ == "__main__":
    sys.exit(main())
