#!/usr/bin/env python3
"""
Evaluation Sweep
Reconstruction PSNR over strategies, point counts, seeds and methods
"""

import logging
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from pathlib import Path
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np
import pandas as pd

from .app_config import AppConfig, get_app_config
from .errors import QuasiSampleError, UsageError
from .formats.filename_utils import FilenameHandler
from .formats.image_io import write_image
from .output_manager import get_output_manager
from .reconstruct import METHODS, image_size, psnr, reconstruct, sample_colors
from .samplers import ALL_STRATEGIES, generate, is_stochastic

logger = logging.getLogger(__name__)

REPORT_COLUMNS = ['strategy', 'n', 'seed', 'method', 'psnr_db', 'error']
SORT_COLUMNS = ['strategy', 'n', 'seed', 'method']


@dataclass
class EvalReport:
    """Sweep results with the source image id and the hash of the settings used"""

    frame: pd.DataFrame
    image_id: str
    config_hash: str

    def __post_init__(self):
        frame = self.frame.reindex(columns=REPORT_COLUMNS)
        frame['error'] = frame['error'].fillna('')
        frame['psnr_db'] = frame['psnr_db'].astype(float)
        self.frame = frame.sort_values(SORT_COLUMNS, kind='mergesort').reset_index(drop=True)

    def __len__(self) -> int:
        return len(self.frame)

    @property
    def failures(self) -> pd.DataFrame:
        return self.frame[self.frame['error'] != '']

    def summary(self) -> pd.DataFrame:
        """Mean PSNR per strategy, n and method over seeds, failures excluded"""
        ok = self.frame[self.frame['error'] == '']
        return (ok.groupby(['strategy', 'n', 'method'], sort=True)['psnr_db']
                .mean().reset_index())


def _cell_tasks(strategies: Sequence[str], counts: Sequence[int], seeds: Sequence[int],
                config: AppConfig) -> List[Tuple[str, int, int]]:
    tasks = []
    for strategy in strategies:
        used = list(seeds) if is_stochastic(strategy, config) else [0]
        for n in counts:
            for seed in sorted(set(used)):
                tasks.append((strategy, int(n), int(seed)))
    return tasks


def evaluate_cell(args) -> Tuple[List[Dict], Dict[str, np.ndarray]]:
    """
    Generate one point set and score every method on it

    Returns:
        Tuple of (report rows, reconstructions keyed by method when requested)
    """
    image, strategy, n, seed, methods, config, keep_images = args
    rows = []
    images = {}
    try:
        seq = generate(strategy, n, seed, config)
        sampled = sample_colors(image, seq)
    except QuasiSampleError as e:
        logger.warning("Evaluation cell %s n=%d seed=%d failed: %s", strategy, n, seed, e)
        return [dict(strategy=strategy, n=n, seed=seed, method=m, psnr_db=np.nan, error=str(e))
                for m in methods], images
    for method in methods:
        try:
            out = reconstruct(method, sampled, image_size(image), config.reconstruction)
            rows.append(dict(strategy=strategy, n=n, seed=seed, method=method, psnr_db=psnr(image, out), error=''))
            if keep_images:
                images[method] = out
        except QuasiSampleError as e:
            logger.warning("Evaluation cell %s n=%d seed=%d %s failed: %s", strategy, n, seed, method, e)
            rows.append(dict(strategy=strategy, n=n, seed=seed, method=method, psnr_db=np.nan, error=str(e)))
    return rows, images


def run_evaluation(image: np.ndarray, strategies: Sequence[str], counts: Sequence[int], seeds: Sequence[int],
                   methods: Optional[Sequence[str]] = None, config: Optional[AppConfig] = None,
                   workers: int = 1, artifacts_dir: Optional[str] = None, image_id: str = 'image') -> EvalReport:
    """
    Sweep every (strategy, n, seed, method) cell

    Deterministic strategies run once with seed 0. A failing cell becomes an
    error row and the sweep carries on.
    """
    config = config or get_app_config()
    methods = list(methods or config.evaluation.methods)
    for strategy in strategies:
        if strategy not in ALL_STRATEGIES:
            raise UsageError(f"Unknown strategy '{strategy}'", ALL_STRATEGIES)
    for method in methods:
        if method not in METHODS:
            raise UsageError(f"Unknown reconstruction method '{method}'", METHODS)
    tasks = _cell_tasks(strategies, counts, seeds, config)
    keep = artifacts_dir is not None
    args = [(image, s, n, seed, methods, config, keep) for s, n, seed in tasks]
    logger.info("Evaluating %d cells x %d methods with %d worker(s)", len(tasks), len(methods), workers)

    if workers > 1 and len(args) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(evaluate_cell, args))
    else:
        results = [evaluate_cell(a) for a in args]

    rows = []
    for (strategy, n, seed), (cell_rows, images) in zip(tasks, results):
        rows.extend(cell_rows)
        if keep:
            _write_artifacts(Path(artifacts_dir), strategy, n, seed, images)

    report = EvalReport(pd.DataFrame(rows, columns=REPORT_COLUMNS), image_id, config.config_hash())
    if len(report.failures):
        logger.warning("%d of %d evaluation rows failed", len(report.failures), len(report))
    return report


def _write_artifacts(directory: Path, strategy: str, n: int, seed: int, images: Dict[str, np.ndarray]):
    manager = get_output_manager()
    manager.allow_directory(directory)
    names = FilenameHandler()
    for method, img in images.items():
        path = directory / names.cell_artifact_name(strategy, n, seed, method)
        manager.write(path, 'reconstruction', lambda p, img=img: write_image(img, p))
