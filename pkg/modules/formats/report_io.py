#!/usr/bin/env python3
"""
Report Formats
Evaluation report CSV and plotly HTML charts for sweeps, spectra and point order
"""

import io
import logging
from pathlib import Path
from typing import Optional

import numpy as np
import pandas as pd

from ..app_config import get_app_config
from ..errors import UsageError
from ..evaluation import REPORT_COLUMNS, EvalReport
from ..sequence import SampleSequence

logger = logging.getLogger(__name__)

META_PREFIX = '# '


def report_to_csv(report: EvalReport) -> str:
    """CSV text with two metadata comment lines; infinite PSNR is written as inf"""
    body = report.frame.to_csv(index=False, lineterminator='\n', float_format='%.6f')
    return f"{META_PREFIX}image_id={report.image_id}\n{META_PREFIX}config_hash={report.config_hash}\n{body}"


def write_report(report: EvalReport, path) -> int:
    data = report_to_csv(report).encode('utf-8')
    Path(path).write_bytes(data)
    return len(data)


def read_report(path) -> EvalReport:
    text = Path(path).read_text(encoding='utf-8')
    meta = {}
    for line in text.splitlines():
        if not line.startswith(META_PREFIX):
            break
        key, _, value = line[len(META_PREFIX):].partition('=')
        meta[key.strip()] = value.strip()
    frame = pd.read_csv(io.StringIO(text), comment='#', keep_default_na=False,
                        dtype={'strategy': str, 'method': str, 'error': str})
    frame['psnr_db'] = pd.to_numeric(frame['psnr_db'], errors='coerce')
    return EvalReport(frame[REPORT_COLUMNS], meta.get('image_id', ''), meta.get('config_hash', ''))


def _plotly_express():
    if not get_app_config().is_available('charts'):
        raise UsageError("Charts need plotly; install it or drop the --chart option")
    import plotly.express as px
    return px


def sweep_chart(report: EvalReport, title: Optional[str] = None):
    """PSNR against point count, one line per strategy, one panel per method"""
    px = _plotly_express()
    frame = report.summary().replace([np.inf, -np.inf], np.nan)
    fig = px.line(
        frame, x='n', y='psnr_db', color='strategy', facet_col='method', markers=True,
        title=title or f"PSNR sweep ({report.image_id})",
        labels={'n': 'points', 'psnr_db': 'PSNR (dB)'},
    )
    fig.update_xaxes(type='log')
    return fig


def profile_chart(profile: pd.DataFrame, title: str = "Radial power spectrum"):
    px = _plotly_express()
    fig = px.line(profile, x='radius', y='power', title=title, markers=True)
    fig.add_hline(y=1.0, line_dash='dot')
    return fig


def order_chart(seq: SampleSequence, title: Optional[str] = None):
    """Points coloured by rank, y axis pointing down like the image"""
    px = _plotly_express()
    frame = seq.to_frame()
    frame['rank'] = np.arange(len(frame))
    fig = px.scatter(frame, x='x', y='y', color='rank', title=title or f"{seq.strategy} order (n={len(seq)})")
    fig.update_yaxes(autorange='reversed', scaleanchor='x', scaleratio=1)
    fig.update_layout(height=700)
    return fig


def write_chart(fig, path) -> int:
    path = Path(path)
    fig.write_html(str(path), include_plotlyjs=True)
    logger.debug("Chart %s written to %s", fig.layout.title.text, path.name)
    return path.stat().st_size
