import math

import numpy as np
import pytest

from modules.errors import UsageError
from modules.evaluation import REPORT_COLUMNS, run_evaluation
from modules.output_manager import get_output_manager


@pytest.fixture
def image():
    from modules.test_images import testimage
    return testimage('spiral', 32)


def test_rows_cover_the_sweep(image, fresh_singletons):
    report = run_evaluation(image, ['periodic', 'random'], [16, 64], [0, 1], ['shepard', 'gouraud'],
                            fresh_singletons, image_id='spiral.ppm')
    assert list(report.frame.columns) == REPORT_COLUMNS
    # periodic is deterministic and runs with seed 0 only
    assert len(report) == (2 * 1 + 2 * 2) * 2
    assert set(report.frame.loc[report.frame['strategy'] == 'periodic', 'seed']) == {0}
    assert report.failures.empty
    assert report.image_id == 'spiral.ppm'
    assert report.config_hash == fresh_singletons.config_hash()


def test_repeatable(image):
    a = run_evaluation(image, ['jittered', 'quasicrystal'], [32], [5])
    b = run_evaluation(image, ['jittered', 'quasicrystal'], [32], [5])
    assert a.frame.equals(b.frame)


def test_more_points_score_higher(image):
    report = run_evaluation(image, ['quasicrystal'], [16, 512], [0], ['gouraud'])
    psnr = report.frame.set_index('n')['psnr_db']
    assert psnr[512] > psnr[16]


def test_failing_cells_become_error_rows(image):
    report = run_evaluation(image, ['periodic'], [2, 16], [0], ['shepard'])
    failed = report.failures
    assert failed['n'].tolist() == [2]
    assert 'at least 4' in failed['error'].iloc[0]
    assert math.isnan(failed['psnr_db'].iloc[0])
    ok = report.frame[report.frame['error'] == '']
    assert ok['n'].tolist() == [16]


def test_summary_means_over_seeds(image):
    report = run_evaluation(image, ['random'], [32], [0, 1, 2], ['gouraud'])
    summary = report.summary()
    assert len(summary) == 1
    assert summary['psnr_db'].iloc[0] == pytest.approx(report.frame['psnr_db'].mean())


@pytest.mark.parametrize('strategies, methods', [(['poisson'], ['gouraud']), (['random'], ['nearest'])])
def test_unknown_names(image, strategies, methods):
    with pytest.raises(UsageError):
        run_evaluation(image, strategies, [16], [0], methods)


def test_artifacts(image, tmp_path):
    run_evaluation(image, ['periodic'], [16], [0], ['gouraud'], artifacts_dir=str(tmp_path / 'cells'))
    assert (tmp_path / 'cells' / 'periodic_16_0_gouraud.ppm').exists()
    assert get_output_manager().summary()['kind'].tolist() == ['reconstruction']


@pytest.mark.slow
def test_workers_match_serial(image):
    serial = run_evaluation(image, ['random', 'farthest'], [16, 32], [0, 1], workers=1)
    pooled = run_evaluation(image, ['random', 'farthest'], [16, 32], [0, 1], workers=2)
    assert np.array_equal(serial.frame['psnr_db'].to_numpy(), pooled.frame['psnr_db'].to_numpy())


ORDERING_STRATEGIES = ['periodic', 'quasicrystal', 'farthest', 'jittered', 'quasirandom', 'random']


@pytest.fixture(scope='module')
def spiral_sweep():
    from modules.test_images import testimage
    report = run_evaluation(testimage('spiral', 256), ORDERING_STRATEGIES, [4225], [0, 1, 2, 3, 4],
                            ['shepard', 'gouraud'], workers=1)
    assert report.failures.empty
    return report.summary()


@pytest.mark.slow
@pytest.mark.parametrize('method', ['shepard', 'gouraud'])
def test_quasicrystal_ordering_on_the_spiral(spiral_sweep, method):
    psnr = spiral_sweep[spiral_sweep['method'] == method].set_index('strategy')['psnr_db']
    assert sorted(psnr.index) == sorted(ORDERING_STRATEGIES)
    assert psnr.idxmin() == 'random'
    assert psnr['quasicrystal'] >= psnr['random'] + 0.3
    assert psnr['quasicrystal'] >= psnr['periodic'] - 1.5
