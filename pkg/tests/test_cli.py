import math

import pytest

from modules.cli import EXIT_OK, EXIT_RUNTIME, EXIT_USAGE, main, parse_size
from modules.errors import UsageError
from modules.formats.image_io import read_image
from modules.formats.point_io import read_points
from modules.formats.report_io import read_report


@pytest.fixture
def workspace(tmp_path):
    image = tmp_path / 'spiral.ppm'
    points = tmp_path / 'qc.csv'
    assert main(['testimage', '--kind', 'spiral', '--size', '64', '--out', str(image)]) == EXIT_OK
    assert main(['generate', '--strategy', 'quasicrystal', '--n', '300', '--out', str(points)]) == EXIT_OK
    return tmp_path, image, points


def test_parse_size():
    assert parse_size('640x480') == (640, 480)
    assert parse_size('128') == (128, 128)
    with pytest.raises(UsageError):
        parse_size('12x')


def test_generate_and_testimage(workspace):
    _, image, points = workspace
    assert read_image(image).shape == (64, 64, 3)
    seq = read_points(points)
    assert len(seq) == 300
    assert seq.points[0].tolist() == [0.5, 0.5]


def test_reconstruct_prints_psnr(workspace, capsys):
    tmp_path, image, points = workspace
    out = tmp_path / 'gouraud.ppm'
    code = main(['reconstruct', '--method', 'gouraud', '--points', str(points), '--image', str(image),
                 '--out', str(out)])
    assert code == EXIT_OK
    value = float(capsys.readouterr().out.strip())
    assert 5.0 < value < math.inf
    assert read_image(out).shape == (64, 64, 3)


def test_reconstruct_at_another_size(workspace, capsys):
    tmp_path, image, points = workspace
    out = tmp_path / 'big.ppm'
    assert main(['reconstruct', '--method', 'shepard', '--points', str(points), '--image', str(image),
                 '--out', str(out), '--size', '96x80']) == EXIT_OK
    assert read_image(out).shape == (80, 96, 3)
    assert float(capsys.readouterr().out) > 0


@pytest.mark.parametrize('style', ['mosaic', 'paint', 'voronoi', 'points'])
def test_render(workspace, style):
    tmp_path, image, points = workspace
    out = tmp_path / f'{style}.ppm'
    assert main(['render', '--style', style, '--points', str(points), '--image', str(image),
                 '--out', str(out)]) == EXIT_OK
    assert read_image(out).shape == (64, 64, 3)


def test_spectrum_outputs(workspace):
    tmp_path, _, points = workspace
    out = tmp_path / 'spec.ppm'
    profile = tmp_path / 'profile.csv'
    peaks = tmp_path / 'peaks.csv'
    code = main(['spectrum', '--points', str(points), '--out', str(out), '--size', '31', '--fmax', '15',
                 '--profile', str(profile), '--peaks', str(peaks)])
    assert code == EXIT_OK
    assert read_image(out).shape == (31, 31, 3)
    assert profile.read_text().startswith('radius,power')
    assert peaks.read_text().startswith('fx,fy,power')


def test_evaluate_writes_report(workspace):
    tmp_path, image, _ = workspace
    report_path = tmp_path / 'report.csv'
    code = main(['evaluate', '--image', str(image), '--strategies', 'periodic,quasicrystal',
                 '--counts', '16,64', '--methods', 'gouraud', '--out', str(report_path)])
    assert code == EXIT_OK
    report = read_report(report_path)
    assert len(report) == 4
    assert report.image_id == 'spiral.ppm'


def test_metrics(workspace):
    tmp_path, image, points = workspace
    out = tmp_path / 'card.csv'
    assert main(['metrics', '--points', str(points), '--image', str(image), '--out', str(out)]) == EXIT_OK
    assert 'covering_radius' in out.read_text().splitlines()[0]


def test_config_file_is_applied(workspace):
    tmp_path, _, _ = workspace
    cfg = tmp_path / 'run.cfg'
    cfg.write_text('quasicrystal.map_to_unit_square = true\n')
    out = tmp_path / 'p.csv'
    assert main(['--config', str(cfg), 'generate', '--strategy', 'periodic', '--n', '4',
                 '--out', str(out)]) == EXIT_OK


def test_config_prints_effective_settings(tmp_path, capsys):
    cfg = tmp_path / 'run.cfg'
    cfg.write_text('spectrum.fmax = 32\n')
    assert main(['--config', str(cfg), 'config']) == EXIT_OK
    lines = capsys.readouterr().out.splitlines()
    assert 'spectrum.fmax = 32.0' in lines
    assert 'quasicrystal.accept_kind = decagon' in lines


@pytest.mark.parametrize('argv', [
    ['generate', '--strategy', 'poisson', '--n', '10', '--out', 'unused.csv'],
    ['generate', '--strategy', 'random', '--n', '0', '--out', 'unused.csv'],
    ['testimage', '--kind', 'ramp', '--size', '8', '--out', 'unused.ppm'],
    ['testimage', '--kind', 'ramp', '--size', '32x16', '--out', 'unused.ppm'],
    ['generate', '--strategy', 'random'],
    ['frobnicate'],
])
def test_usage_errors(argv, tmp_path, monkeypatch):
    monkeypatch.chdir(tmp_path)
    assert main(argv) == EXIT_USAGE
    assert not (tmp_path / 'unused.csv').exists()
    assert not (tmp_path / 'unused.ppm').exists()


def test_bad_config_is_a_usage_error(tmp_path):
    cfg = tmp_path / 'bad.cfg'
    cfg.write_text('spectrum.size = huge\n')
    assert main(['--config', str(cfg), 'generate', '--strategy', 'periodic', '--n', '4',
                 '--out', str(tmp_path / 'p.csv')]) == EXIT_USAGE


def test_runtime_errors(tmp_path):
    broken = tmp_path / 'broken.ppm'
    broken.write_bytes(b'P5\n1 1\n255\n\x00')
    points = tmp_path / 'p.csv'
    points.write_text('x,y\n0.5,0.5\n')
    assert main(['reconstruct', '--method', 'gouraud', '--points', str(points), '--image', str(broken),
                 '--out', str(tmp_path / 'r.ppm')]) == EXIT_RUNTIME
    assert main(['metrics', '--points', str(tmp_path / 'missing.csv'), '--out', str(tmp_path / 'm.csv')]) == EXIT_RUNTIME
