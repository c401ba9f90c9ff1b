import pytest

from modules.errors import UsageError
from modules.output_manager import get_output_manager


def write_text(text):
    def writer(path):
        path.write_text(text)
    return writer


def test_refuses_paths_not_named(tmp_path):
    manager = get_output_manager()
    with pytest.raises(UsageError, match='Refusing'):
        manager.write(tmp_path / 'stray.txt', 'points', write_text('x'))
    assert not (tmp_path / 'stray.txt').exists()


def test_allowed_file_is_written_and_logged(tmp_path):
    manager = get_output_manager()
    target = tmp_path / 'nested' / 'out.txt'
    manager.allow(target)
    assert manager.write(target, 'points', write_text('hello')) == 5
    summary = manager.summary()
    assert summary['kind'].tolist() == ['points']
    assert summary['bytes'].tolist() == [5]


def test_directory_allows_direct_children_only(tmp_path):
    manager = get_output_manager()
    manager.allow_directory(tmp_path / 'cells')
    assert manager.is_allowed(tmp_path / 'cells' / 'a.ppm')
    assert not manager.is_allowed(tmp_path / 'cells' / 'deeper' / 'a.ppm')
    assert not manager.is_allowed(tmp_path / 'elsewhere.ppm')


def test_clear(tmp_path):
    manager = get_output_manager()
    manager.allow(tmp_path / 'a.txt')
    manager.write(tmp_path / 'a.txt', 'report', write_text('1'))
    manager.clear()
    assert manager.summary().empty
    assert not manager.is_allowed(tmp_path / 'a.txt')
