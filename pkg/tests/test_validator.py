import pytest

from modules.schema_validator import ParameterValidator


class TestChoices:
    @pytest.mark.parametrize('check, good, bad', [
        (ParameterValidator.validate_strategy, 'quasicrystal', 'poisson'),
        (ParameterValidator.validate_method, 'gouraud', 'bicubic'),
        (ParameterValidator.validate_style, 'mosaic', 'sketch'),
        (ParameterValidator.validate_testimage_kind, 'checker', 'noise'),
    ])
    def test_choice(self, check, good, bad):
        assert check(good) == (True, [])
        ok, errors = check(bad)
        assert not ok
        assert f"'{bad}'" in errors[0] and 'Valid choices' in errors[0]


class TestNumbers:
    @pytest.mark.parametrize('n', [1, 500, '64'])
    def test_counts_accepted(self, n):
        assert ParameterValidator.validate_count(n)[0]

    @pytest.mark.parametrize('n', [0, -2, 2.5, 'ten', None])
    def test_counts_rejected(self, n):
        assert not ParameterValidator.validate_count(n)[0]

    def test_spectrum_grid(self):
        assert ParameterValidator.validate_spectrum_grid(129, 64.0) == (True, [])
        ok, errors = ParameterValidator.validate_spectrum_grid(128, 0)
        assert not ok and len(errors) == 2

    def test_image_size(self):
        assert ParameterValidator.validate_image_size(1, 1)[0]
        assert not ParameterValidator.validate_image_size(8, 8, test_image=True)[0]
        assert not ParameterValidator.validate_image_size(0, 'x')[0]


class TestRunRequest:
    def test_collects_every_error(self):
        ok, errors = ParameterValidator.validate_run_request({
            'strategies': ['periodic', 'blue'],
            'counts': [16, 0],
            'methods': ['shepard'],
            'workers': 0,
        })
        assert not ok
        assert len(errors) == 3

    def test_single_values(self):
        assert ParameterValidator.validate_run_request({'strategy': 'random', 'n': 10, 'style': 'paint'})[0]
        assert ParameterValidator.validate_run_request({'kind': 'spiral', 'size': (64, 64), 'blocks': 8})[0]
        assert not ParameterValidator.validate_run_request({'kind': 'spiral', 'size': (8, 8)})[0]

    def test_empty_request_is_valid(self):
        assert ParameterValidator.validate_run_request({}) == (True, [])
