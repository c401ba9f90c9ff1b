import math

import numpy as np
import pytest

from modules.app_config import QuasicrystalSettings, get_app_config
from modules.errors import UsageError
from modules.metrics import nearest_neighbor_distances
from modules.samplers import (
    ALL_STRATEGIES, UNIT_MAX, clamp_unit, farthest_point, generate, halton, hexagonal, is_stochastic,
    jittered, periodic, quasicrystal, radical_inverse, random_uniform,
)

FARTHEST_START = [(0.5, 0.5), (0.0, 0.0), (0.0, UNIT_MAX), (UNIT_MAX, 0.0), (UNIT_MAX, UNIT_MAX), (0.0, 0.5)]


def dense_grid_max_gap(points, resolution=201):
    """Largest nearest-site distance over a dense grid of the closed square"""
    g = np.linspace(0.0, 1.0, resolution)
    gx, gy = np.meshgrid(g, g)
    q = np.column_stack([gx.ravel(), gy.ravel()])
    d2 = ((q[:, None, :] - points[None, :, :]) ** 2).sum(axis=2)
    return float(np.sqrt(d2.min(axis=1).max()))


class TestSimpleStrategies:
    def test_periodic_grid(self):
        seq = periodic(9)
        assert seq.metadata['grid'] == 3
        assert seq.points[0].tolist() == pytest.approx([1 / 6, 1 / 6])
        assert seq.points[3].tolist() == pytest.approx([1 / 6, 0.5])
        assert seq.in_unit_square()

    def test_periodic_partial_grid(self):
        seq = periodic(10)
        assert seq.metadata['grid'] == 4
        assert len(seq) == 10

    def test_jittered_stays_in_cells(self):
        seq = jittered(100, seed=5)
        m = seq.metadata['grid']
        cells = np.floor(seq.points * m).astype(int)
        expected = np.column_stack([np.arange(100) % m, np.arange(100) // m])
        assert np.array_equal(cells, expected)
        assert seq.in_unit_square()

    def test_jitter_zero_is_periodic(self):
        assert np.allclose(jittered(16, seed=3, amount=0.0).points, periodic(16).points)

    def test_jitter_amount_checked(self):
        with pytest.raises(UsageError):
            jittered(4, seed=0, amount=1.5)

    def test_seeded_strategies_are_reproducible(self):
        assert jittered(50, 7) == jittered(50, 7)
        assert random_uniform(50, 7) == random_uniform(50, 7)
        assert not np.array_equal(random_uniform(50, 7).points, random_uniform(50, 8).points)

    def test_radical_inverse(self):
        assert radical_inverse(np.array([1, 2, 3, 4]), 2).tolist() == [0.5, 0.25, 0.75, 0.125]
        assert radical_inverse(np.array([1, 2, 3]), 3).tolist() == pytest.approx([1 / 3, 2 / 3, 1 / 9])

    def test_halton_prefix_property(self):
        assert np.array_equal(halton(100).points[:30], halton(30).points)
        assert halton(1).points.tolist() == [[0.5, 1 / 3]]

    def test_hexagonal_rows(self):
        seq = hexagonal(60)
        assert len(seq) == 60
        assert seq.in_unit_square()
        ys = np.unique(np.round(seq.points[:, 1], 12))
        assert np.allclose(np.diff(ys), math.sqrt(3) / 2 * seq.metadata['spacing'])

    def test_clamp_unit(self):
        pts = clamp_unit(np.array([[1.0, -0.5], [0.25, 2.0]]))
        assert pts.tolist() == [[UNIT_MAX, 0.0], [0.25, UNIT_MAX]]

    @pytest.mark.parametrize('n', [0, -3, 2.5])
    def test_bad_counts(self, n):
        with pytest.raises(UsageError):
            periodic(n)


class TestFarthestPoint:
    def test_start_sequence(self):
        seq = farthest_point(6)
        assert [tuple(p) for p in seq.points.tolist()] == FARTHEST_START

    def test_prefix_property(self):
        assert np.array_equal(farthest_point(40).points[:15], farthest_point(15).points)

    def test_each_point_is_the_farthest(self):
        seq = farthest_point(25)
        pts = seq.points
        for k in range(6, 25):
            chosen = np.min(np.hypot(*(pts[:k] - pts[k]).T))
            sampled = dense_grid_max_gap(pts[:k])
            # grid spacing 0.005, so the true maximum is within half a diagonal
            assert sampled <= chosen + 1e-9
            assert chosen <= sampled + 0.004

    def test_gaps_never_grow(self):
        pts = farthest_point(60).points
        gaps = [np.min(np.hypot(*(pts[:k] - pts[k]).T)) for k in range(1, 60)]
        assert all(b <= a + 1e-12 for a, b in zip(gaps, gaps[1:]))

    def test_random_start_uses_seed(self):
        a = farthest_point(10, seed=1, random_start=True)
        b = farthest_point(10, seed=1, random_start=True)
        c = farthest_point(10, seed=2, random_start=True)
        assert a == b
        assert not np.array_equal(a.points, c.points)


class TestQuasicrystal:
    def test_first_point_is_the_view_centre(self):
        seq = quasicrystal(5)
        assert seq.points[0].tolist() == [0.5, 0.5]

    def test_reference_set_fills_at_default_window(self):
        seq = quasicrystal(1035)
        assert seq.metadata['candidates'] == 1035
        assert seq.in_unit_square()

    def test_growth_keeps_prefixes(self):
        small = quasicrystal(300)
        big = quasicrystal(2000)
        assert big.metadata['accept_radius'] > small.metadata['accept_radius']
        assert np.array_equal(big.points[:300], small.points)

    @pytest.mark.parametrize('n', [64, 256, 1024])
    def test_sequences_are_prefixes_of_four_times_longer_runs(self, n):
        assert np.array_equal(quasicrystal(4 * n).points[:n], quasicrystal(n).points)

    def test_view_coordinates_when_unmapped(self):
        settings = QuasicrystalSettings(map_to_unit_square=False)
        seq = quasicrystal(11, settings)
        assert np.allclose(np.hypot(*seq.points[1:].T), 1.0)

    def test_disk_window(self):
        seq = quasicrystal(50, QuasicrystalSettings(accept_kind='disk', accept_radius=10.0))
        assert len(seq) == 50

    def test_product_construction(self):
        seq = quasicrystal(40, QuasicrystalSettings(construction='product'))
        assert len(seq) == 40
        assert seq.in_unit_square()
        assert len({tuple(p) for p in seq.points.tolist()}) == 40

    def test_unknown_construction(self):
        with pytest.raises(UsageError):
            quasicrystal(10, QuasicrystalSettings(construction='tiling'))


class TestGenerate:
    @pytest.mark.parametrize('strategy', ALL_STRATEGIES)
    def test_every_strategy_fills_the_unit_square(self, strategy):
        seq = generate(strategy, 64, seed=3)
        assert len(seq) == 64
        assert seq.strategy == strategy
        assert seq.in_unit_square()

    def test_unknown_strategy_lists_choices(self):
        with pytest.raises(UsageError, match='periodic'):
            generate('blue-noise', 10)

    def test_stochastic_flags(self):
        config = get_app_config()
        assert is_stochastic('random', config)
        assert is_stochastic('jittered', config)
        assert not is_stochastic('quasicrystal', config)
        assert not is_stochastic('farthest', config)
        config.samplers.farthest_random_start = True
        assert is_stochastic('farthest', config)

    def test_deterministic_strategies_ignore_seed(self):
        assert generate('quasirandom', 20, seed=1) == generate('quasirandom', 20, seed=9)

    @pytest.mark.slow
    @pytest.mark.parametrize('strategy', ['quasicrystal', 'farthest'])
    def test_spacing_beats_random_by_a_wide_margin(self, strategy):
        tight = nearest_neighbor_distances(generate('random', 4096, seed=0).points).min()
        spread = nearest_neighbor_distances(generate(strategy, 4096).points).min()
        assert spread >= 5.0 * tight
