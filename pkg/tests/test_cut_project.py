import math

import numpy as np
import pytest

from modules.cut_project import (
    REFERENCE_ACCEPT_RADIUS, Interval, Region2D, enumerate_2d, phase_eval, phase_eval_many, phase_points,
    progressive_order, qc1d, qc2d, qc2d_prefix_region, qc2d_product, rank_points,
)
from modules.errors import EnumerationBoundError, UsageError
from modules.golden_ring import TAU, embedding_matrix
from modules.metrics import nearest_neighbor_distances

REFERENCE_COUNT = 1035
SMALL_DECAGON_COUNT = 39
REFERENCE_MIN_NN = 0.034441854
REFERENCE_MAX_NN = 0.090169944

# origin, then the ten units zeta^j ordered by the angle of their star images
FIRST_RANKS = [
    (0, 0, 0, 0), (1, 0, 0, 0), (0, 0, -1, 0), (-1, 1, -1, 1), (0, 1, 0, 0), (0, 0, 0, -1),
    (-1, 0, 0, 0), (0, 0, 1, 0), (1, -1, 1, -1), (0, -1, 0, 0), (0, 0, 0, 1),
]


def brute_force(accept_radius, view_half, view_center, bound):
    """Direct scan of every 4-tuple with |n_k| <= bound"""
    r = np.arange(-bound, bound + 1)
    n = np.stack(np.meshgrid(r, r, r, r, indexing='ij'), axis=-1).reshape(-1, 4)
    k = np.arange(4)
    x = n @ np.cos(2 * math.pi * k / 10)
    y = n @ np.sin(2 * math.pi * k / 10)
    sx = n @ np.cos(6 * math.pi * k / 10)
    sy = n @ np.sin(6 * math.pi * k / 10)
    support = np.full(len(n), -np.inf)
    for j in range(10):
        angle = (2 * j + 1) * math.pi / 10
        support = np.maximum(support, sx * math.cos(angle) + sy * math.sin(angle))
    keep = ((np.abs(x - view_center[0]) <= view_half + 1e-12) & (np.abs(y - view_center[1]) <= view_half + 1e-12)
            & (support <= accept_radius * math.cos(math.pi / 10) + 1e-12))
    return {tuple(row) for row in n[keep].tolist()}


class TestQc1d:
    @pytest.mark.parametrize('length', [1.0, 1.3, TAU, 2.0, 2.5])
    def test_three_tile_law(self, length):
        points = qc1d(Interval(-length / 2, length / 2), Interval.closed(0.0, 60.0))
        gaps = np.diff([p.position for p in points])
        assert len(np.unique(np.round(gaps, 9))) <= 3
        ratios = gaps / gaps.min()
        for ratio in ratios:
            assert min(abs(ratio - t) for t in (1.0, TAU, TAU ** 2)) < 1e-9

    @pytest.mark.parametrize('seed', [101, 202, 303, 404])
    def test_three_tile_law_on_random_windows(self, seed):
        rng = np.random.default_rng(seed)
        view = Interval.closed(-50.0, 50.0)
        for _ in range(250):
            # length drawn from (1, tau^2]
            length = 1.0 + (TAU ** 2 - 1.0) * (1.0 - rng.random())
            centre = rng.uniform(-1.0, 1.0)
            points = qc1d(Interval(centre - length / 2, centre + length / 2), view)
            gaps = np.diff([p.position for p in points])
            assert len(np.unique(np.round(gaps, 9))) <= 3
            ratios = gaps / gaps.min()
            assert np.all(np.min(np.abs(ratios[:, None] - np.array([1.0, TAU, TAU ** 2])), axis=1) < 1e-9)

    def test_points_are_sorted_and_ranked(self):
        points = qc1d(Interval(0.0, 1.0), Interval.closed(-5.0, 5.0))
        positions = [p.position for p in points]
        assert positions == sorted(positions)
        assert [p.rank for p in points] == list(range(len(points)))
        for p in points:
            assert p.position == pytest.approx(p.coeffs.a + p.coeffs.b * TAU)
            assert 0.0 <= p.star_image < 1.0

    def test_half_open_window_excludes_upper_end(self):
        # star image of 1 + 0*tau is exactly 1
        closed = qc1d(Interval.closed(0.0, 1.0), Interval.closed(0.5, 1.5))
        half_open = qc1d(Interval(0.0, 1.0), Interval.closed(0.5, 1.5))
        assert 1.0 in [p.position for p in closed]
        assert 1.0 not in [p.position for p in half_open]

    def test_empty_windows(self):
        assert qc1d(Interval.empty(), Interval.closed(0.0, 1.0)) == []
        assert qc1d(Interval(0.0, 1.0), Interval.empty()) == []

    def test_oversized_window_rejected(self):
        with pytest.raises(EnumerationBoundError):
            qc1d(Interval(0.0, 2000.0), Interval.closed(0.0, 1.0))

    def test_interval_needs_order(self):
        with pytest.raises(UsageError):
            Interval(1.0, 0.0)


class TestQc2d:
    def test_reference_count(self, reference_coeffs):
        assert len(reference_coeffs) == REFERENCE_COUNT

    def test_reference_window_values(self, reference_windows_pair):
        accept, view = reference_windows_pair
        assert accept.radius == pytest.approx(15.3262379212, abs=1e-9)
        assert REFERENCE_ACCEPT_RADIUS == pytest.approx(TAU ** 5 + TAU ** 3)
        assert view.bbox() == (-1.0, 1.0, -1.0, 1.0)

    def test_no_duplicates_and_lexicographic(self, reference_coeffs):
        rows = [tuple(r) for r in reference_coeffs.tolist()]
        assert len(set(rows)) == len(rows)
        assert rows == sorted(rows)

    def test_tiny_disk_holds_only_the_origin(self):
        coeffs = enumerate_2d(Region2D.disk(0.001), Region2D.square(1.0))
        assert coeffs.tolist() == [[0, 0, 0, 0]]

    def test_small_decagon_count(self):
        assert len(qc2d(Region2D.decagon(TAU ** 2), Region2D.square(1.0))) == SMALL_DECAGON_COUNT

    def test_small_decagon_matches_brute_force(self):
        got = {tuple(r) for r in enumerate_2d(Region2D.decagon(TAU ** 2), Region2D.square(1.0)).tolist()}
        assert got == brute_force(TAU ** 2, 1.0, (0.0, 0.0), 12)

    def test_random_windows_match_brute_force(self):
        rng = np.random.default_rng(2024)
        _, minv = embedding_matrix()
        for _ in range(20):
            radius = rng.uniform(1.0, 3.0)
            half = rng.uniform(0.3, 1.0)
            center = tuple(rng.uniform(-0.5, 0.5, size=2))
            extent = np.array([abs(center[0]) + half, abs(center[1]) + half, radius, radius])
            bound = int(np.ceil((np.abs(minv) @ extent).max()))
            assert bound <= 14
            got = enumerate_2d(Region2D.decagon(radius), Region2D.square(half, center=center))
            assert {tuple(r) for r in got.tolist()} == brute_force(radius, half, center, bound)

    def test_positions_and_stars_in_windows(self, reference_points, reference_windows_pair):
        accept, view = reference_windows_pair
        positions = np.array([p.position for p in reference_points])
        stars = np.array([p.star_image for p in reference_points])
        assert np.all(view.contains(positions))
        assert np.all(accept.contains(stars))

    def test_degenerate_regions_are_empty(self):
        assert qc2d(Region2D.disk(0.0), Region2D.square(1.0)) == []
        assert qc2d(Region2D.decagon(5.0), Region2D.rectangle((1.0, 0.0))) == []

    def test_enumeration_bound(self):
        with pytest.raises(EnumerationBoundError):
            enumerate_2d(Region2D.decagon(1e7), Region2D.square(1.0))

    def test_unknown_region_kind(self):
        with pytest.raises(UsageError, match='Valid choices'):
            Region2D('hexagon')

    def test_delone_property(self, reference_positions):
        nn = nearest_neighbor_distances(reference_positions)
        assert nn.min() == pytest.approx(REFERENCE_MIN_NN, abs=1e-8)
        assert nn.max() == pytest.approx(REFERENCE_MAX_NN, abs=1e-8)
        assert nn.max() / nn.min() == pytest.approx(TAU ** 2, rel=1e-6)

    def test_inflated_window_is_a_superset(self, reference_coeffs, reference_windows_pair):
        accept, view = reference_windows_pair
        grown = {tuple(r) for r in enumerate_2d(accept.scaled(TAU), view).tolist()}
        assert {tuple(r) for r in reference_coeffs.tolist()} <= grown

    def test_ten_fold_symmetry_in_inscribed_disk(self, reference_positions):
        inner = reference_positions[np.hypot(*reference_positions.T) <= 1.0 - 1e-9]
        c, s = math.cos(math.pi / 5), math.sin(math.pi / 5)
        rotated = inner @ np.array([[c, s], [-s, c]])
        for p in rotated:
            assert np.min(np.hypot(*(reference_positions - p).T)) < 1e-9

    def test_ten_fold_symmetry_with_disk_view(self):
        coeffs = enumerate_2d(Region2D.decagon(REFERENCE_ACCEPT_RADIUS), Region2D.disk(1.0))
        points = qc2d(Region2D.decagon(REFERENCE_ACCEPT_RADIUS), Region2D.disk(1.0))
        positions = np.array([p.position for p in points])
        rotated = np.array([(p.coeffs * p.coeffs.unit(1)).coeffs for p in points])
        assert {tuple(r) for r in rotated.tolist()} == {tuple(r) for r in coeffs.tolist()}
        assert len(positions) == len(coeffs)


class TestProgressiveOrder:
    def test_first_ranks(self, reference_points, reference_windows_pair):
        accept, _ = reference_windows_pair
        ranked = sorted(rank_points(reference_points, accept), key=lambda p: p.rank)
        assert [p.coeffs.coeffs for p in ranked[:len(FIRST_RANKS)]] == FIRST_RANKS

    def test_sequence_is_a_permutation(self, reference_points, reference_windows_pair):
        accept, _ = reference_windows_pair
        seq = progressive_order(reference_points, accept)
        assert len(seq) == REFERENCE_COUNT
        assert tuple(seq.points[0]) == (0.0, 0.0)
        original = {p.position for p in reference_points}
        assert {tuple(p) for p in seq.points.tolist()} == original

    def test_single_point(self):
        points = qc2d(Region2D.disk(0.001), Region2D.square(1.0))
        seq = progressive_order(points, Region2D.disk(0.001))
        assert len(seq) == 1
        assert seq.metadata['ranked'][0].rank == 0

    @pytest.mark.parametrize('k', [2, 11, 50, 200, 600])
    def test_prefix_is_a_shrunk_window(self, reference_points, reference_windows_pair, k):
        accept, view = reference_windows_pair
        ranked = sorted(rank_points(reference_points, accept), key=lambda p: p.rank)
        order = [p.coeffs.coeffs for p in ranked]
        shrunk = qc2d_prefix_region(ranked, k, accept)
        got = {p.coeffs.coeffs for p in qc2d(shrunk, view)}
        assert set(order[:k]) <= got
        assert got == set(order[:len(got)])

    def test_prefix_ending_a_shell_is_exact(self, reference_points, reference_windows_pair):
        accept, view = reference_windows_pair
        ranked = rank_points(reference_points, accept)
        shrunk = qc2d_prefix_region(ranked, 11, accept)
        assert len(qc2d(shrunk, view)) == 11

    def test_disk_window_orders_by_radius(self):
        accept = Region2D.disk(6.0)
        points = rank_points(qc2d(accept, Region2D.square(1.0)), accept)
        ranked = sorted(points, key=lambda p: p.rank)
        radii = [math.hypot(*p.star_image) for p in ranked]
        assert all(b >= a - 1e-12 for a, b in zip(radii, radii[1:]))


class TestProduct:
    def test_product_is_grid_of_1d_sets(self):
        ax = Interval(-0.8, 0.8)
        view = Region2D.square(1.0)
        points = qc2d_product(ax, ax, view)
        xs = {p.position for p in qc1d(ax, Interval.closed(-1.0, 1.0))}
        positions = np.array([p.position for p in points])
        assert np.all(view.contains(positions))
        assert set(positions[:, 0].tolist()) <= xs
        assert set(positions[:, 1].tolist()) <= xs
        assert len(points) == len(xs) ** 2


class TestPhaseFunction:
    def test_origin_value(self):
        assert phase_eval((0.0, 0.0)) == 10.0

    def test_bounded_by_ten(self):
        rng = np.random.default_rng(3)
        values = phase_eval_many(rng.uniform(-3, 3, size=(500, 2)))
        assert np.all(values <= 10.0 + 1e-9)
        assert np.all(values >= -10.0 - 1e-9)

    def test_imaginary_residue_vanishes_on_random_points(self):
        rng = np.random.default_rng(2024)
        z = rng.uniform(-10.0, 10.0, size=(10 ** 4, 2))
        w = (z[:, 0] + 1j * z[:, 1]) * 2 * TAU ** 4
        zeta = np.exp(2j * math.pi * np.arange(10) / 10)
        # <u, w> = Re(u * conj(w))
        terms = np.exp(2j * math.pi * (zeta[None, :] * np.conj(w)[:, None]).real)
        total = terms.sum(axis=1)
        assert np.abs(total.imag).max() < 1e-9
        assert phase_eval_many(z) == pytest.approx(total.real, abs=1e-9)

    def test_value_off_the_origin(self):
        # direct ten-term cosine sum in double precision
        assert phase_eval((0.1, 0.2)) == pytest.approx(-0.975192438595, abs=1e-9)

    def test_high_threshold_growth_stops_at_the_origin(self):
        # the best unit step from the origin reaches only f = 3.2055
        seq = phase_points(9.0, Region2D.disk(5.0), 10 ** 4)
        assert len(seq) == 1
        assert seq.metadata['tested'] == 10
        assert seq.metadata['below_threshold'] == 10

    def test_threshold_above_maximum_is_empty(self):
        seq = phase_points(10.5, Region2D.disk(2.0), 50)
        assert len(seq) == 0

    def test_threshold_ten_keeps_origin(self):
        seq = phase_points(10.0, Region2D.disk(2.0), 50)
        assert seq.points.tolist() == [[0.0, 0.0]]

    def test_lowest_threshold_accepts_everything(self):
        seq = phase_points(-10.0, Region2D.disk(1.5), 30)
        assert len(seq) == 30
        assert seq.metadata['below_threshold'] == 0
        assert np.all(Region2D.disk(1.5).contains(seq.points))

    def test_accepted_points_pass_threshold(self):
        seq = phase_points(2.0, Region2D.disk(2.0), 40)
        assert np.all(phase_eval_many(seq.points[1:]) >= 2.0)
        nn = nearest_neighbor_distances(seq.points)
        assert len(seq) < 2 or nn.min() > 1e-9

    def test_max_points_must_be_positive(self):
        with pytest.raises(UsageError):
            phase_points(0.0, Region2D.disk(1.0), 0)
