import numpy as np
import pytest

from gradematch.cluster import kmeans, kmeans_pp_init


def _blobs(rng, centers, per_blob, spread=0.05, dim=18):
    points = []
    for center in centers:
        base = np.zeros(dim)
        base[: len(center)] = center
        points.append(base + rng.normal(scale=spread, size=(per_blob, dim)))
    return np.vstack(points)


class TestInit:
    def test_k1_is_a_point(self):
        rng = np.random.default_rng(0)
        points = rng.normal(size=(10, 3))
        centers = kmeans_pp_init(points, 1, seed=5)
        assert any(np.array_equal(centers[0], p) for p in points)

    def test_k_equals_n_gives_permutation(self):
        rng = np.random.default_rng(1)
        points = rng.normal(size=(6, 4))
        centers = kmeans_pp_init(points, 6, seed=7)
        matched = {tuple(c) for c in centers}
        assert matched == {tuple(p) for p in points}

    def test_k_above_distinct_count_rejected(self):
        points = np.array([[0.0, 0.0], [0.0, 0.0], [1.0, 1.0]])
        with pytest.raises(ValueError, match="distinct"):
            kmeans_pp_init(points, 3, seed=0)

    def test_d2_sampling_hits_every_separated_cluster(self):
        rng = np.random.default_rng(3)
        points = _blobs(rng, [(0, 0), (50, 0), (0, 50)], per_blob=10)
        hit = 0
        for seed in range(100):
            centers = kmeans_pp_init(points, 3, seed=seed)
            blob_of = lambda c: int(np.argmin([np.abs(c[:2] - b).sum() for b in [(0, 0), (50, 0), (0, 50)]]))
            if len({blob_of(c) for c in centers}) == 3:
                hit += 1
        assert hit >= 95

    def test_same_seed_same_centers(self):
        rng = np.random.default_rng(4)
        points = rng.normal(size=(30, 5))
        assert np.array_equal(kmeans_pp_init(points, 4, seed=11), kmeans_pp_init(points, 4, seed=11))


class TestKmeans:
    def test_k_equals_n_zero_inertia(self):
        rng = np.random.default_rng(5)
        points = rng.normal(size=(8, 18))
        result = kmeans(points, 8, seed=2)
        assert result.inertia == pytest.approx(0.0, abs=1e-20)

    def test_identical_points_k1(self):
        points = np.tile([1.5, -2.0, 0.25], (12, 1))
        result = kmeans(points, 1, seed=9)
        assert np.allclose(result.centers[0], [1.5, -2.0, 0.25])
        assert result.inertia == 0.0

    def test_two_blob_recovery(self):
        rng = np.random.default_rng(6)
        points = _blobs(rng, [(0, 0), (10, 10)], per_blob=20)
        result = kmeans(points, 2, seed=3)
        blob_means = [points[:20].mean(axis=0), points[20:].mean(axis=0)]
        for mean in blob_means:
            assert min(np.linalg.norm(result.centers - mean, axis=1)) < 1e-6

    def test_inertia_non_increasing(self):
        rng = np.random.default_rng(7)
        for trial in range(20):
            points = rng.normal(size=(40, 6))
            result = kmeans(points, 5, seed=trial)
            history = result.inertia_history
            assert all(b <= a + 1e-9 for a, b in zip(history, history[1:]))

    def test_assignments_point_to_nearest_center(self):
        rng = np.random.default_rng(8)
        points = rng.normal(size=(50, 4))
        result = kmeans(points, 6, seed=1)
        dists = np.linalg.norm(points[:, None, :] - result.centers[None, :, :], axis=2)
        assert np.array_equal(result.assignments, np.argmin(dists, axis=1))

    def test_centers_are_member_means_at_convergence(self):
        rng = np.random.default_rng(9)
        points = rng.normal(size=(60, 3))
        result = kmeans(points, 4, seed=0, tol=1e-12, max_iter=500)
        for j in range(4):
            members = points[result.assignments == j]
            if len(members):
                assert np.allclose(result.centers[j], members.mean(axis=0), atol=1e-6)

    def test_same_seed_identical_result(self):
        rng = np.random.default_rng(10)
        points = rng.normal(size=(45, 7))
        a = kmeans(points, 5, seed=77)
        b = kmeans(points, 5, seed=77)
        assert np.array_equal(a.centers, b.centers)
        assert np.array_equal(a.assignments, b.assignments)
        assert a.inertia == b.inertia
