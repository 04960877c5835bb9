import math

import numpy as np
import pytest

from mle_phase.separability import (
    Dataset,
    SolverStatus,
    check_separation,
    check_single_variable_separation,
    load_dataset_csv,
)


def geometric_separation_oracle(x, y):
    """Brute-force separation check for p <= 2 (with intercept).

    Sweeps a fine angular grid of directions plus every direction
    orthogonal to a difference of two points, reducing each direction to
    the one-dimensional threshold test.  Separated means some (b0, b) != 0
    gets all margins >= 0 with at least one > 0.
    """
    n, p = x.shape

    def separable_1d(v):
        pos, neg = v[y > 0], v[y < 0]
        if pos.size == 0 or neg.size == 0:
            return True
        # threshold between the classes in either orientation; touching
        # ranges separate unless every point coincides
        if neg.max() <= pos.min() or pos.max() <= neg.min():
            return bool(v.max() > v.min())
        return False

    if np.all(y > 0) or np.all(y < 0):
        return True
    if p == 1:
        return separable_1d(x[:, 0])
    dirs = [
        np.array([math.cos(t), math.sin(t)])
        for t in np.linspace(0, math.pi, 3600, endpoint=False)
    ]
    for i in range(n):
        for j in range(i + 1, n):
            diff = x[i] - x[j]
            nrm = np.linalg.norm(diff)
            if nrm > 1e-12:
                dirs.append(np.array([-diff[1], diff[0]]) / nrm)
    return any(separable_1d(x @ d) for d in dirs)


class TestCheckSeparation:
    def test_two_points_split(self):
        data = Dataset(x=np.array([[-1.0], [1.0]]), y=np.array([-1.0, 1.0]))
        verdict = check_separation(data)
        assert verdict.separated and not verdict.mle_exists
        assert verdict.solver_status is SolverStatus.OPTIMAL
        b0, b = verdict.witness
        margins = data.y * (b0 + data.x @ b)
        assert margins.min() >= -1e-8 and margins.max() > 0
        assert verdict.lp_objective == pytest.approx(margins.sum(), abs=1e-9)

    def test_interleaved_labels_overlap(self):
        data = Dataset(
            x=np.array([[-1.0], [-0.5], [0.5], [1.0]]),
            y=np.array([1.0, -1.0, 1.0, -1.0]),
        )
        verdict = check_separation(data)
        assert not verdict.separated and verdict.mle_exists
        assert verdict.witness is None
        assert verdict.lp_objective <= 1e-7 * data.n

    def test_against_geometric_oracle(self):
        gen = np.random.default_rng(2718)
        mismatches = []
        for trial in range(200):
            n = int(gen.integers(2, 9))
            p = int(gen.integers(1, 3))
            x = gen.standard_normal((n, p))
            y = gen.choice([-1.0, 1.0], n)
            verdict = check_separation(Dataset(x=x, y=y))
            oracle = geometric_separation_oracle(x, y)
            if verdict.separated != oracle:
                mismatches.append((trial, n, p))
        assert not mismatches, mismatches

    def test_witness_margins_contract(self):
        gen = np.random.default_rng(31)
        for _ in range(50):
            n, p = int(gen.integers(2, 40)), int(gen.integers(1, 6))
            data = Dataset(x=gen.standard_normal((n, p)), y=gen.choice([-1.0, 1.0], n))
            verdict = check_separation(data)
            if verdict.witness is not None:
                b0, b = verdict.witness
                margins = data.y * (b0 + data.x @ b)
                assert margins.min() >= -1e-8
                assert margins.max() > 0

    def test_scale_invariance_of_verdict(self):
        gen = np.random.default_rng(32)
        for _ in range(30):
            n, p = int(gen.integers(2, 15)), int(gen.integers(1, 4))
            data = Dataset(x=gen.standard_normal((n, p)), y=gen.choice([-1.0, 1.0], n))
            base = check_separation(data).separated
            for c in (0.01, 7.3):
                scaled = Dataset(x=c * data.x, y=data.y)
                assert check_separation(scaled).separated == base

    def test_nonsingular_transform_invariance(self):
        gen = np.random.default_rng(33)
        for _ in range(25):
            n = int(gen.integers(3, 15))
            data = Dataset(x=gen.standard_normal((n, 3)), y=gen.choice([-1.0, 1.0], n))
            base = check_separation(data).separated
            while True:
                t = gen.standard_normal((3, 3))
                if abs(np.linalg.det(t)) > 1e-3:
                    break
            assert check_separation(Dataset(x=data.x @ t, y=data.y)).separated == base

    def test_label_flip_symmetry(self):
        gen = np.random.default_rng(34)
        for _ in range(25):
            n = int(gen.integers(2, 15))
            data = Dataset(x=gen.standard_normal((n, 2)), y=gen.choice([-1.0, 1.0], n))
            flipped = Dataset(x=data.x, y=-data.y)
            assert check_separation(data).separated == check_separation(flipped).separated

    def test_removing_rows_preserves_separation(self):
        gen = np.random.default_rng(35)
        found = 0
        for _ in range(60):
            n = int(gen.integers(4, 12))
            data = Dataset(x=gen.standard_normal((n, 2)), y=gen.choice([-1.0, 1.0], n))
            if not check_separation(data).separated:
                continue
            found += 1
            keep = gen.choice(n, size=n - 2, replace=False)
            sub = Dataset(x=data.x[keep], y=data.y[keep])
            assert check_separation(sub).separated
        assert found >= 10

    def test_degenerate_labels(self):
        data = Dataset(x=np.array([[0.3], [1.2], [-2.0]]), y=np.ones(3))
        verdict = check_separation(data)
        assert verdict.separated and verdict.degenerate_labels
        b0, b = verdict.witness
        assert b0 == 1.0 and np.all(b == 0)
        assert verdict.lp_objective == pytest.approx(3.0)

    def test_degenerate_labels_without_intercept_uses_lp(self):
        # all labels +1 but no intercept: separability needs a direction
        # with x_i'b >= 0 for all i, which interleaved signs prevent
        data = Dataset(x=np.array([[1.0], [-1.0]]), y=np.ones(2))
        verdict = check_separation(data, fit_intercept=False)
        assert verdict.degenerate_labels
        assert not verdict.separated

    def test_no_intercept_differs_from_intercept(self):
        # threshold at 1.5 separates, but every sign pattern x*b fails
        x = np.array([[1.0], [2.0], [3.0]])
        y = np.array([-1.0, 1.0, 1.0])
        assert check_separation(Dataset(x=x, y=y)).separated
        assert not check_separation(Dataset(x=x, y=y), fit_intercept=False).separated
        # sign-consistent data separate without an intercept too
        x2 = np.array([[-1.0], [2.0], [3.0]])
        assert check_separation(Dataset(x=x2, y=y), fit_intercept=False).separated

    def test_iteration_limit_surfaces_in_status(self):
        gen = np.random.default_rng(36)
        x = gen.standard_normal((40, 8))
        y = gen.choice([-1.0, 1.0], 40)
        verdict = check_separation(Dataset(x=x, y=y), max_iter=2)
        assert verdict.solver_status is SolverStatus.ITERATION_LIMIT
        assert verdict.witness is None

    def test_input_validation(self):
        with pytest.raises(ValueError):
            Dataset(x=np.array([[math.nan]]), y=np.array([1.0]))
        with pytest.raises(ValueError):
            Dataset(x=np.ones((2, 1)), y=np.array([1.0, 0.5]))
        data = Dataset(x=np.ones((2, 1)), y=np.array([1.0, -1.0]))
        with pytest.raises(ValueError):
            check_separation(data, tol=0.0)


class TestSingleVariableSeparation:
    def test_all_positive_labels(self):
        assert check_single_variable_separation(np.array([1.0, 2.0]), np.array([1.0, 1.0]))

    def test_threshold_split(self):
        v = np.array([1.0, 2.0, 3.0, 4.0])
        y = np.array([1.0, 1.0, -1.0, -1.0])
        assert check_single_variable_separation(v, y)

    def test_interleaved(self):
        v = np.array([1.0, 2.0, 3.0, 4.0])
        y = np.array([1.0, -1.0, 1.0, -1.0])
        assert not check_single_variable_separation(v, y)

    def test_matches_lp_on_random_instances(self):
        gen = np.random.default_rng(99)
        for _ in range(500):
            n = int(gen.integers(2, 12))
            v = gen.standard_normal(n)
            y = gen.choice([-1.0, 1.0], n)
            fast = check_single_variable_separation(v, y)
            lp = check_separation(Dataset(x=v[:, None], y=y)).separated
            assert fast == lp

    def test_validation(self):
        with pytest.raises(ValueError):
            check_single_variable_separation(np.array([1.0, math.inf]), np.array([1.0, -1.0]))
        with pytest.raises(ValueError):
            check_single_variable_separation(np.array([1.0, 2.0]), np.array([1.0, 2.0]))


class TestCsvLoader:
    def test_roundtrip_pm1(self, tmp_path):
        path = tmp_path / "d.csv"
        path.write_text("y,x1,x2\n1,0.5,-1.0\n-1,1.5,2.0\n")
        data = load_dataset_csv(path)
        assert data.n == 2 and data.p == 2
        assert list(data.y) == [1.0, -1.0]
        assert data.x[1, 1] == 2.0

    def test_zero_one_mapping_equivalence(self, tmp_path):
        a = tmp_path / "a.csv"
        b = tmp_path / "b.csv"
        a.write_text("y,x1\n1,0.5\n0,1.5\n1,-0.2\n")
        b.write_text("y,x1\n1,0.5\n-1,1.5\n1,-0.2\n")
        da, db = load_dataset_csv(a), load_dataset_csv(b)
        assert np.array_equal(da.y, db.y)
        va = check_separation(da)
        vb = check_separation(db)
        assert va.separated == vb.separated
        assert va.lp_objective == pytest.approx(vb.lp_objective)

    def test_column_order_free(self, tmp_path):
        path = tmp_path / "d.csv"
        path.write_text("x2,y,x1\n-1.0,1,0.5\n2.0,-1,1.5\n")
        data = load_dataset_csv(path)
        assert data.x[0, 0] == 0.5 and data.x[0, 1] == -1.0

    @pytest.mark.parametrize(
        "text",
        [
            "",
            "a,b\n1,2\n",
            "y,x1\n2,0.5\n",
            "y,x1\n1,abc\n",
            "y,x3\n1,0.5\n",
            "y,x1\n",
        ],
    )
    def test_rejects_malformed(self, tmp_path, text):
        path = tmp_path / "bad.csv"
        path.write_text(text)
        with pytest.raises(ValueError):
            load_dataset_csv(path)
