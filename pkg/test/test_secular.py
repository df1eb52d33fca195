import pytest
import torch

from tridc.errors import PoleError
from tridc.globals import DTYPE
from tridc.rank_two import (
    RankTwoProblem,
    RankTwoSecular,
    eigenvalue_count,
    g_signs,
    secular_determinant,
    secular_eval,
)

from test_utils import oracle_eigvalsh, random_generator, random_rank_two, uniform


def dense_secular(p, lam):
    """det(lambda I - M) / prod(lambda - d), the reference value of f."""
    n = p.n
    return float(torch.linalg.det(lam * torch.eye(n, dtype=DTYPE) - p.to_dense()) / torch.prod(lam - p.d))


def points_off_poles(p, count, seed, margin=0.05):
    gen = random_generator(seed)
    lo, hi = p.weyl_bounds()
    out = []
    while len(out) < count:
        lam = float(uniform(1, gen, lo - 0.5, hi + 0.5))
        if float((p.d - lam).abs().min()) >= margin:
            out.append(lam)
    return out


class TestSecularValue:
    def test_empty(self):
        p = RankTwoProblem(torch.zeros(0), torch.zeros(0), torch.zeros(0), 1.0, 1.0)
        e = secular_eval(p, 0.3)
        assert (e.value, e.derivative) == (1.0, 0.0)

    def test_single(self):
        p = RankTwoProblem([0.0], [1.0], [1.0], 1.0, 1.0)
        for lam in (0.5, 2.0, -3.0):
            assert abs(secular_eval(p, lam).value - (1.0 - 2.0 / lam)) <= 1e-15

    def test_orthogonal_pair(self):
        p = RankTwoProblem([0.0, 1.0], [1.0, 0.0], [0.0, 1.0], 1.0, 1.0)
        for lam in (0.5, 1.5, 2.0, 3.0):
            expected = 1.0 / (lam * (lam - 1.0)) - 1.0 / lam - 1.0 / (lam - 1.0) + 1.0
            assert abs(secular_eval(p, lam).value - expected) <= 1e-14
        assert abs(secular_eval(p, 2.0).value) <= 1e-15

    @pytest.mark.parametrize("seed", range(10))
    def test_matches_determinant_ratio(self, seed):
        p = random_rank_two(8, seed, signs="+-")
        for lam in points_off_poles(p, 5, seed):
            expected = dense_secular(p, lam)
            assert abs(secular_eval(p, lam).value - expected) <= 1e-9 * max(1.0, abs(expected))

    def test_pole(self):
        p = RankTwoProblem([0.0, 1.0], [1.0, 1.0], [1.0, 0.0], 1.0, 1.0)
        with pytest.raises(PoleError):
            secular_eval(p, 1.0)

    def test_support_restriction(self):
        p = RankTwoProblem([0.0, 1.0, 2.0, 3.0], [1.0, 0.5, 0.0, 0.0], [0.0, 0.5, 0.5, 0.0], 1.0, 2.0)
        ev = RankTwoSecular(p)
        assert ev.support_size == 3
        assert ev.evaluate(0.5).value == secular_eval(p, 0.5).value


class TestDeterminant:
    @pytest.mark.parametrize("seed", range(100))
    def test_product_identity(self, seed):
        n = 2 + seed % 9
        p = random_rank_two(n, seed, signs=("++", "--", "+-")[seed % 3])
        values = oracle_eigvalsh(p)
        mids = 0.5 * (values[1:] + values[:-1])
        mus = torch.cat([mids, values[:1] - 0.5, values[-1:] + 0.5])[:5]
        for mu in mus.tolist():
            if float((p.d - mu).abs().min()) < 1e-6:
                continue
            expected = float(torch.linalg.det(p.to_dense() - mu * torch.eye(n, dtype=DTYPE)))
            assert abs(secular_determinant(p, mu) - expected) <= 1e-9 * abs(expected)


class TestDerivative:
    @pytest.mark.parametrize("seed", range(50))
    def test_central_difference(self, seed):
        p = random_rank_two(6, seed, signs=("++", "--", "+-")[seed % 3])
        for lam in points_off_poles(p, 20, seed):
            h = 1e-6 * float((p.d - lam).abs().min())
            e = secular_eval(p, lam)
            fd = (secular_eval(p, lam + h).value - secular_eval(p, lam - h).value) / (2.0 * h)
            assert abs(e.derivative - fd) <= 1e-6 * max(1.0, abs(e.derivative), abs(e.value))


class TestLimits:
    def test_orthogonal_pair_residue(self):
        p = RankTwoProblem([0.0, 1.0], [1.0, 0.0], [0.0, 1.0], 1.0, 1.0)
        cls = g_signs(p)
        assert float(cls.gplus[0]) == -2.0
        assert float(cls.gminus[0]) == 2.0
        assert abs(secular_eval(p, 1e-8).value * 1e-8 - (-2.0)) <= 1e-6

    def test_double_pole(self):
        p = RankTwoProblem([0.0, 0.0, 1.0], [1.0, 0.2, 0.3], [0.1, 0.9, 0.4], 0.5, 2.0)
        cls = g_signs(p)
        assert cls.m == 2 and cls.is_multiple(0)
        assert float(cls.gplus[0]) == float(cls.gminus[0]) == 1.0

    @pytest.mark.parametrize("seed", range(20))
    def test_limit_signs(self, seed):
        p = random_rank_two(7, seed, signs=("++", "--", "+-")[seed % 3])
        cls = g_signs(p)
        gaps = p.d[1:] - p.d[:-1]
        for j in range(cls.m):
            d = float(cls.poles[j])
            step = 1e-9 * float(gaps.min())
            assert (secular_eval(p, d + step).value > 0) == (float(cls.gplus[j]) > 0)
            assert (secular_eval(p, d - step).value > 0) == (float(cls.gminus[j]) > 0)


class TestEigenvalueCount:
    @pytest.mark.parametrize("seed", range(20))
    def test_against_oracle(self, seed):
        p = random_rank_two(9, seed, signs=("++", "--", "+-")[seed % 3], duplicates=seed % 2)
        values = oracle_eigvalsh(p)
        lo, hi = p.weyl_bounds()
        for sigma in torch.linspace(lo - 0.1, hi + 0.1, 41, dtype=DTYPE).tolist():
            if float((values - sigma).abs().min()) < 1e-9 or float((p.d - sigma).abs().min()) < 1e-9:
                continue
            assert eigenvalue_count(p, sigma) == int((values < sigma).sum())
