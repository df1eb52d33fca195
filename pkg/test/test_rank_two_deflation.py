import math

import pytest
import torch

from tridc.core import SymTridiag, split_three
from tridc.errors import ValidationError
from tridc.globals import DTYPE
from tridc.kernels import qr_eigensolve
from tridc.rank_two import DeflationCase, RankTwoProblem, deflate_rank_two, form_rank_two

from test_utils import max_residual, oracle_eigvalsh, planted_deflation_problem, random_symtridiag, two_norm


def check_deflation(p, deflation, atol):
    """Resolved pairs are eigenpairs and, with the reduced spectrum, make up the whole."""
    norm = max(two_norm(p), 1.0)
    kept = [pair for pair in deflation.resolved if pair.silent_index is None]
    values = torch.tensor([pair.value for pair in kept], dtype=DTYPE)
    reduced = oracle_eigvalsh(deflation.reduced) if deflation.reduced.n else torch.zeros(0, dtype=DTYPE)
    merged = torch.sort(torch.cat([values, reduced])).values
    torch.testing.assert_close(merged, oracle_eigvalsh(p), rtol=0, atol=atol * norm)
    assert max_residual(p, deflation.resolved_values, deflation.resolved_vectors()) <= atol * norm


class TestFormRankTwo:
    def test_unit_blocks(self):
        t = SymTridiag([1.0, 2.0, 3.0], [0.5, -0.25])
        split = split_three(t, 1, 1)
        p, _ = form_rank_two(split, *(qr_eigensolve(b) for b in (split.t1, split.t2, split.t3)))
        assert p.v1.tolist() == [1.0, 1.0, 0.0]
        assert p.v2.tolist() == [0.0, 1.0, 1.0]
        assert p.betas == (0.5, -0.25)
        assert p.blocks == (1, 1, 1)

    def test_unit_rows(self):
        t = random_symtridiag(30, seed=4)
        split = split_three(t, 10, 10)
        p, _ = form_rank_two(split, *(qr_eigensolve(b) for b in (split.t1, split.t2, split.t3)))
        assert abs(float(p.v1 @ p.v1) - 2.0) <= 1e-13
        assert abs(float(p.v2 @ p.v2) - 2.0) <= 1e-13

    def test_similarity(self):
        t = random_symtridiag(20, seed=5)
        split = split_three(t, 7, 7)
        p, q = form_rank_two(split, *(qr_eigensolve(b) for b in (split.t1, split.t2, split.t3)))
        qd = q.to_dense()
        torch.testing.assert_close(qd.T @ t.to_dense() @ qd, p.to_dense(), rtol=0, atol=1e-13)

    def test_size_mismatch(self):
        t = random_symtridiag(6, seed=6)
        split = split_three(t, 2, 2)
        dec = qr_eigensolve(split.t1)
        with pytest.raises(ValidationError):
            form_rank_two(split, dec, dec, qr_eigensolve(t))


class TestDeflationCases:
    def test_zero_vectors(self):
        p = RankTwoProblem([2.0, 1.0, 3.0], [0.0] * 3, [0.0] * 3, 1.0, 1.0)
        deflation = deflate_rank_two(p)
        assert deflation.reduced.n == 0
        assert deflation.case_counts() == {"null-both": 3}
        assert sorted(deflation.resolved_values.tolist()) == [1.0, 2.0, 3.0]

    def test_rank_two_triple(self):
        # the third copy carries neither vector, so the plain zero test takes it
        p = RankTwoProblem([1.0, 1.0, 1.0], [0.5, 0.0, 0.0], [0.0, 0.5, 0.0], 1.0, 1.0)
        deflation = deflate_rank_two(p)
        assert [pair.value for pair in deflation.resolved] == [1.0]
        assert deflation.resolved[0].case == DeflationCase.NULL_BOTH
        assert deflation.reduced.n == 2
        assert deflation.reduced.d.tolist() == [1.0, 1.0]
        # the surviving duplicate pair has a rank-two block
        v1, v2 = deflation.reduced.v1, deflation.reduced.v2
        assert abs(float(v1[0] * v2[1] - v1[1] * v2[0])) > 1e-3
        check_deflation(p, deflation, 1e-12)

    def test_rank_one_triple(self):
        p = RankTwoProblem([0.0, 0.0, 0.0, 5.0], [1.0, 2.0, 3.0, 1.0], [2.0, 4.0, 6.0, 1.0], 1.0, 1.0)
        deflation = deflate_rank_two(p)
        at_zero = [pair for pair in deflation.resolved if pair.silent_index is None]
        assert len(at_zero) == 2
        assert all(abs(pair.value) <= 1e-14 for pair in at_zero)
        assert all(pair.case == DeflationCase.REPEATED_RANK1_ORTHOGONAL for pair in at_zero)
        assert deflation.reduced.n == 2
        check_deflation(p, deflation, 1e-12)

    def test_lone_discriminant(self):
        # d_1 = 1 is an eigenvalue: v1 vanishes there and 1 - b1 v1_0^2 / (d_1 - d_0) = 0
        p = RankTwoProblem([0.0, 1.0], [1.0, 0.0], [0.0, 1.0], 1.0, 1.0)
        deflation = deflate_rank_two(p)
        assert deflation.reduced.silent == (1,)
        (pair,) = deflation.resolved
        assert pair.case == DeflationCase.NULL_V1
        assert pair.value == 1.0
        assert max_residual(p, torch.tensor([1.0], dtype=DTYPE), pair.vector.reshape(2, 1)) <= 1e-15

    def test_lone_discriminant_second_vector(self):
        # v2 vanishes at d_0 = 0 and 1 - b2 sum_q v2_q^2 / (d_0 - d_q) = 1 - (0.25 + 1.5 / 2) = 0
        p = RankTwoProblem([0.0, 1.0, 2.0], [1.0, 0.5, 0.25], [0.0, 0.5, math.sqrt(1.5)], 1.0, -1.0)
        deflation = deflate_rank_two(p)
        assert deflation.reduced.silent == (0,)
        (pair,) = deflation.resolved
        assert pair.case == DeflationCase.NULL_V2
        assert pair.value == 0.0
        assert max_residual(p, torch.tensor([0.0], dtype=DTYPE), pair.vector.reshape(3, 1)) <= 1e-14
        check_deflation(p, deflation, 1e-12)

    def test_rank_one_pair_discriminant(self):
        # the survivor of the pair at 0 has a vanishing residue, so 0 is an eigenvalue twice
        p = RankTwoProblem([0.0, 0.0, 0.64 / 0.75], [0.6, 0.8, 0.2], [0.3, 0.4, 0.9], 1.0, -1.0)
        deflation = deflate_rank_two(p)
        by_case = {pair.case: pair for pair in deflation.resolved}
        assert len(deflation.resolved) == 2
        assert set(by_case) == {DeflationCase.REPEATED_RANK1_ORTHOGONAL, DeflationCase.REPEATED_RANK1_DISCRIMINANT}
        assert by_case[DeflationCase.REPEATED_RANK1_DISCRIMINANT].silent_index is not None
        assert all(abs(pair.value) <= 1e-15 for pair in deflation.resolved)
        assert deflation.case_counts()["repeated-rank1-discriminant"] == 1
        check_deflation(p, deflation, 1e-12)

    def test_generic_is_untouched(self):
        p = RankTwoProblem([0.0, 1.0, 2.0], [1.0, 0.5, 0.25], [0.3, -0.7, 0.9], 0.8, -1.1)
        deflation = deflate_rank_two(p)
        assert deflation.resolved == []
        assert deflation.reduced.n == 3
        assert set(deflation.case_counts()) == {"not-deflated"}

    def test_case_names(self):
        assert DeflationCase.from_string("repeated-rank2") == DeflationCase.REPEATED_RANK2
        with pytest.raises(ValueError):
            DeflationCase.from_string("case-5")


class TestDeflationProperties:
    @pytest.mark.parametrize("seed", range(100))
    def test_planted_structures(self, seed):
        p = planted_deflation_problem(seed)
        deflation = deflate_rank_two(p)
        reduced = deflation.reduced
        counts = deflation.case_counts()
        assert counts.get("null-both", 0) >= 1
        assert counts.get("repeated-rank1-orthogonal", 0) >= 1 + seed % 3
        # no pole more than twice, no coordinate without weight
        values, multiplicity = torch.unique(reduced.d, return_counts=True)
        assert int(multiplicity.max()) <= 2
        assert bool(((reduced.v1 != 0) | (reduced.v2 != 0)).all())
        check_deflation(p, deflation, 1e-10)

    @pytest.mark.parametrize("seed", range(10))
    def test_merge_problems(self, seed):
        t = random_symtridiag(15, seed)
        split = split_three(t, 5, 5)
        p, _ = form_rank_two(split, *(qr_eigensolve(b) for b in (split.t1, split.t2, split.t3)))
        check_deflation(p, deflate_rank_two(p), 1e-11)

    def test_generic_rank_two_triple(self):
        p = RankTwoProblem([1.0, 1.0, 1.0, 3.0], [0.5, -0.2, 0.4, 1.0], [0.1, 0.6, -0.3, 1.0], 1.0, 0.5)
        deflation = deflate_rank_two(p)
        (pair,) = [pair for pair in deflation.resolved if pair.silent_index is None]
        assert pair.case == DeflationCase.REPEATED_RANK2
        assert deflation.reduced.n == 3
        check_deflation(p, deflation, 1e-12)
