import pytest
import torch

from tridc.cli import EXIT_FAIL, EXIT_IO, EXIT_OK, EXIT_SOLVER, EXIT_USAGE, MatrixKind, main
from tridc.core import laplacian_eigenvalues, read_matrix, write_matrix
from tridc.core.generators import random_tridiag
from tridc.core.matrix import SymTridiag
from tridc.errors import ConvergenceError
from tridc.globals import DTYPE


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


class TestGen:
    def test_laplacian(self, tmp_path, capsys):
        path = str(tmp_path / "lap.txt")
        code, out, _ = run(capsys, "gen", "laplacian", "3", "-o", path)
        assert code == EXIT_OK and out == ""
        assert read_matrix(path).n == 9

    def test_deterministic(self, capsys):
        _, a, _ = run(capsys, "gen", "random-tridiag", "50", "--seed", "7")
        _, b, _ = run(capsys, "gen", "random-tridiag", "50", "--seed", "7")
        assert a == b and a.startswith("symtridiag 50\n")

    def test_kinds(self):
        assert MatrixKind.from_string("glued") == MatrixKind.GLUED

    def test_bad_size(self, capsys):
        code, out, err = run(capsys, "gen", "glued", "0")
        assert code == EXIT_USAGE and out == "" and "size" in err

    def test_unwritable(self, tmp_path, capsys):
        code, _, err = run(capsys, "gen", "laplacian", "2", "-o", str(tmp_path / "missing" / "x.txt"))
        assert code == EXIT_IO and err


class TestSolve:
    def test_diagonal(self, tmp_path, capsys):
        path = str(tmp_path / "d.txt")
        write_matrix(SymTridiag([3.0, 1.0, 2.0], [0.0, 0.0]), path)
        code, out, _ = run(capsys, "solve", path)
        assert code == EXIT_OK
        assert out == "1\n2\n3\n"

    def test_laplacian_analytic(self, tmp_path, capsys):
        path = str(tmp_path / "lap.txt")
        run(capsys, "gen", "laplacian", "3", "-o", path)
        code, out, _ = run(capsys, "solve", path, "--base-cutoff", "3")
        assert code == EXIT_OK
        values = torch.tensor([float(x) for x in out.split()], dtype=DTYPE)
        torch.testing.assert_close(values, laplacian_eigenvalues(3), rtol=1e-11, atol=0)

    def test_solvers_agree(self, tmp_path, capsys):
        path = str(tmp_path / "r.txt")
        write_matrix(random_tridiag(40, seed=2), path)
        outs = {}
        for solver in ("qr", "rtdc"):
            code, out, _ = run(capsys, "solve", path, "--solver", solver, "--base-cutoff", "6")
            assert code == EXIT_OK
            outs[solver] = torch.tensor([float(x) for x in out.split()], dtype=DTYPE)
        torch.testing.assert_close(outs["rtdc"], outs["qr"], rtol=0, atol=1e-12)

    def test_vectors_out(self, tmp_path, capsys):
        path, vec = str(tmp_path / "r.txt"), str(tmp_path / "v.txt")
        write_matrix(random_tridiag(10, seed=3), path)
        code, _, _ = run(capsys, "solve", path, "--naive-vectors", "--base-cutoff", "3", "--vectors-out", vec)
        assert code == EXIT_OK
        with open(vec) as f:
            rows = [line.split() for line in f]
        assert len(rows) == 10 and all(len(r) == 10 for r in rows)

    @pytest.mark.parametrize(
        "text",
        ["symtridiag 0\n", "symtridiag 3\n1 2 3\n4\n", "densesym 2\n1 2\n3 4\n", "hello\n"],
    )
    def test_malformed_input(self, tmp_path, capsys, text):
        path = tmp_path / "bad.txt"
        path.write_text(text)
        code, out, err = run(capsys, "solve", str(path))
        assert code == EXIT_USAGE and out == "" and err.startswith("tridc: error:")

    def test_invalid_utf8(self, tmp_path, capsys):
        path = tmp_path / "bad.txt"
        path.write_bytes(b"symtridiag 2\n1 \xff\n0.5\n")
        code, out, err = run(capsys, "solve", str(path))
        assert code == EXIT_USAGE and out == "" and err.startswith("tridc: error:")
        assert "UTF-8" in err

    def test_missing_file(self, tmp_path, capsys):
        code, out, err = run(capsys, "solve", str(tmp_path / "nope.txt"))
        assert code == EXIT_IO and out == ""

    def test_unknown_solver(self, tmp_path, capsys):
        code, _, _ = run(capsys, "solve", str(tmp_path / "nope.txt"), "--solver", "lapack")
        assert code == EXIT_USAGE

    def test_solver_error(self, tmp_path, capsys, monkeypatch):
        path = str(tmp_path / "r.txt")
        write_matrix(random_tridiag(5, seed=0), path)

        def fail(*args, **kwargs):
            raise ConvergenceError("no convergence")

        monkeypatch.setattr("tridc.cli.solve", fail)
        code, out, err = run(capsys, "solve", path)
        assert code == EXIT_SOLVER and out == "" and "ConvergenceError" in err


class TestVerify:
    def test_qr_laplacian_passes(self, tmp_path, capsys):
        path = str(tmp_path / "lap.txt")
        run(capsys, "gen", "laplacian", "3", "-o", path)
        code, out, _ = run(capsys, "verify", path, "--solver", "qr")
        assert code == EXIT_OK
        assert out.splitlines()[-1] == "PASS"

    def test_glued(self, tmp_path, capsys):
        path = str(tmp_path / "glued.txt")
        run(capsys, "gen", "glued", "60", "-o", path)
        code, out, _ = run(capsys, "verify", path, "--solver", "rtdc")
        assert code == EXIT_OK and out.splitlines()[-1] == "PASS"
        results = []
        for seed in range(5):
            run(capsys, "gen", "glued", "60", "--seed", str(seed), "-o", path)
            code, out, _ = run(capsys, "verify", path, "--solver", "rtdc", "--naive-vectors")
            results.append((code, out.splitlines()[-1]))
        assert (EXIT_FAIL, "FAIL") in results


class TestBench:
    def test_rows(self, capsys):
        code, out, _ = run(capsys, "bench", "--sizes", "9,25", "--solvers", "qr,cdc,rtdc", "--format", "csv")
        assert code == EXIT_OK
        assert len(out.splitlines()) == 7

    def test_golden_csv(self, capsys):
        _, a, _ = run(capsys, "bench", "--sizes", "9,25", "--seed", "3", "--format", "csv")
        _, b, _ = run(capsys, "bench", "--sizes", "9,25", "--seed", "3", "--format", "csv")
        assert [l.rsplit(",", 1)[0] for l in a.splitlines()] == [l.rsplit(",", 1)[0] for l in b.splitlines()]

    def test_unknown_solver(self, capsys):
        code, out, _ = run(capsys, "bench", "--solvers", "qr,lapack")
        assert code == EXIT_USAGE and out == ""

    def test_non_square(self, capsys):
        code, _, err = run(capsys, "bench", "--sizes", "10")
        assert code == EXIT_USAGE and "m^2" in err


class TestPlotData:
    def test_csv(self, tmp_path, capsys):
        path = str(tmp_path / "r.txt")
        write_matrix(random_tridiag(9, seed=1), path)
        code, out, _ = run(capsys, "plotdata", path, "--samples", "8")
        assert code == EXIT_OK
        lines = out.splitlines()
        assert lines[0] == "interval_index,lambda,f,fprime,kind"
        assert sum(1 for l in lines[1:] if l.endswith(",root")) == 9
        assert all(len(l.split(",")) == 5 for l in lines)

    def test_too_small(self, tmp_path, capsys):
        path = str(tmp_path / "r.txt")
        write_matrix(random_tridiag(2, seed=1), path)
        code, _, _ = run(capsys, "plotdata", path)
        assert code == EXIT_USAGE

    def test_decoupled(self, tmp_path, capsys):
        path = tmp_path / "d.txt"
        path.write_text("symtridiag 4\n1 2 3 4\n0 0 0\n")
        code, out, err = run(capsys, "plotdata", str(path))
        assert code == EXIT_OK
        assert out == "interval_index,lambda,f,fprime,kind\n"


def test_threads(capsys, tmp_path):
    path = str(tmp_path / "r.txt")
    write_matrix(random_tridiag(4, seed=1), path)
    code, _, _ = run(capsys, "--threads", "1", "solve", path)
    assert code == EXIT_OK
    code, _, _ = run(capsys, "--threads", "0", "solve", path)
    assert code == EXIT_USAGE
