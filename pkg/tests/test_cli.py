import csv
import io

import pytest

from polymul import cli
from polymul.harness import Build, build


def run(capsys, *argv):
    code = cli.main(list(argv))
    return code, capsys.readouterr()


def test_verify_passes(capsys):
    code, out = run(capsys, "verify", "--algo", "ifp", "--base", "karatsuba", "--max-n", "256",
                    "--step", "17", "--trials", "3")
    assert code == 0 and "passed" in out.out


@pytest.mark.parametrize("argv", [["--modulus", "1"], ["--min-n", "9", "--max-n", "3"],
                                  ["--min-n", "0"]])
def test_usage_errors(capsys, argv):
    code, out = run(capsys, "verify", *argv)
    assert code == 2 and "error" in out.err


def test_bad_flag_is_usage_error(capsys):
    code, _ = run(capsys, "bench", "--algo", "nope")
    assert code == 2


def test_verify_reports_corruption(capsys):
    good = build("fp", "naive")

    def broken(f, g, out, s, trace=None):
        good.run(f, g, out, s)
        out[-1] = (out[-1] + 1) % s.ring.modulus

    cfg = cli.RunConfig("verify", algo="fp", base="naive", min_n=3, max_n=6, trials=2)
    stream = io.StringIO()
    code = cli.cmd_verify(cfg, stream, Build("fp", "naive", "FP", broken))
    text = stream.getvalue()
    assert code == 1
    assert "MISMATCH at n=3 trial=0" in text and "reproduce: polymul verify" in text


def test_bench_schema_and_counts(capsys):
    code, out = run(capsys, "bench", "--algo", "fp", "--base", "naive", "--min-n", "100",
                    "--max-n", "100")
    rows = list(csv.DictReader(io.StringIO(out.out)))
    assert code == 0
    assert list(rows[0]) == cli.BENCH_COLUMNS
    r = rows[0]
    assert int(r["muls"]) == 100 ** 2 and int(r["adds"]) == 99 ** 2
    assert int(r["total"]) == int(r["base_total"])


def test_bench_ifp_ratio(capsys):
    _, out = run(capsys, "bench", "--algo", "ifp", "--min-n", "1024", "--max-n", "1024")
    (r,) = csv.DictReader(io.StringIO(out.out))
    assert float(r["ratio"]) <= 12.1 and r["peak_work"] == "0"


def test_bench_unwritable_output(capsys, tmp_path):
    code, out = run(capsys, "bench", "--out", str(tmp_path / "missing" / "x.csv"))
    assert code == 1 and "error" in out.err


def test_space_constant_for_in_place(capsys):
    code, out = run(capsys, "space", "--algo", "ifp", "--min-n", "16", "--max-n", "4096", "--double")
    rows = list(csv.reader(io.StringIO(out.out)))
    assert code == 0 and rows[0] == cli.SPACE_COLUMNS
    assert len({r[3] for r in rows[1:]}) == 1


def test_space_out_of_place_grows(capsys):
    code, out = run(capsys, "space", "--algo", "fp", "--min-n", "16", "--max-n", "256", "--double")
    peaks = [int(r[3]) for r in list(csv.reader(io.StringIO(out.out)))[1:]]
    assert code == 0 and peaks == sorted(peaks) and peaks[-1] > peaks[0]


def test_space_naive_at_most_one(capsys):
    _, out = run(capsys, "space", "--algo", "fp", "--base", "naive", "--max-n", "40", "--step", "13")
    assert all(int(r[3]) <= 1 for r in list(csv.reader(io.StringIO(out.out)))[1:])


def test_predict_lines(capsys):
    code, out = run(capsys, "predict", "--algo", "fp", "--min-n", "64", "--max-n", "256", "--double")
    assert code == 0 and "bound 11" in out.out and "VIOLATION" not in out.out
    _, out = run(capsys, "predict", "--algo", "splo", "--base", "naive", "--max-n", "32", "--double")
    assert "bound 5" in out.out
    _, out = run(capsys, "predict", "--algo", "mp", "--base", "naive", "--max-n", "32", "--double")
    assert "(μ+ν)λ = 8/7" in out.out


def test_predict_needs_in_place_family(capsys):
    code, _ = run(capsys, "predict", "--algo", "fphi")
    assert code == 2


def test_threads_do_not_change_output(capsys, monkeypatch):
    argv = ["bench", "--algo", "isplo", "--min-n", "5", "--max-n", "200", "--step", "13"]
    _, one = run(capsys, *argv)
    monkeypatch.setenv("POLYMUL_THREADS", "4")
    _, four = run(capsys, *argv)
    assert one.out == four.out


def test_out_file(capsys, tmp_path):
    path = tmp_path / "b.csv"
    code, out = run(capsys, "bench", "--max-n", "8", "--out", str(path))
    assert code == 0 and out.out == ""
    assert path.read_text().startswith(",".join(cli.BENCH_COLUMNS))
