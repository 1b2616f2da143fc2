import csv
import io

import pytest

from mrapriori.cli import BENCH_HEADER, main
from mrapriori.formats import read_db

HOMO = "replication 3\nmaster 1 0\nslave1 1 0\nslave2 1 0\n"
HETERO = "replication 3\nmaster 0.25 0\nslave1 0.25 0\nslave2 2.5 0\n"


@pytest.fixture
def workdir(tmp_path, monkeypatch):
    monkeypatch.chdir(tmp_path)
    (tmp_path / "homo.txt").write_text(HOMO)
    (tmp_path / "hetero.txt").write_text(HETERO)
    (tmp_path / "four.txt").write_text("0 1\n0 1\n0 2\n1\n")
    return tmp_path


def test_gen(workdir, capsys):
    assert main(["gen", "--transactions", "1000", "--items", "50", "--avg-len", "8",
                 "--seed", "1", "--out", "db.txt"]) == 0
    assert len((workdir / "db.txt").read_text().splitlines()) == 1000
    assert "1000 transactions" in capsys.readouterr().out


def test_gen_empty_and_usage_errors(workdir):
    assert main(["gen", "--transactions", "0", "--out", "empty.txt"]) == 0
    assert (workdir / "empty.txt").read_bytes() == b""
    assert main(["gen", "--transactions", "10"]) == 2
    assert main(["gen", "--transactions", "10", "--items", "3", "--avg-len", "4", "--out", "x"]) == 2
    assert main(["gen", "--transactions", "ten", "--out", "x"]) == 2


def test_mine_example(workdir, capsys):
    assert main(["mine", "four.txt", "--min-sup-count", "2", "--out", "r.txt"]) == 0
    assert (workdir / "r.txt").read_text() == "0 #SUP: 3\n1 #SUP: 3\n0 1 #SUP: 2\n"
    out = capsys.readouterr().out
    assert "frequent itemsets: 3" in out and "output: r.txt" in out
    assert "virtual makespan" not in out


def test_mine_to_stdout(workdir, capsys):
    assert main(["mine", "four.txt", "--min-sup-count", "2", "--strategy", "sequential"]) == 0
    captured = capsys.readouterr()
    assert captured.out == "0 #SUP: 3\n1 #SUP: 3\n0 1 #SUP: 2\n"
    assert "frequent itemsets: 3" in captured.err


def test_mine_strategies_byte_identical(workdir):
    main(["gen", "--transactions", "400", "--items", "12", "--avg-len", "4", "--seed", "3", "--out", "db.txt"])
    outputs = set()
    for strategy in ("sequential", "candidate-parallel", "data-parallel", "naive"):
        for splits in ("1", "3"):
            out = f"r-{strategy}-{splits}.txt"
            assert main(["mine", "db.txt", "--min-sup-frac", "0.05", "--strategy", strategy,
                         "--splits", splits, "--parallelism", "2", "--out", out]) == 0
            outputs.add((workdir / out).read_bytes())
    assert len(outputs) == 1


def test_mine_with_cluster_reports_virtual_time(workdir, capsys):
    assert main(["mine", "four.txt", "--min-sup-count", "2", "--cluster", "homo.txt",
                 "--splits", "2", "--out", "r.txt"]) == 0
    out = capsys.readouterr().out
    # level 1: 3 candidates x 2 records per split -> two tasks of cost 6 on 3 nodes
    assert "1 3 2 2 6.000000" in out
    assert "virtual makespan: 8.000000" in out


def test_mine_dump_dir(workdir):
    assert main(["mine", "four.txt", "--min-sup-count", "2", "--out", "r.txt",
                 "--dump-dir", "levels"]) == 0
    assert sorted(p.name for p in (workdir / "levels").iterdir()) == ["level-1.txt", "level-2.txt"]


@pytest.mark.parametrize("args, code", [
    (["mine", "four.txt", "--min-sup-frac", "1.5"], 2),
    (["mine", "four.txt", "--min-sup-frac", "0"], 2),
    (["mine", "four.txt"], 2),
    (["mine", "four.txt", "--min-sup-count", "2", "--min-sup-frac", "0.5"], 2),
    (["mine", "four.txt", "--min-sup-count", "2", "--strategy", "fp-growth"], 2),
    (["mine", "four.txt", "--min-sup-count", "2", "--strategy", "sequential", "--cluster", "homo.txt"], 2),
    (["mine", "missing.txt", "--min-sup-count", "2"], 1),
    (["mine", "bad.txt", "--min-sup-count", "2"], 1),
    (["mine", "four.txt", "--min-sup-count", "2", "--cluster", "badcluster.txt"], 1),
    (["frobnicate"], 2),
    ([], 2),
])
def test_exit_codes(workdir, args, code, capsys):
    (workdir / "bad.txt").write_text("1 2\n1 x\n")
    (workdir / "badcluster.txt").write_text("replication 1\nnode fast 0\n")
    assert main(args) == code
    if code == 1:
        err = capsys.readouterr().err
        assert err.startswith("mrapriori: error:")
        assert "line 2" in err or "missing.txt" in err


def _bench(workdir, *extra):
    assert main(["bench", "--out", "bench.csv", *extra]) == 0
    text = (workdir / "bench.csv").read_text()
    return text, list(csv.reader(io.StringIO(text)))


def test_bench_rows_and_header(workdir):
    text, rows = _bench(workdir, "--transactions-list", "1000,2000,4000", "--min-sup-frac", "0.1",
                        "--items", "20", "--avg-len", "4")
    assert rows[0] == BENCH_HEADER
    assert text.splitlines()[0] == "transactions,strategy,nodes,virtual_makespan,wall_ms,level_count,frequent_count"
    assert [r[0] for r in rows[1:]] == ["1000", "2000", "4000"]
    assert all(r[1] == "data-parallel" and r[2] == "3" for r in rows[1:])
    assert "\r" not in text


def test_bench_virtual_columns_deterministic(workdir):
    args = ("--transactions-list", "500,1000", "--min-sup-frac", "0.1", "--items", "20",
            "--avg-len", "4", "--strategy", "candidate-parallel")
    runs = []
    for _ in range(2):
        _, rows = _bench(workdir, *args)
        runs.append([(r[0], r[3], r[5], r[6]) for r in rows[1:]])
    assert runs[0] == runs[1]


def test_bench_naive_task_counts(workdir, capsys):
    _, rows = _bench(workdir, "--transactions-list", "300", "--items", "8,10,12", "--avg-len", "3",
                     "--strategy", "naive", "--min-sup-frac", "0.2")
    assert len(rows) == 4
    err = capsys.readouterr().err
    for m, tasks in ((8, 255), (10, 1023), (12, 4095)):
        assert f"items={m} universe={m} map_tasks={tasks} " in err


def test_bench_with_cluster_file(workdir):
    _, rows = _bench(workdir, "--transactions-list", "200", "--items", "10", "--avg-len", "3",
                     "--min-sup-frac", "0.2", "--cluster", "hetero.txt")
    assert rows[1][2] == "3"


def test_compare_identical(workdir, capsys):
    assert main(["compare-clusters", "--hetero", "homo.txt", "--homo", "homo.txt"]) == 0
    captured = capsys.readouterr()
    assert captured.out.splitlines()[0] == "cluster,nodes,total_speed,makespan"
    assert "eta = 1.000000" in captured.err
    assert "= 1.0986" in captured.err


def test_compare_hetero_slower(workdir, capsys):
    assert main(["compare-clusters", "--hetero", "hetero.txt", "--homo", "homo.txt",
                 "--tasks", "6", "--out", "cmp.csv"]) == 0
    out = capsys.readouterr().out
    assert "eta = 1.200000" in out
    assert "model_curve(N=3) = ln 3 = 1.0986" in out
    rows = list(csv.reader(open(workdir / "cmp.csv")))
    assert rows[1] == ["fhdsc", "3", "3.000000", "2.400000"]
    assert rows[2] == ["fhssc", "3", "3.000000", "2.000000"]


def test_compare_with_mining_workload(workdir, capsys):
    main(["gen", "--transactions", "300", "--items", "10", "--avg-len", "3", "--out", "db.txt"])
    assert main(["compare-clusters", "--hetero", "hetero.txt", "--homo", "homo.txt", "--db", "db.txt",
                 "--min-sup-frac", "0.1", "--splits", "6"]) == 0
    assert "eta = " in capsys.readouterr().err
    assert main(["compare-clusters", "--hetero", "hetero.txt", "--homo", "homo.txt", "--db", "db.txt"]) == 2


def test_compare_malformed_config(workdir, capsys):
    (workdir / "broken.txt").write_text("replication 3\na 1 0\nb one 0\n")
    assert main(["compare-clusters", "--hetero", "broken.txt", "--homo", "homo.txt"]) == 1
    assert "line 3" in capsys.readouterr().err
