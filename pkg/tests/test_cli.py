from src.cli import EXIT_FAILURE, EXIT_OK, EXIT_USAGE, main


def test_algebra(capsys):
    assert main(["algebra", "--expr", "Sq2 Sq2"]) == EXIT_OK
    out = capsys.readouterr().out
    assert "tau Sq3 Sq1" in out
    assert "P(1,1)" in out

    assert main(["algebra", "--milnor", "P(2)*P(1)"]) == EXIT_OK
    assert "P(0,1)" in capsys.readouterr().out


def test_usage_errors(capsys, tmp_path):
    assert main([]) == EXIT_USAGE
    assert main(["--help"]) == EXIT_OK
    assert main(["compute-ext", "--max-stem", "4"]) == EXIT_USAGE
    assert main(["compute-ext", "--max-stem", "-1", "--max-filtration", "3"]) == EXIT_USAGE
    assert main(["render", "--in", str(tmp_path / "chart.json")]) == EXIT_USAGE
    assert main(["render", "--in", str(tmp_path / "missing.json"), "--svg", str(tmp_path / "a.svg")]) == EXIT_USAGE
    assert main(["algebra", "--expr", "Sq0"]) == EXIT_USAGE


def test_compute_apply_render(capsys, tmp_path):
    chart = tmp_path / "ext.json"
    assert main(["compute-ext", "--max-stem", "6", "--max-filtration", "3", "--out", str(chart)]) == EXIT_OK
    assert "✅" in capsys.readouterr().out
    einf = tmp_path / "einf.json"
    assert main(["apply-ledger", "--in", str(chart), "--out", str(einf)]) == EXIT_OK
    assert main(["render", "--in", str(einf), "--svg", str(tmp_path / "einf.svg")]) == EXIT_OK
    assert (tmp_path / "einf.svg").exists()
    assert (tmp_path / "run.log").exists()


def test_rejected_ledger(capsys, tmp_path):
    chart = tmp_path / "ext.json"
    main(["compute-ext", "--max-stem", "4", "--max-filtration", "3", "--out", str(chart)])
    ledger = tmp_path / "bad.yaml"
    ledger.write_text("entries:\n  - {page: 2, source: h1, target: h0}\n", encoding="utf-8")
    capsys.readouterr()
    code = main(["apply-ledger", "--in", str(chart), "--ledger", str(ledger), "--out", str(tmp_path / "x.json")])
    assert code == EXIT_USAGE
    assert "거부 1개" in capsys.readouterr().out


def test_corrupt_checkpoint(capsys, tmp_path):
    checkpoint = tmp_path / "broken.checkpoint.json"
    checkpoint.write_text("{not json", encoding="utf-8")
    code = main(["compute-ext", "--max-stem", "4", "--max-filtration", "3",
                 "--out", str(tmp_path / "ext.json"), "--resume", str(checkpoint)])
    assert code == EXIT_FAILURE


def test_verify_adem(capsys):
    assert main(["verify", "--suite", "adem"]) == EXIT_OK
    out = capsys.readouterr().out
    assert "Sq2 Sq2 = tau Sq3 Sq1: PASS" in out


def test_chart_bytes_do_not_depend_on_thread_count(monkeypatch, tmp_path):
    charts = []
    for threads in ("1", "3"):
        monkeypatch.setenv("MEXT_THREADS", threads)
        chart = tmp_path / f"threads{threads}" / "ext.json"
        assert main(["compute-ext", "--max-stem", "8", "--max-filtration", "4", "--out", str(chart)]) == EXIT_OK
        charts.append(chart.read_bytes())
    assert charts[0] == charts[1]
