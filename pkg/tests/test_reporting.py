from multistyle_tts.corpus.labels import StyleLabel
from multistyle_tts.evalkit import Answer, F0StatsRow, F0StatsTable, build_abx, score_abx, score_preference
from multistyle_tts.reporting import plot_history, report_abx, report_f0_stats, report_preference


def test_f0_report_files(tmp_path):
    table = F0StatsTable(
        rows={
            StyleLabel.HAPPY: F0StatsRow(StyleLabel.HAPPY, 214.8, 37.3, 12),
            StyleLabel.NEUTRAL: F0StatsRow(StyleLabel.NEUTRAL, 183.7, 10.3, 12),
        },
        absent=[StyleLabel.SAD],
    )
    paths = report_f0_stats(table, tmp_path)
    for p in paths.values():
        assert p.exists() and p.stat().st_size > 0
    text = paths["txt"].read_text()
    assert "happy" in text and "214.8" in text
    assert "--" in text  # absent row
    csv_body = paths["csv"].read_text()
    assert "happy,214.8,37.3,12" in csv_body


def test_preference_report_files(tmp_path):
    answers = (
        [Answer("s", f"a{k}", "baseline") for k in range(14)]
        + [Answer("s", f"b{k}", "multi_style_neutral") for k in range(27)]
        + [Answer("s", f"c{k}", "multi_style_other") for k in range(9)]
    )
    paths = report_preference(score_preference(answers), tmp_path)
    for p in paths.values():
        assert p.exists() and p.stat().st_size > 0
    assert "baseline,14,28.0" in paths["csv"].read_text()


def test_abx_report_files(tmp_path):
    pool = {s: [f"{s.name}-{i}" for i in range(2)] for s in StyleLabel}
    items = build_abx(pool, seed=0)
    answers = [Answer("s", i.id, i.correct) for i in items]
    paths = report_abx(score_abx(answers, items), tmp_path)
    for p in paths.values():
        assert p.exists() and p.stat().st_size > 0
    assert "100.00%" in paths["txt"].read_text()


def test_plot_history(tmp_path):
    rows = [{"epoch": i, "train_loss": 1.0 / (i + 1), "dev_weighted_acc": i / 10} for i in range(10)]
    out = plot_history(rows, tmp_path / "hist.png")
    assert out.exists() and out.stat().st_size > 0
