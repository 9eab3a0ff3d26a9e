import pytest

from weylfigures.render import (FigureJob, SchemaError, dump_plotted,
                                read_table, render)

PNG_MAGIC = b"\x89PNG\r\n\x1a\n"


@pytest.fixture
def spectrum_csv(tmp_path):
    p = tmp_path / "spectrum.csv"
    rows = ["draw_index,re,im"]
    rows += [f"{i},{0.1 * i!r},{-0.05 * i!r}" for i in range(12)]
    p.write_text("\n".join(rows) + "\n")
    return p


@pytest.fixture
def counting_csv(tmp_path):
    p = tmp_path / "sweep.csv"
    rows = ["r,mean_count,stderr,weyl_prediction"]
    for k in range(1, 6):
        rows.append(f"{0.1 * k!r},{2.0 * k!r},{0.1!r},{1.9 * k!r}")
    p.write_text("\n".join(rows) + "\n")
    return p


@pytest.fixture
def fig3_csv(tmp_path):
    p = tmp_path / "fig3.csv"
    rows = ["log10_inv_delta,lhs,rhs_C1",
            "1.0,5.8,12.1", "2.0,22.8,29.2", "3.0,43.0,47.8"]
    p.write_text("\n".join(rows) + "\n")
    return p


@pytest.fixture
def portrait_csv(tmp_path):
    p = tmp_path / "portrait.csv"
    rows = ["re_z,im_z,sigma_min"]
    for b in (-0.5, 0.0, 0.5):
        for a in (-0.5, 0.0, 0.5):
            rows.append(f"{a!r},{b!r},{abs(a) + abs(b) + 0.01!r}")
    p.write_text("\n".join(rows) + "\n")
    return p


def test_render_each_kind(tmp_path, spectrum_csv, counting_csv, fig3_csv, portrait_csv):
    jobs = [
        FigureJob([spectrum_csv], "scatter", tmp_path / "a.png",
                  overlay_disk=0.5, overlay_strip=0.5),
        FigureJob([counting_csv], "counting", tmp_path / "b.png"),
        FigureJob([fig3_csv], "fig3", tmp_path / "c.png"),
        FigureJob([portrait_csv], "portrait", tmp_path / "d.png"),
    ]
    for job in jobs:
        out = render(job)
        data = out.read_bytes()
        assert data[:8] == PNG_MAGIC
        assert len(data) > 1000


def test_render_is_deterministic(tmp_path, counting_csv):
    a = render(FigureJob([counting_csv], "counting", tmp_path / "one.png"))
    b = render(FigureJob([counting_csv], "counting", tmp_path / "two.png"))
    assert a.read_bytes() == b.read_bytes()


def test_dump_plotted_byte_matches_input(counting_csv, tmp_path):
    job = FigureJob([counting_csv], "counting", tmp_path / "x.png")
    dump = dump_plotted(job)
    assert dump == counting_csv.read_text()


def test_dump_plotted_scatter_subset(spectrum_csv, tmp_path):
    job = FigureJob([spectrum_csv], "scatter", tmp_path / "x.png")
    dump = dump_plotted(job).splitlines()
    src = spectrum_csv.read_text().splitlines()
    assert dump[0] == "re,im"
    for dumped, original in zip(dump[1:], src[1:]):
        assert dumped == ",".join(original.split(",")[1:])  # re,im columns verbatim


def test_empty_csv_rejected_no_file(tmp_path):
    empty = tmp_path / "empty.csv"
    empty.write_text("")
    out = tmp_path / "nope.png"
    with pytest.raises(SchemaError, match="empty"):
        render(FigureJob([empty], "counting", out))
    assert not out.exists()


def test_header_only_rejected(tmp_path):
    p = tmp_path / "h.csv"
    p.write_text("r,mean_count,stderr,weyl_prediction\n")
    with pytest.raises(SchemaError, match="no data rows"):
        render(FigureJob([p], "counting", tmp_path / "n.png"))


def test_schema_mismatch_reports_offending_column(tmp_path):
    p = tmp_path / "bad.csv"
    p.write_text("r,average,stderr,weyl_prediction\n0.1,1.0,0.0,1.0\n")
    with pytest.raises(SchemaError, match="mean_count"):
        render(FigureJob([p], "counting", tmp_path / "n.png"))


def test_missing_input_rejected(tmp_path):
    with pytest.raises(SchemaError, match="does not exist"):
        FigureJob([tmp_path / "ghost.csv"], "counting", tmp_path / "n.png")


def test_unknown_kind_rejected(tmp_path, counting_csv):
    with pytest.raises(SchemaError, match="unknown figure kind"):
        FigureJob([counting_csv], "surface", tmp_path / "n.png")


def test_portrait_requires_rectangular_grid(tmp_path):
    p = tmp_path / "rag.csv"
    p.write_text("re_z,im_z,sigma_min\n0.0,0.0,0.1\n0.5,0.5,0.2\n0.5,0.0,0.3\n")
    with pytest.raises(SchemaError, match="rectangular"):
        render(FigureJob([p], "portrait", tmp_path / "n.png"))


def test_comment_lines_skipped(tmp_path):
    p = tmp_path / "c.csv"
    p.write_text("# provenance line\nlog10_inv_delta,lhs,rhs_C1\n1.0,2.0,3.0\n")
    table = read_table(p, "fig3")
    assert table.columns["lhs"] == ["2.0"]


def test_cli_roundtrip(tmp_path, fig3_csv, capsys):
    from weylfigures.cli import main
    out = tmp_path / "cli.png"
    assert main(["--kind", "fig3", "--in", str(fig3_csv), "--out", str(out)]) == 0
    assert out.read_bytes()[:8] == PNG_MAGIC
    assert main(["--kind", "fig3", "--in", str(fig3_csv), "--dump-plotted"]) == 0
    assert capsys.readouterr().out == fig3_csv.read_text()


def test_cli_schema_error_exit(tmp_path, capsys):
    from weylfigures.cli import main
    p = tmp_path / "bad.csv"
    p.write_text("nope\n1\n")
    assert main(["--kind", "fig3", "--in", str(p), "--out",
                 str(tmp_path / "x.png")]) == 1
    assert "schema error" in capsys.readouterr().err


def test_cli_requires_out_or_dump(tmp_path, fig3_csv):
    from weylfigures.cli import main
    assert main(["--kind", "fig3", "--in", str(fig3_csv)]) == 1
