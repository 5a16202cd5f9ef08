"""Figure rendering against real engine outputs (produced through the CLI)
and against hand-written schema fixtures for the edge cases."""

import os
import subprocess
import sys

import numpy as np
import pytest

from votefig import FigureSpec, SchemaError, render

RECORDS_HEADER = ("seed,l,k,p0,h,n_red,n_blue,n_green,ig_red,ig_blue,ig_green,"
                  "majority,dvs,eg,final_skew_red,final_skew_blue,"
                  "final_skew_green,winner")

WORKERS = str(min(os.cpu_count() or 1, 4))


def engine(*args):
    subprocess.run([sys.executable, "-m", "cavevote.cli", *args],
                   check=True, capture_output=True)


@pytest.fixture(scope="session")
def records_csv(tmp_path_factory):
    path = tmp_path_factory.mktemp("engine") / "records.csv"
    engine("sweep", "--seed", "271828", "--out", str(path),
           "--p0", "0,0.4,1", "--h", "0,0.2,0.4,0.6,0.8,1",
           "--elections", "400", "--l", "4", "--k", "5",
           "--workers", WORKERS)
    return path


@pytest.fixture(scope="session")
def surface_csv(tmp_path_factory):
    path = tmp_path_factory.mktemp("engine") / "surface.csv"
    engine("surface", "--seed", "31415", "--out", str(path),
           "--h", "0,0.25,0.5,0.75,1", "--p0", "0,0.5,1",
           "--samples", "40", "--l", "10", "--k", "4")
    return path


@pytest.fixture(scope="session")
def trajectory_csv(tmp_path_factory):
    path = tmp_path_factory.mktemp("engine") / "trajectory.csv"
    out = tmp_path_factory.mktemp("engine") / "outcome.json"
    engine("simulate", "--l", "4", "--k", "5", "--p0", "0.3",
           "--homophily", "0.3", "--counts", "red=12,blue=8",
           "--seed", "99", "--out", str(out), "--trajectory-out", str(path))
    return path


class TestSurfaceFigure:
    def test_renders_engine_output(self, surface_csv, tmp_path):
        out = tmp_path / "surface.png"
        result = render(FigureSpec((str(surface_csv),), "surface", str(out)))
        assert out.exists() and out.stat().st_size > 0
        assert len(result.series["mean_abs_ig"]) == 15

    def test_single_point_still_renders(self, tmp_path):
        csv = tmp_path / "one.csv"
        csv.write_text("p0,h,mean_abs_ig,samples,stderr\n"
                       "0.5,0.3,0.071,10,0.004\n")
        out = tmp_path / "one.png"
        result = render(FigureSpec((str(csv),), "surface", str(out)))
        assert out.exists()
        assert result.series["mean_abs_ig"].tolist() == [0.071]

    def test_input_left_untouched(self, surface_csv, tmp_path):
        before = surface_csv.read_bytes()
        render(FigureSpec((str(surface_csv),), "surface",
                          str(tmp_path / "again.png")))
        assert surface_csv.read_bytes() == before

    def test_wrong_schema_names_columns(self, tmp_path):
        csv = tmp_path / "bad.csv"
        csv.write_text("p0,h,value\n0,0,1\n")
        with pytest.raises(SchemaError) as err:
            render(FigureSpec((str(csv),), "surface",
                              str(tmp_path / "x.png")))
        assert "mean_abs_ig" in str(err.value)

    def test_empty_input_fails_loudly(self, tmp_path):
        csv = tmp_path / "empty.csv"
        csv.write_text("p0,h,mean_abs_ig,samples,stderr\n")
        with pytest.raises(SchemaError):
            render(FigureSpec((str(csv),), "surface",
                              str(tmp_path / "x.png")))


class TestScatterFigure:
    def test_renders_engine_output(self, records_csv, tmp_path):
        out = tmp_path / "scatter.png"
        result = render(FigureSpec((str(records_csv),), "scatter", str(out)))
        assert out.exists()
        assert "initial majority (red)" in result.series
        gap_panel = result.series["influence gap (red)"]
        assert len(gap_panel["x"]) == len(gap_panel["y"]) == 3 * 6 * 400

    def test_missing_column_reported(self, records_csv, tmp_path):
        text = records_csv.read_text().splitlines()
        broken = tmp_path / "broken.csv"
        broken.write_text("\n".join(
            [text[0].replace("ig_red", "gap_red")] + text[1:]))
        with pytest.raises(SchemaError) as err:
            render(FigureSpec((str(broken),), "scatter",
                              str(tmp_path / "x.png")))
        assert "ig_red" in str(err.value)


class TestPccLinesFigure:
    def test_quadratic_fit_per_rewire_value(self, records_csv, tmp_path):
        out = tmp_path / "pcc.png"
        result = render(FigureSpec((str(records_csv),), "pcc-lines", str(out)))
        assert out.exists()
        for p0 in (0.0, 0.4, 1.0):
            entry = result.series[(p0, "majority")]
            assert "fit_coefficients" in entry
            assert len(entry["fit_coefficients"]) == 3  # quadratic
            assert len(entry["h"]) == 6

    def test_majority_curve_sits_above_gap_curve(self, records_csv, tmp_path):
        result = render(FigureSpec((str(records_csv),), "pcc-lines",
                                   str(tmp_path / "pcc.png")))
        for p0 in (0.0, 0.4, 1.0):
            majority = result.series[(p0, "majority")]["pcc"]
            gap = result.series[(p0, "ig")]["pcc"]
            assert majority.mean() > gap.mean()

    def test_degenerate_metric_is_skipped_not_fatal(self, tmp_path):
        # equal representation: majority is constant, so its series vanishes
        # while the gap series still renders
        rows = [RECORDS_HEADER]
        rng = np.random.default_rng(0)
        for i in range(40):
            gap = rng.normal()
            rows.append(f"{i},4,5,0.4,0.5,10,10,,{gap},{-gap},,0.0,0.1,0.05,"
                        f"{0.2 * gap + rng.normal(0, 0.1)},0.0,,deadlock")
        csv = tmp_path / "equalrep.csv"
        csv.write_text("\n".join(rows) + "\n")
        result = render(FigureSpec((str(csv),), "pcc-lines",
                                   str(tmp_path / "x.png")))
        assert (0.4, "ig") in result.series
        assert (0.4, "majority") not in result.series


class TestTrajectoryFigure:
    def test_renders_engine_output_with_guides(self, trajectory_csv, tmp_path):
        out = tmp_path / "trajectory.png"
        result = render(FigureSpec((str(trajectory_csv),), "trajectory",
                                   str(out), early_cutoff_s=83.0))
        assert out.exists()
        assert result.series["guides"] == [0.6, 0.4]
        assert result.series["early_cutoff"] == 83.0
        assert len(result.series["t_seconds"]) == 73
        shares = result.series["share_red"] + result.series["share_blue"]
        assert np.allclose(shares, 1.0)

    def test_uniform_electorate_plots_flat_line(self, tmp_path):
        lines = ["tick,t_seconds,share_red,share_blue"]
        for tick in range(5):
            lines.append(f"{tick},{tick * 3.3},1.0,0.0")
        csv = tmp_path / "flat.csv"
        csv.write_text("\n".join(lines) + "\n")
        result = render(FigureSpec((str(csv),), "trajectory",
                                   str(tmp_path / "flat.png")))
        assert np.all(result.series["share_red"] == 1.0)

    def test_custom_threshold_moves_guides(self, tmp_path):
        lines = ["tick,t_seconds,share_red,share_blue", "0,0.0,0.5,0.5"]
        csv = tmp_path / "tiny.csv"
        csv.write_text("\n".join(lines) + "\n")
        result = render(FigureSpec((str(csv),), "trajectory",
                                   str(tmp_path / "tiny.png"),
                                   victory_threshold=0.7))
        assert result.series["guides"] == [0.7, pytest.approx(0.3)]

    def test_schema_violation_reported(self, tmp_path):
        csv = tmp_path / "bad.csv"
        csv.write_text("tick,seconds,share_red\n0,0.0,1.0\n")
        with pytest.raises(SchemaError):
            render(FigureSpec((str(csv),), "trajectory",
                              str(tmp_path / "x.png")))


class TestCli:
    def test_cli_end_to_end(self, surface_csv, tmp_path):
        out = tmp_path / "cli.png"
        subprocess.run([sys.executable, "-m", "votefig.cli",
                        "--kind", "surface", "--input", str(surface_csv),
                        "--output", str(out)],
                       check=True, capture_output=True)
        assert out.exists() and out.stat().st_size > 0

    def test_bad_kind_rejected(self, tmp_path):
        with pytest.raises(ValueError):
            FigureSpec(("x.csv",), "pie", str(tmp_path / "x.png"))
