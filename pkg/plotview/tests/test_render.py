"""Rendering behavior on synthetic schema-valid inputs."""

import pytest

from plotview import FigureSpec, InputError, render

TS_HEADER = ("t_us,rho_SS,rho_PP,rho_DD,rho_QQ,"
             "re_rho_SQ,im_rho_SQ,re_rho_DQ,im_rho_DQ,fidelity")


def write_timeseries(path):
    lines = ["# schema: nstirap-timeseries-1", '# config: {"lasers": {}}',
             TS_HEADER]
    for i in range(60):
        t = -30.0 + i
        dd = max(0.0, min(1.0, 0.5 - t / 60.0))
        lines.append(",".join(str(v) for v in (
            t, 1e-3, 1e-6, dd, 1.0 - dd - 1e-3 - 1e-6, 0, 0, 0, 0, 0.999)))
    path.write_text("\n".join(lines) + "\n")
    return str(path)


def write_scan(path, nu_c=10.0):
    lines = ["# schema: nstirap-scan-1",
             '# config: {"lasers": {"B": {"rabi_over_2pi_MHz": 400.0, '
             '"detuning_over_2pi_MHz": 100.0}, '
             '"R": {"rabi_over_2pi_MHz": 40.0}, '
             f'"C": {{"rabi_over_2pi_MHz": {nu_c}, '
             f'"detuning_over_2pi_MHz": {10 * nu_c}}}}}}}',
             "axis_value,one_minus_F,P_Q,status"]
    for i, tau in enumerate((6.0, 10.0, 14.0, 20.0)):
        lines.append(f"{tau},{1e-3 / (i + 1)},{1 - 1e-3 / (i + 1)},ok")
    path.write_text("\n".join(lines) + "\n")
    return str(path)


def test_fig3_renders(tmp_path):
    ts = write_timeseries(tmp_path / "ts.csv")
    out = str(tmp_path / "fig3.png")
    assert render(FigureSpec("fig3", (ts,), out)) == out
    assert (tmp_path / "fig3.png").stat().st_size > 0


def test_fig4_multi_curve(tmp_path):
    inputs = tuple(write_scan(tmp_path / f"s{i}.csv", nu_c)
                   for i, nu_c in enumerate((1.0, 5.0, 10.0)))
    out = str(tmp_path / "fig4.png")
    render(FigureSpec("fig4", inputs, out))
    assert (tmp_path / "fig4.png").exists()


def test_byte_identical_re_render(tmp_path):
    ts = write_timeseries(tmp_path / "ts.csv")
    a, b = tmp_path / "a.png", tmp_path / "b.png"
    render(FigureSpec("fig3", (ts,), str(a)))
    render(FigureSpec("fig3", (ts,), str(b)))
    assert a.read_bytes() == b.read_bytes()


def test_unknown_figure_and_empty_inputs():
    with pytest.raises(InputError, match="unknown figure"):
        FigureSpec("fig99", ("x.csv",), "o.png")
    with pytest.raises(InputError, match="at least one"):
        FigureSpec("fig3", (), "o.png")


def test_missing_column_reported_and_no_image(tmp_path):
    bad = tmp_path / "bad.csv"
    bad.write_text("# schema: x\na,b\n1.0,2.0\n")
    out = tmp_path / "o.png"
    with pytest.raises(InputError, match="t_us"):
        render(FigureSpec("fig3", (str(bad),), str(out)))
    assert not out.exists()  # no partial image on error


def test_empty_input_no_image(tmp_path):
    empty = tmp_path / "empty.csv"
    empty.write_text("")
    out = tmp_path / "o.png"
    with pytest.raises(InputError):
        render(FigureSpec("fig8", (str(empty),), str(out)))
    assert not out.exists()
