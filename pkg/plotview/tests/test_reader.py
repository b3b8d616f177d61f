"""Schema reading and error reporting."""

import pytest

from plotview import InputError, read_table

GOOD = """\
# schema: nstirap-scan-1
# config: {"lasers": {"C": {"rabi_over_2pi_MHz": 10.0}}}
axis_value,one_minus_F,P_Q,status
6.0,1e-3,0.999,ok
8.0,5e-4,0.9995,ok
"""


def test_read_table(tmp_path):
    path = tmp_path / "scan.csv"
    path.write_text(GOOD)
    table = read_table(str(path))
    assert table.schema == "nstirap-scan-1"
    assert table.config["lasers"]["C"]["rabi_over_2pi_MHz"] == 10.0
    assert table.columns == ("axis_value", "one_minus_F", "P_Q", "status")
    assert table.column("axis_value") == [6.0, 8.0]
    assert table.column("status") == ["ok", "ok"]


def test_missing_column_names_file_and_column(tmp_path):
    path = tmp_path / "scan.csv"
    path.write_text(GOOD)
    table = read_table(str(path))
    with pytest.raises(InputError) as err:
        table.column("fidelity")
    assert "scan.csv" in str(err.value) and "fidelity" in str(err.value)


def test_empty_file_rejected(tmp_path):
    path = tmp_path / "empty.csv"
    path.write_text("")
    with pytest.raises(InputError, match="no header"):
        read_table(str(path))
    header_only = tmp_path / "h.csv"
    header_only.write_text("axis_value,one_minus_F,P_Q,status\n")
    with pytest.raises(InputError, match="empty series"):
        read_table(str(header_only))


def test_ragged_row_rejected(tmp_path):
    path = tmp_path / "bad.csv"
    path.write_text("a,b\n1.0\n")
    with pytest.raises(InputError, match="row width"):
        read_table(str(path))


def test_missing_file(tmp_path):
    with pytest.raises(InputError):
        read_table(str(tmp_path / "nope.csv"))
