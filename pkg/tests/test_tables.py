from conftest import interpretation, system_path
from ctrc.interpretations import check
from enhanced_viz import check_report_frame, complexity_table, height_table
from tools.analytic_tables import fg_table, parity_table


def test_parity_table_matches_closed_form():
    df = parity_table(system_path("even.ctrs"), 4)
    assert list(df["dh even"]) == [str(v) for v in df["2^(n+1)-1"]]
    assert list(df["dh odd"]) == [str(v) for v in df["2^(n+1)-1"]]


def test_fg_table_stays_under_linear_bound():
    df = fg_table(system_path("fg.ctrs"), 3)
    assert len(df) == 16
    assert all(int(dh) <= bound for dh, bound in zip(df["dh"], df["2m+n"]))


def test_height_table(fg):
    df = height_table(fg, 2, budget=None)
    assert list(df["Term"]) == ["f(a)", "f(b)", "g(a)", "g(b)"]
    assert list(df["Height"]) == [1, 1, 0, 1]


def test_complexity_table(even):
    df = complexity_table(even, 3, budget=None, modes=("crc",))
    assert list(df["crc"]) == [0, 1, 3]


def test_check_report_frame(even_trs):
    report = check(interpretation(even_trs, "even_zero.interp"), grid=2)
    df = check_report_frame(report)
    assert len(df) == len(report.rules) + len(report.mono)
    violated = df[df["Status"] == "VIOLATED"]
    assert not violated.empty
    assert set(violated["Icon"]) == {"🔴"}
