import pandas as pd
import streamlit as st

from ctrc.labeled import CostKind, LabeledRewriter
from ctrc.terms import render, size

STATUS_ICONS = {
    "strict": "🟢",
    "weak": "🟠",
    "ok": "🟢",
    "violated": "🔴",
    "unknown": "⚪️",
}

COST_ICONS = {
    CostKind.FINITE: "🟢",
    CostKind.AT_LEAST: "🟠",
    CostKind.INFINITE: "🔴",
}


def _numeric(cost):
    return cost.value if cost.kind != CostKind.INFINITE else None


def height_table(system, max_size, budget, basic=True):
    """
    Derivation heights of every ground term up to a size.

    Args:
        system (CCTRS): the loaded system.
        max_size (int): largest term size to enumerate.
        basic (bool): only basic terms, as for runtime complexity.

    Returns:
        pd.DataFrame: one row per term with its size, height and status.
    """
    rewriter = LabeledRewriter(system, budget)
    rows = []
    for t in system.ground_terms(max_size, basic=basic):
        cost = rewriter.derivation_height(t)
        rows.append(
            {
                "Status": COST_ICONS[cost.kind],
                "Term": render(t),
                "Size": size(t),
                "dh": str(cost),
                "Height": _numeric(cost),
            }
        )
    return pd.DataFrame(rows, columns=["Status", "Term", "Size", "dh", "Height"])


def complexity_table(system, max_n, budget, modes=("crc", "cdc")):
    rewriter = LabeledRewriter(system, budget)
    rows = []
    for n in range(1, max_n + 1):
        row = {"n": n}
        for mode in modes:
            cost = rewriter.conditional_complexity(n, mode)
            row[mode] = _numeric(cost)
            row[f"{mode} status"] = COST_ICONS[cost.kind]
        rows.append(row)
    return pd.DataFrame(rows)


def show_complexity_chart(df, modes=("crc", "cdc")):
    if df.empty:
        st.write("No data available.")
        return
    st.line_chart(df.set_index("n")[[m for m in modes if m in df]])


def show_height_statistics(df):
    col1, col2, col3 = st.columns(3)
    col1.metric("Terms", len(df))
    col2.metric("Max height", int(df["Height"].max()) if df["Height"].notna().any() else 0)
    col3.metric("Open or divergent", int((df["Status"] != COST_ICONS[CostKind.FINITE]).sum()))

    by_size = df.groupby("Size")["Height"].max().rename("Max height")
    st.bar_chart(by_size)
    st.dataframe(df, use_container_width=True)


def check_report_frame(report):
    """Rule and monotonicity verdicts of an interpretation check as one table."""
    rows = [
        {"Obligation": f"rule {v.rule}", "Status": v.status, "Valuation": v.valuation}
        for v in report.rules
    ]
    rows += [
        {
            "Obligation": f"{m.symbol} arg {m.position} ({m.kind.lower()})",
            "Status": "OK" if m.ok else "VIOLATED",
            "Valuation": m.valuation,
        }
        for m in report.mono
    ]
    df = pd.DataFrame(rows, columns=["Obligation", "Status", "Valuation"])
    df["Valuation"] = df["Valuation"].apply(
        lambda v: ", ".join(f"{name}={value}" for name, value in v) if v else ""
    )
    df.insert(0, "Icon", df["Status"].apply(lambda x: STATUS_ICONS.get(x.lower(), "⚪️")))
    return df
