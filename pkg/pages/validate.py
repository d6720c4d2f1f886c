import pandas as pd
import streamlit as st

from ctrc.cctrs import build_system, parse_system, validate
from ctrc.errors import CtrcError
from ctrc.interpretations import derive_usable_map
from utils import choose_file


def visualize_report(report, raw):
    """
    Visualizes a validation report in Streamlit.

    Parameters:
    - report (ValidationReport): The violations found for the selected mode.
    - raw (RawSystem): The parsed but unchecked system.
    """
    st.header("Validation Summary")
    col1, col2, col3 = st.columns(3)
    col1.metric("Rules", len(raw.rules))
    col2.metric("Violations", len(report.violations))
    col3.metric("Mode", report.mode)

    st.header("Violations")
    if not report.violations:
        st.success(f"No violations: the system is a valid {report.mode} system.")
        return

    df = pd.DataFrame(
        [
            {"Rule": v.rule, "Restriction": v.restriction, "Witness": v.witness}
            for v in report.violations
        ]
    )
    df.insert(0, "Severity Icon", "🔴")
    st.dataframe(df)


def show_rules(system):
    st.header("Rules")
    rows = [
        {
            "Symbol": rule.root,
            "Index": rule.index,
            "Rule": str(rule),
            "Conditions": len(rule.conditions),
        }
        for rule in system.rules
    ]
    st.table(pd.DataFrame(rows))


def show_usable_map(system):
    st.header("Usable Replacement Map")
    rows = [
        {"Symbol": name, "Active arguments": ", ".join(map(str, sorted(active))) or "none"}
        for name, active in derive_usable_map(system).items()
    ]
    st.table(pd.DataFrame(rows))


def main():
    st.title("System Validation")

    st.write("## Select System")
    path = choose_file("System", ".ctrs", "validate")
    mode = st.radio("Restrictions", ("cctrs", "strong"), horizontal=True)

    if st.button("Validate System"):
        if path is None:
            st.warning("Please select or upload a system file.")
            return
        try:
            with open(path, "r") as f:
                text = f.read()
            raw = parse_system(text)
            report = validate(raw, mode)
            visualize_report(report, raw)
            if report.ok:
                system = build_system(text, mode)
                show_rules(system)
                if mode == "strong":
                    show_usable_map(system)
        except CtrcError as e:
            st.error(f"Error [{e.code}] loading system: {e}")
        except Exception as e:
            st.error(f"Error loading system: {e}")


if __name__ == "__main__":
    main()
