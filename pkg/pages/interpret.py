import streamlit as st
from loguru import logger

from ctrc.bounds import bound
from ctrc.errors import CtrcError
from ctrc.interpretations import build, check, load_interpretation
from ctrc.transform import transform
from enhanced_viz import check_report_frame
from utils import choose_file, choose_system, workbench_settings


def visualize_check(report):
    st.header("Compatibility Summary")
    col1, col2, col3 = st.columns(3)
    col1.metric("Strict rules", sum(v.status == "STRICT" for v in report.rules))
    col2.metric("Weak rules", sum(v.status == "WEAK" for v in report.rules))
    col3.metric(
        "Violations",
        sum(v.status == "VIOLATED" for v in report.rules) + sum(not m.ok for m in report.mono),
    )

    st.dataframe(check_report_frame(report), use_container_width=True)
    if report.passed:
        st.success(report.lines()[-1])
    else:
        st.error(report.lines()[-1])


def main():
    st.title("Interpretations and Bounds")
    settings, _, grid = workbench_settings()

    st.write("## Select System")
    try:
        system = choose_system("interp_system", "strong")
    except Exception as e:
        st.error(f"Error loading system: {e}")
        return
    st.write("## Select Interpretation")
    path = choose_file("Interpretation", ".interp", "interp_file")
    if system is None or path is None:
        return

    recipe = st.selectbox("Recipe", ("infer", "A", "B", "C", "direct"))

    st.write("## Bound")
    col1, col2, col3 = st.columns(3)
    n = col1.number_input("Size n", min_value=1, value=3, step=1)
    mode = col2.selectbox("Mode", ("crc", "cdc"))
    estimate = col3.selectbox("Estimate", ("size", "exact"))
    use_general = st.checkbox("Use the linear size premise [t] <= K*|t| + M")
    general = None
    if use_general:
        col1, col2 = st.columns(2)
        general = (
            int(col1.number_input("K", min_value=0, value=2, step=1)),
            int(col2.number_input("M", min_value=0, value=1, step=1)),
        )

    if st.button("Check Interpretation"):
        try:
            interp = build(load_interpretation(path), transform(system), None if recipe == "infer" else recipe)
            with st.expander("Expanded interpretation"):
                st.code("\n".join(interp.render()))

            with st.spinner("Checking rules and monotonicity on the grid..."):
                report = check(interp, grid, settings.max_valuations)
            visualize_check(report)

            if report.passed:
                value = bound(interp, int(n), mode, estimate, general, grid, settings.max_valuations)
                logger.info(f"{mode}({n}) <= {value} from {path}")
                st.metric(f"{mode}({int(n)}) upper bound", value)
            else:
                st.warning("No bound: the interpretation is not compatible with the transformed system.")
        except CtrcError as e:
            st.error(f"Error [{e.code}]: {e}")
        except Exception as e:
            st.error(f"Error checking interpretation: {e}")


if __name__ == "__main__":
    main()
