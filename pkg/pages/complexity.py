import streamlit as st

from ctrc.errors import CtrcError
from enhanced_viz import complexity_table, height_table, show_complexity_chart, show_height_statistics
from utils import choose_system, workbench_settings


def main():
    st.write("# Complexity Tables")
    st.write(
        """
    Derivation heights count every rewrite step, including the steps spent on evaluating conditions.
    crc(n) takes the highest height over basic terms of size at most n, cdc(n) over all ground terms.
    """
    )
    _, budget, _ = workbench_settings()

    try:
        system = choose_system("complexity")
    except Exception as e:
        st.error(f"Error loading system: {e}")
        return
    if system is None:
        return

    max_n = st.slider("Largest size n", min_value=1, max_value=10, value=4)
    modes = st.multiselect("Modes", ["crc", "cdc"], default=["crc", "cdc"])

    if st.button("Compute Complexity"):
        try:
            with st.spinner("Measuring derivation heights..."):
                df = complexity_table(system, max_n, budget, tuple(modes))
            st.header("Complexity")
            st.dataframe(df, use_container_width=True)
            show_complexity_chart(df, tuple(modes))

            st.header("Heights of Basic Terms")
            show_height_statistics(height_table(system, max_n, budget))
        except CtrcError as e:
            st.error(f"Error [{e.code}]: {e}")
        except Exception as e:
            st.error(f"Error computing complexity: {e}")


if __name__ == "__main__":
    main()
