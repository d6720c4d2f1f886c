import streamlit as st

st.set_page_config(page_title="ctrc workbench📐", layout="wide", page_icon="🌟")

# Streamlit App Title and Description
st.title("ctrc workbench📐")
st.markdown(
    """
Welcome to the **ctrc workbench**! 🎉

Measure, transform and bound the complexity of conditional constructor term rewrite systems. 🚀
"""
)

# Sidebar Information
st.sidebar.title("Navigation")
st.sidebar.markdown("✅ **Validate:** Check a system against the constructor restrictions.")
st.sidebar.markdown("🔁 **Reduce:** Inspect one-step reductions and derivation heights.")
st.sidebar.markdown("📈 **Complexity:** Tabulate runtime and derivational complexity.")
st.sidebar.markdown("🔧 **Transform:** Produce the unconditional context-sensitive system.")
st.sidebar.markdown("🧮 **Interpret:** Check an interpretation and derive a bound.")

# Additional Sidebar Information
st.sidebar.title("About")
st.sidebar.info(
    """
The workbench runs on the `ctrc` library, the same engine as the `ctrc` command line tool.
Example systems and interpretation files are bundled under `systems/`.
"""
)

st.markdown(
    """
## Overview and Features ✨

- **Validate Systems** 📝: Parse a system in TPDB-like syntax and list every violated restriction.
- **Labeled Reduction** 🏷️: Count the cost of a reduction including the work spent on conditions.
- **Complexity Tables** 📊: Conditional runtime (crc) and derivational (cdc) complexity for small sizes.
- **Transformation** 🔀: Export the unconditional system with its replacement map in TPDB format.
- **Interpretations** 🧮: Check monotone interpretations on a grid and turn them into upper bounds.

Use the pages in the sidebar to get started!
"""
)
