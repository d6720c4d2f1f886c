import pandas as pd
import streamlit as st

from ctrc.errors import CtrcError
from ctrc.interpretations import derive_usable_map
from ctrc.transform import to_tpdb, transform
from utils import choose_system

RULE_KINDS = {
    1: "unconditional",
    2: "start condition",
    3: "conditions met",
    4: "next condition",
    5: "condition fails",
    6: "pattern fails",
}


def rules_frame(trs):
    rows = [
        {
            "Id": rule.id,
            "Kind": RULE_KINDS.get(rule.kind, str(rule.kind)),
            "Cost": rule.cost,
            "Origin": rule.origin,
            "Rule": str(rule),
        }
        for rule in trs.rules
    ]
    return pd.DataFrame(rows)


def map_frame(trs):
    rows = [
        {
            "Symbol": s.name,
            "Arity": s.arity,
            "Kind": s.kind.value,
            "Active arguments": ", ".join(map(str, sorted(trs.mu[s.name]))) or "none",
        }
        for s in trs.symbols
    ]
    return pd.DataFrame(rows)


def main():
    st.title("Unconditional Transformation")

    try:
        system = choose_system("transform", "strong")
    except Exception as e:
        st.error(f"Error loading system: {e}")
        return
    if system is None:
        return

    ap_mode = st.radio("Failure patterns", ("full", "var"), horizontal=True)
    strategy = st.radio("Output strategy", ("cs", "plain"), horizontal=True)
    usable = st.checkbox("Restrict original symbols to the usable replacement map")

    if st.button("Transform"):
        try:
            trs = transform(system, ap_mode)
            if usable:
                trs = trs.with_map(derive_usable_map(system))

            col1, col2, col3 = st.columns(3)
            col1.metric("Rules", len(trs.rules))
            col2.metric("Cost 1 rules", sum(rule.cost for rule in trs.rules))
            col3.metric("Symbols", len(trs.symbols))

            st.header("Rules")
            st.dataframe(rules_frame(trs), use_container_width=True)
            st.header("Replacement Map")
            st.dataframe(map_frame(trs), use_container_width=True)

            text = to_tpdb(trs, strategy)
            st.download_button(
                "Download TPDB file",
                text,
                file_name="transformed.trs",
            )
            with st.expander("TPDB text"):
                st.code(text)
        except CtrcError as e:
            st.error(f"Error [{e.code}]: {e}")
        except Exception as e:
            st.error(f"Error transforming system: {e}")


if __name__ == "__main__":
    main()
