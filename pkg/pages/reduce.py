import pandas as pd
import streamlit as st

from ctrc.cctrs import PlainSearch
from ctrc.cli import read_term
from ctrc.csrewrite import CsRewriter
from ctrc.errors import CtrcError
from ctrc.labeled import LabeledRewriter, label
from ctrc.terms import render
from ctrc.transform import transform, zeta
from enhanced_viz import COST_ICONS
from utils import choose_system, workbench_settings

STEP_ICONS = {"success": "🟢", "fail": "🟠", "bot": "⚪️"}


def _position(pos):
    return ".".join(map(str, pos)) or "ε"


def labeled_frame(steps):
    rows = [
        {
            "Icon": STEP_ICONS[step.kind.value],
            "Kind": step.kind.value,
            "Symbol": step.symbol,
            "Rule": step.rule,
            "Position": _position(step.position),
            "Cost": step.cost,
            "Condition costs": ", ".join(map(str, step.condition_costs)),
            "Target": render(step.target),
        }
        for step in steps
    ]
    return pd.DataFrame(rows)


def plain_frame(steps):
    rows = [
        {"Rule": rule, "Position": _position(pos), "Target": render(target)}
        for target, rule, pos in sorted(steps, key=lambda s: (s[2], s[1], str(s[0])))
    ]
    return pd.DataFrame(rows)


def main():
    st.title("Reduction Inspector")
    _, budget, _ = workbench_settings()

    st.write("## Select System")
    transformed = st.checkbox("Also measure the transformed term in the context-sensitive system (strong systems only)")
    try:
        system = choose_system("reduce", "strong" if transformed else "cctrs")
    except Exception as e:
        st.error(f"Error loading system: {e}")
        return
    if system is None:
        return

    text = st.text_input("Term (labels as f{1,2}(...))", "")
    relation = st.selectbox("Relation", ("labeled", "plain", "quasi", "labeled-quasi"))

    if st.button("Reduce"):
        if not text:
            st.warning("Please enter a term.")
            return
        try:
            term = read_term(text, system)
            rewriter = LabeledRewriter(system, budget)
            match relation:
                case "labeled":
                    df = labeled_frame(rewriter.labeled_steps(label(term, system)))
                case "plain":
                    df = plain_frame(PlainSearch(system, budget).steps(term))
                case "quasi":
                    df = pd.DataFrame({"Target": sorted(map(render, PlainSearch(system, budget).quasi_steps(term)))})
                case _:
                    df = pd.DataFrame({"Target": sorted(map(render, rewriter.quasi_steps_labeled(label(term, system))))})

            st.header("One-step Reductions")
            if df.empty:
                st.write("No reductions: the term is a normal form for this relation.")
            else:
                st.dataframe(df, use_container_width=True)

            st.header("Derivation Height")
            cost = rewriter.derivation_height(term)
            col1, col2 = st.columns(2)
            col1.metric("dh", f"{COST_ICONS[cost.kind]} {cost}")
            if transformed:
                cs_cost = CsRewriter(transform(system), budget).derivation_height(zeta(label(term, system), system))
                col2.metric("cs dh", f"{COST_ICONS[cs_cost.kind]} {cs_cost}")
        except CtrcError as e:
            st.error(f"Error [{e.code}]: {e}")
        except Exception as e:
            st.error(f"Error reducing term: {e}")


if __name__ == "__main__":
    main()
