import os
import tempfile

import pandas as pd
import streamlit as st
from loguru import logger

from ctrc.cctrs import SearchBudget, load_system
from ctrc.utils import DEFAULT_CONFIG_PATH, load_config, raise_recursion_limit

SYSTEMS_DIR = os.path.join(os.path.dirname(os.path.abspath(__file__)), "systems")


def save_uploaded_file(uploaded, prefix="system"):
    """
    Save an uploaded system or interpretation file to a temporary directory.

    Returns:
    - path: Path of the saved file.
    """
    now = pd.Timestamp.now().strftime("%Y%m%d%H%M%S")
    base_path = tempfile.mkdtemp(prefix=f"{prefix}_{now}_")
    path = os.path.join(base_path, uploaded.name)
    with open(path, "wb") as f:
        f.write(uploaded.getbuffer())
    logger.info(f"Saved {uploaded.name} to {path}")
    return path


def bundled_files(extension):
    if not os.path.isdir(SYSTEMS_DIR):
        return []
    return sorted(f for f in os.listdir(SYSTEMS_DIR) if f.endswith(extension))


def choose_file(label, extension, key):
    """Radio between a bundled example and an upload; returns a path or None."""
    source = st.radio(f"{label} source", ("Bundled", "Upload"), key=f"{key}_source", horizontal=True)
    if source == "Bundled":
        names = bundled_files(extension)
        if not names:
            st.warning(f"No bundled {extension} files found in {SYSTEMS_DIR}")
            return None
        return os.path.join(SYSTEMS_DIR, st.selectbox(label, names, key=key))

    uploaded = st.file_uploader(f"Upload {label}", type=[extension.lstrip(".")], key=key)
    if uploaded is None:
        return None
    return save_uploaded_file(uploaded, prefix=key)


def choose_system(key="system", mode="cctrs"):
    path = choose_file("System", ".ctrs", key)
    if path is None:
        return None
    system = load_system(path, mode)
    logger.info(f"Loaded {len(system.rules)} rules from {path}")
    return system


def workbench_settings(config_path=DEFAULT_CONFIG_PATH):
    """Sidebar budget controls seeded from the yaml defaults."""
    settings = load_config(config_path)
    raise_recursion_limit(settings.recursion_limit)
    st.sidebar.title("Budget")
    states = st.sidebar.number_input("States per search", min_value=1, value=settings.budget_states, step=1000)
    depth = st.sidebar.number_input("Condition depth", min_value=1, value=settings.budget_depth, step=1)
    grid = st.sidebar.number_input("Check grid 0..g", min_value=1, value=settings.grid, step=1)
    return settings, SearchBudget(int(states), int(depth)), int(grid)
