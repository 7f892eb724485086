import os
from typing import Dict, List

import streamlit as st

# Local application imports
from core.domain import ManifoldState, pi1_summary
from core.drivers import SCAN_DRIVERS
from core.dsl import format_value
from core.errors import CalculusError
from core.geography import Window
from core.invariants import homeomorphism_type
from core.pipelines import pipeline_names
from core.services import CalculusService, get_calculus_service
from core.settings import load_settings, save_settings

# === CONSTANTS & CONFIGURATION ===
PAGE_TITLE = "Fourfold"
PAGE_ICON = "🧮"
DEFAULT_BASES = ["Z3", "Z2", "M14", "M35"]
DEFAULT_WINDOW = {"chi_min": 10, "chi_max": 20, "c_min": 60, "c_max": 160}


# === INITIALIZATION ===
def load_css(file_name=os.path.join(os.path.abspath(os.path.dirname(__file__)), "styles.css")):
    with open(file_name) as f:
        st.markdown(f"<style>{f.read()}</style>", unsafe_allow_html=True)


st.set_page_config(
    page_title=PAGE_TITLE,
    page_icon=PAGE_ICON,
    layout="wide",
    initial_sidebar_state="expanded"
)

load_css()


# === HELPER FUNCTIONS ===
@st.cache_data(show_spinner="Running every pipeline...")
def audit_table() -> List[Dict]:
    """Audit rows as plain dicts, computed once per session."""
    service = get_calculus_service(load_settings())
    return [
        {
            "claim": r.claim_id,
            "stated": r.stated,
            "computed": r.computed,
            "status": r.status.value,
            "citation": r.citation,
        }
        for r in service.audit()
    ]


def state_badges(state: ManifoldState) -> str:
    v = state.invariants
    badges = [f'<span class="badge b-spin">{state.spin.upper()}</span>']
    if v.simply_connected:
        badges.append('<span class="badge b-success">SIMPLY CONNECTED</span>')
    if v.symplectic:
        badges.append('<span class="badge b-accent">SYMPLECTIC</span>')
    if v.minimal:
        badges.append('<span class="badge b-accent">MINIMAL</span>')
    return "".join(badges)


# === COMPONENT RENDERERS ===
def render_sidebar(settings: Dict):
    with st.sidebar:
        st.markdown("### Engine")
        with st.expander("⚙️ Preferences", expanded=True):
            if 'w_budget' not in st.session_state:
                st.session_state.w_budget = int(settings.get('tietze_budget', 100_000))
            if 'w_driver' not in st.session_state:
                st.session_state.w_driver = settings.get('scan_driver', 'serial')

            st.number_input("Tietze budget", min_value=1, step=1000, key="w_budget")
            st.radio("Scan driver", sorted(SCAN_DRIVERS), key="w_driver")

            if st.button("Save", use_container_width=True):
                settings['tietze_budget'] = int(st.session_state.w_budget)
                settings['scan_driver'] = st.session_state.w_driver
                save_settings(settings)
                st.rerun()


def render_state_card(title: str, state: ManifoldState):
    """Renders the invariants, surfaces and provenance of one state."""
    try:
        t = str(homeomorphism_type(state.invariants))
    except CalculusError:
        t = "no homeomorphism type (needs simply connected, nonspin)"
    html_info = f"""
    <div class="fourfold-card">
        <div class="card-title">{title}</div>
        <div class="badge-container">{state_badges(state)}</div>
        <div class="stats-row">
            <span>e = {state.e}</span><span>σ = {state.sigma}</span>
            <span>c₁² = {state.c1sq}</span><span>χ_h = {format_value(state.chi_h)}</span>
            <span>π₁: {pi1_summary(state)}</span>
        </div>
        <div class="type-row">{t}</div>
    </div>
    """
    st.markdown(html_info, unsafe_allow_html=True)

    col_surfaces, col_provenance = st.columns([0.45, 0.55], gap="small")
    with col_surfaces:
        st.markdown("##### Surfaces")
        st.dataframe(
            [
                {
                    "name": s.name,
                    "genus": s.genus,
                    "square": s.self_intersection,
                    "tags": ", ".join(sorted(tag.value for tag in s.tags)),
                }
                for s in state.surfaces
            ],
            use_container_width=True,
            hide_index=True,
        )
    with col_provenance:
        st.markdown("##### Provenance")
        for entry in state.provenance:
            st.markdown(f"- {entry}")


def render_audit_tab():
    rows = audit_table()
    mismatches = [r for r in rows if r["status"] == "MISMATCH"]
    st.markdown(
        f'<div class="sub-header">{len(rows)} claims • {len(mismatches)} mismatches</div>',
        unsafe_allow_html=True,
    )
    only_mismatches = st.toggle("Show mismatches only")
    st.dataframe(mismatches if only_mismatches else rows, use_container_width=True, hide_index=True)


def render_pipelines_tab(service: CalculusService):
    name = st.selectbox("Pipeline", [n for n in pipeline_names() if "(" not in n] + ["S_n_family(7)"])
    try:
        result = service.pipeline(name)
    except CalculusError as e:
        st.error(str(e))
        return
    render_state_card(result.name, result.state)
    if st.button("💾 Save state", key=f"save_{result.name}"):
        service.repository.save_state(result.name, result.state)
        st.toast(f"Saved {result.name}")


def render_geography_tab(service: CalculusService):
    cols = st.columns(4)
    bounds = {
        key: col.number_input(key.replace("_", " "), value=value, step=1, key=f"w_{key}")
        for col, (key, value) in zip(cols, DEFAULT_WINDOW.items())
    }
    bases = st.multiselect("Base points", pipeline_names()[:-1], default=DEFAULT_BASES)
    window = Window(int(bounds["chi_min"]), int(bounds["chi_max"]), int(bounds["c_min"]), int(bounds["c_max"]))

    if window.is_empty or not bases:
        st.info("🗺️ Pick a non-empty window and at least one base point.")
        return
    try:
        result = service.scan(window, bases)
    except CalculusError as e:
        st.error(str(e))
        return

    realized = [r for r in result.rows if r.realized]
    st.markdown(
        f'<div class="sub-header">{len(realized)} of {len(result.rows)} points realized</div>',
        unsafe_allow_html=True,
    )
    if realized:
        st.scatter_chart(
            {"chi_h": [r.chi_h for r in realized], "c1_sq": [r.c1_sq for r in realized]},
            x="chi_h",
            y="c1_sq",
        )
    st.download_button("⬇️ Download CSV", result.to_csv(), file_name="geography.csv", mime="text/csv")


def render_saved_tab(service: CalculusService):
    states = service.saved_states()
    if not states:
        st.info("📚 No saved states yet. Run a script with --json or save a pipeline result.")
        return
    for name, data in sorted(states.items()):
        col_info, col_actions = st.columns([0.85, 0.15], gap="small")
        with col_info:
            st.markdown(
                f'<div class="fourfold-card"><div class="card-title">{name}</div>'
                f'<div class="stats-row"><span>e = {data["e"]}</span><span>σ = {data["sigma"]}</span>'
                f'<span>c₁² = {data["c1sq"]}</span><span>π₁: {data["pi1"]}</span></div></div>',
                unsafe_allow_html=True,
            )
        with col_actions:
            if st.session_state.get('confirm_del') == name:
                if st.button("✓", key=f"y_{name}", use_container_width=True, help="Confirm Delete"):
                    service.delete_state(name)
                    del st.session_state['confirm_del']
                    st.rerun()
            elif st.button("✕", key=f"del_{name}", use_container_width=True, help="Delete state"):
                st.session_state['confirm_del'] = name
                st.rerun()


# === MAIN ENTRY POINT ===
def main():
    settings = load_settings()
    service = get_calculus_service(settings)

    render_sidebar(settings)

    st.markdown('<div class="main-header">Fourfold.</div>', unsafe_allow_html=True)
    st.markdown('<div class="sub-header">Invariants, constructions and geography of closed 4-manifolds</div>', unsafe_allow_html=True)

    tab_audit, tab_pipelines, tab_geography, tab_saved = st.tabs(
        ["Audit", "Pipelines", "Geography", "Saved states"]
    )
    with tab_audit:
        render_audit_tab()
    with tab_pipelines:
        render_pipelines_tab(service)
    with tab_geography:
        render_geography_tab(service)
    with tab_saved:
        render_saved_tab(service)


if __name__ == "__main__":
    main()
