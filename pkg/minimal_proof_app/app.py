import streamlit as st
import os
from src.data.loader import load_arena, dump_arena, load_cost_config
from src.utils.validators import validate_arena_document, validate_cost_config
from src.core.arena import ArenaError
from src.core.cost import BUILTIN_MODELS, CostConfigError, describe_weights, format_cost
from src.core.engine import SearchError, mps_solve
from src.core.formula import FormulaSyntaxError, UnknownSymbolError, format_formula, parse_formula
from src.core.oracle import min_cost
from src.core.proof import check_proof, extract, serialize_proof
from src.core.verification import run_campaign, summarize
from src.data.generator import InstanceBounds
from src.visualization.proof_viz import create_arena_figure, create_proof_figure
from src.utils.exporters import export_campaign_to_excel
from src.utils.session import replace_arena
import json

SAMPLE_DIR = os.path.join(os.path.dirname(__file__), 'data', 'sample_data')

# Set page configuration
st.set_page_config(
    page_title="Minimal Proof Search",
    page_icon="🌳",
    layout="wide",
    initial_sidebar_state="expanded"
)

# --- App Title and Description ---
st.title("Minimal Proof Search for Multi-Agent Modal Logic")
st.markdown("""
    Decide whether a state of a game arena satisfies a modal formula, and get the
    **cheapest proof or disproof** under a chosen cost model.
""")

# --- Sidebar Navigation ---
with st.sidebar:
    st.header("Navigation")
    page = st.radio(
        "Go to",
        ("About", "Arena", "Search", "Fuzz Campaign")
    )
    st.markdown("---")
    with st.expander("📖 Quick Help"):
        st.markdown("""
        **Syntax:**
        - `p`, `!φ`, `φ & ψ`, `φ | ψ`
        - `[a]φ`: every move of agent a leads to φ
        - `<a>φ`: some move of agent a leads to φ
        """)
    st.markdown("---")
    st.info("Built with Streamlit and Python.")

# --- Session State Initialization ---
for key in ('arena', 'result', 'proof', 'model', 'campaign'):
    if key not in st.session_state:
        st.session_state[key] = None

# --- Page Content ---

if page == "About":
    st.header("About")
    st.markdown("""
    A **game arena** is a set of states labelled with atoms, plus one move relation per agent.
    Formulas combine atoms with negation, conjunction and one box `[a]` per agent.

    The search keeps, for every node of its exploration tree, a *minimal proof number* and a
    *minimal disproof number*: lower bounds on the cost of any proof or disproof of that node.
    It always descends towards the node with the smallest disproof number and stops when one
    of the root's numbers becomes infinite. The other number is then the cost of the proof or
    disproof it returns, and no cheaper one exists.

    **Cost models:**
    - `depth`: nesting depth of boxes in the proof
    - `query_count`: number of atom checks
    - `weighted`: a price per atom check and per box step
    """)

elif page == "Arena":
    st.header("Arena")
    if st.button("Load Sample Arena"):
        try:
            with open(os.path.join(SAMPLE_DIR, 'two_agent_arena.json'), encoding='utf-8') as f:
                replace_arena(st.session_state, load_arena(f.read()))
            st.success("Sample arena loaded successfully!")
        except FileNotFoundError:
            st.error("Sample arena not found. Make sure the 'data/sample_data' directory exists.")

    arena_file = st.file_uploader("Upload an arena document", type=['json'])
    if arena_file is not None:
        text = arena_file.getvalue().decode('utf-8')
        try:
            is_valid, errors = validate_arena_document(json.loads(text))
        except json.JSONDecodeError as e:
            is_valid, errors = False, [f"Invalid JSON: {e.msg} (line {e.lineno}, column {e.colno})"]
        if is_valid:
            replace_arena(st.session_state, load_arena(text))
            st.success("✅ Arena is valid.")
        else:
            for error in errors:
                st.error(f"❌ Arena Error: {error}")

    arena = st.session_state.arena
    if arena is not None:
        col1, col2 = st.columns([3, 1])
        with col1:
            st.plotly_chart(create_arena_figure(arena), use_container_width=True)
        with col2:
            st.metric("States", len(arena.states))
            st.metric("Agents", len(arena.agents))
            st.metric("Atoms", len(arena.atoms))
            st.download_button("Download arena", dump_arena(arena), file_name="arena.json", mime="application/json")

elif page == "Search":
    st.header("Search")
    arena = st.session_state.arena
    if arena is None:
        st.warning("Load an arena first.")
    else:
        col1, col2, col3 = st.columns(3)
        with col1:
            state = st.selectbox("State", arena.states)
        with col2:
            formula_text = st.text_input("Formula", value=f"<{arena.agents[0]}>{arena.atoms[0]}")
        with col3:
            model_name = st.selectbox("Cost model", list(BUILTIN_MODELS))

        weights = "{}"
        if model_name == "weighted":
            weights = st.text_area("Weights (JSON)", value='{"atom_costs": {}, "box_costs": {}}')

        if st.button("Run Search", type="primary"):
            try:
                config = {"model": model_name, **(json.loads(weights) if model_name == "weighted" else {})}
                is_valid, errors = validate_cost_config(config)
                if not is_valid:
                    raise CostConfigError(errors[0])
                model = load_cost_config(config)
                phi = parse_formula(formula_text, arena)
                result = mps_solve(arena, state, phi, model)
                st.session_state.model = model
                st.session_state.result = result
                st.session_state.proof = extract(model, result.root)
            except (FormulaSyntaxError, UnknownSymbolError, CostConfigError, ArenaError, SearchError) as e:
                st.error(f"Error: {e}")
            except json.JSONDecodeError as e:
                st.error(f"Invalid weights: {e.msg}")

        result, tree, model = st.session_state.result, st.session_state.proof, st.session_state.model
        if result is not None:
            col1, col2, col3 = st.columns(3)
            col1.metric("Verdict", result.verdict.value)
            col2.metric("Cost", format_cost(result.cost))
            col3.metric("Expansions", result.expansions)
            if describe_weights(model):
                st.caption(f"Weights: {describe_weights(model)}")

            oracle = min_cost(arena, tree.state, tree.formula, model)
            minimal = oracle.min_proof_cost if oracle.holds else oracle.min_disproof_cost
            check = check_proof(arena, tree)
            if oracle.holds == result.root.proved and minimal == result.cost and check:
                st.success("Brute force agrees: same verdict and same minimal cost, and the proof checks.")
            else:
                st.error(f"Mismatch: oracle holds={oracle.holds}, minimal cost {format_cost(minimal)}, "
                         f"proof check {check.describe()}")

            st.subheader(f"{tree.polarity.value.capitalize()} of {tree.state} ⊨ {format_formula(tree.formula)}")
            st.plotly_chart(create_proof_figure(tree, model), use_container_width=True)

            col1, col2 = st.columns(2)
            with col1:
                st.download_button("Download JSON", serialize_proof(tree, "structured"),
                                   file_name="proof.json", mime="application/json")
            with col2:
                st.download_button("Download DOT", serialize_proof(tree, "dot", model),
                                   file_name="proof.dot", mime="text/vnd.graphviz")

elif page == "Fuzz Campaign":
    st.header("Fuzz Campaign")
    st.markdown("Random arenas and formulas, each solved under every cost model and checked against brute force.")
    col1, col2 = st.columns(2)
    with col1:
        seed = st.number_input("Seed", value=42, step=1)
        cases = st.number_input("Cases", value=100, min_value=0, step=10)
    with col2:
        max_states = st.slider("Max states", 1, 8, 6)
        max_formula_size = st.slider("Max formula size", 1, 10, 8)

    if st.button("Run Campaign", type="primary"):
        with st.spinner("Running..."):
            bounds = InstanceBounds(max_states=max_states, max_formula_size=max_formula_size)
            st.session_state.campaign = run_campaign(int(seed), int(cases), bounds, axiom_samples=1000)

    campaign = st.session_state.campaign
    if campaign is not None:
        if campaign.passed:
            st.success("All checks passed.")
        else:
            st.error("Some checks failed.")
            st.code(campaign.replay(), language='json')
        st.text(summarize(campaign))
        st.dataframe(campaign.table, use_container_width=True)
        st.download_button("Download report (Excel)", export_campaign_to_excel(campaign),
                           file_name="campaign.xlsx",
                           mime="application/vnd.openxmlformats-officedocument.spreadsheetml.sheet")
