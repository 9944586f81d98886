"""
Streamlit Track-Layout Dashboard.
Hauptseite: generate a graph, lay it out, draw it in 3D.
Sidebar: stored runs, oracles, system.
"""

import os

import httpx
import pandas as pd
import plotly.graph_objects as go
import streamlit as st

# --- Config ---
API_BASE = os.getenv("LAYOUT_API_URL", "http://localhost:8000")
API_KEY = os.getenv("LAYOUT_API_KEY", "")
HEADERS = {"x-api-key": API_KEY} if API_KEY else {}
TIMEOUT = float(os.getenv("LAYOUT_DASH_TIMEOUT", "60"))

FAMILY_PARAMS = {
    "ktree": ("k", "n"),
    "partial_ktree": ("k", "n", "p"),
    "tree": ("n",),
    "path": ("n",),
    "cycle": ("n",),
    "complete": ("n",),
    "star": ("m",),
    "grid": ("rows", "cols"),
    "caterpillar": ("m", "legs"),
    "gnp": ("n", "p"),
    "bipartite": ("a", "b", "p"),
    "gk": ("k",),
}
RANDOM_FAMILIES = {"tree", "ktree", "partial_ktree", "gnp", "bipartite"}
DRAW_METHODS = ["balanced", "track", "aspect", "cohen", "moment"]


def _detail(e: Exception) -> str:
    if isinstance(e, httpx.HTTPStatusError):
        try:
            return f"{e.response.status_code}: {e.response.json().get('detail')}"
        except ValueError:
            return f"{e.response.status_code}: {e.response.text}"
    return str(e)


def api_get(path: str, params: dict | None = None) -> dict | list:
    try:
        r = httpx.get(f"{API_BASE}{path}", params=params, headers=HEADERS, timeout=TIMEOUT)
        r.raise_for_status()
        return r.json()
    except Exception as e:
        st.error(f"API Error: {_detail(e)}")
        return {}


def api_post(path: str, data: dict) -> dict:
    try:
        r = httpx.post(f"{API_BASE}{path}", json=data, headers=HEADERS, timeout=TIMEOUT)
        r.raise_for_status()
        return r.json()
    except Exception as e:
        st.error(f"API Error: {_detail(e)}")
        return {}


def api_delete(path: str) -> dict:
    try:
        r = httpx.delete(f"{API_BASE}{path}", headers=HEADERS, timeout=TIMEOUT)
        r.raise_for_status()
        return r.json()
    except Exception as e:
        st.error(f"API Error: {_detail(e)}")
        return {}


# --- Plotly helper ---
PLOTLY_CONFIG = {"displayModeBar": False, "responsive": True}

PLOTLY_LAYOUT = dict(
    template="plotly_dark",
    margin=dict(l=40, r=20, t=40, b=35),
    legend=dict(orientation="h", yanchor="bottom", y=1.02),
)


def chart(fig, height=380, **kwargs):
    fig.update_layout(**PLOTLY_LAYOUT, height=height, **kwargs)
    st.plotly_chart(fig, use_container_width=True, config=PLOTLY_CONFIG)


def drawing_figure(env: dict) -> go.Figure:
    """Vertices as markers coloured by track, edges as one line trace (None-separated)."""
    points = env["drawing"]["points"]
    edges = env["graph"]["edges"]
    colour = [0] * len(points)
    tracks = (env.get("track_layout") or {}).get("tracks") or []
    for i, track in enumerate(tracks):
        for v in track:
            colour[v] = i

    ex, ey, ez = [], [], []
    for u, v in edges:
        for axis, out in enumerate((ex, ey, ez)):
            out.extend([points[u][axis], points[v][axis], None])

    fig = go.Figure()
    fig.add_trace(go.Scatter3d(
        x=ex, y=ey, z=ez, mode="lines", name="edges",
        line=dict(color="rgba(180,180,200,0.5)", width=2), hoverinfo="skip",
    ))
    fig.add_trace(go.Scatter3d(
        x=[p[0] for p in points], y=[p[1] for p in points], z=[p[2] for p in points],
        mode="markers", name="vertices",
        marker=dict(size=3, color=colour, colorscale="Turbo"),
        text=[f"v{v} track {colour[v]}" for v in range(len(points))], hoverinfo="text",
    ))
    fig.update_layout(scene=dict(xaxis_title="x", yaxis_title="y", zaxis_title="z"))
    return fig


# --- Page Config ---
st.set_page_config(
    page_title="Track-Layout",
    page_icon=None,
    layout="wide",
    initial_sidebar_state="expanded",
)

st.markdown("""
<style>
    .block-container { padding-top: 0.5rem; max-width: 100%; }
    div[data-testid="stMetric"] {
        background-color: #1e1e2e;
        border: 1px solid #333;
        border-radius: 10px;
        padding: 8px 10px;
    }
</style>
""", unsafe_allow_html=True)

# =========================================================
# SIDEBAR — Navigation
# =========================================================
PAGES = ["Layout & Drawing", "Runs", "Oracles", "System"]
PAGE_MAP = {"Layout & Drawing": "main", "Runs": "runs", "Oracles": "oracles", "System": "system"}

with st.sidebar:
    st.header("Track-Layout")
    sidebar_page = st.radio("Navigation", PAGES, index=0, label_visibility="collapsed")
    st.divider()
    last = st.session_state.get("envelope")
    if last:
        st.metric("Vertices", last["graph"]["n"])
        st.metric("Edges", len(last["graph"]["edges"]))
        if last.get("track_layout"):
            st.metric("Tracks", len(last["track_layout"]["tracks"]))

current_page = PAGE_MAP.get(sidebar_page, "main")


def _generator_form(prefix: str) -> dict | None:
    """Family/parameter inputs; returns the /api/generate response once submitted."""
    family = st.selectbox("Family", list(FAMILY_PARAMS), key=f"{prefix}_family")
    params = {}
    cols = st.columns(len(FAMILY_PARAMS[family]) + 1)
    for col, name in zip(cols, FAMILY_PARAMS[family]):
        with col:
            if name == "p":
                params[name] = st.number_input("p", 0.0, 1.0, 0.5, step=0.05, key=f"{prefix}_p")
            else:
                default = 2 if name == "k" else 20 if name == "n" else 4
                params[name] = int(st.number_input(name, min_value=0, value=default, step=1, key=f"{prefix}_{name}"))
    with cols[-1]:
        seed = int(st.number_input("seed", min_value=0, value=1, step=1, key=f"{prefix}_seed"))
    if st.button("Generate", type="primary", key=f"{prefix}_go"):
        body = {"family": family, "params": params}
        if family in RANDOM_FAMILIES:
            body["seed"] = seed
        return api_post("/api/generate", body)
    return None


# =========================================================
# PAGE: Layout & Drawing (default)
# =========================================================
if current_page == "main":
    st.subheader("1 — Graph")
    env = _generator_form("main")
    if env:
        st.session_state["envelope"] = env
        st.rerun()

    env = st.session_state.get("envelope")
    if not env:
        st.info("Generate a graph to start.")
        st.stop()

    st.subheader("2 — Track layout")
    c1, c2, c3 = st.columns(3)
    with c1:
        method = st.selectbox("Method", ["auto", "ktree", "tree", "path", "partition", "grid", "gk"])
    with c2:
        layout_k = st.number_input("k (blank: detect)", min_value=0, value=None, step=1)
    with c3:
        balance = st.text_input("Balance t'", value="")
    if st.button("Lay out", use_container_width=True):
        body = {"envelope": env, "method": method, "k": layout_k, "balance": balance or None}
        r = api_post("/api/layout/track", body)
        if r:
            st.session_state["envelope"] = r
            st.rerun()

    if env.get("track_layout"):
        tracks = env["track_layout"]["tracks"]
        m1, m2, m3 = st.columns(3)
        m1.metric("Tracks", len(tracks))
        m2.metric("Largest track", max((len(t) for t in tracks), default=0))
        m3.metric("Mode", env["track_layout"]["mode"])

    st.subheader("3 — Drawing")
    d1, d2 = st.columns(2)
    with d1:
        draw_method = st.selectbox("Drawing", DRAW_METHODS)
    with d2:
        r_param = st.text_input("r (aspect, e.g. 2 or 3/2)", value="1")
    if st.button("Draw", use_container_width=True, type="primary"):
        body = {"envelope": env, "r": r_param if draw_method == "aspect" else None}
        r = api_post(f"/api/draw/{draw_method}", body)
        if r:
            st.session_state["envelope"] = r
            st.rerun()

    if env.get("drawing"):
        frame = env["drawing"].get("frame") or []
        if frame:
            f1, f2 = st.columns(2)
            f1.metric("Frame", " x ".join(str(x) for x in frame))
            f2.metric("Volume", frame[0] * frame[1] * frame[2])
        chart(drawing_figure(env), height=600)

        if st.button("Save run"):
            row = api_post("/api/stats", {"envelope": env, "label": draw_method})
            if row:
                st.success(f"Run {row['id']} saved")

    with st.expander("Envelope JSON"):
        st.json(env, expanded=False)


# =========================================================
# PAGE: Runs
# =========================================================
elif current_page == "runs":
    st.subheader("Stored runs")
    family = st.selectbox("Family", ["(all)"] + list(FAMILY_PARAMS))
    runs = api_get("/api/runs", {"family": None if family == "(all)" else family, "limit": 500})
    if not runs:
        st.info("No runs yet.")
        st.stop()

    df = pd.DataFrame([{"id": r["id"], "timestamp": r["timestamp"], "label": r["label"], **r["row"]} for r in runs])
    st.dataframe(df, use_container_width=True, hide_index=True)

    for col, title in (("tracks", "Tracks vs n"), ("volume", "Volume vs n")):
        if col in df and df[col].notna().any():
            sub = df[df[col].notna()].sort_values("n")
            fig = go.Figure()
            for fam, part in sub.groupby("family"):
                fig.add_trace(go.Scatter(x=part["n"], y=part[col], mode="markers+lines", name=fam or "-"))
            chart(fig, title=title, xaxis_title="n", yaxis_title=col)

    with st.expander("Delete run"):
        run_id = st.number_input("Run id", min_value=1, step=1)
        if st.button("Delete"):
            if api_delete(f"/api/runs/{int(run_id)}"):
                st.success(f"Run {int(run_id)} deleted")
                st.rerun()


# =========================================================
# PAGE: Oracles
# =========================================================
elif current_page == "oracles":
    st.subheader("Exact parameters (small graphs)")
    env = st.session_state.get("envelope")
    if not env:
        st.info("Generate a graph on the main page first.")
        st.stop()
    st.caption(f"n = {env['graph']['n']}, m = {len(env['graph']['edges'])}")
    kind = st.selectbox("Parameter", ["queue-number", "track-number", "pathwidth", "treewidth"])
    limits = (api_get("/") or {}).get("oracle_limits", {})
    if kind in limits and env["graph"]["n"] > limits[kind]:
        st.warning(f"{kind} accepts at most {limits[kind]} vertices; the API will refuse this graph.")
    if st.button("Compute", type="primary"):
        res = api_post(f"/api/oracle/{kind}", {"envelope": env})
        if res:
            c1, c2 = st.columns(2)
            c1.metric(kind, res["value"])
            c2.metric("Explored", res.get("explored", 0))
            st.json(res.get("witness"), expanded=False)


# =========================================================
# PAGE: System
# =========================================================
elif current_page == "system":
    st.subheader("System")
    info = api_get("/")
    if info:
        st.success(f"API reachable at {API_BASE}")
        st.json(info)
    st.caption(f"API key {'set' if API_KEY else 'not set'}")
