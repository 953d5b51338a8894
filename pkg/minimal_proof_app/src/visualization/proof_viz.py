import networkx as nx
import plotly.graph_objects as go

from src.core.arena import ExplicitArena
from src.core.cost import CostModel
from src.core.proof import ProofTree, proof_graph

PROOF_COLOR = '#2ca02c'
DISPROOF_COLOR = '#d62728'


def _edge_trace(graph, pos, color='#888') -> go.Scatter:
    edge_x, edge_y = [], []
    for source, target in graph.edges():
        x0, y0 = pos[source]
        x1, y1 = pos[target]
        edge_x.extend([x0, x1, None])
        edge_y.extend([y0, y1, None])
    return go.Scatter(x=edge_x, y=edge_y, line=dict(width=1, color=color), hoverinfo='none', mode='lines')


def _layout(title: str, annotation: str) -> go.Layout:
    return go.Layout(
        title=dict(text=title, font=dict(size=16)),
        showlegend=False,
        hovermode='closest',
        margin=dict(b=20, l=5, r=5, t=40),
        annotations=[dict(
            text=annotation,
            showarrow=False,
            xref="paper", yref="paper",
            x=0.005, y=-0.002)],
        xaxis=dict(showgrid=False, zeroline=False, showticklabels=False),
        yaxis=dict(showgrid=False, zeroline=False, showticklabels=False))


def create_proof_figure(tree: ProofTree, model: CostModel = None) -> go.Figure:
    """
    Draws a proof or disproof as a layered tree.

    Parameters:
    - tree: The (dis)proof to draw.
    - model: When given, hover labels include the cost of each subtree.

    Returns:
    - go.Figure: Nodes layered by depth, green for proof nodes and red for disproof nodes.
    """
    graph = proof_graph(tree, model)
    pos = nx.multipartite_layout(graph, subset_key='depth', align='horizontal')
    # Root on top
    pos = {name: (x, -y) for name, (x, y) in pos.items()}

    names = list(graph.nodes())
    node_trace = go.Scatter(
        x=[pos[name][0] for name in names],
        y=[pos[name][1] for name in names],
        mode='markers',
        hoverinfo='text',
        hovertext=[graph.nodes[name]['label'] for name in names],
        marker=dict(
            size=18,
            symbol=['square' if graph.nodes[name]['polarity'] == 'proof' else 'circle' for name in names],
            color=[PROOF_COLOR if graph.nodes[name]['polarity'] == 'proof' else DISPROOF_COLOR for name in names],
            line=dict(width=2, color='white'),
        ),
    )
    return go.Figure(
        data=[_edge_trace(graph, pos), node_trace],
        layout=_layout(f'<br>{tree.polarity.value.capitalize()} with {tree.node_count()} nodes',
                       "Squares prove their label, circles disprove it"),
    )


def create_arena_figure(arena: ExplicitArena, highlight=None) -> go.Figure:
    """
    Draws an explicit arena with a seeded force-directed layout.

    Parameters:
    - arena: The arena to draw.
    - highlight: Optional state drawn larger, typically the root of a search.

    Returns:
    - go.Figure: Edges for every transition, hover text with labels and moves.
    """
    graph = arena.graph()
    pos = nx.spring_layout(graph, k=0.5, iterations=50, seed=7)

    names = list(graph.nodes())
    hover_text = []
    for name in names:
        moves = [f"{data['agent']}→{target}" for _, target, data in graph.out_edges(name, data=True)]
        hover_text.append(
            f"<b>{name}</b><br>"
            f"labels: {', '.join(graph.nodes[name]['labels']) or '∅'}<br>"
            f"moves: {', '.join(moves) or 'none'}"
        )

    node_trace = go.Scatter(
        x=[pos[name][0] for name in names],
        y=[pos[name][1] for name in names],
        mode='markers+text',
        hoverinfo='text',
        text=[str(name) for name in names],
        textposition="middle center",
        textfont=dict(size=12, color='white', family='Arial Black'),
        hovertext=hover_text,
        marker=dict(
            showscale=False,
            color='#1f77b4',
            size=[45 if name == highlight else 30 for name in names],
            line=dict(width=2, color='white'),
        ),
    )
    return go.Figure(
        data=[_edge_trace(graph, pos), node_trace],
        layout=_layout('<br>Game arena', f"{len(names)} states, agents: {', '.join(arena.agents)}"),
    )
