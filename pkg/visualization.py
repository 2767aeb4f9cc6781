import networkx as nx
import numpy as np
from matplotlib.lines import Line2D

import matplotlib
matplotlib.use("Agg")
import matplotlib.pyplot as plt

import constants

NODE_COLORS = {
    "branch": "tab:blue",
    "leaf": "tab:green",
    "failure": "tab:red",
    "pending": "tab:gray",
}


def plot_bench(rows, suite):
    """Grouped bar chart of visited choice nodes per benchmark and equality mode"""
    modes = constants.BENCH_SUITE_MODES[suite]
    names = list(dict.fromkeys(row["benchmark"] for row in rows))
    counts = np.full((len(names), len(modes)), np.nan)
    for row in rows:
        counts[names.index(row["benchmark"]), modes.index(row["mode"])] = row["choices"]

    fig, ax = plt.subplots(figsize=(max(4, 1.5*len(names)), 4))
    bar_width = 0.8/len(modes)
    x = np.arange(len(names))
    for mode_i, mode in enumerate(modes):
        # +1 keeps zero counts visible on the log scale
        ax.bar(x + mode_i*bar_width, counts[:, mode_i] + 1, width=bar_width, label=mode)

    ax.set_xticks(x + bar_width*(len(modes) - 1)/2)
    ax.set_xticklabels(names, rotation=30)
    ax.set_yscale("log")
    ax.set_ylabel("choice nodes visited + 1")
    ax.set_title(f"Suite: {suite}")
    ax.legend()
    fig.tight_layout()
    return fig


def tree_layout(graph):
    # Leaves spread along x in depth-first order, depth along y
    root = next(node for node, degree in graph.in_degree() if degree == 0)
    pos = {}
    next_x = [0.]

    def place(node, depth):
        children = list(graph.successors(node))
        for child in children:
            place(child, depth + 1)
        if children:
            x = np.mean([pos[child][0] for child in children])
        else:
            x = next_x[0]
            next_x[0] += 1.
        pos[node] = (x, -depth)

    place(root, 0)
    return pos

def plot_search_tree(graph):
    fig, ax = plt.subplots(figsize=(max(4, 0.6*graph.number_of_nodes()), 5))
    if graph.number_of_nodes() == 0:
        return fig

    pos = tree_layout(graph)
    colors = [NODE_COLORS[graph.nodes[node]["kind"]] for node in graph.nodes]
    nx.draw_networkx_nodes(graph, pos, node_color=colors, node_size=300, ax=ax)
    nx.draw_networkx_edges(graph, pos, ax=ax, arrows=False)
    nx.draw_networkx_labels(graph, pos,
            labels={node: graph.nodes[node]["label"] for node in graph.nodes}, font_size=7,
            ax=ax)
    nx.draw_networkx_edge_labels(graph, pos, edge_labels=nx.get_edge_attributes(graph, "label"),
            font_size=7, ax=ax)

    ax.legend([Line2D([0], [0], ls="", marker="o", c=col) for col in NODE_COLORS.values()],
            list(NODE_COLORS.keys()))
    ax.set_axis_off()
    fig.tight_layout()
    return fig
