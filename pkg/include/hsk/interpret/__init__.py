from .attribution import word_scores, highlight
from .hatemap import build_map, pooled_vectors
from .render import render_map, render_highlight, write_coordinates
from .tsne import TSNE, tsne_project

__all__ = [
    "word_scores",
    "highlight",
    "build_map",
    "pooled_vectors",
    "render_map",
    "render_highlight",
    "write_coordinates",
    "TSNE",
    "tsne_project",
]
