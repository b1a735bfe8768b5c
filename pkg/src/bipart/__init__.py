"""Vertex 2-partitions whose crossing sub(di)graph meets degree or connectivity demands."""

__version__ = "0.1.0"
