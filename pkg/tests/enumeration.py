"""Exhaustive instance enumeration shared by the tests.

Labeled digraphs on ``n`` vertices are indexed by bitmasks over the ordered
pairs ``(u, v)``, ``u != v``, in lexicographic order.  Isomorphism classes are
found by taking the smallest relabelled mask over all vertex permutations,
vectorised with numpy so the five-vertex case (about a million digraphs)
stays cheap.
"""
from __future__ import annotations

import itertools
from functools import lru_cache

import numpy as np

from bipart.graphs import Digraph, Graph


@lru_cache(maxsize=None)
def arc_pairs(n: int) -> tuple[tuple[int, int], ...]:
    return tuple((u, v) for u in range(n) for v in range(n) if u != v)


@lru_cache(maxsize=None)
def edge_pairs(n: int) -> tuple[tuple[int, int], ...]:
    return tuple(itertools.combinations(range(n), 2))


def digraph_from_mask(n: int, mask: int) -> Digraph:
    pairs = arc_pairs(n)
    return Digraph(n, [pairs[i] for i in range(len(pairs)) if mask >> i & 1])


def graph_from_mask(n: int, mask: int) -> Graph:
    pairs = edge_pairs(n)
    return Graph(n, [pairs[i] for i in range(len(pairs)) if mask >> i & 1])


def all_digraphs(n: int):
    for mask in range(1 << len(arc_pairs(n))):
        yield digraph_from_mask(n, mask)


def all_graphs(n: int):
    for mask in range(1 << len(edge_pairs(n))):
        yield graph_from_mask(n, mask)


def _bit_images(pairs, perm):
    index = {p: i for i, p in enumerate(pairs)}
    return [index[(perm[u], perm[v]) if (perm[u], perm[v]) in index else (perm[v], perm[u])]
            for u, v in pairs]


def canonical_masks(n: int, pairs, masks: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Smallest relabelled mask per input mask, and the permutation index reaching it."""
    perms = list(itertools.permutations(range(n)))
    best = masks.copy()
    arg = np.zeros(len(masks), dtype=np.int32)
    bits = [((masks >> i) & 1) for i in range(len(pairs))]
    for k, perm in enumerate(perms):
        image = np.zeros_like(masks)
        for i, j in enumerate(_bit_images(pairs, perm)):
            image |= bits[i] << j
        better = image < best
        best = np.where(better, image, best)
        arg = np.where(better, k, arg)
    return best, arg


def strong_flags(n: int, masks: np.ndarray) -> np.ndarray:
    """Vectorised strong connectivity of every digraph mask."""
    pairs = arc_pairs(n)
    reach = np.zeros((len(masks), n, n), dtype=bool)
    for i, (u, v) in enumerate(pairs):
        reach[:, u, v] = (masks >> i) & 1
    reach |= np.eye(n, dtype=bool)
    for _ in range(max(1, (n - 1).bit_length())):
        reach = reach | (np.einsum("kij,kjl->kil", reach.astype(np.uint8),
                                    reach.astype(np.uint8)) > 0)
    return reach.all(axis=(1, 2))


class DigraphClasses:
    """All labeled digraphs on ``n`` vertices grouped by isomorphism class."""

    def __init__(self, n: int):
        self.n = n
        self.pairs = arc_pairs(n)
        self.perms = list(itertools.permutations(range(n)))
        self.masks = np.arange(1 << len(self.pairs), dtype=np.int64)
        self.canon, self.perm_index = canonical_masks(n, self.pairs, self.masks)
        self.strong = strong_flags(n, self.masks)

    def representatives(self) -> list[int]:
        return sorted(set(self.canon.tolist()))

    def transport(self, mask: int, colors_of_canon: tuple[int, ...]) -> tuple[int, ...]:
        """Move a colouring of the canonical form back onto labeled digraph ``mask``."""
        perm = self.perms[int(self.perm_index[mask])]
        # vertex v of the labeled digraph is vertex perm[v] of the canonical one
        return tuple(colors_of_canon[perm[v]] for v in range(self.n))
