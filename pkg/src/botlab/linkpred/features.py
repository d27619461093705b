"""Structural and profile features of a candidate directed link ``u -> v``."""

import math
from typing import NamedTuple

import numpy as np

FEATURE_NAMES = (
    "common_neighbors",
    "triangle_overlap",
    "resource_allocation",
    "reciprocation",
    "sim_contacts",
    "sim_library",
    "sim_groups",
    "common_group_size",
)


class FeatureVector(NamedTuple):
    common_neighbors: int
    triangle_overlap: float
    resource_allocation: float
    reciprocation: int
    sim_contacts: float
    sim_library: float
    sim_groups: float
    common_group_size: int


def cosine(a, b):
    """Cosine similarity of two binary incidence vectors given as sets."""
    if not a or not b:
        return 0.0
    inter = len(a & b) if len(a) <= len(b) else len(b & a)
    if inter == 0:
        return 0.0
    return inter / math.sqrt(len(a) * len(b))


class FeatureExtractor:
    """Computes feature vectors against a fixed graph snapshot and profile map."""

    def __init__(self, g, profiles):
        self.g = g
        self.profiles = profiles
        self.group_sizes = profiles.group_sizes() if hasattr(profiles, "group_sizes") else _group_sizes(profiles)

    def features(self, u, v):
        if u == v:
            raise ValueError("features of a self-pair are undefined")
        g = self.g
        out_u = g.out_neighbors(u)
        in_v = g.in_neighbors(v)
        common = out_u & in_v
        cn = len(common)
        k_u = len(out_u)
        if k_u:
            overlap = cn / k_u
            ra = math.fsum(1.0 / g.out_degree(z) for z in common) / k_u
        else:
            overlap = ra = 0.0
        recip = 1 if g.has_arc(v, u) else 0
        pu, pv = self.profiles[u], self.profiles[v]
        shared = pu.groups & pv.groups
        group_size = min(self.group_sizes[gid] for gid in shared) if shared else 0
        return FeatureVector(
            cn,
            overlap,
            ra,
            recip,
            cosine(set(out_u), set(g.out_neighbors(v))),
            cosine(pu.library, pv.library),
            cosine(pu.groups, pv.groups),
            group_size,
        )

    def matrix(self, pairs):
        """Feature matrix of shape ``(len(pairs), 8)``."""
        return np.array([self.features(u, v) for u, v in pairs], dtype=float).reshape(-1, len(FEATURE_NAMES))


def _group_sizes(profiles):
    sizes = {}
    for p in profiles.values():
        for gid in p.groups:
            sizes[gid] = sizes.get(gid, 0) + 1
    return sizes


def extract_features(g, profiles, u, v):
    for x in (u, v):
        if x not in g:
            raise KeyError(f"unknown node {x}")
    return FeatureExtractor(g, profiles).features(u, v)
