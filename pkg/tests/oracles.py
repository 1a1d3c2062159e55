"""Independent brute-force oracles shared by the unit and acceptance tests."""

from __future__ import annotations

import itertools

import numpy as np


def brute_force_match(gt_xy: np.ndarray, det_xy: np.ndarray, radius: float) -> tuple[int, float]:
    """Exhaustive maximum-cardinality minimum-total-distance assignment.

    Enumerates every injective detection-to-ground-truth assignment under the
    radius constraint, from the largest cardinality down. Returns the best
    (cardinality, total distance). Intended for instances up to ~6x6.
    """
    n_det, n_gt = len(det_xy), len(gt_xy)
    if n_det == 0 or n_gt == 0:
        return 0, 0.0
    diff = det_xy[:, None, :] - gt_xy[None, :, :]
    dist = np.sqrt((diff * diff).sum(axis=2))
    feasible = dist <= radius
    for m in range(min(n_det, n_gt), 0, -1):
        best = None
        for det_subset in itertools.combinations(range(n_det), m):
            for gt_perm in itertools.permutations(range(n_gt), m):
                if all(feasible[d, g] for d, g in zip(det_subset, gt_perm)):
                    total = float(sum(dist[d, g] for d, g in zip(det_subset, gt_perm)))
                    if best is None or total < best:
                        best = total
        if best is not None:
            return m, best
    return 0, 0.0


def pixel_count_overlap_fraction(
    bx: int, by: int, bw: int, bh: int, tx: int, ty: int, tile: int
) -> float:
    """Count integer pixels of the box lying inside the tile window."""
    inside = 0
    for px in range(bx, bx + bw):
        for py in range(by, by + bh):
            if tx <= px < tx + tile and ty <= py < ty + tile:
                inside += 1
    return inside / (bw * bh)
