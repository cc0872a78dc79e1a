"""From a fitted mixing matrix to community memberships.

Each node's row of the mixing matrix, normalized to sum to one, is its
membership distribution over components. Greedy allocation takes the argmax
(ties to the lowest index); the effective community count is the number of
components that receive at least one node this way. Rows whose entire mass
sits at the numerical floor carry no signal and are marked unassigned.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

UNASSIGNED = -1


@dataclass
class Membership:
    """Row-stochastic membership matrix plus greedy labels.

    ``labels[i]`` is ``UNASSIGNED`` for degenerate (all-floor) rows; their
    ``pi`` rows are all zeros. ``remap`` maps each surviving component index
    to the dense index it gets after :func:`compact`.
    """

    pi: np.ndarray
    labels: np.ndarray
    k_effective: int
    remap: dict[int, int] = field(default_factory=dict)
    degenerate: np.ndarray = None

    @property
    def n(self) -> int:
        return self.pi.shape[0]

    @property
    def k(self) -> int:
        return self.pi.shape[1]


def memberships(w: np.ndarray, eps: float = 1e-12) -> Membership:
    """Normalize mixing rows into membership distributions and label greedily.

    A row is degenerate when its total mass is at most ``k * eps * 10``,
    i.e. indistinguishable from the solver floor.
    """
    w = np.asarray(w, dtype=np.float64)
    n, k = w.shape
    rowsum = w.sum(axis=1)
    degenerate = rowsum <= k * eps * 10

    pi = np.zeros_like(w)
    ok = ~degenerate
    pi[ok] = w[ok] / rowsum[ok, None]

    labels = np.argmax(pi, axis=1).astype(np.int64)
    labels[degenerate] = UNASSIGNED

    surviving = sorted(set(labels[labels != UNASSIGNED].tolist()))
    remap = {int(orig): dense for dense, orig in enumerate(surviving)}
    return Membership(
        pi=pi,
        labels=labels,
        k_effective=len(surviving),
        remap=remap,
        degenerate=degenerate,
    )


def entropy_bits(m: Membership) -> tuple[np.ndarray, float]:
    """Per-node membership entropy in bits and its mean over assigned nodes.

    Degenerate rows contribute 0.0 in the vector and are excluded from the
    mean; an all-degenerate membership has mean 0.0.
    """
    pi = m.pi
    with np.errstate(divide="ignore", invalid="ignore"):
        logs = np.where(pi > 0, np.log2(np.where(pi > 0, pi, 1.0)), 0.0)
    per_node = -(pi * logs).sum(axis=1)
    per_node[m.degenerate] = 0.0
    assigned = ~m.degenerate
    mean = float(per_node[assigned].mean()) if np.any(assigned) else 0.0
    return per_node, mean


def compact(m: Membership) -> Membership:
    """Restrict to surviving components, renormalize rows, renumber labels.

    Degenerate rows stay all-zero and unassigned. Applying compact twice is
    idempotent (the second remap is the identity).
    """
    surviving = sorted(m.remap, key=m.remap.get)
    pi = m.pi[:, surviving].copy()
    rowsum = pi.sum(axis=1)
    ok = rowsum > 0
    pi[ok] = pi[ok] / rowsum[ok, None]

    labels = np.full(m.n, UNASSIGNED, dtype=np.int64)
    for orig, dense in m.remap.items():
        labels[m.labels == orig] = dense
    return Membership(
        pi=pi,
        labels=labels,
        k_effective=m.k_effective,
        remap={m.remap[orig]: m.remap[orig] for orig in m.remap},
        degenerate=m.degenerate.copy(),
    )
