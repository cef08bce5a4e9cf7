"""Pure numpy implementation of the jet kernels in ``_jetcore.pyx``.

The arithmetic is ordered the same way as the compiled kernels, and the
symmetric outputs are rebuilt from their canonical (sorted-index) entries.
"""

from functools import lru_cache

import numpy as np


@lru_cache(maxsize=None)
def _canonical2(n):
    i, j = np.indices((n, n))
    return np.minimum(i, j), np.maximum(i, j)


@lru_cache(maxsize=None)
def _canonical3(n):
    idx = np.sort(np.indices((n, n, n)).reshape(3, -1), axis=0)
    return tuple(a.reshape(n, n, n) for a in idx)


def _sym2(h):
    return h[_canonical2(h.shape[0])]


def _sym3(t):
    return t[_canonical3(t.shape[0])]


def mul(av, ag, ah, at, bv, bg, bh, bt):
    g = ag * bv + av * bg
    h = ah * bv + (ag[:, None] * bg[None, :] + ag[None, :] * bg[:, None]) + av * bh
    t = (
        at * bv
        + (
            ah[:, :, None] * bg[None, None, :]
            + ah[:, None, :] * bg[None, :, None]
            + ah[None, :, :] * bg[:, None, None]
        )
        + (
            ag[:, None, None] * bh[None, :, :]
            + ag[None, :, None] * bh[:, None, :]
            + ag[None, None, :] * bh[:, :, None]
        )
        + av * bt
    )
    return av * bv, g, _sym2(h), _sym3(t)


def compose(ag, ah, at, d1, d2, d3):
    g = d1 * ag
    h = d2 * (ag[:, None] * ag[None, :]) + d1 * ah
    t = (
        d3 * (ag[:, None, None] * ag[None, :, None] * ag[None, None, :])
        + d2
        * (
            ah[:, :, None] * ag[None, None, :]
            + ah[:, None, :] * ag[None, :, None]
            + ah[None, :, :] * ag[:, None, None]
        )
        + d1 * at
    )
    return g, _sym2(h), _sym3(t)
