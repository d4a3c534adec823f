from typing import NamedTuple, Optional

import numpy as np
import scipy.sparse as sp

LEAF = -1


class TreeArrays(NamedTuple):
    """A binary decision tree over presence features.

    Node ``i`` tests feature ``feature[i]`` (``-1`` for a leaf) and
    continues to ``present[i]`` or ``absent[i]``; ``value[i]`` is the
    weighted malware fraction of the training rows reaching it.
    """
    feature: np.ndarray
    absent: np.ndarray
    present: np.ndarray
    value: np.ndarray

    @property
    def num_nodes(self) -> int:
        return self.feature.size

    @property
    def depth(self) -> int:
        depth = np.zeros(self.num_nodes, dtype=np.int64)
        for i in range(self.num_nodes):
            if self.feature[i] != LEAF:
                depth[self.absent[i]] = depth[self.present[i]] = depth[i] + 1
        return int(depth.max())


def gini_children(n1, m1, n0, m0) -> np.ndarray:
    """Weighted Gini impurity of a split, up to a constant factor:
    ``m1 (n1 - m1) / n1 + m0 (n0 - m0) / n0``."""
    with np.errstate(divide='ignore', invalid='ignore'):
        left = np.where(n1 > 0, m1 * (n1 - m1) / n1, 0.0)
        right = np.where(n0 > 0, m0 * (n0 - m0) / n0, 0.0)
    return left + right


def grow_tree(X: sp.csr_matrix, y: np.ndarray,
              weight: Optional[np.ndarray] = None, max_depth: int = 0,
              max_features: Optional[int] = None,
              rng: Optional[np.random.Generator] = None) -> TreeArrays:
    """Grow a Gini decision tree with binary ``feature present?`` splits.

    A node stops splitting when it is pure, reaches :obj:`max_depth`
    (0 = unbounded) or has no feature that leaves both children
    non-empty. The best split minimizes the children's weighted
    Gini impurity, ties going to the lowest feature index; a split
    that does not lower the impurity is still taken when the node
    is impure, so XOR-like labels can be separated.

    Parameters
    ----------
    X : sp.csr_matrix
        binary training rows
    y : np.ndarray
        0/1 labels
    weight : Optional[np.ndarray], optional
        per-row integer weights, e.g. bootstrap counts; rows of weight
        0 are ignored, by default None (all ones)
    max_depth : int, optional
        maximum depth, 0 for unbounded, by default 0
    max_features : Optional[int], optional
        features drawn (without replacement) as split candidates at
        every node, all features when :obj:`None`, by default None
    rng : Optional[np.random.Generator], optional
        source of the feature draws, by default None

    Returns
    -------
    TreeArrays
        the grown tree, nodes numbered in depth-first order
    """
    num_feats = X.shape[1]
    if weight is None:
        weight = np.ones(X.shape[0], dtype=np.float64)
    weight = np.asarray(weight, dtype=np.float64)
    y = np.asarray(y, dtype=np.float64)
    if max_features is not None and max_features < num_feats and rng is None:
        rng = np.random.default_rng(0)

    feature, absent, present, value = [], [], [], []

    def new_node() -> int:
        feature.append(LEAF)
        absent.append(LEAF)
        present.append(LEAF)
        value.append(0.0)
        return len(feature) - 1

    stack = [(new_node(), np.flatnonzero(weight > 0), 0)]
    while stack:
        node, rows, depth = stack.pop()
        w = weight[rows]
        wy = w * y[rows]
        total, mal = w.sum(), wy.sum()
        value[node] = mal / total
        if (mal == 0 or mal == total or rows.size < 2
                or (max_depth and depth >= max_depth)):
            continue

        Xn = X[rows]
        if max_features is None or max_features >= num_feats:
            cand = np.arange(num_feats)
        else:
            cand = np.sort(rng.choice(num_feats, max_features, replace=False))
        n1 = (Xn.T @ w)[cand]
        m1 = (Xn.T @ wy)[cand]
        n0, m0 = total - n1, mal - m1
        valid = (n1 > 0) & (n0 > 0)
        if not valid.any():
            continue
        impurity = np.where(valid, gini_children(n1, m1, n0, m0), np.inf)
        best = int(cand[np.argmin(impurity)])

        has = Xn[:, best].toarray().ravel() > 0
        left, right = new_node(), new_node()
        feature[node], absent[node], present[node] = best, left, right
        stack.append((right, rows[has], depth + 1))
        stack.append((left, rows[~has], depth + 1))

    return TreeArrays(np.asarray(feature, dtype=np.int64),
                      np.asarray(absent, dtype=np.int64),
                      np.asarray(present, dtype=np.int64),
                      np.asarray(value, dtype=np.float64))


def apply_tree(tree: TreeArrays, X: sp.csr_matrix) -> np.ndarray:
    """Leaf reached by every row of :obj:`X`."""
    node = np.zeros(X.shape[0], dtype=np.int64)
    active = np.arange(X.shape[0])
    while active.size:
        feats = tree.feature[node[active]]
        inner = feats != LEAF
        active, feats = active[inner], feats[inner]
        if not active.size:
            break
        has = np.asarray(X[active, feats]).ravel() > 0
        at = node[active]
        node[active] = np.where(has, tree.present[at], tree.absent[at])
    return node
