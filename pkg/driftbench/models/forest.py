import math
from typing import Dict, List

import numpy as np
import scipy.sparse as sp
from joblib import Parallel, delayed
from tqdm.auto import tqdm

from driftbench.errors import ModelError
from driftbench.models.base import Classifier
from driftbench.models.tree import TreeArrays, apply_tree, grow_tree
from driftbench.utils import make_rng


class RandomForest(Classifier):
    """Random forest of Gini decision trees.

    Tree ``t`` draws its bootstrap sample and its per-split feature
    candidates from a generator seeded with ``derive_seed(seed, t)``,
    so a forest depends on the master seed and the tree index only,
    whatever the number of threads. The score is the fraction of
    trees whose leaf holds a malware majority.

    Parameters
    ----------
    n_trees : int, optional
        number of trees, by default 100
    max_depth : int, optional
        maximum tree depth, 0 for unbounded, by default 0
    max_features : Union[str, float], optional
        split candidates per node: ``'sqrt'`` for ``ceil(sqrt(V))``,
        ``'all'`` for every feature, or a fraction of ``V`` in
        ``(0, 1]``, by default 'sqrt'
    bootstrap : bool, optional
        fit each tree on a bootstrap sample, by default True

    Example
    -------
    >>> model = RandomForest(n_trees=100, seed=42, n_jobs=4).fit(train)
    >>> model.score(test)
    """
    family = "rf"
    defaults = dict(n_trees=100, max_depth=0, max_features="sqrt",
                    bootstrap=True)

    def check_hparams(self, hp):
        if int(hp.n_trees) < 1:
            raise ModelError(f"n_trees must be >= 1, got {hp.n_trees}.")
        if int(hp.max_depth) < 0:
            raise ModelError(f"max_depth must be >= 0, got {hp.max_depth}.")
        mf = hp.max_features
        if mf not in ("sqrt", "all") and not (
                isinstance(mf, (float, int)) and 0 < mf <= 1):
            raise ModelError("max_features must be 'sqrt', 'all' or a "
                             f"fraction in (0, 1], got {mf!r}.")

    def num_split_features(self, num_feats: int) -> int:
        mf = self.hparams.max_features
        if mf == "all":
            return num_feats
        if mf == "sqrt":
            return max(1, math.ceil(math.sqrt(num_feats)))
        return max(1, math.ceil(mf * num_feats))

    def _grow(self, X: sp.csr_matrix, y: np.ndarray, index: int,
              max_features: int) -> TreeArrays:
        rng = make_rng(self.seed, index)
        n = X.shape[0]
        if self.hparams.bootstrap:
            weight = np.bincount(rng.integers(0, n, size=n), minlength=n)
        else:
            weight = np.ones(n)
        return grow_tree(X, y, weight=weight,
                         max_depth=int(self.hparams.max_depth),
                         max_features=max_features, rng=rng)

    def _fit(self, X: sp.csr_matrix, y: np.ndarray):
        max_features = self.num_split_features(X.shape[1])
        indices = tqdm(range(int(self.hparams.n_trees)), desc="Growing trees",
                       disable=not self.verbose)
        self.trees: List[TreeArrays] = Parallel(
            n_jobs=self.n_jobs, prefer="threads")(
                delayed(self._grow)(X, y, t, max_features) for t in indices)

    def votes(self, X: sp.csr_matrix) -> np.ndarray:
        """Malware votes ``[n_trees, n_rows]``."""
        return np.vstack([
            tree.value[apply_tree(tree, X)] >= 0.5 for tree in self.trees
        ])

    def _score(self, X: sp.csr_matrix) -> np.ndarray:
        return self.votes(X).mean(axis=0)

    def state_dict(self) -> Dict[str, np.ndarray]:
        sizes = np.array([t.num_nodes for t in self.trees], dtype=np.int64)
        state = dict(sizes=sizes)
        for name in TreeArrays._fields:
            state[name] = np.concatenate([getattr(t, name)
                                          for t in self.trees])
        return state

    def load_state_dict(self, state: Dict[str, np.ndarray]):
        bounds = np.concatenate([[0], np.cumsum(state['sizes'])])
        self.trees = [
            TreeArrays(*(state[name][start:stop]
                         for name in TreeArrays._fields))
            for start, stop in zip(bounds[:-1], bounds[1:])
        ]
