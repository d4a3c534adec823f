import math
import threading
from contextlib import contextmanager
from typing import Dict, List, Optional

import numpy as np
import scipy.sparse as sp
import torch
import torch.nn.functional as F
from torch import Tensor, nn

from driftbench.errors import ModelError
from driftbench.models.base import Classifier
from driftbench.utils import derive_seed, repeat

activations = {
    'relu': nn.ReLU,
    'elu': nn.ELU,
    'tanh': nn.Tanh,
    'sigmoid': nn.Sigmoid,
    None: nn.Identity,
}

_threads_lock = threading.Lock()
_threads_depth = 0
_threads_saved = 1


@contextmanager
def single_threaded():
    """Run torch on one intra-op thread, restoring the caller's
    thread count when the last concurrent user leaves."""
    global _threads_depth, _threads_saved
    with _threads_lock:
        if _threads_depth == 0:
            _threads_saved = torch.get_num_threads()
            torch.set_num_threads(1)
        _threads_depth += 1
    try:
        yield
    finally:
        with _threads_lock:
            _threads_depth -= 1
            if _threads_depth == 0:
                torch.set_num_threads(_threads_saved)


def to_sparse_tensor(X: sp.csr_matrix) -> Tensor:
    coo = X.tocoo()
    index = torch.as_tensor(np.vstack([coo.row, coo.col]), dtype=torch.long)
    return torch.sparse_coo_tensor(index, torch.as_tensor(coo.data),
                                   size=coo.shape, dtype=torch.float64)


class SparseLinear(nn.Module):
    """Linear layer whose input may be a sparse COO tensor."""
    def __init__(self, in_channels: int, out_channels: int):
        super().__init__()
        self.weight = nn.Parameter(
            torch.empty(in_channels, out_channels, dtype=torch.float64))
        self.bias = nn.Parameter(torch.empty(out_channels,
                                             dtype=torch.float64))

    def reset_parameters(self, generator: Optional[torch.Generator] = None):
        bound = 1.0 / math.sqrt(max(self.weight.size(0), 1))
        with torch.no_grad():
            self.weight.uniform_(-bound, bound, generator=generator)
            self.bias.uniform_(-bound, bound, generator=generator)

    def forward(self, x: Tensor) -> Tensor:
        if x.is_sparse:
            return torch.sparse.mm(x, self.weight) + self.bias
        return x @ self.weight + self.bias


class BinaryMLPModule(nn.Module):
    r"""Fully connected network with one output logit.

    Parameters
    ----------
    in_channels : int
        the input dimensions (vocabulary size)
    hids : List[int], optional
        the number of hidden units for each hidden layer, by default [256]
    acts : List[str], optional
        the activation function for each hidden layer, by default ['relu']

    Examples
    --------
    >>> # MLP with one hidden layer
    >>> module = BinaryMLPModule(2919)

    >>> # MLP with two hidden layers
    >>> module = BinaryMLPModule(2919, hids=[64, 16], acts=['relu', 'tanh'])
    """
    def __init__(self, in_channels: int, hids: List[int] = [256],
                 acts: List[str] = ['relu']):
        super().__init__()
        acts = repeat(acts, len(hids))
        layers = []
        for hid, act in zip(hids, acts):
            layers.append(SparseLinear(in_channels, hid))
            layers.append(activations[act]())
            in_channels = hid
        layers.append(SparseLinear(in_channels, 1))
        self.lin = nn.Sequential(*layers)

    def reset_parameters(self, generator: Optional[torch.Generator] = None):
        for layer in self.lin:
            if isinstance(layer, SparseLinear):
                layer.reset_parameters(generator)

    def forward(self, x: Tensor) -> Tensor:
        """"""
        return self.lin(x).squeeze(-1)


class MLP(Classifier):
    """Binary MLP trained with Adam on the cross-entropy of a
    sigmoid output.

    Initialization and mini-batch shuffling draw from a
    :class:`torch.Generator` seeded with ``derive_seed(seed, 0)``;
    torch runs single-threaded so results do not depend on the
    number of threads.

    Parameters
    ----------
    hids : List[int], optional
        hidden layer sizes, by default [256]
    acts : List[str], optional
        hidden activations, by default ['relu']
    lr : float, optional
        learning rate, by default 1e-3
    epochs : int, optional
        passes over the training set, by default 20
    batch_size : int, optional
        rows per mini-batch, by default 256
    weight_decay : float, optional
        L2 penalty of Adam, by default 0.0
    """
    family = "mlp"
    defaults = dict(hids=[256], acts=['relu'], lr=1e-3, epochs=20,
                    batch_size=256, weight_decay=0.0)

    def check_hparams(self, hp):
        hp.hids = [int(h) for h in repeat(hp.hids)]
        hp.acts = list(repeat(hp.acts, len(hp.hids)))
        if any(h < 1 for h in hp.hids):
            raise ModelError(f"hidden sizes must be >= 1, got {hp.hids}.")
        unknown = [a for a in hp.acts if a not in activations]
        if unknown:
            raise ModelError(f"unknown activation(s) {unknown}.")
        if not hp.lr > 0:
            raise ModelError(f"lr must be > 0, got {hp.lr}.")
        if int(hp.epochs) < 1 or int(hp.batch_size) < 1:
            raise ModelError("epochs and batch_size must be >= 1.")

    def build(self, vocab_size: int) -> BinaryMLPModule:
        return BinaryMLPModule(vocab_size, hids=self.hparams.hids,
                               acts=self.hparams.acts)

    def loss(self, X: sp.csr_matrix, y: np.ndarray) -> Tensor:
        """Mean cross-entropy of the current module on ``(X, y)``."""
        logits = self.module(to_sparse_tensor(X))
        target = torch.as_tensor(np.asarray(y, dtype=np.float64))
        return F.binary_cross_entropy_with_logits(logits, target)

    def _fit(self, X: sp.csr_matrix, y: np.ndarray):
        with single_threaded():
            self._train(X, y)

    def _train(self, X: sp.csr_matrix, y: np.ndarray):
        generator = torch.Generator().manual_seed(
            derive_seed(self.seed, 0) & 0x7FFF_FFFF_FFFF_FFFF)
        self.module = self.build(X.shape[1])
        self.module.reset_parameters(generator)
        optimizer = torch.optim.Adam(self.module.parameters(),
                                     lr=self.hparams.lr,
                                     weight_decay=self.hparams.weight_decay)
        batch_size = int(self.hparams.batch_size)
        n = X.shape[0]
        self.module.train()
        for _ in range(int(self.hparams.epochs)):
            order = torch.randperm(n, generator=generator).numpy()
            for start in range(0, n, batch_size):
                index = order[start:start + batch_size]
                optimizer.zero_grad()
                loss = self.loss(X[index], y[index])
                loss.backward()
                optimizer.step()
        self.module.eval()

    @torch.no_grad()
    def _score(self, X: sp.csr_matrix) -> np.ndarray:
        batch_size = max(int(self.hparams.batch_size), 1024)
        with single_threaded():
            out = [
                torch.sigmoid(self.module(to_sparse_tensor(
                    X[start:start + batch_size]))).numpy()
                for start in range(0, X.shape[0], batch_size)
            ]
        return np.concatenate(out)

    def state_dict(self) -> Dict[str, np.ndarray]:
        return {
            k: v.detach().cpu().numpy()
            for k, v in self.module.state_dict().items()
        }

    def load_state_dict(self, state: Dict[str, np.ndarray]):
        self.module = self.build(self.vocab_size)
        self.module.load_state_dict(
            {k: torch.from_numpy(np.array(v))
             for k, v in state.items()})
        self.module.eval()
