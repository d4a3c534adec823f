from typing import Iterable, List, Optional

import numpy as np
from tqdm.auto import tqdm

from driftbench.errors import ActiveError
from driftbench.utils import BunchDict


class Callback:
    """Base class used to hook into the stages of the monthly
    active-learning loop.

    Hooks receive the month index and a ``logs`` dict. At
    ``on_month_begin`` and ``on_month_scored`` the logs hold
    ``train_ids`` (the rows the scoring model was trained on) and
    ``month_ids`` (the rows of the month); ``on_month_scored`` adds
    ``scores`` and ``metrics``; ``on_reveal`` gets the ``selected``
    rows whose labels are revealed; ``on_month_end`` gets the month
    record.

    Attributes:
        params: Dict. Loop parameters (budget, number of months, ...).
    """
    def __init__(self):
        self.params = {}

    def set_params(self, params):
        self.params = params

    def on_loop_begin(self, logs=None):
        """Called once before the first month."""

    def on_loop_end(self, logs=None):
        """Called once after the last month with the final trace."""

    def on_month_begin(self, month, logs=None):
        """Called before the month is scored."""

    def on_month_scored(self, month, logs=None):
        """Called after the month is scored and evaluated, before
        any of its labels is revealed."""

    def on_reveal(self, month, logs=None):
        """Called when selected labels join the training set."""

    def on_month_end(self, month, logs=None):
        """Called after the (possible) retraining."""

    def __repr__(self) -> str:
        return f"{self.__class__.__name__}()"


class CallbackList:
    """Container abstracting a list of callbacks.

    Parameters
    ----------
    callbacks : Optional[Iterable[Callback]]
        the callbacks
    add_history : bool, optional
        append a :class:`History` unless one is given, by default False
    add_progbar : bool, optional
        prepend a :class:`ProgbarLogger` unless one is given,
        by default False
    add_audit : bool, optional
        append a :class:`LabelAudit` unless one is given,
        by default False
    params : loop parameters passed to every callback
    """
    def __init__(self, callbacks: Optional[Iterable[Callback]] = None,
                 add_history: bool = False, add_progbar: bool = False,
                 add_audit: bool = False, **params):
        self.callbacks: List[Callback] = list(callbacks or [])
        self._add_default_callbacks(add_history, add_progbar, add_audit)
        if params:
            self.set_params(params)

    def _add_default_callbacks(self, add_history, add_progbar, add_audit):
        """Adds `Callback`s that are always present."""
        self.history = next(
            (cb for cb in self.callbacks if isinstance(cb, History)), None)
        has_progbar = any(isinstance(cb, ProgbarLogger)
                          for cb in self.callbacks)
        has_audit = any(isinstance(cb, LabelAudit) for cb in self.callbacks)

        if add_progbar and not has_progbar:
            self.callbacks.insert(0, ProgbarLogger())
        if add_audit and not has_audit:
            self.callbacks.append(LabelAudit())
        if add_history and self.history is None:
            self.history = History()
            self.callbacks.append(self.history)

    def append(self, callback: Callback):
        self.callbacks.append(callback)

    def set_params(self, params):
        self.params = params
        for callback in self.callbacks:
            callback.set_params(params)

    def _call(self, hook: str, *args):
        for callback in self.callbacks:
            getattr(callback, hook)(*args)

    def on_loop_begin(self, logs=None):
        self._call('on_loop_begin', logs or {})

    def on_loop_end(self, logs=None):
        self._call('on_loop_end', logs or {})

    def on_month_begin(self, month, logs=None):
        self._call('on_month_begin', month, logs or {})

    def on_month_scored(self, month, logs=None):
        self._call('on_month_scored', month, logs or {})

    def on_reveal(self, month, logs=None):
        self._call('on_reveal', month, logs or {})

    def on_month_end(self, month, logs=None):
        self._call('on_month_end', month, logs or {})

    def __iter__(self):
        return iter(self.callbacks)

    def __getitem__(self, index):
        return self.callbacks[index]

    def __str__(self) -> str:
        format_string = ""
        for ix, cb in enumerate(self.callbacks):
            format_string += f'\n  ({ix}){cb},'
        if format_string:
            # replace last ``,`` as ``\n``
            format_string = format_string[:-1] + '\n'
        return f"{self.__class__.__name__}({format_string})"

    __repr__ = __str__


class History(Callback):
    """Callback that records every month record."""
    def __init__(self):
        super().__init__()
        self.history = BunchDict()
        self.months = []

    def on_loop_begin(self, logs=None):
        self.history = BunchDict()
        self.months = []

    def on_month_end(self, month, logs=None):
        logs = logs or {}
        self.months.append(month)
        for k, v in logs.items():
            self.history.setdefault(k, []).append(v)


class LabelAudit(Callback):
    """Callback that checks label hygiene: a month must be scored by
    a model whose training set holds none of the month's rows and
    only rows that precede them.

    Raises
    ------
    ActiveError
        a month's rows leaked into the training set of its
        scoring model
    """
    def __init__(self):
        super().__init__()
        self.checked = []

    def on_loop_begin(self, logs=None):
        self.checked = []

    def on_month_scored(self, month, logs=None):
        train_ids = np.asarray(logs['train_ids'])
        month_ids = np.asarray(logs['month_ids'])
        if np.intersect1d(train_ids, month_ids).size:
            raise ActiveError(f"month {month} was scored by a model trained "
                              "on its own rows.")
        if train_ids.size and month_ids.size and \
                train_ids.max() >= month_ids.min():
            raise ActiveError(f"month {month} was scored by a model trained "
                              "on later rows.")
        self.checked.append(month)


class ProgbarLogger(Callback):
    """Callback that shows a :mod:`tqdm` bar over the months."""
    def __init__(self):
        super().__init__()
        self.progbar = None

    def on_loop_begin(self, logs=None):
        self.progbar = tqdm(total=self.params.get('months'), desc="Months",
                            disable=not self.params.get('verbose', 0))

    def on_month_end(self, month, logs=None):
        logs = logs or {}
        postfix = {}
        if 'f1' in logs:
            postfix['f1'] = f"{logs['f1']:.4f}"
        if 'train_size' in logs:
            postfix['train'] = logs['train_size']
        self.progbar.set_postfix(postfix)
        self.progbar.update(1)

    def on_loop_end(self, logs=None):
        if self.progbar is not None:
            self.progbar.close()
