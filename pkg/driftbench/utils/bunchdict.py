from collections import OrderedDict
from numbers import Integral, Real

import numpy as np
from tabulate import tabulate


class BunchDict(OrderedDict):
    """Container object for records and configurations.
    Dictionary-like object that exposes its keys as attributes
    and remembers insertion order.

    Examples
    --------
    >>> b = BunchDict(f1=0.9, fnr=0.1)
    >>> b
    ╒═════════╤═══════════╕
    │ Names   │   Objects │
    ╞═════════╪═══════════╡
    │ f1      │       0.9 │
    ├─────────┼───────────┤
    │ fnr     │       0.1 │
    ╘═════════╧═══════════╛
    >>> b.f1
    0.9
    >>> b.precision = 0.95
    >>> b['precision']
    0.95

    >>> # Converting numpy objects to plain Python for JSON export.
    >>> b = BunchDict(ids=np.array([3, 1]), n=np.int64(2))
    >>> b.to_dict()
    {'ids': [3, 1], 'n': 2}
    """
    def __init__(self, *args, **kwargs):
        super().__init__(*args, **kwargs)

    def __setattr__(self, key, value):
        self[key] = value

    def __dir__(self):
        return self.keys()

    def __getattr__(self, key):
        try:
            return self[key]
        except KeyError:
            raise AttributeError(key)

    def to_dict(self) -> dict:
        """Convert the BunchDict (recursively) to plain Python objects
        that :mod:`json` can serialize.

        Returns
        -------
        dict
            a plain dict with numpy scalars/arrays converted
            to Python numbers/lists
        """
        return {k: to_builtin(v) for k, v in self.items()}

    def __repr__(self) -> str:
        table_headers = ["Names", "Objects"]
        items = tuple(map(prettify, self.items()))
        table = tabulate(items, headers=table_headers, tablefmt="fancy_grid")
        return table

    __str__ = __repr__


def to_builtin(val):
    if isinstance(val, dict):
        return {str(k): to_builtin(v) for k, v in val.items()}
    if isinstance(val, (list, tuple)):
        return [to_builtin(v) for v in val]
    if isinstance(val, np.ndarray):
        return val.tolist()
    if isinstance(val, (bool, np.bool_)):
        return bool(val)
    if isinstance(val, Integral):
        return int(val)
    if isinstance(val, Real):
        return float(val)
    return val


def prettify(item):
    key, val = item
    if val is None:
        return key, 'None'
    if hasattr(val, "shape"):
        if len(val.shape) == 0 and hasattr(val, "item"):
            val = f"{val.__class__.__name__}, {val.item()}"
        else:
            val = f"{val.__class__.__name__}, shape={val.shape}"
    elif isinstance(val, (list, tuple, set, frozenset)) and len(val) > 8:
        val = f"{type(val).__name__}, len={len(val)}"
    return key, val
