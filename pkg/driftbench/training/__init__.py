from .active import (ActiveConfig, ActiveTrace, evaluate_static,
                     run_active_loop, select_uncertain)
from .callbacks import (Callback, CallbackList, History, LabelAudit,
                        ProgbarLogger)
from .tuning import (DEFAULT_GRIDS, Grid, SearchResult, default_grid,
                     grid_search, make_grid, split_validation)

classes = __all__ = [
    "Grid",
    "SearchResult",
    "default_grid",
    "make_grid",
    "grid_search",
    "split_validation",
    "DEFAULT_GRIDS",
    "ActiveConfig",
    "ActiveTrace",
    "select_uncertain",
    "run_active_loop",
    "evaluate_static",
    "Callback",
    "CallbackList",
    "History",
    "LabelAudit",
    "ProgbarLogger",
]
