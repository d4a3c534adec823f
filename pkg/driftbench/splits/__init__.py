from .batches import Batch, make_batches
from .export import (batches_to_dict, check_no_leakage, monthly_to_dict,
                     plan_to_dict)
from .monthly import Month, MonthlySplit, month_index, plan_monthly
from .windows import Window, WindowPlan, plan_windows, window_rows

classes = __all__ = [
    "Batch",
    "make_batches",
    "Window",
    "WindowPlan",
    "plan_windows",
    "window_rows",
    "Month",
    "MonthlySplit",
    "plan_monthly",
    "month_index",
    "check_no_leakage",
    "batches_to_dict",
    "plan_to_dict",
    "monthly_to_dict",
]
