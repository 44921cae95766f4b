"""Monte-Carlo toolkit for long-range dependent extremes.

Subpackages cover moderately heavy tail families (`tails`), null-recurrent
renewal dynamics (`renewal`), stable subordinator and regenerative-set
samplers (`stable`), the limit random sup-measure and extremal processes
(`limits`), the series-representation process simulator (`process`), and
the experiment harness with its CLI (`harness`, `cli`).
"""

from . import harness, limits, process, renewal, stable, tails
from .renewal import EpochLaw, MemoryParams
from .stable import StableParams
from .tails import TailModel

__version__ = "0.1.0"

__all__ = [
    "tails", "renewal", "stable", "limits", "process", "harness",
    "TailModel", "MemoryParams", "EpochLaw", "StableParams", "__version__",
]
