"""Exact computation with order-preserving self-maps of the rationals."""
from .errors import *  # noqa: F401,F403
from .exact import *  # noqa: F401,F403
from .qset import *  # noqa: F401,F403
from .endo import *  # noqa: F401,F403
from .lazyorder import *  # noqa: F401,F403
from .constructions import *  # noqa: F401,F403
from .green import *  # noqa: F401,F403
from .orbitals import *  # noqa: F401,F403
from .green import expected_counts  # noqa: F401

__version__ = "0.1.0"
