"""Microgrid power-flow controller: a pair of Mamdani inference systems
tuned by a classic or hierarchical genetic search, with a battery-equipped
trading simulation supplying the objective."""

from gridfuzz._core import *  # noqa: F401,F403
from gridfuzz._core import __doc__ as _core_doc  # noqa: F401

__all__ = [name for name in dir() if not name.startswith("_")]
