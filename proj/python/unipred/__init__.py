"""Bayesian mixture prediction over finite alphabets."""

from ._unipred import *  # noqa: F401,F403
from ._unipred import __doc__  # noqa: F401
