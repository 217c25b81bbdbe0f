"""Context-dependent multilevel pattern-matching compression."""

try:
    from ._cdmpm import *  # noqa: F401,F403
    from ._cdmpm import __version__  # noqa: F401
except ImportError:  # build-tree layout: extension sits next to the package
    from _cdmpm import *  # noqa: F401,F403
    from _cdmpm import __version__  # noqa: F401
