"""DRAM data-mapping design-space exploration for CNN layer processing."""

try:
    from ._drmap import *  # noqa: F401,F403
    from ._drmap import __version__  # noqa: F401
except ImportError:  # build-tree layout: extension next to this package
    from _drmap import *  # noqa: F401,F403
    from _drmap import __version__  # noqa: F401
