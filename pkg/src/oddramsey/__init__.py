"""Odd Ramsey colorings of complete bipartite graphs and complete k-partite hypergraphs.

Host and coloring structures, odd color class analysis, the tile systems
H1 and H2, conflict enumeration, a conflict-avoiding greedy matcher, and
exact search on tiny hosts.
"""

from .host import Coloring, HostInstance, Palette, TargetCopy, read_coloring, write_coloring
from .odd import find_bad_target, pigeonhole_witness

__version__ = "0.1.0"
