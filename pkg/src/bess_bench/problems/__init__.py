"""
Assembly of complete SPT and TEP problems from instances.
"""

from .spt import SptAssembly
from .spt import assemble_spt
from .tep import TepAssembly
from .tep import assemble_tep

__all__ = ["SptAssembly", "TepAssembly", "assemble_spt", "assemble_tep"]
