"""Standard subsets of the p-adic projective line: complexity and reconstruction."""

from .padic import FieldDescriptor, PadicElement, make_field
from .disks import Disk, open_disk, closed_disk
from .subsets import StandardSubset, make_component, make_subset, complexity
from .oracles import MembershipOracle, SyntheticOracle
from .reconstruction import reconstruct, run_reconstruction, budget

__version__ = "0.1.0"
