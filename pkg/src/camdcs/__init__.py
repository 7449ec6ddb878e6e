"""Complex angular momentum (CAM) analysis of reactive angular distributions.

The toolkit continues numerically computed S-matrix elements S^J, sampled at
physical integer total angular momenta J, into the complex J-plane with a
type-II rational (Pade) interpolant, extracts Regge pole positions and
residues, follows pole trajectories across collision energy, and decomposes
state-to-state differential cross sections into direct and resonance
(multi-rotation) contributions.

Modules
-------
constants    energy <-> wavevector conversion (meV, Daltons, Angstroms)
tables       per-energy S-matrix tables, input parsing, column-file output
hardsphere   exact single-channel test model (hard core + well + delta barrier)
config       run configuration (key=value file, legacy colon compatibility)
pade         rational interpolant with iterative quadratic-phase extraction
quadrature   unfolded winding-angle amplitudes f~(phi), g~(phi)
scattering   partial-wave sums, nearside/farside decompositions, deflection
regge        pole tails, closed-form resonance contributions, trajectories
workflow     the two-step batch analysis (reconstruct; follow and subtract)
figures      matplotlib rendering of the column-file catalog
server       local HTTP+JSON interface for the trajectory-steering UI
cli          command line entry points
"""

from camdcs.constants import HBAR2_OVER_DA_A2_MEV, wavevector
from camdcs.tables import SMatrixTable, parse_energy_file, write_energy_file, add_noise
from camdcs.hardsphere import HardSphereParams, generate_hard_sphere_tables
from camdcs.config import RunConfig, parse_run_config
from camdcs.pade import PadeModel, PoleZeroSet, build_approximant, filter_froissart
from camdcs.regge import ReggePole, Trajectory, follow_trajectory

__all__ = [
    "HBAR2_OVER_DA_A2_MEV",
    "wavevector",
    "SMatrixTable",
    "parse_energy_file",
    "write_energy_file",
    "add_noise",
    "HardSphereParams",
    "generate_hard_sphere_tables",
    "RunConfig",
    "parse_run_config",
    "PadeModel",
    "PoleZeroSet",
    "build_approximant",
    "filter_froissart",
    "ReggePole",
    "Trajectory",
    "follow_trajectory",
]

__version__ = "0.1.0"
