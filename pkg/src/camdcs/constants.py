"""Unit conversions for the meV / Dalton / Angstrom system.

All collision energies are in meV, masses in unified atomic mass units
(Daltons), lengths in Angstroms. The single physical constant needed is

    C = hbar^2 / (1 Da * 1 A^2)   expressed in meV,

so that  k [1/A] = sqrt(2 * mu * E / C)  for reduced mass mu in Da and
energy E in meV.

Frozen from CODATA-2018 values:
    hbar = 1.054571817e-34 J s
    1 Da = 1.66053906660e-27 kg
    1 eV = 1.602176634e-19 J (exact)
giving C = hbar^2 / (Da * 1e-20 m^2) / (1e-3 * e) = 4.1801592804967225 meV.
"""

import math

from camdcs.errors import ValidationError

#: hbar^2 / (1 Dalton * 1 Angstrom^2) in meV.
HBAR2_OVER_DA_A2_MEV = 4.1801592804967225


def wavevector(energy_mev, reduced_mass_da, e_threshold=0.0):
    """Translational wavevector k in 1/Angstrom.

    `e_threshold` is subtracted from the collision energy before conversion
    (zero for single-channel data; for multichannel data it is the channel
    threshold supplied by the user).
    """
    e_open = energy_mev - e_threshold
    if e_open <= 0.0:
        raise ValidationError(
            f"energy {energy_mev} meV is not above the threshold {e_threshold} meV"
        )
    if reduced_mass_da <= 0.0:
        raise ValidationError(f"reduced mass must be positive, got {reduced_mass_da}")
    return math.sqrt(2.0 * reduced_mass_da * e_open / HBAR2_OVER_DA_A2_MEV)
