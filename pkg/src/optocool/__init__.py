"""Cavity-free optomechanical cooling of a mirror by a remotely trapped Lambda-atom cloud."""

from .atom import (BlochSystem, SpectralFactor, SteadyState, bare_steady_state, build_bloch,
                   dark_state_amplitudes, resolvent_response, spectral_factor, spectral_factor_array,
                   transformation_matrices)
from .chain import (ChainInputs, ChainSolution, recurrence_coefficients, solve_chain_closed_form,
                    solve_chain_exact, solve_chain_transfer)
from .cooling import (CoolingRates, Strategy, StrategyChoice, assemble_rates, design_detuning,
                      design_position, evolve_occupation, few_atom_rate, steady_state_occupation)
from .errors import (DegenerateDarkStateError, DomainError, NumericalError, OptocoolError, PoleError,
                     ScenarioError, SingularSystemError)
from .params import (CONSTANTS, AtomCloudSpec, DriveSpec, EnvironmentSpec, MirrorSpec, amplitude_from_power,
                     optomech_coupling, power_from_amplitude, rabi_frequency, thermal_occupation)
from .scenario import Scenario, evaluate
from .sweep import minimize_nss, run_sweep

__version__ = "0.1.0"
