"""Three-photon STIRAP in the four-level N scheme of a trapped ion.

Master-equation simulation of coherent population transfer between the two
metastable D levels of an alkaline-earth ion, mediated by a weakly dressed
ground state: dressed-state analysis, Gaussian pulse scheduling, an adaptive
Lindblad integrator with an expm cross-check oracle, preset experiments and
deterministic parameter scans.
"""

from .dressed import (DarkState, DressedFrame, Mode, dark_state,
                      dressed_frame, mixing_exact, mixing_weak,
                      resonance_detuning, transfer_fidelity)
from .errors import (DivisionByZeroDetuning, InvariantBreach, NoSolution,
                     NStirapError, ParseError, PumpTimeout, ScheduleError,
                     StepSizeUnderflow, UnnormalizedState, ValidationError,
                     ZeroRabiR)
from .model import (AtomParams, BeamGeometry, LaserField, NSchemeModel,
                    linewidth_hz_to_rad_per_us, mhz_to_rad_per_us,
                    phase_matching_geometry)
from .propagator import IntegratorConfig, TimeSeries, cross_check, propagate
from .pulses import (Constant, Direction, Gaussian, StirapSchedule, TanhOn,
                     Zero, make_stirap, stirap_edge)
from .scenarios import (ScanResult, ScenarioSpec, TransferParams,
                        run_full_transfer, run_optical_pumping_prep,
                        run_partial_stirap, run_reverse_transfer, run_scan)

__all__ = [name for name in dir() if not name.startswith("_")]
__version__ = "0.1.0"
