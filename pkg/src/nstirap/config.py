"""Run-configuration loading, validation and resolution.

One canonical config format: YAML with nested sections (atom, lasers,
pulses, integrator, scenario).  Frequencies enter as nu = Omega/2pi in MHz,
laser linewidths as HWHM in Hz, times in us; the conversion to internal
angular units happens exactly once, here.  The R-laser detuning may be the
literal string ``auto_resonance:weak`` or ``auto_resonance:exact``, in which
case it is derived from the three-photon resonance condition.
"""

from __future__ import annotations

import copy
import json
import re
from dataclasses import dataclass, replace

import yaml

from . import dressed
from .dressed import Mode
from .errors import ParseError, ValidationError
from .model import (AtomParams, linewidth_hz_to_rad_per_us, mhz_to_rad_per_us,
                    rad_per_us_to_mhz)
from .propagator import IntegratorConfig
from .scenarios import ScenarioSpec, TransferParams

SCHEMA_VERSION = "nstirap-config-1"

_PRESETS = ("full_transfer", "reverse_transfer", "scan_tau", "scan_mismatch",
            "scan_linewidth", "partial_stirap", "optical_pumping_prep",
            "custom")
_SCAN_PRESETS = ("scan_tau", "scan_mismatch", "scan_linewidth")
_SCAN_AXES = {"scan_tau": "tau_us", "scan_mismatch": "mismatch_over_2pi_MHz",
              "scan_linewidth": "linewidth_HWHM_Hz"}
_AUTO_RE = re.compile(r"^auto_resonance:(weak|exact)$")

DEFAULTS = {
    "atom": {"gamma_P_inverse_ns": 7.0, "branching_ratio_PS_over_PD": 14.4},
    "lasers": {
        "B": {"linewidth_HWHM_Hz": 0.0},
        "R": {"linewidth_HWHM_Hz": 0.0},
        "C": {"linewidth_HWHM_Hz": 0.0},
    },
    "pulses": {
        "direction": "D_to_Q",
        "c_switch_off_us": 1.0,
        "prep_ramp_us": 1.0,
        "t_freeze_us": None,
    },
    "integrator": {
        "method": "adaptive_rk",
        "rtol": 1e-9,
        "atol": 1e-12,
        "max_step_us": 1e-3,
        "sample_dt_us": 0.05,
    },
    "scenario": {"preset": "full_transfer", "observable": "F_eq10"},
}


class _SciLoader(yaml.SafeLoader):
    """SafeLoader that also reads 1e-9-style floats (no mandatory dot)."""


_SciLoader.add_implicit_resolver(
    "tag:yaml.org,2002:float",
    re.compile(r"""^(?:[-+]?(?:[0-9][0-9_]*)\.[0-9_]*(?:[eE][-+]?[0-9]+)?
                   |[-+]?(?:[0-9][0-9_]*)(?:[eE][-+]?[0-9]+)
                   |[-+]?\.(?:inf|Inf|INF)
                   |\.(?:nan|NaN|NAN))$""", re.X),
    list("-+0123456789."),
)


@dataclass(frozen=True)
class RunConfig:
    """A validated, fully resolved run description.

    ``snapshot`` is the provenance record embedded in every output file:
    the defaults-filled input document plus the derived quantities and a
    schema version.  Feeding a snapshot back through load_config reproduces
    the same run.
    """

    snapshot: dict
    params: TransferParams
    spec: ScenarioSpec
    preset: str
    output_stem: str

    def snapshot_json(self) -> str:
        return json.dumps(self.snapshot, sort_keys=True)


def _merge_defaults(doc: dict) -> dict:
    out = copy.deepcopy(DEFAULTS)

    def merge(dst, src, path):
        for key, val in src.items():
            if isinstance(val, dict) and isinstance(dst.get(key), dict):
                merge(dst[key], val, path + (key,))
            else:
                dst[key] = copy.deepcopy(val)

    merge(out, doc, ())
    return out


def _require_number(doc, problems, path, minimum=None, strict=False,
                    allow_none=False):
    node = doc
    for part in path.split(".")[:-1]:
        node = node.get(part, {})
        if not isinstance(node, dict):
            problems.append(f"{path}: parent section is not a mapping")
            return None
    leaf = path.split(".")[-1]
    if leaf not in node or node[leaf] is None:
        if allow_none:
            return None
        problems.append(f"{path}: missing required value")
        return None
    val = node[leaf]
    if isinstance(val, bool) or not isinstance(val, (int, float)):
        problems.append(f"{path}: expected a number, got {val!r}")
        return None
    if minimum is not None:
        if strict and val <= minimum:
            problems.append(f"{path}: must be > {minimum}, got {val}")
            return None
        if not strict and val < minimum:
            problems.append(f"{path}: must be >= {minimum}, got {val}")
            return None
    return float(val)


def load_config(path: str) -> RunConfig:
    """Parse, validate and resolve a run config file.

    Raises ParseError on malformed YAML (with line context) and
    ValidationError listing *every* violated invariant.
    """
    try:
        with open(path) as fh:
            doc = yaml.load(fh, Loader=_SciLoader)
    except FileNotFoundError as exc:
        raise ParseError(str(exc)) from exc
    except yaml.YAMLError as exc:
        mark = getattr(exc, "problem_mark", None)
        where = f" (line {mark.line + 1}, column {mark.column + 1})" if mark else ""
        raise ParseError(f"{path}: invalid config syntax{where}: {exc}") from exc
    if not isinstance(doc, dict):
        raise ParseError(f"{path}: top level must be a mapping of sections")
    return resolve_config(doc)


def resolve_config(doc: dict) -> RunConfig:
    """Validate and resolve an already-parsed config document."""
    doc = dict(doc)
    doc.pop("schema_version", None)
    doc.pop("resolved", None)
    known = set(DEFAULTS) | {"output_stem"}
    problems = [f"{key}: unknown section" for key in doc if key not in known]
    filled = _merge_defaults({k: v for k, v in doc.items() if k in known})

    # --- atom ------------------------------------------------------------
    inv_ns = _require_number(filled, problems, "atom.gamma_P_inverse_ns",
                             minimum=0.0, strict=True)
    branch = _require_number(filled, problems,
                             "atom.branching_ratio_PS_over_PD",
                             minimum=0.0, strict=True)

    # --- lasers ----------------------------------------------------------
    lasers = filled.get("lasers", {})
    for name in ("B", "R", "C"):
        if name not in lasers or not isinstance(lasers.get(name), dict):
            problems.append(f"lasers.{name}: missing laser section")
            lasers[name] = {"linewidth_HWHM_Hz": 0.0}
    rabi = {name: _require_number(filled, problems,
                                  f"lasers.{name}.rabi_over_2pi_MHz",
                                  minimum=0.0)
            for name in ("B", "R", "C")}
    lw = {name: _require_number(filled, problems,
                                f"lasers.{name}.linewidth_HWHM_Hz",
                                minimum=0.0)
          for name in ("B", "R", "C")}

    mode = Mode.WEAK
    auto_r = False
    detuning = {}
    for name in ("B", "R", "C"):
        key = f"lasers.{name}.detuning_over_2pi_MHz"
        val = lasers[name].get("detuning_over_2pi_MHz")
        if isinstance(val, str):
            match = _AUTO_RE.match(val)
            if not match:
                problems.append(f"{key}: unrecognized detuning rule {val!r}")
            elif name != "R":
                problems.append(
                    f"{key}: auto_resonance is only defined for the R laser")
            else:
                auto_r = True
                mode = Mode(match.group(1))
            detuning[name] = None
        else:
            detuning[name] = _require_number(filled, problems, key)

    # --- pulses ----------------------------------------------------------
    pulses = filled["pulses"]
    direction = pulses.get("direction")
    if direction not in ("D_to_Q", "Q_to_D"):
        problems.append(
            f"pulses.direction: must be D_to_Q or Q_to_D, got {direction!r}")
    tau = _require_number(filled, problems, "pulses.tau_us",
                          minimum=0.0, strict=True)
    if "delta_t_us" not in pulses or pulses["delta_t_us"] is None:
        pulses["delta_t_us"] = pulses.get("tau_us")
    delta_t = _require_number(filled, problems, "pulses.delta_t_us",
                              minimum=0.0, strict=True)
    c_off = _require_number(filled, problems, "pulses.c_switch_off_us",
                            minimum=0.0, strict=True, allow_none=True)
    ramp = _require_number(filled, problems, "pulses.prep_ramp_us",
                           minimum=0.0, strict=True)
    t_freeze = _require_number(filled, problems, "pulses.t_freeze_us",
                               allow_none=True)

    # --- integrator ------------------------------------------------------
    integ = filled["integrator"]
    if integ.get("method") not in ("adaptive_rk", "expm_oracle"):
        problems.append(
            f"integrator.method: unknown method {integ.get('method')!r}")
    rtol = _require_number(filled, problems, "integrator.rtol",
                           minimum=0.0, strict=True)
    atol = _require_number(filled, problems, "integrator.atol",
                           minimum=0.0, strict=True)
    max_step = _require_number(filled, problems, "integrator.max_step_us",
                               minimum=0.0, strict=True)
    sample_dt = _require_number(filled, problems, "integrator.sample_dt_us",
                                minimum=0.0, strict=True)

    # --- scenario --------------------------------------------------------
    scenario = filled["scenario"]
    preset = scenario.get("preset")
    if preset not in _PRESETS:
        problems.append(f"scenario.preset: unknown preset {preset!r}; "
                        f"choose from {', '.join(_PRESETS)}")
        preset = "custom"
    scan = scenario.get("scan")
    axis_param = None
    axis_values = ()
    if preset in _SCAN_PRESETS or (preset == "custom" and scan is not None):
        if not isinstance(scan, dict):
            problems.append("scenario.scan: scan presets require a scan "
                            "section with parameter and values")
        else:
            axis_param = scan.get("parameter")
            expected = _SCAN_AXES.get(preset)
            if expected is not None and axis_param is None:
                axis_param = scan["parameter"] = expected
            if expected is not None and axis_param != expected:
                problems.append(f"scenario.scan.parameter: preset {preset} "
                                f"scans {expected}, got {axis_param!r}")
            vals = scan.get("values")
            if (not isinstance(vals, list) or len(vals) == 0
                    or not all(isinstance(v, (int, float))
                               and not isinstance(v, bool) for v in vals)):
                problems.append(
                    "scenario.scan.values: must be a non-empty number list")
            else:
                axis_values = tuple(float(v) for v in vals)
    elif scan is not None:
        problems.append(f"scenario.scan: preset {preset} does not scan")
    if preset == "partial_stirap" and t_freeze is None:
        problems.append("pulses.t_freeze_us: required for partial_stirap")
    if preset == "reverse_transfer" and direction == "D_to_Q":
        problems.append(
            "pulses.direction: reverse_transfer requires Q_to_D")
    if preset in ("full_transfer", "partial_stirap") and direction == "Q_to_D":
        problems.append(f"pulses.direction: {preset} requires D_to_Q")
    if detuning.get("R") is None and not auto_r and \
            "lasers.R.detuning_over_2pi_MHz: missing required value" not in problems:
        problems.append("lasers.R.detuning_over_2pi_MHz: missing required value")

    if problems:
        raise ValidationError(problems)

    # --- build internal objects (all conversions happen here, once) ------
    atom = AtomParams.from_lifetime(inv_ns, branch)
    delta_r = None if auto_r else mhz_to_rad_per_us(detuning["R"])
    params = TransferParams(
        atom=atom,
        omega_b0=mhz_to_rad_per_us(rabi["B"]),
        omega_r0=mhz_to_rad_per_us(rabi["R"]),
        omega_c=mhz_to_rad_per_us(rabi["C"]),
        delta_b=mhz_to_rad_per_us(detuning["B"]),
        delta_c=mhz_to_rad_per_us(detuning["C"]),
        delta_r=delta_r,
        tau=tau,
        delta_t=delta_t,
        c_switch_off_tau=c_off,
        prep_ramp=ramp,
        t_freeze=t_freeze,
        linewidth_b=linewidth_hz_to_rad_per_us(lw["B"]),
        linewidth_r=linewidth_hz_to_rad_per_us(lw["R"]),
        linewidth_c=linewidth_hz_to_rad_per_us(lw["C"]),
        mode=mode,
        integrator=IntegratorConfig(
            method=integ["method"], rtol=rtol, atol=atol,
            max_step=max_step, sample_dt=sample_dt),
    )
    spec = ScenarioSpec(
        preset=preset, base=params,
        axis_parameter=axis_param, axis_values=axis_values,
        observable=scenario.get("observable", "F_eq10"),
    )

    snapshot = copy.deepcopy(filled)
    snapshot["schema_version"] = SCHEMA_VERSION
    snapshot["resolved"] = {
        "delta_R_over_2pi_MHz": rad_per_us_to_mhz(params.resolved_delta_r()),
        "alpha_C": params.alpha_c,
        "resonance_mode": mode.value,
    }
    stem = filled.get("output_stem") or preset
    return RunConfig(snapshot=snapshot, params=params, spec=spec,
                     preset=preset, output_stem=str(stem))


def with_rtol(cfg: RunConfig, rtol: float) -> RunConfig:
    """A copy of cfg with the integrator tolerance overridden (CLI --rtol)."""
    params = replace(cfg.params,
                     integrator=replace(cfg.params.integrator, rtol=rtol))
    snapshot = copy.deepcopy(cfg.snapshot)
    snapshot["integrator"]["rtol"] = rtol
    return RunConfig(
        snapshot=snapshot, params=params,
        spec=replace(cfg.spec, base=params),
        preset=cfg.preset, output_stem=cfg.output_stem,
    )
