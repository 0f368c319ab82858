"""Scenario documents: strict JSON schema, unit conversion and evaluation.

A scenario is a JSON object with the sections ``mirror``, ``probe``,
``control``, ``cloud`` and optionally ``environment`` and ``overrides``.
Every quantity carries its unit in the key name (``nu_hz``, ``power_mw``,
``gamma_over_nu`` ...); anything unknown is rejected.
"""

from __future__ import annotations

import copy
import functools
import json
import math
import warnings
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional

import numpy as np
from jsonschema import Draft7Validator

from . import atom
from .chain import ChainInputs
from .cooling import (CoolingRates, Strategy, StrategyChoice, assemble_rates, design_detuning,
                      design_position, rates_from_chain, steady_state_occupation)
from .errors import DomainError, OptocoolError, ScenarioError
from .params import (CONSTANTS, AtomCloudSpec, DriveSpec, EnvironmentSpec, MirrorSpec,
                     optomech_coupling, rabi_frequency)

FIXTURE_DIR = Path(__file__).parent / "fixtures"

# keys that are mutually exclusive inside one section; exactly one is required
EXCLUSIVE = {
    "drive": [("wavelength_nm", "omega0_rad_s"), ("power_mw", "rabi_over_nu"),
              ("gamma_over_nu", "gamma_rad_s"), ("Gamma_over_nu", "Gamma_rad_s")],
    "cloud": [("delta_over_nu", "delta_rad_s"), ("placement", "xbar_m")],
}

_POS = {"type": "number", "exclusiveMinimum": 0}
_NONNEG = {"type": "number", "minimum": 0}
_ETA = {"oneOf": [{"type": "number"},
                  {"type": "array", "items": {"type": "number"}, "minItems": 2, "maxItems": 2},
                  {"enum": ["inf"]}]}
_DRIVE = {
    "type": "object",
    "additionalProperties": False,
    "properties": {
        "wavelength_nm": _POS, "omega0_rad_s": _POS,
        "power_mw": _NONNEG, "rabi_over_nu": _NONNEG,
        "gamma_over_nu": _NONNEG, "gamma_rad_s": _NONNEG,
        "Gamma_over_nu": _NONNEG, "Gamma_rad_s": _NONNEG,
    },
}
SCHEMA = {
    "type": "object",
    "additionalProperties": False,
    "required": ["mirror", "probe", "control", "cloud"],
    "properties": {
        "mirror": {
            "type": "object",
            "additionalProperties": False,
            "required": ["nu_hz", "mass_kg"],
            "properties": {"nu_hz": _POS, "mass_kg": _POS, "quality": _POS},
        },
        "probe": _DRIVE,
        "control": _DRIVE,
        "cloud": {
            "type": "object",
            "additionalProperties": False,
            "required": ["n_atoms"],
            "properties": {
                "n_atoms": {"type": "integer", "minimum": 0},
                "delta_over_nu": {"oneOf": [{"type": "number"}, {"enum": ["design"]}]},
                "delta_rad_s": {"type": "number"},
                "placement": {
                    "type": "object",
                    "additionalProperties": False,
                    "required": ["strategy"],
                    "properties": {"strategy": {"enum": ["bs", "tms"]},
                                   "index": {"type": "integer", "minimum": 0}},
                },
                "xbar_m": _NONNEG,
                "phase_rad": {"type": "number"},
            },
        },
        "environment": {
            "type": "object",
            "additionalProperties": False,
            "required": ["temperature_mk"],
            "properties": {"temperature_mk": _NONNEG},
        },
        "overrides": {
            "type": "object",
            "additionalProperties": False,
            "properties": {"eta_plus": _ETA, "eta_minus": _ETA},
        },
    },
}
_VALIDATOR = Draft7Validator(SCHEMA)


def _check_exclusive(doc):
    for section in ("probe", "control", "cloud"):
        groups = EXCLUSIVE["cloud" if section == "cloud" else "drive"]
        body = doc[section]
        for group in groups:
            present = [k for k in group if k in body]
            if len(present) != 1:
                raise ScenarioError(f"{section}: exactly one of {', '.join(group)} is required"
                                    + (f" (got {', '.join(present)})" if present else ""))
    cloud = doc["cloud"]
    if "xbar_m" in cloud and "phase_rad" not in cloud:
        raise ScenarioError("cloud: xbar_m needs an explicit phase_rad (nu*tau modulo 2 pi)")
    if "phase_rad" in cloud and "xbar_m" not in cloud:
        raise ScenarioError("cloud: phase_rad is only valid together with xbar_m")
    if cloud.get("delta_over_nu") == "design" and "placement" not in cloud:
        raise ScenarioError("cloud: delta_over_nu='design' requires a placement strategy")


def validate_document(doc) -> None:
    errors = sorted(_VALIDATOR.iter_errors(doc), key=lambda e: list(e.absolute_path))
    if errors:
        err = errors[0]
        where = ".".join(str(p) for p in err.absolute_path) or "<root>"
        raise ScenarioError(f"{where}: {err.message}")
    _check_exclusive(doc)


def _parse_eta(value) -> complex:
    if value == "inf":
        return complex(math.inf, 0.0)
    if isinstance(value, list):
        return complex(value[0], value[1])
    return complex(value)


def _drive(body, nu) -> DriveSpec:
    omega0 = (2.0 * math.pi * CONSTANTS.c / (body["wavelength_nm"] * 1e-9)
              if "wavelength_nm" in body else body["omega0_rad_s"])
    gamma = body["gamma_over_nu"] * nu if "gamma_over_nu" in body else body["gamma_rad_s"]
    Gamma = body["Gamma_over_nu"] * nu if "Gamma_over_nu" in body else body["Gamma_rad_s"]
    if "power_mw" in body:
        return DriveSpec.from_power(omega0, body["power_mw"] * 1e-3, gamma, Gamma)
    return DriveSpec.from_rabi(omega0, body["rabi_over_nu"] * nu, gamma, Gamma)


@dataclass(frozen=True)
class Scenario:
    mirror: MirrorSpec
    probe: DriveSpec
    control: DriveSpec
    cloud: AtomCloudSpec
    environment: EnvironmentSpec
    strategy: Optional[StrategyChoice]
    phase: complex
    overrides: dict = field(default_factory=dict)
    document: dict = field(default_factory=dict, repr=False, compare=False)

    @classmethod
    def from_document(cls, doc, prevalidated=False) -> "Scenario":
        """Build from a scenario document.

        ``prevalidated=True`` skips the schema pass (the exclusivity rules are
        always checked); sweeps use it after validating each changed leaf.
        """
        if prevalidated:
            _check_exclusive(doc)
        else:
            validate_document(doc)
        doc = copy.deepcopy(doc)
        try:
            m = doc["mirror"]
            mirror = MirrorSpec(2.0 * math.pi * m["nu_hz"], m["mass_kg"], m.get("quality", math.inf))
            nu = mirror.nu
            probe = _drive(doc["probe"], nu)
            control = _drive(doc["control"], nu)
            c = doc["cloud"]
            strategy = None
            if "placement" in c:
                strategy = StrategyChoice(Strategy.parse(c["placement"]["strategy"]),
                                          c["placement"].get("index", 0))
                with warnings.catch_warnings():
                    warnings.simplefilter("ignore")
                    where = design_position(strategy.kind, nu, strategy.placement_index)
                xbar, phase = where.xbar, complex(where.phase)
            else:
                xbar, phase = c["xbar_m"], complex(math.cos(c["phase_rad"]), math.sin(c["phase_rad"]))
            if c.get("delta_over_nu") == "design":
                delta = design_detuning(strategy.kind, rabi_frequency(probe), rabi_frequency(control), nu)
            elif "delta_over_nu" in c:
                delta = c["delta_over_nu"] * nu
            else:
                delta = c["delta_rad_s"]
            cloud = AtomCloudSpec(c["n_atoms"], xbar, delta)
            temperature = doc.get("environment", {}).get("temperature_mk", 0.0) * 1e-3
            env = EnvironmentSpec(temperature, mirror)
            overrides = {k: _parse_eta(v) for k, v in doc.get("overrides", {}).items()}
        except DomainError as exc:
            raise ScenarioError(str(exc)) from exc
        return cls(mirror, probe, control, cloud, env, strategy, phase, overrides, doc)

    @classmethod
    def load(cls, path) -> "Scenario":
        return cls.from_document(load_document(path))

    def to_document(self) -> dict:
        return copy.deepcopy(self.document)

    # -- derived physics -------------------------------------------------

    @property
    def nu(self) -> float:
        return self.mirror.nu

    @property
    def rabi(self):
        return rabi_frequency(self.probe), rabi_frequency(self.control)

    @property
    def mu(self):
        return optomech_coupling(self.probe, self.mirror), optomech_coupling(self.control, self.mirror)

    @property
    def alpha_sq(self) -> float:
        """Common drive intensity alpha_p * alpha_c (|alpha|^2 for equal drives)."""
        return self.probe.amplitude * self.control.amplitude

    @property
    def equal_drives(self) -> bool:
        return math.isclose(self.probe.amplitude, self.control.amplitude, rel_tol=1e-12)

    def atom_args(self):
        op, oc = self.rabi
        return (op, oc, self.cloud.delta, self.probe.gamma, self.control.gamma,
                self.probe.Gamma, self.control.Gamma)

    def spectral_factors(self, omegas) -> np.ndarray:
        op, oc = self.rabi
        if op == 0 and oc == 0:
            return np.zeros(len(omegas), dtype=complex)
        return atom.spectral_factor_array(omegas, *self.atom_args())

    @functools.cached_property
    def J_pm(self):
        jp, jm = self.spectral_factors([self.nu, -self.nu])
        return complex(jp), complex(jm)

    @property
    def eta_pm(self):
        jp, jm = self.J_pm
        n_a = self.cloud.n_atoms * self.alpha_sq
        return self.overrides.get("eta_plus", n_a * jp), self.overrides.get("eta_minus", n_a * jm)

    def rates(self) -> CoolingRates:
        """Rates of the occupation equation.

        Equal drives use the saturation formula eta/(1-eta); unequal drives use
        the continuum chain, which reduces to it as the amplitudes meet.
        """
        mu_p, mu_c = self.mu
        env = dict(env_rate=self.mirror.env_rate, n_thermal=self.environment.n_thermal)
        if self.equal_drives or self.overrides or self.cloud.n_atoms == 0 or self.alpha_sq == 0:
            eta_p, eta_m = self.eta_pm
            return assemble_rates(mu_p, mu_c, eta_p, eta_m, self.phase, **env)
        jp, jm = self.J_pm
        inputs = ChainInputs(self.cloud.n_atoms, self.alpha_sq, jp, jm, mu_c, self.phase,
                             alpha_ratio=self.probe.amplitude / self.control.amplitude)
        return rates_from_chain(mu_p, inputs, method="continuum", **env)

    def dark_state_residual(self) -> float:
        """Largest optical coherence of the bare single-atom steady state."""
        try:
            system = atom.build_bloch(self.rabi[0], self.rabi[1], self.cloud.delta, self.cloud.delta,
                                      self.probe.gamma, self.control.gamma, self.probe.Gamma, self.control.Gamma)
            steady = atom.bare_steady_state(system)
        except OptocoolError:
            return math.nan
        return float(np.abs(steady.optical_coherences).max())


RECORD_FIELDS = ("N0", "LambdaPlus", "LambdaMinus", "net_rate", "n_ss", "divergent",
                 "absJ_plus", "absJ_minus", "eta_plus_re", "eta_plus_im", "eta_minus_re", "eta_minus_im")


def evaluate(scenario: Scenario) -> dict:
    """One record of rates, couplings and steady-state occupation."""
    rates = scenario.rates()
    n_ss = steady_state_occupation(rates, include_env=True)
    jp, jm = scenario.J_pm
    ep, em = scenario.eta_pm
    return {
        "N0": rates.N0,
        "LambdaPlus": rates.LambdaPlus,
        "LambdaMinus": rates.LambdaMinus,
        "net_rate": rates.net_rate,
        "n_ss": n_ss,
        "divergent": math.isinf(n_ss),
        "absJ_plus": abs(jp),
        "absJ_minus": abs(jm),
        "eta_plus_re": ep.real,
        "eta_plus_im": ep.imag,
        "eta_minus_re": em.real,
        "eta_minus_im": em.imag,
    }


def load_document(path) -> dict:
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as exc:
        raise ScenarioError(f"cannot read scenario {path}: {exc}") from exc
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise ScenarioError(f"{path}: line {exc.lineno}, column {exc.colno}: {exc.msg}") from exc


def fixture_path(name) -> Path:
    if not name.endswith(".json"):
        name += ".json"
    return FIXTURE_DIR / name


@functools.lru_cache(maxsize=None)
def _leaf_validator(path):
    node = SCHEMA
    for key in path.split("."):
        props = node.get("properties", {})
        if key not in props:
            raise ScenarioError(f"invalid parameter path {path!r}: unknown key {key!r}")
        node = props[key]
    return Draft7Validator(node)


def set_path(doc, path, value) -> None:
    """Assign ``value`` at a dotted path, dropping keys that are exclusive with it.

    The value is checked against the schema of that leaf, so a document that
    was valid before stays valid up to the exclusivity rules.
    """
    keys = path.split(".")
    validator = _leaf_validator(path)
    err = next(iter(validator.iter_errors(value)), None)
    if err is not None:
        raise ScenarioError(f"{path}: {err.message}")
    target = doc
    for key in keys[:-1]:
        target = target.setdefault(key, {})
    leaf = keys[-1]
    section = keys[0]
    if len(keys) == 2:
        groups = EXCLUSIVE.get("cloud" if section == "cloud" else "drive", []) if section in (
            "probe", "control", "cloud") else []
        for group in groups:
            if leaf in group:
                for other in group:
                    if other != leaf:
                        target.pop(other, None)
        if section == "cloud" and leaf == "placement":
            target.pop("phase_rad", None)
    target[leaf] = value
