"""
Run configuration parser module.
"""

import copy
import json
import logging
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Dict, List, Optional, Sequence, Union

import numpy as np

from nonlocalhopf.model import ModelParams, RawParams, nondimensionalize
from nonlocalhopf.simulator import InitialCondition, SimConfig
from nonlocalhopf.validator import ConfigValidator, ValidationError

logger = logging.getLogger(__name__)


class ConfigParser:
    """
    A class for parsing JSON run configurations and applying overrides.

    Attributes:
        encoding (str): The encoding to use when reading configuration files.
    """

    def __init__(self, encoding: str = "utf-8") -> None:
        """
        Initialize the ConfigParser.

        Args:
            encoding: The encoding to use for reading files. Defaults to 'utf-8'.
        """
        self.encoding = encoding

    def parse_file(self, filepath: Union[str, Path]) -> Dict[str, Any]:
        """
        Parse a configuration file.

        Args:
            filepath: Path to the JSON document.

        Returns:
            The parsed document.

        Raises:
            FileNotFoundError: If the file does not exist.
            ValidationError: If the file is not a JSON object.
        """
        filepath = Path(filepath)

        if not filepath.exists():
            raise FileNotFoundError(f"File not found: {filepath}")

        return self.parse_string(filepath.read_text(encoding=self.encoding))

    def parse_string(self, text: str) -> Dict[str, Any]:
        """
        Parse a configuration string.

        Args:
            text: The JSON document.

        Returns:
            The parsed document.

        Raises:
            ValidationError: If the text is malformed or not a JSON object.
        """
        try:
            document = json.loads(text)
        except json.JSONDecodeError as e:
            raise ValidationError(
                f"Configuration is not valid JSON:\nLine {e.lineno}, Column {e.colno}: {e.msg}"
            ) from e

        if not isinstance(document, dict):
            raise ValidationError("Configuration must be a JSON object")

        return document

    def apply_overrides(self, document: Dict[str, Any], overrides: Sequence[str]) -> Dict[str, Any]:
        """
        Apply dotted-path overrides such as "params.ell=20".

        Values are read as JSON literals and fall back to plain strings. Intermediate
        objects are created as needed; unknown paths are caught by validation.

        Args:
            document: The parsed document; it is not modified.
            overrides: "key=value" strings.

        Returns:
            A new document with the overrides applied.

        Raises:
            ValidationError: If an override is malformed or descends into a non-object.
        """
        result = copy.deepcopy(document)
        for override in overrides:
            key, sep, raw_value = override.partition("=")
            parts = key.strip().split(".")
            if not sep or not all(parts):
                raise ValidationError(f"Malformed override {override!r}; expected key=value")
            try:
                value = json.loads(raw_value)
            except json.JSONDecodeError:
                value = raw_value

            node = result
            for depth, part in enumerate(parts[:-1]):
                child = node.setdefault(part, {})
                if not isinstance(child, dict):
                    prefix = ".".join(parts[: depth + 1])
                    raise ValidationError(f"Cannot override {key!r}: {prefix} is not an object")
                node = child
            node[parts[-1]] = value
            logger.debug(f"Override {key} = {value!r}")
        changed = self.changed_keys(document, result)
        if changed:
            logger.info(f"Overrides changed {', '.join(changed)}")
        return result

    def changed_keys(self, before: Dict[str, Any], after: Dict[str, Any]) -> List[str]:
        """Return the sorted dotted keys whose leaf value differs between two documents."""
        old, new = self.flatten(before), self.flatten(after)
        missing = object()
        keys = old.keys() | new.keys()
        return sorted(k for k in keys if old.get(k, missing) != new.get(k, missing))

    def flatten(self, document: Dict[str, Any], prefix: str = "") -> Dict[str, Any]:
        """
        Flatten nested objects into dotted keys.

        Args:
            document: The document to flatten.
            prefix: Key prefix used for recursion.

        Returns:
            A mapping from dotted paths to leaf values.
        """
        result: Dict[str, Any] = {}
        for key, value in document.items():
            path = f"{prefix}{key}"
            if isinstance(value, dict) and value:
                result.update(self.flatten(value, prefix=f"{path}."))
            else:
                result[path] = value
        return result


@dataclass(frozen=True)
class SweepSpec:
    """
    One-dimensional parameter sweep.

    Attributes:
        axis: Parameter varied; one of b, ell, beta, c.
        values: The parameter values, in order.
    """

    axis: str
    values: List[float]

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "SweepSpec":
        """Build a sweep from explicit values or start/stop/count."""
        if "values" in data:
            values = [float(v) for v in data["values"]]
        else:
            values = [float(v) for v in np.linspace(data["start"], data["stop"], data["count"])]
        if not values:
            raise ValidationError("sweep: the range is empty")
        return cls(axis=data["axis"], values=values)


@dataclass(frozen=True)
class AnalysisOptions:
    """
    Switches of the analysis commands.

    Attributes:
        n_lambda: Points of the lambda grid of the stability map.
        include_limits: Add the large-ell limits to normal-form reports.
        include_local: Add the local-model contrast to analysis reports.
        verify_quadrature: Cross-check every normal form by quadrature.
    """

    n_lambda: int = 201
    include_limits: bool = True
    include_local: bool = True
    verify_quadrature: bool = False


@dataclass(frozen=True)
class RunConfig:
    """
    A validated run configuration.

    Attributes:
        command: analyze, hopf, normalform, simulate or sweep.
        params: Nondimensional model parameters.
        raw_params: Dimensional rates, when the document gave them.
        sim: Simulation settings.
        ic: Initial condition of simulations.
        sweep: Sweep settings, when present.
        analysis: Switches of the analysis commands.
        output_dir: Directory receiving the output files.
        prefix: File name prefix of the outputs.
        seed: Seed echoed in reports.
        document: The validated document after overrides.
    """

    command: str
    params: ModelParams
    raw_params: Optional[RawParams] = None
    sim: SimConfig = field(default_factory=SimConfig)
    ic: InitialCondition = field(default_factory=InitialCondition)
    sweep: Optional[SweepSpec] = None
    analysis: AnalysisOptions = field(default_factory=AnalysisOptions)
    output_dir: Path = Path("out")
    prefix: str = "run"
    seed: int = 0
    document: Dict[str, Any] = field(default_factory=dict)


def build_run_config(document: Dict[str, Any]) -> RunConfig:
    """
    Validate a document and build the typed configuration.

    Raises:
        ValidationError: If the document violates the schema.
        ParameterError: If parameter values are inconsistent.
        SimConfigError: If the simulation settings are inconsistent.
    """
    ConfigValidator().validate(document)

    raw: Optional[RawParams] = None
    if "raw_params" in document:
        if not document.get("nondimensionalize", True):
            raise ValidationError("raw_params requires nondimensionalize to be true")
        raw = RawParams(**{k: float(v) for k, v in document["raw_params"].items()})
        params = nondimensionalize(raw)
    else:
        params = ModelParams.from_dict(document["params"])

    sim_doc = dict(document.get("sim", {}))
    ic = InitialCondition.from_spec(sim_doc.pop("ic", "fig1"))
    sim = SimConfig.for_ell(params.ell, **sim_doc)

    sweep = SweepSpec.from_dict(document["sweep"]) if "sweep" in document else None
    if document["command"] == "sweep" and sweep is None:
        raise ValidationError("sweep: required for the sweep command")

    output = document.get("output", {})
    return RunConfig(
        command=document["command"],
        params=params,
        raw_params=raw,
        sim=sim,
        ic=ic,
        sweep=sweep,
        analysis=AnalysisOptions(**document.get("analysis", {})),
        output_dir=Path(output.get("dir", "out")),
        prefix=output.get("prefix", document["command"]),
        seed=int(document.get("seed", 0)),
        document=document,
    )


def load_run_config(
    filepath: Union[str, Path], overrides: Sequence[str] = (), command: Optional[str] = None
) -> RunConfig:
    """
    Parse, override and validate a configuration file.

    Args:
        filepath: Path to the JSON document.
        overrides: "key=value" strings applied after parsing.
        command: Command from the command line; it replaces the document's command.

    Returns:
        The typed configuration.
    """
    parser = ConfigParser()
    document = parser.apply_overrides(parser.parse_file(filepath), overrides)
    if command is not None:
        document["command"] = command
    config = build_run_config(document)
    logger.info(f"Loaded {config.command} configuration from {filepath}")
    return config
