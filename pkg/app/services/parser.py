"""
Service for parsing command-line strings and JSON inputs into validated models
"""
import json
import re
from pathlib import Path
from typing import Any, Dict, List, Optional, Tuple, Union

from pydantic import ValidationError

from app.core.exceptions import DomainError, InvalidSpecError
from app.models.hurwitz import BraidMove, BranchingData, ComponentBranching, MoveLog, SystemPayload
from app.models.report import ManifestEntry
from app.models.rootsys import Component, RootSystemSpec
from app.services.hurwitz import HurwitzSystem, make_system
from app.services.rootsys import build_root_system
from app.utils.logger import app_logger


class ParsingError(DomainError):
    """Exception raised for malformed input text or files"""
    pass


_COMPONENT = re.compile(r"^\s*([A-Ga-g])\s*(\d+)\s*$")
_COUNT = re.compile(r"^\s*(n|ns|nl)\s*=\s*(\d+)\s*$")


def parse_spec(text: str) -> RootSystemSpec:
    """
    Parse a root system spec such as 'A2', 'B3+G2' or 'A1+A1'
    """
    parts = text.split("+")
    if not text.strip() or any(not part.strip() for part in parts):
        raise ParsingError(f"empty component in spec {text!r}")

    components = []
    for part in parts:
        match = _COMPONENT.match(part)
        if not match:
            raise ParsingError(f"cannot parse component {part.strip()!r} in spec {text!r}")
        try:
            components.append(Component(family=match.group(1).upper(), rank=int(match.group(2))))
        except ValidationError as e:
            app_logger.error(f"Invalid component {part.strip()!r}: {e.errors()[0]['msg']}")
            raise InvalidSpecError(f"invalid component {part.strip()!r}: {e.errors()[0]['msg']}")

    spec = RootSystemSpec(components=tuple(components))
    app_logger.debug(f"Parsed spec {text!r} as {spec.label}")
    return spec


def _parse_counts(text: str) -> Dict[str, int]:
    counts: Dict[str, int] = {}
    for item in text.split(","):
        match = _COUNT.match(item)
        if not match:
            raise ParsingError(f"cannot parse count {item.strip()!r}; expected n=, ns= or nl=")
        key = match.group(1)
        if key in counts:
            raise ParsingError(f"{key} given twice in {text!r}")
        counts[key] = int(match.group(2))
    return counts


def parse_branching(text: str, spec: RootSystemSpec) -> BranchingData:
    """
    Parse branching data against a spec

    Grammar: one chunk per component separated by ';', each chunk 'n=4' or
    'ns=2,nl=2', optionally prefixed by a component label ('A2:n=4').
    Chunks match components positionally in canonical order, or by label
    when every chunk carries a distinct label.
    """
    chunks = [chunk.strip() for chunk in text.split(";")]
    if len(chunks) != len(spec.components):
        raise ParsingError(f"{len(chunks)} branching entries for {len(spec.components)} components of {spec.label}")

    labelled: List[Tuple[Optional[str], str]] = []
    for chunk in chunks:
        label, _, counts = chunk.rpartition(":")
        labelled.append((label.strip().upper() or None, counts))

    order = list(range(len(chunks)))
    labels = [label for label, _ in labelled]
    if all(labels) and len(set(labels)) == len(labels):
        by_label = {c.label: q for q, c in enumerate(spec.components)}
        if set(labels) != set(by_label):
            raise ParsingError(f"labels {labels} do not match components of {spec.label}")
        order = [labels.index(c.label) for c in spec.components]

    parts = []
    for q, component in zip(order, spec.components):
        label, counts_text = labelled[q]
        if label is not None and label != component.label:
            raise ParsingError(f"entry labelled {label} where {component.label} was expected")
        counts = _parse_counts(counts_text)
        try:
            parts.append(ComponentBranching(
                component=component,
                n=counts.get("n"),
                n_s=counts.get("ns"),
                n_l=counts.get("nl"),
            ))
        except ValidationError as e:
            app_logger.error(f"Validation error while parsing branching {text!r}: {e}")
            raise ParsingError(f"invalid branching for {component.label}: {e.errors()[0]['msg']}")

    return BranchingData(components=tuple(parts))


def parse_moves(text: str) -> List[BraidMove]:
    """'1,-2,3' -> sigma_1, sigma_2^-1, sigma_3"""
    moves = []
    for item in filter(None, (part.strip() for part in text.split(","))):
        try:
            value = int(item)
        except ValueError:
            raise ParsingError(f"cannot parse move {item!r}")
        if value == 0:
            raise ParsingError("braid indices start at 1")
        moves.append(BraidMove(index=abs(value), direction="forward" if value > 0 else "inverse"))
    return moves


def parse_axes(text: str) -> List[List[int]]:
    """Axes as a JSON list of integer lists"""
    try:
        axes = json.loads(text)
    except json.JSONDecodeError as e:
        raise ParsingError(f"axes are not valid JSON: {e}")
    if not isinstance(axes, list) or not all(
        isinstance(axis, list) and all(isinstance(c, int) for c in axis) for axis in axes
    ):
        raise ParsingError("axes must be a list of integer lists")
    return axes


def parse_word(text: str) -> List[int]:
    """'1,3' -> [1, 3]"""
    try:
        return [int(part) for part in text.split(",") if part.strip()]
    except ValueError:
        raise ParsingError(f"cannot parse index list {text!r}")


def _load_json(path: Union[str, Path]) -> Any:
    try:
        return json.loads(Path(path).read_text(encoding="utf-8"))
    except FileNotFoundError:
        raise ParsingError(f"file not found: {path}")
    except json.JSONDecodeError as e:
        app_logger.error(f"Failed to parse JSON from {path}: {e}")
        raise ParsingError(f"failed to parse JSON from {path}: {e}")


def system_from_payload(payload: SystemPayload) -> HurwitzSystem:
    rs = build_root_system(parse_spec(payload.rootsystem))
    return make_system(rs, payload.axes)


def load_system(path: Union[str, Path]) -> HurwitzSystem:
    """
    Load a system file {rootsystem, axes}

    The output of a transforming command is accepted too; its resulting
    system is used.
    """
    data = _load_json(path)
    if isinstance(data, dict) and "system" in data:
        data = data["system"]
    try:
        payload = SystemPayload.model_validate(data)
    except ValidationError as e:
        app_logger.error(f"Validation error while loading system from {path}: {e}")
        raise ParsingError(f"invalid system file {path}: {e.errors()[0]['msg']}")
    return system_from_payload(payload)


def load_log(path: Union[str, Path]) -> MoveLog:
    """Load a move log, either bare or inside a transforming command's output"""
    data = _load_json(path)
    if isinstance(data, dict) and "log" in data:
        data = data["log"]
    try:
        return MoveLog.model_validate(data)
    except ValidationError as e:
        app_logger.error(f"Validation error while loading log from {path}: {e}")
        raise ParsingError(f"invalid move log {path}: {e.errors()[0]['msg']}")


def load_manifest(path: Union[str, Path]) -> List[ManifestEntry]:
    """JSON-lines manifest, one {spec, branching} object per line"""
    try:
        lines = Path(path).read_text(encoding="utf-8").splitlines()
    except FileNotFoundError:
        raise ParsingError(f"file not found: {path}")

    entries = []
    for number, line in enumerate(lines, start=1):
        if not line.strip() or line.lstrip().startswith("#"):
            continue
        try:
            entries.append(ManifestEntry.model_validate_json(line))
        except ValidationError as e:
            raise ParsingError(f"{path}:{number}: invalid manifest entry: {e.errors()[0]['msg']}")
    return entries
