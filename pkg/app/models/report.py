"""
Pydantic models for command results
"""
from typing import Any, Dict, List, Optional

from pydantic import BaseModel, Field

from app.models.hurwitz import BranchingData, MoveLog, SystemPayload


class OrbitReport(BaseModel):
    """Outcome of an irreducibility verification"""
    tool: str = Field(..., description="Tool name")
    version: str = Field(..., description="Tool version")
    spec: str = Field(..., description="Root system spec string")
    branching: str = Field(..., description="Branching data in CLI grammar")
    branching_data: BranchingData
    total_systems: int = Field(..., ge=0, description="Generating Hurwitz systems enumerated")
    orbit_count: int = Field(..., ge=0)
    orbit_sizes: List[int] = Field(default_factory=list)
    nielsen_class_count: int = Field(..., ge=0)
    nielsen_orbit_count: int = Field(..., ge=0)
    nonempty_predicted: bool
    caps: Dict[str, int] = Field(default_factory=dict, description="Caps used for the run")
    elapsed_seconds: Optional[float] = Field(default=None, description="Only with REPORT_TIMINGS")


class ManifestEntry(BaseModel):
    """One (spec, branching) cell of a verification matrix"""
    spec: str
    branching: str


class ValidationResult(BaseModel):
    valid: bool
    system: SystemPayload
    hash: str
    branching: str


class TransformResult(BaseModel):
    """A transformed system shipped with the log that produced it"""
    source: SystemPayload
    system: SystemPayload
    log: MoveLog


class NielsenResult(BaseModel):
    rootsystem: str
    axes: List[List[int]]
    trace: List[List[int]] = Field(default_factory=list, description="1-based (i, j) pairs")
    heights: List[int] = Field(default_factory=list, description="h(T) before each step, then final")
    collisions: List[int] = Field(default_factory=list, description="Trace steps that produced a repeat")
    base: List[List[int]] = Field(default_factory=list)
    subsystem: str


class OrbitResult(BaseModel):
    rootsystem: str
    size: int
    members: List[Dict[str, Any]]
