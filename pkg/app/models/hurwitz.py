"""
Pydantic models for Hurwitz systems, braid moves and branching data
"""
from typing import List, Literal, Optional, Tuple

from pydantic import BaseModel, ConfigDict, Field, model_validator

from app.models.rootsys import Component


class BraidMove(BaseModel):
    """An elementary braid sigma_i (forward) or its inverse"""
    model_config = ConfigDict(frozen=True, populate_by_name=True)

    index: int = Field(..., ge=1, alias="i", description="1-based position i of sigma_i")
    direction: Literal["forward", "inverse"] = Field(default="forward", alias="dir")

    @property
    def forward(self) -> bool:
        return self.direction == "forward"

    def inverted(self) -> "BraidMove":
        return BraidMove(index=self.index, direction="inverse" if self.forward else "forward")

    def __str__(self) -> str:
        return f"s{self.index}" if self.forward else f"s{self.index}^-1"


class MoveLog(BaseModel):
    """A replayable sequence of braid moves between two systems"""
    moves: List[BraidMove] = Field(default_factory=list)
    source_hash: str = Field(..., description="Stable hash of the source axis tuple")
    target_hash: str = Field(..., description="Stable hash of the target axis tuple")

    def __len__(self) -> int:
        return len(self.moves)


class SystemPayload(BaseModel):
    """JSON form of a Hurwitz system"""
    rootsystem: str = Field(..., description="Spec string such as 'A2' or 'B3+G2'")
    axes: List[List[int]] = Field(..., description="Positive axis of each reflection")


class ComponentBranching(BaseModel):
    """Counts for one irreducible component"""
    model_config = ConfigDict(frozen=True)

    component: Component
    n: Optional[int] = Field(default=None, ge=0, description="Count for simply laced components")
    n_s: Optional[int] = Field(default=None, ge=0, description="Short-root reflections")
    n_l: Optional[int] = Field(default=None, ge=0, description="Long-root reflections")

    @model_validator(mode="after")
    def check_shape(self) -> "ComponentBranching":
        if self.component.simply_laced:
            if self.n is None or self.n_s is not None or self.n_l is not None:
                raise ValueError(f"{self.component.label} is simply laced: give n only")
        elif self.n is not None or self.n_s is None or self.n_l is None:
            raise ValueError(f"{self.component.label} is not simply laced: give n_s and n_l")
        return self

    @property
    def counts(self) -> Tuple[int, ...]:
        """Counts per reflection class: (n,) or (n_s, n_l)"""
        if self.component.simply_laced:
            return (self.n,)
        return (self.n_s, self.n_l)

    @property
    def total(self) -> int:
        return sum(self.counts)

    def __str__(self) -> str:
        if self.component.simply_laced:
            return f"{self.component.label}:n={self.n}"
        return f"{self.component.label}:ns={self.n_s},nl={self.n_l}"


class BranchingData(BaseModel):
    """Per-component reflection counts, in canonical component order"""
    model_config = ConfigDict(frozen=True)

    components: Tuple[ComponentBranching, ...]

    @property
    def total(self) -> int:
        return sum(c.total for c in self.components)

    @property
    def class_budget(self) -> Tuple[int, ...]:
        """Counts flattened over reflection classes in canonical order"""
        return tuple(k for c in self.components for k in c.counts)

    def __str__(self) -> str:
        return ";".join(str(c) for c in self.components)
