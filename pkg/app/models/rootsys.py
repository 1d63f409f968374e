"""
Pydantic models for root system specifications
"""
from typing import List, Literal, Tuple

from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

Family = Literal["A", "B", "C", "D", "E", "F", "G"]

SIMPLY_LACED = frozenset("ADE")


class Component(BaseModel):
    """An irreducible component (family, rank)"""
    model_config = ConfigDict(frozen=True)

    family: Family = Field(..., description="Cartan family letter")
    rank: int = Field(..., ge=1, description="Rank of the component")

    @model_validator(mode="after")
    def check_rank(self) -> "Component":
        family, rank = self.family, self.rank
        allowed = {
            "A": rank >= 1,
            "B": rank >= 2,
            "C": rank >= 2,
            "D": rank >= 3,
            "E": rank in (6, 7, 8),
            "F": rank == 4,
            "G": rank == 2,
        }[family]
        if not allowed:
            raise ValueError(f"invalid rank {rank} for family {family}")
        return self

    @property
    def label(self) -> str:
        return f"{self.family}{self.rank}"

    @property
    def simply_laced(self) -> bool:
        return self.family in SIMPLY_LACED

    @property
    def short_long_simple_counts(self) -> Tuple[int, int]:
        """(r_s, r_l): short and long nodes of the Dynkin diagram"""
        r = self.rank
        return {
            "B": (1, r - 1),
            "C": (r - 1, 1),
            "F": (2, 2),
            "G": (1, 1),
        }.get(self.family, (r, 0))


class RootSystemSpec(BaseModel):
    """A possibly reducible root system, components in canonical order"""
    model_config = ConfigDict(frozen=True)

    components: Tuple[Component, ...] = Field(..., description="Irreducible components")

    @field_validator("components")
    @classmethod
    def sort_components(cls, value: Tuple[Component, ...]) -> Tuple[Component, ...]:
        if not value:
            raise ValueError("a root system needs at least one component")
        return tuple(sorted(value, key=lambda c: (c.family, c.rank)))

    @property
    def rank(self) -> int:
        return sum(c.rank for c in self.components)

    @property
    def label(self) -> str:
        return "+".join(c.label for c in self.components)

    def __str__(self) -> str:
        return self.label


class ComponentPayload(BaseModel):
    family: Family
    rank: int


class RootSystemPayload(BaseModel):
    """JSON form of a constructed root system"""
    components: List[ComponentPayload]
    rank: int
    cartan: List[List[int]]
    gram: List[List[int]]
    positive_roots: List[List[int]]
    roots: List[List[int]]
    length_classes: List[Literal["short", "long"]] = Field(
        ..., description="Length class of each positive root, same order"
    )
    dominant_short: List[List[int]] = Field(..., description="Lambda per component")
