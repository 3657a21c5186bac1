"""
Model-file schema
"""
from typing import List, Optional, Tuple

from pydantic import BaseModel, ConfigDict, Field, field_validator


class ModelFile(BaseModel):
    """
    On-disk description of a linear open system and its initial Gaussian state

    Complex coupling entries are two-element [re, im] arrays. Strict mode
    keeps numbers from being smuggled in as strings.
    """

    model_config = ConfigDict(extra="forbid", strict=True)

    n_modes: int = Field(..., description="Number of modes N")
    hamiltonian: List[List[float]] = Field(..., description="Real symmetric 2N×2N matrix M")
    coupling: List[List[Tuple[float, float]]] = Field(
        ..., description="K×2N coupling matrix C as [re, im] pairs"
    )
    initial_mean: Optional[List[float]] = Field(None, description="Initial ⟨x̂⟩, default zeros")
    initial_cov: Optional[List[List[float]]] = Field(None, description="Initial V, default I/2")
    labels: Optional[List[str]] = Field(None, description="Free-form annotations")
    quadrature_ordering: str = Field("block", description="Must be 'block': (q₁…q_N, p₁…p_N)")

    @field_validator("quadrature_ordering")
    @classmethod
    def _block_ordering_only(cls, value: str) -> str:
        if value == "interleaved":
            raise ValueError(
                "interleaved ordering (q1, p1, q2, p2, ...) is not supported; "
                "reorder to block form (q1..qN, p1..pN)"
            )
        if value != "block":
            raise ValueError(f"unknown quadrature ordering '{value}'; expected 'block'")
        return value
