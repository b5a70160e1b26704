from pydantic import BaseModel, ConfigDict, Field


class ContactParams(BaseModel):
    """Penalty stiffness, viscous damping and Coulomb friction of a contact."""
    k_n: float = Field(gt=0.0)
    k_t: float = Field(gt=0.0)
    gamma_n: float = Field(default=0.0, ge=0.0)
    gamma_t: float = Field(default=0.0, ge=0.0)
    mu: float = Field(default=0.5, ge=0.0)

    model_config = ConfigDict(frozen=True, extra="forbid")


class ContactParamsOverride(BaseModel):
    """Partial contact parameters from a scene file; missing values use the heuristics."""
    k_n: float | None = Field(default=None, gt=0.0)
    k_t: float | None = Field(default=None, gt=0.0)
    gamma_n: float | None = Field(default=None, ge=0.0)
    gamma_t: float | None = Field(default=None, ge=0.0)
    mu: float = Field(default=0.5, ge=0.0)

    model_config = ConfigDict(extra="forbid")
