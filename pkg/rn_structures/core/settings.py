from pydantic import BaseModel, ConfigDict, Field


class SamplingSettings(BaseModel):
    model_config = ConfigDict(extra="forbid", frozen=True)

    max_denominator: int = Field(default=10, ge=1)
    numerator_bound: int = Field(default=9, ge=1)
    max_attempts: int = Field(default=200, ge=1)


class SearchBudget(BaseModel):
    model_config = ConfigDict(extra="forbid", frozen=True)

    grid_bound: int = Field(default=3, ge=1)
    random_trials: int = Field(default=2000, ge=0)
    random_height: int = Field(default=5, ge=1)
    max_nodes: int = Field(default=10_000, ge=1)
    seed: int = 0


class IndependenceSettings(BaseModel):
    model_config = ConfigDict(extra="forbid", frozen=True)

    trials: int = Field(default=5, ge=1)
    height: int = Field(default=100, ge=1)
    max_retries: int = Field(default=3, ge=0)


class VerificationSettings(BaseModel):
    model_config = ConfigDict(extra="forbid", frozen=True)

    hierarchy_depth: int = Field(default=4, ge=1)
    workers: int | None = Field(default=None, ge=1)
    vary_algebra: bool = False
    sampling: SamplingSettings = SamplingSettings()
