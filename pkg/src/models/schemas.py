from pathlib import Path
from typing import Dict, Literal, Optional

from pydantic import BaseModel, Field

Command = Literal["proof1", "proof2", "proof3", "proof4", "all", "estimate-basel"]


class McEstimate(BaseModel):
    mean: float = Field(..., description="Point estimate")
    stderr: float = Field(..., ge=0.0, description="Standard error of the mean")
    n: int = Field(..., ge=1, description="Number of samples behind the estimate")
    seed: int = Field(0, ge=0, description="Seed of the random streams that produced the samples")

    class Config:
        json_schema_extra = {
            "example": {
                "mean": 0.6245,
                "stderr": 0.0005,
                "n": 1000000,
                "seed": 0
            }
        }


class GoodnessOfFit(BaseModel):
    statistic: float = Field(..., ge=0.0, description="Test statistic (KS D_n or Pearson chi-square)")
    p_value: float = Field(..., ge=0.0, le=1.0, description="Asymptotic p-value")
    n: int = Field(..., ge=1, description="Sample count")
    test_kind: Literal["KS", "ChiSquare"] = Field(..., description="Which test produced the statistic")

    class Config:
        json_schema_extra = {
            "example": {
                "statistic": 0.0031,
                "p_value": 0.29,
                "n": 100000,
                "test_kind": "KS"
            }
        }


class RunConfig(BaseModel):
    command: Optional[Command] = Field(None, description="Experiment to run")
    samples: Optional[int] = Field(None, ge=1, description="Monte Carlo sample count (per-check default when unset)")
    seed: int = Field(0, ge=0, lt=2**64, description="Seed of the random streams")
    dt: float = Field(1e-4, gt=0.0, description="Time step of discretized paths")
    trunc: Optional[int] = Field(None, ge=1, description="Fixed truncation N for series and products")
    eps: float = Field(1e-8, gt=0.0, description="Target tail bound when no fixed truncation is given")
    tolerances: Dict[str, float] = Field(default_factory=dict, description="Per-check tolerance overrides")
    json_path: Optional[Path] = Field(None, description="Where to write the JSON reports")
    csv_path: Optional[Path] = Field(None, description="Where to write plot series")
    workers: int = Field(1, ge=1, description="Worker threads for Monte Carlo checks")

    def samples_or(self, default: int) -> int:
        return self.samples if self.samples is not None else default

    def tolerance_or(self, check_name: str, default: float) -> float:
        return self.tolerances.get(check_name, default)

    class Config:
        json_schema_extra = {
            "example": {
                "command": "proof1",
                "samples": 100000,
                "seed": 0,
                "dt": 0.0001,
                "trunc": None,
                "eps": 1e-8,
                "tolerances": {"strip_exit_time_mc": 0.02},
                "json_path": "out.json",
                "csv_path": None,
                "workers": 4
            }
        }


class VerificationReport(BaseModel):
    check_name: str = Field(..., description="Name of the check")
    anchor: str = Field(..., description="Identity or claim the check verifies")
    computed_value: float = Field(..., description="Value produced by the package")
    reference_value: float = Field(..., description="Exact or analytic reference value")
    absolute_error: float = Field(..., ge=0.0, description="|computed - reference|")
    relative_error: float = Field(..., ge=0.0, description="Absolute error over |reference| (absolute when reference is 0)")
    tolerance: float = Field(..., ge=0.0, description="Largest accepted absolute error")
    passed: bool = Field(..., alias="pass", description="True iff absolute_error <= tolerance")
    runtime_ms: float = Field(0.0, ge=0.0, description="Wall time spent on the check")
    seed: int = Field(0, ge=0, description="Seed used by the check")
    n: int = Field(0, ge=0, description="Samples or terms behind the computed value")

    class Config:
        populate_by_name = True
        json_schema_extra = {
            "example": {
                "check_name": "basel_from_odd",
                "anchor": "sum 1/(2n-1)^2 = pi^2/8, times 4/3",
                "computed_value": 1.6449340535,
                "reference_value": 1.6449340668,
                "absolute_error": 1.3e-8,
                "relative_error": 8.1e-9,
                "tolerance": 1.4e-8,
                "pass": True,
                "runtime_ms": 210.0,
                "seed": 0,
                "n": 25000001
            }
        }
