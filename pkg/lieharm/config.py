from __future__ import annotations

from dataclasses import dataclass, field
from typing import List, Optional

# --- Configuration ---
TOOL_VERSION = "0.4.0"
REPORT_SCHEMA = "lieharm-report/1"
CATALOG_ENV_VAR = "LIEHARM_CATALOG"

# Residual thresholds
CLOSURE_TOL = 1e-12
IDENTITY_TOL = 1e-10
CLUSTER_TOL = 1e-8
POSITIVITY_TOL = 1e-9
ROOT_MATCH_TOL = 1e-8
SPAN_TOL = 1e-9

# Rational snapping of root coordinates and basis entries
SNAP_MAX_DENOMINATOR = 48
SNAP_TOL = 1e-6

# Finite differences
DEFAULT_STEP = 1e-3
MIN_STEP = 1e-6
NESTED_INNER_FACTOR = 10.0
NESTED_OUTER_FACTOR = 50.0

# Sampling
DEFAULT_SAMPLES = 100
DEFAULT_SEED = 42
SAMPLE_BOX = 2.0

# Acceptance tolerances
MORPHISM_TOL = 1e-5
POWER_TOL = 1e-4
CURVATURE_TOL = 1e-8
CURVATURE_MIN_SLACK = 0.02
CURVATURE_SAMPLES = 400

SUITES = ("structure", "lemma1", "submersion", "morphism", "functions")


@dataclass
class VerifyConfig:
    checks: List[str] = field(default_factory=lambda: list(SUITES))
    betas: Optional[List[int]] = None   # None means every simple root
    samples: int = DEFAULT_SAMPLES
    step: float = DEFAULT_STEP
    tol: float = MORPHISM_TOL
    seed: int = DEFAULT_SEED
    identity_tol: float = IDENTITY_TOL

    @property
    def intertwining_samples(self) -> int:
        return max(1, min(self.samples, 50))

    @property
    def nested_samples(self) -> int:
        return max(1, min(self.samples, 20))
