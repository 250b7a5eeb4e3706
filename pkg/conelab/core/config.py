from fractions import Fraction
from typing import List

from pydantic_settings import BaseSettings


class Settings(BaseSettings):
    APP_NAME: str = "Conelab"
    APP_VERSION: str = "0.1.0"
    LOG_LEVEL: str = "WARNING"

    # Where `run` writes artifacts when no --out is given
    OUTPUT_DIR: str = "runs"

    # Seed used whenever a sampled mode is entered without an explicit seed
    DEFAULT_SEED: int = 0

    # Metric core budgets
    DELTA_EXHAUSTIVE_BUDGET: int = 300     # O(n^4) four-point scan refuses larger graphs
    DELTA_SAMPLE_COUNT: int = 20000        # quadruples drawn in sampled mode
    SLIM_BRUTE_FORCE_BUDGET: int = 30      # exact slim-triangle constant over all geodesics
    PAIR_BUDGET: int = 250000              # vertex pairs measured before sampling kicks in

    # Quasi-parameter search lattice
    QUASI_LAMBDA_LATTICE: str = "1,9/8,5/4,3/2,2,3,4"
    QUASI_EPS_MAX_DENOMINATOR: int = 8

    # Cone-off metadata calibration
    CALIBRATION_PAIRS: int = 64

    # Group engines
    BALL_BUDGET: int = 200000              # max elements enumerated by any ball builder
    PHI_INVERSE_RADIUS: int = 4            # search radius for inverse images of generators
    PHI_INJECTIVITY_RADIUS: int = 3        # ball on which automorphisms are checked injective
    LOCAL_MAP_SCAN_RADIUS: int = 3         # collision scan for local maps of complexes
    DISTORTION_SEARCH_K: int = 4           # exact ambient length search up to this power

    # Boundary diagnostics thresholds
    CLASSIFY_WINDOW_DIVISOR: int = 3       # window = floor(prefix length / divisor)
    STALL_GAIN: int = 1                    # minimal tail-infimum gain over the final third
    PROPERNESS_PROBE_M: int = 2            # small M at which non-properness is judged

    def get_lambda_lattice(self) -> List[Fraction]:
        """
        Parse the quasi-parameter lambda lattice.

        Returns:
            Sorted list of distinct rationals, all >= 1

        Examples:
            >>> settings.get_lambda_lattice()[:3]
            [Fraction(1, 1), Fraction(9, 8), Fraction(5, 4)]
        """
        values = {Fraction(item.strip()) for item in self.QUASI_LAMBDA_LATTICE.split(",") if item.strip()}
        lattice = sorted(v for v in values if v >= 1)
        if not lattice or lattice[0] != 1:
            lattice.insert(0, Fraction(1))
        return lattice

    class Config:
        env_file = ".env"
        extra = "ignore"  # Ignore extra fields instead of raising an error


settings = Settings()
