from typing import Dict, Literal, Optional, Tuple

from .types import FrozenModel, Rational, VertexId

RayKind = Literal["horizontal", "vertical", "undetermined"]

CtVerdict = Literal["consistent", "stalled", "inconclusive"]


class DivergenceProfile(FrozenModel):
    """
    Gromov products (x_m.x_n) for n <= m, with the tail infimum
    inf_{m, n >= k} (x_m.x_n) for every k.
    """
    basepoint: VertexId
    table: Tuple[Tuple[int, int, Rational], ...]
    tail_infimum: Tuple[Rational, ...]
    verdict: Literal["diverging", "stalled"]
    stall_gain: Rational


class RayClass(FrozenModel):
    kind: RayKind
    set_id: Optional[str] = None
    window: Rational
    extended_diameter: Rational
    projection_diameters: Dict[str, Rational]


class MitraProfile(FrozenModel):
    """N -> M(N), contiguous from N = 0 up to the last N with a qualifying pair."""
    basepoint: VertexId
    table: Tuple[Tuple[int, Rational], ...]
    pair_count: int
    exhaustive: bool
    seed: Optional[int] = None


class PropernessProfile(FrozenModel):
    """M -> rho(M) = max source distance over pairs at target distance <= M."""
    table: Tuple[Tuple[int, Rational], ...]
    probe_m: int
    source_radius: int
    non_proper: bool


class CtProbeRow(FrozenModel):
    index: int
    y_curve: Tuple[Rational, ...]
    x_curve: Tuple[Rational, ...]
    verdict: CtVerdict
    asymmetric: bool


class CtProbe(FrozenModel):
    rows: Tuple[CtProbeRow, ...]
    stall_gain: Rational


class ExchangeRow(FrozenModel):
    index: int
    in_y: RayClass
    in_x: RayClass
    # None when the image is not vertical in X
    holds: Optional[bool] = None


class ExchangeProbe(FrozenModel):
    rows: Tuple[ExchangeRow, ...]
    label: str = "finite evidence, not equivalence"
