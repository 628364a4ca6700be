"""Family generators for Montel-type experiments."""

from dataclasses import dataclass, field

from ..errors import MalformedDocument, NumericPrecondition
from ..polynomial import GDPolynomial
from .drifting import DriftingFrequencyFamily
from .shared import SharedFrequencyFamily
from .translates import VerticalTranslateFamily

GENERATORS = {
    "shared-frequency": SharedFrequencyFamily,
    "vertical-translates": VerticalTranslateFamily,
    "drifting-frequency": DriftingFrequencyFamily,
}


@dataclass(frozen=True)
class FamilySpec:
    """Generator kind, its keyword parameters and the seed used for randomness."""
    generator: str
    params: dict = field(default_factory=dict)
    seed: int = 0


def make_generator(spec: FamilySpec):
    try:
        cls = GENERATORS[spec.generator]
    except KeyError:
        raise MalformedDocument(
            f"Unknown generator {spec.generator!r}; expected one of {sorted(GENERATORS)}"
        ) from None
    params = dict(spec.params)
    if cls is not DriftingFrequencyFamily:
        params.setdefault("seed", spec.seed)
    try:
        return cls(**params)
    except TypeError as e:
        raise MalformedDocument(f"Bad parameters for {spec.generator}: {e}") from None


def build_family(spec: FamilySpec) -> list[GDPolynomial]:
    """Generate the family and check the declared uniform bound sum |c| <= M."""
    generator = make_generator(spec)
    family = generator.generate()
    bound = generator.bound
    for i, member in enumerate(family):
        if member.coefficient_sum > bound * (1 + 1e-12):
            raise NumericPrecondition(
                f"Member {i} has sum |c| = {member.coefficient_sum} above the bound {bound}"
            )
    return family


__all__ = [
    "DriftingFrequencyFamily",
    "FamilySpec",
    "SharedFrequencyFamily",
    "VerticalTranslateFamily",
    "build_family",
    "make_generator",
]
