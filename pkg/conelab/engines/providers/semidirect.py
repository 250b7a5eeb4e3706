"""
Semidirect products Z x| F_n with t w t^-1 = phi(w).

Normal form is t^k . u with u a reduced word of the free fiber. Letters are
pushed through t using  u t = t phi^-1(u)  and  u t^-1 = t^-1 phi(u).
"""
import logging
from collections import deque
from typing import Dict, Hashable, Iterable, List, Mapping, Optional, Sequence, Tuple

from conelab.core.config import settings
from conelab.engines.base import BaseWordEngine, Letters
from conelab.engines.providers.cyclic import CyclicFreeProductEngine
from conelab.models.group import SubgroupSpec
from conelab.models.types import Letter
from conelab.utils.errors import PhiInverseUnavailableError, SchemaError, UnsupportedSubgroupError

logger = logging.getLogger(__name__)


class SemidirectEngine(BaseWordEngine):
    """Word problem of Z x| F_n for an automorphism given on generators."""

    def __init__(
        self,
        free_generators: Sequence[str],
        phi: Mapping[str, str],
        stable_letter: str = "t",
        inverse_radius: Optional[int] = None,
        injectivity_radius: Optional[int] = None,
    ):
        if stable_letter in free_generators:
            raise SchemaError(f"Stable letter {stable_letter!r} clashes with a fiber generator")
        super().__init__(tuple(free_generators) + (stable_letter,))
        self.stable = stable_letter
        self.fiber = CyclicFreeProductEngine(free_generators, {})
        if set(phi) != set(free_generators):
            raise SchemaError(f"phi must be given on exactly {list(free_generators)}, got {sorted(phi)}")
        self.images: Dict[str, Letters] = {}
        for symbol in free_generators:
            image = self.fiber.reduce(self.fiber.parse(phi[symbol]))
            if not image:
                raise SchemaError(f"phi({symbol}) reduces to the identity")
            self.images[symbol] = image
        self._check_injective(settings.PHI_INJECTIVITY_RADIUS if injectivity_radius is None else injectivity_radius)
        self.inverse_images = self._invert(settings.PHI_INVERSE_RADIUS if inverse_radius is None else inverse_radius)

    def order(self, symbol: str) -> int:
        return 0

    def fiber_ball(self, radius: int) -> List[Letters]:
        """Reduced fiber words of length <= radius, in breadth-first order."""
        steps = self.fiber.step_letters()
        seen = {(): None}
        frontier = deque([()])
        ordered: List[Letters] = [()]
        while frontier:
            word = frontier.popleft()
            if len(word) == radius:
                continue
            for step in steps:
                if word and word[-1] == (step[0], -step[1]):
                    continue
                nxt = word + (step,)
                if nxt not in seen:
                    seen[nxt] = None
                    ordered.append(nxt)
                    frontier.append(nxt)
        return ordered

    def _check_injective(self, radius: int) -> None:
        images = {}
        for word in self.fiber_ball(radius):
            image = self.apply_phi(word)
            if image in images:
                raise SchemaError(
                    f"phi is not injective on the radius-{radius} ball: "
                    f"{images[image]} and {word} have the same image"
                )
            images[image] = word

    def _invert(self, radius: int) -> Dict[str, Letters]:
        """Shortest fiber words mapped by phi onto each generator."""
        wanted = {((symbol, 1),): symbol for symbol in self.fiber.generators}
        found: Dict[str, Letters] = {}
        for word in self.fiber_ball(radius):
            symbol = wanted.get(self.apply_phi(word))
            if symbol is not None and symbol not in found:
                found[symbol] = word
        missing = sorted(set(self.fiber.generators) - set(found))
        if missing:
            logger.warning("phi^-1 of %s not found within radius %d", missing, radius)
        return found

    def apply_phi(self, word: Iterable[Letter]) -> Letters:
        letters: List[Letter] = []
        for symbol, exponent in word:
            image = self.images[symbol]
            letters.extend(image if exponent > 0 else self.fiber.inverse(image))
        return self.fiber.reduce(letters)

    def apply_phi_inverse(self, word: Iterable[Letter]) -> Letters:
        letters: List[Letter] = []
        for symbol, exponent in word:
            image = self.inverse_images.get(symbol)
            if image is None:
                raise PhiInverseUnavailableError(
                    f"phi^-1({symbol}) lies beyond the precomputed ball; raise PHI_INVERSE_RADIUS"
                )
            letters.extend(image if exponent > 0 else self.fiber.inverse(image))
        return self.fiber.reduce(letters)

    def split(self, letters: Iterable[Letter]) -> Tuple[int, Letters]:
        """(k, u) with the element equal to t^k . u."""
        power = 0
        fiber: List[Letter] = []
        for symbol, exponent in self.check_letters(letters):
            if symbol == self.stable:
                word = tuple(fiber)
                fiber = list(self.apply_phi_inverse(word) if exponent > 0 else self.apply_phi(word))
                power += exponent
            elif fiber and fiber[-1] == (symbol, -exponent):
                fiber.pop()
            else:
                fiber.append((symbol, exponent))
        return power, tuple(fiber)

    def reduce(self, letters: Iterable[Letter]) -> Letters:
        power, fiber = self.split(letters)
        sign = 1 if power > 0 else -1
        return tuple((self.stable, sign) for _ in range(abs(power))) + fiber

    def member(self, letters: Letters, subgroup: SubgroupSpec) -> bool:
        kind, symbols = self.classify(subgroup)
        if kind == "whole":
            return True
        power, fiber = self.split(letters)
        if kind == "trivial":
            return power == 0 and not fiber
        if kind == "fiber":
            return power == 0
        if self.stable in symbols:
            raise UnsupportedSubgroupError(
                "Subgroups containing the stable letter but not the whole fiber are not supported"
            )
        return power == 0 and all(symbol in symbols for symbol, _ in fiber)

    def is_finite_subgroup(self, subgroup: SubgroupSpec) -> bool:
        kind, _ = self.classify(subgroup)
        return kind == "trivial"

    def coset_key(self, letters: Letters, subgroup: SubgroupSpec) -> Optional[Hashable]:
        kind, symbols = self.classify(subgroup)
        if kind == "fiber":
            return self.split(letters)[0]
        if kind != "subset" or self.stable in symbols:
            return super().coset_key(letters, subgroup)
        power, fiber = self.split(letters)
        return power, self.fiber.coset_key(fiber, SubgroupSpec(generators=tuple(sorted(symbols))))
