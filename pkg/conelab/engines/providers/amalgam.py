"""
Free products of arbitrary engines (amalgams over the trivial group).

Normal form is the alternating syllable sequence; each syllable is reduced
by its own factor engine.
"""
from typing import Dict, Hashable, Iterable, List, Optional, Sequence, Tuple

from conelab.engines.base import BaseWordEngine, Letters
from conelab.engines.providers.semidirect import SemidirectEngine
from conelab.models.group import SubgroupSpec
from conelab.models.types import Letter
from conelab.utils.errors import UnsupportedPatternError, UnsupportedSubgroupError

Syllable = Tuple[int, Letters]


class FreeProductEngine(BaseWordEngine):
    """Syllable normal form over two or more factor engines with disjoint alphabets."""

    def __init__(self, factors: Sequence[BaseWordEngine]):
        generators: List[str] = []
        aliases: Dict[str, str] = {}
        self.owner: Dict[str, int] = {}
        for index, factor in enumerate(factors):
            for symbol in list(factor.generators) + list(factor.aliases):
                if symbol in self.owner:
                    raise UnsupportedPatternError(
                        f"Symbol {symbol!r} appears in two free factors; rename or identify it"
                    )
                self.owner[symbol] = index
            generators.extend(factor.generators)
            aliases.update(factor.aliases)
        super().__init__(generators, aliases)
        self.factors = list(factors)

    def order(self, symbol: str) -> int:
        return self.factors[self.owner[symbol]].order(symbol)

    def syllables(self, letters: Iterable[Letter]) -> List[Syllable]:
        """Alternating (factor index, reduced factor word) syllables."""
        runs: List[List] = []
        for letter in self.check_letters(letters):
            owner = self.owner[letter[0]]
            if runs and runs[-1][0] == owner:
                runs[-1][1].append(letter)
            else:
                runs.append([owner, [letter]])
        result: List[Syllable] = []
        for owner, run in runs:
            factor = self.factors[owner]
            word = factor.reduce(run)
            if not word:
                continue
            if result and result[-1][0] == owner:
                merged = factor.reduce(result[-1][1] + word)
                if merged:
                    result[-1] = (owner, merged)
                else:
                    result.pop()
            else:
                result.append((owner, word))
        return result

    def reduce(self, letters: Iterable[Letter]) -> Letters:
        return tuple(letter for _, word in self.syllables(letters) for letter in word)

    def _split_subgroup(self, symbols) -> List[SubgroupSpec]:
        parts: List[List[str]] = [[] for _ in self.factors]
        for symbol in symbols:
            parts[self.owner[symbol]].append(symbol)
        return [SubgroupSpec(generators=tuple(part)) for part in parts]

    def _fiber_factor(self) -> int:
        for index, factor in enumerate(self.factors):
            if isinstance(factor, SemidirectEngine):
                return index
        raise UnsupportedSubgroupError("No factor carries a fiber subgroup")

    def member(self, letters: Letters, subgroup: SubgroupSpec) -> bool:
        kind, symbols = self.classify(subgroup)
        if kind == "whole":
            return True
        syllables = self.syllables(letters)
        if kind == "trivial":
            return not syllables
        if kind == "fiber":
            index = self._fiber_factor()
            if len(syllables) > 1:
                return False
            return all(owner == index and self.factors[index].member(word, subgroup) for owner, word in syllables)
        # <S_1 u S_2> is the free product of the factor pieces
        pieces = self._split_subgroup(symbols)
        return all(self.factors[owner].member(word, pieces[owner]) for owner, word in syllables)

    def is_finite_subgroup(self, subgroup: SubgroupSpec) -> bool:
        kind, symbols = self.classify(subgroup)
        if kind == "trivial":
            return True
        if kind == "fiber":
            return False
        if kind == "whole":
            pieces = [SubgroupSpec(tag="whole") for _ in self.factors]
        else:
            pieces = self._split_subgroup(symbols)
        nontrivial = [
            (factor, piece) for factor, piece in zip(self.factors, pieces)
            if piece.tag == "whole" or piece.generators
        ]
        if len(nontrivial) > 1:
            return False
        return all(factor.is_finite_subgroup(piece) for factor, piece in nontrivial)

    def coset_key(self, letters: Letters, subgroup: SubgroupSpec) -> Optional[Hashable]:
        """Strip trailing syllables lying in the subgroup piece of their factor."""
        kind, symbols = self.classify(subgroup)
        if kind != "subset":
            return super().coset_key(letters, subgroup)
        pieces = self._split_subgroup(symbols)
        syllables = self.syllables(letters)
        while syllables:
            owner, word = syllables[-1]
            piece = pieces[owner]
            if not piece.generators:
                break
            if self.factors[owner].member(word, piece):
                syllables.pop()
                continue
            key = self.factors[owner].coset_key(word, piece)
            if key is None:
                return None
            return tuple(syllables[:-1]), owner, key
        return tuple(syllables), None, None
