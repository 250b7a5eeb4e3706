"""
Free products of cyclic groups, free groups included (every order infinite).
"""
from typing import Dict, Hashable, Iterable, List, Mapping, Optional, Sequence

from conelab.engines.base import BaseWordEngine, Letters
from conelab.models.group import SubgroupSpec
from conelab.models.types import Letter
from conelab.utils.errors import UnsupportedSubgroupError


def _normalize_exponent(exponent: int, order: int) -> int:
    """Exponent representative in (-order/2, order/2]; unchanged for infinite order."""
    if order == 0:
        return exponent
    residue = exponent % order
    if residue > order // 2:
        residue -= order
    return residue


class CyclicFreeProductEngine(BaseWordEngine):
    """Syllable reduction with exponents taken modulo the generator orders."""

    def __init__(
        self,
        generators: Sequence[str],
        orders: Mapping[str, int],
        aliases: Optional[Dict[str, str]] = None,
    ):
        super().__init__(generators, aliases)
        self.orders = {symbol: int(orders.get(symbol, 0)) for symbol in self.generators}

    def order(self, symbol: str) -> int:
        return self.orders[self.canonical(symbol)]

    def syllables(self, letters: Iterable[Letter]) -> List[List]:
        """Reduced [symbol, exponent] syllables of a word."""
        stack: List[List] = []
        for symbol, exponent in self.check_letters(letters):
            order = self.orders[symbol]
            if stack and stack[-1][0] == symbol:
                merged = _normalize_exponent(stack[-1][1] + exponent, order)
                if merged == 0:
                    stack.pop()
                else:
                    stack[-1][1] = merged
            else:
                normalized = _normalize_exponent(exponent, order)
                if normalized:
                    stack.append([symbol, normalized])
        return stack

    def reduce(self, letters: Iterable[Letter]) -> Letters:
        result: List[Letter] = []
        for symbol, exponent in self.syllables(letters):
            sign = 1 if exponent > 0 else -1
            result.extend((symbol, sign) for _ in range(abs(exponent)))
        return tuple(result)

    def member(self, letters: Letters, subgroup: SubgroupSpec) -> bool:
        kind, symbols = self.classify(subgroup)
        if kind == "whole":
            return True
        if kind == "trivial":
            return not self.reduce(letters)
        if kind == "fiber":
            raise UnsupportedSubgroupError("Free products of cyclic groups have no fiber subgroup")
        return all(symbol in symbols for symbol, _ in self.reduce(letters))

    def is_finite_subgroup(self, subgroup: SubgroupSpec) -> bool:
        kind, symbols = self.classify(subgroup)
        if kind == "trivial":
            return True
        if kind == "fiber":
            raise UnsupportedSubgroupError("Free products of cyclic groups have no fiber subgroup")
        if kind == "whole":
            symbols = frozenset(self.generators)
        return len(symbols) == 0 or (len(symbols) == 1 and self.orders[next(iter(symbols))] > 0)

    def coset_key(self, letters: Letters, subgroup: SubgroupSpec) -> Optional[Hashable]:
        """Strip the trailing letters that lie in a free-factor subgroup."""
        kind, symbols = self.classify(subgroup)
        if kind != "subset":
            return super().coset_key(letters, subgroup)
        end = len(letters)
        while end and letters[end - 1][0] in symbols:
            end -= 1
        return tuple(letters[:end])


class MergedCyclicEngine(CyclicFreeProductEngine):
    """
    Amalgam of two free products of cyclics over identified generators.

    The identified right-hand symbols become aliases of their left-hand
    partners, so the result is again a free product of cyclics.
    """

    def __init__(
        self,
        left: CyclicFreeProductEngine,
        right: CyclicFreeProductEngine,
        identifications: Sequence[tuple],
    ):
        aliases = dict(left.aliases)
        renamed = {}
        for left_symbol, right_symbol in identifications:
            renamed[right.canonical(right_symbol)] = left.canonical(left_symbol)
        for alias, target in right.aliases.items():
            aliases[alias] = renamed.get(target, target)
        generators = list(left.generators)
        orders = dict(left.orders)
        for symbol in right.generators:
            if symbol in renamed:
                aliases[symbol] = renamed[symbol]
            else:
                generators.append(symbol)
                orders[symbol] = right.orders[symbol]
        super().__init__(generators, orders, aliases)
