"""
Base word-problem engine.
Every presentation class implements this interface.
"""

import re
from abc import ABC, abstractmethod
from typing import Dict, FrozenSet, Hashable, Iterable, List, Optional, Sequence, Tuple

from conelab.models.group import SubgroupSpec
from conelab.models.types import Letter
from conelab.utils.errors import UnknownSymbolError, UnsupportedSubgroupError

Letters = Tuple[Letter, ...]

_TOKEN = re.compile(r"^(?P<body>[^\^]+?)(?:\^\{?(?P<exp>-?\d+)\}?)?$")


class BaseWordEngine(ABC):
    """
    Abstract base class for word-problem engines.

    Engines work on raw letter tuples; the Word model wraps them at the
    service boundary.
    """

    def __init__(self, generators: Sequence[str], aliases: Optional[Dict[str, str]] = None):
        """
        Initialize the engine.

        Args:
            generators: Canonical generator symbols, in shortlex order
            aliases: Extra input symbols rewritten to canonical ones
        """
        self.generators: Tuple[str, ...] = tuple(generators)
        self.aliases: Dict[str, str] = dict(aliases or {})
        self._rank = {symbol: index for index, symbol in enumerate(self.generators)}

    @abstractmethod
    def reduce(self, letters: Iterable[Letter]) -> Letters:
        """Normal form of a word over the alphabet."""

    @abstractmethod
    def order(self, symbol: str) -> int:
        """Order of a generator, 0 for infinite."""

    @abstractmethod
    def member(self, letters: Letters, subgroup: SubgroupSpec) -> bool:
        """
        Exact membership of a normal form in a subgroup.

        Raises:
            UnsupportedSubgroupError: If membership is not decidable here
        """

    @abstractmethod
    def is_finite_subgroup(self, subgroup: SubgroupSpec) -> bool:
        """Whether the subgroup is finite."""

    def coset_key(self, letters: Letters, subgroup: SubgroupSpec) -> Optional[Hashable]:
        """
        Canonical key of the coset gH, or None when only pairwise membership works.

        Two elements share a key exactly when they lie in the same left coset.
        """
        kind, _ = self.classify(subgroup)
        if kind == "trivial":
            return letters
        if kind == "whole":
            return ()
        return None

    def classify(self, subgroup: SubgroupSpec) -> Tuple[str, FrozenSet[str]]:
        """
        Kind of a subgroup spec: "trivial", "whole", "fiber" or "subset".

        Generator subsets that are empty or cover every generator are reported
        as trivial or whole.
        """
        if subgroup.tag is not None:
            return subgroup.tag, frozenset()
        symbols = frozenset(self.resolve_generators(subgroup))
        if not symbols:
            return "trivial", symbols
        if symbols >= frozenset(self.generators):
            return "whole", symbols
        return "subset", symbols

    @property
    def alphabet(self) -> FrozenSet[str]:
        return frozenset(self.generators) | frozenset(self.aliases)

    def canonical(self, symbol: str) -> str:
        return self.aliases.get(symbol, symbol)

    def check_letters(self, letters: Iterable[Letter]) -> Letters:
        """Rewrite aliases and reject unknown symbols."""
        checked = []
        for symbol, exponent in letters:
            if symbol not in self.alphabet:
                raise UnknownSymbolError(f"Unknown symbol {symbol!r}; alphabet is {sorted(self.alphabet)}")
            checked.append((self.canonical(symbol), exponent))
        return tuple(checked)

    def resolve_generators(self, subgroup: SubgroupSpec) -> Tuple[str, ...]:
        """Canonical generator subset of a subgroup spec."""
        resolved = []
        for symbol in subgroup.generators:
            if symbol not in self.alphabet:
                raise UnsupportedSubgroupError(f"Subgroup generator {symbol!r} is not a generator")
            resolved.append(self.canonical(symbol))
        return tuple(dict.fromkeys(resolved))

    def multiply(self, left: Letters, right: Letters) -> Letters:
        return self.reduce(tuple(left) + tuple(right))

    def inverse(self, letters: Letters) -> Letters:
        return self.reduce(tuple((symbol, -exponent) for symbol, exponent in reversed(letters)))

    def conjugate(self, element: Letters, by: Letters) -> Letters:
        """by^-1 . element . by"""
        return self.reduce(self.inverse(by) + tuple(element) + tuple(by))

    def sort_key(self, letters: Letters) -> Tuple[int, Tuple[int, ...]]:
        """Shortlex key: length, then generator order with g before g^-1."""
        return len(letters), tuple(2 * self._rank[s] + (0 if e > 0 else 1) for s, e in letters)

    def lex_key(self, letters: Letters) -> Tuple[int, ...]:
        """Lexicographic key over the same letter order; a prefix sorts first."""
        return self.sort_key(letters)[1]

    def step_letters(self, generators: Optional[Sequence[str]] = None) -> List[Letter]:
        """Letters multiplied on the right to walk Cayley graph edges."""
        steps: List[Letter] = []
        for symbol in generators or self.generators:
            canonical = self.canonical(symbol)
            if canonical not in self._rank:
                raise UnknownSymbolError(f"Unknown generator {symbol!r}")
            steps.append((canonical, 1))
            if self.order(canonical) != 2:
                steps.append((canonical, -1))
        return list(dict.fromkeys(steps))

    def parse(self, text: str) -> Letters:
        """
        Parse a word.

        Tokens are separated by whitespace; each token is a generator name with
        an optional exponent (x^-1, x^{3}, x⁻¹), the identity "1", or a run of
        single-character generators such as "dbdb".

        Raises:
            UnknownSymbolError: On any symbol outside the alphabet
        """
        letters: List[Letter] = []
        for token in text.replace("⁻¹", "^-1").split():
            match = _TOKEN.match(token)
            if match is None:
                raise UnknownSymbolError(f"Cannot parse token {token!r}")
            body, exp = match.group("body"), int(match.group("exp") or 1)
            if body in self.alphabet:
                symbols = [body]
            elif body == "1":
                continue
            elif all(char in self.alphabet for char in body):
                symbols = list(body)
            else:
                raise UnknownSymbolError(f"Unknown symbol in {token!r}; alphabet is {sorted(self.alphabet)}")
            letters.extend((self.canonical(s), 1) for s in symbols[:-1])
            sign = 1 if exp > 0 else -1
            letters.extend((self.canonical(symbols[-1]), sign) for _ in range(abs(exp)))
        return tuple(letters)

    def __repr__(self):
        """String representation of the engine."""
        return f"{self.__class__.__name__}(generators={self.generators})"


__all__ = ["BaseWordEngine", "Letters"]
