"""
Group-level operations over the word engines: normal forms, Cayley balls,
coset graphs, height probes and fiber distortion.
"""
import logging
from collections import deque
from fractions import Fraction
from typing import Any, Dict, Hashable, List, Optional, Sequence, Tuple, Union

import numpy as np

from conelab.core.config import settings
from conelab.engines import BaseWordEngine, Letters, get_engine
from conelab.engines.providers import SemidirectEngine
from conelab.models.graph import MetricGraph
from conelab.models.group import (
    CayleyBall,
    CosetGraph,
    DistortionProfile,
    DistortionRow,
    GroupScenario,
    HeightProbe,
    SubgroupSpec,
    Word,
    format_letters,
)
from conelab.utils.errors import BudgetExceededError, SchemaError

logger = logging.getLogger(__name__)

WordLike = Union[Word, str, Sequence[Tuple[str, int]]]


def to_letters(s: GroupScenario, word: WordLike) -> Letters:
    """Letters of a Word, a word string or a letter sequence, checked against the alphabet."""
    engine = get_engine(s)
    if isinstance(word, Word):
        return engine.check_letters(word.letters)
    if isinstance(word, str):
        return engine.parse(word)
    return engine.check_letters(tuple(word))


def parse_word(s: GroupScenario, text: str) -> Word:
    return Word(letters=get_engine(s).parse(text))


def format_word(word: Union[Word, Letters]) -> str:
    return format_letters(word.letters if isinstance(word, Word) else tuple(word))


def normal_form(s: GroupScenario, w: WordLike) -> Word:
    """
    Normal form of a word.

    Raises:
        UnknownSymbolError: On a symbol outside the alphabet
        PhiInverseUnavailableError: If phi^-1 is needed beyond the precomputed ball
    """
    return Word(letters=get_engine(s).reduce(to_letters(s, w)))


def multiply(s: GroupScenario, u: WordLike, v: WordLike) -> Word:
    engine = get_engine(s)
    return Word(letters=engine.multiply(to_letters(s, u), to_letters(s, v)))


def inverse(s: GroupScenario, w: WordLike) -> Word:
    return Word(letters=get_engine(s).inverse(to_letters(s, w)))


def enumerate_ball(
    engine: BaseWordEngine,
    generators: Optional[Sequence[str]],
    radius: int,
    budget: Optional[int] = None,
) -> Tuple[List[Letters], Dict[Letters, int]]:
    """
    Breadth-first enumeration of normal forms at word length <= radius.

    Returns:
        (elements sorted shortlex, word length of each element)
    """
    if radius < 0:
        raise SchemaError(f"Radius must be >= 0, got {radius}")
    budget = settings.BALL_BUDGET if budget is None else budget
    steps = engine.step_letters(generators)
    lengths: Dict[Letters, int] = {(): 0}
    frontier = deque([()])
    while frontier:
        element = frontier.popleft()
        depth = lengths[element]
        if depth == radius:
            continue
        for step in steps:
            nxt = engine.reduce(element + (step,))
            if nxt not in lengths:
                lengths[nxt] = depth + 1
                if len(lengths) > budget:
                    raise BudgetExceededError(f"Ball of radius {radius} exceeds {budget} elements")
                frontier.append(nxt)
    elements = sorted(lengths, key=lambda w: (lengths[w], engine.sort_key(w)))
    return elements, lengths


def cayley_ball(
    s: GroupScenario,
    gens: Optional[Sequence[str]] = None,
    radius: int = 1,
    budget: Optional[int] = None,
) -> CayleyBall:
    """
    Ball of the Cayley graph with unit edges g -- g.s landing inside the ball.

    Vertex ids follow word length, then shortlex order of normal forms;
    vertex 0 is the identity.
    """
    engine = get_engine(s)
    elements, _ = enumerate_ball(engine, gens, radius, budget)
    index = {element: i for i, element in enumerate(elements)}
    edges = set()
    for i, element in enumerate(elements):
        for step in engine.step_letters(gens):
            j = index.get(engine.reduce(element + (step,)))
            if j is not None and j != i:
                edges.add((min(i, j), max(i, j)))
    graph = MetricGraph(
        vertices=len(elements),
        edges=sorted(edges),
        labels={i: format_letters(element) for i, element in enumerate(elements)},
    )
    used = tuple(engine.canonical(g) for g in gens) if gens else engine.generators
    return CayleyBall(graph=graph, elements=tuple(elements), generators=used, radius=radius)


def subgroup_membership(s: GroupScenario, subgroup: Any, w: WordLike) -> bool:
    """
    Exact membership for free-factor-generated subgroups and fibers.

    Raises:
        UnsupportedSubgroupError: For subgroup classes the engine cannot decide
    """
    engine = get_engine(s)
    letters = engine.reduce(to_letters(s, w))
    return engine.member(letters, s.subgroup(subgroup))


class CosetIndex:
    """
    Assigns ball elements to left cosets gH.

    Uses the engine's canonical coset keys when available and falls back to
    pairwise membership tests of g^-1 g' otherwise.
    """

    def __init__(self, engine: BaseWordEngine, subgroup: SubgroupSpec):
        self.engine = engine
        self.subgroup = subgroup
        self._keyed: Dict[Hashable, int] = {}
        self._representatives: List[Letters] = []

    def locate(self, element: Letters) -> int:
        """Coset number of an element, registering a new coset when needed."""
        found = self.find(element)
        if found is not None:
            return found
        key = self.engine.coset_key(element, self.subgroup)
        if key is not None:
            self._keyed[("key", key)] = len(self._representatives)
        self._representatives.append(element)
        return len(self._representatives) - 1

    def find(self, element: Letters) -> Optional[int]:
        """Coset number of an element among the registered cosets, else None."""
        key = self.engine.coset_key(element, self.subgroup)
        if key is not None:
            return self._keyed.get(("key", key))
        inverse = self.engine.inverse(element)
        for number, representative in enumerate(self._representatives):
            if self.engine.member(self.engine.multiply(inverse, representative), self.subgroup):
                return number
        return None

    @property
    def representatives(self) -> List[Letters]:
        return self._representatives


def assign_cosets(
    engine: BaseWordEngine,
    subgroup: SubgroupSpec,
    elements: Sequence[Letters],
) -> Tuple[List[int], List[Letters]]:
    """
    Coset number of every element and the lexicographically least member of
    each coset among the elements.

    Cosets are numbered in the order they are first met.
    """
    index = CosetIndex(engine, subgroup)
    numbers = [index.locate(element) for element in elements]
    least = list(index.representatives)
    for number, element in zip(numbers, elements):
        if engine.lex_key(element) < engine.lex_key(least[number]):
            least[number] = element
    return numbers, least


def coset_graph_ball(
    s: GroupScenario,
    subgroup: Any,
    gens: Optional[Sequence[str]] = None,
    radius: int = 1,
    budget: Optional[int] = None,
) -> CosetGraph:
    """Graph on the cosets gH met by the ball, with unit edges from generator action."""
    engine = get_engine(s)
    spec = s.subgroup(subgroup)
    ball = cayley_ball(s, gens, radius, budget)
    numbers, representatives = assign_cosets(engine, spec, ball.elements)
    edges = set()
    for u, v, _ in ball.graph.edges:
        a, b = numbers[u], numbers[v]
        if a != b:
            edges.add((min(a, b), max(a, b)))
    graph = MetricGraph(
        vertices=len(representatives),
        edges=sorted(edges),
        labels={i: format_letters(rep) for i, rep in enumerate(representatives)},
    )
    return CosetGraph(graph=graph, representatives=tuple(representatives), radius=radius)


def height_probe(
    s: GroupScenario,
    subgroup: Any,
    radius: int,
    max_n: int,
    gens: Optional[Sequence[str]] = None,
    budget: Optional[int] = None,
) -> HeightProbe:
    """
    Lower bound for the height of H at ball scale.

    Looks for a nontrivial ball element h and the largest family of distinct
    ball cosets gH with g^-1 h g in H for each of them.
    """
    engine = get_engine(s)
    spec = s.subgroup(subgroup)
    if engine.is_finite_subgroup(spec):
        return HeightProbe(lower_bound=0, max_n=max_n, radius=radius, finite_subgroup=True)
    elements, _ = enumerate_ball(engine, gens, radius, budget)
    numbers, representatives = assign_cosets(engine, spec, elements)
    budget = settings.BALL_BUDGET if budget is None else budget
    if len(elements) * len(representatives) > budget * 10:
        raise BudgetExceededError(
            f"Height probe would test {len(elements) * len(representatives)} conjugates"
        )
    best: Tuple[int, Optional[Letters], List[Letters]] = (0, None, [])
    for witness in elements[1:]:
        cosets = [rep for rep in representatives if engine.member(engine.conjugate(witness, rep), spec)]
        count = min(len(cosets), max_n)
        if count > best[0]:
            best = (count, witness, cosets[:count])
            if count == max_n:
                break
    count, witness, cosets = best
    return HeightProbe(
        lower_bound=count,
        max_n=max_n,
        radius=radius,
        cosets=tuple(format_letters(rep) for rep in cosets),
        witness=format_letters(witness) if witness is not None else None,
    )


def word_length_search(
    s: GroupScenario,
    target: WordLike,
    max_length: int,
    gens: Optional[Sequence[str]] = None,
    budget: Optional[int] = None,
) -> Optional[int]:
    """
    Exact word length of an element if it is <= max_length, else None.

    Meet in the middle: every word of length L <= max_length splits into a
    prefix and a suffix of length <= ceil(max_length / 2).
    """
    engine = get_engine(s)
    goal = engine.reduce(to_letters(s, target))
    half = (max_length + 1) // 2
    elements, lengths = enumerate_ball(engine, gens, half, budget)
    best: Optional[int] = lengths.get(goal)
    for element in elements:
        rest = engine.multiply(engine.inverse(element), goal)
        if rest in lengths:
            total = lengths[element] + lengths[rest]
            if best is None or total < best:
                best = total
    if best is not None and best > max_length:
        return None
    return best


def distortion_profile(
    s: GroupScenario,
    k_max: int,
    generator: Optional[str] = None,
    search_k: Optional[int] = None,
    budget: Optional[int] = None,
) -> DistortionProfile:
    """
    Fiber length against ambient length of phi^k(x) for k = 0..k_max.

    The ambient length is found by exact ball search for k <= search_k and
    otherwise bounded by the witness t^k x t^-k of length 2k + 1.

    Raises:
        SchemaError: If s is not a semidirect product
    """
    engine = get_engine(s)
    if not isinstance(engine, SemidirectEngine):
        raise SchemaError("Distortion profiles need a semidirect_z_free scenario")
    search_k = settings.DISTORTION_SEARCH_K if search_k is None else search_k
    x = generator or engine.fiber.generators[0]
    image: Letters = ((x, 1),)
    rows = []
    for k in range(k_max + 1):
        fiber_length = len(image)
        witness_length = 2 * k + 1
        if k <= search_k:
            found = word_length_search(s, image, witness_length, budget=budget)
            ambient, method = (found if found is not None else witness_length), "ball-search"
        else:
            ambient, method = witness_length, "conjugate-witness"
        rows.append(
            DistortionRow(
                k=k,
                fiber_length=fiber_length,
                ambient_length=ambient,
                ambient_method=method,
                ratio=Fraction(fiber_length, ambient),
            )
        )
        logger.debug("phi^%d(%s): fiber %d, ambient %d (%s)", k, x, fiber_length, ambient, method)
        image = engine.apply_phi(image)
    return DistortionProfile(rows=tuple(rows), automorphism=s.automorphism)


def random_words(
    s: GroupScenario,
    count: int,
    max_length: int,
    seed: int,
) -> List[Letters]:
    """Seeded random words over the alphabet and its inverses."""
    engine = get_engine(s)
    letters = [(g, 1) for g in engine.generators] + [(g, -1) for g in engine.generators]
    rng = np.random.default_rng(seed)
    words = []
    for _ in range(count):
        length = int(rng.integers(0, max_length + 1))
        picks = rng.integers(0, len(letters), size=length)
        words.append(tuple(letters[int(i)] for i in picks))
    return words
