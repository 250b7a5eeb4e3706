"""
Tests for engines/ (word-problem engines and their registry)
"""
import pytest
from hypothesis import given, settings as hypothesis_settings

from conelab.engines import WordEngineRegistry, get_engine
from conelab.engines.providers import (
    CyclicFreeProductEngine,
    FreeProductEngine,
    MergedCyclicEngine,
    SemidirectEngine,
)
from conelab.models.group import GroupScenario, SubgroupSpec
from conelab.utils.errors import SchemaError, UnknownSymbolError, UnsupportedPatternError
from tests.strategies import words

FPC = CyclicFreeProductEngine(("a", "b", "c"), {"a": 2, "b": 3})
SEMIDIRECT = SemidirectEngine(("x", "y", "z"), {"x": "y", "y": "z", "z": "x y"})


class TestRegistry:
    """Tests for WordEngineRegistry and get_engine."""

    def test_list_kinds(self):
        assert WordEngineRegistry.list_kinds() == [
            "amalgam",
            "free_group",
            "free_product_cyclic",
            "semidirect_z_free",
        ]

    def test_get_engine_caches_on_scenario(self, free2):
        """Test the engine is built once per scenario."""
        assert get_engine(free2) is get_engine(free2)

    def test_engine_classes(self, free2, z2_z3, semidirect):
        assert isinstance(get_engine(free2), CyclicFreeProductEngine)
        assert get_engine(z2_z3).order("a") == 2
        assert isinstance(get_engine(semidirect), SemidirectEngine)

    def test_amalgam_over_identified_generators(self):
        """Test an identified right-hand generator becomes an alias."""
        scenario = GroupScenario(
            kind="amalgam",
            left={"kind": "free_product_cyclic", "orders": [2, 2]},
            right={"kind": "free_product_cyclic", "orders": [2, 2], "generators": ["c", "d"]},
            identifications=[["a", "c"]],
        )
        engine = get_engine(scenario)

        assert isinstance(engine, MergedCyclicEngine)
        assert engine.generators == ("a", "b", "d")
        assert engine.reduce(engine.parse("c a")) == ()

    def test_amalgam_over_trivial_group(self):
        scenario = GroupScenario(
            kind="amalgam",
            left={"kind": "free_group", "rank": 1, "generators": ["u"]},
            right={"kind": "free_product_cyclic", "orders": [2]},
        )
        engine = get_engine(scenario)

        assert isinstance(engine, FreeProductEngine)
        assert engine.reduce(engine.parse("u a a u^-1")) == ()

    def test_amalgam_rejects_mismatched_orders(self):
        scenario = GroupScenario(
            kind="amalgam",
            left={"kind": "free_product_cyclic", "orders": [2]},
            right={"kind": "free_product_cyclic", "orders": [3], "generators": ["c"]},
            identifications=[["a", "c"]],
        )

        with pytest.raises(UnsupportedPatternError):
            get_engine(scenario)

    def test_amalgam_rejects_word_identifications(self):
        scenario = GroupScenario(
            kind="amalgam",
            left={"kind": "free_product_cyclic", "orders": [2, 2]},
            right={"kind": "free_product_cyclic", "orders": [2], "generators": ["c"]},
            identifications=[["a b", "c"]],
        )

        with pytest.raises(UnsupportedPatternError):
            get_engine(scenario)


class TestParsing:
    """Tests for BaseWordEngine.parse."""

    def test_parse_exponents(self):
        assert FPC.parse("a^-1 b^{2}") == (("a", -1), ("b", 1), ("b", 1))

    def test_parse_runs_of_letters(self):
        assert FPC.parse("abab") == (("a", 1), ("b", 1), ("a", 1), ("b", 1))

    def test_parse_identity_and_superscript(self):
        assert FPC.parse("1") == ()
        assert FPC.parse("c⁻¹") == (("c", -1),)

    def test_parse_unknown_symbol(self):
        with pytest.raises(UnknownSymbolError):
            FPC.parse("q")


class TestCyclicFreeProduct:
    """Tests for CyclicFreeProductEngine."""

    def test_order_two_cancels(self):
        assert FPC.reduce(FPC.parse("a a")) == ()

    def test_exponent_normalized_into_half_open_range(self):
        """Test b^2 becomes b^-1 for b of order 3."""
        assert FPC.reduce(FPC.parse("b b")) == (("b", -1),)

    def test_infinite_order_free_reduction(self):
        assert FPC.reduce(FPC.parse("c b c^-1 c b^-1 c")) == (("c", 1), ("c", 1))

    def test_step_letters_skip_inverse_of_involutions(self):
        assert FPC.step_letters() == [("a", 1), ("b", 1), ("b", -1), ("c", 1), ("c", -1)]

    def test_coset_key_strips_subgroup_suffix(self):
        spec = SubgroupSpec(generators=("a",))

        assert FPC.coset_key(FPC.parse("b a"), spec) == FPC.coset_key(FPC.parse("b"), spec)

    def test_finite_subgroups(self):
        assert FPC.is_finite_subgroup(SubgroupSpec(generators=("b",)))
        assert not FPC.is_finite_subgroup(SubgroupSpec(generators=("a", "b")))
        assert not FPC.is_finite_subgroup(SubgroupSpec(generators=("c",)))

    @hypothesis_settings(max_examples=100, deadline=None)
    @given(words("abc"), words("abc"))
    def test_reduce_is_a_homomorphism(self, u, v):
        """Test normal forms are idempotent and multiplicative."""
        assert FPC.reduce(FPC.reduce(u)) == FPC.reduce(u)
        assert FPC.reduce(u + v) == FPC.multiply(FPC.reduce(u), FPC.reduce(v))
        assert FPC.multiply(u, FPC.inverse(u)) == ()


class TestSemidirect:
    """Tests for SemidirectEngine."""

    def test_conjugation_by_stable_letter(self):
        """Test t x t^-1 = phi(x) = y."""
        assert SEMIDIRECT.reduce(SEMIDIRECT.parse("t x t^-1")) == (("y", 1),)

    def test_phi_inverse_of_x(self):
        assert SEMIDIRECT.inverse_images["x"] == (("z", 1), ("x", -1))

    def test_letters_pushed_through_t(self):
        """Test u t = t phi^-1(u)."""
        assert SEMIDIRECT.reduce(SEMIDIRECT.parse("x t")) == (("t", 1), ("z", 1), ("x", -1))

    def test_fiber_membership(self):
        spec = SubgroupSpec(tag="fiber")

        assert SEMIDIRECT.member(SEMIDIRECT.parse("t x t^-1"), spec)
        assert not SEMIDIRECT.member(SEMIDIRECT.parse("t x"), spec)

    def test_non_injective_phi(self):
        with pytest.raises(SchemaError):
            SemidirectEngine(("x", "y", "z"), {"x": "y", "y": "y", "z": "z"})

    def test_phi_killing_a_generator(self):
        with pytest.raises(SchemaError):
            SemidirectEngine(("x", "y"), {"x": "x x^-1", "y": "y"})

    def test_stable_letter_clash(self):
        with pytest.raises(SchemaError):
            SemidirectEngine(("x", "t"), {"x": "t", "t": "x"})

    @hypothesis_settings(max_examples=60, deadline=None)
    @given(words("xyzt", max_size=6), words("xyzt", max_size=6))
    def test_reduce_is_a_homomorphism(self, u, v):
        assert SEMIDIRECT.reduce(SEMIDIRECT.reduce(u)) == SEMIDIRECT.reduce(u)
        assert SEMIDIRECT.reduce(u + v) == SEMIDIRECT.multiply(SEMIDIRECT.reduce(u), SEMIDIRECT.reduce(v))
        assert SEMIDIRECT.multiply(u, SEMIDIRECT.inverse(u)) == ()
