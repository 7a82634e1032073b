import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from ptframe.errors import DimensionError, ParameterError
from ptframe.thermo import (
    ThermoSystem,
    boltzmann,
    boltzmann_semantic,
    entropy_info_relation,
    rate_tolerance,
)


def generated_system(seed: int) -> ThermoSystem:
    rng = np.random.default_rng(seed)
    n = int(rng.integers(3, 8))
    energies = np.sort(rng.uniform(0, 4, n))
    mult = rng.integers(1, 6, n)
    areas = tuple((float(rng.uniform(0.3, 3.0)), float(rng.integers(10, 200))) for _ in range(int(rng.integers(1, 5))))
    return ThermoSystem(energies, mult, areas, k=float(rng.choice([1.0, 0.5, 2.0])))


def info_side(sys: ThermoSystem) -> float:
    """-sum P(y_j) e_j/(kT_j) - sum P(y_j) ln(Z_j/G), written out directly."""
    total = 0.0
    for T, n in sys.areas:
        w = sys.multiplicities * np.exp(-sys.energies / (sys.k * T))
        z = w.sum()
        e_bar = float((w / z) @ sys.energies)
        total += n / sys.N * (-e_bar / (sys.k * T) - math.log(z / sys.G))
    return total


class TestBoltzmann:
    def test_two_state_example(self):
        p = boltzmann([0.0, 1.0], [1, 1], 1.0)
        assert p.mass[0] == pytest.approx(1 / (1 + math.exp(-1)), abs=1e-15)
        assert p.mass[1] == pytest.approx(math.exp(-1) / (1 + math.exp(-1)), abs=1e-15)
        assert round(p.mass[0], 4) == 0.7311

    def test_equal_energies(self):
        np.testing.assert_allclose(boltzmann([2.0] * 3, [1, 2, 5], 0.7).mass, [1 / 8, 2 / 8, 5 / 8], atol=1e-15)

    def test_hot_limit(self):
        np.testing.assert_allclose(boltzmann([0, 1, 2], [1, 1, 2], 1e9).mass, [0.25, 0.25, 0.5], atol=1e-8)

    def test_invalid(self):
        with pytest.raises(ParameterError):
            boltzmann([0, 1], [1, 1], 0.0)
        with pytest.raises(DimensionError):
            boltzmann([0, 1], [1], 1.0)

    @given(st.integers(0, 2**31), st.floats(0.05, 50.0))
    def test_two_code_paths_agree(self, seed, kT):
        rng = np.random.default_rng(seed)
        n = int(rng.integers(2, 9))
        e = rng.uniform(-3, 5, n)
        g = rng.integers(1, 10, n)
        np.testing.assert_allclose(boltzmann(e, g, kT).mass, boltzmann_semantic(e, g, kT).mass, atol=1e-12)


class TestRelation:
    @pytest.mark.parametrize("seed", range(5))
    def test_generated_systems(self, seed):
        sys = generated_system(seed)
        rel = entropy_info_relation(sys)
        assert rel.residual < 1e-9
        assert rate_tolerance(sys) == pytest.approx(info_side(sys), abs=1e-12)
        assert rel.r_theta >= 0

    def test_single_area_equilibrium(self):
        sys = ThermoSystem([0, 1, 2, 3], [1, 3, 3, 1], ((1.2, 50.0),))
        Z = sys.partition(1.2)
        p = boltzmann(sys.energies, sys.multiplicities, 1.2).mass
        # S = E/T + kN ln Z for one area
        assert sys.entropy() == pytest.approx(50.0 * float(p @ sys.energies) / 1.2 + 50.0 * math.log(Z), rel=1e-14)
        assert entropy_info_relation(sys).residual < 1e-9

    def test_equal_temperature_areas_merge(self):
        split = ThermoSystem([0, 0.5, 2.0], [2, 1, 4], ((0.9, 30.0), (0.9, 70.0)))
        merged = ThermoSystem([0, 0.5, 2.0], [2, 1, 4], ((0.9, 100.0),))
        a, b = entropy_info_relation(split), entropy_info_relation(merged)
        assert a.r_theta == pytest.approx(b.r_theta, abs=1e-12)
        assert a.entropy == pytest.approx(b.entropy, rel=1e-12)

    def test_zero_energy(self):
        sys = ThermoSystem([0.0, 0.0, 0.0], [1, 2, 3], ((1.0, 10.0), (2.0, 5.0)), k=2.0)
        rel = entropy_info_relation(sys)
        assert rel.entropy == pytest.approx(2.0 * 15.0 * math.log(6.0), rel=1e-14)
        assert rel.r_theta == pytest.approx(0.0, abs=1e-15)

    def test_json_round_trip(self):
        sys = generated_system(11)
        back = ThermoSystem.from_json(sys.to_json())
        assert back.areas == sys.areas and np.array_equal(back.energies, sys.energies)
        assert entropy_info_relation(sys).to_json()["r_theta_bits"] == pytest.approx(rate_tolerance(sys) / math.log(2))

    def test_validation(self):
        with pytest.raises(DimensionError):
            ThermoSystem([0, 1], [1, 1], ())
        with pytest.raises(ParameterError):
            ThermoSystem([0, 1], [1, 1], ((1.0, -2.0),))
        with pytest.raises(ParameterError):
            ThermoSystem([0, 1], [0, 0], ((1.0, 2.0),))
        with pytest.raises(DimensionError):
            ThermoSystem.from_json({"energies": [0], "multiplicities": [1]})
