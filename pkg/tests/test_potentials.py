import math

import numpy as np
import pytest

from logspec.potentials import (
    FULL_LINE,
    HALF_LINE,
    PotentialSpec,
    describe,
    eval_potential,
    support,
)


def test_logarithmic_at_one_is_zero():
    p = PotentialSpec("logarithmic", epsilon0=1.0, x0=1.0)
    assert eval_potential(p, 1.0) == 0.0


def test_power_law_direct_values():
    assert eval_potential(PotentialSpec("power_law", g=2.0, r=3.0), 2.0) == 16.0
    assert eval_potential(PotentialSpec("power_law", g=1.0, r=2.0), 1.5) == 2.25


def test_half_line_rejects_nonpositive_x():
    p = PotentialSpec("power_law", g=1.0, r=2.0, domain=HALF_LINE)
    with pytest.raises(ValueError):
        eval_potential(p, 0.0)
    with pytest.raises(ValueError):
        eval_potential(p, -1.0)
    with pytest.raises(ValueError):
        eval_potential(p, np.array([1.0, -0.5]))


def test_logarithmic_clamps_below_cutoff():
    p = PotentialSpec("logarithmic", epsilon0=2.0, x0=0.5)
    assert eval_potential(p, 0.25) == eval_potential(p, 0.5) == 2.0 * math.log(0.5)
    assert eval_potential(p, 2.0) == pytest.approx(2.0 * math.log(2.0), rel=1e-15)


def test_full_line_even_power_is_symmetric():
    p = PotentialSpec("power_law", g=3.0, r=4.0, domain=FULL_LINE)
    assert eval_potential(p, -2.0) == eval_potential(p, 2.0) == 48.0


@pytest.mark.parametrize("kwargs,field", [
    (dict(kind="power_law", g=-1.0, r=2.0), "g"),
    (dict(kind="power_law", g=1.0, r=0.0), "r"),
    (dict(kind="power_law", g=1.0), "r"),
    (dict(kind="logarithmic", epsilon0=0.0, x0=1.0), "epsilon0"),
    (dict(kind="logarithmic", epsilon0=1.0, x0=-2.0), "x0"),
    (dict(kind="power_law", g=1.0, r=2.0, hbar=0.0), "hbar"),
    (dict(kind="power_law", g=1.0, r=2.0, mass=-1.0), "mass"),
])
def test_invalid_parameters_name_the_field(kwargs, field):
    with pytest.raises(ValueError, match=field):
        PotentialSpec(**kwargs)


def test_full_line_requires_even_integer_exponent():
    with pytest.raises(ValueError):
        PotentialSpec("power_law", g=1.0, r=3.0, domain=FULL_LINE)
    with pytest.raises(ValueError):
        PotentialSpec("power_law", g=1.0, r=2.5, domain=FULL_LINE)
    PotentialSpec("power_law", g=1.0, r=4.0, domain=FULL_LINE)


def test_logarithmic_is_half_line_only():
    with pytest.raises(ValueError):
        PotentialSpec("logarithmic", epsilon0=1.0, x0=1.0, domain=FULL_LINE)


def test_tabulated_interpolation_and_range():
    p = PotentialSpec("tabulated", x_table=(0.0, 1.0, 2.0), v_table=(0.0, 2.0, 0.0))
    assert eval_potential(p, 0.5) == 1.0
    assert eval_potential(p, 1.5) == 1.0
    with pytest.raises(ValueError):
        eval_potential(p, 2.5)
    with pytest.raises(ValueError):
        PotentialSpec("tabulated", x_table=(0.0, 0.0), v_table=(1.0, 2.0))
    with pytest.raises(ValueError):
        PotentialSpec("tabulated", x_table=(0.0, 1.0), v_table=(1.0,))


def test_offset_shifts_rigidly():
    base = PotentialSpec("power_law", g=1.0, r=2.0)
    lifted = PotentialSpec("power_law", g=1.0, r=2.0, offset=1.5)
    for x in (0.3, 1.0, 4.2):
        assert eval_potential(lifted, x) == pytest.approx(eval_potential(base, x) + 1.5)


def test_support_intervals():
    assert support(PotentialSpec("power_law", g=1.0, r=2.0)) == (0.0, math.inf)
    assert support(PotentialSpec("power_law", g=1.0, r=2.0, domain=FULL_LINE)) \
        == (-math.inf, math.inf)
    assert support(PotentialSpec("logarithmic", epsilon0=1.0, x0=0.7)) == (0.7, math.inf)
    p = PotentialSpec("tabulated", x_table=(0.0, 3.0), v_table=(0.0, 0.0))
    assert support(p) == (0.0, 3.0)


def test_describe_is_deterministic():
    p = PotentialSpec("power_law", g=1.0, r=2.0, domain=FULL_LINE, offset=0.5)
    assert describe(p) == describe(p)
    assert "power_law" in describe(p)
