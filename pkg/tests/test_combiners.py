import math

import numpy as np
import pytest

from submod.combiners import (
    COMBINERS,
    DIFF_SQRT,
    DIFFERENCE,
    RATIO,
    RATIO_SQRT,
    DomainError,
    check_quasiconvex_on_segment,
    evaluate,
    get_combiner,
)


def test_evaluate_examples():
    assert evaluate("diff", 5, 2) == 3
    assert evaluate("ratio", 6, 3) == 2
    assert evaluate("diff-sqrt", 5, 4) == 3
    assert evaluate("ratio-sqrt", 6, 4) == 3


def test_ratio_domain():
    with pytest.raises(DomainError):
        RATIO(1.0, 0.0)
    with pytest.raises(DomainError):
        RATIO_SQRT(1.0, -1.0)
    with pytest.raises(DomainError):
        DIFF_SQRT(1.0, -0.5)
    assert DIFFERENCE(1.0, -1.0) == 2.0


def test_get_combiner():
    assert get_combiner("RATIO") is RATIO
    assert get_combiner("diff_sqrt") is DIFF_SQRT
    assert get_combiner(DIFFERENCE) is DIFFERENCE
    with pytest.raises(ValueError):
        get_combiner("product")


def test_declared_flags():
    for c in COMBINERS.values():
        assert c.quasiconvex and c.nondecreasing_in_first and c.nonincreasing_in_second


def _domain_point(c, rng):
    return float(rng.uniform(0, 10)), float(rng.uniform(0.1, 10))


@pytest.mark.parametrize("name", sorted(COMBINERS))
def test_quasiconvex_sampler_accepts_builtins(name, rng):
    c = COMBINERS[name]
    for _ in range(300):
        assert check_quasiconvex_on_segment(c, _domain_point(c, rng), _domain_point(c, rng), grid=25)


def test_quasiconvex_sampler_rejects_concave():
    assert not check_quasiconvex_on_segment(lambda a, b: -a * a, (-1.0, 0.0), (1.0, 0.0))
    assert check_quasiconvex_on_segment(lambda a, b: a * a, (-1.0, 0.0), (1.0, 0.0))
    with pytest.raises(ValueError):
        check_quasiconvex_on_segment(DIFFERENCE, (0, 0), (1, 1), grid=1)


@pytest.mark.parametrize("name", sorted(COMBINERS))
def test_monotonicity_on_grid(name):
    c = COMBINERS[name]
    grid_a = np.linspace(0, 5, 11)
    grid_b = np.linspace(0.25, 5, 11)
    for a in grid_a:
        vals = [c(a, b) for b in grid_b]
        assert all(x >= y for x, y in zip(vals, vals[1:]))
    for b in grid_b:
        vals = [c(a, b) for a in grid_a]
        assert all(x <= y for x, y in zip(vals, vals[1:]))
