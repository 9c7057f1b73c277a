import numpy as np
import pytest

from privlp import ConstraintSystem, LinearProgram, validate


def random_validated_lp(rng: np.random.Generator, m=None, n=None,
                        mask_prob=0.2, positive_costs=False) -> LinearProgram:
    """Random LP that satisfies the standing assumptions by construction.

    Row 0 is strictly positive (unmasked), which bounds {x >= 0 : A x <= b};
    b is set from a witness point inside the worst-case region, so the
    shared-feasibility assumption always holds.
    """
    m = int(m if m is not None else rng.integers(2, 7))
    n = int(n if n is not None else rng.integers(2, 7))
    A = rng.uniform(-1.0, 2.0, (m, n))
    mask = rng.random((m, n)) < mask_prob
    A[0] = rng.uniform(0.2, 1.5, n)
    mask[0] = False
    A[mask] = 0.0
    margin = rng.uniform(0.1, 2.0, (m, n))
    margin[mask] = 0.0
    witness = rng.uniform(0.0, 1.0, n)
    sup_A = A + margin
    b = sup_A @ witness + rng.uniform(0.05, 1.0, m)
    if positive_costs:
        c = np.abs(rng.normal(size=n)) + 0.1
    else:
        c = rng.normal(size=n)
    system = ConstraintSystem(A=A, b=b, zero_mask=mask, sup_A=sup_A)
    lp = LinearProgram(c=c, system=system)
    validate(lp)
    return lp


@pytest.fixture
def rng():
    return np.random.default_rng(20240817)
