from fractions import Fraction

import pytest

from tsmooth.jets import jet_for_germ

ALPHA_GRID = (Fraction(0), Fraction(1, 4), Fraction(1, 2), Fraction(3, 4), Fraction(1))


def m_fold_lines(m: int) -> str:
    """m distinct lines through the origin."""
    factors = ["x", "y"]
    signs = ["(x+y)", "(x-y)", "(x+2*y)", "(x-2*y)", "(x+3*y)", "(x-3*y)"]
    return "*".join((factors + signs)[:m])


def normal_form(family: str, k: int) -> str:
    if family == "A":
        return f"y^2 - x^{k + 1}" if k > 1 else "y^2 - x^2"
    if family == "D":
        return f"x^2*y - y^{k - 1}"
    if family == "E":
        return {6: "x^3 + y^4", 7: "x^3 + x*y^3", 8: "x^3 + y^5"}[k]
    if family == "M":
        return m_fold_lines(k)
    raise ValueError(family)


@pytest.fixture(scope="session")
def germ_corpus():
    """Normal-form jets for the families used in kernel-level checks."""
    entries = [("A", k) for k in range(1, 7)]
    entries += [("D", k) for k in range(4, 8)]
    entries += [("E", k) for k in (6, 7, 8)]
    entries += [("M", m) for m in (3, 4)]
    return {
        (family, k): jet_for_germ(normal_form(family, k))
        for family, k in entries
    }
