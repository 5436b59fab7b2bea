import doctest
import importlib

import pytest

MODULES = ["newformlab", "newformlab.characters", "newformlab.cli", "newformlab.cyclotomic",
           "newformlab.formulas", "newformlab.groups", "newformlab.linalg", "newformlab.local_rings",
           "newformlab.principal_series", "newformlab.supercuspidal", "newformlab.whittaker"]


@pytest.mark.parametrize("name", MODULES)
def test_module_doctests(name):
    mod = importlib.import_module(name)
    res = doctest.testmod(mod, optionflags=doctest.ELLIPSIS | doctest.NORMALIZE_WHITESPACE)
    assert res.failed == 0
    assert res.attempted > 0
