import sys
from pathlib import Path

import numpy as np
import pytest

sys.path.insert(0, str(Path(__file__).parent))

from hopflab.actions import load_action
from hopflab.ambient import AmbientPoint, SpaceForm
from hopflab.constructor import CurveLaw, build_hypersurface, integrate_sigma


@pytest.fixture(scope="session")
def cp2():
    return SpaceForm(4.0)


@pytest.fixture(scope="session")
def ch2():
    return SpaceForm(-4.0)


@pytest.fixture
def rng():
    return np.random.default_rng(20240811)


@pytest.fixture(scope="session")
def cmc_ehs():
    """A certified CMC(eta=1) construction on cp2-torus, shared read-only."""
    spec = load_action("cp2-torus")
    z0 = spec.section.point(np.array([0.12, 0.07]))
    f1, f2 = spec.section.tangent_frame(z0)
    w0 = np.cos(0.45) * f1 + np.sin(0.45) * f2
    sigma = integrate_sigma(spec, AmbientPoint(spec.space, z0), w0,
                            CurveLaw("cmc", eta=1.0), n_steps=180)
    return build_hypersurface(spec, sigma, s_extent=0.15)


@pytest.fixture(scope="session")
def lohnherr_entry():
    from hopflab.catalog import get_entry

    return get_entry("lohnherr")


@pytest.fixture(scope="session")
def sphere_entry():
    from hopflab.catalog import get_entry

    return get_entry("geodesic-sphere", r=0.5)
