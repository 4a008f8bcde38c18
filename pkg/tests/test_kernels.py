import numpy as np
import pytest
import scipy.linalg as sla

from hopflab._kernels import BACKEND, get_backend

pure = get_backend("python")
try:
    fast = get_backend("cython")
    HAVE_FAST = True
except ImportError:
    fast = None
    HAVE_FAST = False

BACKENDS = [pure] + ([fast] if HAVE_FAST else [])


@pytest.mark.parametrize("impl", BACKENDS, ids=lambda m: m.BACKEND_NAME)
def test_expm3_matches_scipy(impl, rng):
    for _ in range(20):
        m = rng.standard_normal((3, 3)) + 1j * rng.standard_normal((3, 3))
        assert np.abs(impl.expm3(m) - sla.expm(m)).max() < 1e-12


@pytest.mark.parametrize("impl", BACKENDS, ids=lambda m: m.BACKEND_NAME)
def test_expm3_nilpotent_exact(impl):
    # 2-step nilpotent: exp(N) = I + N + N^2/2 exactly
    n = np.array([[1, -1, 0], [1, -1, 0], [0, 0, 0]], dtype=complex)
    e = impl.expm3(1j * n)
    expected = np.eye(3) + 1j * n + (1j * n) @ (1j * n) / 2
    assert np.abs(e - expected).max() < 1e-15


@pytest.mark.parametrize("impl", BACKENDS, ids=lambda m: m.BACKEND_NAME)
def test_expm3_batch_consistent(impl, rng):
    ms = rng.standard_normal((17, 3, 3)) + 1j * rng.standard_normal((17, 3, 3))
    batch = impl.expm3_batch(ms)
    for i in range(17):
        assert np.abs(batch[i] - impl.expm3(ms[i])).max() < 1e-13


@pytest.mark.skipif(not HAVE_FAST, reason="compiled kernel not built")
def test_backends_agree(rng):
    g1 = 1j * np.diag([1.0, 1.0, -2.0])
    g2 = np.array([[0, 0, 1], [0, 0, 1], [1, -1, 0]], dtype=complex)
    s1 = rng.uniform(-2, 2, 200)
    s2 = rng.uniform(-2, 2, 200)
    z = rng.standard_normal((200, 3)) + 1j * rng.standard_normal((200, 3))
    a = pure.group_orbit_apply(g1, g2, s1, s2, z)
    b = fast.group_orbit_apply(g1, g2, s1, s2, z)
    assert np.abs(a - b).max() < 1e-13


def test_group_orbit_apply_group_law(rng):
    # commuting generators: applying (s, 0) then (0, t) equals (s, t)
    impl = get_backend(BACKEND if BACKEND == "python" else "cython")
    g1 = 1j * np.diag([1.0, 1.0, -2.0])
    g2 = 1j * np.array([[1, -1, 0], [1, -1, 0], [0, 0, 0]], dtype=complex)
    z = rng.standard_normal((5, 3)) + 1j * rng.standard_normal((5, 3))
    s = rng.uniform(-1, 1, 5)
    t = rng.uniform(-1, 1, 5)
    once = impl.group_orbit_apply(g1, g2, s, t, z)
    twice = impl.group_orbit_apply(g1, g2, np.zeros(5), t,
                                   impl.group_orbit_apply(g1, g2, s, np.zeros(5), z))
    assert np.abs(once - twice).max() < 1e-13
