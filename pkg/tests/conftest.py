import numpy as np
import pytest
from hypothesis import settings

from steklovkit.symmetric_space import STANDARD_SPACES

settings.register_profile("default", max_examples=60, deadline=None)
settings.load_profile("default")


@pytest.fixture
def rng():
    return np.random.default_rng(20240601)


@pytest.fixture(params=STANDARD_SPACES, ids=str)
def space(request):
    return request.param


def central_diff(f, x, h):
    """Fourth-order (Richardson) central difference."""
    return (8 * (f(x + h) - f(x - h)) - (f(x + 2 * h) - f(x - 2 * h))) / (12 * h)


def fd_step(space, r):
    # resolve both the 1/r pole and the exp((kn + k - 2) r) growth
    return 1e-3 * min(r, 1.0 / (space.dim + space.k))


def chain_domains():
    """Named H^2 domains shared by the theorem-chain and acceptance tests."""
    from steklovkit.hyperbolic_domain import StarDomain
    return {
        "ball_0.8": StarDomain.ball(0.8),
        "ball_1.5_offcentre": StarDomain.ball(1.5, base_point=(0.3, -0.2)),
        "pert_0.8_0.05": StarDomain.perturbed_ball(0.8, 0.05),
        "pert_0.8_0.1": StarDomain.perturbed_ball(0.8, 0.1),
        "pert_1.5_0.05": StarDomain.perturbed_ball(1.5, 0.05),
        "pert_1.5_0.1": StarDomain.perturbed_ball(1.5, 0.1),
        "pert3_offcentre": StarDomain.perturbed_ball(1.0, 0.06, mode=3, base_point=(-0.2, 0.1)),
        "asymmetric": StarDomain(base_point=(0.1, 0.05), c0=1.0,
                                 cos=[0.08, 0.05, 0.0], sin=[0.0, 0.03, 0.02]),
    }
