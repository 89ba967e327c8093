import math

import numpy as np
import pytest

from polylab.distributions import SeededStream
from polylab.errors import ConfigurationError, DomainError, NetError
from polylab.interp_norm import dual_gauge_exact
from polylab.nets import (
    Ball,
    DualSphere,
    circle_cover_bounds,
    coverage_report,
    greedy_net,
    load_net,
    project_to_net,
    sample_dual_sphere,
    save_net,
)


def test_ball_center_covers():
    net = greedy_net(Ball(3, 0.2), 0.2, 2000, SeededStream(1))
    assert len(net) == 1 and np.all(net.points[0] == 0)
    u = Ball(3, 0.2).sample(100, np.random.default_rng(0))
    pts, d = project_to_net(net, u)
    assert np.all(pts == 0) and np.all(d <= 0.2 + 1e-12)


def test_circle_net_size():
    net = greedy_net(DualSphere(2, 1), 0.5, 20_000, SeededStream(2))
    lo, hi = circle_cover_bounds(0.5)
    assert 7 <= len(net) <= 13
    assert lo <= len(net) <= hi
    z = sample_dual_sphere(2, 1, 500, np.random.default_rng(3))
    assert np.all(project_to_net(net, z)[1] <= 0.5 + 1e-12)


def test_large_radius_single_point():
    for r in (1, 2.5, 4):
        assert len(greedy_net(DualSphere(4, r), 2.0, 5000, SeededStream(3))) == 1


def test_project_self():
    net = greedy_net(DualSphere(3, 2), 0.3, 5000, SeededStream(4))
    p, d = project_to_net(net, net.points[5])
    assert np.array_equal(p, net.points[5]) and d == 0
    with pytest.raises(DomainError):
        project_to_net(net, np.zeros(4))


@pytest.mark.parametrize("n,r,rho", [(2, 1.5, 0.2), (3, 2, 0.25), (4, 4, 0.4)])
def test_coverage_and_membership(n, r, rho):
    net = greedy_net(DualSphere(n, r), rho, 30_000, SeededStream(5))
    assert np.allclose(dual_gauge_exact(net.points, r), 1, atol=1e-9)
    probes = sample_dual_sphere(n, r, 10_000, SeededStream(6, 0, (1,)).generator())
    rep = coverage_report(net, probes)
    assert rep["violations_beyond_5pct"] <= 10
    assert net.radius_measured >= 0


def test_ball_points_inside():
    net = greedy_net(Ball(2, 1.0), 0.3, 5000, SeededStream(7))
    assert np.all(np.linalg.norm(net.points, axis=1) <= 1 + 1e-12)


def test_deterministic():
    a = greedy_net(DualSphere(3, 1.5), 0.3, 5000, SeededStream(8))
    b = greedy_net(DualSphere(3, 1.5), 0.3, 5000, SeededStream(8))
    assert np.array_equal(a.points, b.points) and a.radius_measured == b.radius_measured


def test_budget_exhausted():
    with pytest.raises(NetError) as info:
        greedy_net(DualSphere(3, 2), 0.05, 5000, SeededStream(9), max_points=10)
    assert info.value.achieved_radius > 0.05


def test_bad_arguments():
    with pytest.raises(ConfigurationError):
        greedy_net(DualSphere(7, 2), 0.5, 100, SeededStream(0))
    with pytest.raises(ConfigurationError):
        greedy_net(DualSphere(3, 2), 0.0, 100, SeededStream(0))


def test_sample_includes_extremes():
    z = sample_dual_sphere(3, 2, 100, np.random.default_rng(0))
    assert np.allclose(z[:3], np.eye(3))
    assert np.allclose(z[6], np.ones(3) / math.sqrt(6))


def test_save_load_roundtrip(tmp_path):
    for body in (DualSphere(3, 2.5), Ball(2, 0.7)):
        net = greedy_net(body, 0.4, 3000, SeededStream(10))
        path = tmp_path / "net.txt"
        save_net(net, path)
        text = path.read_text().splitlines()
        assert text[0] == "# polylab-net v1"
        back = load_net(path)
        assert np.array_equal(back.points, net.points)
        assert back.body == net.body
        assert back.radius_measured == net.radius_measured
