import math

import numpy as np
import pytest

import cda_recon


def test_version_and_names():
    assert cda_recon.__version__ == "0.1.0"
    assert {"example1", "example2"} <= set(cda_recon.problem_names())
    assert cda_recon.command_names()[0] == "forward"


@pytest.mark.parametrize(
    "c1,c2,M,beta,expected", [(2, 1, 3, 0, 3.0), (1, 0, 4, 1, 2.0), (1, 1, 2, 1, 2.0)]
)
def test_xi_star(c1, c2, M, beta, expected):
    assert cda_recon.xi_star(c1, c2, M, beta) == pytest.approx(expected, abs=1e-10)


def test_ode_bound_converges():
    z, theta = cda_recon.simulate_ode_bound(1, 1, 2, 1, theta0=0.0, z_end=50.0, dz=1e-2)
    assert z[-1] == pytest.approx(50.0)
    assert np.all(np.diff(theta) >= 0)
    assert theta[-1] == pytest.approx(2.0, abs=1e-6)


def test_linear_case_needs_c1_above_c2():
    with pytest.raises(cda_recon.ConfigError):
        cda_recon.xi_star(1, 2, 1, 0)


def test_interpolation_reference():
    assert cda_recon.interpolation_reference("example2", "q", 8) == pytest.approx(2.41e-2, rel=0.15)


def test_forward_returns_coefficients():
    u = cda_recon.forward("example1", n=8, degree=2)
    assert u.shape == (17 * 17,)
    assert u.max() > 0
    assert u[0] == 0.0


def test_spearman():
    assert cda_recon.spearman([1, 2, 3], [3, 5, 9]) == pytest.approx(1.0)
    assert math.isnan(cda_recon.spearman([1, 1, 1], [1, 2, 3]))


def test_run_xistar(tmp_path):
    res = cda_recon.run("xistar", "[ode]\nz_end = 5\ndz = 0.01\n", out=str(tmp_path))
    assert res["files"][-1] == "manifest.txt"
    assert (tmp_path / "xistar.csv").read_text().startswith("c1,c2,M,beta,xi_star")


def test_run_rejects_bad_config(tmp_path):
    with pytest.raises(cda_recon.ConfigError, match="solver_n"):
        cda_recon.run("forward", "[assimilation]\nsolver_n = 0\n", out=str(tmp_path))
