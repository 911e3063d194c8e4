"""Smoke test for the gaussent extension module.

Build and install first:
    pip install --no-build-isolation -e crates/python
then run:
    python3 python/smoke_test.py
"""

import math

import gaussent
from gaussent import GaussianState


def close(x, y, tol=1e-9):
    assert abs(x - y) <= tol, (x, y)


def main():
    r = 0.5
    tms = GaussianState.two_mode_squeezed(r)
    assert tms.n_modes == 2
    pt = tms.pt_spectrum("1|2")
    close(pt[0], math.exp(-2 * r))
    close(pt[1], math.exp(2 * r))
    close(tms.log_negativity("1|2"), 2 * r)
    close(tms.gaussian_eof("1|2"), tms.eof_symmetric(), 1e-6)
    close(tms.contangle("1|2"), (2 * r) ** 2, 1e-6)
    close(tms.purity(), 1.0)
    close(tms.reduce([0]).von_neumann_entropy(), gaussent.entropy_function(math.cosh(2 * r)))

    back = GaussianState.from_json(tms.to_json())
    assert back.matrix == tms.matrix

    vac = GaussianState.vacuum(3)
    assert vac.symplectic_spectrum() == [1.0, 1.0, 1.0]
    assert vac.is_ppt("1|2,3")
    close(vac.log_negativity("1,2|3"), 0.0)

    try:
        GaussianState([[0.5, 0.0], [0.0, 0.5]])
    except ValueError as e:
        assert "not a physical covariance matrix" in str(e)
    else:
        raise AssertionError("unphysical matrix accepted")

    try:
        tms.log_negativity("1|3")
    except ValueError:
        pass
    else:
        raise AssertionError("bad partition accepted")

    a = 2.0
    ghzw = GaussianState.ghzw(a)
    rep = gaussent.residual_contangle_pure(a, a, a)
    close(rep.value, gaussent.ghzw_residual(a), 1e-8)
    close(ghzw.residual("contangle").value, rep.value, 1e-5)
    assert all(slack >= -1e-6 for _, _, _, slack in ghzw.monogamy("tangle"))
    assert ghzw.ppt_class() == "fully-inseparable"

    fs = GaussianState.fully_symmetric_pure(10, 1.5)
    hierarchy = [fs.one_by_k_log_negativity(k) for k in range(1, 10)]
    assert all(y >= x - 1e-12 for x, y in zip(hierarchy, hierarchy[1:]))
    close(fs.ole(), fs.block_log_negativity(5))
    assert gaussent.asymptotic_1k_bound(9, 3) <= math.log(math.sqrt(5))

    four = GaussianState.four_mode(0.5, 1.0)
    assert four.log_negativity("1,2|3,4") > 0

    print("gaussent smoke test: ok")


if __name__ == "__main__":
    main()
