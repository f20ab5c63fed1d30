"""Smoke test for the hardycexp_py extension module."""

import cmath
import math

import hardycexp_py as hc


def close(a, b, tol):
    return abs(a - b) <= tol


def test_blaschke():
    eta = hc.BlaschkeProduct([0, 0.5])
    assert eta.degree == 2
    pre = sorted(eta.preimages(1 + 0j), key=lambda w: w.real)
    assert close(pre[0], -1, 1e-12) and close(pre[1], 1, 1e-12)
    assert close(eta.derivative_sup(), 4.0, 1e-9)
    lo, hi = eta.derivative_bounds()
    assert lo <= eta.derivative_inf() + 1e-12 and eta.derivative_sup() <= hi + 1e-12
    assert close(abs(eta.evaluate(cmath.exp(0.7j))), 1.0, 1e-14)
    back = hc.BlaschkeProduct.from_json(eta.to_json())
    assert back.zeros == eta.zeros
    try:
        hc.BlaschkeProduct([1.5])
    except ValueError:
        pass
    else:
        raise AssertionError("zero outside the disc accepted")


def test_cexp():
    eta = hc.BlaschkeProduct([0, 0.5])
    op = hc.CexpOperator(eta)
    # E(z | eta) = -eta / 2 on the circle, by both routes.
    coeffs = op.apply_fourier([0, 1])
    n = 64
    grid = op.apply_on_grid([0, 1], n)
    for j in range(n):
        z = cmath.exp(2j * math.pi * j / n)
        want = -eta.evaluate(z) / 2
        fourier = sum(c * z**k for k, c in enumerate(coeffs))
        assert close(grid[j], want, 1e-10) and close(fourier, want, 1e-10)
    assert close(op.apply_pointwise([0, 1], 1j), -eta.evaluate(1j) / 2, 1e-12)
    assert op.partition_of_unity_residual(cmath.exp(0.3j)) < 1e-12
    assert close(op.theoretical_norm(2 / 3), 2.0, 1e-9)
    square = hc.CexpOperator(hc.BlaschkeProduct.power(2))
    assert close(square.theoretical_norm(0.5), 2.0, 1e-12)
    est = square.empirical_norm(0.5, grid=2048)
    assert 1.0 < est["best"] <= 2.0 * (1 + 1e-6)
    assert close(hc.finite_space_norm([[0, 1]], 0.5), 2.0, 1e-9)
    assert close(hc.quasi_norm([1], 0.5), 1.0, 1e-12)


def test_multipliers():
    c = hc.coefficient_constant(0.5)
    assert close(c, 1.299038, 1e-6)
    closed, quad = hc.coefficient_ratio_family(0.5, 1 / math.sqrt(3))
    assert close(closed, c, 1e-12) and close(quad, closed, 1e-8)
    argmax, top = hc.maximize_coefficient_ratio(0.5)
    assert close(top, c, 1e-9) and close(argmax, 1 / math.sqrt(3), 1e-5)

    nj = hc.IndexSet.symbolic("infinite", [2])
    assert nj.classify(0.5)["status"] == "Contractive"
    assert [1, 0, 4] in nj and [0, 1] not in nj

    evens = hc.IndexSet.explicit(1, [10], [[k] for k in range(0, 11, 2)])
    verdict = evens.classify(0.5)
    assert verdict["status"] == "NotContractive"
    assert verdict["reason"]["counterexample"]["kind"] == "ray"

    single = hc.IndexSet.from_json('{"kind":"explicit","d":1,"box":[10],"members":[[1]]}')
    witness = single.classify(0.5, falsify=True, budget=800, restarts=4)["witness"]
    assert witness["ratio"] >= 1.29

    poly = {"d": 2, "terms": [{"alpha": [1, 0], "c": [1, 0]}, {"alpha": [0, 1], "c": [2, 0]}]}
    kept = hc.IndexSet.symbolic(2, [2]).apply(poly)
    assert kept["terms"] == [{"alpha": [1, 0], "c": [1.0, 0.0]}]

    assert hc.bohr_exponents(12) == [2, 1]
    assert hc.bohr_number([2, 1]) == 12
    smooth = [n for n in range(1, 101) if all(p in (2, 3) for p in factor(n))]
    assert hc.dirichlet_set_classify(smooth, 100)["reason"]["allowed_primes"] == [2, 3]
    gap = hc.dirichlet_set_classify([n for n in smooth if n != 8], 100)
    assert gap["status"] == "NotContractive" and gap["reason"]["n"] == 8


def test_suite():
    reports = hc.verify_all(seed=1, only="blaschke.")
    assert reports and all(r["pass"] for r in reports)


def factor(n):
    out, q = [], 2
    while q * q <= n:
        while n % q == 0:
            out.append(q)
            n //= q
        q += 1
    if n > 1:
        out.append(n)
    return out


if __name__ == "__main__":
    for name, fn in list(globals().items()):
        if name.startswith("test_"):
            fn()
            print(f"{name}: ok")
