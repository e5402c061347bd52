import numpy as np
import pytest

from gaussrecovery.functions import CORPUS_IDS, TestFunction, corpus_lookup, from_callable


class TestCorpus:
    @pytest.mark.parametrize("fid", CORPUS_IDS)
    def test_derivatives_match_finite_differences(self, fid, rng):
        f = corpus_lookup(fid)
        x = rng.uniform(-3, 3, 100)
        x = x[np.abs(x) > 1e-3]
        h = 1e-6
        for order in range(1, f.alpha_known + 1):
            fd = (f.derivative(order - 1, x + h) - f.derivative(order - 1, x - h)) / (2 * h)
            exact = f.derivative(order, x)
            scale = np.maximum(1.0, np.abs(exact))
            assert np.all(np.abs(fd - exact) <= 1e-5 * scale), (fid, order)

    def test_examples(self):
        assert corpus_lookup("abs")(-2.5) == 2.5
        assert corpus_lookup("abs3").derivative(3, -1.0) == -6.0
        assert corpus_lookup("abs3").derivative(2, -2.0) == 12.0
        assert corpus_lookup("gauss_bump").derivative(2, 0.0) == -2.0
        assert corpus_lookup("poly2").derivative(2, 5.0) == 2.0

    def test_unknown_name(self):
        with pytest.raises(KeyError):
            corpus_lookup("cosh")

    def test_derivative_beyond_known_order(self):
        with pytest.raises(ValueError):
            corpus_lookup("abs").derivative(2, 0.5)

    def test_fresh_instances(self):
        a = corpus_lookup("sin")
        a(np.zeros(5))
        assert corpus_lookup("sin").evaluations == 0


class TestCounting:
    def test_calls_are_counted_per_point(self):
        f = corpus_lookup("poly2")
        f(np.arange(7.0))
        f(1.0)
        assert f.evaluations == 8
        f.derivative(0, np.arange(3.0))
        assert f.evaluations == 8
        f.reset_count()
        assert f.evaluations == 0

    def test_from_callable(self):
        f = from_callable(np.cos, "cos")
        assert isinstance(f, TestFunction)
        assert f.alpha_known == 0 and f.id == "cos"
        assert f(0.0) == 1.0
