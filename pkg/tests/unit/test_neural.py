import math
import unittest

import numpy as np

from hsk.exceptions import HSKShapeException, HSKNumericalException, HSKDataException
from hsk.neural import AdamHyper, AdamState, adam_step, HeadParams, head_forward, \
    cross_entropy, cross_entropy_with_logits, LstmParams, BiLstmLayer, lstm_cell, \
    bilstm_encode, init_model, model_forward, model_gradients, predict, Direction, \
    max_pool_with_provenance
from hsk.neural.lstm import run_direction
from hsk.neural.model import batch_loss
from hsk.types import TaskSpec


def _relative_error(a: np.ndarray, b: np.ndarray) -> float:
    # coordinates whose gradient is ~0 are compared against a floor, not against each other
    scale = np.maximum(np.abs(a) + np.abs(b), 1e-5)
    return float(np.max(np.abs(a - b) / scale))


def _sigmoid(z: float) -> float:
    return 1.0 / (1.0 + math.exp(-z))


def _scalar_cell(x, h_prev, c_prev, p: LstmParams):
    # gate rows in order input, forget, candidate, output
    H = p.hidden
    pre = []
    for r in range(4 * H):
        a = float(p.b[r])
        for k in range(len(x)):
            a += float(p.W[r, k]) * float(x[k])
        for k in range(H):
            a += float(p.U[r, k]) * float(h_prev[k])
        pre.append(a)
    h, c = [0.0] * H, [0.0] * H
    for j in range(H):
        i = _sigmoid(pre[j])
        f = _sigmoid(pre[H + j])
        g = math.tanh(pre[2 * H + j])
        o = _sigmoid(pre[3 * H + j])
        c[j] = f * c_prev[j] + i * g
        h[j] = o * math.tanh(c[j])
    return h, c


def _scalar_encode(X, trunk):
    n = len(X)
    inputs = [list(row) for row in X]
    fwd = bwd = None
    for layer in trunk:
        H = layer.forward.hidden
        fwd, bwd = [None] * n, [None] * n
        h, c = [0.0] * H, [0.0] * H
        for t in range(n):
            h, c = _scalar_cell(inputs[t], h, c, layer.forward)
            fwd[t] = h
        h, c = [0.0] * H, [0.0] * H
        for t in reversed(range(n)):
            h, c = _scalar_cell(inputs[t], h, c, layer.backward)
            bwd[t] = h
        inputs = [fwd[t] + bwd[t] for t in range(n)]
    return np.array(fwd), np.array(bwd)


class TestLstmCell(unittest.TestCase):

    def test_zero_parameters(self):
        p = LstmParams.zeros(3, 2)
        c_prev = np.array([1.0, -2.0])
        h, c = lstm_cell(np.ones(3), np.zeros(2), c_prev, p)
        # every gate at 0.5, candidate at 0
        np.testing.assert_allclose(c, 0.5 * c_prev)
        np.testing.assert_allclose(h, 0.5 * np.tanh(0.5 * c_prev))

    def test_matches_scalar_loop(self):
        rng = np.random.default_rng(11)
        for _ in range(20):
            d, H = int(rng.integers(1, 6)), int(rng.integers(1, 5))
            p = LstmParams(W=rng.normal(size=(4 * H, d)), U=rng.normal(size=(4 * H, H)),
                           b=rng.normal(size=4 * H))
            x, h_prev, c_prev = rng.normal(size=d), rng.normal(size=H), rng.normal(size=H)
            h, c = lstm_cell(x, h_prev, c_prev, p)
            h_ref, c_ref = _scalar_cell(x.tolist(), h_prev.tolist(), c_prev.tolist(), p)
            np.testing.assert_allclose(h, h_ref, rtol=0, atol=1e-12)
            np.testing.assert_allclose(c, c_ref, rtol=0, atol=1e-12)

    def test_encode_matches_scalar_oracle(self):
        rng = np.random.default_rng(12)
        trunk = [
            BiLstmLayer(LstmParams.initialize(2, 2, rng), LstmParams.initialize(2, 2, rng)),
            BiLstmLayer(LstmParams.initialize(4, 2, rng), LstmParams.initialize(4, 2, rng)),
        ]
        X = rng.normal(size=(3, 2))
        fwd, bwd = bilstm_encode(X, trunk)
        fwd_ref, bwd_ref = _scalar_encode(X.tolist(), trunk)
        np.testing.assert_allclose(fwd, fwd_ref, rtol=0, atol=1e-12)
        np.testing.assert_allclose(bwd, bwd_ref, rtol=0, atol=1e-12)

    def test_shapes(self):
        p = LstmParams.initialize(5, 4, np.random.default_rng(0))
        h, c = lstm_cell(np.ones(5), np.zeros(4), np.zeros(4), p)
        self.assertEqual(h.shape, (4,))
        self.assertEqual(c.shape, (4,))
        self.assertTrue(np.all(np.abs(h) < 1.0))

    def test_shape_mismatch(self):
        p = LstmParams.zeros(3, 2)
        with self.assertRaises(HSKShapeException):
            lstm_cell(np.ones(4), np.zeros(2), np.zeros(2), p)
        with self.assertRaises(HSKShapeException):
            LstmParams(W=np.zeros((8, 3)), U=np.zeros((8, 3)), b=np.zeros(8))

    def test_forget_bias_is_one(self):
        p = LstmParams.initialize(3, 4, np.random.default_rng(1))
        np.testing.assert_array_equal(p.b[4:8], np.ones(4))
        np.testing.assert_array_equal(p.b[:4], np.zeros(4))

    def test_direction_matches_cell(self):
        rng = np.random.default_rng(2)
        p = LstmParams.initialize(3, 2, rng)
        X = rng.normal(size=(4, 3))
        states, _ = run_direction(X, p)
        h, c = np.zeros(2), np.zeros(2)
        for t in range(4):
            h, c = lstm_cell(X[t], h, c, p)
            np.testing.assert_allclose(states[t], h, atol=1e-14)
        back, _ = run_direction(X, p, reverse=True)
        h, c = np.zeros(2), np.zeros(2)
        for t in reversed(range(4)):
            h, c = lstm_cell(X[t], h, c, p)
            np.testing.assert_allclose(back[t], h, atol=1e-14)

    def test_encode_shapes(self):
        rng = np.random.default_rng(3)
        trunk = [
            BiLstmLayer(LstmParams.initialize(3, 5, rng), LstmParams.initialize(3, 5, rng)),
            BiLstmLayer(LstmParams.initialize(10, 5, rng), LstmParams.initialize(10, 5, rng)),
        ]
        fwd, bwd = bilstm_encode(rng.normal(size=(7, 3)), trunk)
        self.assertEqual(fwd.shape, (7, 5))
        self.assertEqual(bwd.shape, (7, 5))

    def test_encode_empty(self):
        rng = np.random.default_rng(3)
        trunk = [BiLstmLayer(LstmParams.initialize(3, 2, rng), LstmParams.initialize(3, 2, rng))]
        with self.assertRaises(HSKShapeException):
            bilstm_encode(np.zeros((0, 3)), trunk)


class TestMaxPool(unittest.TestCase):

    def test_hand_example(self):
        fwd = np.array([[1.0, 5.0], [3.0, 5.0]])
        bwd = np.array([[2.0, 0.0], [3.0, 6.0]])
        pooled, prov = max_pool_with_provenance(fwd, bwd)
        np.testing.assert_array_equal(pooled, [3.0, 6.0])
        self.assertEqual(prov.winners(), [(1, Direction.FORWARD), (1, Direction.BACKWARD)])

    def test_ties_prefer_earliest_token_then_forward(self):
        fwd = np.array([[4.0], [4.0]])
        bwd = np.array([[4.0], [1.0]])
        pooled, prov = max_pool_with_provenance(fwd, bwd)
        np.testing.assert_array_equal(pooled, [4.0])
        self.assertEqual(prov.winners(), [(0, Direction.FORWARD)])

    def test_single_token(self):
        pooled, prov = max_pool_with_provenance(np.array([[0.1, -0.2]]), np.array([[0.0, 0.3]]))
        np.testing.assert_array_equal(pooled, [0.1, 0.3])
        np.testing.assert_array_equal(prov.tokens, [0, 0])
        np.testing.assert_array_equal(prov.directions, [0, 1])

    def test_pooled_is_elementwise_max(self):
        rng = np.random.default_rng(4)
        for _ in range(20):
            n, H = rng.integers(1, 8), rng.integers(1, 6)
            fwd, bwd = rng.normal(size=(n, H)), rng.normal(size=(n, H))
            pooled, prov = max_pool_with_provenance(fwd, bwd)
            np.testing.assert_array_equal(pooled, np.maximum(fwd.max(axis=0), bwd.max(axis=0)))
            self.assertTrue(np.all((prov.tokens >= 0) & (prov.tokens < n)))

    def test_mismatch(self):
        with self.assertRaises(HSKShapeException):
            max_pool_with_provenance(np.zeros((2, 3)), np.zeros((2, 4)))
        with self.assertRaises(HSKShapeException):
            max_pool_with_provenance(np.zeros((0, 3)), np.zeros((0, 3)))


class TestHead(unittest.TestCase):

    def test_uniform(self):
        head = HeadParams.zeros(4, 3)
        p = head_forward(np.ones(4), head)
        np.testing.assert_allclose(p, np.full(3, 1.0 / 3.0))
        self.assertAlmostEqual(cross_entropy(p, 2), math.log(3.0), places=12)

    def test_logit_gradient(self):
        logits = np.array([0.5, -1.0, 2.0])
        loss, dlogits = cross_entropy_with_logits(logits, 1)
        e = np.exp(logits)
        np.testing.assert_allclose(dlogits, e / e.sum() - np.array([0.0, 1.0, 0.0]))
        self.assertAlmostEqual(loss, -math.log(e[1] / e.sum()), places=12)

    def test_large_logits_are_stable(self):
        loss, dlogits = cross_entropy_with_logits(np.array([1000.0, 0.0]), 0)
        self.assertTrue(np.isfinite(loss))
        self.assertTrue(np.all(np.isfinite(dlogits)))

    def test_gold_out_of_range(self):
        with self.assertRaises(HSKShapeException):
            cross_entropy(np.array([0.5, 0.5]), 2)
        with self.assertRaises(HSKShapeException):
            cross_entropy_with_logits(np.array([0.5, 0.5]), -1)

    def test_input_mismatch(self):
        with self.assertRaises(HSKShapeException):
            head_forward(np.ones(3), HeadParams.zeros(4, 2))


class TestModel(unittest.TestCase):

    tasks = [TaskSpec(name="a", labels=["x", "y"]), TaskSpec(name="b", labels=["p", "q", "r"])]

    def test_init_is_seeded(self):
        first = init_model(4, 3, self.tasks, np.random.default_rng(7))
        second = init_model(4, 3, self.tasks, np.random.default_rng(7))
        for name, array in first.arrays().items():
            np.testing.assert_array_equal(array, second.arrays()[name])

    def test_array_order(self):
        params = init_model(4, 3, self.tasks, np.random.default_rng(0), layers=2)
        self.assertEqual(list(params.arrays().keys()), [
            "trunk.0.forward.W", "trunk.0.forward.U", "trunk.0.forward.b",
            "trunk.0.backward.W", "trunk.0.backward.U", "trunk.0.backward.b",
            "trunk.1.forward.W", "trunk.1.forward.U", "trunk.1.forward.b",
            "trunk.1.backward.W", "trunk.1.backward.U", "trunk.1.backward.b",
            "head.a.W", "head.a.b", "head.b.W", "head.b.b",
        ])
        self.assertEqual(params.arrays()["trunk.1.forward.W"].shape, (12, 6))

    def test_forward(self):
        params = init_model(4, 3, self.tasks, np.random.default_rng(0))
        X = np.random.default_rng(1).normal(size=(5, 4))
        out = model_forward(params, X, "b")
        self.assertEqual(out.pooled.shape, (3,))
        self.assertEqual(out.logits.shape, (3,))
        self.assertAlmostEqual(float(out.probabilities.sum()), 1.0, places=12)
        self.assertEqual(predict(params, X, "b"), out.predicted)

    def test_unknown_task(self):
        params = init_model(4, 3, self.tasks, np.random.default_rng(0))
        with self.assertRaises(HSKDataException):
            model_forward(params, np.ones((2, 4)), "c")

    def test_empty_batch(self):
        params = init_model(4, 3, self.tasks, np.random.default_rng(0))
        with self.assertRaises(HSKDataException):
            model_gradients(params, [])

    def _batch(self, rng, size: int, d: int = 4):
        batch = []
        for k in range(size):
            task = self.tasks[k % 2]
            X = rng.normal(size=(int(rng.integers(1, 6)), d))
            batch.append((X, int(rng.integers(0, task.num_labels)), task.name))
        return batch

    def test_batch_is_a_mean(self):
        rng = np.random.default_rng(31)
        params = init_model(4, 3, self.tasks, rng)
        batch = self._batch(rng, 6)
        loss, grads = model_gradients(params, batch)
        permuted = [batch[i] for i in rng.permutation(len(batch))]
        for other in [batch + batch, permuted]:
            other_loss, other_grads = model_gradients(params, other)
            self.assertAlmostEqual(loss, other_loss, places=12)
            for name, array in grads.arrays().items():
                np.testing.assert_allclose(other_grads.arrays()[name], array,
                                           rtol=1e-10, atol=1e-15)

    def test_samples_reach_their_own_head_and_the_shared_trunk(self):
        rng = np.random.default_rng(32)
        params = init_model(4, 3, self.tasks, rng, layers=2)
        sample_a, sample_b = self._batch(rng, 2)
        _, grads_a = model_gradients(params, [sample_a])
        _, grads_b = model_gradients(params, [sample_b])
        _, grads_ab = model_gradients(params, [sample_a, sample_b])
        for grads, own, other in [(grads_a, "a", "b"), (grads_b, "b", "a")]:
            named = grads.arrays()
            np.testing.assert_array_equal(named[f"head.{other}.W"], 0.0)
            np.testing.assert_array_equal(named[f"head.{other}.b"], 0.0)
            self.assertTrue(np.any(named[f"head.{own}.W"] != 0.0))
            self.assertTrue(any(np.any(array != 0.0) for name, array in named.items()
                                if name.startswith("trunk.")))
        # a mixed batch averages what each of its samples sends back
        for name, array in grads_ab.arrays().items():
            expected = 0.5 * (grads_a.arrays()[name] + grads_b.arrays()[name])
            np.testing.assert_allclose(array, expected, rtol=1e-10, atol=1e-15)

    def test_gradients_match_finite_differences(self):
        rng = np.random.default_rng(2024)
        eps = 1e-6
        for trial in range(50):
            d, H = int(rng.integers(2, 5)), int(rng.integers(1, 4))
            layers = int(rng.integers(1, 3))
            params = init_model(d, H, self.tasks, rng, layers=layers)
            batch = []
            for _ in range(int(rng.integers(1, 4))):
                task = self.tasks[int(rng.integers(0, 2))]
                X = rng.normal(size=(int(rng.integers(1, 5)), d))
                batch.append((X, int(rng.integers(0, task.num_labels)), task.name))
            loss, grads = model_gradients(params, batch)
            self.assertAlmostEqual(loss, batch_loss(params, batch), places=12)
            analytic, numeric = [], []
            named, gnamed = params.arrays(), grads.arrays()
            for name, array in named.items():
                flat = array.reshape(-1)
                for idx in rng.choice(flat.size, size=min(6, flat.size), replace=False):
                    saved = flat[idx]
                    flat[idx] = saved + eps
                    plus = batch_loss(params, batch)
                    flat[idx] = saved - eps
                    minus = batch_loss(params, batch)
                    flat[idx] = saved
                    numeric.append((plus - minus) / (2 * eps))
                    analytic.append(gnamed[name].reshape(-1)[idx])
            error = _relative_error(np.array(analytic), np.array(numeric))
            self.assertLess(error, 1e-4, f"trial {trial}: relative error {error}")


class TestAdam(unittest.TestCase):

    @staticmethod
    def _reference(theta, grads, hyper):
        # scalar rendition of the update rule
        theta = list(theta)
        m = [0.0] * len(theta)
        v = [0.0] * len(theta)
        for t, g in enumerate(grads, start=1):
            for i in range(len(theta)):
                gi = g[i] + hyper.weight_decay * theta[i]
                m[i] = hyper.beta1 * m[i] + (1 - hyper.beta1) * gi
                v[i] = hyper.beta2 * v[i] + (1 - hyper.beta2) * gi * gi
                m_hat = m[i] / (1 - hyper.beta1 ** t)
                v_hat = v[i] / (1 - hyper.beta2 ** t)
                theta[i] -= hyper.lr * m_hat / (math.sqrt(v_hat) + hyper.eps)
        return theta

    def test_matches_reference(self):
        rng = np.random.default_rng(5)
        for weight_decay in [0.0, 0.01]:
            hyper = AdamHyper(lr=0.01, weight_decay=weight_decay)
            theta = rng.normal(size=4)
            grads = [rng.normal(size=4) for _ in range(6)]
            params = {"w": theta.copy()}
            state = AdamState.for_params(params)
            for g in grads:
                adam_step(params, {"w": g}, state, hyper)
            self.assertEqual(state.t, 6)
            np.testing.assert_allclose(params["w"], self._reference(theta, grads, hyper),
                                       rtol=1e-12, atol=1e-14)

    def test_first_step_size(self):
        params = {"w": np.array([1.0, -1.0])}
        state = AdamState.for_params(params)
        adam_step(params, {"w": np.array([3.0, -0.5])}, state, AdamHyper(lr=0.1))
        # bias correction makes the first step lr * sign(g)
        np.testing.assert_allclose(params["w"], [0.9, -0.9], atol=1e-7)

    def test_non_finite_gradient(self):
        params = {"w": np.array([1.0, 2.0]), "b": np.array([0.5])}
        state = AdamState.for_params(params)
        with self.assertRaises(HSKNumericalException):
            adam_step(params, {"w": np.array([0.1, 0.2]), "b": np.array([np.nan])}, state,
                      AdamHyper())
        np.testing.assert_array_equal(params["w"], [1.0, 2.0])
        np.testing.assert_array_equal(params["b"], [0.5])
        np.testing.assert_array_equal(state.m["w"], [0.0, 0.0])
        self.assertEqual(state.t, 0)

    def test_mismatched_names(self):
        params = {"w": np.zeros(2)}
        state = AdamState.for_params(params)
        with self.assertRaises(HSKShapeException):
            adam_step(params, {"v": np.zeros(2)}, state, AdamHyper())
        with self.assertRaises(HSKShapeException):
            adam_step(params, {"w": np.zeros(3)}, state, AdamHyper())


if __name__ == '__main__':
    unittest.main()
