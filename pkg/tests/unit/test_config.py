import os
import tempfile
import unittest

from hsk.config import load_config, parse_config, dump_config
from hsk.exceptions import HSKConfigException
from hsk.types import TrainMode, Precision

TEST_ASSETS_DIR = os.path.abspath(os.path.join(os.path.dirname(__file__), "..", "assets"))
CONFIGS_DIR = os.path.join(TEST_ASSETS_DIR, "configs")


def _task(**extra):
    return {"task.a.path": "a.csv", "task.a.labels": ["x", "y"], **extra}


class TestConfig(unittest.TestCase):

    def test_defaults(self):
        config = parse_config(_task(), base="/data")
        self.assertEqual(config.hidden_size, 64)
        self.assertEqual(config.batch_size, 32)
        self.assertEqual(config.epochs, 300)
        self.assertEqual(config.lr, 0.001)
        self.assertEqual(config.weight_decay, 0.001)
        self.assertEqual(config.eval_every, 10)
        self.assertEqual(config.seed, 0)
        self.assertIs(config.mode, TrainMode.SINGLE)
        self.assertIs(config.precision, Precision.FLOAT64)
        self.assertEqual(config.layers, 2)
        self.assertIsNone(config.embeddings.path)
        self.assertEqual(config.tasks[0].path, "/data/a.csv")
        self.assertEqual(config.tasks[0].fraction, 1.0)

    def test_load_file(self):
        config = load_config(os.path.join(CONFIGS_DIR, "toy.yaml"))
        self.assertEqual(config.hidden_size, 16)
        self.assertEqual(config.task_names, ["toy"])
        self.assertEqual(config.task("toy").labels, ["hate", "offensive", "none"])
        self.assertEqual(config.task("toy").path,
                         os.path.join(TEST_ASSETS_DIR, "corpora", "toy.csv"))
        self.assertEqual(config.embeddings.path,
                         os.path.join(TEST_ASSETS_DIR, "embeddings", "glove_50x8.txt"))

    def test_comma_labels(self):
        config = load_config(os.path.join(CONFIGS_DIR, "tiny.yaml"))
        self.assertEqual(config.task("toy").labels, ["hate", "offensive", "none"])

    def test_task_order_and_fraction(self):
        config = load_config(os.path.join(CONFIGS_DIR, "transfer.yaml"))
        self.assertEqual(config.task_names, ["helper", "target"])
        self.assertEqual(config.task("target").fraction, 0.11)
        self.assertIs(config.mode, TrainMode.TRANSFER)
        with self.assertRaises(HSKConfigException):
            config.task("other")

    def test_unknown_key(self):
        with self.assertRaises(HSKConfigException) as ctx:
            parse_config(_task(hiden_size=3))
        self.assertEqual(ctx.exception.exit_code, 2)

    def test_wrong_type(self):
        with self.assertRaises(HSKConfigException):
            parse_config(_task(hidden_size="big"))
        with self.assertRaises(HSKConfigException):
            parse_config(_task(mode="multi"))
        with self.assertRaises(HSKConfigException):
            parse_config(_task(lr=0))

    def test_eval_every_divides_epochs(self):
        with self.assertRaises(HSKConfigException):
            parse_config(_task(epochs=25, eval_every=10))
        self.assertEqual(parse_config(_task(epochs=30, eval_every=10)).epochs, 30)

    def test_single_mode_takes_one_task(self):
        raw = _task(**{"task.b.path": "b.csv", "task.b.labels": ["p", "q"]})
        with self.assertRaises(HSKConfigException):
            parse_config(raw)
        self.assertEqual(parse_config({**raw, "mode": "transfer"}).task_names, ["a", "b"])

    def test_incomplete_task(self):
        with self.assertRaises(HSKConfigException):
            parse_config({"task.a.path": "a.csv"})
        with self.assertRaises(HSKConfigException):
            parse_config({"task.a.labels": ["x", "y"]})
        with self.assertRaises(HSKConfigException):
            parse_config({"task.a.path": "a.csv", "task.a.labels": "x"})
        with self.assertRaises(HSKConfigException):
            parse_config({"task.a.path": "a.csv", "task.a.labels": ["x", "x"]})

    def test_no_tasks(self):
        with self.assertRaises(HSKConfigException):
            parse_config({})

    def test_schema_version(self):
        with self.assertRaises(HSKConfigException):
            parse_config(_task(schema="9.0"))

    def test_not_a_mapping(self):
        with tempfile.TemporaryDirectory() as tmp:
            fpath = os.path.join(tmp, "config.yaml")
            with open(fpath, "wt") as fout:
                fout.write("- a\n- b\n")
            with self.assertRaises(HSKConfigException):
                load_config(fpath)
            with open(fpath, "wt") as fout:
                fout.write("hidden_size: [1\n")
            with self.assertRaises(HSKConfigException):
                load_config(fpath)
        with self.assertRaises(HSKConfigException):
            load_config(os.path.join(CONFIGS_DIR, "missing.yaml"))

    def test_exponent_only_floats(self):
        with tempfile.TemporaryDirectory() as tmp:
            fpath = os.path.join(tmp, "config.yaml")
            with open(fpath, "wt") as fout:
                fout.write("lr: 1e-3\nweight_decay: 5E-4\nepochs: 20\n"
                           "task.a.path: a.csv\ntask.a.labels: [x, y]\n")
            config = load_config(fpath)
        self.assertEqual(config.lr, 0.001)
        self.assertEqual(config.weight_decay, 0.0005)
        self.assertEqual(config.epochs, 20)
        self.assertIsInstance(config.epochs, int)

    def test_fallback_seed_range(self):
        with self.assertRaises(HSKConfigException):
            parse_config(_task(**{"embeddings.seed": 2 ** 64}))
        config = parse_config(_task(**{"embeddings.seed": 2 ** 64 - 1}))
        self.assertEqual(config.embeddings.seed, 2 ** 64 - 1)

    def test_dump_and_reload(self):
        config = load_config(os.path.join(CONFIGS_DIR, "transfer.yaml"))
        with tempfile.TemporaryDirectory() as tmp:
            fpath = os.path.join(tmp, "config.yaml")
            dump_config(config, fpath)
            reloaded = load_config(fpath)
        self.assertEqual(reloaded.as_flat_dict(), config.as_flat_dict())


if __name__ == '__main__':
    unittest.main()
