import os
import subprocess
import sys
import tempfile
import unittest
from unittest.mock import MagicMock, patch

import da_sfft
from da_sfft import hooks
from da_sfft.api.errors import FrozenParameterError, GradientCheckError, StateError
from da_sfft.api.harness.api import run_config
from da_sfft.api.metrics.report import EVAL_FIELDS, EvalCsvRepository
from da_sfft.cli import EXIT_ERROR, EXIT_FAILURE, _resolve, build_parser, main

TINY_MODEL = ["--resolution", "32", "--channels", "8,8,4,4", "--hidden-width", "4", "--embedding-width", "8",
              "--train-size", "2", "--test-size", "2", "--batch-size", "2", "--log-interval", "1",
              "--m-min", "1", "--m-max", "1"]


class ParserTest(unittest.TestCase):
    def test_every_command_has_a_parser(self):
        parser = build_parser()

        for command in hooks.commands:
            args = ["--model", "m", "--manifest", "x", "--csv", "c"] if command == "eval" else []
            if command == "facegen":
                args = ["--seed", "1", "--count", "1", "--out", "o"]
            if command == "degrade":
                args = ["--manifest", "x", "--seed", "1", "--out", "o"]
            if command == "restore":
                args = ["--model", "m", "--out", "o"]

            self.assertEqual(command, parser.parse_args([command] + args).command)

    def test_config_flags(self):
        args = build_parser().parse_args(["train", "--seed", "5", "--gan-steps", "3", "--lambda-g", "0"])

        self.assertEqual("5", args.master_seed)
        self.assertEqual("3", args.gan_steps)
        self.assertEqual("0", args.lambda_g)
        self.assertIsNone(args.dafe_steps)

    def test_master_seed_alias(self):
        self.assertEqual("8", build_parser().parse_args(["align-dafe", "--master-seed", "8"]).master_seed)


class RunConfigFlagsTest(unittest.TestCase):
    def test_file_then_flags_then_environment(self):
        work_dir = tempfile.mkdtemp()
        path = os.path.join(work_dir, "run.conf")

        with open(path, "w") as stream:
            stream.write("gan_steps = 7\nmaster_seed = 3\ntrain_size = 9\n")

        args = build_parser().parse_args(["train", "--config", path, "--seed", "5", "--train-size", "4",
                                          "--work-dir", work_dir])

        with patch.dict(os.environ, {"DASFFT_SEED": ""}):
            config = run_config(args)

        self.assertEqual(5, config.master_seed)
        self.assertEqual(7, config.gan_steps)
        self.assertEqual(4, config.train_size)

        with patch.dict(os.environ, {"DASFFT_SEED": "42"}):
            self.assertEqual(42, run_config(args).master_seed)


class MainTest(unittest.TestCase):
    def _main(self, error: Exception) -> int:
        with patch("da_sfft.cli._resolve", return_value=MagicMock(side_effect=error)):
            return main(["gradcheck"])

    def test_success(self):
        handler = MagicMock(return_value=0)

        with patch("da_sfft.cli._resolve", return_value=handler) as resolve:
            self.assertEqual(0, main(["gradcheck", "--seed", "3"]))

        resolve.assert_called_once_with(hooks.commands["gradcheck"])
        self.assertEqual(3, handler.call_args.args[0].seed)

    def test_gradient_failure(self):
        self.assertEqual(EXIT_FAILURE, self._main(GradientCheckError("broken")))

    def test_errors(self):
        for error in (ValueError("bad"), StateError("missing"), FrozenParameterError("changed"), OSError("io")):
            self.assertEqual(EXIT_ERROR, self._main(error))

    def test_handlers_resolve(self):
        for path in hooks.commands.values():
            self.assertTrue(callable(_resolve(path)))


class CliWorkflowTest(unittest.TestCase):
    def test_full_pipeline(self):
        root = tempfile.mkdtemp()
        clean, degraded, work = (os.path.join(root, d) for d in ("clean", "degraded", "work"))
        stage = TINY_MODEL + ["--work-dir", work, "--seed", "3"]

        self.assertEqual(0, main(["facegen", "--seed", "1", "--count", "2", "--res", "32", "--out", clean]))
        self.assertEqual(0, main(["degrade", "--manifest", os.path.join(clean, "manifest.csv"), "--seed", "2",
                                  "--m-min", "1", "--m-max", "1", "--out", degraded]))

        manifest = os.path.join(degraded, "manifest.csv")
        model = os.path.join(work, "model.dasfft")

        self.assertEqual(0, main(["pretrain-encoder", "--pretrain-steps", "1"] + stage))
        self.assertEqual(0, main(["align-dafe", "--dafe-steps", "1"] + stage))
        self.assertEqual(0, main(["train", "--gan-steps", "1", "--manifest", manifest] + stage))
        self.assertTrue(os.path.exists(os.path.join(work, "alignment.txt")))
        self.assertTrue(os.path.exists(os.path.join(work, "train_log.csv")))

        csv_path = os.path.join(work, "eval.csv")
        self.assertEqual(0, main(["eval", "--model", model, "--manifest", manifest, "--csv", csv_path,
                                  "--work-dir", work]))

        with open(csv_path) as stream:
            self.assertEqual(",".join(EVAL_FIELDS), stream.readline().strip())
        self.assertEqual(2, len(EvalCsvRepository().read(csv_path).rows))

        out_dir = os.path.join(work, "restored")
        self.assertEqual(0, main(["restore", "--model", model, "--manifest", manifest, "--out", out_dir]))
        self.assertEqual(2, len(os.listdir(out_dir)))

    def test_restore_needs_inputs(self):
        self.assertEqual(EXIT_ERROR, main(["restore", "--model", "m", "--out", "o"]))

    def test_untrained_model(self):
        work = tempfile.mkdtemp()

        self.assertEqual(0, main(["pretrain-encoder", "--pretrain-steps", "0", "--work-dir", work] + TINY_MODEL))
        self.assertEqual(EXIT_ERROR, main(["restore", "--model", os.path.join(work, "model.dasfft"),
                                           "--in", "a.ppm", "--parsing", "a.pgm", "--out", "b.ppm"]))

    def test_train_before_alignment(self):
        work = tempfile.mkdtemp()

        self.assertEqual(0, main(["pretrain-encoder", "--pretrain-steps", "0", "--work-dir", work] + TINY_MODEL))
        self.assertEqual(EXIT_ERROR, main(["train", "--work-dir", work] + TINY_MODEL))


# Every command runs in a fresh interpreter; two runs with the same seeds must write identical bytes
class ProcessDeterminismTest(unittest.TestCase):
    env: dict[str, str]

    def setUp(self):
        super().setUp()

        package_root = os.path.dirname(os.path.dirname(os.path.abspath(da_sfft.__file__)))
        self.env = dict(os.environ)
        self.env["PYTHONPATH"] = os.pathsep.join(p for p in (package_root, self.env.get("PYTHONPATH")) if p)
        self.env.pop("DASFFT_SEED", None)

    def _command(self, *args: str):
        subprocess.run([sys.executable, "-m", "da_sfft"] + list(args), env=self.env, check=True,
                       stdout=subprocess.DEVNULL, stderr=subprocess.DEVNULL)

    def _pipeline(self, root: str):
        clean, degraded, work = (os.path.join(root, d) for d in ("clean", "degraded", "work"))
        stage = TINY_MODEL + ["--work-dir", work, "--seed", "3"]

        self._command("facegen", "--seed", "1", "--count", "2", "--res", "32", "--out", clean)
        self._command("degrade", "--manifest", os.path.join(clean, "manifest.csv"), "--seed", "2", "--m-min", "1",
                      "--m-max", "1", "--out", degraded)
        self._command("pretrain-encoder", "--pretrain-steps", "1", *stage)
        self._command("align-dafe", "--dafe-steps", "1", *stage)
        self._command("train", "--gan-steps", "2", "--manifest", os.path.join(degraded, "manifest.csv"), *stage)

    @staticmethod
    def _outputs(root: str) -> dict[str, bytes]:
        outputs = {}

        for directory in ("degraded", "work"):
            for name in sorted(os.listdir(os.path.join(root, directory))):
                path = os.path.join(root, directory, name)
                if os.path.isfile(path):
                    with open(path, "rb") as stream:
                        outputs[directory + "/" + name] = stream.read()

        return outputs

    def test_same_seed_same_bytes(self):
        root = tempfile.mkdtemp()
        first, second = os.path.join(root, "a"), os.path.join(root, "b")

        self._pipeline(first)
        self._pipeline(second)

        outputs = self._outputs(first)
        self.assertIn("work/model.dasfft", outputs)
        self.assertIn("work/train_log.csv", outputs)
        self.assertIn("degraded/manifest.csv", outputs)
        self.assertEqual(outputs, self._outputs(second))
