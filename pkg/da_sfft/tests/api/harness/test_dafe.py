import unittest

from da_sfft.api.errors import StateError
from da_sfft.api.harness.dafe import AlignmentReport, DafeTrainingService, held_out_mse
from da_sfft.api.networks.config import AblationMode
from da_sfft.api.networks.state import ALIGNED_FLAG, PRETRAINED_FLAG
from da_sfft.api.utils.clock import Clock
from da_sfft.tests.fixtures import Fixtures


def _pretrained(mode: AblationMode = AblationMode.SfftDafe):
    state = Fixtures.state(mode)
    state.flags[PRETRAINED_FLAG] = 1
    state.apply_freezing()
    return state


class AlignmentReportTest(unittest.TestCase):
    def test_ratio(self):
        self.assertEqual(0.25, AlignmentReport(3, 2.0, 0.5).ratio)
        self.assertEqual(0.0, AlignmentReport(0, 0.0, 0.0).ratio)

    def test_text(self):
        text = AlignmentReport(3, 2.0, 0.5).to_text()

        self.assertIn("steps = 3\n", text)
        self.assertIn("ratio = 0.25\n", text)


class DafeTrainingServiceTest(unittest.TestCase):
    service: DafeTrainingService

    def setUp(self):
        super().setUp()
        self.service = DafeTrainingService(Clock())

    def test_needs_pretrained_encoder(self):
        with self.assertRaises(StateError):
            self.service.run(Fixtures.run_config(), Fixtures.state(), Fixtures.corpus(), Fixtures.corpus(2, "test"))

    def test_needs_dafe_configuration(self):
        with self.assertRaises(StateError):
            self.service.run(Fixtures.run_config(), _pretrained(AblationMode.SfftOnly), Fixtures.corpus(),
                             Fixtures.corpus(2, "test"))

    def test_zero_steps_keep_lq_encoder(self):
        state = _pretrained()
        before = state.fingerprint("lq_encoder")

        report = self.service.run(Fixtures.run_config(dafe_steps=0), state, Fixtures.corpus(),
                                  Fixtures.corpus(2, "test"))

        self.assertEqual(before, state.fingerprint("lq_encoder"))
        self.assertEqual(report.initial_mse, report.final_mse)

    def test_trains_only_lq_encoder(self):
        state = _pretrained()
        hq = state.fingerprint("hq_encoder")
        lq = state.fingerprint("lq_encoder")
        generator = state.fingerprint("generator")

        report = self.service.run(Fixtures.run_config(dafe_steps=3), state, Fixtures.corpus(),
                                  Fixtures.corpus(2, "test"))

        self.assertEqual(hq, state.fingerprint("hq_encoder"))
        self.assertEqual(generator, state.fingerprint("generator"))
        self.assertNotEqual(lq, state.fingerprint("lq_encoder"))
        self.assertEqual(3, report.steps)
        self.assertEqual(1, state.flags[ALIGNED_FLAG])
        self.assertEqual({}, state.optimizers)
        state.check_frozen("lq_encoder")

    def test_report_matches_held_out(self):
        state = _pretrained()
        held_out = Fixtures.corpus(2, "test")

        report = self.service.run(Fixtures.run_config(dafe_steps=2), state, Fixtures.corpus(), held_out)
        self.assertEqual(held_out_mse(state, held_out), report.final_mse)

    def test_rerun_thaws_lq_encoder(self):
        state = _pretrained()
        self.service.run(Fixtures.run_config(dafe_steps=1), state, Fixtures.corpus(), Fixtures.corpus(2, "test"))
        aligned = state.fingerprint("lq_encoder")

        self.service.run(Fixtures.run_config(dafe_steps=1), state, Fixtures.corpus(), Fixtures.corpus(2, "test"))
        self.assertNotEqual(aligned, state.fingerprint("lq_encoder"))
