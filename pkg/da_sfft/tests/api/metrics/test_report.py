import os
import tempfile
import unittest

from da_sfft.api.errors import ShapeError
from da_sfft.api.metrics.report import EVAL_FIELDS, MEAN_ROW, EvalCsvRepository, MetricReport


class MetricReportTest(unittest.TestCase):
    def test_mean(self):
        report = MetricReport()
        report.add("a", 20.0, 0.5)
        report.add("b", 30.0, 0.7)

        mean = report.mean()
        self.assertEqual(MEAN_ROW, mean.sample)
        self.assertEqual(25.0, mean.psnr)
        self.assertAlmostEqual(0.6, mean.ssim, places=12)

    def test_empty_mean(self):
        with self.assertRaises(ShapeError):
            MetricReport().mean()


class EvalCsvRepositoryTest(unittest.TestCase):
    def test_schema(self):
        path = os.path.join(tempfile.mkdtemp(), "eval.csv")
        report = MetricReport()
        report.add("face_00000", 21.5, 0.75)
        report.add("face_00001", 99.0, 1.0)

        EvalCsvRepository().write(path, report)

        with open(path) as stream:
            lines = stream.read().splitlines()

        self.assertEqual("sample,psnr_db,ssim,lpips,fid", lines[0])
        self.assertEqual("face_00000,21.5,0.75,n/a,n/a", lines[1])
        self.assertEqual(3, len(lines))

    def test_round_trip(self):
        path = os.path.join(tempfile.mkdtemp(), "eval.csv")
        report = MetricReport()
        report.add("x", 17.25, 0.125)

        EvalCsvRepository().write(path, report)
        loaded = EvalCsvRepository().read(path)

        self.assertEqual([("x", 17.25, 0.125)], [(r.sample, r.psnr, r.ssim) for r in loaded.rows])

    def test_foreign_header(self):
        path = os.path.join(tempfile.mkdtemp(), "eval.csv")

        with open(path, "w") as stream:
            stream.write("sample,psnr\nx,1\n")

        with self.assertRaises(ValueError):
            EvalCsvRepository().read(path)

    def test_fields(self):
        self.assertEqual(("sample", "psnr_db", "ssim", "lpips", "fid"), EVAL_FIELDS)
