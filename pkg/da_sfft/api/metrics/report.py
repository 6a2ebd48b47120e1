import csv
import os

from da_sfft.api.errors import ShapeError

EVAL_FIELDS = ("sample", "psnr_db", "ssim", "lpips", "fid")

# Perceptual columns kept for schema compatibility, never computed
NOT_AVAILABLE = "n/a"

MEAN_ROW = "mean"


class MetricRow:
    sample: str
    psnr: float
    ssim: float

    def __init__(self, sample: str, psnr: float, ssim: float):
        self.sample = sample
        self.psnr = psnr
        self.ssim = ssim


class MetricReport:
    rows: list[MetricRow]

    def __init__(self, rows: list[MetricRow] = None):
        self.rows = list(rows or [])

    def add(self, sample: str, psnr: float, ssim: float):
        self.rows.append(MetricRow(sample, psnr, ssim))

    def mean(self) -> MetricRow:
        if not self.rows:
            raise ShapeError("Cannot average an empty metric report")

        count = len(self.rows)
        return MetricRow(MEAN_ROW, sum(r.psnr for r in self.rows) / count, sum(r.ssim for r in self.rows) / count)


class EvalCsvRepository:
    # One row per sample; the corpus mean is reported separately
    def write(self, path: str, report: MetricReport):
        directory = os.path.dirname(path)
        if directory:
            os.makedirs(directory, exist_ok=True)

        with open(path, "w", newline="") as stream:
            writer = csv.writer(stream, lineterminator="\n")
            writer.writerow(EVAL_FIELDS)

            for row in report.rows:
                writer.writerow([row.sample, repr(row.psnr), repr(row.ssim), NOT_AVAILABLE, NOT_AVAILABLE])

    def read(self, path: str) -> MetricReport:
        with open(path, newline="") as stream:
            reader = csv.DictReader(stream)

            if tuple(reader.fieldnames or ()) != EVAL_FIELDS:
                raise ValueError("Unexpected eval CSV header " + str(reader.fieldnames))

            rows = [MetricRow(r["sample"], float(r["psnr_db"]), float(r["ssim"])) for r in reader]

        return MetricReport(rows)
