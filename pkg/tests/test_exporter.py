import unittest
import os
import shutil
import sys
from unittest.mock import patch

import pandas as pd

# Add the src directory to the Python path
current_dir = os.path.dirname(os.path.abspath(__file__))
src_dir = os.path.join(current_dir, "..", "src")
sys.path.insert(0, src_dir)

from exporter import ReportExporter
from experiments import ExperimentReport


@patch('builtins.print')
class TestReportExporter(unittest.TestCase):
    TEST_OUTPUT_DIR = "test_results_temp"

    def setUp(self):
        """Start every test from a missing output directory."""
        if os.path.exists(self.TEST_OUTPUT_DIR):
            shutil.rmtree(self.TEST_OUTPUT_DIR)

    def tearDown(self):
        if os.path.exists(self.TEST_OUTPUT_DIR):
            shutil.rmtree(self.TEST_OUTPUT_DIR)

    def test_initialization_creates_directory(self, mock_print):
        nested = os.path.join(self.TEST_OUTPUT_DIR, "nested")
        self.assertFalse(os.path.exists(nested))
        ReportExporter(output_dir=nested)
        self.assertTrue(os.path.isdir(nested))

    def test_save_frame_format(self, mock_print):
        exporter = ReportExporter(output_dir=self.TEST_OUTPUT_DIR)
        frame = pd.DataFrame({"n": [1, 2], "value": [0.1, 1.0 / 3.0]})
        path = exporter.save_frame(frame, "values.csv")
        self.assertEqual(path, os.path.join(self.TEST_OUTPUT_DIR, "values.csv"))
        with open(path, "rb") as f:
            content = f.read().decode("utf-8")
        self.assertEqual(content, "n,value\n1,0.10000000000000001\n2,0.33333333333333331\n")
        # 17 significant digits read back to the same doubles
        self.assertEqual(pd.read_csv(path)["value"].tolist(), [0.1, 1.0 / 3.0])

    def test_save_text(self, mock_print):
        exporter = ReportExporter(output_dir=self.TEST_OUTPUT_DIR)
        path = exporter.save_text("alpha=0.5\n", "config.txt")
        with open(path, "r", encoding="utf-8") as f:
            self.assertEqual(f.read(), "alpha=0.5\n")

    def test_save_report_filenames(self, mock_print):
        exporter = ReportExporter(output_dir=self.TEST_OUTPUT_DIR)
        report = ExperimentReport("dump-kernel")
        report.add_metric("n=4", "max_abs_value", 2.0)
        report.add_criterion("dump_row_count", True, 3, 3)
        report.data["kernel"] = pd.DataFrame({"gamma": [0.0, 1.0, 2.0], "value": [1.0, 0.5, 0.25]})
        paths = exporter.save_report(report)
        self.assertEqual([os.path.basename(p) for p in paths],
                         ["report.csv", "summary.csv", "dump-kernel_kernel.csv"])
        summary = pd.read_csv(paths[1])
        self.assertEqual(summary["criterion_id"].tolist(), ["dump_row_count"])
        self.assertTrue(bool(summary["passed"].iloc[0]))

    def test_write_failure_names_path(self, mock_print):
        exporter = ReportExporter(output_dir=self.TEST_OUTPUT_DIR)
        with patch.object(pd.DataFrame, "to_csv", side_effect=PermissionError("read-only")):
            with self.assertRaisesRegex(OSError, "values.csv"):
                exporter.save_frame(pd.DataFrame({"a": [1]}), "values.csv")

    @patch('exporter.os.makedirs')
    def test_directory_failure_propagates(self, mock_makedirs, mock_print):
        mock_makedirs.side_effect = OSError("no space")
        with self.assertRaises(OSError):
            ReportExporter(output_dir=self.TEST_OUTPUT_DIR)


if __name__ == '__main__':
    unittest.main()
