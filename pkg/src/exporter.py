import os

import pandas as pd

if __package__:
    from . import utils
else:
    import utils


class ReportExporter:

    def __init__(self, output_dir: str = "results"):
        """
        Initializes the report exporter.

        Args:
            output_dir (str): The directory where CSV artifacts will be saved.
        """
        self.output_dir = output_dir
        try:
            os.makedirs(self.output_dir, exist_ok=True)
        except OSError as e:
            print(f"Error creating output directory '{self.output_dir}': {e}")
            raise
        print(f"Exporter initialized. Output will be saved to: {os.path.abspath(self.output_dir)}.")

    def save_frame(self, frame: pd.DataFrame, filename: str) -> str:
        """
        Writes one DataFrame as CSV: header row, no index, 17 significant digits, '\\n' line endings.

        Returns:
            str: The full path of the written file.

        Raises:
            OSError: If the file cannot be written; the message names the path.
        """
        filepath = os.path.join(self.output_dir, filename)
        try:
            frame.to_csv(filepath, index=False, float_format=utils.REAL_FORMAT, lineterminator="\n")
        except OSError as e:
            print(f"Error saving {filepath}: {e}")
            raise OSError(f"Could not write {filepath}") from e
        print(f"Saved: {filepath}")
        return filepath

    def save_text(self, text: str, filename: str) -> str:
        """Writes a text artifact such as the resolved config."""
        filepath = os.path.join(self.output_dir, filename)
        try:
            with open(filepath, 'w', encoding='utf-8', newline='\n') as f:
                f.write(text)
        except OSError as e:
            print(f"Error saving {filepath}: {e}")
            raise OSError(f"Could not write {filepath}") from e
        print(f"Saved: {filepath}")
        return filepath

    def save_report(self, report) -> list[str]:
        """Writes report.csv, summary.csv and one <experiment>_<name>.csv per data table of the report."""
        report_frame, summary_frame = report.to_frames()
        paths = [
            self.save_frame(report_frame, utils.construct_filename("report")),
            self.save_frame(summary_frame, utils.construct_filename("summary")),
        ]
        for name in sorted(report.data):
            filename = utils.construct_filename(name, report.experiment)
            paths.append(self.save_frame(report.data[name], filename))
        return paths
