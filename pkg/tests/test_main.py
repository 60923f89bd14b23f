import unittest
from unittest.mock import patch
import sys
import os
from dataclasses import replace

# Add the src directory to the Python path to allow imports from main
current_dir = os.path.dirname(os.path.abspath(__file__))
src_dir = os.path.join(current_dir, "..", "src")
sys.path.insert(0, src_dir)

from main import EXIT_CONFIG_ERROR, EXIT_CRITERIA_FAILED, EXIT_OK, main
from config_loader import DEFAULT_OUTPUT_DIR, OUTPUT_DIR_ENV, default_config
from experiments import ExperimentReport


class TestMainScriptArguments(unittest.TestCase):

    def common_mocks(self, passed: bool = True):
        """Patch the runner and exporter, returning the class mocks."""
        mocks = {
            'RunnerClass': patch('main.ExperimentRunner').start(),
            'ExporterClass': patch('main.ReportExporter').start(),
            'print': patch('builtins.print').start(),
        }
        patch.dict(os.environ, {}, clear=False).start()
        os.environ.pop(OUTPUT_DIR_ENV, None)

        report = ExperimentReport("converge")
        report.add_criterion("converge_final_error", passed, 1e-4, 1e-3)
        self.report = report
        self.mock_runner_instance = mocks['RunnerClass'].return_value
        self.mock_runner_instance.run.return_value = report
        self.mock_exporter_instance = mocks['ExporterClass'].return_value

        self.addCleanup(patch.stopall)  # Ensure all patches are stopped after each test
        return mocks

    def test_default_arguments(self):
        mocks = self.common_mocks()
        self.assertEqual(main(['converge']), EXIT_OK)

        cfg = mocks['RunnerClass'].call_args.args[0]
        self.assertEqual(cfg, default_config("converge"))
        mocks['ExporterClass'].assert_called_once_with(output_dir=DEFAULT_OUTPUT_DIR)
        self.mock_runner_instance.run.assert_called_once_with()
        self.mock_exporter_instance.save_report.assert_called_once_with(self.report)
        text, filename = self.mock_exporter_instance.save_text.call_args.args
        self.assertEqual(filename, "config.txt")
        self.assertIn("experiment=converge\n", text)

    def test_flags_override_defaults(self):
        mocks = self.common_mocks()
        main(['converge', '--test_function', 'cap', '--alpha', '1.1', '--n_max', '64', '--out', 'custom'])

        cfg = mocks['RunnerClass'].call_args.args[0]
        self.assertEqual(cfg.test_function, "cap")
        self.assertEqual(cfg.alpha, 1.1)
        self.assertEqual(cfg.n_max, 64)
        self.assertEqual(cfg.reference_degree, 2048)
        mocks['ExporterClass'].assert_called_once_with(output_dir='custom')

    @patch('main.load_config_file')
    def test_config_file_below_flags(self, mock_load):
        mocks = self.common_mocks()
        mock_load.side_effect = lambda path, base: replace(base, alpha=2.0, seed=5)
        main(['tn-series', '--config', 'run.txt', '--alpha', '0.7'])

        mock_load.assert_called_once()
        self.assertEqual(mock_load.call_args.args[0], 'run.txt')
        cfg = mocks['RunnerClass'].call_args.args[0]
        self.assertEqual(cfg.alpha, 0.7)
        self.assertEqual(cfg.seed, 5)

    def test_environment_output_dir_wins(self):
        mocks = self.common_mocks()
        os.environ[OUTPUT_DIR_ENV] = "from_env"
        main(['dump-kernel', '--out', 'from_flag'])
        mocks['ExporterClass'].assert_called_once_with(output_dir='from_env')

    def test_failed_criterion_exit_code(self):
        self.common_mocks(passed=False)
        self.assertEqual(main(['converge']), EXIT_CRITERIA_FAILED)

    def test_invalid_value_exit_code(self):
        mocks = self.common_mocks()
        self.assertEqual(main(['converge', '--alpha', '-1']), EXIT_CONFIG_ERROR)
        self.assertEqual(main(['converge', '--n_max', 'lots']), EXIT_CONFIG_ERROR)
        mocks['RunnerClass'].assert_not_called()

    @patch('main.load_config_file')
    def test_missing_config_file_exit_code(self, mock_load):
        self.common_mocks()
        mock_load.side_effect = FileNotFoundError("Could not load run.txt.")
        self.assertEqual(main(['converge', '--config', 'run.txt']), EXIT_CONFIG_ERROR)

    def test_runner_rejection_exit_code(self):
        self.common_mocks()
        self.mock_runner_instance.run.side_effect = ValueError("kernel-bounds needs n_max >= 64")
        self.assertEqual(main(['kernel-bounds', '--n_max', '32']), EXIT_CONFIG_ERROR)
        self.mock_exporter_instance.save_report.assert_not_called()

    def test_invalid_experiment_choice(self):
        self.common_mocks()
        with self.assertRaises(SystemExit):
            main(['plot-everything'])

    def test_unknown_flag(self):
        self.common_mocks()
        with self.assertRaises(SystemExit):
            main(['converge', '--beta', '1'])


if __name__ == '__main__':
    unittest.main()
