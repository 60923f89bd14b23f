import os
import sys
import unittest
from dataclasses import replace
from unittest.mock import mock_open, patch

SRC_PATH = os.path.join(os.path.dirname(os.path.dirname(__file__)), 'src')
if SRC_PATH not in sys.path:
    sys.path.append(SRC_PATH)

from config_loader import (ALL_EXPERIMENTS, CONFIG_KEYS, ExperimentConfig, apply_overrides, coerce_value,
                           default_config, load_config_file, parse_config_text, serialize_config,
                           validate_config)


class TestDefaults(unittest.TestCase):

    def test_experiment_defaults_applied(self):
        cfg = default_config("converge")
        self.assertEqual(cfg.experiment, "converge")
        self.assertEqual(cfg.alpha, 0.6)
        self.assertEqual(cfg.reference_degree, 2048)
        self.assertEqual(default_config("maximal-ineq").n_max, 256)
        self.assertEqual(default_config("dump-kernel").n_max, 64)

    def test_every_default_is_valid(self):
        for experiment in ALL_EXPERIMENTS:
            self.assertEqual(validate_config(default_config(experiment)).experiment, experiment)

    def test_unknown_experiment(self):
        with self.assertRaises(ValueError):
            default_config("kernel-plot")


class TestParsing(unittest.TestCase):

    def test_serialize_then_parse_restores_config(self):
        cfg = replace(default_config("tn-series"), alpha=0.1 + 0.2, heat_t=1e-7, output_dir="out/run 1")
        self.assertEqual(parse_config_text(serialize_config(cfg)), cfg)

    def test_serialized_keys_in_field_order(self):
        lines = serialize_config(ExperimentConfig()).splitlines()
        self.assertEqual([line.split("=", 1)[0] for line in lines], list(CONFIG_KEYS))

    def test_comments_and_blank_lines(self):
        text = "# a comment\n\nalpha = 1.25  # trailing\n   \nn_max=32\n"
        cfg = parse_config_text(text, default_config("converge"))
        self.assertEqual(cfg.alpha, 1.25)
        self.assertEqual(cfg.n_max, 32)
        self.assertEqual(cfg.experiment, "converge")

    def test_malformed_line_reports_number(self):
        with self.assertRaisesRegex(ValueError, "Line 2"):
            parse_config_text("alpha=1\nalpha 2\n")

    def test_unknown_key_reports_number(self):
        with self.assertRaisesRegex(KeyError, "Line 3"):
            parse_config_text("alpha=1\n\nbeta=2\n")

    def test_bad_type_reports_number(self):
        with self.assertRaisesRegex(ValueError, "Line 1"):
            parse_config_text("n_max=many\n")

    def test_coerce_value(self):
        self.assertEqual(coerce_value("n_max", " 64 "), 64)
        self.assertEqual(coerce_value("n_max", 64.0), 64)
        self.assertEqual(coerce_value("alpha", "0.5"), 0.5)
        self.assertEqual(coerce_value("method", "cesaro"), "cesaro")
        with self.assertRaises(ValueError):
            coerce_value("seed", "1.5")
        with self.assertRaises(KeyError):
            coerce_value("colour", "red")


class TestLoadConfigFile(unittest.TestCase):

    @patch('config_loader.os.path.exists')
    def test_missing_file(self, mock_exists):
        mock_exists.return_value = False
        with self.assertRaises(FileNotFoundError):
            load_config_file("missing.txt")

    @patch('builtins.open', new_callable=mock_open, read_data="alpha=0.75\nmethod=cesaro\n")
    @patch('config_loader.os.path.exists')
    def test_loads_over_base(self, mock_exists, mock_file):
        mock_exists.return_value = True
        cfg = load_config_file("run.txt", default_config("dump-kernel"))
        mock_file.assert_called_once_with("run.txt", "r", encoding="utf-8")
        self.assertEqual(cfg.alpha, 0.75)
        self.assertEqual(cfg.method, "cesaro")
        self.assertEqual(cfg.n_max, 64)

    @patch('builtins.open')
    @patch('config_loader.os.path.exists')
    def test_unreadable_file(self, mock_exists, mock_file):
        mock_exists.return_value = True
        mock_file.side_effect = PermissionError("denied")
        with self.assertRaises(FileNotFoundError):
            load_config_file("locked.txt")


class TestOverridesAndValidation(unittest.TestCase):

    def test_overrides_skip_none_and_coerce(self):
        cfg = apply_overrides(ExperimentConfig(), {"alpha": "1.5", "n_max": None, "seed": "9"})
        self.assertEqual(cfg.alpha, 1.5)
        self.assertEqual(cfg.n_max, ExperimentConfig().n_max)
        self.assertEqual(cfg.seed, 9)

    def test_rejections(self):
        bad_values = [
            {"method": "abel"},
            {"test_function": "gaussian"},
            {"spectrum": "nu"},
            {"dim_n": 0},
            {"alpha": -0.1},
            {"heat_t": 0.0},
            {"cap_radius": 3.5},
            {"gamma0": 0.0},
            {"tn_terms": 1},
            {"output_dir": ""},
            {"output_dir": "runs#1"},
            {"output_dir": "runs\n1"},
        ]
        for values in bad_values:
            with self.assertRaises(ValueError, msg=str(values)):
                validate_config(replace(ExperimentConfig(), **values))

    def test_accepted_output_dir_round_trips(self):
        cfg = validate_config(replace(ExperimentConfig(), output_dir="runs/cap run=2"))
        self.assertEqual(parse_config_text(serialize_config(cfg)), cfg)

    def test_boundary_values_accepted(self):
        cfg = replace(ExperimentConfig(), alpha=0.0, tau=0.0, n_max=0, gamma0=3.141592653589793, dim_n=1)
        self.assertIs(validate_config(cfg), cfg)


if __name__ == '__main__':
    unittest.main()
