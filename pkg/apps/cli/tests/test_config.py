import os
import tempfile
from pathlib import Path
from unittest import mock

from django.conf import settings
from django.test import SimpleTestCase, override_settings

from apps.cli.config import OutputFormat, RunConfig, load_config, read_config_file
from apps.core.exceptions import ConfigError
from apps.ladder.types import OmegaVariant
from apps.levelset.types import Scheme


class RunConfigTests(SimpleTestCase):
    """运行配置测试"""

    def setUp(self):
        self.tmp = tempfile.TemporaryDirectory()
        self.addCleanup(self.tmp.cleanup)

    def _write(self, text: str) -> Path:
        path = Path(self.tmp.name) / "run.env"
        path.write_text(text, encoding="utf-8")
        return path

    def test_defaults(self):
        """测试默认值"""
        config = load_config()
        self.assertEqual(config.L, 50)
        self.assertEqual(config.U, 1.0)
        self.assertIs(config.omega, OmegaVariant.CALIBRATED)
        self.assertIs(config.scheme, Scheme.SIMPLE)
        self.assertEqual(list(config.m_range), [1, 2, 3])
        self.assertEqual(config.cell_list, [0])
        self.assertIsNone(config.format)
        self.assertEqual(config.k_sq, 0.5)

    def test_rejects_U_outside_open_interval(self):
        """测试 U = 2.0 被拒绝"""
        with self.assertRaises(ConfigError) as cm:
            load_config(flags={"U": 2.0})
        self.assertTrue(any(err.startswith("U:") for err in cm.exception.data["errors"]))

    def test_rejects_small_L(self):
        """测试 L < L0"""
        with self.assertRaises(ConfigError):
            load_config(flags={"L": 29})
        self.assertEqual(load_config(flags={"L": 30}).L, 30)

    def test_rejects_bad_values(self):
        """测试各字段的校验"""
        for flags in ({"k2": 1.0}, {"k2": 0.0}, {"jobs": 0}, {"tol": 0.0}, {"tol": -1e-8}, {"step": 0.5}):
            with self.subTest(flags=flags), self.assertRaises(ConfigError):
                load_config(flags=flags)

    def test_ranges(self):
        """测试 A..B 语法"""
        config = load_config(flags={"m": " 2 .. 5", "n": "4..4"})
        self.assertEqual(config.m, "2..5")
        self.assertEqual(list(config.m_range), [2, 3, 4, 5])
        self.assertEqual(list(config.n_range), [4])
        for bad in ("3..1", "0..2", "1-3", "a..b", "1..", ""):
            with self.subTest(bad=bad), self.assertRaises(ConfigError):
                load_config(flags={"m": bad})

    def test_cells(self):
        """测试格列表"""
        self.assertEqual(load_config(flags={"cells": "0, 1,3"}).cell_list, [0, 1, 3])
        for bad in ("", "0,-1", "x"):
            with self.subTest(bad=bad), self.assertRaises(ConfigError):
                load_config(flags={"cells": bad})

    def test_omega_aliases(self):
        """测试 ω 的简写"""
        self.assertIs(load_config(flags={"omega": "leading"}).omega, OmegaVariant.LEADING_LOG)
        self.assertIs(load_config(flags={"omega": "mean_square"}).omega, OmegaVariant.MEAN_SQUARE)
        with self.assertRaises(ConfigError):
            load_config(flags={"omega": "quadratic"})

    def test_config_file_overridden_by_flags(self):
        """测试文件 < 命令行"""
        path = self._write("# run\nL=60\nU=0.5\nscheme=cyclic\ncells=0,1\nformat=latex\n")
        config = load_config(path, {"U": 0.75, "jobs": None})
        self.assertEqual(config.L, 60)
        self.assertEqual(config.U, 0.75)
        self.assertIs(config.scheme, Scheme.CYCLIC)
        self.assertEqual(config.cell_list, [0, 1])
        self.assertIs(config.format, OutputFormat.LATEX)
        self.assertEqual(config.jobs, 1)

    def test_unknown_keys_rejected(self):
        """测试文件中的未知键"""
        path = self._write("L=60\nwidth=3\n")
        with self.assertRaises(ConfigError) as cm:
            read_config_file(path)
        self.assertEqual(cm.exception.data["keys"], ["width"])

    def test_missing_file(self):
        """测试文件不存在"""
        with self.assertRaises(ConfigError):
            load_config(Path(self.tmp.name) / "absent.env")

    def test_environment_ignored(self):
        """测试不读取环境变量"""
        with mock.patch.dict(os.environ, {"L": "99", "U": "0.3"}):
            config = RunConfig()
        self.assertEqual((config.L, config.U), (50, 1.0))

    def test_artifact_dict(self):
        """测试写入产物的参数不含输出位置与并行度"""
        data = load_config(flags={"jobs": 4, "out": "x.json", "format": "json"}).artifact_dict()
        self.assertNotIn("out", data)
        self.assertNotIn("jobs", data)
        self.assertNotIn("format", data)
        self.assertEqual(data["omega"], "calibrated")

    def test_defaults_from_settings(self):
        """测试 k2, p, tol, jobs 的默认值取自 settings.CROSSBREED"""
        numeric = {**settings.CROSSBREED, "K_SQ": 0.25, "P": 2, "TOL": 1e-6, "JOBS": 3}
        with override_settings(CROSSBREED=numeric):
            config = load_config()
            self.assertEqual((config.k2, config.p, config.tol, config.jobs), (0.25, 2, 1e-6, 3))
            self.assertEqual(load_config(flags={"jobs": 2}).jobs, 2)
        self.assertEqual(load_config().jobs, 1)
