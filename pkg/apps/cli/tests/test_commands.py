import io
import json
import math
import tempfile
from pathlib import Path
from unittest import mock

import pandas as pd
import pytest
from django.core.management import call_command
from django.core.management.base import CommandError
from django.test import SimpleTestCase

from apps.cli.schemas import GenerateArtifact, HybridArtifact
from apps.core.exceptions import DegenerateConstantError, LocusNotFoundError
from apps.levelset.services import CSV_COLUMNS
from apps.specfun.dispatch import eval_abs
from apps.specfun.types import FunctionTag


def run(*args, **options) -> str:
    stdout = io.StringIO()
    call_command(*args, stdout=stdout, **options)
    return stdout.getvalue()


def _tag(label: str) -> FunctionTag:
    if label.startswith("cn"):
        return FunctionTag.cn(0.5)
    if label.startswith("J"):
        return FunctionTag.bessel_j(0)
    return FunctionTag.zeta() if label == "zeta" else FunctionTag.gamma()


class HybridCommandTests(SimpleTestCase):
    """hybrid 命令测试"""

    def test_json_report(self):
        """测试 L = 50, U = 1 的残差与 schema 往返"""
        text = run("hybrid", L=50, U=1.0)
        artifact = HybridArtifact.model_validate_json(text)
        self.assertLessEqual(artifact.hybrid.residual, 1e-8 * artifact.hybrid.c4)
        self.assertLessEqual(artifact.mother_residual, 1e-8)
        self.assertEqual(artifact.config["L"], 50)
        self.assertEqual(json.loads(artifact.model_dump_json()), json.loads(text))

    def test_text_and_csv(self):
        """测试文本与 CSV 输出"""
        text = run("hybrid", L=50, U=1.0, format="text")
        self.assertIn("mother_residual = ", text)
        self.assertTrue(text.startswith("L = 50\n"))
        frame = pd.read_csv(io.StringIO(run("hybrid", L=50, U=1.0, format="csv")))
        self.assertEqual(list(frame.columns), ["L", "U", "c1", "c2", "c3", "c4", "lam", "residual"])
        self.assertEqual(len(frame), 1)

    def test_rejects_U(self):
        """测试 U = 2.0 以退出码 2 拒绝"""
        with self.assertRaises(CommandError) as cm:
            run("hybrid", U=2.0)
        self.assertEqual(cm.exception.returncode, 2)

    def test_rejects_unsupported_format(self):
        """测试 hybrid 不支持 latex"""
        with tempfile.TemporaryDirectory() as tmp:
            path = Path(tmp) / "run.env"
            path.write_text("format=latex\n", encoding="utf-8")
            with self.assertRaises(CommandError) as cm:
                run("hybrid", config_file=str(path))
        self.assertEqual(cm.exception.returncode, 2)

    def test_degenerate_exit_code(self):
        """测试常数退化时退出码为 2"""
        error = DegenerateConstantError(data={"constants": {"c2": 0.0}})
        with mock.patch("apps.cli.pipeline.compute_hybrid_constants", side_effect=error):
            with self.assertRaises(CommandError) as cm:
                run("hybrid", L=50, U=1.0)
        self.assertEqual(cm.exception.returncode, 2)


class LevelsetCommandTests(SimpleTestCase):
    """levelset 命令测试"""

    def test_four_validated_points(self):
        """测试每行四个点, 列固定, 且都在水平集上"""
        frame = pd.read_csv(io.StringIO(run("levelset", L=50, U=1.0, row=1)))
        self.assertEqual(list(frame.columns), CSV_COLUMNS)
        self.assertEqual(len(frame), 4)
        for record in frame.itertuples(index=False):
            value = eval_abs(_tag(record.tag), int(record.n), complex(record.re, record.im))
            self.assertLess(abs(value - record.c) / record.c, 1e-9)

    def test_trace_polyline(self):
        """测试 --trace 200 给出 200 个点"""
        frame = pd.read_csv(io.StringIO(run("levelset", L=50, U=1.0, row=1, slot=2, trace=200)))
        self.assertEqual(len(frame), 200)
        self.assertTrue((frame["tag"] == "gamma").all())
        relative = (frame["achieved"] - frame["c"]).abs() / frame["c"]
        self.assertLess(relative.max(), 1e-9)

    def test_not_found_exit_code(self):
        """测试找不到点时退出码为 3"""
        with mock.patch("apps.cli.pipeline.build_locus_family", side_effect=LocusNotFoundError()):
            with self.assertRaises(CommandError) as cm:
                run("levelset", L=50, U=1.0)
        self.assertEqual(cm.exception.returncode, 3)


class GenerateVerifyTests(SimpleTestCase):
    """generate / verify 命令测试"""

    @classmethod
    def setUpClass(cls):
        super().setUpClass()
        cls.tmp = tempfile.TemporaryDirectory()
        cls.path = Path(cls.tmp.name) / "simple.json"
        run("generate", L=50, U=1.0, scheme="simple", m="1..3", n="1..3", out=str(cls.path))
        cls.text = cls.path.read_text(encoding="utf-8")
        cls.artifact = GenerateArtifact.model_validate_json(cls.text)

    @classmethod
    def tearDownClass(cls):
        cls.tmp.cleanup()
        super().tearDownClass()

    def _corrupt(self, mutate) -> Path:
        data = json.loads(self.text)
        mutate(data)
        path = Path(self.tmp.name) / "corrupted.json"
        path.write_text(json.dumps(data), encoding="utf-8")
        return path

    def test_three_pairs(self):
        """测试 m, n ∈ 1..3 给出三个无序对"""
        self.assertEqual(self.artifact.failures, [])
        self.assertEqual([eq.rows for eq in self.artifact.equations], [(1, 2), (1, 3), (2, 3)])
        for eq in self.artifact.equations:
            self.assertLessEqual(eq.residual, 1e-8)
            self.assertEqual(eq.class_label, "simple")
            self.assertIsNotNone(eq.typeset)
        self.assertEqual(self.artifact.tolerance, 1e-8)

    def test_json_layout(self):
        """测试键排序与缩进, 不含时间戳"""
        data = json.loads(self.text)
        self.assertEqual(self.text, json.dumps(data, sort_keys=True, indent=2) + "\n")
        self.assertEqual(sorted(data), ["config", "equations", "failures", "hybrid", "tolerance"])

    def test_deterministic(self):
        """测试同一配置输出逐字节相同"""
        again = run("generate", L=50, U=1.0, scheme="simple", m="1..3", n="1..3")
        self.assertEqual(again, self.text)

    def test_csv_and_latex(self):
        """测试残差表与 LaTeX 输出"""
        frame = pd.read_csv(io.StringIO(run("generate", L=50, U=1.0, m="1..2", n="1..2", format="csv")))
        self.assertEqual(len(frame), 1)
        self.assertEqual((frame["row_a"][0], frame["row_b"][0]), (1, 2))
        latex = run("generate", L=50, U=1.0, m="1..2", n="1..2", format="latex")
        self.assertIn("(1)\\times (2)", latex)
        self.assertEqual(latex.count("\\begin{split}"), 1)

    def test_verify_fresh_artifact(self):
        """测试新产物全部通过, 且复核可重复"""
        first = run("verify", str(self.path), format="json")
        second = run("verify", str(self.path), format="json")
        self.assertEqual(first, second)
        report = json.loads(first)
        self.assertTrue(report["passed"])
        self.assertEqual(len(report["entries"]), 3)
        self.assertTrue(all(not e["factor_mismatches"] for e in report["entries"]))

    def test_verify_flags_corrupted_factor(self):
        """测试改动一个因子值后被标出"""

        def mutate(data):
            factor = data["equations"][1]["lhs_factors"][0][0]
            factor["value"] *= 1.001

        path = self._corrupt(mutate)
        stdout = io.StringIO()
        with self.assertRaises(CommandError) as cm:
            call_command("verify", str(path), format="json", stdout=stdout)
        self.assertEqual(cm.exception.returncode, 1)
        report = json.loads(stdout.getvalue())
        self.assertFalse(report["passed"])
        self.assertTrue(report["entries"][0]["passed"])
        self.assertFalse(report["entries"][1]["passed"])
        self.assertEqual(report["entries"][1]["factor_mismatches"], ["zeta(1,1,1)"])

    def test_verify_flags_moved_point(self):
        """测试移动点坐标后残差超限"""

        def mutate(data):
            for term in data["equations"][0]["lhs_factors"]:
                for factor in term:
                    if factor["kind"] == "zeta":
                        factor["re"] += 1e-3

        path = self._corrupt(mutate)
        with self.assertRaises(CommandError) as cm:
            run("verify", str(path))
        self.assertEqual(cm.exception.returncode, 1)

    def test_verify_malformed_artifact(self):
        """测试不合 schema 的产物退出码为 2"""
        path = self._corrupt(lambda data: data.pop("hybrid"))
        with self.assertRaises(CommandError) as cm:
            run("verify", str(path))
        self.assertEqual(cm.exception.returncode, 2)
        with self.assertRaises(CommandError) as cm:
            run("verify", str(Path(self.tmp.name) / "absent.json"))
        self.assertEqual(cm.exception.returncode, 2)

    def test_failed_pair_keeps_exit_zero(self):
        """测试单个对失败时仍正常退出并记入 failures"""
        error = LocusNotFoundError(data={"row": 2})
        with mock.patch("apps.crossbreed.services.build_locus_family", side_effect=error):
            text = run("generate", L=50, U=1.0, m="1..2", n="1..2")
        artifact = GenerateArtifact.model_validate_json(text)
        self.assertEqual(artifact.equations, [])
        self.assertEqual(len(artifact.failures), 1)
        self.assertEqual(artifact.failures[0].name, "LOCUS_NOT_FOUND")
        self.assertEqual(artifact.failures[0].data["pair"], [1, 2])


class LadderCommandTests(SimpleTestCase):
    """ladder 命令测试"""

    def test_diagnostics(self):
        """测试 ρ > 0 与往返误差"""
        frame = pd.read_csv(io.StringIO(run("ladder", Ls="100,200", format="csv")))
        self.assertEqual(list(frame["L"]), [100, 200])
        self.assertTrue((frame["rho"] > 0).all())
        self.assertLessEqual(frame["round_trip_error"].max(), 1e-9)
        self.assertTrue(all(math.isclose(r, math.pi * L) for r, L in zip(frame["T"], frame["L"])))

    @pytest.mark.slow
    def test_distance_ratio(self):
        """测试 L ∈ {10³, 10⁴} 的比值在 [0.5, 2] 内"""
        data = json.loads(run("ladder", Ls="1000,10000", omega="calibrated", format="json"))
        for row in data["rows"]:
            self.assertGreater(row["rho"], 0.0)
            self.assertTrue(0.5 <= row["ratio"] <= 2.0, msg=row)


@pytest.mark.slow
class CyclicGenerateTests(SimpleTestCase):
    """Cyclic 方案的 generate"""

    def test_cells_zero_and_one(self):
        """测试格 0, 1 给出六个格内类别与格间类别"""
        artifact = GenerateArtifact.model_validate_json(
            run("generate", L=50, U=1.0, scheme="cyclic", cells="0,1", jobs=2)
        )
        self.assertEqual(artifact.failures, [])
        self.assertEqual(len(artifact.equations), 28)
        internal = {eq.class_label for eq in artifact.equations if eq.interaction == "internal"}
        self.assertEqual(internal, {"(1,2)", "(1,3)", "(1,4)", "(2,3)", "(2,4)", "(3,4)"})
        self.assertIn("same-residue", {eq.class_label for eq in artifact.equations})
        pair = next(eq for eq in artifact.equations if eq.rows == (1, 4))
        self.assertTrue(pair.typeset["matches"])
