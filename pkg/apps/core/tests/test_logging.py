import json
import logging

from django.test import SimpleTestCase

from apps.core.logging import (
    CrossbreedJsonFormatter,
    PerformanceLogger,
    RunContextFilter,
    log_context,
    log_timing,
    verbosity_to_level,
)


class ListHandler(logging.Handler):
    def __init__(self):
        super().__init__()
        self.records = []

    def emit(self, record):
        self.records.append(record)


class LoggingTests(SimpleTestCase):
    """日志工具测试"""

    def setUp(self):
        self.logger = logging.getLogger("apps.tests.logging")
        self.logger.propagate = False
        self.logger.setLevel(logging.DEBUG)
        self.handler = ListHandler()
        self.handler.addFilter(RunContextFilter())
        self.logger.addHandler(self.handler)
        self.addCleanup(self.logger.removeHandler, self.handler)

    def test_context_fields(self):
        """测试上下文字段写入日志"""
        formatter = CrossbreedJsonFormatter(default_fields={"service": "ladder-crossbreed"})
        with log_context(command="generate") as context:
            self.logger.info("Family generated", extra={"data": {"pairs": 3}})
        record = self.handler.records[-1]
        self.assertEqual(record.command, "generate")
        self.assertEqual(record.run_id, context["run_id"])
        payload = json.loads(formatter.format(record))
        self.assertEqual(payload["service"], "ladder-crossbreed")
        self.assertEqual(payload["data"], {"pairs": 3})
        self.assertEqual(payload["message"], "Family generated")

    def test_context_is_restored(self):
        """测试退出上下文后恢复"""
        with log_context(command="outer"):
            with log_context(command="inner") as inner:
                self.assertEqual(inner["command"], "inner")
            self.logger.info("after")
        self.assertEqual(self.handler.records[-1].command, "outer")

    def test_log_timing(self):
        """测试耗时装饰器"""

        @log_timing(logger=self.logger, message="stage finished")
        def stage(x):
            return x * 2

        self.assertEqual(stage(3), 6)
        record = self.handler.records[-1]
        self.assertEqual(record.getMessage(), "stage finished")
        self.assertEqual(record.data["function"], "stage")

    def test_performance_logger(self):
        """测试阶段耗时"""
        performance = PerformanceLogger(logger=self.logger, context={"command": "ladder"})
        with self.assertRaises(RuntimeError):
            performance.checkpoint("model")
        performance.start()
        performance.checkpoint("model")
        durations = performance.end()
        self.assertIn("model", durations)
        self.assertGreaterEqual(durations["total"], durations["model"])

    def test_verbosity(self):
        """测试 verbosity 对应的日志级别"""
        self.assertEqual(verbosity_to_level(0), logging.ERROR)
        self.assertEqual(verbosity_to_level(1), logging.WARNING)
        self.assertEqual(verbosity_to_level(2), logging.INFO)
        self.assertEqual(verbosity_to_level(3), logging.DEBUG)
