from django.test import SimpleTestCase

from apps.core.exceptions import (
    BaseError,
    ConfigError,
    DegenerateConstantError,
    ErrorCode,
    ErrorReport,
    LocusNotFoundError,
)


class ErrorCodeTests(SimpleTestCase):
    """错误码测试"""

    def test_unique_codes(self):
        """测试错误码不重复"""
        codes = [member.code for member in ErrorCode]
        self.assertEqual(len(codes), len(set(codes)))

    def test_ranges(self):
        """测试按模块分段"""
        self.assertEqual(ErrorCode.DOMAIN_ERROR.code // 1000, 1)
        self.assertEqual(ErrorCode.BRACKET_FAILURE.code // 1000, 2)
        self.assertEqual(ErrorCode.DEGENERATE_CONSTANT.code // 1000, 3)
        self.assertEqual(ErrorCode.LOCUS_NOT_FOUND.code // 1000, 4)
        self.assertEqual(ErrorCode.RESIDUE_MISMATCH.code // 1000, 5)
        self.assertEqual(ErrorCode.ARTIFACT_ERROR.code // 1000, 6)


class BaseErrorTests(SimpleTestCase):
    """异常测试"""

    def test_default_message(self):
        """测试默认消息来自错误码"""
        error = LocusNotFoundError()
        self.assertIs(error.error_code, ErrorCode.LOCUS_NOT_FOUND)
        self.assertEqual(str(error), ErrorCode.LOCUS_NOT_FOUND.message)
        self.assertEqual(error.to_dict(), {"code": 4001, "name": "LOCUS_NOT_FOUND", "message": error.message})

    def test_custom_message_and_data(self):
        """测试自定义消息与数据"""
        error = DegenerateConstantError("c2 vanishes", data={"U": 1.0})
        self.assertEqual(error.to_dict()["data"], {"U": 1.0})
        self.assertIsInstance(error, BaseError)

    def test_report_copies_data(self):
        """测试报告与异常的数据互不影响"""
        error = ConfigError(data={"keys": ["width"]})
        report = error.report()
        error.data["keys"] = []
        self.assertEqual(report, ErrorReport(6001, "CONFIG_ERROR", ErrorCode.CONFIG_ERROR.message, {"keys": ["width"]}))
        self.assertEqual(report.to_dict()["code"], 6001)
