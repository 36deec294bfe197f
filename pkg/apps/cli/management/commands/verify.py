from pathlib import Path
from typing import Any, Dict

from django.core.management.base import CommandParser

from apps.cli.base import CrossbreedCommand
from apps.cli.config import OutputFormat, RunConfig
from apps.cli.pipeline import verify_artifact
from apps.cli.schemas import dump_json, load_artifact
from apps.core.exceptions import AccuracyError


class Command(CrossbreedCommand):
    help = "Re-evaluate every factor of a generate artifact from its stored coordinates"

    formats = (OutputFormat.TEXT, OutputFormat.JSON)
    default_format = OutputFormat.TEXT

    def add_arguments(self, parser: CommandParser) -> None:
        parser.add_argument("artifact", help="JSON artifact written by generate")
        super().add_arguments(parser)

    def run(self, config: RunConfig, options: Dict[str, Any]) -> str:
        report = verify_artifact(load_artifact(Path(options["artifact"])))
        if not report.passed:
            failed = [list(entry.rows) for entry in report.entries if not entry.passed]
            self.failure = AccuracyError(
                "artifact failed verification",
                data={"rows": failed, "hybrid_passed": report.hybrid_passed, "tol": report.tolerance},
            )

        if self.output_format(config) is OutputFormat.JSON:
            return dump_json(report)
        lines = [f"hybrid residual={report.hybrid_residual!r}  {'ok' if report.hybrid_passed else 'FAIL'}"]
        for entry in report.entries:
            line = f"{entry.rows[0]} x {entry.rows[1]}  residual={entry.residual!r}  {'ok' if entry.passed else 'FAIL'}"
            if entry.factor_mismatches:
                line += "  mismatched=" + ",".join(entry.factor_mismatches)
            if not entry.stored_sides_consistent:
                line += "  stored sides inconsistent"
            lines.append(line)
        lines.append(f"max_residual={report.max_residual!r}  tolerance={report.tolerance!r}  passed={report.passed}")
        return "\n".join(lines) + "\n"
