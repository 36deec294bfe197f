from typing import Any, Dict

from apps.cli.base import CrossbreedCommand
from apps.cli.config import OutputFormat, RunConfig
from apps.cli.pipeline import generate_artifact, generate_stage
from apps.cli.schemas import dump_json
from apps.crossbreed.render import render_latex
from apps.crossbreed.services import residual_frame


class Command(CrossbreedCommand):
    help = "Crossbreed row equations into meta-functional equations; failed pairs are reported, not fatal"

    config_fields = ("L", "U", "omega", "k2", "p", "scheme", "m", "n", "cells", "tol", "jobs")
    formats = (OutputFormat.JSON, OutputFormat.CSV, OutputFormat.LATEX, OutputFormat.TEXT)
    default_format = OutputFormat.JSON

    def run(self, config: RunConfig, options: Dict[str, Any]) -> str:
        h, result = generate_stage(config)
        fmt = self.output_format(config)
        if fmt is OutputFormat.JSON:
            return dump_json(generate_artifact(config, h, result))
        if fmt is OutputFormat.CSV:
            return residual_frame(result.equations).to_csv(index=False, lineterminator="\n")
        if fmt is OutputFormat.LATEX:
            return "".join(render_latex(meta) + "\n\n" for meta in result.equations)

        lines = []
        for meta in result.equations:
            parents = " x ".join(meta.parents)
            status = "ok" if meta.residual <= config.tol else "FAIL"
            lines.append(
                f"{parents}  class={meta.pair_class.label}  {meta.pair_class.interaction}  "
                f"residual={meta.residual!r}  {status}"
            )
        for report in result.failures:
            lines.append(f"failure {report.name} ({report.code}): {report.message} {report.data.get('pair', '')}")
        lines.append(f"equations={len(result.equations)}  failures={len(result.failures)}")
        return "\n".join(lines) + "\n"
