import logging
from typing import Any, Dict

import pandas as pd

from apps.cli.base import CrossbreedCommand
from apps.cli.config import OutputFormat, RunConfig
from apps.cli.pipeline import hybrid_stage
from apps.cli.schemas import HybridArtifact, HybridSchema, dump_json

logger = logging.getLogger(__name__)

CSV_COLUMNS = ["L", "U", "c1", "c2", "c3", "c4", "lam", "residual"]


class Command(CrossbreedCommand):
    help = "Compute the exact complete hybrid formula c1 c2 + lambda c3 = c4 on [pi L, pi L + U]"

    config_fields = ("L", "U", "omega", "tol")
    formats = (OutputFormat.TEXT, OutputFormat.JSON, OutputFormat.CSV)
    default_format = OutputFormat.JSON

    def run(self, config: RunConfig, options: Dict[str, Any]) -> str:
        h, _ = hybrid_stage(config)
        relative = h.residual / h.c4
        if relative > config.tol:
            logger.warning("Mother formula residual above tolerance", extra={"data": {"residual": relative}})

        fmt = self.output_format(config)
        if fmt is OutputFormat.JSON:
            artifact = HybridArtifact(
                config=config.artifact_dict(),
                hybrid=HybridSchema.from_constants(h),
                mother_residual=relative,
                tolerance=config.tol,
            )
            return dump_json(artifact)
        if fmt is OutputFormat.CSV:
            record = {name: getattr(h, name) for name in CSV_COLUMNS}
            return pd.DataFrame.from_records([record], columns=CSV_COLUMNS).to_csv(index=False, lineterminator="\n")

        lines = [
            f"L = {h.L}",
            f"U = {h.U!r}",
            f"base_seg = [{h.base_seg.a!r}, {h.base_seg.b!r}]",
            f"rev_seg = [{h.rev_seg.a!r}, {h.rev_seg.b!r}]",
            f"alpha0 = [{h.alpha0[0]!r}, {h.alpha0[1]!r}]",
            f"alpha1 = [{h.alpha1[0]!r}, {h.alpha1[1]!r}]",
            f"beta1 = {h.beta1!r}",
        ]
        lines += [f"{name} = {getattr(h, name)!r}" for name in ("c1", "c2", "c3", "c4", "lam")]
        lines.append(f"mother_residual = {relative!r}")
        return "\n".join(lines) + "\n"
