import json
from typing import Any, Dict

from apps.cli.base import CrossbreedCommand
from apps.cli.config import OutputFormat, RunConfig
from apps.cli.pipeline import levelset_stage
from apps.core.exceptions import LocusNotFoundError, PoleProximityError, StepFailureError
from apps.levelset.services import locus_frame


class Command(CrossbreedCommand):
    help = "Find the four level-curve points of a row, or trace one of them as a polyline"

    config_fields = ("L", "U", "omega", "k2", "p", "scheme", "row", "slot", "trace", "step")
    formats = (OutputFormat.CSV, OutputFormat.JSON, OutputFormat.TEXT)
    default_format = OutputFormat.CSV
    exit_codes = {LocusNotFoundError: 3, StepFailureError: 3, PoleProximityError: 3}

    def run(self, config: RunConfig, options: Dict[str, Any]) -> str:
        frame = locus_frame(levelset_stage(config))
        fmt = self.output_format(config)
        if fmt is OutputFormat.CSV:
            return frame.to_csv(index=False, lineterminator="\n")
        if fmt is OutputFormat.JSON:
            return json.dumps(frame.to_dict(orient="records"), sort_keys=True, indent=2) + "\n"
        return frame.to_string(index=False) + "\n"
