from typing import Any, Dict

import pandas as pd

from apps.cli.base import CrossbreedCommand
from apps.cli.config import OutputFormat, RunConfig
from apps.cli.pipeline import ladder_stage
from apps.cli.schemas import LadderArtifact, LadderRow, dump_json


class Command(CrossbreedCommand):
    help = "Tabulate phi1, the reverse iterate and the ladder distance rho(L) against pi(1-gamma)L/ln L"

    config_fields = ("Ls", "U", "omega")
    formats = (OutputFormat.TEXT, OutputFormat.JSON, OutputFormat.CSV)
    default_format = OutputFormat.TEXT

    def run(self, config: RunConfig, options: Dict[str, Any]) -> str:
        rows = [LadderRow.from_diagnostic(row) for row in ladder_stage(config)]
        fmt = self.output_format(config)
        if fmt is OutputFormat.JSON:
            return dump_json(LadderArtifact(config=config.artifact_dict(), rows=rows))
        frame = pd.DataFrame.from_records([row.model_dump() for row in rows], columns=list(LadderRow.model_fields))
        if fmt is OutputFormat.CSV:
            return frame.to_csv(index=False, lineterminator="\n")
        return frame.to_string(index=False) + "\n"
