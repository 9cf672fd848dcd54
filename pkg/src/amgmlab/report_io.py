"""CSV and JSON report writers with a reproducibility header.

Every file starts with the full effective run configuration; re-running
from that header reproduces the data section byte for byte.  CSV uses `.`
decimals, `,` separators, and 17-significant-digit floats.
"""

import json

from .checks import GapReport


def config_header(config: dict) -> str:
    return "# config: " + json.dumps(config, sort_keys=True)


def gap_reports_csv(config: dict, reports: list[GapReport]) -> str:
    lines = [config_header(config), ",".join(GapReport.CSV_FIELDS)]
    for rep in reports:
        row = rep.csv_row()
        # params JSON may contain commas; quote that cell
        row[-1] = '"' + row[-1].replace('"', '""') + '"'
        lines.append(",".join(row))
    return "\n".join(lines) + "\n"


def gap_reports_json(config: dict, reports: list[GapReport]) -> str:
    return json.dumps({"config": config,
                       "reports": [r.to_dict() for r in reports]},
                      indent=2, sort_keys=True)


def write_text(path: str, text: str) -> None:
    with open(path, "w") as fh:
        fh.write(text)
