"""The embedded four-state dataset (states, orderings, staircases, nodes).

``PRESET_DOCUMENT`` is the interchange document exactly as shipped; the
default preset of the command line parses it.
"""
from __future__ import annotations

import json

PRESET_DOCUMENT = """\
{
  "states": [["0", "0", "0"], ["1", "0", "0"], ["0", "1", "0"], ["0", "0", "1"]],
  "perms": [[1, 2, 3, 4], [4, 1, 2, 3], [3, 4, 1, 2]],
  "p": [["2/15", "4/15", "8/15"], ["18/65", "27/65", "8/65"], ["64/175", "27/175", "36/175"]],
  "c": [
    [["-1/15", "-2/15", "-4/15"], ["7/15", "-1/15", "-2/15"], ["-4/15", "7/15", "-1/15"], ["-2/15", "-4/15", "7/15"]],
    [["-6/65", "-9/65", "19/65"], ["-4/65", "-6/65", "-9/65"], ["19/65", "-4/65", "-6/65"], ["-9/65", "19/65", "-4/65"]],
    [["-16/175", "37/175", "-9/175"], ["-12/175", "-16/175", "37/175"], ["-9/175", "-12/175", "-16/175"], ["37/175", "-9/175", "-12/175"]]
  ],
  "k": [["2", "2", "2", "2"], ["3", "3", "3", "3"], ["4", "4", "4", "4"]],
  "nodes": [
    ["-14", "5"], ["19", "-8"], ["11", "-14"], ["-4", "-17"],
    ["-7", "-3"], ["6", "16"], ["2", "-17"], ["-18", "2"],
    ["-7", "-14"], ["-9", "19"], ["6", "18"], ["-20", "-9"]
  ]
}
"""


def preset_document() -> dict:
    return json.loads(PRESET_DOCUMENT)


def preset_data():
    from .t4 import LargeT4Data

    return LargeT4Data.from_document(preset_document())
