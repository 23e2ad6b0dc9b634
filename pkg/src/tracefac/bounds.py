"""Factor-count bounds per strategy, kept as data in ``bounds.json``."""

import json
from importlib import resources

BOUNDS: dict = json.loads(resources.files(__package__).joinpath("bounds.json").read_text())
