"""JSON Schemas for the serialized WitnessSet, PointMap, VerificationReport and ApproximationResult."""

import json
from importlib import resources

NAMES = ("witness_set", "point_map", "verification_report", "approximation_result")


def load_schema(name: str) -> dict:
    if name not in NAMES:
        raise KeyError(name)
    return json.loads(resources.files(__name__).joinpath(f"{name}.schema.json").read_text("utf-8"))
