# app/schemas.py
"""
Report models. `caw schema` prints their JSON Schema; reports are dumped from them.
The schema is also committed as `report.schema.json` next to this module, and
reports are validated against that file before they are printed.
"""
from __future__ import annotations

import json
from pathlib import Path
from typing import Any, Dict, List, Literal, Optional

import jsonschema
from pydantic import BaseModel

from app.__about__ import __app_name__, __version__
from app.errors import SoundnessError

SCHEMA_PATH = Path(__file__).with_name("report.schema.json")

MatrixText = List[List[str]]
Status = Literal["match", "mismatch", "garbled-in-paper", "unattributed-match"]


class DefectEntryModel(BaseModel):
    triple: List[int]
    value: List[str]


class DefectModel(BaseModel):
    kind: str
    empty: bool
    entries: List[DefectEntryModel] = []


class InvariantModel(BaseModel):
    kind: str
    dim: int
    parameters: List[str]
    general_element: List[MatrixText]
    projection_dim: Optional[int] = None
    exceptional: List[str] = []
    unresolved: List[str] = []


class IdentityModel(BaseModel):
    identity: str
    zero_map_passes: bool
    grid_bound: Optional[int] = None
    grid_solutions: Optional[int] = None
    sample: List[MatrixText] = []
    skipped: Optional[str] = None


class CohomologyModel(BaseModel):
    mode: str
    dim_Z2: int
    dim_B2: int
    dim_B2_in_Z2: int
    dim_H2: int
    generators: List[str]
    coboundaries_are_cocycles: bool
    order_independent: bool


class PairReport(BaseModel):
    app: str = __app_name__
    version: str = __version__
    pair: str
    dim: int
    parameters: List[str] = []
    compatibility: DefectModel
    invariants: List[InvariantModel] = []
    identities: List[IdentityModel] = []
    cohomology: List[CohomologyModel] = []
    warnings: List[str] = []


class RegressionRecord(BaseModel):
    id: str
    source: str
    pair: Optional[str] = None
    kind: str
    status: Status
    detected: bool = False
    expected: Dict[str, Any] = {}
    computed: Dict[str, Any] = {}
    satisfied: List[str] = []
    note: str = ""


class PairListRecord(BaseModel):
    pair: str
    source: str
    onnose_compatible: bool
    defect_entries: int
    witness_bound: int
    witness: Optional[MatrixText] = None
    witness_verified: Optional[bool] = None
    searched: Optional[int] = None


class EnumerationModel(BaseModel):
    dim: int
    compatible: List[str]
    listed_and_compatible: List[str]
    listed_not_compatible: List[str]
    compatible_not_listed: List[str]


class RegressionReport(BaseModel):
    app: str = __app_name__
    version: str = __version__
    records: List[RegressionRecord]
    pair_lists: List[PairListRecord] = []
    enumeration: List[EnumerationModel] = []
    summary: Dict[str, int] = {}
    exit_code: int = 0


def all_schemas() -> Dict[str, Any]:
    return {
        "PairReport": PairReport.model_json_schema(),
        "RegressionReport": RegressionReport.model_json_schema(),
    }


def committed_schemas() -> Dict[str, Any]:
    return json.loads(SCHEMA_PATH.read_text(encoding="utf-8"))


def check_committed() -> None:
    if committed_schemas() != all_schemas():
        raise SoundnessError(f"{SCHEMA_PATH.name} is out of date with the report models; regenerate it with `caw schema`")


def validate_report(report: BaseModel) -> None:
    name = type(report).__name__
    try:
        jsonschema.validate(instance=report.model_dump(mode="json"), schema=committed_schemas()[name])
    except jsonschema.ValidationError as exc:
        where = "/".join(str(p) for p in exc.absolute_path) or "<root>"
        raise SoundnessError(f"{name} does not match {SCHEMA_PATH.name} at {where}: {exc.message}") from exc
