# app/documents.py
"""
JSON algebra documents: the one persistence format. A document holds one product
table (`star1`) or two (`star1`, `star2`, which makes it a pair). Entries are
[i, j, k, coefficient] with basis names and coefficient text in the scalar grammar.

`parameters` are shared by both tables unless `parameters2` is given, in which
case `parameters` belong to `star1` and `parameters2` to `star2`.
"""
from __future__ import annotations

import json
from pathlib import Path
from typing import List, Optional, Sequence, Tuple, Union

from pydantic import BaseModel, ConfigDict, Field, ValidationError, model_validator

from app.algebra import Algebra, AlgebraPair, Parameter, StructureTensor, require_associative
from app.errors import DocumentError, ScalarParseError
from app.scalars import parse_scalar

Entry = Tuple[str, str, str, Union[str, int]]


class ParameterDoc(BaseModel):
    model_config = ConfigDict(extra="forbid")

    name: str = Field(pattern=r"^[A-Za-z][A-Za-z0-9_]*$")
    excluded: List[Union[str, int]] = []


def _distinct(params: List[ParameterDoc], field: str) -> None:
    names = [p.name for p in params]
    if len(set(names)) != len(names):
        raise ValueError(f"{field} names must be distinct")


class AlgebraDocument(BaseModel):
    model_config = ConfigDict(extra="forbid")

    name: str = "A"
    name2: Optional[str] = None
    dim: int = Field(ge=1)
    basis: Optional[List[str]] = None
    parameters: List[ParameterDoc] = []
    parameters2: Optional[List[ParameterDoc]] = None
    star1: List[Entry] = []
    star2: Optional[List[Entry]] = None

    @model_validator(mode="after")
    def _check_names(self) -> "AlgebraDocument":
        basis = self.basis_names()
        if len(basis) != self.dim:
            raise ValueError(f"basis has {len(basis)} names for dimension {self.dim}")
        if len(set(basis)) != len(basis):
            raise ValueError("basis names must be distinct")
        _distinct(self.parameters, "parameter")
        if self.parameters2 is not None:
            if self.star2 is None:
                raise ValueError("parameters2 needs a star2 table")
            _distinct(self.parameters2, "parameters2")
        return self

    def basis_names(self) -> List[str]:
        return self.basis if self.basis is not None else [f"e{i + 1}" for i in range(self.dim)]

    def second_parameters(self) -> List[ParameterDoc]:
        return self.parameters if self.parameters2 is None else self.parameters2


def _tensor(doc: AlgebraDocument, field: str, entries: List[Entry], params: List[ParameterDoc]) -> StructureTensor:
    index = {name: i for i, name in enumerate(doc.basis_names())}
    declared = {p.name for p in params}
    seen = set()
    products = []
    for pos, (i, j, k, coeff) in enumerate(entries):
        loc = f"{field}[{pos}]"
        for name in (i, j, k):
            if name not in index:
                raise DocumentError(f"unknown basis name {name!r}", loc)
        key = (index[i], index[j], index[k])
        if key in seen:
            raise DocumentError(f"duplicate entry for ({i}, {j}, {k})", loc)
        seen.add(key)
        try:
            value = parse_scalar(str(coeff))
        except ScalarParseError as exc:
            raise DocumentError(str(exc), loc) from exc
        stray = set(value.names()) - declared
        if stray:
            raise DocumentError(f"undeclared parameter(s) {', '.join(sorted(stray))}", loc)
        products.append((*key, value))
    return StructureTensor.from_products(doc.dim, products)


def _parameters(params: List[ParameterDoc], field: str) -> Tuple[Parameter, ...]:
    out = []
    for pos, p in enumerate(params):
        try:
            excluded = tuple(parse_scalar(str(x)) for x in p.excluded)
        except ScalarParseError as exc:
            raise DocumentError(str(exc), f"{field}[{pos}].excluded") from exc
        out.append(Parameter(p.name, excluded))
    return tuple(out)


def build(doc: AlgebraDocument) -> Union[Algebra, AlgebraPair]:
    basis = tuple(doc.basis) if doc.basis is not None else None
    first = Algebra(doc.name, _tensor(doc, "star1", doc.star1, doc.parameters),
                    _parameters(doc.parameters, "parameters"), basis)
    require_associative(first)
    if doc.star2 is None:
        return first
    field = "parameters" if doc.parameters2 is None else "parameters2"
    params2 = doc.second_parameters()
    second = Algebra(doc.name2 or f"{doc.name}'", _tensor(doc, "star2", doc.star2, params2),
                     _parameters(params2, field), basis)
    require_associative(second)
    return AlgebraPair(first, second)


def parse_document(text: str, source: str = "<document>") -> Union[Algebra, AlgebraPair]:
    try:
        raw = json.loads(text)
    except json.JSONDecodeError as exc:
        raise DocumentError(exc.msg, f"{source}:{exc.lineno}:{exc.colno}") from exc
    try:
        doc = AlgebraDocument.model_validate(raw)
    except ValidationError as exc:
        err = exc.errors()[0]
        loc = ".".join(str(x) for x in err["loc"]) or None
        raise DocumentError(err["msg"], f"{source}: {loc}" if loc else source) from exc
    return build(doc)


def load_document(path: Union[str, Path]) -> Union[Algebra, AlgebraPair]:
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise DocumentError(exc.strerror or str(exc), str(path)) from exc
    return parse_document(text, str(path))


def _entries(t: StructureTensor, basis: Sequence[str]) -> List[List[str]]:
    return [[basis[i], basis[j], basis[k], str(v)] for i, j, k, v in t.nonzero()]


def _parameter_docs(params: Sequence[Parameter]) -> List[ParameterDoc]:
    return [ParameterDoc(name=p.name, excluded=[str(e) for e in p.excluded]) for p in params]


def to_document(x: Union[Algebra, AlgebraPair]) -> AlgebraDocument:
    first = x.first if isinstance(x, AlgebraPair) else x
    second = x.second if isinstance(x, AlgebraPair) else None
    basis = first.basis or (second.basis if second is not None else None)
    names = list(basis) if basis is not None else [f"e{i + 1}" for i in range(first.dim)]
    split = second is not None and second.parameters != first.parameters
    return AlgebraDocument(
        name=first.name,
        name2=second.name if second is not None else None,
        dim=first.dim,
        basis=list(basis) if basis is not None else None,
        parameters=_parameter_docs(first.parameters),
        parameters2=_parameter_docs(second.parameters) if split else None,
        star1=_entries(first.tensor, names),
        star2=_entries(second.tensor, names) if second is not None else None,
    )


def print_document(x: Union[Algebra, AlgebraPair]) -> str:
    return to_document(x).model_dump_json(indent=2, exclude_none=True)
