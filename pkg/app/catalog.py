# app/catalog.py
"""
Embedded algebras, the reference pair lists and the expected-results tables.

Product tables are written the way they are usually printed ("e1e3=e2, e3e1=alpha*e2");
unlisted products are zero. Family matrices use flattened parameter names: the
e_r-coefficient of X(e_i) is called X{r}_{i}.
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from enum import Enum
from functools import lru_cache
from itertools import combinations_with_replacement
from typing import Dict, List, Mapping, Sequence, Tuple

from app.algebra import Algebra, AlgebraPair, DefectReport, Parameter, StructureTensor, check_compatible
from app.errors import UnknownAlgebra, UnsupportedDimension
from app.matrices import ParametricMatrix
from app.scalars import parse_scalar

# name -> (dimension, product table, {parameter: excluded values})
_TABLES: Dict[str, Tuple[int, str, Mapping[str, Sequence[str]]]] = {
    "A2_1": (2, "e1e1=e2", {}),
    "A2_2": (2, "e1e1=e1, e1e2=e2", {}),
    "A2_3": (2, "e1e1=e1, e2e1=e2", {}),
    "A2_4": (2, "e1e1=e1, e1e2=e2, e2e1=e2", {}),
    "A3_1": (3, "e1e3=e2, e3e1=e2", {}),
    "A3_2": (3, "e1e3=e2, e3e1=alpha*e2", {"alpha": ["1"]}),
    "A3_3": (3, "e1e1=e2, e1e2=e3, e2e1=e3", {}),
    "A3_4": (3, "e1e3=e2, e2e3=e2, e3e3=e3", {}),
    "A3_5": (3, "e2e3=e2, e3e1=e1, e3e3=e3", {}),
    "A3_6": (3, "e3e1=e2, e3e2=e2, e3e3=e3", {}),
    "A3_7": (3, "e1e2=e1, e2e2=e2, e3e1=e1, e3e3=e3", {}),
    "A3_8": (3, "e1e3=e1, e2e3=e2, e3e1=e1, e3e3=e3", {}),
    "A3_9": (3, "e2e3=e2, e3e1=e1, e3e2=e2, e3e3=e3", {}),
    "A3_10": (3, "e1e3=e1, e2e3=e2, e3e1=e1, e3e2=e2, e3e3=e3", {}),
    "A3_11": (3, "e1e3=e2, e2e3=e2, e3e1=e2, e3e2=e2, e3e3=e3", {}),
    "A3_12": (3, "e1e1=e2, e1e3=e1, e2e3=e2, e3e1=e1, e3e2=e2, e3e3=e3", {}),
    "A4_1": (4, "e1e1=e4, e2e2=e2, e3e2=e3", {}),
    "A4_2": (4, "e1e1=e1, e1e3=e3, e2e2=e2, e2e4=e4, e4e1=e4", {}),
    "Zero_1": (1, "", {}),
    "Zero_2": (2, "", {}),
    "Zero_3": (3, "", {}),
    "Zero_4": (4, "", {}),
}

_PRODUCT = re.compile(r"^e(\d+)e(\d+)=(?:(.+)\*)?e(\d+)$")


@dataclass(frozen=True)
class CatalogEntry:
    name: str
    algebra: Algebra

    @property
    def parameters(self) -> Tuple[Parameter, ...]:
        return self.algebra.parameters


def _build(name: str) -> CatalogEntry:
    dim, table, params = _TABLES[name]
    entries = []
    for item in filter(None, (s.replace(" ", "") for s in table.split(","))):
        m = _PRODUCT.match(item)
        if not m:
            raise ValueError(f"bad product {item!r} in {name}")
        i, j, coeff, k = m.groups()
        entries.append((int(i) - 1, int(j) - 1, int(k) - 1, coeff or "1"))
    parameters = tuple(
        Parameter(p, tuple(parse_scalar(x) for x in excluded)) for p, excluded in sorted(params.items())
    )
    return CatalogEntry(name, Algebra(name, StructureTensor.from_products(dim, entries), parameters))


@lru_cache(maxsize=None)
def get_algebra(name: str) -> CatalogEntry:
    if name not in _TABLES:
        raise UnknownAlgebra(f"unknown algebra {name!r}; known: {', '.join(_TABLES)}")
    return _build(name)


def catalog_names(dim: int | None = None) -> List[str]:
    return [k for k, (d, _, _) in _TABLES.items() if dim is None or d == dim]


def classified_names() -> List[str]:
    """The named algebras (no zero algebras)."""
    return [k for k in _TABLES if not k.startswith("Zero_")]


def get_pair(first: str, second: str) -> AlgebraPair:
    return AlgebraPair(get_algebra(first).algebra, get_algebra(second).algebra)


def parse_pair_name(text: str) -> AlgebraPair:
    """'A2_2,A2_3' or '(A2_2, A2_3)' -> AlgebraPair."""
    parts = [p.strip() for p in text.strip().strip("()").split(",")]
    if len(parts) != 2 or not all(parts):
        raise UnknownAlgebra(f"expected a pair such as 'A2_2,A2_3', got {text!r}")
    return get_pair(*parts)


# -- reference pair lists ---------------------------------------------------------

@dataclass(frozen=True)
class ReferencePair:
    first_name: str
    second_name: str
    source: str

    @property
    def key(self) -> str:
        return f"{self.first_name},{self.second_name}"

    def pair(self) -> AlgebraPair:
        return get_pair(self.first_name, self.second_name)


_TWO_DIM = [(2, 3), (2, 4)]
_THREE_DIM = [
    (1, 3), (1, 10), (1, 11), (2, 4), (2, 5), (3, 11), (4, 8), (4, 12), (5, 7), (5, 8),
    (5, 9), (5, 10), (5, 11), (5, 12), (6, 7), (6, 8), (6, 9), (6, 10), (6, 12), (7, 9),
    (7, 10), (7, 12), (8, 9), (8, 10), (8, 12), (9, 10), (9, 12), (10, 11), (10, 12), (11, 12),
]


def reference_pairs(dim: int) -> List[ReferencePair]:
    if dim == 2:
        return [ReferencePair(f"A2_{a}", f"A2_{b}", f"two-dim-pairs#{k}") for k, (a, b) in enumerate(_TWO_DIM, 1)]
    if dim == 3:
        return [ReferencePair(f"A3_{a}", f"A3_{b}", f"three-dim-pairs#{k}") for k, (a, b) in enumerate(_THREE_DIM, 1)]
    raise UnsupportedDimension(f"reference pairs exist for dimensions 2 and 3, not {dim}")


def enumerate_onnose_compatible(dim: int) -> List[Tuple[AlgebraPair, DefectReport]]:
    """Every unordered pair of catalog algebras of `dim` (equal pairs included) with its defect."""
    if dim not in (2, 3):
        raise UnsupportedDimension(f"enumeration covers dimensions 2 and 3, not {dim}")
    names = catalog_names(dim)
    return [(get_pair(a, b), check_compatible(get_pair(a, b))) for a, b in combinations_with_replacement(names, 2)]


# -- expected results -------------------------------------------------------------

class ExpectedStatus(str, Enum):
    CONFIRMED = "confirmed"
    GARBLED = "garbled-in-paper"
    UNATTRIBUTED = "unattributed"


@dataclass(frozen=True)
class Family:
    rows: Tuple[Tuple[str, ...], ...]
    denominator: str = "1"

    def matrix(self) -> ParametricMatrix:
        return ParametricMatrix.from_text(self.rows, self.denominator)


def _f(*rows: Sequence[str], denominator: str = "1") -> Family:
    return Family(tuple(tuple(str(x) for x in r) for r in rows), denominator)


@dataclass(frozen=True)
class ExpectedResult:
    id: str
    source: str
    kind: str  # invariant kind, identity tag, or "cohomology"
    pair: ReferencePair | None
    families: Tuple[Family, ...] = ()
    expected_dim: int | None = None
    status: ExpectedStatus = ExpectedStatus.CONFIRMED
    joint: bool = False  # families are the components of one tuple (d, d', d'')
    note: str = ""

    def matrices(self) -> Tuple[ParametricMatrix, ...]:
        return tuple(f.matrix() for f in self.families)


def _row(source: str, a: str, b: str, kind: str, *families: Family, dim: int | None = None,
         status: ExpectedStatus = ExpectedStatus.CONFIRMED, note: str = "") -> ExpectedResult:
    if dim is None and kind in _LINEAR_KINDS and families:
        dim = len(families[0].matrix().parameters())
    return ExpectedResult(
        id=f"{source}:{a},{b}:{kind}",
        source=source,
        kind=kind,
        pair=ReferencePair(a, b, source),
        families=families,
        expected_dim=dim,
        status=status,
        note=note,
    )


_LINEAR_KINDS = {"derivation", "centroid", "quasi-centroid"}

Z3 = ("0", "0", "0")


def _three_dim_rows() -> List[ExpectedResult]:
    s = "three-dim-invariants"
    diag_beta = _f(["beta1_1", 0, 0], [0, "beta2_1", 0], [0, 0, "beta3_1"])
    diag_delta = _f(["delta1_1", 0, 0], [0, "delta2_1", 0], [0, 0, "delta3_1"])
    upper_delta = _f(["delta1_1", 0, "delta1_3"], [0, "delta2_1", "delta2_3"], [0, 0, "delta3_1"])
    d_block = _f(["d1_1", 0, 0], [0, "d2_1", "d3_3"], Z3)
    theta_block = _f(["theta1_1", 0, 0], [0, "theta2_1", "theta3_3"], [0, 0, 1])
    beta2 = _f(["beta1_2", 0, 0], [0, "beta2_2", 0], [0, 0, "beta3_2"])
    G = ExpectedStatus.GARBLED
    return [
        _row(s, "A3_1", "A3_3", "derivation", _f(Z3, Z3, Z3)),
        _row(s, "A3_1", "A3_3", "centroid", diag_beta),
        _row(s, "A3_1", "A3_3", "automorphism", _f(Z3, ["theta2_1", 0, 0], ["theta3_1", 0, 0]), status=G,
             note="printed matrix has a zero first row and cannot be invertible"),
        _row(s, "A3_1", "A3_3", "quasi-centroid", diag_delta),
        _row(s, "A3_1", "A3_10", "derivation", _f(["d1_1", 0, 0], ["d2_1", "d2_1", 0], Z3)),
        _row(s, "A3_1", "A3_10", "centroid", diag_beta),
        _row(s, "A3_1", "A3_10", "automorphism", _f(["theta1_1", 0, 0], ["theta2_1", "theta2_1", 0], [0, 0, 1])),
        _row(s, "A3_1", "A3_10", "quasi-centroid", upper_delta),
        _row(s, "A3_1", "A3_11", "derivation", _f(["d1_1", 0, 0], [0, "d2_1", 0], Z3), status=G,
             note="entry (2,3) missing in print; read as 0"),
        _row(s, "A3_1", "A3_11", "centroid", _f(["beta1_1", 0, 0], [0, "beta2_1", "beta3_3"], [0, 0, "beta3_1"])),
        _row(s, "A3_1", "A3_11", "automorphism", _f([1, 0, 0], ["theta2_1", 1, 0], [0, 0, 1])),
        _row(s, "A3_1", "A3_11", "quasi-centroid", upper_delta),
        _row(s, "A3_2", "A3_4", "derivation", d_block),
        _row(s, "A3_2", "A3_4", "centroid", beta2),
        _row(s, "A3_2", "A3_4", "automorphism", theta_block),
        _row(s, "A3_2", "A3_4", "quasi-centroid", _f(["delta1_3", 0, 0], [0, "delta2_3", 0], [0, 0, "delta3_3"])),
        _row(s, "A3_2", "A3_5", "derivation", d_block),
        _row(s, "A3_2", "A3_5", "centroid", beta2),
        _row(s, "A3_2", "A3_5", "automorphism", theta_block),
        _row(s, "A3_2", "A3_5", "quasi-centroid", _f(["delta3_3", 0, 0], [0, "delta3_3", 0], [0, 0, "delta3_3"])),
        _row(s, "A3_3", "A3_11", "derivation", _f(Z3, Z3, Z3)),
        _row(s, "A3_3", "A3_11", "centroid", diag_beta),
        _row(s, "A3_3", "A3_11", "automorphism", _f([1, 0, 0], [0, 1, 0], [0, 0, 1])),
        _row(s, "A3_3", "A3_11", "quasi-centroid", diag_delta),
        _row(s, "A3_4", "A3_8", "derivation", d_block),
        _row(s, "A3_4", "A3_8", "centroid", diag_beta),
        _row(s, "A3_4", "A3_8", "automorphism", _f(["theta11", 0, 0], [0, "theta1_1", "theta3_3"], [0, 0, 1]),
             note="first parameter printed without a superscript"),
        _row(s, "A3_4", "A3_8", "quasi-centroid", diag_delta),
        _row(s, "A3_4", "A3_11", "derivation", _f(["d1_1", 0, 0], ["d2_1", "d2_1 + d2_1", 0], Z3), status=G,
             note="entry (2,2) printed as a repeated sum of one parameter"),
        _row(s, "A3_4", "A3_11", "centroid", diag_beta),
        _row(s, "A3_4", "A3_11", "automorphism",
             _f(["theta1_1", 0, 0], ["theta2_2 - theta2_1", "theta2_2", 0], [0, 0, 1])),
    ]


def _unattributed_rows() -> List[ExpectedResult]:
    s = "unattributed-lists"
    U = ExpectedStatus.UNATTRIBUTED

    def row(kind: str, idx: int, *families: Family, joint: bool = False) -> ExpectedResult:
        return ExpectedResult(f"{s}:{kind}#{idx}", s, kind, None, families, None, U, joint)

    return [
        row("reynolds", 1, _f(["chi1_1", 0, 0], ["chi2_1", 0, 0], ["chi3_1", 0, 0])),
        row("reynolds", 2, _f(Z3, ["chi2_1", 0, 0], ["chi3_1", 0, 0])),
        row("reynolds", 3, _f(Z3, Z3, ["chi3_1", 0, "chi3_3"])),
        row("reynolds", 4, _f(Z3, ["chi2_1", "chi2_2", 0], Z3)),
        row("nijenhuis", 1, _f(["N1_1", 0, 0], ["N2_1", 0, 0], ["N3_1", 0, 0])),
        row("nijenhuis", 2, _f(Z3, ["N2_1", 0, 0], ["N3_1", 0, 0])),
        row("nijenhuis", 3, _f(["N1_3", 0, 0], Z3, [0, 0, "N3_1"])),
        row("nijenhuis", 4, _f(["N1_3", 0, 0], Z3, ["N3_1", 0, "N3_1"])),
        row("quasi-derivation", 1,
            _f(["d1_1", 0, 0], [0, "d2_1", 0], [0, 0, "d3_1"]),
            _f(["d1_1", "d1_2", "d1_3"], ["d2_1", "d2_2", "-d2_1 - d2_2 + 2*d2_1"],
               ["d3_1", "d3_2", "-d3_1 - d3_2 + 2*d3_1"]),
            joint=True),
        row("generalized-derivation", 1,
            _f(["d1_1", 0, 0], [0, "d2_2", 0], [0, 0, "d3_1 + d3_2"]),
            _f(["d1_1", "d1_12", "d1_13"], ["d1_21", "d1_11 + d1_21", 0], ["-d31", 0, "d1_11 + d1_21"]),
            _f(["dpp1_1", "dpp1_2", "dpp1_3"], ["dpp21", "dpp22", "dpp2_1 + d2_1 + d2_1 - dpp2_1 - dpp2_2"],
               ["dpp3_1", "dpp3_2", "d3_2 - d3_1 - dpp3_1 - dpp3_2"]),
            joint=True),
    ]


def _four_dim_rows() -> List[ExpectedResult]:
    s = "four-dim-example"
    Z4 = ("0", "0", "0", "0")
    return [
        _row(s, "A4_1", "A4_2", "derivation", _f(Z4, Z4, Z4, ["d4_1", "-d4_1", 0, 0])),
        _row(s, "A4_1", "A4_2", "centroid",
             _f(["beta1_1", 0, 0, 0], [0, "beta2_1", 0, 0], [0, 0, "beta3_1", 0], [0, 0, 0, "beta4_1"])),
        _row(s, "A4_1", "A4_2", "quasi-centroid",
             _f(["delta1_1", 0, 0, 0], [0, "delta2_1", 0, 0], [0, 0, "delta3_1", 0], [0, 0, 0, "delta4_1"])),
        _row(s, "A4_1", "A4_2", "reynolds", _f(Z4, Z4, ["chi3_1", "chi3_2", 0, 0], ["chi4_1", "chi4_2", 0, 0])),
        _row(s, "A4_1", "A4_2", "averaging",
             _f(["xi1_4", 0, 0, 0], ["xi2_1", "xi2_2", "xi3_3", 0], [0, 0, "xi3_4", 0],
                ["xi4_1", "xi4_2 - xi4_4", "xi4_3", "xi4_4"])),
        _row(s, "A4_1", "A4_2", "nijenhuis", _f(Z4, Z4, [0, 0, "N3_3", 0], ["N4_1", "N4_2", "N4_3", 0])),
        _row(s, "A4_1", "A4_2", "automorphism",
             _f([1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 1, 0], ["theta4_1", "-theta4_1", 0, 1])),
    ]


@lru_cache(maxsize=None)
def expected_results() -> Tuple[ExpectedResult, ...]:
    two = "two-dim-invariants"
    rb = "two-dim-rota-baxter"
    coh = "cohomology-example"
    rows: List[ExpectedResult] = []
    for second, der in (("A2_3", _f([0, 0], ["d2_1", "d2_2"])), ("A2_4", _f([0, 0], [0, "d2_2"]))):
        rows += [
            _row(two, "A2_2", second, "derivation", der),
            _row(two, "A2_2", second, "centroid", _f(["beta1_1", 0], [0, "beta1_2"])),
            _row(two, "A2_2", second, "automorphism", _f([1, 0], [0, "theta2_2"])),
            _row(two, "A2_2", second, "quasi-centroid", _f(["delta1_1", 0], [0, "delta1_2"])),
        ]
    rows += [
        _row(rb, "A2_2", "A2_3", "rota-baxter",
             _f(["R2_1*R2_2", "R2_2^2"], ["-R2_1^2", "-R2_1*R2_2"], denominator="R2_2"),
             _f([0, 0], ["R2_1", 0]),
             note="first family read with the top row named like the bottom row, over the denominator R2_2"),
        _row(rb, "A2_2", "A2_4", "rota-baxter", _f([0, 0], ["R2_1", 0])),
    ]
    rows += _three_dim_rows()
    rows += _unattributed_rows()
    rows += _four_dim_rows()
    rows += [
        _row(coh, "A2_2", "A2_3", "cohomology", dim=4),
        _row(coh, "A2_2", "A2_4", "cohomology", dim=5),
        _row(coh, "A3_5", "A3_8", "cohomology", dim=7),
        _row(coh, "A3_9", "A3_10", "cohomology", dim=9),
    ]
    return tuple(rows)
