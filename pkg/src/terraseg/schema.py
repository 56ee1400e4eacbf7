"""Attribute schema: which columns a dataset carries and how to read them.

Each attribute declares its code (the CSV header token), a human label, its
units, and its direction: favourable-high attributes are good when large,
favourable-low ones (mortality, underweight, extreme poverty, adolescent
mothers in the shipped schema) are good when small and get complemented on
the normalized scale before any indicator work.
"""

from __future__ import annotations

from dataclasses import dataclass, field

UNITS = ("percentage", "rate", "ratio")
DIRECTIONS = ("favourable-high", "favourable-low")


@dataclass(frozen=True)
class AttributeDef:
    code: str
    label: str
    units: str = "percentage"
    direction: str = "favourable-high"

    def __post_init__(self) -> None:
        if not self.code:
            raise ValueError("attribute code must be non-empty")
        if self.units not in UNITS:
            raise ValueError(f"units must be one of {UNITS}, got {self.units!r}")
        if self.direction not in DIRECTIONS:
            raise ValueError(f"direction must be one of {DIRECTIONS}, got {self.direction!r}")


@dataclass(frozen=True)
class AttributeSchema:
    attributes: tuple[AttributeDef, ...] = field(default_factory=tuple)

    def __post_init__(self) -> None:
        codes = [a.code for a in self.attributes]
        if len(set(codes)) != len(codes):
            dupes = sorted({c for c in codes if codes.count(c) > 1})
            raise ValueError(f"attribute codes must be unique, duplicated: {dupes}")

    def __len__(self) -> int:
        return len(self.attributes)

    @property
    def codes(self) -> tuple[str, ...]:
        return tuple(a.code for a in self.attributes)

    def index_of(self, code: str) -> int:
        for i, a in enumerate(self.attributes):
            if a.code == code:
                return i
        raise KeyError(code)

    def favourable_low_indices(self) -> tuple[int, ...]:
        return tuple(i for i, a in enumerate(self.attributes) if a.direction == "favourable-low")

    def favourable_low_codes(self) -> tuple[str, ...]:
        return tuple(a.code for a in self.attributes if a.direction == "favourable-low")

    def as_dict(self) -> dict:
        return {
            "attributes": [
                {"code": a.code, "label": a.label, "units": a.units, "direction": a.direction}
                for a in self.attributes
            ]
        }

    @classmethod
    def from_dict(cls, d: dict) -> "AttributeSchema":
        return cls(
            attributes=tuple(
                AttributeDef(
                    code=a["code"],
                    label=a.get("label", a["code"]),
                    units=a.get("units", "percentage"),
                    direction=a.get("direction", "favourable-high"),
                )
                for a in d["attributes"]
            )
        )


_DEFAULT_DEFS = (
    ("x1", "Households with safely managed drinking water supplies", "percentage", "favourable-high"),
    ("x2", "Households using safely managed sanitation services", "percentage", "favourable-high"),
    ("x3", "Mortality rate for children under 5 years of age", "rate", "favourable-low"),
    ("x4", "Children under 5 years of age who are underweight", "percentage", "favourable-low"),
    ("x5", "Households living below the extreme poverty line", "percentage", "favourable-low"),
    ("x6", "Total employment rate", "rate", "favourable-high"),
    ("x7", "Share of national population", "percentage", "favourable-high"),
    ("x8", "Adolescent mothers", "percentage", "favourable-low"),
    ("x9", "Demographic dependency ratio", "ratio", "favourable-high"),
    ("x10", "Attendance at a teaching centre, ages 3 to 5", "rate", "favourable-high"),
    ("x11", "Attendance at a teaching centre, ages 6 to 11", "rate", "favourable-high"),
    ("x12", "Attendance at a teaching centre, ages 12 to 17", "rate", "favourable-high"),
    ("x13", "Population aged 15 to 64 with at least complete primary education", "percentage", "favourable-high"),
    ("x14", "Households that have computers", "percentage", "favourable-high"),
    ("x15", "Households that have internet access", "percentage", "favourable-high"),
)


def default_schema() -> AttributeSchema:
    """The shipped 15-attribute municipal WASH/services schema."""
    return AttributeSchema(
        attributes=tuple(AttributeDef(c, label, u, d) for c, label, u, d in _DEFAULT_DEFS)
    )
