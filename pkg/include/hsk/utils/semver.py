import dataclasses
from functools import total_ordering


@total_ordering
@dataclasses.dataclass(frozen=True)
class SemanticVersion:
    major: int
    minor: int = 0
    patch: int = 0

    class Invalid(Exception):
        pass

    @classmethod
    def parse(cls, data: str) -> 'SemanticVersion':
        parts = str(data).split(".")
        if not (1 <= len(parts) <= 3):
            raise SemanticVersion.Invalid(f"Invalid version '{data}'. Expected 'major[.minor[.patch]]'.")
        units = [cls._parse_unit(part, unit, data) for part, unit in zip(parts, ["major", "minor", "patch"])]
        return SemanticVersion(*units)

    def is_readable_by(self, reader: 'SemanticVersion') -> bool:
        # same major, and nothing newer than what the reader knows about
        return self.major == reader.major and self <= reader

    def __lt__(self, other):
        if isinstance(other, str):
            other = SemanticVersion.parse(other)
        if not isinstance(other, SemanticVersion):
            raise ValueError(f"Cannot compare object of type SemanticVersion with '{other}'")
        return (self.major, self.minor, self.patch) < (other.major, other.minor, other.patch)

    def __eq__(self, other):
        if isinstance(other, str):
            try:
                other = SemanticVersion.parse(other)
            except SemanticVersion.Invalid:
                return False
        if not isinstance(other, SemanticVersion):
            return False
        return (self.major, self.minor, self.patch) == (other.major, other.minor, other.patch)

    def __hash__(self):
        return hash((self.major, self.minor, self.patch))

    @classmethod
    def _parse_unit(cls, data: str, unit: str, full: str) -> int:
        try:
            value: int = int(data)
        except ValueError:
            raise SemanticVersion.Invalid(f"Invalid version '{full}'. Cannot parse component "
                                          f"'{unit}' with value '{data}'. Expected a positive integer.")
        if value < 0:
            raise SemanticVersion.Invalid(f"Invalid version '{full}'. Component '{unit}' must be a "
                                          f"positive integer. '{data}' was given instead.")
        return value

    def __str__(self):
        return f"{self.major}.{self.minor}.{self.patch}"
