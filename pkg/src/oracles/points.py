import json
from typing import Dict, Iterator, Mapping, Optional

from src.algebra.fields import FieldDescriptor, FieldElement, parse_element
from src.utils.errors import OracleMismatchError, WrongDescriptorError


class Point:
    """A named assignment of field elements to formula variables."""

    def __init__(self, descriptor: FieldDescriptor, values: Optional[Mapping[str, FieldElement]] = None):
        self.descriptor = descriptor
        self._values: Dict[str, FieldElement] = {}
        for name, value in (values or {}).items():
            element = descriptor.element(value)
            self._values[name] = element

    def __getitem__(self, name: str) -> FieldElement:
        try:
            return self._values[name]
        except KeyError:
            raise OracleMismatchError(f"the point assigns no value to '{name}'") from None

    def __contains__(self, name: str) -> bool:
        return name in self._values

    def __iter__(self) -> Iterator[str]:
        return iter(sorted(self._values))

    def __len__(self) -> int:
        return len(self._values)

    def __eq__(self, other):
        return isinstance(other, Point) and self.descriptor == other.descriptor and self._values == other._values

    def get(self, name: str, default=None):
        return self._values.get(name, default)

    def names(self):
        return sorted(self._values)

    def as_dict(self) -> Dict[str, FieldElement]:
        return dict(self._values)

    def extended(self, values: Mapping[str, FieldElement]) -> "Point":
        merged = dict(self._values)
        merged.update(values)
        return Point(self.descriptor, merged)

    def restricted(self, names) -> "Point":
        return Point(self.descriptor, {n: self._values[n] for n in names if n in self._values})

    def to_json_dict(self) -> Dict[str, str]:
        return {name: str(self._values[name]) for name in sorted(self._values)}

    def __repr__(self):
        inner = ", ".join(f"{k}={v}" for k, v in self.to_json_dict().items())
        return f"Point({inner})"

    @classmethod
    def from_json_dict(cls, data: Mapping[str, object], descriptor: FieldDescriptor) -> "Point":
        values = {}
        for name, text in data.items():
            try:
                values[name] = parse_element(str(text), descriptor)
            except WrongDescriptorError as e:
                raise OracleMismatchError(f"value of '{name}': {e}") from None
        return cls(descriptor, values)


def load_point(path: str, descriptor: FieldDescriptor) -> Point:
    with open(path, "r", encoding="utf-8") as f:
        data = json.load(f)
    if not isinstance(data, dict):
        raise OracleMismatchError("a point file holds a JSON object mapping variables to elements")
    return Point.from_json_dict(data, descriptor)


def save_point(point: Point, path: str):
    with open(path, "w", encoding="utf-8") as f:
        json.dump(point.to_json_dict(), f, indent=2, sort_keys=True)
        f.write("\n")
