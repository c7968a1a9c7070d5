"""
Function specs on the command line.

  name                     catalog entry with default parameters
  name:key=val,key=val     catalog entry with parameters
  csv:path[#col]           sampled function read from CSV
"""
import logging
import re
from dataclasses import dataclass, field
from pathlib import Path
from typing import Dict, Optional

from .core import FunctionSource, read_sample_csv
from .errors import SpecParseError
from .families.growth import make_family
from .families.plane import PlaneFunction, make_plane_function

logger = logging.getLogger(__name__)

_IDENT = re.compile(r"[A-Za-z_][A-Za-z0-9_]*")


@dataclass(frozen=True)
class FunctionSpec:
    kind: str  # catalog | csv
    name: str = ""
    params: Dict[str, float] = field(default_factory=dict)
    path: Optional[str] = None
    column: Optional[str] = None

    def render(self) -> str:
        if self.kind == "csv":
            return f"csv:{self.path}" + (f"#{self.column}" if self.column else "")
        if not self.params:
            return self.name
        return self.name + ":" + ",".join(f"{k}={v!r}" for k, v in self.params.items())


def parse_function_spec(text: str) -> FunctionSpec:
    """Parse a spec string; errors carry the 0-based column of the problem."""
    if text.startswith("csv:"):
        rest = text[4:]
        path, _, column = rest.partition("#")
        if not path:
            raise SpecParseError("empty csv path", text, 4)
        if "#" in rest and not column:
            raise SpecParseError("empty column name", text, len(text))
        return FunctionSpec("csv", path=path, column=column or None)

    m = _IDENT.match(text)
    if not m:
        raise SpecParseError("expected a family name", text, 0)
    name = m.group(0)
    pos = m.end()
    if pos == len(text):
        return FunctionSpec("catalog", name=name)
    if text[pos] != ":":
        raise SpecParseError("expected ':' after family name", text, pos)
    pos += 1

    params: Dict[str, float] = {}
    for item in text[pos:].split(","):
        key, eq, raw = item.partition("=")
        if not _IDENT.fullmatch(key):
            raise SpecParseError("expected a parameter name", text, pos)
        if not eq:
            raise SpecParseError("expected '=' after parameter name", text, pos + len(key))
        try:
            params[key] = float(raw)
        except ValueError:
            raise SpecParseError(f"bad number {raw!r}", text, pos + len(key) + 1) from None
        pos += len(item) + 1
    return FunctionSpec("catalog", name=name, params=params)


def resolve_source(spec: FunctionSpec, kind: str = "growth") -> FunctionSource:
    """Growth specs read CSV values as raw (ln taken); order specs keep them as-is."""
    if spec.kind == "csv":
        logger.info("Reading %s sample from %s", kind, spec.path)
        return read_sample_csv(Path(spec.path), spec.column, log_values=(kind == "growth"))
    return make_family(spec.name, spec.params, kind=kind)


def resolve_plane(spec: FunctionSpec) -> PlaneFunction:
    if spec.kind == "csv":
        raise SpecParseError("plane functions must come from the catalog", spec.render(), 0)
    return make_plane_function(spec.name, spec.params)
