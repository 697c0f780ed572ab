# SPDX-License-Identifier: GPL-3.0-or-later
# Copyright (c) 2025 Santiago Bossa
#
# This file is part of directed-share.
#
# directed-share is free software: you can redistribute it and/or modify
# it under the terms of the GNU General Public License as published by
# the Free Software Foundation, either version 3 of the License, or
# (at your option) any later version.
#
# directed-share is distributed in the hope that it will be useful,
# but WITHOUT ANY WARRANTY; without even the implied warranty of
# MERCHANTABILITY or FITNESS FOR A PARTICULAR PURPOSE.  See the
# GNU General Public License for more details.
#
# You should have received a copy of the GNU General Public License
# along with directed-share.  If not, see the LICENSE file in the project root.

"""
Flat ``key=value`` configuration files.

Format
------
* One ``key=value`` pair per line; surrounding whitespace is stripped.
* Blank lines and lines starting with ``#`` are ignored.
* Mapping-valued dataclass fields are written with a dotted prefix, e.g.
  ``quota.alice=3`` fills ``CascadeConfig.quotas["alice"]`` (the prefix is the
  field's ``kv_prefix`` metadata, or the field name).

Public API
----------
- :func:`parse_kv` / :func:`load_kv`
- :func:`dump_kv`
- :func:`coerce_fields`
"""

from __future__ import annotations

import dataclasses
import typing
from pathlib import Path
from typing import Any, Dict, Mapping, Type, Union

from .errors import ContractError, ValidationError

__all__ = ["parse_kv", "load_kv", "dump_kv", "coerce_fields", "is_mapping_hint"]

_TRUE = {"1", "true", "yes", "on"}
_FALSE = {"0", "false", "no", "off"}


# --------------------------------------------------------------------------- #
# Reading / writing
# --------------------------------------------------------------------------- #
def parse_kv(text: str, *, source: str = "<string>") -> Dict[str, str]:
    """Parse ``key=value`` lines into a dict (later keys win)."""
    out: Dict[str, str] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if "=" not in line:
            raise ValidationError(f"{source}:{lineno}: expected key=value, got {raw!r}")
        key, value = line.split("=", 1)
        key = key.strip()
        if not key:
            raise ValidationError(f"{source}:{lineno}: empty key")
        out[key] = value.strip()
    return out


def load_kv(path: Union[str, Path]) -> Dict[str, str]:
    """Read a config file from *path*; a missing file is a validation error."""
    p = Path(path)
    try:
        text = p.read_text(encoding="utf-8")
    except FileNotFoundError as exc:
        raise ValidationError(f"config file not found: {p}") from exc
    return parse_kv(text, source=str(p))


def dump_kv(values: Mapping[str, Any]) -> str:
    """Render *values* as sorted ``key=value`` lines (trailing newline)."""
    lines = [f"{k}={_render(values[k])}" for k in sorted(values)]
    return "\n".join(lines) + "\n"


def _render(v: Any) -> str:
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, float):
        return repr(v)
    if v is None:
        return ""
    return str(v)


# --------------------------------------------------------------------------- #
# Typed coercion
# --------------------------------------------------------------------------- #
def coerce_fields(cls: Type[Any], values: Mapping[str, str]) -> Dict[str, Any]:
    """Map string *values* onto the typed fields of dataclass *cls*.

    Only keys that name a field (or a dotted mapping entry) are consumed;
    anything else is ignored so one file can configure several components.

    Raises
    ------
    ContractError
        If a value cannot be converted to the field's type.
    """
    if not dataclasses.is_dataclass(cls):
        raise TypeError(f"{cls!r} is not a dataclass")
    hints = typing.get_type_hints(cls)
    kwargs: Dict[str, Any] = {}

    for f in dataclasses.fields(cls):
        if not f.init:
            continue
        hint = hints[f.name]
        if is_mapping_hint(hint):
            prefix = f.metadata.get("kv_prefix", f.name) + "."
            entries = {k[len(prefix):]: v for k, v in values.items() if k.startswith(prefix)}
            if entries:
                value_type = typing.get_args(hint)[1] if typing.get_args(hint) else str
                kwargs[f.name] = {k: _convert(v, value_type, k) for k, v in entries.items()}
            continue
        if f.name in values:
            kwargs[f.name] = _convert(values[f.name], hint, f.name)
    return kwargs


def is_mapping_hint(hint: Any) -> bool:
    """Whether the type *hint* is a ``Dict``/``Mapping`` (a ``prefix.key`` field)."""
    origin = typing.get_origin(hint)
    return origin in (dict, Dict, Mapping, typing.Mapping) or (
        origin is not None and getattr(origin, "__name__", "") == "Mapping"
    )


def _convert(raw: str, hint: Any, key: str) -> Any:
    origin = typing.get_origin(hint)
    if origin is Union:
        args = [a for a in typing.get_args(hint) if a is not type(None)]
        if raw == "" and len(args) < len(typing.get_args(hint)):
            return None
        hint = args[0]
        origin = typing.get_origin(hint)
    if origin is typing.Literal:
        allowed = typing.get_args(hint)
        if raw not in allowed:
            raise ContractError(f"{key}: expected one of {allowed}, got {raw!r}")
        return raw
    try:
        if hint is bool:
            low = raw.lower()
            if low in _TRUE:
                return True
            if low in _FALSE:
                return False
            raise ValueError(raw)
        if hint is int:
            return int(raw)
        if hint is float:
            return float(raw)
    except ValueError as exc:
        raise ContractError(f"{key}: cannot parse {raw!r} as {hint.__name__}") from exc
    return raw
