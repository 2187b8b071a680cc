"""Code configuration files (TOML or JSON).

Recognised keys: ``curve`` ("rational" or "hermitian"), ``q``, ``gamma``,
optional ``n`` (first n places; default all) and optional ``field.p`` /
``field.m`` which must agree with the curve's field.
"""

from __future__ import annotations

import json
import sys
from pathlib import Path

if sys.version_info >= (3, 11):
    import tomllib
else:
    import tomli as tomllib

from .ag_code import AGCode, code_make
from .finite_field import field_make
from .function_field import make_backend


class ConfigError(ValueError):
    pass


def load_config(path) -> dict:
    path = Path(path)
    text = path.read_text(encoding="utf-8")
    if path.suffix == ".json":
        return json.loads(text)
    return tomllib.loads(text)


def code_from_config(cfg: dict) -> AGCode:
    try:
        curve = cfg["curve"]
        gamma = int(cfg["gamma"])
    except KeyError as exc:
        raise ConfigError(f"missing key {exc}") from None
    fld = cfg.get("field", {})
    q = cfg.get("q")
    if q is None:
        if curve != "rational" or "p" not in fld:
            raise ConfigError("missing key 'q'")
        q = fld["p"] ** fld.get("m", 1)
    backend = make_backend(curve, int(q))
    if fld:
        wanted = field_make(int(fld["p"]), int(fld.get("m", 1)))
        if wanted != backend.field:
            raise ConfigError(f"field {wanted} does not match the {curve} curve over {backend.field}")
    return code_make(backend, gamma, cfg.get("n", "all"))
