import re
from typing import Dict

from src.oracles.dcf_oracle import DcfOracle
from src.oracles.fp_oracle import FpOracle
from src.oracles.model_oracle import ModelOracle
from src.oracles.pair_oracle import PairOracle
from src.oracles.scf_oracle import ScfOracle
from src.utils.errors import OracleMismatchError

SPEC_PATTERN = re.compile(r"^\s*(\w+)\s*(?::\s*(.*))?$")
PARAMETERS = {
    "scf": ("p", "e"),
    "dcf": ("p",),
    "pair": ("k",),
    "fp": ("p",),
}
DEFAULTS = {"e": 1, "k": 1}


def parse_oracle_spec(spec: str):
    match = SPEC_PATTERN.match(spec or "")
    if match is None or match.group(1).lower() not in PARAMETERS:
        raise OracleMismatchError(
            f"Invalid oracle spec: '{spec}'. Please choose one of 'scf:p=2,e=1', 'dcf:p=3', 'pair:k=1', 'fp:p=5'."
        )
    kind = match.group(1).lower()
    values: Dict[str, int] = {}
    for part in filter(None, (p.strip() for p in (match.group(2) or "").split(","))):
        key, _, raw = part.partition("=")
        key = key.strip()
        if key not in PARAMETERS[kind] or not raw.strip().isdigit():
            raise OracleMismatchError(
                f"Invalid parameter '{part}' for the {kind} oracle; expected {', '.join(k + '=<n>' for k in PARAMETERS[kind])}."
            )
        values[key] = int(raw)
    for key in PARAMETERS[kind]:
        if key not in values:
            if key not in DEFAULTS:
                raise OracleMismatchError(f"The {kind} oracle needs '{key}=<n>'.")
            values[key] = DEFAULTS[key]
    return kind, values


def OracleHandler(spec: str) -> ModelOracle:
    """
    Factory function that returns the oracle described by a spec string
    such as ``scf:p=2,e=1``, ``dcf:p=3``, ``pair:k=1`` or ``fp:p=5``.
    """
    kind, values = parse_oracle_spec(spec)

    if kind == "scf":
        return ScfOracle(values["p"], values["e"])
    elif kind == "dcf":
        return DcfOracle(values["p"])
    elif kind == "pair":
        return PairOracle(values["k"])
    else:
        return FpOracle(values["p"])
