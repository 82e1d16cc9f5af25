"""
GCM configuration files.

Config: {"kind", "parameters", "ports": {"p", "n", "r", "l"}, "noise_var",
"seed", "metabolic": {...}}. Inputs: {"p": [[...]], "n": [[...]], ...}.
"""

from typing import Any, Dict, List, Optional

from pydantic import BaseModel, Field, ValidationError

from matic.errors import ConfigError, DataError

from .metabolic import metabolic_from_dict
from .module import Gcm, Ports
from .signal import Signal, SignalBundle
from .transfer import transfer_from_dict


class PortsConfig(BaseModel):
    p: int = Field(0, ge=0)
    n: Optional[int] = Field(None, ge=0)
    r: int = Field(0, ge=0)
    l: int = Field(0, ge=0)


class GcmConfig(BaseModel):
    kind: str
    parameters: Dict[str, Any] = {}
    ports: PortsConfig = PortsConfig()
    noise_var: float = Field(0.0, ge=0.0)
    seed: int = Field(0, ge=0)
    metabolic: Optional[Dict[str, Any]] = None


class InputsConfig(BaseModel):
    p: Optional[List[List[float]]] = None
    n: Optional[List[List[float]]] = None
    r: Optional[List[List[float]]] = None
    l: Optional[List[List[float]]] = None


def gcm_from_dict(data: Dict[str, Any]) -> Gcm:
    """
    Build a Gcm from its JSON config.

    The excitatory port count defaults to the transfer arity.
    """
    try:
        cfg = GcmConfig.model_validate(data)
    except ValidationError as e:
        raise ConfigError("Invalid GCM config", error=str(e))
    transfer = transfer_from_dict({"kind": cfg.kind, **cfg.parameters})
    ports = Ports(
        p=cfg.ports.p,
        n=transfer.arity if cfg.ports.n is None else cfg.ports.n,
        r=cfg.ports.r,
        l=cfg.ports.l,
    )
    return Gcm(
        transfer=transfer,
        metabolic=metabolic_from_dict(cfg.metabolic),
        ports=ports,
        noise_var=cfg.noise_var,
        rng_seed=cfg.seed,
    )


def gcm_to_dict(gcm: Gcm) -> Dict[str, Any]:
    params = gcm.transfer.to_dict()
    kind = params.pop("kind")
    return {
        "kind": kind,
        "parameters": params,
        "ports": {"p": gcm.ports.p, "n": gcm.ports.n, "r": gcm.ports.r, "l": gcm.ports.l},
        "noise_var": gcm.noise_var,
        "seed": gcm.rng_seed,
        "metabolic": gcm.metabolic.to_dict(),
    }


def inputs_from_dict(data: Dict[str, Any], ports: Ports) -> SignalBundle:
    try:
        cfg = InputsConfig.model_validate(data)
    except ValidationError as e:
        raise DataError("Invalid GCM inputs", error=str(e))

    def signal(rows: Optional[List[List[float]]], dim: int) -> Optional[Signal]:
        return None if rows is None else Signal.from_rows(rows, dim)

    return SignalBundle(
        p=signal(cfg.p, ports.p),
        n=signal(cfg.n, ports.n),
        r=signal(cfg.r, ports.r),
        l=signal(cfg.l, ports.l),
    )
