"""Run configuration: two morphism specs, seeds and options.

Grammar (whitespace and newlines are free, "#" comments to end of line):

    config   = morphism "|" morphism option*
    morphism = rule (";" rule)*        rule = letter "->" word
    option   = key "=" value

Words use the same syntax as morphism images: juxtaposed single-char
letters, "."-separated tokens for longer letters, and "x^k" repetition
sugar.  Example:

    a->abc;b->a;c->ac | a->cba;b->a;c->ca seeds=a,c order=1 length=10000
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field, fields

from .balance import default_seeds
from .errors import DomainError, ParseError
from .words import Morphism, incidence_matrix, parse_morphism, prolongable_seeds

__all__ = ["RunConfig", "parse_run_config", "format_run_config", "ALL_STAGES"]

ALL_STAGES = ("code", "infer", "verify", "certify", "scan")

_INT_KEYS = {
    "order": "order",
    "length": "length",
    "offset-bound": "offset_bound",
    "power": "power",
    "bound": "bound",
    "max-pairs": "max_pairs",
    "max-iterations": "max_iterations",
    "max-image-len": "max_image_len",
    "horizon": "horizon",
    "node-budget": "node_budget",
    "scan": "scan_length",
}


@dataclass
class RunConfig:
    """Validated inputs for a pipeline run; all bounds are positive."""

    phi0: Morphism
    phi1: Morphism
    seeds: tuple[str, str]
    order: int = 1
    length: int = 10_000
    offset_bound: int = 64
    power: int = 1
    bound: int = 10_000
    max_pairs: int = 10_000
    max_iterations: int = 100
    max_image_len: int = 8
    horizon: int = 5_000
    node_budget: int = 10_000_000
    scan_length: int = 100_000
    letter: str | None = None
    windows: tuple[int, int] | None = None
    derived: str | None = None
    stages: tuple[str, ...] = ALL_STAGES
    incidence_equal: bool = field(default=True, compare=False)

    def validate(self) -> "RunConfig":
        if self.phi0.source != self.phi1.source:
            raise DomainError("the two morphisms must share an alphabet")
        for name in (
            "order", "length", "offset_bound", "power", "bound", "max_pairs",
            "max_iterations", "max_image_len", "horizon", "node_budget",
            "scan_length",
        ):
            if getattr(self, name) < 1:
                raise DomainError(f"{name} must be positive")
        for seed, m in zip(self.seeds, (self.phi0, self.phi1)):
            if seed not in prolongable_seeds(m):
                raise DomainError(f"seed {seed!r} is not prolongable for {m}")
        if self.letter is not None and self.letter not in self.phi0.source:
            raise DomainError(f"letter {self.letter!r} not in the alphabet")
        unknown = set(self.stages) - set(ALL_STAGES)
        if unknown:
            raise DomainError(f"unknown stages {sorted(unknown)}")
        self.incidence_equal = bool(
            (incidence_matrix(self.phi0) == incidence_matrix(self.phi1)).all()
        )
        return self


def parse_run_config(text: str) -> RunConfig:
    """Parse and validate a config string (see the module docstring)."""
    stripped = "\n".join(line.split("#", 1)[0] for line in text.splitlines())
    if not stripped.strip():
        raise ParseError("empty config")
    if "|" not in stripped:
        raise ParseError("config needs two morphism specs separated by '|'")
    left, _, rest = stripped.partition("|")
    # the second morphism spec ends at the first key=value option
    tokens = rest.split()
    spec_tokens: list[str] = []
    options: list[str] = []
    for i, tok in enumerate(tokens):
        if re.match(r"^[a-z-]+=", tok):
            options = tokens[i:]
            break
        spec_tokens.append(tok)
    else:
        options = []
    phi0 = parse_morphism(left)
    phi1 = parse_morphism("".join(spec_tokens), alphabet=phi0.source)
    kwargs: dict = {}
    for opt in options:
        key, _, value = opt.partition("=")
        if not value:
            raise ParseError(f"option {opt!r} is not key=value")
        if key == "seeds":
            parts = value.split(",")
            if len(parts) != 2:
                raise ParseError(f"seeds must be two letters, got {value!r}")
            kwargs["seeds"] = (parts[0], parts[1])
        elif key == "windows":
            parts = value.split(",")
            if len(parts) != 2 or not all(p.lstrip("-").isdigit() for p in parts):
                raise ParseError(f"windows must be back,fwd integers, got {value!r}")
            kwargs["windows"] = (int(parts[0]), int(parts[1]))
        elif key == "letter":
            kwargs["letter"] = value
        elif key == "derived":
            kwargs["derived"] = value
        elif key == "stages":
            kwargs["stages"] = tuple(value.split(","))
        elif key in _INT_KEYS:
            if not value.lstrip("-").isdigit():
                raise ParseError(f"option {key} needs an integer, got {value!r}")
            kwargs[_INT_KEYS[key]] = int(value)
        else:
            raise ParseError(f"unknown option {key!r}")
    if "seeds" not in kwargs:
        try:
            kwargs["seeds"] = default_seeds(phi0, phi1)
        except DomainError as exc:
            raise ParseError(str(exc)) from None
    try:
        return RunConfig(phi0=phi0, phi1=phi1, **kwargs).validate()
    except DomainError as exc:
        raise ParseError(str(exc)) from None


def format_run_config(config: RunConfig) -> str:
    """Canonical one-line text form; parse_run_config inverts it."""
    parts = [f"{config.phi0} | {config.phi1}", f"seeds={config.seeds[0]},{config.seeds[1]}"]
    defaults = {f.name: f.default for f in fields(RunConfig)}
    for key, attr in _INT_KEYS.items():
        value = getattr(config, attr)
        if value != defaults[attr]:
            parts.append(f"{key}={value}")
    if config.letter is not None:
        parts.append(f"letter={config.letter}")
    if config.windows is not None:
        parts.append(f"windows={config.windows[0]},{config.windows[1]}")
    if config.derived is not None:
        parts.append(f"derived={config.derived}")
    if config.stages != ALL_STAGES:
        parts.append("stages=" + ",".join(config.stages))
    return " ".join(parts)
