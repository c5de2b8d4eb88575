# SPDX-FileCopyrightText: 2026 decoderbench contributors
#
# SPDX-License-Identifier: MIT

import re
from typing import Iterable, TextIO

import xxhash

from decoderbench.dem import Component, DetectorErrorModel, ErrorMechanism, xor_sets
from decoderbench.errors import DemSyntaxError, InvalidModelError

_INSTRUCTION = re.compile(r"^(?P<name>[A-Za-z_]+)\s*(?:\((?P<args>[^)]*)\))?(?P<targets>.*)$")
_TARGET = re.compile(r"^(?P<kind>[DL])(?P<index>-?\d+)$")


def _parse_target(token: str, line: int) -> tuple[str, int]:
    match = _TARGET.match(token)
    if match is None:
        raise DemSyntaxError(line, f"unknown target '{token}'")
    index = int(match["index"])
    if index < 0:
        raise InvalidModelError(f"line {line}: negative index in '{token}'")
    return match["kind"], index


def _parse_error(args: str | None, targets: str, line: int) -> ErrorMechanism:
    if args is None:
        raise DemSyntaxError(line, "error instruction needs a probability argument")
    try:
        probability = float(args)
    except ValueError:
        raise DemSyntaxError(line, f"bad probability '{args.strip()}'")
    if not 0.0 < probability <= 0.5:
        raise InvalidModelError(f"line {line}: probability {probability} out of range (0, 0.5]")

    components: list[Component] = []
    detectors: list[int] = []
    observables: list[int] = []
    tokens = targets.replace("^", " ^ ").split()
    for position, token in enumerate(tokens + ["^"]):
        if token == "^":
            if not detectors and not observables and (position < len(tokens) or components):
                raise DemSyntaxError(line, "empty component around '^'")
            components.append(
                Component(detectors=xor_sets(tuple(detectors)), observables=xor_sets(tuple(observables)))
            )
            detectors, observables = [], []
            continue
        kind, index = _parse_target(token, line)
        (detectors if kind == "D" else observables).append(index)
    return ErrorMechanism.from_components(probability, components)


def parse_dem(text: str | TextIO | Iterable[str]) -> DetectorErrorModel:
    """
    Parses the supported subset of the detector-error-model text format.

    Mechanisms with identical symptoms stay separate; they are only merged when building a matching graph.

    :param text: The DEM as a string, an open file, or an iterable of lines
    :return: The parsed model
    """
    lines = text.splitlines() if isinstance(text, str) else text
    mechanisms: list[ErrorMechanism] = []
    max_detector = -1
    max_observable = -1
    for number, raw in enumerate(lines, start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        match = _INSTRUCTION.match(line)
        if match is None:
            raise DemSyntaxError(number, f"cannot parse '{line}'")
        name, args, targets = match["name"], match["args"], match["targets"]
        if name == "error":
            mechanism = _parse_error(args, targets, number)
            mechanisms.append(mechanism)
            if mechanism.detectors:
                max_detector = max(max_detector, mechanism.detectors[-1])
            if mechanism.observables:
                max_observable = max(max_observable, mechanism.observables[-1])
        elif name in ("detector", "logical_observable"):
            expected = "D" if name == "detector" else "L"
            tokens = targets.split()
            if not tokens:
                raise DemSyntaxError(number, f"{name} declaration without a target")
            for token in tokens:
                kind, index = _parse_target(token, number)
                if kind != expected:
                    raise DemSyntaxError(number, f"{name} declaration cannot name '{token}'")
                if kind == "D":
                    max_detector = max(max_detector, index)
                else:
                    max_observable = max(max_observable, index)
        else:
            raise DemSyntaxError(number, f"unsupported instruction '{name}'")
    return DetectorErrorModel(
        num_detectors=max(1, max_detector + 1),
        num_observables=max(1, max_observable + 1),
        mechanisms=tuple(mechanisms),
    )


def _format_targets(detectors: tuple[int, ...], observables: tuple[int, ...]) -> str:
    return " ".join([f"D{d}" for d in detectors] + [f"L{o}" for o in observables])


def serialize_dem(model: DetectorErrorModel) -> str:
    lines = []
    for mech in model.mechanisms:
        if mech.decomposition is None:
            targets = _format_targets(mech.detectors, mech.observables)
        else:
            targets = " ^ ".join(_format_targets(c.detectors, c.observables) for c in mech.decomposition)
        lines.append(f"error({mech.probability!r}) {targets}".rstrip())
    lines.append(f"detector D{model.num_detectors - 1}")
    lines.append(f"logical_observable L{model.num_observables - 1}")
    return "\n".join(lines) + "\n"


def dem_fingerprint(model: DetectorErrorModel) -> str:
    hash_obj = xxhash.xxh3_128()
    hash_obj.update(serialize_dem(model).encode("utf-8"))
    return hash_obj.hexdigest()
