# SPDX-FileCopyrightText: 2026 decoderbench contributors
#
# SPDX-License-Identifier: MIT

"""
Detector error models for the code families the workbench knows how to lay out itself.

Detector ``t * C + j`` is check ``j`` (of ``C`` checks) in layer ``t``. Layers ``0 .. r-1`` compare consecutive
ancilla measurements, layer ``r`` compares the final data readout with the last ancilla round.
"""

from decoderbench.dem import CodeFamily, CodeSpec, DetectorErrorModel, ErrorMechanism, NoiseKind
from decoderbench.errors import InvalidCodeSpecError

Check = tuple[int, ...]


def _validate(spec: CodeSpec, family: CodeFamily, noise: NoiseKind, single_round: bool = False) -> None:
    if spec.family != family:
        raise InvalidCodeSpecError(f"expected family {family.value}, got {spec.family.value}")
    if spec.noise != noise:
        raise InvalidCodeSpecError(f"expected noise {noise.value}, got {spec.noise.value}")
    if spec.distance < 3 or spec.distance % 2 == 0:
        raise InvalidCodeSpecError(f"distance must be an odd integer >= 3, got {spec.distance}")
    if spec.rounds < 1:
        raise InvalidCodeSpecError(f"rounds must be >= 1, got {spec.rounds}")
    if single_round and spec.rounds != 1:
        raise InvalidCodeSpecError(f"{noise.value} noise has exactly one round, got {spec.rounds}")
    if not 0.0 < spec.p < 0.5:
        raise InvalidCodeSpecError(f"p must lie in (0, 0.5), got {spec.p}")


def repetition_checks(distance: int) -> list[Check]:
    return [(j, j + 1) for j in range(distance - 1)]


def rotated_surface_faces(distance: int) -> list[tuple[str, Check]]:
    """
    Stabilizers of the rotated surface code, ordered by face corner.

    Data qubit ``(row, col)`` has index ``row * d + col``. Face ``(i, j)`` touches the data qubits
    ``(i-1, j-1), (i-1, j), (i, j-1), (i, j)`` that exist; it is X-type when ``i + j`` is even. Weight-two X faces
    sit on the top and bottom edges, weight-two Z faces on the left and right edges.

    :return: ``(type, data qubits)`` for each of the d*d - 1 stabilizers
    """
    d = distance
    faces = []
    for i in range(d + 1):
        for j in range(d + 1):
            kind = "X" if (i + j) % 2 == 0 else "Z"
            on_row_edge = i in (0, d)
            on_col_edge = j in (0, d)
            if on_row_edge and on_col_edge:
                continue
            if on_row_edge and kind != "X":
                continue
            if on_col_edge and kind != "Z":
                continue
            qubits = tuple(r * d + c for r in (i - 1, i) for c in (j - 1, j) if 0 <= r < d and 0 <= c < d)
            faces.append((kind, qubits))
    return faces


def _touching(checks: list[Check], qubit: int, offset: int = 0) -> tuple[int, ...]:
    return tuple(offset + j for j, check in enumerate(checks) if qubit in check)


def phenomenological_memory(
    checks: list[Check], num_data: int, logical: set[int], rounds: int, p: float
) -> DetectorErrorModel:
    """
    Z-basis memory with data X flips before every ancilla round and before the final readout, plus a
    measurement flip for every check in every ancilla round.

    :param checks: Data qubits of each Z-type check
    :param num_data: Number of data qubits
    :param logical: Support of the measured logical operator
    :param rounds: Ancilla rounds
    :param p: Probability of every mechanism
    """
    c = len(checks)
    mechanisms = []
    for t in range(rounds + 1):
        for q in range(num_data):
            mechanisms.append(
                ErrorMechanism(
                    probability=p,
                    detectors=_touching(checks, q, offset=t * c),
                    observables=(0,) if q in logical else (),
                )
            )
        if t == rounds:
            continue
        for j in range(c):
            mechanisms.append(ErrorMechanism(probability=p, detectors=(t * c + j, (t + 1) * c + j)))
    return DetectorErrorModel(num_detectors=c * (rounds + 1), num_observables=1, mechanisms=tuple(mechanisms))


def build_repetition_dem(spec: CodeSpec) -> DetectorErrorModel:
    _validate(spec, CodeFamily.REPETITION, NoiseKind.PHENOMENOLOGICAL)
    return phenomenological_memory(repetition_checks(spec.distance), spec.distance, {0}, spec.rounds, spec.p)


def build_repetition_code_capacity_dem(spec: CodeSpec) -> DetectorErrorModel:
    _validate(spec, CodeFamily.REPETITION, NoiseKind.CODE_CAPACITY, single_round=True)
    checks = repetition_checks(spec.distance)
    mechanisms = tuple(
        ErrorMechanism(probability=spec.p, detectors=_touching(checks, q), observables=(0,) if q == 0 else ())
        for q in range(spec.distance)
    )
    return DetectorErrorModel(num_detectors=len(checks), num_observables=1, mechanisms=mechanisms)


def build_surface_code_capacity_dem(spec: CodeSpec) -> DetectorErrorModel:
    _validate(spec, CodeFamily.ROTATED_SURFACE, NoiseKind.CODE_CAPACITY, single_round=True)
    d = spec.distance
    faces = rotated_surface_faces(d)
    z_checks = [qubits if kind == "Z" else () for kind, qubits in faces]
    x_checks = [qubits if kind == "X" else () for kind, qubits in faces]
    logical_z = set(range(d))  # top row
    logical_x = set(range(0, d * d, d))  # left column
    mechanisms = []
    for q in range(d * d):
        x_flip = (0,) if q in logical_z else ()
        z_flip = (1,) if q in logical_x else ()
        mechanisms.append(ErrorMechanism(probability=spec.p, detectors=_touching(z_checks, q), observables=x_flip))
        mechanisms.append(ErrorMechanism(probability=spec.p, detectors=_touching(x_checks, q), observables=z_flip))
    return DetectorErrorModel(num_detectors=len(faces), num_observables=2, mechanisms=tuple(mechanisms))


def build_surface_phenomenological_dem(spec: CodeSpec) -> DetectorErrorModel:
    _validate(spec, CodeFamily.ROTATED_SURFACE, NoiseKind.PHENOMENOLOGICAL)
    d = spec.distance
    z_checks = [qubits for kind, qubits in rotated_surface_faces(d) if kind == "Z"]
    return phenomenological_memory(z_checks, d * d, set(range(d)), spec.rounds, spec.p)


def build_dem(spec: CodeSpec) -> DetectorErrorModel:
    builders = {
        (CodeFamily.REPETITION, NoiseKind.PHENOMENOLOGICAL): build_repetition_dem,
        (CodeFamily.REPETITION, NoiseKind.CODE_CAPACITY): build_repetition_code_capacity_dem,
        (CodeFamily.ROTATED_SURFACE, NoiseKind.CODE_CAPACITY): build_surface_code_capacity_dem,
        (CodeFamily.ROTATED_SURFACE, NoiseKind.PHENOMENOLOGICAL): build_surface_phenomenological_dem,
    }
    return builders[(spec.family, spec.noise)](spec)
