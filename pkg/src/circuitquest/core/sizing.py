"""Conductor sizing against a voltage-drop budget."""

from __future__ import annotations

from dataclasses import dataclass

from .errors import CircuitError, NoAdmissibleSizeError

#: Resistivity at working temperature, ohm metre.
RESISTIVITY = {
    "copper": 1.72e-8,
    "aluminium": 2.82e-8,
}

#: Stock cross sections, square millimetres.
STANDARD_SECTIONS_MM2 = (1.5, 2.5, 4.0, 6.0, 10.0, 16.0, 25.0, 35.0, 50.0)


@dataclass(frozen=True)
class ConductorChoice:
    section_mm2: float
    resistance_ohm: float   # go and return path together
    drop_v: float
    loss_w: float
    material: str


def wire_resistance(length_m: float, section_mm2: float, resistivity: float) -> float:
    """Round-trip resistance of a two-conductor run."""
    return resistivity * (2.0 * length_m) / (section_mm2 * 1e-6)


def size_conductor(
    current_a: float,
    length_m: float,
    max_drop_v: float,
    material: str = "copper",
    resistivity: float | None = None,
    sections_mm2: tuple[float, ...] | None = None,
) -> ConductorChoice:
    """Smallest stock cross-section whose round-trip drop fits the budget.

    The run is modelled as supply and return conductors of ``length_m``
    each. Raises NoAdmissibleSize when even the largest stock section
    exceeds ``max_drop_v`` at the given current.
    """
    if current_a <= 0.0 or length_m <= 0.0 or max_drop_v <= 0.0:
        raise CircuitError("current, length and allowed drop must all be > 0")
    if resistivity is None:
        try:
            resistivity = RESISTIVITY[material]
        except KeyError:
            raise CircuitError(
                f"unknown material {material!r}; pass resistivity= for custom stock"
            ) from None
    if resistivity <= 0.0:
        raise CircuitError("resistivity must be > 0")
    catalog = sections_mm2 if sections_mm2 is not None else STANDARD_SECTIONS_MM2
    if not catalog:
        raise CircuitError("empty cross-section catalogue")

    for section in sorted(catalog):
        r = wire_resistance(length_m, section, resistivity)
        drop = current_a * r
        if drop <= max_drop_v:
            return ConductorChoice(
                section_mm2=section,
                resistance_ohm=r,
                drop_v=drop,
                loss_w=current_a * current_a * r,
                material=material if resistivity == RESISTIVITY.get(material) else "custom",
            )
    raise NoAdmissibleSizeError(
        f"no stock section keeps the drop under {max_drop_v} V at {current_a} A "
        f"over {length_m} m"
    )
