"""Element tables for the supported SMILES subset."""

from __future__ import annotations

# Organic-subset elements may be written without brackets; everything else is
# rejected at parse time.
ORGANIC_SUBSET = ("B", "C", "N", "O", "P", "S", "F", "Cl", "Br", "I")

# Lowercase aromatic symbols accepted by the reader.
AROMATIC_SYMBOLS = {"b": "B", "c": "C", "n": "N", "o": "O", "p": "P", "s": "S"}

SUPPORTED_ELEMENTS = ORGANIC_SUBSET + ("H",)

# Default valences for neutral atoms.
DEFAULT_VALENCES: dict[str, tuple[int, ...]] = {
    "H": (1,),
    "B": (3,),
    "C": (4,),
    "N": (3,),
    "O": (2,),
    "F": (1,),
    "P": (3, 5),
    "S": (2, 4, 6),
    "Cl": (1,),
    "Br": (1,),
    "I": (1,),
}

ATOMIC_NUMBERS: dict[str, int] = {
    "H": 1,
    "B": 5,
    "C": 6,
    "N": 7,
    "O": 8,
    "F": 9,
    "P": 15,
    "S": 16,
    "Cl": 17,
    "Br": 35,
    "I": 53,
}

# Standard atomic weights; implicit hydrogens are added at 1.008 Da each.
ATOMIC_MASSES: dict[str, float] = {
    "H": 1.008,
    "B": 10.811,
    "C": 12.011,
    "N": 14.007,
    "O": 15.999,
    "F": 18.998,
    "P": 30.974,
    "S": 32.065,
    "Cl": 35.453,
    "Br": 79.904,
    "I": 126.904,
}


def allowed_valences(symbol: str, charge: int = 0) -> tuple[int, ...]:
    """Valences an atom may carry, shifted by its formal charge.

    Electronegative elements gain a bonding slot per positive charge and lose
    one per negative charge; boron does the opposite (borate is tetravalent);
    carbon and hydrogen lose a slot for either charge sign.
    """
    base = DEFAULT_VALENCES[symbol]
    if charge == 0:
        return base
    if symbol == "B":
        shift = -charge
    elif symbol in ("C", "H"):
        shift = -abs(charge)
    else:
        shift = charge
    vals = tuple(sorted({v + shift for v in base if v + shift >= 0}))
    return vals or (0,)


def is_supported(symbol: str) -> bool:
    return symbol in DEFAULT_VALENCES
