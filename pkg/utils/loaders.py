import json

from classes.hamiltonian import TridiagonalHamiltonian
from definitions.errors import ConfigError
from definitions.global_constants import Backend
from utils.scalars import parse_scalar


def parse_scalar_list(text: str, backend: Backend) -> tuple:
    """
    Parses a comma-separated list such as "1/10,-2,0.5".

    :param text: The list text.
    :type text: str
    :param backend: The target backend.
    :type backend: Backend

    :return: The parsed scalars.
    :rtype: tuple
    """
    items = [item for item in text.split(",") if item.strip()]
    if not items:
        raise ConfigError(f"'{text}' holds no numbers")
    return tuple(parse_scalar(item, backend) for item in items)


def _backend_of_entries(entries) -> Backend:
    # "p/q" strings are exact; float dumps carry a decimal point or exponent
    exact = all("." not in entry and "e" not in entry.lower() for entry in entries)
    return Backend.RATIONAL if exact else Backend.FLOAT


def hamiltonian_from_dict(data: dict) -> TridiagonalHamiltonian:
    """
    Rebuilds a Hamiltonian from its JSON form {"n", "diag", "super", "sub"}.

    :param data: The decoded JSON object.
    :type data: dict

    :return: The Hamiltonian.
    :rtype: TridiagonalHamiltonian

    :raises ConfigError: If a field is missing or malformed.
    """
    try:
        entries = list(data["diag"]) + list(data["super"]) + list(data["sub"])
        backend = _backend_of_entries(entries)
        hamiltonian = TridiagonalHamiltonian(
            [parse_scalar(value, backend) for value in data["diag"]],
            [parse_scalar(value, backend) for value in data["super"]],
            [parse_scalar(value, backend) for value in data["sub"]],
        )
    except (KeyError, TypeError) as error:
        raise ConfigError(f"malformed Hamiltonian record: {error}") from error
    if hamiltonian.n != data.get("n", hamiltonian.n):
        raise ConfigError(f"record says n = {data['n']} but holds {hamiltonian.n} diagonal entries")
    return hamiltonian


def load_json(filename: str) -> dict:
    """
    Reads a UTF-8 JSON document.

    :param filename: The file to read.
    :type filename: str

    :return: The decoded object.
    :rtype: dict

    :raises ConfigError: If the file is missing or is not valid JSON.
    """
    try:
        with open(filename, "r", encoding="utf-8") as f:
            return json.load(f)
    except OSError as error:
        raise ConfigError(f"cannot read '{filename}': {error.strerror}") from error
    except json.JSONDecodeError as error:
        raise ConfigError(f"'{filename}' is not valid JSON: {error}") from error
