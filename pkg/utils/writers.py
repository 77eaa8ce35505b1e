import csv
import io
import json
import sys

from classes.physical import EvolutionResult
from definitions.global_constants import SIGNIFICANT_DIGITS
from utils.scalars import format_scalar, format_significant


def rounded(value, digits: int = SIGNIFICANT_DIGITS) -> float:
    """ A float rounded to ``digits`` significant digits, for deterministic JSON numbers. """
    return float(format_significant(value, digits))


def render_json(data) -> str:
    """ UTF-8 JSON with the key order of ``data`` preserved. """
    return json.dumps(data, indent=2, ensure_ascii=False) + "\n"


def render_csv(header: list, rows) -> str:
    """ RFC-4180 CSV (CRLF line endings, minimal quoting). """
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\r\n")
    writer.writerow(header)
    writer.writerows(rows)
    return buffer.getvalue()


def emit(text: str, filename: str | None = None) -> None:
    """
    Writes the rendered output to a file, or to stdout when no file is given.

    :param text: The rendered document.
    :type text: str
    :param filename: Output filename.
    :type filename: str | None
    """
    if filename is None:
        sys.stdout.write(text)
        return
    newline = "" if text.endswith("\r\n") else None
    with open(filename, "w", encoding="utf-8", newline=newline) as f:
        f.write(text)


def spectrum_records(rows) -> list[dict]:
    """ JSON records of spectrum_table rows (N, a, E_0, ..., E_{N-1}). """
    return [{"N": N, "a": format_scalar(a), "energies": [rounded(E) for E in energies]}
            for N, a, *energies in rows]


def spectrum_csv_header(width: int) -> list[str]:
    """ N, a, E_0, ..., E_{width-1}. """
    return ["N", "a"] + [f"E_{n}" for n in range(width)]


def spectrum_csv_rows(rows, width: int) -> list[list]:
    """
    One row per (N, a) in the reference table layout; spectra shorter than
    ``width`` are padded with empty fields so every record has the header's length.
    """
    return [[N, format_scalar(a)] + [format_significant(E) for E in energies] + [""] * (width - len(energies))
            for N, a, *energies in rows]


TRAJECTORY_HEADER = ["t", "s", "re_psi", "im_psi", "rho"]


def trajectory_rows(result: EvolutionResult) -> list[list]:
    """
    One row per (time, site) with the smeared wavefunction and the site probability.
    Sites are numbered 1..N.
    """
    rows = []
    for i, t in enumerate(result.times):
        for s, (value, rho) in enumerate(zip(result.smeared[i], result.site_probabilities[i]), start=1):
            rows.append([format_significant(t), s, format_significant(value.real),
                         format_significant(value.imag), format_significant(rho)])
    return rows
