"""JSON and CSV serialization for chains, metrics, surfaces and tables.

Complex entries are always [re, im] pairs; matrices are row-major nested
lists of pairs. Documents carry a format_version field. Parsing and
serialization round-trip bit-exactly for finite doubles.
"""

from __future__ import annotations

import csv
import json
from pathlib import Path
from typing import Optional, Union

import numpy as np

from .errors import FormatError
from .linalg import CMatrix, cmatrix
from .model import BAChain, DNChain, DNLink, DNSite
from .spectral import SpectralSurface

FORMAT_VERSION = "1"

Chain = Union[DNChain, BAChain]


def matrix_to_pairs(m: CMatrix) -> list:
    return [[[float(v.real), float(v.imag)] for v in row] for row in np.asarray(m)]


def matrix_from_pairs(obj, context: str = "matrix") -> CMatrix:
    try:
        arr = np.asarray(obj, dtype=float)
    except (TypeError, ValueError) as exc:
        raise FormatError(f"{context}: not a nested numeric array") from exc
    if arr.ndim != 3 or arr.shape[2] != 2:
        raise FormatError(f"{context}: expected rows x cols x [re, im], got shape {arr.shape}")
    return cmatrix(arr[:, :, 0] + 1j * arr[:, :, 1])


def chain_to_document(
    chain: Chain,
    metric=None,
    metadata: Optional[dict] = None,
) -> dict:
    doc: dict = {"format_version": FORMAT_VERSION, "k": chain.k}
    if isinstance(chain, DNChain):
        doc["form"] = "dn"
        doc["origin"] = chain.r0
        doc["sites"] = [
            {"A": matrix_to_pairs(s.A), "B": matrix_to_pairs(s.B), "D": matrix_to_pairs(s.D)}
            for s in chain.sites
        ]
        doc["links"] = [
            {"Pplus": matrix_to_pairs(l.Pplus), "Pminus": matrix_to_pairs(l.Pminus)}
            for l in chain.links
        ]
    else:
        doc["form"] = "ba"
        doc["origin"] = chain.origin
        doc["betas"] = [matrix_to_pairs(b) for b in chain.betas]
        doc["gammas"] = [matrix_to_pairs(g) for g in chain.gammas]
    if metric is not None:
        doc["metric"] = [matrix_to_pairs(g) for g in metric]
    if metadata is not None:
        doc["metadata"] = metadata
    return doc


def document_to_chain(doc: dict) -> tuple[Chain, Optional[tuple]]:
    """Parse a chain document; returns (chain, metric-or-None)."""
    if not isinstance(doc, dict):
        raise FormatError("chain document must be a JSON object")
    form = doc.get("form")
    try:
        k = int(doc["k"])
        origin = int(doc.get("origin", 0))
    except (KeyError, TypeError, ValueError) as exc:
        raise FormatError("chain document needs integer 'k' (and optional 'origin')") from exc
    metric = None
    if "metric" in doc:
        metric = tuple(
            matrix_from_pairs(g, f"metric[{i}]") for i, g in enumerate(doc["metric"])
        )
    if form == "ba":
        try:
            betas = tuple(
                matrix_from_pairs(b, f"betas[{i}]") for i, b in enumerate(doc["betas"])
            )
            gammas = tuple(
                matrix_from_pairs(g, f"gammas[{i}]") for i, g in enumerate(doc["gammas"])
            )
        except KeyError as exc:
            raise FormatError("ba document needs 'betas' and 'gammas'") from exc
        try:
            return BAChain(k=k, betas=betas, gammas=gammas, origin=origin), metric
        except Exception as exc:
            raise FormatError(f"inconsistent ba document: {exc}") from exc
    if form == "dn":
        try:
            sites = tuple(
                DNSite(
                    r=origin + i,
                    A=matrix_from_pairs(s["A"], f"sites[{i}].A"),
                    B=matrix_from_pairs(s["B"], f"sites[{i}].B"),
                    D=matrix_from_pairs(s["D"], f"sites[{i}].D"),
                )
                for i, s in enumerate(doc["sites"])
            )
            links = tuple(
                DNLink(
                    r=origin + i,
                    Pplus=matrix_from_pairs(l["Pplus"], f"links[{i}].Pplus"),
                    Pminus=matrix_from_pairs(l["Pminus"], f"links[{i}].Pminus"),
                )
                for i, l in enumerate(doc["links"])
            )
        except KeyError as exc:
            raise FormatError(f"dn document missing field: {exc}") from exc
        try:
            return DNChain(k=k, sites=sites, links=links), metric
        except Exception as exc:
            raise FormatError(f"inconsistent dn document: {exc}") from exc
    raise FormatError(f"unknown chain form {form!r} (expected 'dn' or 'ba')")


def surface_to_grid(surface: SpectralSurface) -> list:
    return matrix_to_pairs(surface.c)


def surface_from_grid(obj, k: int) -> SpectralSurface:
    c = matrix_from_pairs(obj, "surface")
    return SpectralSurface(k=k, c=c)


def metric_to_document(metric, k: int) -> dict:
    return {
        "format_version": FORMAT_VERSION,
        "k": k,
        "metric": [matrix_to_pairs(g) for g in metric],
    }


def metric_from_document(doc: dict) -> tuple:
    try:
        return tuple(
            matrix_from_pairs(g, f"metric[{i}]") for i, g in enumerate(doc["metric"])
        )
    except (KeyError, TypeError) as exc:
        raise FormatError("metric document needs a 'metric' list") from exc


def save_json(path, doc: dict) -> None:
    Path(path).write_text(json.dumps(doc, indent=2) + "\n")


def load_json(path) -> dict:
    try:
        return json.loads(Path(path).read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise FormatError(f"cannot read JSON from {path}: {exc}") from exc


def write_csv(path, header: list[str], rows: list[list]) -> None:
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(header)
        writer.writerows(rows)
