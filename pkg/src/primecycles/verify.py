"""Convergence tables tying exact enumeration to the asymptotic models.

Each table pairs an exactly computed quantity with a closed-form model and
records the ratio plus a model-specific scaled residual.  Acceptance is
property-based: residuals stay inside fixed safety-factor bands and ratios
drift toward 1 along the default grids.  The safety factors compensate for
unspecified constants in the error terms, they are not sharp claims.
"""

import json
import math
from dataclasses import dataclass

from primecycles.errors import InvalidArgumentError
from primecycles.exact_enum import CountTable, partial_sum
from primecycles.analytic import (
    Constants,
    f_eval,
    odlyzko_sum_model,
    partial_sum_log_model,
    phi_eval,
    phi_split,
)
from primecycles.cycle_classes import KIND_PRIMES
from primecycles.primes import PrimeTable

N_GRID_DEFAULT = (100, 1000, 10_000, 100_000)
T_GRID_DEFAULT = (1e-3, 1e-4, 1e-5, 1e-6, 1e-7, 1e-8)

PARTIAL_SUM_RESIDUAL_BOUND = 2.0
PHI_SAFETY_FACTOR = 5.0


@dataclass(frozen=True)
class ConvergenceRow:
    x: float
    exact: float
    model: float
    ratio: float
    scaled_residual: float


def make_row(x: float, exact: float, model: float,
             scaled_residual: float) -> ConvergenceRow:
    return ConvergenceRow(x=float(x), exact=float(exact), model=float(model),
                          ratio=float(exact) / float(model),
                          scaled_residual=float(scaled_residual))


def partial_sum_table(table: CountTable, n_grid, constants: Constants):
    """Rows comparing T_n against e^c ln n over the grid.

    scaled_residual = (T_n/ln n - e^c) * ln ln n, the natural scale of the
    model's error term.
    """
    if table.spec.kind != KIND_PRIMES:
        raise InvalidArgumentError("partial-sum table is defined for the primes spec")
    rows = []
    for n in n_grid:
        if n < 2:
            raise InvalidArgumentError(f"grid entries must be >= 2, got {n}")
        exact = float(partial_sum(table, n))
        model = partial_sum_log_model(n, constants)
        resid = (exact / math.log(n) - constants.e_to_c) * math.log(math.log(n))
        rows.append(make_row(n, exact, model, resid))
    return rows


def hlk_comparison_table(table: CountTable, n_grid, constants: Constants):
    """Rows comparing T_n against f_A(1 - 1/n) / Gamma(rho + 1).

    For the primes spec the model is f_eval(1 - 1/n) directly (density 0,
    Gamma(1) = 1); other specs go through odlyzko_sum_model.
    scaled_residual = (ratio - 1) * ln ln n.
    """
    rows = []
    for n in n_grid:
        if n < 2:
            raise InvalidArgumentError(f"grid entries must be >= 2, got {n}")
        exact = float(partial_sum(table, n))
        if table.spec.kind == KIND_PRIMES:
            model = f_eval(1.0 - 1.0 / n)
        else:
            model = odlyzko_sum_model(table.spec, n, constants)
        resid = (exact / model - 1.0) * math.log(math.log(n))
        rows.append(make_row(n, exact, model, resid))
    return rows


def slow_variation_check(u_list, t_grid) -> dict:
    """For L = ln: max over u of |ln(u t)/ln(t) - 1| at the largest grid t.

    The bound ln(10)/ln(max t) is what u in [0.1, 10] allows; u = 1 gives 0.
    """
    if not u_list:
        raise InvalidArgumentError("u_list must be nonempty")
    if any(u < 0.1 or u > 10.0 for u in u_list):
        raise InvalidArgumentError("every u must lie in [0.1, 10]")
    t_list = list(t_grid)
    if sorted(t_list) != t_list or len(t_list) < 1:
        raise InvalidArgumentError("t_grid must be increasing")
    if max(t_list) < 1e6:
        raise InvalidArgumentError("t_grid must reach at least 1e6")
    t = float(max(t_list))
    per_u = [(float(u), abs(math.log(u * t) / math.log(t) - 1.0)) for u in u_list]
    max_dev = max(d for _, d in per_u)
    bound = math.log(10.0) / math.log(t)
    return {
        "max_deviation": max_dev,
        "bound": bound,
        "ok": max_dev <= bound + 1e-15,
        "per_u": per_u,
    }


@dataclass(frozen=True)
class PhiEstimateRow:
    """One grid point of the phi(e^-t) split against its three estimates."""

    t: float
    cutoff: float
    phi1: float
    phi2: float
    phi3: float
    recombined: float
    direct: float
    phi1_scaled: float
    phi2_scaled: float
    phi3_scaled: float


def phi_estimate_table(t_grid, constants: Constants):
    """Per t: the split, its recombination against phi_eval(e^-t), and the
    three residuals on their natural scales.

    phi1_scaled = (phi1 - lnln(1/t) - c) * ln(1/t)/lnln(1/t)
    phi2_scaled = phi2 * lnln(1/t)
    phi3_scaled = phi3 / (e^{-yt}/(yt))   (geometric-tail envelope)
    """
    rows = []
    for t in t_grid:
        split = phi_split(t)
        direct = phi_eval(math.exp(-t))
        log_inv = math.log(1.0 / t)
        loglog = math.log(log_inv)
        envelope = math.exp(-split.cutoff * t) / (split.cutoff * t)
        rows.append(PhiEstimateRow(
            t=float(t),
            cutoff=split.cutoff,
            phi1=split.phi1,
            phi2=split.phi2,
            phi3=split.phi3,
            recombined=split.phi1 + split.phi2 + split.phi3,
            direct=direct,
            phi1_scaled=(split.phi1 - loglog - constants.mertens_c)
                        * log_inv / loglog,
            phi2_scaled=split.phi2 * loglog,
            phi3_scaled=split.phi3 / envelope,
        ))
    return rows


def pnt_table(table: PrimeTable, k_grid):
    """Rows of (k, p_k) against the model k ln k; scaled_residual = ratio - 1."""
    rows = []
    for k in k_grid:
        if k < 2:
            raise InvalidArgumentError(f"grid entries must be >= 2, got {k}")
        pk = table.nth_prime(k)
        model = k * math.log(k)
        ratio = pk / model
        rows.append(make_row(k, pk, model, ratio - 1.0))
    return rows


# -- report emission ---------------------------------------------------------


_CSV_HEADER = "x,exact,model,ratio,scaled_residual"


def emit_report(rows, format: str, destination) -> None:
    """Write ConvergenceRow tables as CSV or JSON, 17 significant digits.

    destination is a path or a writable text file object.  Output is
    deterministic and round-trips through parse_report to the last bit.
    """
    if not rows:
        raise InvalidArgumentError("rows must be nonempty")
    if format not in ("csv", "json"):
        raise InvalidArgumentError(f"unknown format {format!r}")
    close = False
    if isinstance(destination, (str, bytes)):
        destination = open(destination, "w")
        close = True
    try:
        if format == "csv":
            destination.write(_CSV_HEADER + "\n")
            for r in rows:
                destination.write(
                    f"{r.x:.17g},{r.exact:.17g},{r.model:.17g},"
                    f"{r.ratio:.17g},{r.scaled_residual:.17g}\n"
                )
        else:
            payload = [
                {"x": r.x, "exact": r.exact, "model": r.model,
                 "ratio": r.ratio, "scaled_residual": r.scaled_residual}
                for r in rows
            ]
            json.dump(payload, destination, indent=1)
            destination.write("\n")
    finally:
        if close:
            destination.close()


def parse_report(source, format: str):
    """Inverse of emit_report; source is a path, file object, or text."""
    if format not in ("csv", "json"):
        raise InvalidArgumentError(f"unknown format {format!r}")
    if hasattr(source, "read"):
        text = source.read()
    elif isinstance(source, str) and ("\n" in source or "," in source
                                      or source.lstrip().startswith("[")):
        text = source
    else:
        with open(source) as fh:
            text = fh.read()
    rows = []
    if format == "csv":
        lines = [ln for ln in text.splitlines() if ln.strip()]
        if not lines or lines[0] != _CSV_HEADER:
            raise InvalidArgumentError("missing or wrong CSV header")
        for ln in lines[1:]:
            x, exact, model, ratio, resid = (float(v) for v in ln.split(","))
            rows.append(ConvergenceRow(x=x, exact=exact, model=model,
                                       ratio=ratio, scaled_residual=resid))
    else:
        for obj in json.loads(text):
            rows.append(ConvergenceRow(
                x=obj["x"], exact=obj["exact"], model=obj["model"],
                ratio=obj["ratio"], scaled_residual=obj["scaled_residual"]))
    return rows
