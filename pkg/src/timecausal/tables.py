"""Generators for the delay, normalization, cumulant and log-normal comparison tables."""
from __future__ import annotations

import csv
import io
import math
from typing import List, Optional, Sequence, Tuple

from .kernels import (cumulants_logarithmic, cumulants_uniform, koenderink_map_finite_K,
                      koenderink_map_limit, tmax_numeric)
from .normalization import alpha_discrete, deviation_from_limit
from .scales import logarithmic_time_constants, uniform_time_constants

# distribution columns: None is the uniform distribution, otherwise c
COLUMNS: Tuple[Tuple[str, Optional[float]], ...] = (
    ("uniform", None),
    ("c=sqrt2", math.sqrt(2)),
    ("c=2^(3/4)", 2 ** 0.75),
    ("c=2", 2.0),
)
COLUMN_NAMES = [name for name, _ in COLUMNS]
DELAY_KS = tuple(range(2, 13))
NORM_KS = (2, 3, 4, 5, 6, 7, 8, 16)
NORM_TAUS = (1.0, 16.0, 256.0)
DEVIATION_KS = (2, 4, 8, 16, 32)


def _dist(tau, K, c):
    return uniform_time_constants(tau, K) if c is None else logarithmic_time_constants(tau, c, K)


def table_means(Ks: Sequence[int] = DELAY_KS, tau: float = 1.0) -> List[list]:
    return [[K] + [_dist(tau, K, c).mean for _, c in COLUMNS] for K in Ks]


def table_tmax(Ks: Sequence[int] = DELAY_KS, tau: float = 1.0) -> List[list]:
    return [[K] + [tmax_numeric(_dist(tau, K, c)) for _, c in COLUMNS] for K in Ks]


def table_alpha(n: int, taus: Sequence[float] = NORM_TAUS, Ks: Sequence[int] = NORM_KS) -> List[list]:
    rows = []
    for tau in taus:
        for K in Ks:
            rows.append([tau, K, tau ** (n / 2)] + [alpha_discrete(n, float(tau), K, c) for _, c in COLUMNS])
    return rows


def table_deviation(ns: Sequence[int] = (1, 2), Ks: Sequence[int] = DEVIATION_KS,
                    tau: float = 256.0) -> List[list]:
    return [[n, K] + [deviation_from_limit(n, tau, c, K) for _, c in COLUMNS] for n in ns for K in Ks]


def table_cumulants(Ks: Sequence[int] = DELAY_KS, tau: float = 1.0) -> List[list]:
    rows = []
    for name, c in COLUMNS:
        for K in list(Ks) + [None]:
            if c is None and K is None:
                continue
            r = cumulants_uniform(tau, K) if c is None else cumulants_logarithmic(tau, c, K)
            rows.append([name, "limit" if K is None else K, r.kappa1, r.kappa2, r.kappa3, r.kappa4,
                         r.M1, r.M2, r.M3, r.M4, r.gamma1, r.gamma2])
    return rows


def table_koenderink(Ks: Sequence[int] = DELAY_KS, tau: float = 1.0) -> List[list]:
    rows = []
    for name, c in COLUMNS[1:]:
        for K in list(Ks) + [None]:
            p = koenderink_map_limit(tau, c) if K is None else koenderink_map_finite_K(tau, c, K)
            rows.append([name, "limit" if K is None else K, p.sigma, p.delta])
    return rows


HEADERS = {
    "T1": ["K"] + COLUMN_NAMES,
    "T2": ["K"] + COLUMN_NAMES,
    "T3": ["tau", "K", "tau^(n/2)"] + COLUMN_NAMES,
    "T4": ["tau", "K", "tau^(n/2)"] + COLUMN_NAMES,
    "T5": ["n", "K"] + COLUMN_NAMES,
    "cumulants": ["dist", "K", "kappa1", "kappa2", "kappa3", "kappa4", "M1", "M2", "M3", "M4",
                  "gamma1", "gamma2"],
    "koenderink": ["dist", "K", "sigma", "delta"],
}


def rows_for(which: str) -> List[list]:
    if which == "T1":
        return table_means()
    if which == "T2":
        return table_tmax()
    if which == "T3":
        return table_alpha(1)
    if which == "T4":
        return table_alpha(2)
    if which == "T5":
        return table_deviation()
    if which == "cumulants":
        return table_cumulants()
    if which == "koenderink":
        return table_koenderink()
    raise KeyError(which)


def _fmt(v):
    if isinstance(v, float):
        return format(v, ".7g")
    return str(v)


def to_csv(which: str) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(HEADERS[which])
    for row in rows_for(which):
        w.writerow([_fmt(v) for v in row])
    return buf.getvalue()
