"""Closed-form attack-cost models and regeneration of the published cost tables.

All arithmetic is in the log2 domain (values up to 2^900 appear).  The
building blocks are the standard heuristics: sieving 2^(0.292n) time /
2^(0.208n) memory, batch closest-vector solving at 2^(0.234n) per target
once the batch exceeds 2^(0.058n), and the enumeration cost

    2^(0.292n) + n * sum_i Vol(B(i, R_i)) / (delta^(i(n-i)) Vol^(i/n)),

with delta = (n / 2 pi e)^(-1/(2n-2)) and R_i = R sqrt(i/n) under linear
pruning (R_i = R without).  o(n) terms are dropped throughout, matching the
published numbers; estimates note this.

Correction policies for totals:

* table3: +1.3 bits, calibrated (not derived) against the published
  hybrid batch-CVP totals, which state a 90% success adaptation without the
  exact multiplier.
* table6: +6 bits (three factor-4 repetitions: truncation retries,
  randomization of the median, pruning passes) for list-regime rows; rows
  whose ball count drops below one vector degenerate to a unique-target
  instance solved by sieving alone, where the pruning repetition does not
  apply: sieve cost and +4 bits.  The published totals match only under
  this split.
"""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass
from math import comb, log2
from typing import Optional

from .errors import BadZPrime, InvalidParameters
from .lattice import gh_count_log2, gsa_delta, log2_ball_volume
from .reductions import affine_diameter, mean_center, set_variance
from .ressd import RestrictionSet, cross_restriction

NEG_INF = float("-inf")


def _log2_sum(values) -> float:
    values = [v for v in values if v != NEG_INF]
    if not values:
        return NEG_INF
    m = max(values)
    return m + log2(sum(2.0 ** (v - m) for v in values))


@dataclass(frozen=True)
class CostModelConfig:
    sieve_time_coeff: float = 0.292
    sieve_mem_coeff: float = 0.208
    batch_time_coeff: float = 0.234
    batch_min_coeff: float = 0.058
    correction_policy: Optional[str] = None  # None | "table3" | "table6"

    def __post_init__(self):
        if self.correction_policy not in (None, "none", "table3", "table6"):
            raise InvalidParameters(f"unknown correction policy {self.correction_policy!r}")
        defaults = (0.292, 0.208, 0.234, 0.058)
        actual = (self.sieve_time_coeff, self.sieve_mem_coeff,
                  self.batch_time_coeff, self.batch_min_coeff)
        object.__setattr__(self, "_overridden", actual != defaults)


TABLE3_CORRECTION = 1.3
TABLE6_LIST_CORRECTION = 6.0
TABLE6_CVP_CORRECTION = 4.0


@dataclass
class AttackEstimate:
    attack: str
    params: dict
    log2_time: float
    log2_memory: float
    log2_success: float
    breakdown: dict
    notes: tuple = ()

    def to_dict(self) -> dict:
        return {
            "attack": self.attack,
            "params": self.params,
            "log2_time": self.log2_time,
            "log2_memory": self.log2_memory,
            "log2_success": self.log2_success,
            "breakdown": self.breakdown,
            "notes": list(self.notes),
        }


# ----------------------------------------------------------------------
# basic attacks


def naive_cost(n: int, k: int, z: int) -> AttackEstimate:
    """Memoryless enumeration of z^k free-coordinate guesses: k log2 z + 2 log2 n."""
    t = k * log2(z) + 2 * log2(n) if z > 1 and k > 0 else 2 * log2(n)
    return AttackEstimate(
        "naive-enumeration",
        {"n": n, "k": k, "z": z},
        t, 0.0, 0.0,
        {"guesses": k * log2(z) if z > 1 else 0.0, "per_guess": 2 * log2(n)},
        notes=("polynomial memory",
               "published summary quotes 2^220 at (127,76); constant-factor convention differs"),
    )


def prange_success_log2(n: int, k: int, z: int) -> float:
    """log2 of the per-iteration success probability 2^-k (2/z)^n."""
    if z < 2:
        raise InvalidParameters("need z >= 2")
    return -k + n * log2(2.0 / z)


def prange_cost(n: int, k: int, z: int, iteration_cost_log2: float = 0.0) -> AttackEstimate:
    """Permutation-based ISD: inverse of the per-iteration success rate.

    The published table's column exceeds this by ~20 bits via an unstated
    per-iteration polynomial model; pass iteration_cost_log2 to add one."""
    succ = prange_success_log2(n, k, z)
    return AttackEstimate(
        "regsd-prange",
        {"n": n, "k": k, "z": z, "iteration_cost_log2": iteration_cost_log2},
        -succ + iteration_cost_log2, 0.0, succ,
        {"iterations": -succ, "per_iteration": iteration_cost_log2},
        notes=("per-iteration cost model unstated in the published column; not golden-checked",),
    )


# ----------------------------------------------------------------------
# enumeration-based ISD on the expanded instance


def enum_isd_cost(n: int, k: int, q: int, z: int, w_enum: int, ell: int) -> AttackEstimate:
    """Meet-in-the-middle ISD cost: time T0/(P0 P), memory |L1|.

    Halves split ceil/floor (odd n or w): |L1| = C(ceil(n/2), ceil(w/2)) (z-2)^ceil(w/2).
    Returns log2_time = +inf when the permutation success probability is 0.
    """
    if z < 3:
        raise InvalidParameters("enumeration ISD needs z >= 3 (nonempty third section)")
    if not (0 <= w_enum <= n):
        raise InvalidParameters(f"w_enum={w_enum} outside [0, {n}]")
    if not (1 <= ell <= n - k):
        raise InvalidParameters(f"ell={ell} outside [1, n-k={n - k}]")
    nh, nl = (n + 1) // 2, n // 2
    wh, wl = (w_enum + 1) // 2, w_enum // 2
    if wh > nh or wl > nl:
        raise InvalidParameters("w_enum exceeds the number of blocks")
    l1 = log2(comb(nh, wh)) + wh * log2(z - 2)
    l2 = log2(comb(nl, wl)) + wl * log2(z - 2)
    lmerge = l1 + l2 - ell * log2(q)
    t0 = log2(n) + max(l1, l2, lmerge)
    p0 = (log2(comb(nh, wh)) + log2(comb(nl, wl))
          + w_enum * log2((z - 2) / z) + (n - w_enum) * log2(2.0 / z))
    if k + ell >= nh:
        p2 = -(nl - wl)
        a = k + ell - nh
        b = n - k - ell
        terms = [log2(comb(a, i)) + log2(comb(b, nh - wh - i)) - log2(comb(nh, wh)) - i
                 for i in range(a + 1) if 0 <= nh - wh - i <= b]
        p1 = _log2_sum(terms)
    else:
        p2 = 0.0
        b = nh - k - ell
        terms = [log2(comb(k + ell, i)) + log2(comb(b, nh - wh - i)) - log2(comb(nh, wh)) - i
                 for i in range(k + ell + 1) if 0 <= nh - wh - i <= b]
        p1 = _log2_sum(terms)
    success = p0 + p1 + p2
    time = math.inf if success == NEG_INF else t0 - success
    return AttackEstimate(
        "regsd-enum-isd",
        {"n": n, "k": k, "q": q, "z": z, "w_enum": w_enum, "ell": ell},
        time, l1, success,
        {"list1": l1, "list2": l2, "merged": lmerge, "per_iteration": t0,
         "perm_weight_prob": p0, "perm_zero_prob": p1 + p2},
    )


def optimize_enum_isd(n: int, k: int, q: int, z: int) -> AttackEstimate:
    """Grid search over w_enum in [0, n], ell in [1, n-k] (unit resolution)."""
    best = None
    for w in range(0, n + 1):
        for ell in range(1, n - k + 1):
            try:
                est = enum_isd_cost(n, k, q, z, w, ell)
            except InvalidParameters:
                continue
            if est.log2_time == math.inf:
                continue
            if best is None or est.log2_time < best.log2_time:
                best = est
    if best is None:
        raise InvalidParameters("no feasible (w_enum, ell) point")
    best.params["grid_resolution"] = 1
    return best


# ----------------------------------------------------------------------
# hybrid batch-CVP over the expanded lattice


def hybrid_batchcvp_estimate(n: int, k: int, p: int, z: int, z_prime: int,
                             cfg: CostModelConfig = CostModelConfig(correction_policy="table3")
                             ) -> AttackEstimate:
    """Truncate to z', guess g blocks, solve the z'(n-g)-dimensional batch.

    g = ceil(0.058 z' n log_{z'} 2); batch time 0.234 dim + g log2 z';
    total = batch - truncation_prob (+ policy correction)."""
    if not (1 <= z_prime <= z):
        raise BadZPrime(f"z'={z_prime} outside [1, {z}]")
    trunc = n * log2(z_prime / z)
    if z_prime == 1:
        g = 0  # single-candidate blocks carry no guessing information
        guesses = 0.0
    else:
        g = math.ceil(cfg.batch_min_coeff * z_prime * n * math.log(2) / math.log(z_prime))
        guesses = g * log2(z_prime)
    dim = z_prime * (n - g)
    batch = cfg.batch_time_coeff * dim + guesses
    memory = cfg.sieve_mem_coeff * dim
    correction = TABLE3_CORRECTION if cfg.correction_policy == "table3" else 0.0
    total = batch - trunc + correction
    notes = ["o(n) terms dropped, per the published convention"]
    if cfg.correction_policy == "table3":
        notes.append("table3 correction +1.3 bits is calibrated to the published totals, not derived")
    if getattr(cfg, "_overridden", False):
        notes.append("cost-model coefficients overridden from their published values")
    return AttackEstimate(
        "hybrid-batch-cvp",
        {"n": n, "k": k, "p": p, "z": z, "z_prime": z_prime, "g": g},
        total, memory, trunc,
        {"trunc_prob": trunc, "guesses": guesses, "batch": batch,
         "dim": float(dim), "correction": correction},
        notes=tuple(notes),
    )


# ----------------------------------------------------------------------
# list-enumeration cost (heuristic) and the hybrid compact attack


def enum_term_log2(n: int, R: float, log2_volume: float, pruning: bool = True) -> float:
    """log2 of n * sum_i Vol(B(i, R_i)) / (delta^(i(n-i)) Vol^(i/n)).

    This is the enumeration term alone (the published tables' enumeration
    column); R = 0 reports 0.0 (a single trivial visit), matching those
    tables' 2^0 entries."""
    if R < 0:
        raise InvalidParameters("R must be nonnegative")
    if R == 0:
        return 0.0
    delta = gsa_delta(n)
    ld = log2(delta)
    terms = []
    for i in range(1, n + 1):
        ri = R * math.sqrt(i / n) if pruning else R
        terms.append(log2_ball_volume(i, ri) - i * (n - i) * ld - (i / n) * log2_volume)
    return log2(n) + _log2_sum(terms)


def listcvp_enum_cost(n: int, R: float, volume=None, log2_volume: Optional[float] = None,
                      pruning: bool = True, include_sieve: bool = True,
                      cfg: CostModelConfig = CostModelConfig()) -> float:
    """Full heuristic list-enumeration cost, log2 of

        2^(0.292 n) + n * sum_i Vol(B(i, R_i)) / (delta^(i(n-i)) Vol^(i/n)).

    `pruning` selects R_i = R sqrt(i/n) (the tables' setting) or R_i = R (the
    no-pruning estimate quoted for the downscaled experiment);
    include_sieve=False returns the bare enumeration term."""
    if log2_volume is None:
        if volume is None:
            raise InvalidParameters("pass volume or log2_volume")
        from .lattice import log2_int

        log2_volume = log2_int(volume) if isinstance(volume, int) else log2(volume)
    term = enum_term_log2(n, R, log2_volume, pruning)
    if not include_sieve:
        return term
    if R == 0:
        term = NEG_INF  # the sum vanishes; only the sieve floor remains
    return _log2_sum([cfg.sieve_time_coeff * n, term])


def hybrid_listcvp_estimate(n: int, k: int, p: int, E, z_prime: int,
                            cfg: CostModelConfig = CostModelConfig(correction_policy="table6")
                            ) -> AttackEstimate:
    """Truncate to the first z' powers, embed with the mean center and the
    heuristic median radius, then list-enumerate (or sieve, in the
    degenerate unique-target regime)."""
    if isinstance(E, (list, tuple)):
        E = RestrictionSet(cross_restriction(p, 1).field, tuple(E))
    if not (1 <= z_prime <= E.z):
        raise BadZPrime(f"z'={z_prime} outside [1, {E.z}]")
    Ep = E.truncate(z_prime)
    trunc = n * log2(z_prime / E.z)
    mu = mean_center(Ep)
    var = set_variance(Ep)
    R = math.sqrt(float(n * var))
    lvol = (n - k) * log2(p)
    gh = gh_count_log2(n, R, lvol) if R > 0 else NEG_INF
    sieve = cfg.sieve_time_coeff * n
    enum_cost = enum_term_log2(n, R, lvol, pruning=True)
    memory = cfg.sieve_mem_coeff * n
    degenerate = gh < 0.0
    if cfg.correction_policy == "table6":
        correction = TABLE6_CVP_CORRECTION if degenerate else TABLE6_LIST_CORRECTION
    else:
        correction = 0.0
    if degenerate:
        solve = sieve  # unique-target instance: sieving solves it outright
    else:
        solve = _log2_sum([sieve, enum_cost])
    total = -trunc + solve + correction
    notes = ["o(n) terms dropped, per the published convention"]
    if cfg.correction_policy == "table6":
        notes.append(
            "+6 bits (4x truncation retries, 4x randomized medians, 4x pruning passes) in the "
            "list regime; +4 bits and sieve-only solving when the ball count drops below one "
            "vector (unique-target regime, no pruning repetition)")
    if getattr(cfg, "_overridden", False):
        notes.append("cost-model coefficients overridden from their published values")
    return AttackEstimate(
        "hybrid-list-cvp",
        {"n": n, "k": k, "p": p, "z": E.z, "z_prime": z_prime,
         "mu": float(mu), "R": R},
        total, memory, trunc,
        {"trunc_prob": trunc, "gh_count": gh, "sieve": sieve,
         "enum": enum_cost, "correction": correction,
         "regime": 0.0 if degenerate else 1.0},
        notes=tuple(notes),
    )


# ----------------------------------------------------------------------
# table regeneration

CROSS_P = 127
CROSS_Z = 7
CROSS_TRIPLES = ((127, 76), (187, 111), (251, 150))
CROSS_SECURITY = {127: 128, 187: 192, 251: 256}


@dataclass
class TableArtifact:
    table: int
    header: list
    rows: list  # list of dicts keyed by header; numeric cells stay unrounded

    def to_csv(self, decimals: int = 1) -> str:
        buf = io.StringIO()
        w = csv.DictWriter(buf, fieldnames=self.header)
        w.writeheader()
        for row in self.rows:
            w.writerow({k: _fmt(row.get(k, ""), decimals) for k in self.header})
        return buf.getvalue()


def _fmt(x, nd=1):
    if isinstance(x, float):
        if x == NEG_INF:
            return "-inf"
        return f"{x:.{nd}f}"
    return x


def regenerate_table(which: int, diameter_samples: int = 0,
                     sample_seed: int = 1) -> TableArtifact:
    """Regenerate a published cost table as a CSV-ready artifact.

    Table 4's Avg/Max cells for z >= 4 are only emitted when
    diameter_samples > 0 (sampling protocol with a confidence band); the
    exhaustive cells (CROSS, Min, and the full z=3 row) are always present.
    """
    if which == 2:
        header = ["security", "n", "k", "perm_log2", "enum_log2", "mem_log2", "w", "ell"]
        rows = []
        for n, k in CROSS_TRIPLES:
            best = optimize_enum_isd(n, k, CROSS_P, CROSS_Z)
            rows.append({
                "security": CROSS_SECURITY[n], "n": n, "k": k,
                "perm_log2": -prange_success_log2(n, k, CROSS_Z),
                "enum_log2": best.log2_time,
                "mem_log2": best.log2_memory,
                "w": best.params["w_enum"], "ell": best.params["ell"],
            })
        return TableArtifact(2, header, rows)
    if which == 3:
        header = ["n", "k", "z_prime", "trunc_log2", "g", "guesses_log2",
                  "batch_log2", "total_log2", "mem_log2"]
        rows = []
        cfg = CostModelConfig(correction_policy="table3")
        for n, k in CROSS_TRIPLES:
            for zp in range(CROSS_Z, 1, -1):
                est = hybrid_batchcvp_estimate(n, k, CROSS_P, CROSS_Z, zp, cfg)
                rows.append({
                    "n": n, "k": k, "z_prime": zp,
                    "trunc_log2": est.breakdown["trunc_prob"],
                    "g": est.params["g"],
                    "guesses_log2": est.breakdown["guesses"],
                    "batch_log2": est.breakdown["batch"],
                    "total_log2": est.log2_time,
                    "mem_log2": est.log2_memory,
                })
        return TableArtifact(3, header, rows)
    if which == 4:
        return _regenerate_table4(diameter_samples, sample_seed)
    if which == 6:
        header = ["n", "k", "z_prime", "trunc_log2", "gh_log2", "sieve_log2",
                  "enum_log2", "total_log2", "mem_log2"]
        rows = []
        cfg = CostModelConfig(correction_policy="table6")
        E = cross_restriction(CROSS_P, CROSS_Z)
        for n, k in ((35, 21),) + CROSS_TRIPLES:
            for zp in range(CROSS_Z, 0, -1):
                est = hybrid_listcvp_estimate(n, k, CROSS_P, E, zp, cfg)
                rows.append({
                    "n": n, "k": k, "z_prime": zp,
                    "trunc_log2": est.breakdown["trunc_prob"],
                    "gh_log2": est.breakdown["gh_count"],
                    "sieve_log2": est.breakdown["sieve"],
                    "enum_log2": est.breakdown["enum"],
                    "total_log2": est.log2_time,
                    "mem_log2": est.log2_memory,
                })
        return TableArtifact(6, header, rows)
    raise InvalidParameters(f"no such table: {which} (supported: 2, 3, 4, 6)")


def _canonical_witness(shifted: tuple) -> tuple:
    """Prefer the lexicographically smaller of a shifted set and its mirror
    (x -> D - x); both attain the same diameter."""
    d = shifted[-1]
    mirror = tuple(sorted(d - x for x in shifted))
    return min(shifted, mirror)


def sampled_diameter_stats(p: int, z: int, samples: int, seed: int) -> dict:
    """Sampling protocol for Avg/Max diameters over random size-z subsets."""
    import numpy as np

    from .rng import make_rng

    rng = make_rng(seed, stream=6)
    total = 0.0
    best = 0
    best_set = None
    for _ in range(samples):
        subset = rng.choice(p, size=z, replace=False)
        d = affine_diameter([int(x) for x in subset], p)
        total += d.D_E
        if d.D_E > best:
            best, best_set = d.D_E, _canonical_witness(d.shifted_set)
    return {"avg": total / samples, "max": best, "max_example": best_set,
            "samples": samples}


def _regenerate_table4(diameter_samples: int, sample_seed: int) -> TableArtifact:
    header = ["z", "cross", "min", "avg", "max", "max_example", "protocol"]
    E = cross_restriction(CROSS_P, CROSS_Z)
    rows = []
    for z in range(2, 8):
        row = {"z": z, "cross": affine_diameter(E.truncate(z)).D_E, "min": z - 1,
               "avg": "", "max": "", "max_example": "", "protocol": ""}
        if z == 3:
            # exhaustive over the orbit parameterization {0, 1, a}
            total = 0
            best, best_set = 0, None
            for a in range(2, CROSS_P):
                d = affine_diameter([0, 1, a], CROSS_P)
                total += d.D_E
                if d.D_E > best:
                    best, best_set = d.D_E, _canonical_witness(d.shifted_set)
            row["avg"] = f"{total / (CROSS_P - 2):.2f}"
            row["max"] = best
            row["max_example"] = "{" + ",".join(str(x) for x in best_set) + "}"
            row["protocol"] = "exhaustive"
        elif diameter_samples > 0:
            stats = sampled_diameter_stats(CROSS_P, z, diameter_samples, sample_seed)
            row["avg"] = f"{stats['avg']:.2f}"
            row["max"] = stats["max"]
            row["max_example"] = "{" + ",".join(str(x) for x in stats["max_example"]) + "}"
            row["protocol"] = f"sampled({diameter_samples})"
        rows.append(row)
    if diameter_samples > 0:
        for z in range(8, 11):
            stats = sampled_diameter_stats(CROSS_P, z, diameter_samples, sample_seed)
            rows.append({"z": z, "cross": "", "min": z - 1,
                         "avg": f"{stats['avg']:.2f}", "max": stats["max"],
                         "max_example": "{" + ",".join(str(x) for x in stats["max_example"]) + "}",
                         "protocol": f"sampled({diameter_samples})"})
    return TableArtifact(4, header, rows)


# ----------------------------------------------------------------------
# golden comparison


def _load_golden(table: int) -> list:
    from importlib.resources import files

    text = files("rsdkit.data").joinpath(f"table{table}_golden.csv").read_text()
    return list(csv.DictReader(io.StringIO(text)))


@dataclass
class CellDiff:
    row: dict
    column: str
    expected: float
    actual: float
    tolerance: float

    @property
    def ok(self) -> bool:
        return abs(self.expected - self.actual) <= self.tolerance

    def __repr__(self):
        mark = "ok" if self.ok else "FAIL"
        return (f"[{mark}] {self.column}={self.actual} vs {self.expected} "
                f"(tol {self.tolerance}) at {self.row}")


# per-table column tolerances (bits unless the column is integral)
GOLDEN_TOLERANCES = {
    2: {"enum_log2": 3.0, "mem_log2": 2.0, "w": 2.0, "ell": 2.0},
    3: {"trunc_log2": 0.1, "g": 0.0, "guesses_log2": 0.1, "batch_log2": 0.1,
        "total_log2": 0.5, "mem_log2": 0.1},
    4: {"cross": 0.0, "min": 0.0},
    6: {"trunc_log2": 0.2, "gh_log2": 0.2, "sieve_log2": 0.2, "enum_log2": 0.2,
        "total_log2": 0.2, "mem_log2": 0.2},
}


def golden_diff(which: int, artifact: Optional[TableArtifact] = None) -> list:
    """Cell-by-cell comparison against the stored golden values."""
    if artifact is None:
        artifact = regenerate_table(which)
    golden = _load_golden(which)
    tols = GOLDEN_TOLERANCES[which]
    key_cols = [c for c in ("security", "n", "k", "z", "z_prime") if c in golden[0]]
    actual_by_key = {tuple(str(r[c]) for c in key_cols): r for r in artifact.rows}
    diffs = []
    for grow in golden:
        key = tuple(str(grow[c]) for c in key_cols)
        arow = actual_by_key.get(key)
        assert arow is not None, f"regenerated table missing row {key}"
        for col, tol in tols.items():
            if col not in grow or grow[col] in ("", None):
                continue
            expected = float(grow[col])
            raw = arow[col]
            actual = float(raw) if raw not in ("", "-inf") else NEG_INF
            if grow[col] == "-inf":
                expected = NEG_INF
                diffs.append(CellDiff(dict(zip(key_cols, key)), col, 0.0,
                                      0.0 if actual == NEG_INF else 1.0, tol))
                continue
            diffs.append(CellDiff(dict(zip(key_cols, key)), col, expected, actual, tol))
    return diffs
