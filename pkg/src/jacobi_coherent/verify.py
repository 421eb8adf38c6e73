"""Verification suites: every identity of the construction as a residual check."""
from __future__ import annotations

import datetime as _dt
import hashlib
import json
import math
import warnings
from dataclasses import asdict, dataclass, field, fields
from fractions import Fraction
from typing import Callable, Dict, List, Optional

import numpy as np

from . import algebra, group, kernel, measure, special, states
from .algebra import BivarPoly, Generator

SCHEMA_VERSION = "1"
SUITES = ("algebra", "special", "kernel", "measure", "group", "states")


class ConfigError(ValueError):
    def __init__(self, problems: Dict[str, str]):
        self.problems = problems
        super().__init__("; ".join(f"{k}: {v}" for k, v in problems.items()))


# Exact checks carry tolerance 0 and cannot be overridden.
EXACT_CHECKS = ("algebra.commutator", "algebra.linearity", "algebra.lowest_weight",
                "algebra.matrix_adjoint", "algebra.matrix_lowest_weight")

DEFAULT_TOLERANCES: Dict[str, float] = {
    "algebra.truncated_ccr": 1e-12,
    "algebra.casimir": 1e-10,
    "algebra.ladder_normalization": 1e-12,
    "special.recurrence_vs_sum": 1e-10,
    "special.hermite_relation": 1e-10,
    "special.hermite_branch": 1e-12,
    "special.homogeneity": 1e-10,
    "special.special_lines": 1e-12,
    "special.generating_tail": 1e-10,
    "special.mehler": 1e-10,
    "special.binomial": 1e-10,
    "kernel.hermitian": 1e-13,
    "kernel.reduction": 1e-13,
    "kernel.diagonal": 1e-13,
    "kernel.series": 1e-8,
    "kernel.series_monotone": 1e-15,
    "kernel.gram_psd": 1e-8,
    "kernel.transform": 1e-9,
    "measure.pde": 1e-10,
    "measure.partials_fd": 1e-6,
    "measure.limits": 1e-14,
    "measure.normalization": 1e-12,
    "measure.orthonormality": 1e-8,
    "measure.n_factorial": 1e-8,
    "measure.integral_vs_series": 1e-8,
    "measure.adjoint": 1e-9,
    "measure.conjugate_symmetry": 1e-12,
    "measure.grid_convergence": 1e-12,
    "measure.series_formula": 1e-12,
    "group.identity": 1e-10,
    "group.inverse": 1e-10,
    "group.associativity": 1e-10,
    "group.orientation": 1e-10,
    "group.disk": 1e-15,
    "group.cocycle": 1e-9,
    "group.cocycle_hw": 1e-12,
    "group.modulus": 1e-9,
    "group.branch": 1e-12,
    "states.lowest_weight": 1e-14,
    "states.disentangling": 1e-8,
    "states.displacement_inverse": 1e-10,
    "states.displacement_composition": 1e-9,
    "states.displacement_expm": 1e-9,
    "states.coherent_two_ways": 1e-10,
    "states.norm": 1e-8,
    "states.squeeze_coherent": 1e-6,
    "states.squeeze_coherent_monotone": 1e-14,
    "states.overlap_kernel": 1e-7,
}


@dataclass
class SuiteConfig:
    k: float = 1.0
    N: int = 60
    M: int = 60
    n_z: int = 12
    n_r: int = 24
    n_theta: int = 24
    seed: int = 42
    samples: int = 100
    tolerances: Dict[str, float] = field(default_factory=dict)
    output: Optional[str] = None

    @classmethod
    def from_mapping(cls, data: Optional[dict]) -> "SuiteConfig":
        data = dict(data or {})
        problems: Dict[str, str] = {}
        known = {f.name: f for f in fields(cls)}
        values = {}
        for key, value in data.items():
            if key not in known:
                problems[key] = "unknown field"
                continue
            values[key] = value
        for key in ("N", "M", "n_z", "n_r", "n_theta", "seed", "samples"):
            if key in values:
                v = values[key]
                if isinstance(v, bool) or not isinstance(v, int):
                    problems[key] = f"expected integer, got {v!r}"
                elif key != "seed" and v < 1:
                    problems[key] = "must be >= 1"
        if "N" in values and isinstance(values["N"], int) and values["N"] < 2:
            problems["N"] = "must be >= 2"
        if "M" in values and isinstance(values["M"], int) and values["M"] < 2:
            problems["M"] = "must be >= 2"
        if "k" in values:
            v = values["k"]
            if isinstance(v, bool) or not isinstance(v, (int, float)) or not math.isfinite(v) or v <= 0:
                problems["k"] = f"expected real k > 0, got {v!r}"
            else:
                values["k"] = float(v)
        if "output" in values and values["output"] is not None and not isinstance(values["output"], str):
            problems["output"] = "expected a path string"
        tols = values.get("tolerances", {})
        if not isinstance(tols, dict):
            problems["tolerances"] = "expected a mapping of check id to tolerance"
        else:
            for name, tol in tols.items():
                where = f"tolerances.{name}"
                if name.startswith(EXACT_CHECKS):
                    problems[where] = "exact check; tolerance is fixed at 0"
                elif name not in DEFAULT_TOLERANCES:
                    problems[where] = "unknown check id"
                elif isinstance(tol, bool) or not isinstance(tol, (int, float)) or not tol > 0:
                    problems[where] = f"tolerance must be > 0, got {tol!r}"
        if problems:
            raise ConfigError(problems)
        return cls(**values)

    def tol(self, check: str) -> float:
        if check.startswith(EXACT_CHECKS):
            return 0.0
        return float(self.tolerances.get(check, DEFAULT_TOLERANCES[check]))


def _jsonable(value):
    if isinstance(value, (complex, np.complexfloating)):
        return [float(np.real(value)), float(np.imag(value))]
    if isinstance(value, (np.floating, np.integer)):
        return value.item()
    if isinstance(value, Fraction):
        return float(value)
    if isinstance(value, special.PhasePoint):
        return {"z": _jsonable(value.z), "w": _jsonable(value.w)}
    if isinstance(value, group.JacobiElement):
        return {"a": _jsonable(value.g.a), "b": _jsonable(value.g.b),
                "alpha": _jsonable(value.alpha), "t": value.t}
    if isinstance(value, dict):
        return {str(k): _jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_jsonable(v) for v in value]
    return value


@dataclass
class CheckRecord:
    check_id: str
    anchor: str
    residual: Optional[float]
    tolerance: float
    status: str
    inputs: dict = field(default_factory=dict)
    note: str = ""

    @property
    def passed(self) -> bool:
        return self.status != "fail"

    def to_dict(self) -> dict:
        inputs = _jsonable(self.inputs)
        digest = hashlib.sha256(json.dumps(inputs, sort_keys=True).encode()).hexdigest()[:16]
        out = {
            "check_id": self.check_id,
            "anchor": self.anchor,
            "status": self.status,
            "residual": self.residual,
            "tolerance": self.tolerance,
            "inputs_digest": digest,
            "inputs": inputs,
        }
        if self.note:
            out["note"] = self.note
        return out


@dataclass
class Report:
    suite: str
    config: SuiteConfig
    records: List[CheckRecord]

    @property
    def failed(self) -> List[CheckRecord]:
        return [r for r in self.records if r.status == "fail"]

    @property
    def all_passed(self) -> bool:
        return not self.failed

    def summary(self) -> dict:
        counts = {"total": len(self.records), "pass": 0, "fail": 0, "skip": 0}
        for r in self.records:
            counts[r.status] += 1
        return counts

    def to_dict(self, timestamp: bool = True) -> dict:
        out = {
            "schema_version": SCHEMA_VERSION,
            "suite": self.suite,
            "config": _jsonable(asdict(self.config)),
            "summary": self.summary(),
            "records": [r.to_dict() for r in sorted(self.records, key=lambda r: r.check_id)],
        }
        if timestamp:
            out["generated_at"] = _dt.datetime.now(_dt.timezone.utc).isoformat()
        return out

    def to_json(self, timestamp: bool = True) -> str:
        return json.dumps(self.to_dict(timestamp), indent=2, sort_keys=True)

    def human_summary(self) -> str:
        lines = []
        for r in sorted(self.records, key=lambda r: r.check_id):
            res = "-" if r.residual is None else f"{r.residual:.3e}"
            lines.append(f"{r.status.upper():4s} {r.check_id:60s} residual={res} tol={r.tolerance:.1e}"
                         + (f"  ({r.note})" if r.note else ""))
        s = self.summary()
        lines.append(f"{self.suite}: {s['pass']} passed, {s['fail']} failed, {s['skip']} skipped")
        return "\n".join(lines)


class _Recorder:
    def __init__(self, cfg: SuiteConfig):
        self.cfg = cfg
        self.records: List[CheckRecord] = []

    def check(self, check_id: str, family: str, anchor: str, residual: float,
              inputs: Optional[dict] = None, note: str = "") -> None:
        tol = self.cfg.tol(family)
        residual = float(residual)
        ok = residual <= tol if tol > 0 else residual == 0
        self.records.append(CheckRecord(check_id, anchor, residual, tol, "pass" if ok else "fail",
                                        inputs or {}, note))

    def worst(self, check_id: str, family: str, anchor: str,
              samples: List[tuple], note: str = "") -> None:
        """``samples`` is a list of (residual, inputs); records the worst one."""
        res, inputs = max(samples, key=lambda s: s[0])
        self.check(check_id, family, anchor, res, inputs, note)

    def skip(self, check_id: str, family: str, anchor: str, note: str) -> None:
        self.records.append(CheckRecord(check_id, anchor, None, self.cfg.tol(family), "skip", {}, note))


# ---------------------------------------------------------------------------
# algebra


def _ladder_from_normalization(kp: float, M: int) -> np.ndarray:
    """K'+ matrix from normalizing (K'+)^m phi_0, using only K'- phi_0 = 0 and the commutators."""
    # K'- (K'+)^m phi_0 = m (2k' + m - 1) (K'+)^{m-1} phi_0, hence
    # ||(K'+)^m phi_0||^2 = m (2k'+m-1) ||(K'+)^{m-1} phi_0||^2
    norms = [1.0]
    for m in range(1, M):
        norms.append(norms[-1] * m * (2 * kp + m - 1))
    mat = np.zeros((M, M))
    for m in range(M - 1):
        # K'+ phi_m = (||K+^{m+1}|| / ||K+^m||) phi_{m+1}
        mat[m + 1, m] = math.sqrt(norms[m + 1] / norms[m])
    return mat


def _suite_algebra(rec: _Recorder, rng: np.random.Generator) -> None:
    cfg = rec.cfg
    anchor = "commutation relations of the Jacobi algebra (differential realization)"
    for k in sorted({cfg.k, 0.3, 1.0, 2.75}):
        for name, value in algebra.commutation_residuals(k, 8).items():
            rec.check(f"algebra.commutator[{name}]@k={k:g}", "algebra.commutator", anchor, value,
                      {"k": k, "max_degree": 8})

    worst = []
    kk = Fraction(cfg.k)

    def rand_frac():
        return Fraction(int(rng.integers(-9, 10)), int(rng.integers(1, 5)))

    for trial in range(20):
        p = BivarPoly({(int(rng.integers(0, 5)), int(rng.integers(0, 5))): rand_frac() for _ in range(4)})
        q = BivarPoly({(int(rng.integers(0, 5)), int(rng.integers(0, 5))): rand_frac() for _ in range(4)})
        al, be = rand_frac(), rand_frac()
        for gen in Generator:
            lhs = algebra.apply_generator(gen, kk, p * al + q * be)
            rhs = algebra.apply_generator(gen, kk, p) * al + algebra.apply_generator(gen, kk, q) * be
            worst.append((float((lhs - rhs).max_abs_coeff()), {"trial": trial, "generator": gen.value}))
    rec.worst("algebra.linearity", "algebra.linearity",
              "linearity of the differential realization", worst,
              note="rational coefficients; the operators have real coefficients")

    one = BivarPoly.constant(Fraction(1))
    lw = max(
        algebra.apply_generator(Generator.A, kk, one).max_abs_coeff(),
        algebra.apply_generator(Generator.KMINUS, kk, one).max_abs_coeff(),
        (algebra.apply_generator(Generator.KZERO, kk, one) - one * kk).max_abs_coeff(),
    )
    rec.check("algebra.lowest_weight", "algebra.lowest_weight",
              "lowest-weight conditions a e0 = K- e0 = 0, K0 e0 = k e0", float(lw), {"k": cfg.k})

    a_anchor = "truncated matrix realization on Fock (x) D+_{k'}"
    if cfg.k <= 0.25:
        for fam in ("algebra.matrix_adjoint", "algebra.matrix_lowest_weight", "algebra.truncated_ccr",
                    "algebra.casimir", "algebra.ladder_normalization"):
            rec.skip(fam, fam, a_anchor, "k <= 1/4: ladder factor D+_{k'} undefined")
        return
    N, M = 6, 7
    ops = algebra.fock_operator_matrices(cfg.k, N, M)
    adj = max(np.abs(ops.adag - ops.a.conj().T).max(),
              np.abs(ops.kminus - ops.kplus.conj().T).max(),
              np.abs(ops.kzero - np.diag(np.diag(ops.kzero).real)).max())
    rec.check("algebra.matrix_adjoint", "algebra.matrix_adjoint",
              "a+ = a^H, K- = K+^H, K0 real diagonal", float(adj), {"k": cfg.k, "N": N, "M": M})
    e0 = np.zeros(N * M, dtype=complex)
    e0[0] = 1
    lwm = max(np.abs(ops.a @ e0).max(), np.abs(ops.kminus @ e0).max(), np.abs(ops.kzero @ e0 - cfg.k * e0).max())
    rec.check("algebra.matrix_lowest_weight", "algebra.matrix_lowest_weight",
              "lowest-weight conditions in the matrix realization", float(lwm), {"k": cfg.k})
    ccr = ops.a @ ops.adag - ops.adag @ ops.a
    expected = np.eye(N * M)
    expected[(N - 1) * M:, (N - 1) * M:] = (1 - N) * np.eye(M)
    rec.check("algebra.truncated_ccr", "algebra.truncated_ccr", "[a, a+] = I up to the Fock cutoff",
              float(np.abs(ccr - expected).max()), {"N": N, "M": M})
    kp = algebra.k_prime(cfg.k)
    lp, lm, l0 = algebra.ladder_matrices(kp, M)
    cas = l0 @ l0 - (lp @ lm + lm @ lp) / 2
    interior = slice(0, M - 1)
    rec.check("algebra.casimir", "algebra.casimir", "Casimir K0^2 - K1^2 - K2^2 = k'(k'-1)",
              float(np.abs(cas[interior, interior] - kp * (kp - 1) * np.eye(M - 1)).max()), {"k": cfg.k, "M": M})
    rec.check("algebra.ladder_normalization", "algebra.ladder_normalization",
              "ladder action forced by the normalized SU(1,1) basis",
              float(np.abs(lp - _ladder_from_normalization(kp, M)).max()), {"k": cfg.k, "M": M})


# ---------------------------------------------------------------------------
# special


def pn_direct(n: int, z, w):
    """Explicit finite sum defining P_n (oracle for the recurrence)."""
    total = 0j
    for p in range(n // 2 + 1):
        total += (w / 2) ** p * z ** (n - 2 * p) / (math.factorial(p) * math.factorial(n - 2 * p))
    return math.factorial(n) * total


def _rand_disk(rng, radius):
    return radius * math.sqrt(rng.uniform()) * np.exp(2j * math.pi * rng.uniform())


def _suite_special(rec: _Recorder, rng: np.random.Generator) -> None:
    cfg = rec.cfg
    samples, herm, branch, homog = [], [], [], []
    for _ in range(max(cfg.samples, 200)):
        z, w = _rand_disk(rng, 2.0), _rand_disk(rng, 0.9)
        n = int(rng.integers(0, 26))
        ref = pn_direct(n, z, w)
        val = special.pn(n, z, w)
        scale = max(abs(ref), 1e-300)
        samples.append((abs(val - ref) / scale, {"n": n, "z": z, "w": w}))
        if w != 0:
            h1 = special.pn_via_hermite(n, z, w)
            h2 = special.pn_via_hermite(n, z, w, root_sign=-1)
            herm.append((abs(h1 - val) / max(abs(val), 1e-300), {"n": n, "z": z, "w": w}))
            branch.append((abs(h1 - h2) / max(abs(h1), 1e-300), {"n": n, "z": z, "w": w}))
        lam = _rand_disk(rng, 1.0)
        lhs = special.pn(n, lam * z, lam ** 2 * w)
        rhs = lam ** n * val
        homog.append((abs(lhs - rhs) / max(abs(rhs), 1e-300), {"n": n, "z": z, "w": w, "lambda": lam}))
    rec.worst("special.recurrence_vs_sum", "special.recurrence_vs_sum",
              "P_n recurrence vs explicit sum", samples)
    rec.worst("special.hermite_relation", "special.hermite_relation",
              "P_n through Hermite polynomials", herm)
    rec.worst("special.hermite_branch", "special.hermite_branch",
              "independence of the square-root branch", branch)
    rec.worst("special.homogeneity", "special.homogeneity",
              "P_n(lz, l^2 w) = l^n P_n(z, w)", homog)

    lines = []
    for n in range(0, 21):
        z, w = _rand_disk(rng, 1.5), _rand_disk(rng, 0.9)
        lines.append((abs(special.pn(n, z, 0) - z ** n) / max(abs(z) ** n, 1e-300), {"n": n, "z": z}))
        if n % 2:
            lines.append((abs(special.pn(n, 0, w)), {"n": n, "w": w}))
        else:
            p = n // 2
            ref = math.factorial(n) * w ** p / (2 ** p * math.factorial(p))
            lines.append((abs(special.pn(n, 0, w) - ref) / max(abs(ref), 1e-300), {"n": n, "w": w}))
    rec.worst("special.special_lines", "special.special_lines",
              "P_n on the lines w = 0 and z = 0", lines)

    tail = []
    for _ in range(50):
        t, z, w = _rand_disk(rng, 1.0), _rand_disk(rng, 1.0), _rand_disk(rng, 0.5)
        tail.append((abs(special.generating_fn(t, z, w) - special.generating_fn_partial(t, z, w, 41)),
                     {"t": t, "z": z, "w": w, "N": 40}))
    rec.worst("special.generating_tail", "special.generating_tail",
              "generating function exp(zt + wt^2/2) = sum t^n P_n / n!", tail)

    mehler = [(special.mehler_residual(0, 0, 0.5, 60), {"x": 0, "y": 0, "s": 0.5, "n_terms": 60}),
              (special.mehler_residual(1, -1, 0.3, 80), {"x": 1, "y": -1, "s": 0.3, "n_terms": 80})]
    for x in np.linspace(-1, 1, 5):
        for y in np.linspace(-1, 1, 5):
            for s in (-0.5, -0.3, 0.0, 0.3, 0.5):
                mehler.append((special.mehler_residual(x, y, s, 80), {"x": x, "y": y, "s": s, "n_terms": 80}))
    rec.worst("special.mehler", "special.mehler", "Mehler formula for Hermite polynomials", mehler)

    binom = []
    for q in (0.5, 1.5, 2.0):
        for j in range(24):
            x = 0.5 * np.exp(2j * math.pi * j / 24) * (1 if j % 2 else 0.6)
            binom.append((special.binomial_series_residual(x, q, 60), {"x": x, "q": q, "M": 60}))
    rec.worst("special.binomial", "special.binomial", "binomial series (1-x)^-q", binom)


# ---------------------------------------------------------------------------
# kernel


def kernel_grid_points(n: int = 5, max_z: float = 1.0, max_w: float = 0.5):
    """Deterministic spiral points covering |z| <= max_z and |w| <= max_w."""
    golden = math.pi * (3 - math.sqrt(5))
    zs = [max_z * (j / (n - 1)) * np.exp(1j * golden * j) for j in range(n)]
    ws = [max_w * (j / (n - 1)) * np.exp(1j * (golden * j + 1.0)) for j in range(n)]
    return zs, ws


def _suite_kernel(rec: _Recorder, rng: np.random.Generator) -> None:
    cfg = rec.cfg
    k = cfg.k
    pts = [group.random_point(rng, 1.0, 0.5) for _ in range(cfg.samples)]
    herm, diag = [], []
    for x, y in zip(pts, pts[1:] + pts[:1]):
        a, b = kernel.kernel(k, x, y), kernel.kernel(k, y, x)
        herm.append((abs(a - np.conj(b)) / abs(a), {"x": x, "x2": y}))
        d = kernel.kernel(k, x, x)
        diag.append((max(abs(d.imag) / abs(d), max(0.0, 1 - d.real)), {"x": x}))
    rec.worst("kernel.hermitian", "kernel.hermitian", "K(x, x') = conj K(x', x)", herm)
    rec.worst("kernel.diagonal", "kernel.diagonal", "K(x, x) real and >= 1", diag)

    red = []
    for x, y in zip(pts, pts[1:] + pts[:1]):
        r1 = abs(kernel.kernel(k, (x.z, 0), (y.z, 0)) - kernel.hw_kernel(x.z, y.z)) / abs(kernel.hw_kernel(x.z, y.z))
        r2 = abs(kernel.kernel(k, (0, x.w), (0, y.w)) - kernel.su11_kernel(k, x.w, y.w))
        red.append((max(r1, r2), {"x": x, "x2": y}))
    rec.worst("kernel.reduction", "kernel.reduction",
              "reduction to the Heisenberg-Weyl and SU(1,1) kernels", red)

    if 2 * k - 0.5 <= 0:
        rec.skip("kernel.series", "kernel.series", "bilinear series expansion of the kernel",
                 "2k - 1/2 <= 0: series coefficients undefined or indefinite")
    else:
        zs, ws = kernel_grid_points()
        series = []
        for z1 in zs:
            for w1 in ws:
                for z2 in zs:
                    for w2 in ws:
                        x, y = special.PhasePoint(z1, w1), special.PhasePoint(z2, w2)
                        exact = kernel.kernel(k, x, y)
                        approx = kernel.kernel_series(k, x, y, 40, 40)
                        series.append((abs(approx - exact) / abs(exact), {"x": x, "x2": y}))
        rec.worst("kernel.series", "kernel.series", "bilinear series expansion of the kernel", series,
                  note="N = S = 40 on a 5x5x5x5 grid, |z| <= 1, |w| <= 0.5")
        mono = []
        x = pts[0]
        prev = 0.0
        for n in (1, 2, 4, 8, 16, 32):
            val = kernel.kernel_series(k, x, x, n, n).real
            mono.append((max(0.0, prev - val), {"x": x, "N": n}))
            prev = val
        rec.worst("kernel.series_monotone", "kernel.series_monotone",
                  "partial sums of |f_nkm|^2 nondecreasing", mono)

    gram = []
    for trial in range(5):
        sample = [group.random_point(rng, 1.0, 0.5) for _ in range(10)]
        lam = kernel.gram_min_eigenvalue(k, sample)
        gram.append((max(0.0, -lam), {"trial": trial, "min_eigenvalue": lam}))
    rec.worst("kernel.gram_psd", "kernel.gram_psd", "positive semi-definiteness of Gram matrices", gram)

    tr = []
    positive = not float(2 * k).is_integer()
    for _ in range(cfg.samples):
        h = group.random_jacobi(rng, 1.0, 1.0, positive_a=positive)
        x, y = group.random_point(rng, 1.0, 0.5), group.random_point(rng, 1.0, 0.5)
        tr.append((kernel.kernel_transform_residual(k, h, x, y), {"h": h, "x": x, "x2": y}))
    rec.worst("kernel.transform", "kernel.transform",
              "K(h.x, h.x') = J(h,x) K(x,x') conj J(h,x')", tr,
              note="Re(a) > 0 samples for non-integer 2k (principal branch)" if positive else "")


# ---------------------------------------------------------------------------
# measure


def _wirtinger_fd(f: Callable[[complex], float], x0: complex, h: float = 1e-5) -> complex:
    dx = (f(x0 + h) - f(x0 - h)) / (2 * h)
    dy = (f(x0 + 1j * h) - f(x0 - 1j * h)) / (2 * h)
    return 0.5 * (dx - 1j * dy)


def _suite_measure(rec: _Recorder, rng: np.random.Generator) -> None:
    cfg = rec.cfg
    pde_anchor = "adjointness equations for the weight"
    for k in sorted({cfg.k, 0.9, 1.0, 2.0, 3.25}):
        worst = []
        for _ in range(1000):
            z, w = _rand_disk(rng, 1.5), _rand_disk(rng, 0.9)
            rho = measure.weight(k, z, w)
            r = measure.pde_residuals(k, z, w)
            worst.append((max(abs(c) for c in r) / rho, {"k": k, "z": z, "w": w}))
        rec.worst(f"measure.pde@k={k:g}", "measure.pde", pde_anchor, worst, note="relative to rho")

    fd = []
    for _ in range(50):
        z, w = _rand_disk(rng, 1.0), _rand_disk(rng, 0.6)
        dw, dz = measure.weight_partials(cfg.k, z, w)
        fdz = _wirtinger_fd(lambda zz: measure.weight(cfg.k, zz, w), z)
        fdw = _wirtinger_fd(lambda ww: measure.weight(cfg.k, z, ww), w)
        rho = measure.weight(cfg.k, z, w)
        scale = lambda a: max(abs(a), rho)  # noqa: E731
        fd.append((max(abs(fdz - dz) / scale(dz), abs(fdw - dw) / scale(dw)), {"z": z, "w": w}))
    rec.worst("measure.partials_fd", "measure.partials_fd",
              "closed-form partials of the weight vs finite differences", fd)

    lim = []
    for _ in range(50):
        z, w = _rand_disk(rng, 2.0), _rand_disk(rng, 0.9)
        e = np.exp(-abs(z) ** 2)
        lim.append((abs(measure.weight(cfg.k, z, 0) - e) / e, {"z": z}))
        ref = (1 - abs(w) ** 2) ** (2 * cfg.k - 3)
        lim.append((abs(measure.weight(cfg.k, 0, w) - ref) / ref, {"w": w}))
    rec.worst("measure.limits", "measure.limits", "limiting weights at w = 0 and z = 0", lim)

    # series pairing always available
    series_checks = [
        (abs(measure.inner_product_series({(0, 0): 1}, {(0, 0): 1}, cfg.k) - 1), {"f": "P0", "g": "P0"}),
    ]
    if (2 * cfg.k - 0.5) > 0:
        ref = 1.0 / (2 * cfg.k - 0.5)
        series_checks.append((abs(measure.inner_product_series({(0, 1): 1}, {(0, 1): 1}, cfg.k) - ref) / abs(ref),
                              {"f": "P0 w", "g": "P0 w"}))
    indefinite = 2 * cfg.k - 0.5 < 0
    rec.worst("measure.series_formula", "measure.series_formula", "series scalar product", series_checks,
              note="pairing is indefinite for this k" if indefinite else "")

    integral_families = ("measure.normalization", "measure.orthonormality", "measure.n_factorial",
                         "measure.integral_vs_series", "measure.adjoint", "measure.conjugate_symmetry",
                         "measure.grid_convergence")
    if cfg.k <= measure.INTEGRAL_K_MIN:
        for fam in integral_families:
            rec.skip(fam, fam, "integral scalar product",
                     "k <= 3/4 convergence guard: integral form not defined; series checks run")
        return
    k = cfg.k
    grid = measure.build_grid(k, cfg.n_z, cfg.n_r, cfg.n_theta)
    one = BivarPoly.constant(1.0)
    rec.check("measure.normalization", "measure.normalization", "normalization (1, 1) = 1",
              abs(measure.inner_product(one, one, k, grid) - 1), {"k": k})

    labels = [(n, s) for n in range(5) for s in range(4)]
    basis = [special.basis_poly(n, k, s) for n, s in labels]
    G = measure.gram(basis, k, grid)
    err = np.abs(G - np.eye(len(labels)))
    i, j = np.unravel_index(np.argmax(err), err.shape)
    rec.check("measure.orthonormality", "measure.orthonormality",
              "orthonormality of f_nks", float(err.max()),
              {"k": k, "worst_pair": [labels[i], labels[j]], "table": "n<=4, s<=3"})

    p2 = measure.monomial_basis_poly(2, 0)
    val = measure.inner_product(p2, p2, k, grid)
    with_fact = measure.series_weight(2, 0, k, with_factorial=True)
    without = measure.series_weight(2, 0, k, with_factorial=False)
    r_with, r_without = abs(val - with_fact), abs(val - without)
    winner = "with n!" if r_with < r_without else "without n!"
    rec.check("measure.n_factorial", "measure.n_factorial",
              "norm of P_n w^s: candidates with and without n!", min(r_with, r_without),
              {"k": k, "quadrature": val, "with_n!": with_fact, "without_n!": without,
               "residual_with_n!": r_with, "residual_without_n!": r_without},
              note=f"quadrature matches the candidate {winner}")

    mlabels = [(n, r) for n in range(5) for r in range(4)]
    mono = [measure.monomial_basis_poly(n, r) for n, r in mlabels]
    Gm = measure.gram(mono, k, grid)
    ivs = []
    matches = {"with n!": 0, "without n!": 0}
    for a, la in enumerate(mlabels):
        for b, lb in enumerate(mlabels):
            fa, gb = {la: 1.0}, {lb: 1.0}
            s_with = measure.inner_product_series(fa, gb, k, with_factorial=True)
            s_without = measure.inner_product_series(fa, gb, k, with_factorial=False)
            q = Gm[a, b]
            scale = max(1.0, abs(s_with))
            rw, rwo = abs(q - s_with) / scale, abs(q - s_without) / max(1.0, abs(s_without))
            if la == lb:
                matches["with n!" if rw <= rwo else "without n!"] += 1
            ivs.append((rw, {"f": la, "g": lb, "quadrature": q, "series_with_n!": s_with,
                             "series_without_n!": s_without, "residual_without_n!": rwo}))
    rec.worst("measure.integral_vs_series", "measure.integral_vs_series",
              "integral vs series scalar product on P_n w^r", ivs,
              note=f"diagonal pairs matched with n!: {matches['with n!']}, "
                   f"without n!: {matches['without n!']} (series compared with n! included)")

    adj = []
    for kk in sorted({k, 1.0, 2.0}):
        g_k = grid if kk == k else measure.build_grid(kk, cfg.n_z, cfg.n_r, cfg.n_theta)
        for trial in range(50):
            f = random_poly(rng, 4)
            g = random_poly(rng, 4)
            res = measure.adjoint_residuals(kk, f, g, g_k)
            adj.append((max(res), {"k": kk, "trial": trial, "r_a": res[0], "r_K": res[1], "r_0": res[2]}))
    rec.worst("measure.adjoint", "measure.adjoint",
              "a, K- adjoint to a+, K+; K0 self-adjoint", adj)

    sym = []
    for trial in range(20):
        f, g, h = random_poly(rng, 3), random_poly(rng, 3), random_poly(rng, 3)
        c = complex(*rng.normal(size=2))
        fg = measure.inner_product(f, g, k, grid)
        gf = measure.inner_product(g, f, k, grid)
        lin = measure.inner_product(f, g * c + h, k, grid) - (c * fg + measure.inner_product(f, h, k, grid))
        anti = measure.inner_product(f * c, g, k, grid) - np.conj(c) * fg
        scale = max(1.0, abs(fg))
        sym.append((max(abs(fg - np.conj(gf)), abs(lin), abs(anti)) / scale, {"trial": trial}))
    rec.worst("measure.conjugate_symmetry", "measure.conjugate_symmetry",
              "conjugate symmetry and sesquilinearity", sym)

    fine = measure.build_grid(k, 2 * cfg.n_z, 2 * cfg.n_r, 2 * cfg.n_theta)
    Gf = measure.gram(basis, k, fine)
    rec.check("measure.grid_convergence", "measure.grid_convergence",
              "doubling quadrature orders leaves inner products unchanged",
              float(np.abs(Gf - G).max()), {"orders": [cfg.n_z, cfg.n_r, cfg.n_theta]})


def random_poly(rng: np.random.Generator, degree: int, n_terms: int = 5) -> BivarPoly:
    """Random complex polynomial with total degree <= ``degree``."""
    terms = {}
    for _ in range(n_terms):
        i = int(rng.integers(0, degree + 1))
        j = int(rng.integers(0, degree - i + 1))
        terms[(i, j)] = complex(*rng.normal(size=2))
    return BivarPoly(terms)


# ---------------------------------------------------------------------------
# group


def _jdist(h1: group.JacobiElement, h2: group.JacobiElement) -> float:
    return max(abs(h1.g.a - h2.g.a), abs(h1.g.b - h2.g.b), abs(h1.alpha - h2.alpha), abs(h1.t - h2.t))


def _suite_group(rec: _Recorder, rng: np.random.Generator) -> None:
    cfg = rec.cfg
    k = cfg.k
    e = group.JacobiElement.identity()
    ident, inv, assoc, orient, disk, coc, mod = [], [], [], [], [], [], []
    positive = not float(2 * k).is_integer()
    for _ in range(cfg.samples):
        h1 = group.random_jacobi(rng, 1.0, 1.0, positive_a=positive)
        h2 = group.random_jacobi(rng, 1.0, 1.0, positive_a=positive)
        h3 = group.random_jacobi(rng, 1.0, 1.0)
        x = group.random_point(rng, 1.0, 0.5)
        ident.append((max(_jdist(group.compose(e, h1), h1), _jdist(group.compose(h1, e), h1)), {"h": h1}))
        hi = group.inverse(h1)
        inv.append((max(_jdist(group.compose(h1, hi), e), _jdist(group.compose(hi, h1), e)), {"h": h1}))
        lhs = group.compose(group.compose(h1, h2), h3)
        rhs = group.compose(h1, group.compose(h2, h3))
        assoc.append((_jdist(lhs, rhs), {"h1": h1, "h2": h2, "h3": h3}))
        o = group.action_orientation(h1, h2, x)
        orient.append((o["left"], {"h1": h1, "h2": h2, "x": x, "right_distance": o["right"]}))
        disk.append((max(0.0, abs(group.act(h1, x).w) - (1 - 1e-15)), {"h": h1, "x": x}))
        c = group.cocycle_residual(k, h1, h2, x)
        coc.append((c.residual, {"h1": h1, "h2": h2, "x": x, "raw": c.raw_residual}))
        mod.append((kernel.multiplier_modulus_residual(k, h1, x), {"h": h1, "x": x}))
    rec.worst("group.identity", "group.identity", "identity of the composition law", ident)
    rec.worst("group.inverse", "group.inverse", "inverse of the composition law", inv)
    rec.worst("group.associativity", "group.associativity", "associativity of the composition law", assoc)
    rec.worst("group.orientation", "group.orientation",
              "h1.(h2.x) = (h1 h2).x (left action)", orient)
    rec.worst("group.disk", "group.disk", "action preserves the unit disk", disk)
    rec.worst("group.cocycle", "group.cocycle",
              "multiplier cocycle J(h1 h2, x) = J(h1, h2.x) J(h2, x)", coc,
              note="center phase exp(i dt) removed from J(h1 h2, x)")
    rec.worst("group.modulus", "group.modulus", "|J(h,x)|^2 = K(h.x, h.x) / K(x, x)", mod)

    hw = []
    for _ in range(cfg.samples):
        h1 = group.JacobiElement(group.SU11Element.identity(), _rand_disk(rng, 1.0), 0.0)
        h2 = group.JacobiElement(group.SU11Element.identity(), _rand_disk(rng, 1.0), 0.0)
        x = group.random_point(rng, 1.0, 0.5)
        c = group.cocycle_residual(k, h1, h2, x)
        hw.append((c.residual, {"h1": h1, "h2": h2, "x": x, "raw": c.raw_residual}))
    rec.worst("group.cocycle_hw", "group.cocycle_hw", "cocycle on the Heisenberg-Weyl subgroup", hw)

    br = []
    for two_k in (1, 2, 3, 4, 5):
        for _ in range(20):
            kappa = complex(rng.uniform(0.2, 2.0), rng.uniform(-2.0, 2.0))
            exact = group.kappa_power(kappa, two_k)
            principal = np.exp(two_k * np.log(kappa))
            br.append((abs(exact - principal) / abs(exact), {"kappa": kappa, "2k": two_k}))
    rec.worst("group.branch", "group.branch", "repeated products vs principal branch for Re kappa > 0", br)


# ---------------------------------------------------------------------------
# states


def _suite_states(rec: _Recorder, rng: np.random.Generator) -> None:
    cfg = rec.cfg
    k = cfg.k
    families = ("states.lowest_weight", "states.disentangling", "states.displacement_inverse",
                "states.displacement_composition", "states.displacement_expm", "states.coherent_two_ways",
                "states.norm", "states.squeeze_coherent", "states.squeeze_coherent_monotone", "states.overlap_kernel")
    if k <= 0.25:
        for fam in families:
            rec.skip(fam, fam, "truncated Fock-space realization", "k <= 1/4: ladder factor undefined")
        return
    N, M = cfg.N, cfg.M
    ops = algebra.fock_operator_matrices(k, 4, 4)
    e0 = states.vacuum(k, 4, 4).vector
    lw = max(np.abs(ops.a @ e0).max(), np.abs(ops.kminus @ e0).max(), np.abs(ops.kzero @ e0 - k * e0).max())
    rec.check("states.lowest_weight", "states.lowest_weight", "lowest-weight conditions on e0", float(lw))

    n_d, m_d = min(N, 40), min(M, 40)
    dis = []
    for _ in range(10):
        w = _rand_disk(rng, 0.3)
        S = states.squeeze(w, k, n_d, m_d)
        E = states.squeeze_exponential(states.zeta_from_w(w), k, n_d, m_d)
        dis.append((S.max_abs_diff(E), {"w": w, "N": n_d, "M": m_d}))
    rec.worst("states.disentangling", "states.disentangling",
              "exp(zeta K+ - conj(zeta) K-) = exp(w K+) exp(eta K0) exp(-conj(w) K-)", dis,
              note="exponential form evaluated on a 3x padded space, then compressed")

    dinv, dcomp, dexp = [], [], []
    for _ in range(10):
        al, be = _rand_disk(rng, 1.0), _rand_disk(rng, 1.0)
        big = 2 * N
        prod = (states.displacement(al, big, 2) @ states.displacement(-al, big, 2)).fock[:N, :N]
        dinv.append((float(np.abs(prod - np.eye(N)).max()), {"alpha": al, "N": N}))
        lhs = (states.displacement(al, big, 2) @ states.displacement(be, big, 2)).fock[:N, :N]
        rhs = np.exp(1j * (al * np.conj(be)).imag) * states.displacement(al + be, big, 2).fock[:N, :N]
        dcomp.append((float(np.abs(lhs - rhs).max()), {"alpha": al, "beta": be, "N": N}))
        dexp.append((float(np.abs(states.displacement(al, N, 2).fock
                                  - states.displacement(al, N, 2, method="expm").fock).max()),
                     {"alpha": al, "N": N}))
    block = "leading N x N block of products built at size 2N"
    rec.worst("states.displacement_inverse", "states.displacement_inverse", "D(alpha) D(-alpha) = I", dinv,
              note=block)
    rec.worst("states.displacement_composition", "states.displacement_composition",
              "D(alpha) D(beta) = exp(i Im(alpha conj beta)) D(alpha + beta)", dcomp, note=block)
    rec.worst("states.displacement_expm", "states.displacement_expm",
              "normal-ordered vs exponential displacement", dexp)

    two, norms, prop = [], [], []
    nm, mm = min(N, 60), min(M, 40)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", states.TruncationWarning)
        for _ in range(10):
            z, w = _rand_disk(rng, 0.5), _rand_disk(rng, 0.3)
            v1 = states.coherent_vector(k, z, w, N, M, "expm")
            v2 = states.coherent_vector(k, z, w, N, M, "analytic")
            two.append((float(np.abs(v1.coefficients - v2.coefficients).max()), {"z": z, "w": w}))
        for trial in range(50):
            al, w = _rand_disk(rng, 0.5), _rand_disk(rng, 0.3)
            psi = states.squeezed_vector(k, al, w, nm, mm)
            norms.append((abs(psi.norm() - 1), {"alpha": al, "w": w}))
            prop.append((states.squeeze_coherent_residual(k, al, w, nm, mm), {"alpha": al, "w": w, "N": nm, "M": mm}))
        rec.worst("states.coherent_two_ways", "states.coherent_two_ways",
                  "coherent vector: exponential vs product form", two)
        rec.worst("states.norm", "states.norm", "unit norm of D(alpha) S(w) e0", norms)
        rec.worst("states.squeeze_coherent", "states.squeeze_coherent",
                  "squeezed state vs coherent state relation", prop)
        mono = []
        al, w = prop[0][1]["alpha"], prop[0][1]["w"]
        prev = None
        for scale in (0.25, 0.5, 1, 2):
            n_s, m_s = max(2, int(nm * scale)), max(2, int(mm * scale))
            r = states.squeeze_coherent_residual(k, al, w, n_s, m_s)
            if prev is not None:
                mono.append((max(0.0, r - max(prev, 1e-14)), {"N": n_s, "M": m_s, "residual": r, "previous": prev}))
            prev = r
        rec.worst("states.squeeze_coherent_monotone", "states.squeeze_coherent_monotone",
                  "residual non-increasing as N, M double", mono, note="round-off floor 1e-14")

        ov = []
        for _ in range(10):
            x, y = group.random_point(rng, 0.5, 0.3), group.random_point(rng, 0.5, 0.3)
            vx = states.coherent_vector(k, x.z, x.w, N, M)
            vy = states.coherent_vector(k, y.z, y.w, N, M)
            exact = kernel.kernel(k, x, y)
            ov.append((abs(states.overlap(vy, vx) - exact) / abs(exact), {"x": x, "x2": y, "N": N, "M": M}))
        rec.worst("states.overlap_kernel", "states.overlap_kernel", "overlap of coherent vectors = kernel", ov)


_SUITE_FUNCS = {
    "algebra": _suite_algebra,
    "special": _suite_special,
    "kernel": _suite_kernel,
    "measure": _suite_measure,
    "group": _suite_group,
    "states": _suite_states,
}


def run_suite(config: SuiteConfig, suite: str = "all") -> Report:
    if suite != "all" and suite not in _SUITE_FUNCS:
        raise ConfigError({"suite": f"unknown suite {suite!r}; choose from {', '.join(SUITES)} or all"})
    rec = _Recorder(config)
    names = SUITES if suite == "all" else (suite,)
    for name in names:
        # one stream per suite keeps single-suite runs identical to their part of "all"
        rng = np.random.default_rng([config.seed, SUITES.index(name)])
        _SUITE_FUNCS[name](rec, rng)
    return Report(suite, config, rec.records)
