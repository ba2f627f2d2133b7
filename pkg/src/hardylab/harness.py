"""Scenario files, random generation, the bundled gallery, and batch runs.

Scenarios and reports are JSON.  Complex numbers are ``[re, im]`` pairs,
matrices are row-major with rows in the basis order of :mod:`hardylab.space`,
and every dump uses sorted keys so that identical input gives identical
bytes.
"""

from __future__ import annotations

import json
import time
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .inner import DECREASING, INCREASING, InnerFunction1D, InnerFunctionProd, InnerSeq
from .multipliers import (
    FamilyError,
    family_from_frames,
    family_from_inner_chain,
    family_from_partition,
    nested_orders,
)
from .operators import DEFAULT_TOL, TAU_RANK, TruncationError
from .space import BoxTruncation
from .verify import CHECKS, HypothesisError, RudinSpec, Scenario, Thm41Spec, Verdict, run_check, skipped

SCHEMA_VERSION = 1
ARTIFACT_VERSION = "0.1.0"
PRNG = "numpy.random.PCG64"
KINDS = ("positive-monomial", "positive-blaschke", "adversarial", "adversarial-escape")

SCENARIO_FIELDS = {
    "schema_version", "name", "description", "n", "caps", "k", "seq", "family", "term_orders",
    "witness", "thm41", "checks", "tolerances", "margins", "expected", "generator",
}
THM41_FIELDS = {"this", "other", "eta", "eta_order", "max_m"}
RUDIN_FIELDS = {"first", "second", "first_order"}
TOLERANCE_FIELDS = {"tol", "tau_rank"}
GENERATOR_FIELDS = {"kind", "n", "caps", "terms", "seed", "prng", "variant"}

EXIT_OK, EXIT_INCONSISTENT, EXIT_CONFIG = 0, 1, 2


class ConfigError(ValueError):
    """A scenario file that cannot be run; the message names the offending field."""

    def __init__(self, where: str, message: str):
        super().__init__(f"{where}: {message}")
        self.where = where


def _reject_unknown(obj, allowed: set, where: str):
    if not isinstance(obj, dict):
        raise ConfigError(where, f"expected an object, got {type(obj).__name__}")
    extra = sorted(set(obj) - allowed)
    if extra:
        raise ConfigError(where, f"unknown field(s) {extra}")


def _complex_matrix(rows, where: str) -> np.ndarray:
    try:
        arr = np.asarray(rows, dtype=float)
    except (TypeError, ValueError) as exc:
        raise ConfigError(where, f"matrix entries must be [re, im] pairs ({exc})") from None
    if arr.ndim != 3 or arr.shape[2] != 2:
        raise ConfigError(where, "matrix must be a list of rows of [re, im] pairs")
    return arr[..., 0] + 1j * arr[..., 1]


def _parse_seq(spec, m: int | None, where: str) -> InnerSeq:
    try:
        return InnerSeq.from_spec(spec, m)
    except (ValueError, KeyError, TypeError) as exc:
        raise ConfigError(where, str(exc)) from None


def _parse_family(spec, space: BoxTruncation, where: str):
    _reject_unknown(spec, {"partition", "inner_chain", "explicit"}, where)
    if len(spec) != 1:
        raise ConfigError(where, "give exactly one of partition, inner_chain, explicit")
    try:
        if "partition" in spec:
            blocks = []
            for block in spec["partition"]:
                blocks.append([tuple(int(x) for x in k) for k in block])
                for k in blocks[-1]:
                    if len(k) != space.n:
                        raise ConfigError(f"{where}.partition", f"index {k} needs {space.n} entries")
            return family_from_partition(space, blocks)
        if "inner_chain" in spec:
            terms = [InnerFunctionProd.from_spec(t, space.n) for t in spec["inner_chain"]]
            return family_from_inner_chain(space, InnerSeq(INCREASING, tuple(terms)))
        frames = [_complex_matrix(f, f"{where}.explicit[{j}]") for j, f in enumerate(spec["explicit"])]
        for j, f in enumerate(frames):
            if f.shape[0] != space.dim:
                raise ConfigError(f"{where}.explicit[{j}]", f"frame needs {space.dim} rows, got {f.shape[0]}")
        return family_from_frames(space, frames)
    except ConfigError:
        raise
    except (FamilyError, ValueError, KeyError, TypeError) as exc:
        key = next(iter(spec))
        raise ConfigError(f"{where}.{key}", str(exc)) from None


def _int_tuple(values, where: str, length: int | None = None) -> tuple[int, ...]:
    if not isinstance(values, list) or not all(isinstance(x, int) and not isinstance(x, bool) for x in values):
        raise ConfigError(where, "expected a list of integers")
    if length is not None and len(values) != length:
        raise ConfigError(where, f"expected {length} entries, got {len(values)}")
    if any(x < 0 for x in values):
        raise ConfigError(where, "entries must be non-negative")
    return tuple(values)


def _parse_rudin(spec, n: int, where: str) -> RudinSpec:
    _reject_unknown(spec, RUDIN_FIELDS, where)
    for key in ("first", "second"):
        if key not in spec:
            raise ConfigError(where, f"missing field {key!r}")
    order = spec.get("first_order")
    return RudinSpec(
        _parse_seq(spec["first"], 1, f"{where}.first"),
        _parse_seq(spec["second"], n - 1, f"{where}.second"),
        None if order is None else _int_tuple(order, f"{where}.first_order"),
    )


def parse_scenario(data: dict, tol: float | None = None, margins=None) -> Scenario:
    """Validate a scenario record and build the objects it describes.

    ``tol`` and ``margins`` override the file's values (command-line flags).
    """
    _reject_unknown(data, SCENARIO_FIELDS, "scenario")
    version = data.get("schema_version")
    if version != SCHEMA_VERSION:
        raise ConfigError("schema_version", f"expected {SCHEMA_VERSION}, got {version!r}")
    for key in ("name", "caps", "checks"):
        if key not in data:
            raise ConfigError(key, "missing required field")
    caps = _int_tuple(data["caps"], "caps")
    if not caps:
        raise ConfigError("caps", "need at least one variable")
    n = data.get("n", len(caps))
    if n != len(caps) or n < 2:
        raise ConfigError("n", f"n={n} must be at least 2 and match {len(caps)} caps")
    checks = data["checks"]
    if not isinstance(checks, list) or not checks:
        raise ConfigError("checks", "expected a non-empty list")
    for c in checks:
        if c not in CHECKS:
            raise ConfigError("checks", f"unknown check {c!r} (valid: {', '.join(CHECKS)})")
    k = data.get("k", 1)
    if not isinstance(k, int) or not 1 <= k < n:
        raise ConfigError("k", f"k={k!r} must satisfy 1 <= k < n")
    space = BoxTruncation(caps)

    seq = family = witness = thm41 = term_orders = None
    if "seq" in data:
        seq = _parse_seq(data["seq"], k, "seq")
        report = seq.validate()
        if not report:
            raise ConfigError("seq", f"{seq.direction} sequence fails at pair {report.pair}: {report.reason}")
    if "family" in data:
        fam_space = space.split(k)[1] if seq is not None else space
        family = _parse_family(data["family"], fam_space, "family")
    if seq is not None:
        if family is None:
            raise ConfigError("family", "a sequence needs a projection family")
        if len(seq) != len(family):
            raise ConfigError("seq", f"{len(seq)} terms but the family has {len(family)} members (mismatched lengths)")
    if "term_orders" in data:
        term_orders = _int_tuple(data["term_orders"], "term_orders", None if seq is None else len(seq))
    if "witness" in data:
        witness = _parse_seq(data["witness"], n - k, "witness")
    if "thm41" in data:
        spec = data["thm41"]
        _reject_unknown(spec, THM41_FIELDS, "thm41")
        eta = None
        if "eta" in spec:
            try:
                eta = InnerFunction1D.from_spec(spec["eta"])
            except ValueError as exc:
                raise ConfigError("thm41.eta", str(exc)) from None
        thm41 = Thm41Spec(
            _parse_rudin(spec.get("this"), n, "thm41.this"),
            _parse_rudin(spec.get("other"), n, "thm41.other"),
            eta,
            spec.get("eta_order"),
            spec.get("max_m"),
        )
    needs = {"thm32a": seq, "thm32b": seq, "thm33": seq, "remark_k": seq, "isometry": seq,
             "lemma31": family, "thm41": thm41}
    for c in checks:
        if needs[c] is None:
            raise ConfigError("checks", f"check {c!r} needs a {'thm41 block' if c == 'thm41' else 'seq and family' if c != 'lemma31' else 'family'}")
    _reject_unknown(data.get("generator", {}), GENERATOR_FIELDS, "generator")
    tols = data.get("tolerances", {})
    _reject_unknown(tols, TOLERANCE_FIELDS, "tolerances")
    if margins is None and "margins" in data:
        margins = data["margins"]
    if margins is not None:
        margins = _int_tuple(list(margins), "margins", n)
    expected = data.get("expected", {})
    _reject_unknown(expected, set(CHECKS), "expected")
    return Scenario(
        name=str(data["name"]),
        caps=caps,
        checks=tuple(checks),
        k=k,
        seq=seq,
        family=family,
        term_orders=term_orders,
        witness=witness,
        thm41=thm41,
        tol=float(tol if tol is not None else tols.get("tol", DEFAULT_TOL)),
        tau_rank=float(tols.get("tau_rank", TAU_RANK)),
        margins=margins,
        expected=expected,
    )


# -- running ------------------------------------------------------------------------


@dataclass
class RunResult:
    report: dict
    exit_code: int
    diagnostic: str = ""
    warnings: list = field(default_factory=list)


def _expected_mismatches(check: str, verdict: Verdict, expected: dict) -> list[str]:
    out = []
    for cond, want in sorted(expected.get(check, {}).items()):
        got = verdict.conditions.get(cond)
        if got is None:
            out.append(f"{check}.{cond}: expected {want}, condition not evaluated")
        elif got != want:
            out.append(f"{check}.{cond}: expected {want}, computed {got}")
    return out


def _first_disagreement(v: Verdict) -> str:
    for cls in v.classes:
        seen = {c: v.conditions[c] for c in cls if c in v.conditions}
        if len(set(seen.values())) > 1:
            parts = [f"{c}={seen[c]} (residual {v.residuals.get(c, float('nan')):.3g})" for c in seen]
            return f"{v.check}: " + ", ".join(parts)
    return f"{v.check}: " + "; ".join(v.notes or ["flagged inconsistent"])


def run_data(data: dict, tol: float | None = None, margins=None, timing: bool = False) -> RunResult:
    """Run every listed check of one scenario record.

    Exit codes: 0 when every verdict is consistent, 1 on an inconsistency,
    2 when the record is invalid or a check had an empty working mask.  When
    several checks go wrong the first one decides the code.
    """
    start = time.perf_counter()
    try:
        scn = parse_scenario(data, tol, margins)
    except ConfigError as exc:
        return RunResult({"error": str(exc), "status": "config-error"}, EXIT_CONFIG, f"error: {exc}")
    verdicts, warnings = {}, []
    code, diagnostic = EXIT_OK, ""
    for check in scn.checks:
        try:
            v = run_check(scn, check)
        except TruncationError as exc:
            v = skipped(check, "empty mask", str(exc))
            if code == EXIT_OK:
                code, diagnostic = EXIT_CONFIG, f"error: {check}: {exc}"
        except HypothesisError as exc:
            verdicts[check] = skipped(check, "hypothesis failed", str(exc)).to_dict()
            if code == EXIT_OK:
                code, diagnostic = EXIT_CONFIG, f"error: {check}: {exc}"
            continue
        if not v.consistent and code == EXIT_OK:
            code, diagnostic = EXIT_INCONSISTENT, "inconsistent: " + _first_disagreement(v)
        warnings.extend(_expected_mismatches(check, v, scn.expected))
        verdicts[check] = v.to_dict()
    status = {EXIT_OK: "consistent", EXIT_INCONSISTENT: "inconsistent", EXIT_CONFIG: "config-error"}[code]
    report = {
        "artifact_version": ARTIFACT_VERSION,
        "schema_version": SCHEMA_VERSION,
        "scenario": data,
        "verdicts": verdicts,
        "expected_mismatches": warnings,
        "status": status,
        "exit_code": code,
    }
    if timing:
        report["wall_time_s"] = time.perf_counter() - start
    return RunResult(report, code, diagnostic, warnings)


def dumps(obj) -> str:
    return json.dumps(obj, sort_keys=True, indent=2, allow_nan=True) + "\n"


def load_scenario(path) -> dict:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise ConfigError(str(path), f"cannot read file ({exc.strerror})") from None
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError(str(path), f"invalid JSON ({exc})") from None


def run_file(path, out=None, tol=None, margins=None, timing=False) -> RunResult:
    try:
        data = load_scenario(path)
    except ConfigError as exc:
        return RunResult({"error": str(exc), "status": "config-error"}, EXIT_CONFIG, f"error: {exc}")
    result = run_data(data, tol, margins, timing)
    if out is not None:
        Path(out).write_text(dumps(result.report))
    return result


# -- generation ---------------------------------------------------------------------


def _tail_indices(caps) -> list[tuple[int, ...]]:
    return [tuple(int(x) for x in k) for k in BoxTruncation(tuple(caps)).exponents]


def _monomial_chain(rng, tail_caps, J: int, gap: int = 1) -> list[tuple[int, ...]]:
    """Exponents ``0 = e_1 < e_2 < ... < e_J`` kept ``gap`` below the caps."""
    room = [max(d - gap, 0) for d in tail_caps]
    if J - 1 > sum(room):
        raise ConfigError("caps", f"trailing caps {tuple(tail_caps)} cannot hold a strict chain of {J} terms")
    chain = [tuple([0] * len(tail_caps))]
    budget = sum(room) - (J - 1)
    for _ in range(J - 1):
        cur = list(chain[-1])
        free = [i for i in range(len(cur)) if cur[i] < room[i]]
        i = int(rng.choice(free))
        cur[i] += 1
        # optional extra steps, keeping enough room for the remaining terms
        while budget > 0 and rng.random() < 0.35:
            free = [i for i in range(len(cur)) if cur[i] < room[i]]
            if not free:
                break
            cur[int(rng.choice(free))] += 1
            budget -= 1
        chain.append(tuple(cur))
    return chain


def _level(k, chain) -> int:
    """1-based index of the last chain exponent below ``k``."""
    lvl = 1
    for j, e in enumerate(chain, start=1):
        if all(a >= b for a, b in zip(k, e)):
            lvl = j
    return lvl


def _partition_from_levels(levels: dict, J: int) -> list[list[list[int]]]:
    blocks = [[] for _ in range(J)]
    for k, lvl in levels.items():
        blocks[lvl - 1].append(list(k))
    return blocks


def _decreasing_degrees(rng, cap: int, J: int) -> list[int]:
    if J > cap:
        raise ConfigError("caps", f"leading cap {cap} cannot hold {J} distinct degrees below it")
    return sorted((int(x) for x in rng.choice(cap, size=J, replace=False)), reverse=True)


def _random_zero(rng, rmax: float = 0.6) -> list[float]:
    r = float(rng.uniform(0.1, rmax))
    t = float(rng.uniform(0, 2 * np.pi))
    return [round(r * np.cos(t), 6), round(r * np.sin(t), 6), 1]


def generate(kind: str, n: int, caps, J: int, seed: int) -> dict:
    """Random scenario record, reproducible from ``seed``.

    ``positive-monomial`` pairs decreasing monomials in ``z1`` with a family
    cut out by a monomial chain, so every tail is principal.
    ``positive-blaschke`` uses Blaschke products with zeros of modulus at
    most 0.6 and records the truncation order of each term.
    ``adversarial`` replaces one tail ``e H2`` by ``e (z_2 H2 + ... + z_n H2)``,
    which stays invariant but is not principal (with ``n = 2`` no such tail
    exists and the escape variant is used).  ``adversarial-escape`` swaps
    the constant with the generator of the last tail, so the tails stop being
    invariant.
    """
    if kind not in KINDS:
        raise ConfigError("kind", f"unknown kind {kind!r} (valid: {', '.join(KINDS)})")
    if seed is None:
        raise ConfigError("seed", "a seed is required for generation")
    caps = tuple(int(d) for d in caps)
    if len(caps) != n or n < 2:
        raise ConfigError("caps", f"need {n} caps with n >= 2, got {caps}")
    if J < 1:
        raise ConfigError("terms", "need at least one term")
    rng = np.random.Generator(np.random.PCG64(seed))
    tail_caps = caps[1:]
    variant = kind
    if kind == "adversarial" and n == 2:
        variant = "adversarial-escape"
    chain = _monomial_chain(rng, tail_caps, J, 2 if variant == "adversarial" else 1)
    if variant.startswith("adversarial") and J < 2:
        raise ConfigError("terms", "adversarial scenarios need at least two terms")

    data = {
        "schema_version": SCHEMA_VERSION,
        "name": f"{kind}-n{n}-J{J}-seed{seed}",
        "n": n,
        "caps": list(caps),
        "generator": {"kind": kind, "n": n, "caps": list(caps), "terms": J, "seed": seed, "prng": PRNG,
                      "variant": variant},
    }
    if kind == "positive-blaschke":
        zeros = [_random_zero(rng) for _ in range(J)]
        # psi_j carries the zeros j..J-1 so that psi_j / psi_{j+1} is one Blaschke factor
        funcs = [InnerFunction1D.from_spec({"zeros": zeros[j:]}) for j in range(J)]
        terms = [f.to_spec() for f in funcs]
        orders = [r[0] for r in nested_orders(InnerSeq(DECREASING, tuple(funcs)), 1e-10)]
        need = orders[0] + 2
        if caps[0] < need:
            raise ConfigError("caps", f"leading cap {caps[0]} is below the truncation order; need at least {need}")
        data["seq"] = {"direction": DECREASING, "terms": terms}
        data["term_orders"] = orders
    else:
        degrees = _decreasing_degrees(rng, caps[0], J)
        data["seq"] = {"direction": DECREASING, "terms": [{"monomial": d} for d in degrees]}

    if variant == "positive-monomial" or variant == "positive-blaschke":
        data["family"] = {"inner_chain": [{"monomial": list(e)} for e in chain]}
        data["checks"] = ["isometry", "thm32a", "thm32b"] + (["lemma31"] if n >= 3 else [])
        data["expected"] = {"thm32a": {"S_invariant": True, "coefficient_spaces_invariant": True}}
        if n >= 3 and variant == "positive-monomial":
            data["expected"]["thm32b"] = {c: True for c in ("i", "ii", "iii", "iv")}
        return data

    levels = {k: _level(k, chain) for k in _tail_indices(tail_caps)}
    if variant == "adversarial":
        # e + u_i must stay inside the margin-1 mask for every trailing variable i
        candidates = [j for j in range(2, J + 1) if all(e + 2 <= d for e, d in zip(chain[j - 1], tail_caps))]
        if not candidates:
            raise ConfigError("caps", "no chain term leaves room for a non-principal tail")
        j = int(rng.choice(candidates))
        levels[chain[j - 1]] = j - 1
        data["expected"] = {
            "thm32a": {"S_invariant": True, "coefficient_spaces_invariant": True},
            "thm32b": {"i": False, "ii": False, "iii": False, "iv": False},
        }
        data["checks"] = ["isometry", "thm32a", "thm32b", "lemma31"]
    else:
        # swap the constant with the generator of the last tail: z_i * 1 then leaves S_J
        levels[tuple([0] * (n - 1))] = J
        levels[chain[-1]] = 1
        data["expected"] = {"thm32a": {"S_invariant": False, "coefficient_spaces_invariant": False}}
        data["checks"] = ["isometry", "thm32a"]
    data["family"] = {"partition": _partition_from_levels(levels, J)}
    return data


# -- gallery ------------------------------------------------------------------------


def _mono(*ms):
    return [{"monomial": m} for m in ms]


def _scn(name, description, caps, checks, **fields) -> dict:
    out = {"schema_version": SCHEMA_VERSION, "name": name, "description": description,
           "n": len(caps), "caps": list(caps), "checks": checks}
    out.update(fields)
    return out


def _blocks(caps, owner) -> list[list[list[int]]]:
    """Partition of a box by ``owner(k) -> 1-based block``; empty blocks are kept."""
    idx = _tail_indices(caps)
    J = max(owner(k) for k in idx)
    blocks = [[] for _ in range(J)]
    for k in idx:
        blocks[owner(k) - 1].append(list(k))
    return blocks


def gallery() -> list[dict]:
    """Curated scenarios covering every worked instance, positive and negative."""
    dec = lambda *t: {"direction": DECREASING, "terms": list(t)}  # noqa: E731
    inc = lambda *t: {"direction": INCREASING, "terms": list(t)}  # noqa: E731
    half = {"constant": [1.0, 0.0], "zeros": [[0.5, 0.0, 1]]}
    rudin_base = {"first": dec(*_mono(2, 1)), "second": inc({"monomial": [0]}, {"monomial": [1]})}
    items = [
        _scn("thm32-worked", "decreasing (z^2, z) with P1 = constants; S has rank 29 at caps (5,5)",
             (5, 5), ["isometry", "thm32a", "thm32b"],
             seq=dec(*_mono(2, 1)), family={"partition": _blocks((5,), lambda k: 1 if k == (0,) else 2)},
             expected={"thm32a": {"S_invariant": True, "coefficient_spaces_invariant": True},
                       "thm32b": {"i": True, "ii": True, "iii": True, "iv": True}}),
        _scn("thm32-escape", "P1 = span{z2}: the tail S2 and S both fail invariance",
             (5, 5), ["thm32a"],
             seq=dec(*_mono(2, 1)), family={"partition": _blocks((5,), lambda k: 1 if k == (1,) else 2)},
             expected={"thm32a": {"S_invariant": False, "coefficient_spaces_invariant": False}}),
        _scn("thm32-identity", "single term psi = 1 with P1 = I", (3, 3), ["isometry", "thm32a", "thm32b"],
             seq=dec(*_mono(0)), family={"partition": _blocks((3,), lambda k: 1)},
             expected={"thm32a": {"S_invariant": True, "coefficient_spaces_invariant": True}}),
        _scn("thm32b-n3-chain", "three variables, family from the chain [1, z2 z3]; recovers (1, z2 z3)",
             (4, 4, 4), ["isometry", "thm32a", "thm32b", "lemma31"],
             seq=dec(*_mono(2, 1)), family={"inner_chain": [{"monomial": [0, 0]}, {"monomial": [1, 1]}]},
             witness=inc({"monomial": [0, 0]}, {"monomial": [1, 1]}),
             expected={"thm32b": {"i": True, "ii": True, "iii": True, "iv": True}}),
        _scn("thm32b-n3-adversarial", "second tail is span{k != 0}: invariant but not principal",
             (4, 4, 4), ["thm32a", "thm32b", "lemma31"],
             seq=dec(*_mono(2, 1)), family={"partition": _blocks((4, 4), lambda k: 1 if k == (0, 0) else 2)},
             expected={"thm32a": {"S_invariant": True, "coefficient_spaces_invariant": True},
                       "thm32b": {"i": False, "ii": False, "iii": False, "iv": False}}),
        _scn("thm33-worked", "increasing (z, z^2) with heads S1 = z2 H2 and S2 = everything",
             (5, 5), ["isometry", "thm33"],
             seq=inc(*_mono(1, 2)), family={"partition": _blocks((5,), lambda k: 2 if k == (0,) else 1)},
             expected={"thm33": {"a:S_invariant": True, "a:coefficient_spaces_invariant": True}}),
        _scn("thm33-single", "single term z with P1 = I gives z1 H2", (4, 4), ["thm33"],
             seq=inc(*_mono(1)), family={"partition": _blocks((4,), lambda k: 1)},
             expected={"thm33": {"a:S_invariant": True, "b:i": True}}),
        _scn("thm33-escape", "P1 = span{z2}: the head S1 is not invariant and neither is S",
             (5, 5), ["thm33"],
             seq=inc(*_mono(1, 2)), family={"partition": _blocks((5,), lambda k: 1 if k == (1,) else 2)},
             expected={"thm33": {"a:S_invariant": False, "a:coefficient_spaces_invariant": False}}),
        _scn("remark-k2-single", "two-variable term z1 z2 with P1 = I", (3, 3, 3), ["remark_k"], k=2,
             seq=dec({"monomial": [1, 1]}), family={"partition": _blocks((3,), lambda k: 1)},
             expected={"remark_k": {"S_invariant": True, "coefficient_spaces_invariant": True}}),
        _scn("remark-k2-worked", "two-variable terms (z1 z2^2, z1 z2) with P1 = constants",
             (3, 3, 3), ["isometry", "remark_k"], k=2,
             seq=dec({"monomial": [1, 2]}, {"monomial": [1, 1]}),
             family={"partition": _blocks((3,), lambda k: 1 if k == (0,) else 2)},
             expected={"remark_k": {"S_invariant": True, "coefficient_spaces_invariant": True}}),
        _scn("remark-k2-escape", "two-variable terms with P1 = span{z3}", (3, 3, 3), ["remark_k"], k=2,
             seq=dec({"monomial": [1, 2]}, {"monomial": [1, 1]}),
             family={"partition": _blocks((3,), lambda k: 1 if k == (1,) else 2)},
             expected={"remark_k": {"S_invariant": False, "coefficient_spaces_invariant": False}}),
        _scn("isometry-worked", "the (z^2, z) multiplier at d1 = 6 is exactly isometric on the interior",
             (6, 4), ["isometry"],
             seq=dec(*_mono(2, 1)), family={"partition": _blocks((4,), lambda k: 1 if k == (0,) else 2)},
             expected={"isometry": {"isometry": True}}),
        _scn("isometry-blaschke", "single Blaschke factor with zero 1/2, d1 = 12, truncation order 10",
             (12, 1), ["isometry"],
             seq=dec(half), family={"partition": _blocks((1,), lambda k: 1)}, term_orders=[10],
             expected={"isometry": {"isometry": False, "within_tail_bound": True}}),
        _scn("thm32-blaschke", "decreasing (B z, B) with B the Blaschke factor at 1/2",
             (40, 3), ["isometry", "thm32a", "thm32b"],
             seq=dec({"constant": [1.0, 0.0], "zeros": [[0.0, 0.0, 1], [0.5, 0.0, 1]]}, half),
             family={"partition": _blocks((3,), lambda k: 1 if k == (0,) else 2)}, term_orders=[32, 32],
             tolerances={"tol": 1e-8},
             expected={"thm32a": {"S_invariant": True, "coefficient_spaces_invariant": True}}),
        _scn("lemma31-chain-z1", "two-variable family from the chain [z1]: tails are principal",
             (5, 5), ["lemma31"], family={"inner_chain": [{"monomial": [1, 0]}]},
             expected={"lemma31": {"i": True, "ii": True, "iii": True}}),
        _scn("lemma31-nonprincipal", "Ran P2 = span{k != 0}, Ran P1 = constants", (5, 5), ["lemma31"],
             family={"partition": _blocks((5, 5), lambda k: 1 if k == (0, 0) else 2)},
             expected={"lemma31": {"i": False, "ii": False, "iii": False}}),
        _scn("lemma31-chain-z1z2", "three-variable family from the chain [z1 z2]", (3, 3, 3), ["lemma31"],
             family={"inner_chain": [{"monomial": [1, 1, 0]}]},
             expected={"lemma31": {"i": True, "ii": True, "iii": True}}),
        _scn("thm41-shift", "S = z1^2 S~ for a two-term Rudin subspace", (8, 5), ["thm41"],
             thm41={"this": {"first": dec(*_mono(4, 3)), "second": rudin_base["second"]},
                    "other": rudin_base, "max_m": 3},
             expected={"thm41": {"equivalent_within_search_class": True, "intertwines": True}}),
        _scn("thm41-eta", "supplied witness eta = z1 for S = z1 S~", (7, 5), ["thm41"],
             thm41={"this": {"first": dec(*_mono(3, 2)), "second": rudin_base["second"]},
                    "other": rudin_base, "eta": {"monomial": 1}},
             expected={"thm41": {"S_equals_eta_S~": True, "intertwines": True, "unitary_onto": True}}),
        _scn("thm41-identity", "S = S~ is found with eta = 1", (6, 5), ["thm41"],
             thm41={"this": rudin_base, "other": rudin_base, "max_m": 2},
             expected={"thm41": {"equivalent_within_search_class": True}}),
        _scn("thm41-inconclusive", "trailing chains (1, z2) and (1, z2^2): no monomial eta works",
             (6, 5), ["thm41"],
             thm41={"this": rudin_base,
                    "other": {"first": rudin_base["first"], "second": inc({"monomial": [0]}, {"monomial": [2]})}},
             expected={"thm41": {"equivalent_within_search_class": False}}),
    ]
    return items


def run_gallery(out_dir=None) -> tuple[dict, int]:
    """Run every gallery scenario; returns the combined report and the worst exit code."""
    reports, code = {}, EXIT_OK
    for data in gallery():
        r = run_data(data)
        reports[data["name"]] = r.report
        code = max(code, r.exit_code)
        if out_dir is not None:
            d = Path(out_dir)
            d.mkdir(parents=True, exist_ok=True)
            (d / f"{data['name']}.json").write_text(dumps(data))
            (d / f"{data['name']}.report.json").write_text(dumps(r.report))
    return reports, code
