"""Audit orchestration: expand the attack grid, run everything, take the max.

The audit's headline outputs are the max-MIA aggregates: for every metric,
the maximum across all attack instances plus the instance that achieved it —
a worst-case leakage estimate over the implemented attack suite (never a
guarantee about attacks outside it).

Reports are deterministic: identical (quadruple, config, seed) produce
byte-identical JSON regardless of worker count. Wall-clock timings are
measured and kept in memory but serialized as null unless explicitly
requested, since real timings would break that contract.
"""

from __future__ import annotations

import json
import time
import warnings
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

from .attacks import DEFAULT_K_GRID, DEFAULT_RADIUS, FAMILIES, AttackSpec, run_attack
from .core import Quadruple, RandomSeed, build_eval_set
from .dcrprop import dcr_prop
from .evaluation import FPR_TARGETS, MetricReport, metric_report
from .ingest import fingerprint
from .preprocess import fit_transformer

REPORT_VERSION = 1

_COUNT_KEYS = ("n_members", "n_nonmembers")


def default_grid() -> tuple[AttackSpec, ...]:
    """The full attack grid: every family at its default hyperparameter points."""
    specs: list[AttackSpec] = []
    for family in FAMILIES:
        specs.extend(family_grid(family))
    return tuple(specs)


def family_grid(family: str) -> tuple[AttackSpec, ...]:
    """Default instances for one family (k-grid families expand to 6 points)."""
    if family in ("dpi", "gen_lra"):
        return tuple(AttackSpec(family, {"k": k}) for k in DEFAULT_K_GRID)
    if family == "local_neighborhood":
        return (AttackSpec(family, {"radius": DEFAULT_RADIUS}),)
    return (AttackSpec(family),)


@dataclass(frozen=True)
class AuditConfig:
    """Everything an audit run depends on besides the data itself.

    Args:
        seed: master seed; every attack instance gets a child stream keyed by
            its instance id.
        attacks: ``"all"`` for the default grid, or an explicit tuple of
            :class:`AttackSpec`.
        cap: per-side eval-set row cap.
        fpr_targets: FPR budgets for the TPR@FPR metrics.
        delta: additive slack for effective ε.
        epsilon_mode: ``"point"`` or ``"clopper_pearson"``.
        confidence: bound level for Clopper–Pearson mode.
        fit_source: which adversary-visible table encoders fit on
            (``"synthetic"`` or ``"reference"``).
        include_dcr_prop: also compute the DCR-Prop similarity block
            (requires a reference table).
        include_runtime: serialize measured per-instance wall-clock seconds
            instead of null (breaks byte-identical reruns by design).
        jobs: worker threads for attack instances; never affects results.
    """

    seed: RandomSeed
    attacks: object = "all"
    cap: int = 1000
    fpr_targets: tuple = FPR_TARGETS
    delta: float = 0.0
    epsilon_mode: str = "point"
    confidence: float = 0.95
    fit_source: str = "synthetic"
    include_dcr_prop: bool = False
    include_runtime: bool = False
    jobs: int = 1

    def __post_init__(self):
        if self.cap < 1:
            raise ValueError("cap must be at least 1")
        if self.jobs < 1:
            raise ValueError("jobs must be at least 1")
        if self.fit_source not in ("synthetic", "reference"):
            raise ValueError("fit_source must be 'synthetic' or 'reference'")
        mode = "clopper_pearson" if self.epsilon_mode == "cp" else self.epsilon_mode
        object.__setattr__(self, "epsilon_mode", mode)
        targets = tuple(float(a) for a in self.fpr_targets)
        if not targets or any(not (0.0 <= a <= 1.0) for a in targets):
            raise ValueError("fpr_targets must be a non-empty tuple of values in [0,1]")
        object.__setattr__(self, "fpr_targets", targets)
        if self.attacks != "all":
            specs = tuple(self.attacks)
            if not specs or not all(isinstance(s, AttackSpec) for s in specs):
                raise ValueError("attacks must be 'all' or a non-empty tuple of AttackSpec")
            object.__setattr__(self, "attacks", specs)

    def to_json_dict(self) -> dict:
        """Config snapshot for report provenance (worker count excluded)."""
        return {
            "attacks": "all" if self.attacks == "all" else [s.to_json_dict() for s in self.attacks],
            "cap": self.cap,
            "fpr_targets": list(self.fpr_targets),
            "delta": self.delta,
            "epsilon_mode": self.epsilon_mode,
            "confidence": self.confidence,
            "fit_source": self.fit_source,
            "density_bandwidth": "scott",
            "seed": self.seed.value,
        }


def expand_grid(config: AuditConfig, calibrated: bool = True) -> list[AttackSpec]:
    """Resolve the config's attack selection against reference availability.

    Calibrated specs are dropped with a warning when no reference table is
    present; an empty result is an error.
    """
    specs = list(default_grid()) if config.attacks == "all" else list(config.attacks)
    if not calibrated:
        dropped = [s.instance_id for s in specs if s.requires_reference]
        specs = [s for s in specs if not s.requires_reference]
        if dropped:
            warnings.warn(
                "no reference table: dropped calibrated attack instances "
                + ", ".join(dropped),
                stacklevel=2,
            )
    ids = [s.instance_id for s in specs]
    if len(set(ids)) != len(ids):
        raise ValueError("attack grid contains duplicate instance ids")
    if not specs:
        raise ValueError("no runnable attack instances after reference filtering")
    return specs


@dataclass(frozen=True)
class InstanceResult:
    """Outcome of one attack instance within an audit."""

    spec: AttackSpec
    status: str
    metrics: MetricReport | None
    runtime_s: float | None

    @property
    def ok(self) -> bool:
        return self.status == "ok"


@dataclass(frozen=True)
class AuditReport:
    """Full audit output: per-instance metrics, max-MIA block, provenance."""

    version: int
    config: dict
    datasets: dict
    transformers: dict
    instances: tuple[InstanceResult, ...]
    max_mia: dict
    dcr_prop: dict | None = None

    def instance(self, instance_id: str) -> InstanceResult:
        for inst in self.instances:
            if inst.spec.instance_id == instance_id:
                return inst
        raise KeyError(f"no instance {instance_id!r} in report")

    def to_json_dict(self) -> dict:
        include_runtime = bool(self.config.get("include_runtime"))
        out = {
            "version": self.version,
            "config": self.config,
            "datasets": self.datasets,
            "transformers": self.transformers,
            "instances": [
                {
                    "spec": inst.spec.to_json_dict(),
                    "metrics": inst.metrics.to_json_dict() if inst.metrics else None,
                    "runtime_s": inst.runtime_s if include_runtime else None,
                    "status": inst.status,
                }
                for inst in self.instances
            ],
            "max_mia": self.max_mia,
        }
        if self.dcr_prop is not None:
            out["dcr_prop"] = self.dcr_prop
        return out

    def to_json(self) -> str:
        return json.dumps(self.to_json_dict(), indent=2, allow_nan=False) + "\n"

    @classmethod
    def from_json_dict(cls, obj: dict) -> "AuditReport":
        version = obj.get("version")
        if version != REPORT_VERSION:
            raise ValueError(
                f"unsupported report version {version!r} (this tool reads version {REPORT_VERSION})"
            )
        instances = tuple(
            InstanceResult(
                spec=AttackSpec.from_json_dict(entry["spec"]),
                status=entry["status"],
                metrics=MetricReport.from_json_dict(entry["metrics"])
                if entry["metrics"]
                else None,
                runtime_s=entry["runtime_s"],
            )
            for entry in obj["instances"]
        )
        return cls(
            version=version,
            config=obj["config"],
            datasets=obj["datasets"],
            transformers=obj.get("transformers", {}),
            instances=instances,
            max_mia=obj["max_mia"],
            dcr_prop=obj.get("dcr_prop"),
        )

    def to_markdown(self) -> str:
        return render_markdown(self)


def _dataset_block(quadruple: Quadruple) -> dict:
    roles = {
        "train": quadruple.train,
        "holdout": quadruple.holdout,
        "synthetic": quadruple.synthetic,
        "reference": quadruple.reference,
    }
    fingerprints = {
        role: (format(fingerprint(t), "016x") if t is not None else None)
        for role, t in roles.items()
    }
    sizes = {role: (t.n_rows if t is not None else None) for role, t in roles.items()}
    return {"fingerprints": fingerprints, "sizes": sizes}


def run_suite(quadruple: Quadruple, config: AuditConfig) -> AuditReport:
    """Run the full audit: fit encoders once, run every instance, take maxima.

    Individual attack failures are recorded per instance (with a warning) and
    excluded from the max-MIA block; the audit aborts only if every instance
    fails.
    """
    fit_table = (
        quadruple.synthetic if config.fit_source == "synthetic" else quadruple.reference
    )
    if fit_table is None:
        raise ValueError("fit_source='reference' but the quadruple has no reference table")
    if config.include_dcr_prop and quadruple.reference is None:
        raise ValueError("DCR-Prop needs a reference table")
    transformers = {
        mode: fit_transformer(fit_table, mode, config.fit_source)
        for mode in ("onehot", "ordinal")
    }
    eval_set = build_eval_set(quadruple.train, quadruple.holdout, config.cap, config.seed)
    grid = expand_grid(config, calibrated=quadruple.calibrated)

    def execute(spec: AttackSpec) -> InstanceResult:
        seed = config.seed.child(f"attack/{spec.instance_id}")
        start = time.perf_counter()
        try:
            result = run_attack(spec, quadruple, transformers, eval_set, seed)
            metrics = metric_report(
                result,
                fpr_targets=config.fpr_targets,
                delta=config.delta,
                epsilon_mode=config.epsilon_mode,
                confidence=config.confidence,
            )
        except Exception as exc:
            return InstanceResult(
                spec=spec,
                status=f"failed: {exc}",
                metrics=None,
                runtime_s=time.perf_counter() - start,
            )
        return InstanceResult(
            spec=spec, status="ok", metrics=metrics, runtime_s=time.perf_counter() - start
        )

    if config.jobs > 1:
        with ThreadPoolExecutor(max_workers=config.jobs) as pool:
            instances = tuple(pool.map(execute, grid))
    else:
        instances = tuple(execute(spec) for spec in grid)

    for inst in instances:
        if not inst.ok:
            warnings.warn(
                f"attack instance {inst.spec.instance_id!r} {inst.status}; "
                "excluded from max-MIA",
                stacklevel=2,
            )
    if not any(inst.ok for inst in instances):
        raise RuntimeError("all attack instances failed; no audit signal")

    max_mia = compute_max_mia(instances)

    dcr_prop_block = None
    if config.include_dcr_prop:
        dcr_prop_block = dcr_prop(
            quadruple.train,
            quadruple.reference,
            quadruple.synthetic,
            transformers["onehot"],
        ).to_json_dict()

    config_json = config.to_json_dict()
    config_json["include_runtime"] = config.include_runtime
    return AuditReport(
        version=REPORT_VERSION,
        config=config_json,
        datasets=_dataset_block(quadruple),
        transformers={mode: t.digest() for mode, t in transformers.items()},
        instances=instances,
        max_mia=max_mia,
        dcr_prop=dcr_prop_block,
    )


def compute_max_mia(instances: tuple[InstanceResult, ...]) -> dict:
    """Per metric, the exact maximum across ok instances plus the argmax id.

    Ties resolve to the earliest instance in grid order, keeping reports
    deterministic.
    """
    ok = [inst for inst in instances if inst.ok]
    if not ok:
        return {}
    metric_keys = [
        key for key in ok[0].metrics.to_json_dict() if key not in _COUNT_KEYS
    ]
    out: dict = {}
    for key in metric_keys:
        best_value = None
        best_id = None
        for inst in ok:
            value = inst.metrics.to_json_dict()[key]
            if best_value is None or value > best_value:
                best_value = value
                best_id = inst.spec.instance_id
        out[key] = {"value": best_value, "argmax": best_id}
    return out


def compare_reports(a: AuditReport, b: AuditReport) -> dict:
    """Delta view between two audits: max-MIA diffs plus matching-instance diffs.

    Disjoint instance sets simply yield an empty instance table; the max-level
    comparison covers whatever metrics the two reports share.
    """
    shared_metrics = [m for m in a.max_mia if m in b.max_mia]
    max_delta = {
        m: {
            "a": a.max_mia[m]["value"],
            "b": b.max_mia[m]["value"],
            "delta": b.max_mia[m]["value"] - a.max_mia[m]["value"],
        }
        for m in shared_metrics
    }
    a_by_id = {inst.spec.instance_id: inst for inst in a.instances if inst.ok}
    b_by_id = {inst.spec.instance_id: inst for inst in b.instances if inst.ok}
    instance_delta: dict = {}
    for instance_id in a_by_id:
        if instance_id not in b_by_id:
            continue
        ma = a_by_id[instance_id].metrics.to_json_dict()
        mb = b_by_id[instance_id].metrics.to_json_dict()
        instance_delta[instance_id] = {
            key: mb[key] - ma[key] for key in ma if key not in _COUNT_KEYS and key in mb
        }
    flags = []
    if "auc" in max_delta:
        d = max_delta["auc"]["delta"]
        if d > 0:
            flags.append(f"b is leakier: Max-AUC {d:+.6g}")
        elif d < 0:
            flags.append(f"a is leakier: Max-AUC {-d:+.6g}")
    return {"max_mia": max_delta, "instances": instance_delta, "flags": flags}


# ---------------------------------------------------------------------------
# Rendering
# ---------------------------------------------------------------------------


def _fmt(value) -> str:
    if value is None:
        return "—"
    if isinstance(value, float):
        return format(value, ".4f")
    return str(value)


def render_markdown(report: AuditReport) -> str:
    """Human-readable Markdown rendering (derived from JSON, never parsed back)."""
    lines: list[str] = ["# Privacy audit report", ""]

    sizes = report.datasets["sizes"]
    fps = report.datasets["fingerprints"]
    lines += ["## Datasets", "", "| role | rows | fingerprint |", "| --- | --- | --- |"]
    for role in ("train", "holdout", "synthetic", "reference"):
        lines.append(f"| {role} | {_fmt(sizes[role])} | {fps[role] or '—'} |")
    lines.append("")

    lines += [
        "## Worst-case leakage (max over attack instances)",
        "",
        "| metric | value | worst attack |",
        "| --- | --- | --- |",
    ]
    for metric, entry in report.max_mia.items():
        lines.append(f"| {metric} | {_fmt(entry['value'])} | {entry['argmax']} |")
    lines.append("")

    metric_keys: list[str] = []
    for inst in report.instances:
        if inst.ok:
            metric_keys = [
                k for k in inst.metrics.to_json_dict() if k not in _COUNT_KEYS
            ]
            break
    header = ["instance", "status"] + metric_keys
    lines += ["## Attack instances", "", "| " + " | ".join(header) + " |"]
    lines.append("| " + " | ".join(["---"] * len(header)) + " |")
    for inst in report.instances:
        row = [inst.spec.instance_id, inst.status if inst.ok else inst.status]
        metrics = inst.metrics.to_json_dict() if inst.metrics else {}
        row += [_fmt(metrics.get(k)) for k in metric_keys]
        lines.append("| " + " | ".join(row) + " |")
    lines.append("")

    if report.dcr_prop is not None:
        lines += ["## DCR-Prop similarity", ""]
        for key, value in report.dcr_prop.items():
            lines.append(f"- {key}: {_fmt(value)}")
        lines.append("")

    cfg = report.config
    lines += [
        "## Provenance",
        "",
        f"- seed: {cfg['seed']}",
        f"- encoder fit source: {cfg['fit_source']}",
        f"- density bandwidth rule: {cfg['density_bandwidth']}",
        f"- transformer digests: onehot={report.transformers.get('onehot', '—')}, "
        f"ordinal={report.transformers.get('ordinal', '—')}",
        f"- epsilon: mode={cfg['epsilon_mode']}, delta={cfg['delta']}, "
        f"confidence={cfg['confidence']}",
        f"- report version: {report.version}",
        "",
    ]
    return "\n".join(lines)


def render_comparison(delta: dict) -> str:
    """Markdown rendering of a :func:`compare_reports` delta summary."""
    lines = ["# Audit comparison", ""]
    for flag in delta["flags"]:
        lines.append(f"**{flag}**")
    if delta["flags"]:
        lines.append("")
    lines += ["## Max-MIA deltas (b − a)", "", "| metric | a | b | delta |", "| --- | --- | --- | --- |"]
    for metric, entry in delta["max_mia"].items():
        lines.append(
            f"| {metric} | {_fmt(entry['a'])} | {_fmt(entry['b'])} | {_fmt(entry['delta'])} |"
        )
    lines.append("")
    lines += ["## Instance deltas (b − a)", ""]
    if delta["instances"]:
        metrics = list(next(iter(delta["instances"].values())))
        header = ["instance"] + metrics
        lines.append("| " + " | ".join(header) + " |")
        lines.append("| " + " | ".join(["---"] * len(header)) + " |")
        for instance_id, entry in delta["instances"].items():
            row = [instance_id] + [_fmt(entry.get(m)) for m in metrics]
            lines.append("| " + " | ".join(row) + " |")
    else:
        lines.append("(no instances in common)")
    lines.append("")
    return "\n".join(lines)
