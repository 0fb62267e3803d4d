"""Experiment runners: ratio distributions, curves relative to the greedy
baseline, timing sweeps, and the streaming demo.

Determinism: a master seed is split into independent per-trial,
per-method streams with a label hash, so enabling or disabling one
method never perturbs another method's randomness. Trials are
independent; runners emit records in trial order.

Every record with a known optimum is hard-checked against the method's
approximation factor; a violation raises BoundViolationError (it would
mean a bug, not noise).
"""

from __future__ import annotations

import hashlib
import time
from dataclasses import dataclass, field

from .bounds import alpha_for
from .covertree import CoverTree
from .errors import BoundViolationError, BudgetExceededError, KTooLargeError, MissingGroundTruthError
from .generators import (
    GeneratedInstance,
    GridConfig,
    WorstCaseBasicConfig,
    WorstCaseInheritConfig,
    gen_grid,
    gen_worstcase_basic,
    gen_worstcase_inherit,
)
from .metric import MetricKind, PointSet
from .pointio import ExperimentRecord, ingest_points, read_instance
from .selection import SelectionMethod, select

ALL_METHODS = tuple(m.value for m in SelectionMethod)
RATIO_TOL = 1e-9


def split_seed(master: int, *labels) -> int:
    """Stable 63-bit stream seed derived from the master seed and labels."""
    text = repr((master,) + labels).encode()
    return int.from_bytes(hashlib.blake2b(text, digest_size=8).digest(), "big") >> 1


@dataclass(frozen=True)
class ExperimentConfig:
    generator: str | None = None  # "grid" | "worstcase-basic" | "worstcase-inherit"
    generator_params: dict = field(default_factory=dict)
    input_path: str | None = None
    metric_kind: MetricKind = MetricKind.EUCLIDEAN
    methods: tuple[str, ...] = ALL_METHODS
    k_values: tuple[int, ...] = (2,)
    trials: int = 100
    b: float = 2.0
    seed: int = 0

    def __post_init__(self):
        if self.trials < 1:
            raise ValueError("trials must be >= 1")
        for m in self.methods:
            SelectionMethod(m)  # validates the name


def make_instance(cfg: ExperimentConfig, instance_seed: int) -> GeneratedInstance:
    if cfg.generator == "grid":
        return gen_grid(GridConfig(seed=instance_seed, **cfg.generator_params))
    if cfg.generator == "worstcase-basic":
        return gen_worstcase_basic(WorstCaseBasicConfig(**cfg.generator_params))
    if cfg.generator == "worstcase-inherit":
        return gen_worstcase_inherit(WorstCaseInheritConfig(**cfg.generator_params))
    if cfg.input_path is not None:
        return read_instance(cfg.input_path, cfg.metric_kind)
    raise ValueError("config needs a generator or an input path")


def build_tree(pool: PointSet, b: float, order) -> CoverTree:
    tree = CoverTree(pool.metric, b)
    for pid in order:
        tree.insert(pool.get(pid))
    return tree


def _ground_truth(cfg: ExperimentConfig, inst: GeneratedInstance, k: int) -> float:
    if inst.known_d_star is not None and inst.optimal_k == k:
        return inst.known_d_star
    from .oracle import exact_diverse

    try:
        return exact_diverse(inst.pool, k).d_star
    except BudgetExceededError as exc:
        raise MissingGroundTruthError(
            f"no known optimum for k={k} and the exact oracle is infeasible"
        ) from exc


def _trial_order(inst: GeneratedInstance, cfg: ExperimentConfig, trial: int):
    """Generated instances carry their own order (seeded shuffle for grids,
    prescribed for the worst cases). Static file pools are reshuffled per
    trial so repeated trials see different trees."""
    if cfg.generator is not None:
        return inst.insertion_order
    import random

    order = list(inst.insertion_order)
    random.Random(split_seed(cfg.seed, trial, "order")).shuffle(order)
    return order


def run_distribution(cfg: ExperimentConfig) -> list[ExperimentRecord]:
    """Fresh instance + fresh insertion order per trial; every configured
    method runs on the shared tree; ratios checked against their alphas."""
    k = cfg.k_values[0]
    records: list[ExperimentRecord] = []
    for trial in range(cfg.trials):
        inst = make_instance(cfg, split_seed(cfg.seed, trial, "instance"))
        d_star = _ground_truth(cfg, inst, k)
        tree = build_tree(inst.pool, cfg.b, _trial_order(inst, cfg, trial))
        divs: dict[str, float] = {}
        for method in cfg.methods:
            seed = split_seed(cfg.seed, trial, method)
            sel = select(SelectionMethod(method), tree, inst.pool, k, seed=seed)
            divs[method] = sel.achieved_diversity
            ratio = d_star / sel.achieved_diversity
            alpha = alpha_for(method, cfg.b)
            if ratio > alpha + RATIO_TOL:
                raise BoundViolationError(
                    f"trial {trial}: {method} ratio {ratio} exceeds alpha {alpha}"
                )
            vs_gmm = (
                divs["gmm"] / sel.achieved_diversity if "gmm" in divs else None
            )
            records.append(
                ExperimentRecord(
                    trial=trial,
                    method=method,
                    k=k,
                    b=cfg.b,
                    n=len(inst.pool),
                    diversity=sel.achieved_diversity,
                    seed=seed if method != "ict-inherit" else None,
                    d_star=d_star,
                    ratio=ratio,
                    ratio_vs_gmm=vs_gmm,
                    termination_level=sel.termination_level,
                )
            )
    return records


def run_relative_to_gmm(cfg: ExperimentConfig) -> list[ExperimentRecord]:
    """One shared tree; for each k run the greedy baseline (fixed seed) and
    the tree methods, recording div(base)/div(method) and the implied
    bound 2 x that on the true ratio."""
    inst = make_instance(cfg, split_seed(cfg.seed, 0, "instance"))
    n = len(inst.pool)
    for k in cfg.k_values:
        if k > n:
            raise KTooLargeError(f"k={k} exceeds pool size {n}")
    tree = build_tree(inst.pool, cfg.b, inst.insertion_order)
    gmm_seed = split_seed(cfg.seed, "gmm")
    records: list[ExperimentRecord] = []
    for k in cfg.k_values:
        base = select(SelectionMethod.GMM, tree, inst.pool, k, seed=gmm_seed)
        records.append(
            ExperimentRecord(
                trial=0, method="gmm", k=k, b=cfg.b, n=n,
                diversity=base.achieved_diversity, seed=gmm_seed,
                ratio_vs_gmm=1.0, bound_on_true_ratio=2.0,
            )
        )
        for method in cfg.methods:
            if method == "gmm":
                continue
            seed = split_seed(cfg.seed, k, method)
            sel = select(SelectionMethod(method), tree, inst.pool, k, seed=seed)
            vs = base.achieved_diversity / sel.achieved_diversity
            records.append(
                ExperimentRecord(
                    trial=0, method=method, k=k, b=cfg.b, n=n,
                    diversity=sel.achieved_diversity,
                    seed=seed if method != "ict-inherit" else None,
                    ratio_vs_gmm=vs,
                    bound_on_true_ratio=2.0 * vs,
                    termination_level=sel.termination_level,
                )
            )
    return records


def run_timing(cfg: ExperimentConfig, warmup: int = 3) -> list[ExperimentRecord]:
    """Wall-clock per selection call over the k sweep; the first `warmup`
    calls per method are discarded. Only relative trends are meaningful."""
    inst = make_instance(cfg, split_seed(cfg.seed, 0, "instance"))
    tree = build_tree(inst.pool, cfg.b, inst.insertion_order)
    n = len(inst.pool)
    records: list[ExperimentRecord] = []
    for method in cfg.methods:
        m = SelectionMethod(method)
        for _ in range(warmup):
            select(m, tree, inst.pool, min(cfg.k_values), seed=0)
        for k in cfg.k_values:
            seed = split_seed(cfg.seed, k, method)
            t0 = time.perf_counter()
            sel = select(m, tree, inst.pool, k, seed=seed)
            elapsed_ms = (time.perf_counter() - t0) * 1000.0
            records.append(
                ExperimentRecord(
                    trial=0, method=method, k=k, b=cfg.b, n=n,
                    diversity=sel.achieved_diversity,
                    seed=seed if method != "ict-inherit" else None,
                    termination_level=sel.termination_level,
                    time_ms=elapsed_ms,
                )
            )
    return records


def run_stream(
    pool: PointSet, k: int, b: float, order=None
) -> list[ExperimentRecord]:
    """Insert points one by one; once k points are present, run the
    inherited selection after every insertion. Its diversity always
    exceeds b^(termination level) by separation."""
    tree = CoverTree(pool.metric, b)
    order = list(order) if order is not None else [p.id for p in pool]
    records: list[ExperimentRecord] = []
    for step, pid in enumerate(order):
        tree.insert(pool.get(pid))
        if tree.size < k:
            continue
        sel = select(SelectionMethod.ICT_INHERIT, tree, None, k)
        floor = b**sel.termination_level
        if not sel.achieved_diversity > floor:
            raise BoundViolationError(
                f"step {step}: diversity {sel.achieved_diversity} not above "
                f"separation floor {floor}"
            )
        records.append(
            ExperimentRecord(
                trial=step, method="ict-inherit", k=k, b=b, n=tree.size,
                diversity=sel.achieved_diversity,
                termination_level=sel.termination_level,
            )
        )
    return records
