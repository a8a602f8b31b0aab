"""Benchmark harness: datasets, metrics, timed runs, and reports.

Instances are (target regex, train pair, eval pair, ground-truth labels)
tuples generated deterministically from a seed.  Runs execute one or two
method configurations per instance under a wall-clock timeout, re-verify
every claimed success against the match engine, and aggregate success
rate, semantic accuracy, fully-accurate ratio, runtimes, and (for paired
runs) win ratios, counting failures at the timeout value.
"""

from __future__ import annotations

import csv
import json
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, asdict
from pathlib import Path

from . import alpharegex as ar
from . import bluefringe as bf
from . import examples as ex
from . import framework as fw
from . import rx
from . import splitter as sp
from .examples import ExamplePair
from .rx import Alphabet, Regex


# ---------------------------------------------------------------------------
# Metrics


def sem_acc(r: Regex, pos_eval, neg_eval) -> float:
    """Held-out score: (|TP|+|TN|-|FP|-|FN|) / (|P|+|N|) * 100."""
    total = len(pos_eval) + len(neg_eval)
    if total == 0:
        raise ValueError("evaluation sets must not both be empty")
    tp = sum(1 for w in pos_eval if rx.matches(r, w))
    tn = sum(1 for w in neg_eval if not rx.matches(r, w))
    fp = len(pos_eval) - tp
    fn = len(neg_eval) - tn
    return (tp + tn - fp - fn) / total * 100.0


def fully_accurate(r: Regex, pos_eval, neg_eval) -> bool:
    """True when every held-out example is classified correctly."""
    return all(rx.matches(r, w) for w in pos_eval) and \
        not any(rx.matches(r, w) for w in neg_eval)


# ---------------------------------------------------------------------------
# Instances


@dataclass
class BenchmarkInstance:
    regex: str
    alphabet: str
    pos_train: list[str]
    neg_train: list[str]
    pos_eval: list[str]
    neg_eval: list[str]
    labels: list[str]  # ground-truth labelings aligned to pos_train

    def target(self) -> Regex:
        return rx.parse(self.regex, self.alphabet_obj())

    def alphabet_obj(self) -> Alphabet:
        return Alphabet.of(self.alphabet)

    def train_pair(self) -> ExamplePair:
        return ExamplePair.of(self.pos_train, self.neg_train, self.alphabet_obj())


@dataclass
class InstanceConfig:
    count_pos: int = 20
    count_neg: int = 20
    max_len: int = 10
    neg_mode: str = "symbol-perturb"  # or "regex-perturb"
    seed: int = 0
    alphabet: str | None = None  # overrides any file directive


@dataclass
class Skip:
    line_no: int
    text: str
    reason: str


def _subseed(seed: int, index: int, salt: int) -> int:
    return (seed * 1_000_003 + index * 97 + salt) & 0x7FFFFFFF


def make_instances(lines, config: InstanceConfig) -> tuple[list[BenchmarkInstance], list[Skip]]:
    """Build benchmark instances from regex lines (toolkit or raw syntax).

    Unusable lines are skipped with a reason, mirroring the dataset
    exclusion rules (too few positives, impossible negatives, rejected
    raw constructs).  Deterministic in config.seed.
    """
    skips: list[Skip] = []
    out: list[BenchmarkInstance] = []
    default_alphabet = config.alphabet
    index = 0
    for line_no, raw_line in enumerate(lines, 1):
        line = raw_line.strip()
        if not line:
            continue
        if line.startswith("#"):
            directive = line[1:].strip()
            if directive.startswith("alphabet") and default_alphabet is None:
                default_alphabet = directive.split(None, 1)[1].strip()
            continue
        target, alphabet, reason = _resolve_target(line, default_alphabet)
        if target is None:
            skips.append(Skip(line_no, line, reason))
            continue
        try:
            instance = _build_instance(target, alphabet, config, index)
        except ex.InsufficientLanguageError:
            skips.append(Skip(line_no, line, "insufficient-positives"))
            continue
        except ex.GenerationBudgetError:
            skips.append(Skip(line_no, line, "no-negatives"))
            continue
        out.append(instance)
        index += 1
    return out, skips


def _resolve_target(line: str, alphabet_spec: str | None):
    if alphabet_spec is not None:
        alphabet = Alphabet.of(sorted(set(alphabet_spec)))
        try:
            return rx.parse(line, alphabet), alphabet, None
        except rx.RegexError:
            pass
    else:
        symbols = sorted(set(line) - set("()+|*?.@ \t"))
        # induced toolkit parsing only for plain symbol sets; anything with
        # punctuation is treated as a raw practical regex below
        if symbols and all(c.isalnum() for c in symbols):
            try:
                alphabet = Alphabet.of(symbols)
                return rx.parse(line, alphabet), alphabet, None
            except rx.RegexError:
                pass
    record = ex.preprocess_raw(line)
    if record.accepted:
        return record.simplified, record.alphabet, None
    return None, None, record.rejection


def _build_instance(target: Regex, alphabet: Alphabet, config: InstanceConfig,
                    index: int) -> BenchmarkInstance:
    import random

    seed = config.seed
    positives = ex.gen_positives(target, config.count_pos, config.max_len,
                                 _subseed(seed, index, 1), alphabet)
    if config.neg_mode == "regex-perturb":
        negatives = ex.gen_negatives_regex_perturb(
            target, config.count_neg, config.max_len, _subseed(seed, index, 2), alphabet)
    else:
        negatives = ex.gen_negatives_symbol_perturb(
            target, positives, config.count_neg, _subseed(seed, index, 2), alphabet)
    shuffler = random.Random(_subseed(seed, index, 3))
    positives = sorted(positives)
    negatives = sorted(negatives)
    shuffler.shuffle(positives)
    shuffler.shuffle(negatives)
    half_pos = config.count_pos // 2
    half_neg = config.count_neg // 2
    pos_train, pos_eval = positives[:half_pos], positives[half_pos:]
    neg_train, neg_eval = negatives[:half_neg], negatives[half_neg:]
    labels = [ex.ground_truth_labels(target, p).labels for p in pos_train]
    return BenchmarkInstance(
        regex=rx.to_text(target),
        alphabet="".join(alphabet.symbols),
        pos_train=pos_train, neg_train=neg_train,
        pos_eval=pos_eval, neg_eval=neg_eval,
        labels=labels,
    )


def save_dataset(instances: list[BenchmarkInstance], path: str | Path):
    with open(path, "w", encoding="utf-8") as handle:
        for inst in instances:
            record = asdict(inst)
            record["alphabet"] = list(inst.alphabet)
            handle.write(json.dumps(record, sort_keys=True) + "\n")


def load_dataset(path: str | Path) -> list[BenchmarkInstance]:
    out = []
    with open(path, encoding="utf-8") as handle:
        for line in handle:
            if not line.strip():
                continue
            record = json.loads(line)
            record["alphabet"] = "".join(record["alphabet"])
            out.append(BenchmarkInstance(**record))
    return out


# ---------------------------------------------------------------------------
# Random targets


_KIND_WEIGHTS = [("literal", 0.35), ("concat", 0.25), ("union", 0.15),
                 ("star", 0.12), ("question", 0.08), ("wildcard", 0.05)]
_MAX_DEPTH = 8
_MAX_SIZE = 25


def gen_random_regexes(count: int, alphabet_size: int, seed: int) -> tuple[list[str], str]:
    """Random target regexes (texts) plus the alphabet they live over."""
    import random

    if alphabet_size < 1 or alphabet_size > 10:
        raise ValueError("alphabet_size must be in 1..10")
    symbols = "0123456789"[:alphabet_size]
    rng = random.Random(seed)

    def grow(depth: int, budget: int) -> Regex:
        kinds, weights = zip(*_KIND_WEIGHTS)
        if depth >= _MAX_DEPTH or budget < 3:
            kinds, weights = ("literal", "wildcard"), (0.875, 0.125)
        kind = rng.choices(kinds, weights)[0]
        if kind == "literal":
            return rx.Literal(rng.choice(symbols))
        if kind == "wildcard":
            return rx.WILDCARD
        if kind in ("concat", "union"):
            left_budget = rng.randint(1, budget - 2)
            left = grow(depth + 1, left_budget)
            right = grow(depth + 1, budget - 1 - left_budget)
            return rx.Concat(left, right) if kind == "concat" else rx.Union(left, right)
        inner = grow(depth + 1, budget - 1)
        return rx.Star(inner) if kind == "star" else rx.Question(inner)

    out = []
    for _ in range(count):
        out.append(rx.to_text(rx.simplify(grow(0, _MAX_SIZE))))
    return out, symbols


# ---------------------------------------------------------------------------
# Benchmark execution


@dataclass(frozen=True)
class MethodConfig:
    engine: str = "alpharegex"  # or "bluefringe"
    mode: str = "vanilla"       # or "split"
    splitter: str = "gt"        # gt | runs | file:PATH
    strategy: str = "seq"       # seq | par | prefix-all
    fallback: bool = False

    @property
    def name(self) -> str:
        if self.mode == "vanilla":
            return f"{self.engine}/vanilla"
        return f"{self.engine}/split/{self.splitter}/{self.strategy}"


_STRATEGIES = {
    "seq": fw.Strategy.INDEPENDENT_SEQUENTIAL,
    "par": fw.Strategy.INDEPENDENT_PARALLEL,
    "prefix-all": fw.Strategy.PREFIX_CONDITIONED_ALL,
}
_ENGINES = {"alpharegex": ar.synthesize, "bluefringe": bf.synthesize}


def _splitter_kind(spec: str, instance: BenchmarkInstance) -> sp.SplitterKind:
    if spec == "gt":
        return sp.GroundTruth(instance.target())
    if spec == "runs":
        return sp.HeuristicRuns()
    if spec.startswith("file:"):
        return sp.FromFile(spec[5:])
    raise ValueError(f"unknown splitter {spec!r}")


def run_instance(instance: BenchmarkInstance, method: MethodConfig,
                 timeout: float) -> dict:
    """Execute one method on one instance and score the outcome."""
    pair = instance.train_pair()
    budget = ar.SynthesisBudget(timeout=timeout)
    start = time.monotonic()
    status = "timeout"
    candidate: Regex | None = None
    try:
        if method.mode == "vanilla":
            candidate = _ENGINES[method.engine](pair, budget)
            status = "success" if candidate is not None else "timeout"
        else:
            result = fw.synthesize_split(
                pair, _splitter_kind(method.splitter, instance),
                _ENGINES[method.engine], _STRATEGIES[method.strategy],
                budget, fallback=method.fallback)
            candidate = result.final
            status = result.status.value
    except (ex.InvalidLabelingError, ex.PartitionError, sp.PredictionError,
            bf.ConflictError) as err:
        status = f"error:{type(err).__name__}"
        candidate = None
    elapsed = time.monotonic() - start
    verified = candidate is not None and status == "success" and \
        all(rx.matches(candidate, p) for p in pair.positives) and \
        not any(rx.matches(candidate, n) for n in pair.negatives) and \
        elapsed <= timeout + 0.2
    success = bool(verified)
    if success:
        acc = sem_acc(candidate, instance.pos_eval, instance.neg_eval)
        full = fully_accurate(candidate, instance.pos_eval, instance.neg_eval)
    else:
        acc, full = 0.0, False
    return {
        "regex": instance.regex,
        "method": method.name,
        "engine": method.engine,
        "mode": method.mode,
        "splitter": method.splitter if method.mode == "split" else "",
        "strategy": method.strategy if method.mode == "split" else "",
        "status": "success" if success else status,
        "result": rx.to_text(candidate) if success else "",
        "elapsed": round(elapsed, 4),
        "sem_acc": acc,
        "fully_accurate": full,
    }


def _run_task(args):
    instance, methods, timeout = args
    return [run_instance(instance, m, timeout) for m in methods]


@dataclass
class RunReport:
    rows: list[dict]
    timeout: float
    aggregates: list[dict] = field(default_factory=list)

    def method_rows(self, name: str) -> list[dict]:
        return [r for r in self.rows if r["method"] == name]

    def recompute(self) -> list[dict]:
        methods = list(dict.fromkeys(r["method"] for r in self.rows))
        out = []
        for name in methods:
            rows = self.method_rows(name)
            n = len(rows)
            succ = [r for r in rows if r["status"] == "success"]
            runtime = [r["elapsed"] if r["status"] == "success" else self.timeout
                       for r in rows]
            out.append({
                "method": name,
                "instances": n,
                "success_rate": round(100.0 * len(succ) / n, 2) if n else 0.0,
                "sem_acc": round(sum(r["sem_acc"] for r in rows) / n, 2) if n else 0.0,
                "fully_accurate": round(
                    100.0 * sum(r["fully_accurate"] for r in rows) / n, 2) if n else 0.0,
                "runtime": round(sum(runtime) / n, 4) if n else 0.0,
            })
        if len(methods) == 2:
            self._pairwise(out, methods)
        return out

    def _pairwise(self, aggregates: list[dict], methods: list[str]):
        a_rows = {r["regex"]: r for r in self.method_rows(methods[0])}
        b_rows = {r["regex"]: r for r in self.method_rows(methods[1])}
        shared = [k for k in a_rows if k in b_rows]

        def runtime(row):
            return row["elapsed"] if row["status"] == "success" else self.timeout

        considered = [k for k in shared
                      if a_rows[k]["status"] == "success" or
                      b_rows[k]["status"] == "success"]
        joint = [k for k in shared
                 if a_rows[k]["status"] == "success" and
                 b_rows[k]["status"] == "success"]
        for agg, mine, other in ((aggregates[0], a_rows, b_rows),
                                 (aggregates[1], b_rows, a_rows)):
            wins = sum(1 for k in considered
                       if runtime(mine[k]) < runtime(other[k]))
            agg["win_ratio"] = round(100.0 * wins / len(considered), 2) \
                if considered else 0.0
            agg["runtime_joint_success"] = round(
                sum(mine[k]["elapsed"] for k in joint) / len(joint), 4) \
                if joint else 0.0


def run_benchmark(instances: list[BenchmarkInstance], methods: list[MethodConfig],
                  timeout: float, jobs: int = 1) -> RunReport:
    """Run every method over every instance, optionally in parallel."""
    if not instances:
        raise ValueError("no instances to run")
    tasks = [(inst, methods, timeout) for inst in instances]
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            grouped = list(pool.map(_run_task, tasks, chunksize=1))
    else:
        grouped = [_run_task(t) for t in tasks]
    rows = [row for group in grouped for row in group]
    report = RunReport(rows=rows, timeout=timeout)
    report.aggregates = report.recompute()
    return report


def save_report(report: RunReport, prefix: str | Path):
    prefix = Path(prefix)
    with open(prefix.with_suffix(".jsonl"), "w", encoding="utf-8") as handle:
        handle.write(json.dumps({"timeout": report.timeout}) + "\n")
        for row in report.rows:
            handle.write(json.dumps(row, sort_keys=True) + "\n")
    agg = report.aggregates
    fields = list(agg[0].keys()) if agg else []
    for extra in ("win_ratio", "runtime_joint_success"):
        if any(extra in a for a in agg) and extra not in fields:
            fields.append(extra)
    with open(prefix.with_suffix(".csv"), "w", encoding="utf-8", newline="") as handle:
        writer = csv.DictWriter(handle, fieldnames=fields)
        writer.writeheader()
        for entry in agg:
            writer.writerow(entry)


def load_report(prefix: str | Path) -> RunReport:
    """Read rows back and verify stored aggregates match recomputation."""
    prefix = Path(prefix)
    rows = []
    timeout = None
    with open(prefix.with_suffix(".jsonl"), encoding="utf-8") as handle:
        for line in handle:
            if not line.strip():
                continue
            record = json.loads(line)
            if "timeout" in record and "method" not in record:
                timeout = record["timeout"]
            else:
                rows.append(record)
    if timeout is None:
        raise ValueError("report header with timeout missing")
    report = RunReport(rows=rows, timeout=timeout)
    report.aggregates = report.recompute()
    csv_path = prefix.with_suffix(".csv")
    if csv_path.exists():
        with open(csv_path, encoding="utf-8", newline="") as handle:
            stored = list(csv.DictReader(handle))
        for mine, theirs in zip(report.aggregates, stored):
            for key, value in mine.items():
                if key not in theirs or theirs[key] == "":
                    continue
                if key == "method":
                    ok = theirs[key] == value
                elif key == "instances":
                    ok = int(theirs[key]) == value
                else:
                    ok = abs(float(theirs[key]) - float(value)) <= 1e-9
                if not ok:
                    raise ValueError(
                        f"aggregate mismatch for {mine['method']}:{key}")
    return report
