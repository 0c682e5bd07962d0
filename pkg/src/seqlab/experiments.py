"""Manifest-driven experiments tying generators, selection, measures, the
coder, and the statistics into reproducible runs.

A manifest is a plain-text key-value file; every run writes the resolved
manifest, CSV curves, and a summary with one CHECK line per acceptance
check into its output directory.  Runs are deterministic: the same manifest
produces byte-identical files.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path

from . import coder, selection, stats
from .bitseq import BitString
from .generators import source_from_descriptor
from .measures import (
    PointMass,
    format_keyvalues,
    measure_from_descriptor,
    parse_keyvalues,
)

EXPERIMENTS = ("kw-demo", "prop1-demo", "prop2-demo", "rates")

_DEFAULT_N = {
    "kw-demo": 1_000_000,
    "prop1-demo": 100_000,
    "prop2-demo": 100_000,
    "rates": 1_000_000,
}

_DEFAULT_GROUPS = {
    "kw-demo": {"x": {"kind": "champernowne"}, "y": {"kind": "fibonacci_word"}},
    "prop1-demo": {"y": {"kind": "fibonacci_word"}},
    "prop2-demo": {
        "y": {"kind": "bernoulli", "p": "1/3", "seed": "1"},
        "measure": {"family": "bernoulli", "p": "1/3"},
    },
    "rates": {"src": {"kind": "champernowne"}, "ref": {"kind": "fibonacci_word"}},
}


@dataclass
class Check:
    name: str
    passed: bool
    value: str
    bound: str

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        return f"CHECK {self.name} {status} {self.value} {self.bound}"


@dataclass
class ExperimentManifest:
    experiment: str
    out_dir: Path
    n: int
    checkpoints: list
    groups: dict = field(default_factory=dict)

    @classmethod
    def from_text(cls, text: str, out_dir=None) -> "ExperimentManifest":
        flat = parse_keyvalues(text)
        experiment = flat.pop("experiment", None)
        if experiment not in EXPERIMENTS:
            raise ValueError(
                f"manifest must set experiment to one of {', '.join(EXPERIMENTS)}"
            )
        out = flat.pop("out", None) or out_dir
        if out is None:
            raise ValueError("manifest must set out = <directory>")
        n = int(flat.pop("n", _DEFAULT_N[experiment]))
        cp_text = flat.pop("checkpoints", "")
        checkpoints = (
            [int(c) for c in cp_text.split(",") if c.strip()]
            if cp_text
            else default_checkpoints(n)
        )
        if any(b <= a for a, b in zip(checkpoints, checkpoints[1:])):
            raise ValueError("checkpoints must be strictly increasing")
        if checkpoints[-1] > n:
            raise ValueError("checkpoints must not exceed n")
        groups: dict = {}
        for key, value in flat.items():
            group, dot, sub = key.partition(".")
            if not dot:
                raise ValueError(f"unknown manifest key {key!r}")
            groups.setdefault(group, {})[sub] = value
        for group, defaults in _DEFAULT_GROUPS[experiment].items():
            groups.setdefault(group, dict(defaults))
        return cls(experiment, Path(out), n, checkpoints, groups)

    @classmethod
    def from_file(cls, path, out_dir=None) -> "ExperimentManifest":
        return cls.from_text(Path(path).read_text(), out_dir=out_dir)

    def resolved_text(self) -> str:
        flat = {
            "experiment": self.experiment,
            "n": str(self.n),
            "checkpoints": ",".join(map(str, self.checkpoints)),
        }
        for group in sorted(self.groups):
            for sub, value in self.groups[group].items():
                flat[f"{group}.{sub}"] = value
        return format_keyvalues(flat)


def default_checkpoints(n: int) -> list:
    """Powers of two from 2^10 up to n, then n itself."""
    cps = []
    p = 1024
    while p <= n:
        cps.append(p)
        p *= 2
    if not cps or cps[-1] != n:
        cps.append(n)
    return cps


def run_experiment(manifest: ExperimentManifest) -> list:
    """Run the experiment, write its report directory, return the checks."""
    out = manifest.out_dir
    out.mkdir(parents=True, exist_ok=True)
    runner = {
        "kw-demo": _run_kw_demo,
        "prop1-demo": _run_prop1,
        "prop2-demo": _run_prop2,
        "rates": _run_rates,
    }[manifest.experiment]
    checks, curves = runner(manifest)
    (out / "manifest.txt").write_text(manifest.resolved_text())
    for name, text in curves.items():
        (out / name).write_text(text)
    summary = "".join(check.line() + "\n" for check in checks)
    (out / "summary.txt").write_text(summary)
    return checks


def _stat_csv(rows) -> str:
    lines = ["statistic,k,n,value"]
    for statistic, k, n, value in rows:
        kcell = "" if k is None else str(k)
        vcell = repr(value) if isinstance(value, float) else str(value)
        lines.append(f"{statistic},{kcell},{n},{vcell}")
    return "\n".join(lines) + "\n"


def _run_kw_demo(manifest: ExperimentManifest):
    n = manifest.n
    x = source_from_descriptor(manifest.groups["x"]).prefix(n)
    y = source_from_descriptor(manifest.groups["y"]).prefix(n)
    sel_full = selection.select(x, y).selected
    self_full = selection.select(x, x).selected

    rows = []
    ks = (1, 2, 3)
    for m in manifest.checkpoints:
        xm = x.slice(1, m)
        ym = y.slice(1, m)
        sel_m = sel_full.slice(1, ym.count_ones())
        self_m = self_full.slice(1, xm.count_ones())
        xp_m = x.slice(1, len(sel_m))
        for k in ks:
            if len(sel_m) < k or len(self_m) < k:
                continue
            rows.append(("discrepancy.x", k, m, stats.discrepancy(xm, k)))
            rows.append(("discrepancy.selected", k, len(sel_m), stats.discrepancy(sel_m, k)))
            rows.append(("discrepancy.prefix", k, len(xp_m), stats.discrepancy(xp_m, k)))
        rows.append(("discrepancy.self", 1, len(self_m), stats.discrepancy(self_m, 1)))

    checks = []
    xp = x.slice(1, len(sel_full))
    for k in ks:
        got = stats.discrepancy(sel_full, k)
        ref = stats.discrepancy(xp, k)
        checks.append(
            Check(f"kw-selected-k{k}", got <= 2 * ref, repr(got), f"<={repr(2 * ref)}")
        )
    self_disc = stats.discrepancy(self_full, 1)
    checks.append(Check("kw-self-selection", self_disc == 0.5, repr(self_disc), "==0.5"))
    return checks, {"curves.csv": _stat_csv(rows)}


def _run_prop1(manifest: ExperimentManifest):
    n = manifest.n
    y_src = source_from_descriptor(manifest.groups["y"])
    measure_desc = manifest.groups.get("measure")
    if measure_desc is None:
        measure = PointMass(y_src)
        manifest.groups["measure"] = measure.descriptor()
    else:
        measure = measure_from_descriptor(measure_desc)
    curve = coder.code_length_curve(measure, y_src, manifest.checkpoints)
    max_len = max(v for _, v in curve.points)
    checks = [
        Check(
            "prop1-computable-code-bound",
            max_len <= coder.LENGTH_SLACK_BITS,
            str(max_len),
            f"<={coder.LENGTH_SLACK_BITS}",
        )
    ]
    y = y_src.prefix(n)
    stream = coder.encode(measure, y)
    decoded = coder.decode(measure, stream.flushed_bits(), n)
    checks.append(
        Check("prop1-roundtrip", decoded == y, "recovered" if decoded == y else "mismatch", "exact")
    )
    return checks, {"code_length.csv": curve.to_csv()}


def _run_prop2(manifest: ExperimentManifest):
    n = manifest.n
    y_src = source_from_descriptor(manifest.groups["y"])
    measure = measure_from_descriptor(manifest.groups["measure"])
    y = y_src.prefix(n)

    stream = coder.CodeStream(measure)
    max_gap = 0
    prev_len = 0
    points = []
    want = set(manifest.checkpoints)
    for i, b in enumerate(y, 1):
        stream.feed(b)
        length = stream.length_with_pending
        max_gap = max(max_gap, length - prev_len)
        prev_len = length
        if i in want:
            points.append((i, length))
    curve = stats.StatCurve("L_n", points)

    rate = stream.length_with_pending / n
    z = stream.flushed_bits()
    balance = stats.empirical_entropy(z, 1)
    decoded = coder.decode(measure, z, n)
    y_entropy = stats.empirical_entropy(y, 1)

    checks = [
        Check("prop2-rate", 0.898 <= rate <= 0.938, repr(rate), "[0.898,0.938]"),
        Check("prop2-code-balance", balance >= 0.99, repr(balance), ">=0.99"),
        Check(
            "prop2-roundtrip",
            decoded == y,
            "recovered" if decoded == y else "mismatch",
            "exact",
        ),
        Check("prop2-bounded-gaps", max_gap <= 4, str(max_gap), "<=4"),
    ]
    rows = [
        ("entropy.y", 1, n, y_entropy),
        ("entropy.code", 1, len(z), balance),
    ]
    return checks, {
        "code_length.csv": curve.to_csv(),
        "curves.csv": _stat_csv(rows),
    }


def _run_rates(manifest: ExperimentManifest):
    n = manifest.n
    src = source_from_descriptor(manifest.groups["src"])
    ref = source_from_descriptor(manifest.groups["ref"])
    s = src.prefix(n)
    r = ref.prefix(n)

    rows = []
    for m in manifest.checkpoints:
        sm = s.slice(1, m)
        rm = r.slice(1, m)
        for label, seq in (("src", sm), ("ref", rm)):
            rows.append((f"entropy.{label}", 1, m, stats.empirical_entropy(seq, 1)))
            if m >= 8:
                rows.append((f"entropy.{label}", 8, m, stats.empirical_entropy(seq, 8)))
            rows.append((f"lz78_ratio.{label}", None, m, stats.lz78_ratio(seq)[1]))
            rows.append((f"density.{label}", None, m, float(stats.density(seq))))

    h8 = stats.empirical_entropy(s, 8)
    lz_src = stats.lz78_ratio(s)[1]
    lz_ref = stats.lz78_ratio(r)[1]

    measure_desc = manifest.groups.get("measure")
    if measure_desc is None:
        measure = PointMass(src)
        manifest.groups["measure"] = measure.descriptor()
    else:
        measure = measure_from_descriptor(measure_desc)
    curve = coder.code_length_curve(measure, src, manifest.checkpoints)
    max_len = max(v for _, v in curve.points)

    checks = [
        Check("rates-entropy8", h8 >= 0.95, repr(h8), ">=0.95"),
        Check(
            "rates-lz-separation",
            lz_src >= 2 * lz_ref,
            repr(lz_src),
            f">={repr(2 * lz_ref)}",
        ),
        Check(
            "rates-selfcode-bound",
            max_len <= coder.LENGTH_SLACK_BITS,
            str(max_len),
            f"<={coder.LENGTH_SLACK_BITS}",
        ),
    ]
    return checks, {
        "curves.csv": _stat_csv(rows),
        "code_length.csv": curve.to_csv(),
    }
