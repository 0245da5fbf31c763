"""Command-line interface.

Subcommands:

- train: fit one tree and write it as JSON.
- predict: classify a feature CSV with a stored tree.
- cv: grid-search (r, depth) by repeated k-fold CV; writes a JSON and a
  CSV report, accuracy/size figures, and a manifest.
- compare: Welch's t-test and Cohen's d for two (mean, std, n) summaries.
- opcount: exhaustive-search operation counts over an (r, n) grid.

Every command that writes files also writes manifest.json capturing the
command, its flags, the package version, and a digest of the input file,
so a run can be replayed exactly.  Flags that cannot change results (the
output directory and worker count) stay out of the manifest, which keeps
output bytes identical across worker counts and destinations.

Exit codes: 0 on success, 2 on invalid input or usage (with usage text),
1 on unexpected internal failures.
"""

import argparse
import csv
import hashlib
import json
import os
import sys
from pathlib import Path

import numpy as np

from . import __version__
from .complexity import DEFAULT_N_VALUES, DEFAULT_R_VALUES, format_count, op_count
from .criteria import Criterion
from .data import (
    DEFAULT_MISSING_TOKENS,
    Dataset,
    discretize_label,
    load_csv,
    mean_impute,
    remove_rows_missing,
)
from .errors import ConfigurationError, FormatError, ObliqueError, PreprocessingError
from .evaluation import CVConfig, cohens_d, grid_search, welch_t_test
from .figures import render_report_figures
from .induction import (
    Algorithm,
    InductionConfig,
    deserialize,
    fit,
    predict,
    serialize,
    tree_depth,
    tree_size,
)
from .errors import UndefinedEffectError

CANCER_FEATURES = [
    "Sample code number",
    "Clump Thickness",
    "Uniformity of Cell Size",
    "Uniformity of Cell Shape",
    "Marginal Adhesion",
    "Single Epithelial Cell Size",
    "Bare Nuclei",
    "Bland Chromatin",
    "Normal Nucleoli",
    "Mitoses",
]
CANCER_LABEL = "Class"
CANCER_ID_COLUMN = "Sample code number"
CANCER_FILTER_COLUMN = "Bare Nuclei"

ALGORITHM_NAMES = [a.value for a in Algorithm]
CRITERION_NAMES = [c.value for c in Criterion]


def _digest(path):
    h = hashlib.sha256()
    with open(path, "rb") as fh:
        for block in iter(lambda: fh.read(1 << 20), b""):
            h.update(block)
    return h.hexdigest()


def _out_dir(args):
    target = args.out_dir or os.environ.get("OBLIQUE_OUT_DIR") or "."
    path = Path(target)
    path.mkdir(parents=True, exist_ok=True)
    return path


def _write_manifest(out_dir, args, input_path):
    skip = {"command", "func", "out_dir", "workers"}
    flags = {}
    for key, value in sorted(vars(args).items()):
        if key in skip:
            continue
        flags[key] = value
    doc = {
        "command": args.command,
        "flags": flags,
        "seed": getattr(args, "seed", None),
        "version": __version__,
        "input_sha256": _digest(input_path) if input_path else None,
    }
    text = json.dumps(doc, indent=2, sort_keys=True) + "\n"
    (out_dir / "manifest.json").write_text(text, encoding="utf-8")


def _tokens(args):
    if getattr(args, "missing_token", None):
        return frozenset(args.missing_token)
    return DEFAULT_MISSING_TOKENS


def _looks_like_data(cells, tokens):
    for cell in cells:
        cell = cell.strip()
        if cell in tokens:
            continue
        try:
            float(cell)
        except ValueError:
            return False
    return True


def _drop_feature(dataset, name):
    idx = dataset.feature_names.index(name)
    keep = [j for j in range(dataset.m) if j != idx]
    return Dataset(
        dataset.features[:, keep],
        dataset.labels,
        dataset.class_names,
        [dataset.feature_names[j] for j in keep],
    )


def _load_cancer(path, tokens):
    """Load the breast tumor table in either canonical headerless form
    (id, nine features, class) or any headered CSV with a Class column;
    drops the id column and the rows missing the Bare Nuclei feature."""
    with open(path, "r", encoding="utf-8", newline="") as fh:
        first = fh.readline()
    cells = next(csv.reader([first])) if first.strip() else []
    if not cells:
        raise FormatError("%s: file is empty" % (path,))
    if _looks_like_data(cells, tokens):
        if len(cells) != len(CANCER_FEATURES) + 1:
            raise FormatError(
                "%s: headerless rows must have %d columns, found %d"
                % (path, len(CANCER_FEATURES) + 1, len(cells))
            )
        dataset = load_csv(
            path,
            label_column=CANCER_LABEL,
            missing_tokens=tokens,
            column_names=CANCER_FEATURES + [CANCER_LABEL],
        )
    else:
        label = CANCER_LABEL if CANCER_LABEL in [c.strip() for c in cells] else "last"
        dataset = load_csv(path, label_column=label, missing_tokens=tokens)
    if CANCER_ID_COLUMN in dataset.feature_names:
        dataset = _drop_feature(dataset, CANCER_ID_COLUMN)
    if CANCER_FILTER_COLUMN in dataset.feature_names:
        dataset = remove_rows_missing(dataset, CANCER_FILTER_COLUMN)
    return dataset


def _load_housing(path, tokens, threshold, label_column):
    """Load a housing-value table and discretize the numeric label at a
    threshold (same units as the label column) into classes one/two."""
    raw = load_csv(path, label_column=label_column, missing_tokens=tokens)
    try:
        values = np.array([float(raw.class_names[l]) for l in raw.labels])
    except ValueError:
        raise PreprocessingError(
            "housing preset needs a numeric label column to discretize"
        ) from None
    labels, class_names = discretize_label(values, threshold)
    return Dataset(raw.features, labels, class_names, raw.feature_names)


def _load_dataset(args, algorithm):
    tokens = _tokens(args)
    preset = getattr(args, "preset", None)
    if preset == "cancer":
        dataset = _load_cancer(args.data, tokens)
    elif preset == "housing":
        dataset = _load_housing(args.data, tokens, args.threshold, args.label_column)
    else:
        dataset = load_csv(args.data, label_column=args.label_column, missing_tokens=tokens)
    if (
        algorithm is not None
        and algorithm is not Algorithm.CART_ELC
        and np.isnan(dataset.features).any()
    ):
        dataset = mean_impute(dataset)
    return dataset


def _add_data_flags(sub, with_preset=True):
    sub.add_argument("--data", required=True, help="input CSV file")
    sub.add_argument(
        "--label-column",
        default="last",
        help="label column name, or 'last' for the final column (default: last)",
    )
    sub.add_argument(
        "--missing-token",
        action="append",
        help="treat this cell text as missing (repeatable; default: '', 'NA', 'NaN', '?')",
    )
    if with_preset:
        sub.add_argument(
            "--preset",
            choices=["cancer", "housing"],
            help="apply a named dataset preparation recipe",
        )
        sub.add_argument(
            "--threshold",
            type=float,
            default=21000.0,
            help="housing preset: label threshold separating the classes "
            "(label units; default: 21000)",
        )


def _add_model_flags(sub, algorithm_required):
    if algorithm_required:
        sub.add_argument("--algorithm", required=True, choices=ALGORITHM_NAMES)
    else:
        sub.add_argument("--algorithm", default="cart-elc", choices=ALGORITHM_NAMES)
    sub.add_argument("--criterion", default="gini", choices=CRITERION_NAMES)


def _build_parser():
    parser = argparse.ArgumentParser(
        prog="oblique",
        description="Decision trees with oblique splits found by exhaustive "
        "search over hyperplanes through sample subsets.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    train = sub.add_parser("train", help="fit a tree and write it as JSON")
    _add_data_flags(train)
    _add_model_flags(train, algorithm_required=True)
    train.add_argument("--r", type=int, default=1, help="hyperplane sample count (default: 1)")
    train.add_argument("--max-depth", type=int, default=5, help="depth budget (default: 5)")
    train.add_argument("--out-dir", help="output directory (default: $OBLIQUE_OUT_DIR or .)")
    train.set_defaults(func=_cmd_train)

    pred = sub.add_parser("predict", help="classify a feature CSV with a stored tree")
    pred.add_argument("--tree", required=True, help="tree JSON written by train")
    pred.add_argument("--data", required=True, help="feature CSV (no label column by default)")
    pred.add_argument(
        "--label-column",
        default="none",
        help="column to drop before prediction, or 'none' (default)",
    )
    pred.add_argument("--missing-token", action="append", help="treat this cell text as missing")
    pred.add_argument("--out-dir", help="output directory (default: $OBLIQUE_OUT_DIR or .)")
    pred.set_defaults(func=_cmd_predict)

    cv = sub.add_parser("cv", help="grid-search (r, depth) with repeated k-fold CV")
    _add_data_flags(cv)
    _add_model_flags(cv, algorithm_required=False)
    cv.add_argument("--folds", type=int, default=5)
    cv.add_argument("--repeats", type=int, default=10)
    cv.add_argument("--seed", type=int, default=0)
    cv.add_argument("--grid-r", type=int, default=2, help="largest r to try (default: 2)")
    cv.add_argument("--grid-depth", type=int, default=5, help="largest depth to try (default: 5)")
    cv.add_argument("--workers", type=int, default=1, help="worker processes (default: 1)")
    cv.add_argument("--out-dir", help="output directory (default: $OBLIQUE_OUT_DIR or .)")
    cv.set_defaults(func=_cmd_cv)

    cmp_ = sub.add_parser(
        "compare", help="Welch's t-test and Cohen's d for two result summaries"
    )
    side_a = cmp_.add_mutually_exclusive_group(required=True)
    side_a.add_argument("--a", help="first summary as 'mean,std,n'")
    side_a.add_argument("--report-a", help="cv report.json; uses its selected cell")
    side_b = cmp_.add_mutually_exclusive_group(required=True)
    side_b.add_argument("--b", help="second summary as 'mean,std,n'")
    side_b.add_argument("--report-b", help="cv report.json; uses its selected cell")
    cmp_.set_defaults(func=_cmd_compare)

    op = sub.add_parser("opcount", help="operation counts for the exhaustive search")
    op.add_argument(
        "--n-list",
        help="comma-separated sample counts (default: %s)"
        % ",".join(str(n) for n in DEFAULT_N_VALUES),
    )
    op.add_argument(
        "--r-list",
        help="comma-separated r values (default: 1..10)",
    )
    op.add_argument("--format", choices=["text", "csv"], default="text")
    op.set_defaults(func=_cmd_opcount)

    return parser


def _cmd_train(args):
    algorithm = Algorithm.from_name(args.algorithm)
    dataset = _load_dataset(args, algorithm)
    config = InductionConfig(args.criterion, args.r, args.max_depth, algorithm)
    tree = fit(config, dataset.features, dataset.labels, dataset.class_names)
    correct = sum(
        1
        for i in range(dataset.n)
        if predict(tree, dataset.features[i]) == dataset.labels[i]
    )
    out_dir = _out_dir(args)
    tree_path = out_dir / "tree.json"
    tree_path.write_bytes(serialize(tree))
    _write_manifest(out_dir, args, args.data)
    print(
        "wrote %s (leaves=%d, depth=%d, training accuracy=%.4f)"
        % (tree_path, tree_size(tree), tree_depth(tree), correct / dataset.n)
    )
    return 0


def _cmd_predict(args):
    tree = deserialize(Path(args.tree).read_bytes())
    label = None if args.label_column in (None, "", "none") else args.label_column
    tokens = _tokens(args)
    dataset = load_csv(args.data, label_column=label, missing_tokens=tokens)
    if dataset.m != tree.m:
        raise ConfigurationError(
            "data has m=%d features but the tree expects m=%d" % (dataset.m, tree.m)
        )
    out_dir = _out_dir(args)
    out_path = out_dir / "predictions.csv"
    lines = ["prediction"]
    for i in range(dataset.n):
        lines.append(tree.class_names[predict(tree, dataset.features[i])])
    out_path.write_text("\n".join(lines) + "\n", encoding="utf-8")
    _write_manifest(out_dir, args, args.data)
    print("wrote %s (%d rows)" % (out_path, dataset.n))
    return 0


def _cmd_cv(args):
    algorithm = Algorithm.from_name(args.algorithm)
    dataset = _load_dataset(args, algorithm)
    cv = CVConfig(
        folds=args.folds,
        repeats=args.repeats,
        seed=args.seed,
        grid_r_max=args.grid_r,
        grid_depth_max=args.grid_depth,
    )
    report = grid_search(dataset, cv, args.criterion, algorithm, workers=args.workers)
    out_dir = _out_dir(args)
    json_path = out_dir / "report.json"
    json_path.write_text(
        json.dumps(report.to_json_dict(), indent=2, sort_keys=True) + "\n",
        encoding="utf-8",
    )
    csv_path = out_dir / "report.csv"
    csv_path.write_text(report.to_csv_text(), encoding="utf-8")
    figure_paths = render_report_figures(report, out_dir)
    _write_manifest(out_dir, args, args.data)
    cell = report.selected_cell()
    print(
        "wrote %s, %s, %s (selected r=%d depth=%d: accuracy %.4f +- %.4f, size %.1f)"
        % (
            json_path,
            csv_path,
            ", ".join(str(p) for p in figure_paths),
            cell.r,
            cell.depth,
            cell.mean_accuracy,
            cell.std_accuracy,
            cell.mean_tree_size,
        )
    )
    return 0


def _parse_triple(text):
    parts = [p.strip() for p in text.split(",")]
    if len(parts) != 3:
        raise ConfigurationError("summary must be 'mean,std,n'; got %r" % (text,))
    try:
        mean = float(parts[0])
        std = float(parts[1])
        n = int(parts[2])
    except ValueError:
        raise ConfigurationError("summary must be 'mean,std,n'; got %r" % (text,)) from None
    return mean, std, n


def _triple_from_report(path):
    try:
        doc = json.loads(Path(path).read_text(encoding="utf-8"))
    except ValueError as exc:
        raise FormatError("%s: invalid JSON: %s" % (path, exc)) from None
    try:
        selected = doc["selected"]
        repeats = doc["repeats"]
        for cell in doc["cells"]:
            if cell["r"] == selected["r"] and cell["depth"] == selected["depth"]:
                return float(cell["mean_acc"]), float(cell["std_acc"]), int(repeats)
    except (KeyError, TypeError):
        raise FormatError("%s: not a cv report" % (path,)) from None
    raise FormatError("%s: selected cell missing from report" % (path,))


def _cmd_compare(args):
    a = _parse_triple(args.a) if args.a else _triple_from_report(args.report_a)
    b = _parse_triple(args.b) if args.b else _triple_from_report(args.report_b)
    t, df, p = welch_t_test(a[0], a[1], a[2], b[0], b[1], b[2])
    try:
        d = cohens_d(a[0], a[1], b[0], b[1])
    except UndefinedEffectError:
        d = None
    print(
        json.dumps(
            {"t": t, "df": df, "p_value": p, "cohens_d": d}, sort_keys=True
        )
    )
    return 0


def _parse_int_list(text, what):
    values = []
    for part in text.split(","):
        part = part.strip()
        if not part:
            continue
        try:
            values.append(int(part))
        except ValueError:
            raise ConfigurationError("%s must be integers; got %r" % (what, part)) from None
    if not values:
        raise ConfigurationError("%s is empty" % (what,))
    return values


def _cmd_opcount(args):
    n_values = (
        _parse_int_list(args.n_list, "--n-list") if args.n_list else list(DEFAULT_N_VALUES)
    )
    r_values = (
        _parse_int_list(args.r_list, "--r-list") if args.r_list else list(DEFAULT_R_VALUES)
    )
    grid = []
    for r in r_values:
        row = []
        for n in n_values:
            try:
                row.append(format_count(op_count(n, r, r)))
            except ObliqueError:
                row.append("n/a")
        grid.append(row)
    header = ["r"] + ["n=%d" % n for n in n_values]
    rows = [[str(r)] + row for r, row in zip(r_values, grid)]
    if args.format == "csv":
        print(",".join(header))
        for row in rows:
            print(",".join(row))
        return 0
    widths = [max(len(row[i]) for row in [header] + rows) for i in range(len(header))]
    for row in [header] + rows:
        print("  ".join(cell.rjust(widths[i]) for i, cell in enumerate(row)))
    return 0


def main(argv=None):
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ObliqueError as exc:
        parser.print_usage(sys.stderr)
        print("error: %s" % (exc,), file=sys.stderr)
        return 2
    except OSError as exc:
        parser.print_usage(sys.stderr)
        print("error: %s" % (exc,), file=sys.stderr)
        return 2
    except Exception as exc:  # pragma: no cover - defensive
        print("unexpected error: %s" % (exc,), file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
