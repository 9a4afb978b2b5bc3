"""Command line front end: stats, build, encode, sweep.

termident stats  --corpus C [--env E]            corpus summary tables
termident build  --corpus C --env E --out D      build vocabularies + subword model
termident encode --corpus C --env E --out D      encode corpus against D's bundle
termident sweep  --corpus C --env E PARAM V...   vocabulary size / unknown rate per value

--corpus may repeat and may name directories; the expanded file list is
sorted before processing, so output never depends on argument order.  A
--config file supplies key=value defaults; explicit flags win.  Exit codes:
0 success, 1 usage error, 2 input error, 3 internal error.
"""

from __future__ import annotations

import argparse
import io
import sys
from collections import Counter
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional, Sequence

from . import encoding, paths, subword, vocab
from .enrichment import (
    CategorizedIdent,
    MalformedEnrichmentError,
    collect_idents,
    enrich,
)
from .environment import GlobalEnv, load_env
from .errors import ToolError
from .terms import IdentCategory, Term, parse_corpus

__all__ = ["RunConfig", "main"]

DEFAULT_THRESHOLD = 200
DEFAULT_MERGES = 1000

SWEEP_PARAMETERS = (
    "threshold-global",
    "threshold-local",
    "threshold-ctor",
    "threshold-path",
    "bpe-merges",
)

_CATEGORY_ORDER = (IdentCategory.GLOBAL, IdentCategory.LOCAL, IdentCategory.CONSTRUCTOR)


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message: str) -> None:  # argparse would exit(2); we exit 1
        raise UsageError(message)


@dataclass(frozen=True)
class RunConfig:
    corpus: tuple[Path, ...]
    env: Optional[Path] = None
    out: Optional[Path] = None
    threshold_global: int = DEFAULT_THRESHOLD
    threshold_local: int = DEFAULT_THRESHOLD
    threshold_ctor: int = DEFAULT_THRESHOLD
    threshold_path: int = DEFAULT_THRESHOLD
    merges: int = DEFAULT_MERGES
    unseen_char: str = subword.DROP
    mode: str = "train"

    def __post_init__(self) -> None:
        for name in ("threshold_global", "threshold_local", "threshold_ctor", "threshold_path"):
            if getattr(self, name) < 1:
                raise UsageError(f"{name.replace('_', '-')} must be >= 1")
        if self.merges < 0:
            raise UsageError("merges must be >= 0")
        if self.unseen_char not in (subword.DROP, subword.EMIT_UNKNOWN):
            raise UsageError(f"unseen-char must be drop or unknown, got {self.unseen_char!r}")
        if self.mode not in encoding.MODES:
            raise UsageError(f"mode must be train or test, got {self.mode!r}")


_CONFIG_KEYS = (
    "corpus",
    "env",
    "out",
    "threshold-global",
    "threshold-local",
    "threshold-ctor",
    "threshold-path",
    "merges",
    "unseen-char",
    "mode",
)


def _load_config_file(path: Path) -> dict[str, str]:
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise ToolError(f"cannot read config file: {exc}") from exc
    values: dict[str, str] = {}
    for line_no, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        key, sep, value = line.partition("=")
        key = key.strip().replace("_", "-")
        if not sep or key not in _CONFIG_KEYS:
            raise ToolError(f"config line {line_no}: expected <key>=<value> with a known key")
        values[key] = value.strip()
    return values


def _int_setting(name: str, text: str) -> int:
    try:
        return int(text)
    except ValueError:
        raise UsageError(f"{name} expects an integer, got {text!r}") from None


def _build_parser() -> _Parser:
    parser = _Parser(prog="termident", description=__doc__.splitlines()[0])
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--corpus", action="append", metavar="PATH",
                        help="term corpus file or directory; may repeat")
    common.add_argument("--env", metavar="PATH", help="environment file")
    common.add_argument("--out", metavar="DIR", help="bundle/output directory")
    common.add_argument("--config", metavar="PATH", help="key=value defaults file")
    common.add_argument("--threshold-global", type=int, metavar="N")
    common.add_argument("--threshold-local", type=int, metavar="N")
    common.add_argument("--threshold-ctor", type=int, metavar="N")
    common.add_argument("--threshold-path", type=int, metavar="N")
    common.add_argument("--merges", type=int, metavar="N")
    common.add_argument("--unseen-char", choices=(subword.DROP, subword.EMIT_UNKNOWN))
    common.add_argument("--mode", choices=encoding.MODES)
    sub = parser.add_subparsers(dest="command", metavar="COMMAND")
    sub.add_parser("stats", parents=[common], help="summarize a corpus")
    sub.add_parser("build", parents=[common], help="build the encoder bundle")
    sub.add_parser("encode", parents=[common], help="encode a corpus with a built bundle")
    sweep = sub.add_parser("sweep", parents=[common], help="sweep one parameter")
    sweep.add_argument("parameter", choices=SWEEP_PARAMETERS)
    sweep.add_argument("values", nargs="+", metavar="VALUE")
    return parser


def _merge_config(args: argparse.Namespace) -> RunConfig:
    file_values = _load_config_file(Path(args.config)) if args.config else {}

    def setting(flag: str, attr: str) -> Optional[str]:
        explicit = getattr(args, attr)
        if explicit is not None:
            return str(explicit)
        return file_values.get(flag)

    corpus_specs: list[str] = list(args.corpus or [])
    if not corpus_specs and "corpus" in file_values:
        corpus_specs = [file_values["corpus"]]
    if not corpus_specs:
        raise UsageError("--corpus is required")

    def int_setting(flag: str, attr: str, default: int) -> int:
        text = setting(flag, attr)
        return default if text is None else _int_setting(flag, text)

    env = setting("env", "env")
    out = setting("out", "out")
    return RunConfig(
        corpus=_corpus_files(corpus_specs),
        env=Path(env) if env else None,
        out=Path(out) if out else None,
        threshold_global=int_setting("threshold-global", "threshold_global", DEFAULT_THRESHOLD),
        threshold_local=int_setting("threshold-local", "threshold_local", DEFAULT_THRESHOLD),
        threshold_ctor=int_setting("threshold-ctor", "threshold_ctor", DEFAULT_THRESHOLD),
        threshold_path=int_setting("threshold-path", "threshold_path", DEFAULT_THRESHOLD),
        merges=int_setting("merges", "merges", DEFAULT_MERGES),
        unseen_char=setting("unseen-char", "unseen_char") or subword.DROP,
        mode=setting("mode", "mode") or "train",
    )


def _corpus_files(specs: Sequence[str]) -> tuple[Path, ...]:
    files: list[Path] = []
    for spec in specs:
        p = Path(spec)
        if p.is_dir():
            files.extend(
                child for child in p.iterdir()
                if child.is_file() and not child.name.startswith(".")
            )
        elif p.is_file():
            files.append(p)
        else:
            raise ToolError(f"corpus path not found: {p}")
    # canonical processing order, independent of how arguments were given
    return tuple(sorted(files, key=str))


def _read_terms(config: RunConfig) -> list[Term]:
    terms: list[Term] = []
    for file_path in config.corpus:
        try:
            text = file_path.read_text(encoding="utf-8")
        except (OSError, UnicodeDecodeError) as exc:
            raise ToolError(f"cannot read corpus file {file_path}: {exc}") from exc
        try:
            terms.extend(parse_corpus(text))
        except ToolError as exc:
            raise ToolError(f"{file_path}: {exc}") from exc
    return terms


def _load_environment(config: RunConfig) -> GlobalEnv:
    if config.env is None:
        return GlobalEnv()
    try:
        text = config.env.read_text(encoding="utf-8")
    except (OSError, UnicodeDecodeError) as exc:
        raise ToolError(f"cannot read environment file {config.env}: {exc}") from exc
    try:
        return load_env(text)
    except ToolError as exc:
        raise ToolError(f"{config.env}: {exc}") from exc


def _enriched_terms(config: RunConfig) -> list[Term]:
    env = _load_environment(config)
    out = []
    for term in _read_terms(config):
        try:
            out.append(enrich(term, env))
        except MalformedEnrichmentError:
            collect_idents(term)  # raises unless the term is fully enriched
            out.append(term)
    return out


def _all_idents(terms: Sequence[Term]) -> list[CategorizedIdent]:
    idents: list[CategorizedIdent] = []
    for term in terms:
        idents.extend(collect_idents(term))
    return idents


def cmd_stats(config: RunConfig) -> int:
    idents = _all_idents(_enriched_terms(config))
    by_category = {c: Counter() for c in _CATEGORY_ORDER}
    segments: Counter[str] = Counter()
    for ident in idents:
        by_category[ident.category][ident.name] += 1
        if ident.path is not None:
            segments.update(ident.path.segments)
    print("category\tdistinct\toccurrences")
    for category in _CATEGORY_ORDER:
        counts = by_category[category]
        print(f"{category.value}\t{len(counts)}\t{sum(counts.values())}")
    print(f"path-segment\t{len(segments)}\t{sum(segments.values())}")
    print()
    print("histogram\tcategory\toccurrences\tidentifiers")
    rows = [(c.value, by_category[c]) for c in _CATEGORY_ORDER] + [("path-segment", segments)]
    for label, counts in rows:
        spread = Counter(counts.values())
        for occurrences in sorted(spread):
            print(f"histogram\t{label}\t{occurrences}\t{spread[occurrences]}")
    return 0


def _require(config: RunConfig, **needed: object) -> None:
    for flag, value in needed.items():
        if value is None:
            raise UsageError(f"--{flag} is required for this command")


def cmd_build(config: RunConfig) -> int:
    _require(config, env=config.env, out=config.out)
    idents = _all_idents(_enriched_terms(config))
    global_vocab = vocab.build_vocab(idents, IdentCategory.GLOBAL, config.threshold_global)
    local_vocab = vocab.build_vocab(idents, IdentCategory.LOCAL, config.threshold_local)
    ctor_vocab = vocab.build_vocab(idents, IdentCategory.CONSTRUCTOR, config.threshold_ctor)
    path_vocab = paths.build_path_vocab(
        (i.path for i in idents if i.path is not None), config.threshold_path
    )
    # the subword model is trained on the global identifier corpus alone
    bpe = subword.train_bpe(
        (i.name for i in idents if i.category is IdentCategory.GLOBAL),
        config.merges,
        config.unseen_char,
    )
    encoding.save_bundle(config.out, global_vocab, local_vocab, ctor_vocab, path_vocab, bpe)
    for name, size in (
        ("global", len(global_vocab.entries)),
        ("local", len(local_vocab.entries)),
        ("constructor", len(ctor_vocab.entries)),
        ("path", len(path_vocab.entries)),
        ("subword", len(bpe.element_ids)),
    ):
        print(f"{name}\t{size}")
    return 0


def cmd_encode(config: RunConfig) -> int:
    _require(config, out=config.out)
    bundle = encoding.load_bundle(config.out, config.mode)
    terms = _enriched_terms(config)
    sink = io.StringIO()
    count = encoding.encode_corpus(terms, bundle, sink)
    out_file = config.out / encoding.ENCODED_FILE
    out_file.write_text(sink.getvalue(), encoding="utf-8", newline="\n")
    print(count)
    return 0


def cmd_sweep(config: RunConfig, parameter: str, values: list[int]) -> int:
    idents = _all_idents(_enriched_terms(config))
    print("parameter\tvalue\tvocab_size\tunknown_rate")
    for value in values:
        size, rate = _sweep_point(config, idents, parameter, value)
        print(f"{parameter}\t{value}\t{size}\t{rate:.6f}")
    return 0


def _sweep_point(
    config: RunConfig,
    idents: Sequence[CategorizedIdent],
    parameter: str,
    value: int,
) -> tuple[int, float]:
    if parameter == "bpe-merges":
        if value < 0:
            raise UsageError("bpe-merges values must be >= 0")
        names = [i.name for i in idents if i.category is IdentCategory.GLOBAL]
        model = subword.train_bpe(names, value, config.unseen_char)
        missed = sum(1 for name in names if any(ch not in model.base_chars for ch in name))
        return len(model.element_ids), _rate(missed, len(names))
    if value < 1:
        raise UsageError("threshold values must be >= 1")
    if parameter == "threshold-path":
        built = paths.build_path_vocab(
            (i.path for i in idents if i.path is not None), value
        )
    else:
        category = {
            "threshold-global": IdentCategory.GLOBAL,
            "threshold-local": IdentCategory.LOCAL,
            "threshold-ctor": IdentCategory.CONSTRUCTOR,
        }[parameter]
        built = vocab.build_vocab(idents, category, value)
    below = sum(built.below_threshold_counts.values())
    kept = sum(built.entry_counts.values())
    return len(built.entries), _rate(below, below + kept)


def _rate(part: int, whole: int) -> float:
    return part / whole if whole else 0.0


def _run(argv: Sequence[str]) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    if args.command is None:
        raise UsageError("a command is required (stats, build, encode, sweep)")
    config = _merge_config(args)
    if args.command == "stats":
        return cmd_stats(config)
    if args.command == "build":
        return cmd_build(config)
    if args.command == "encode":
        return cmd_encode(config)
    values = [_int_setting("sweep value", v) for v in args.values]
    return cmd_sweep(config, args.parameter, values)


def main(argv: Optional[Sequence[str]] = None) -> int:
    try:
        return _run(sys.argv[1:] if argv is None else list(argv))
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return 1
    except ToolError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except SystemExit as exc:  # argparse --help
        code = exc.code
        return code if isinstance(code, int) else 0
    except Exception as exc:  # noqa: BLE001 - surface bugs as exit 3, not tracebacks
        print(f"internal error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
