"""Command line interface (installed as ``vocab-relate``).

Commands::

    convert-mesh  turn ASCII MeSH descriptor/qualifier files into a vocabulary
    ic            compute and save the information-content table
    graph         build and save a term graph (g1 or dic)
    simmatrix     materialize a sparse term similarity matrix
    relate        score document pairs with one configured method
    bench         run the benchmark protocols for one configuration
    sweep         benchmark a grid of configurations
    stats         summarize or compare saved score files

Every command that writes a result file also writes ``<out>.manifest.json``
with the parameters, SHA-256 digests of the inputs and outputs, and timing.
Result files themselves contain no timestamps, so a rerun with identical
inputs is byte-identical.  ``--cache DIR`` keeps IC tables and similarity
matrices keyed by input digests and parameters for reuse across commands.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import logging
import sys
import time
from pathlib import Path
from typing import Sequence

from . import __version__
from .benchmark import (
    ArtifactSet,
    build_pairs,
    ccc,
    cliffs_delta,
    filter_topics,
    ingest_judgements,
    parameter_sweep,
    run_benchmark,
    skewness,
    write_distributions,
    write_results_csv,
)
from .errors import ConfigError, CycleError, VocabrelError
from .infocontent import FreqTable, load_frequencies, load_ic_table, save_ic_table
from .mesh import convert_mesh
from .model import (
    Corpus,
    Vocabulary,
    parse_corpus,
    parse_vocabulary,
    read_pairs,
    validate,
)
from .relatedness import (
    METHODS,
    MethodConfig,
    pairwise_scores,
    read_scores,
    write_scores,
)
from .termgraph import SimMatrix, save_graph

log = logging.getLogger("vocabrel")

_BOOL_WORDS = {"true": True, "false": False, "1": True, "0": False, "yes": True, "no": False}


def _sha256(path: str | Path) -> str:
    h = hashlib.sha256()
    with open(path, "rb") as fh:
        for block in iter(lambda: fh.read(1 << 20), b""):
            h.update(block)
    return h.hexdigest()


def _digest(*parts: str) -> str:
    return hashlib.sha256("\x1f".join(parts).encode()).hexdigest()


def _write_manifest(
    command: str,
    args: argparse.Namespace,
    inputs: Sequence[str | None],
    outputs: Sequence[str | None],
    started: float,
) -> None:
    parameters = {
        k: v for k, v in vars(args).items() if k not in ("func", "command") and not callable(v)
    }
    written = [p for p in outputs if p]
    manifest = {
        "command": command,
        "version": __version__,
        "parameters": parameters,
        "inputs": {p: _sha256(p) for p in sorted({i for i in inputs if i})},
        "outputs": {p: _sha256(p) for p in written},
        "elapsed_seconds": round(time.perf_counter() - started, 3),
    }
    path = Path(f"{written[0]}.manifest.json")
    path.write_text(json.dumps(manifest, indent=2, sort_keys=True) + "\n", encoding="utf-8")


class ArtifactCache:
    """Digest-keyed store of IC tables and similarity matrices."""

    def __init__(self, root: str | Path):
        self.root = Path(root)
        self.root.mkdir(parents=True, exist_ok=True)

    def path(self, kind: str, key: str) -> Path:
        return self.root / f"{kind}-{key[:24]}.tsv"


class Workspace(ArtifactSet):
    """ArtifactSet that checks the file cache before building anything."""

    def __init__(
        self,
        vocab: Vocabulary,
        corpus: Corpus | None,
        freq: FreqTable | None,
        eps: float,
        cache_dir: str | None,
        tokens: dict[str, str],
    ):
        super().__init__(vocab=vocab, corpus=corpus, freq=freq, eps=eps)
        self._cache = ArtifactCache(cache_dir) if cache_dir else None
        self._tokens = tokens

    def ic_table(self):
        if self._ic is not None:
            return self._ic
        if self._cache is not None:
            key = _digest("ic", self._tokens["vocab"], self._tokens["freqsrc"])
            path = self._cache.path("ic", key)
            if path.exists():
                log.info("cache hit: IC table %s", path.name)
                self._ic = load_ic_table(path)
                return self._ic
            table = super().ic_table()
            save_ic_table(table, path)
            return table
        return super().ic_table()

    def matrix(self, kind: str, lam: float) -> SimMatrix:
        mkey = (kind, lam, self.eps)
        cached = self._matrices.get(mkey)
        if cached is not None:
            return cached
        if self._cache is not None:
            parts = [
                "simmatrix", kind, f"{lam:.17g}", f"{self.eps:.17g}",
                self._tokens["vocab"], self._tokens["restrict"],
            ]
            if kind == "dic":
                parts.append(self._tokens["freqsrc"])
            path = self._cache.path("simmatrix", _digest(*parts))
            if path.exists():
                matrix = SimMatrix.load(path)
                # digest collisions are hypothetical, header mismatches are not
                if (matrix.kind, matrix.lam, matrix.eps) == (kind, lam, self.eps):
                    log.info("cache hit: similarity matrix %s", path.name)
                    self._matrices[mkey] = matrix
                    return matrix
                log.warning("cached matrix %s does not match config, rebuilding", path.name)
            matrix = super().matrix(kind, lam)
            matrix.save(path)
            return matrix
        return super().matrix(kind, lam)


def _workspace(args: argparse.Namespace) -> Workspace:
    vocab = parse_vocabulary(args.vocab)
    report = validate(vocab)
    if not report.ok:
        raise CycleError(
            f"vocabulary has {len(report.cycles)} parent cycle(s), e.g. {report.cycles[0]}"
        )
    tokens = {"vocab": _sha256(args.vocab)}
    corpus = None
    corpus_path = getattr(args, "corpus", None)
    if corpus_path:
        stats: dict = {}
        corpus = parse_corpus(corpus_path, vocab, strict=args.strict, stats=stats)
        if stats.get("skipped_terms") or stats.get("skipped_qualifiers"):
            log.warning(
                "lenient parse skipped %d unknown terms and %d unknown qualifiers",
                stats["skipped_terms"], stats["skipped_qualifiers"],
            )
        empties = stats.get("empty_documents") or []
        if empties:
            log.warning("%d documents have no annotations, e.g. %s", len(empties), empties[0])
        tokens["corpus"] = _sha256(corpus_path)
    freq = None
    if getattr(args, "freq_table", None):
        freq = load_frequencies(args.freq_table, vocab, strict=args.strict)
        tokens["freqsrc"] = "freqfile:" + _sha256(args.freq_table)
    elif corpus is not None:
        tokens["freqsrc"] = f"corpus:{tokens['corpus']}:strict={int(args.strict)}"
    else:
        tokens["freqsrc"] = "-"
    tokens["restrict"] = tokens.get("corpus", "-")
    n_docs = len(corpus) if corpus is not None else 0
    log.info(
        "loaded %d terms, %d edges, %d qualifiers; %d documents",
        report.n_terms, report.n_edges, report.n_qualifiers, n_docs,
    )
    return Workspace(
        vocab=vocab,
        corpus=corpus,
        freq=freq,
        eps=getattr(args, "eps", 1e-4),
        cache_dir=getattr(args, "cache", None),
        tokens=tokens,
    )


def _config_from_args(args: argparse.Namespace) -> MethodConfig:
    method = args.method
    raw = bool(getattr(args, "raw_distance", False))
    if method == "mts-rawdist":
        method, raw = "mts", True
    config = MethodConfig(
        method=method,
        vector=args.vector,
        qualifiers=args.qualifiers,
        graph=args.graph,
        w=args.w,
        lam=args.lam,
        eps=args.eps,
        slim=args.slim,
        raw_distance=raw,
    )
    config.validate()
    return config


def _filtered_judgements(args: argparse.Namespace):
    judgements = ingest_judgements(args.judgements)
    filtered, dropped = filter_topics(judgements, min_frac=args.min_frac)
    if dropped:
        log.info("dropped %d low-signal topic(s): %s", len(dropped), ", ".join(dropped))
    if not filtered:
        raise VocabrelError("no topics survive the relevance-fraction filter")
    return filtered


def cmd_convert_mesh(args: argparse.Namespace) -> None:
    started = time.perf_counter()
    stats = convert_mesh(args.descriptors, args.out, qualifier_source=args.qualifiers)
    log.info(
        "converted %d descriptors (%d edges) and %d qualifiers -> %s",
        stats["terms"], stats["edges"], stats["qualifiers"], args.out,
    )
    _write_manifest(
        "convert-mesh", args, [args.descriptors, args.qualifiers], [args.out], started
    )


def cmd_ic(args: argparse.Namespace) -> None:
    started = time.perf_counter()
    ws = _workspace(args)
    table = ws.ic_table()
    save_ic_table(table, args.out)
    if table.zero_aggregate:
        log.warning(
            "%d terms have zero aggregate count and receive the maximum IC",
            len(table.zero_aggregate),
        )
    log.info("wrote IC for %d terms (denominator %d) -> %s", len(table.ic), table.denominator, args.out)
    _write_manifest("ic", args, [args.vocab, getattr(args, "corpus", None), args.freq_table], [args.out], started)


def cmd_graph(args: argparse.Namespace) -> None:
    started = time.perf_counter()
    ws = _workspace(args)
    graph = ws.graph(args.graph)
    save_graph(graph, args.out)
    log.info("wrote %s graph: %d nodes, %d edges -> %s", graph.kind, len(graph.adj), graph.edge_count(), args.out)
    _write_manifest("graph", args, [args.vocab, getattr(args, "corpus", None), args.freq_table], [args.out], started)


def cmd_simmatrix(args: argparse.Namespace) -> None:
    started = time.perf_counter()
    if args.lam is None or args.lam <= 0:
        raise ConfigError(f"simmatrix needs --lambda > 0, got {args.lam}")
    ws = _workspace(args)
    matrix = ws.matrix(args.graph, args.lam)
    matrix.save(args.out)
    log.info(
        "wrote similarity matrix (%s, lambda=%g, eps=%g): %d stored entries -> %s",
        matrix.kind, matrix.lam, matrix.eps, len(matrix), args.out,
    )
    _write_manifest("simmatrix", args, [args.vocab, getattr(args, "corpus", None), args.freq_table], [args.out], started)


def cmd_relate(args: argparse.Namespace) -> None:
    started = time.perf_counter()
    config = _config_from_args(args)
    ws = _workspace(args)
    assert ws.corpus is not None
    scorer = ws.scorer(config)
    if args.pairs:
        pairs = read_pairs(args.pairs)
    else:
        ids = sorted(ws.corpus.documents)
        pairs = [(a, b) for i, a in enumerate(ids) for b in ids[i + 1 :]]
    errors: list = []
    results = pairwise_scores(ws.corpus, pairs, scorer, errors=errors, workers=args.workers)
    n = write_scores(args.out, config.tag(), results)
    for id_a, id_b, msg in errors[:10]:
        log.warning("pair (%s, %s) skipped: %s", id_a, id_b, msg)
    if len(errors) > 10:
        log.warning("... and %d more skipped pairs", len(errors) - 10)
    log.info("scored %d of %d pairs (%d errors) -> %s", n, len(pairs), len(errors), args.out)
    _write_manifest(
        "relate", args,
        [args.vocab, args.corpus, args.freq_table, args.pairs],
        [args.out], started,
    )


def cmd_bench(args: argparse.Namespace) -> None:
    started = time.perf_counter()
    config = _config_from_args(args)
    ws = _workspace(args)
    assert ws.corpus is not None
    filtered = _filtered_judgements(args)
    scorer = ws.scorer(config)
    dump_lists: tuple[list, list] | None = ([], []) if args.dump_dist else None
    result = run_benchmark(
        ws.corpus, filtered, scorer,
        iterations=args.iterations, sample_size=args.sample_size,
        seed=args.seed, workers=args.workers, dump=dump_lists,
    )
    tag = (
        f"{config.tag()} seed={args.seed} iterations={args.iterations} "
        f"sample_size={args.sample_size} min_frac={args.min_frac:g}"
    )
    write_results_csv([result], args.out)
    if dump_lists is not None:
        write_distributions(dump_lists[0], dump_lists[1], args.dump_dist, header_tag=tag)
    log.info(
        "delta=%.4f phi=%.4f over %d same / %d separate pairs (%d errors, %d classifications) -> %s",
        result.delta, result.phi, result.n_same, result.n_separate,
        result.n_errors, result.n_classifications, args.out,
    )
    _write_manifest(
        "bench", args,
        [args.vocab, args.corpus, args.judgements, args.freq_table],
        [args.out, args.dump_dist], started,
    )


def _parse_listflag(raw: str, conv, flag: str) -> list:
    values = []
    for piece in raw.split(","):
        piece = piece.strip()
        if not piece:
            continue
        try:
            values.append(conv(piece))
        except (ValueError, KeyError):
            raise ConfigError(f"bad value {piece!r} in {flag}") from None
    if not values:
        raise ConfigError(f"{flag} must list at least one value")
    return values


def _bool_word(raw: str) -> bool:
    return _BOOL_WORDS[raw.lower()]


def reference_configs(eps: float) -> list[MethodConfig]:
    """The nine headline configurations (best w per method family)."""
    return [
        MethodConfig("salton", vector="binary", w=1),
        MethodConfig("salton", vector="binary", w=3),
        MethodConfig("salton", vector="ic", w=2),
        MethodConfig("soft", vector="binary", graph="g1", w=4, lam=1.0, eps=eps),
        MethodConfig("soft", vector="binary", graph="dic", w=4, lam=1.0, eps=eps),
        MethodConfig("soft", vector="ic", graph="g1", w=3, lam=1.0, eps=eps),
        MethodConfig("soft", vector="ic", graph="dic", w=3, lam=1.0, eps=eps),
        MethodConfig("mts", graph="g1", w=16, lam=1.0, eps=eps),
        MethodConfig("mts", graph="dic", w=16, lam=2.0, eps=eps),
    ]


def sweep_configs(args: argparse.Namespace) -> list[MethodConfig]:
    """Cross product of the applicable dimension lists, per method."""
    if args.preset == "reference9":
        return reference_configs(args.eps)
    methods = _parse_listflag(args.methods, str, "--methods")
    vectors = _parse_listflag(args.vectors, str, "--vectors")
    graphs = _parse_listflag(args.graphs, str, "--graphs")
    w_list = _parse_listflag(args.w_list, int, "--w-list")
    lam_list = _parse_listflag(args.lambda_list, float, "--lambda-list")
    slim_list = _parse_listflag(args.slim_list, _bool_word, "--slim-list")
    qual_list = _parse_listflag(args.qualifiers_list, _bool_word, "--qualifiers-list")
    configs: list[MethodConfig] = []
    for name in methods:
        raw = name == "mts-rawdist"
        base = "mts" if raw else name
        if base not in METHODS:
            raise ConfigError(f"unknown method {name!r} in --methods")
        for w in w_list:
            if base == "salton":
                for vec in vectors:
                    for quals in qual_list:
                        configs.append(
                            MethodConfig("salton", vector=vec, qualifiers=quals, w=w)
                        )
            elif base == "soft":
                for vec in vectors:
                    for kind in graphs:
                        for lam in lam_list:
                            configs.append(
                                MethodConfig(
                                    "soft", vector=vec, graph=kind, w=w, lam=lam, eps=args.eps
                                )
                            )
            else:
                for kind in graphs:
                    for lam in lam_list:
                        for slim in slim_list:
                            configs.append(
                                MethodConfig(
                                    "mts", graph=kind, w=w, lam=lam, eps=args.eps,
                                    slim=slim, raw_distance=raw,
                                )
                            )
    unique: list[MethodConfig] = []
    seen: set[MethodConfig] = set()
    for config in configs:
        config.validate()
        if config not in seen:
            seen.add(config)
            unique.append(config)
    return unique


def cmd_sweep(args: argparse.Namespace) -> None:
    started = time.perf_counter()
    configs = sweep_configs(args)
    ws = _workspace(args)
    filtered = _filtered_judgements(args)
    log.info("sweeping %d configuration(s)", len(configs))
    results = parameter_sweep(
        configs, ws, filtered,
        iterations=args.iterations, sample_size=args.sample_size,
        seed=args.seed, workers=args.workers,
    )
    write_results_csv(results, args.out)
    failed = sum(1 for r in results if r.note)
    log.info("wrote %d rows (%d failed cells) -> %s", len(results), failed, args.out)
    _write_manifest(
        "sweep", args,
        [args.vocab, args.corpus, args.judgements, args.freq_table],
        [args.out], started,
    )


def cmd_stats(args: argparse.Namespace) -> None:
    started = time.perf_counter()
    header_a, rows_a = read_scores(args.scores)
    values_a = [v for _, _, v in rows_a]
    out_lines: list[tuple[str, str]] = [
        ("scores_a", args.scores),
        ("n_a", str(len(rows_a))),
    ]
    if values_a:
        out_lines.append(("mean_a", f"{sum(values_a) / len(values_a):.17g}"))
    if args.scores_b:
        header_b, rows_b = read_scores(args.scores_b)
        key = lambda a, b: (a, b) if a <= b else (b, a)
        map_a = {key(a, b): v for a, b, v in rows_a}
        map_b = {key(a, b): v for a, b, v in rows_b}
        common = sorted(map_a.keys() & map_b.keys())
        out_lines += [
            ("scores_b", args.scores_b),
            ("n_b", str(len(rows_b))),
            ("n_common", str(len(common))),
            ("n_only_a", str(len(map_a) - len(common))),
            ("n_only_b", str(len(map_b) - len(common))),
        ]
        if len(common) >= 2:
            aligned_a = [map_a[k] for k in common]
            aligned_b = [map_b[k] for k in common]
            try:
                out_lines.append(("ccc", f"{ccc(aligned_a, aligned_b):.17g}"))
            except ValueError as exc:
                out_lines.append(("ccc_error", str(exc)))
    dump_pops: tuple[list, list] | None = None
    if args.judgements:
        filtered = _filtered_judgements(args)
        pairs = build_pairs(filtered)
        key = lambda a, b: (a, b) if a <= b else (b, a)
        lookup = {key(a, b): v for a, b, v in rows_a}
        missing = 0
        same: list[float] = []
        separate: list[float] = []
        for population, triples in (
            (same, pairs.same_topic), (separate, pairs.separate_topic)
        ):
            for _, a, b in triples:
                v = lookup.get(key(a, b))
                if v is None:
                    missing += 1
                else:
                    population.append(v)
        out_lines += [
            ("n_same", str(len(same))),
            ("n_separate", str(len(separate))),
            ("n_missing_pairs", str(missing)),
        ]
        if same and separate:
            out_lines.append(("delta", f"{cliffs_delta(same, separate):.17g}"))
            out_lines.append(("mean_same", f"{sum(same) / len(same):.17g}"))
            out_lines.append(("mean_separate", f"{sum(separate) / len(separate):.17g}"))
            for label, pop in (("skew_same", same), ("skew_separate", separate)):
                try:
                    out_lines.append((label, f"{skewness(pop):.17g}"))
                except ValueError:
                    out_lines.append((label, "nan"))
        dump_pops = (same, separate)
    text = f"#stats source={args.scores} {header_a}\n".rstrip() + "\n"
    text += "".join(f"{k}\t{v}\n" for k, v in out_lines)
    if args.out:
        Path(args.out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)
    if args.dump_dist:
        if dump_pops is None:
            raise ConfigError("--dump-dist needs --judgements to split the populations")
        write_distributions(dump_pops[0], dump_pops[1], args.dump_dist, header_tag=header_a)
    if args.out:
        _write_manifest(
            "stats", args,
            [args.scores, args.scores_b, args.judgements],
            [args.out, args.dump_dist], started,
        )


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="vocab-relate",
        description="Relatedness of documents indexed with a hierarchical controlled vocabulary.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True, metavar="command")

    p_vocab = argparse.ArgumentParser(add_help=False)
    p_vocab.add_argument("--vocab", required=True, help="vocabulary file (JSONL)")
    p_vocab.add_argument(
        "--strict", action=argparse.BooleanOptionalAction, default=True,
        help="fail on unknown term/qualifier ids (default: strict)",
    )
    p_vocab.add_argument("--cache", help="directory for reusable IC and matrix artifacts")

    p_corpus = argparse.ArgumentParser(add_help=False)
    p_corpus.add_argument("--corpus", required=True, help="corpus file (JSONL)")

    p_corpus_opt = argparse.ArgumentParser(add_help=False)
    p_corpus_opt.add_argument("--corpus", help="corpus file (JSONL)")

    p_freq = argparse.ArgumentParser(add_help=False)
    p_freq.add_argument(
        "--freq-table",
        help="external term<TAB>count frequency table (overrides corpus frequencies)",
    )

    p_out = argparse.ArgumentParser(add_help=False)
    p_out.add_argument("--out", required=True, help="output file")

    p_workers = argparse.ArgumentParser(add_help=False)
    p_workers.add_argument("--workers", type=int, default=1, help="worker threads (default 1)")

    p_method = argparse.ArgumentParser(add_help=False)
    p_method.add_argument(
        "--method", required=True, choices=["salton", "soft", "mts", "mts-rawdist"],
        help="relatedness method",
    )
    p_method.add_argument(
        "--vector", choices=["binary", "ic"], default="binary",
        help="vector weighting for salton/soft (default binary)",
    )
    p_method.add_argument(
        "--qualifiers", action=argparse.BooleanOptionalAction, default=False,
        help="augment vectors with (term, qualifier) dimensions (salton only)",
    )
    p_method.add_argument("--graph", choices=["g1", "dic"], help="term graph for soft/mts")
    p_method.add_argument("--w", type=int, default=1, help="major term weight (default 1)")
    p_method.add_argument(
        "--lambda", dest="lam", type=float, default=None,
        help="distance decay for soft/mts similarities",
    )
    p_method.add_argument(
        "--eps", type=float, default=1e-4,
        help="similarity floor for matrix storage (default 1e-4)",
    )
    p_method.add_argument(
        "--slim", action=argparse.BooleanOptionalAction, default=False,
        help="mts: drop minor terms before matching",
    )
    p_method.add_argument(
        "--raw-distance", action=argparse.BooleanOptionalAction, default=False,
        help="mts: aggregate negated term distances instead of similarities",
    )

    p_eval = argparse.ArgumentParser(add_help=False)
    p_eval.add_argument("--judgements", required=True, help="topic<TAB>doc<TAB>level file")
    p_eval.add_argument("--seed", type=int, default=0, help="sampling seed (default 0)")
    p_eval.add_argument(
        "--iterations", type=int, default=50,
        help="classification iterations per topic (default 50)",
    )
    p_eval.add_argument(
        "--sample-size", type=int, default=10,
        help="seed documents per class and iteration (default 10)",
    )
    p_eval.add_argument(
        "--min-frac", type=float, default=0.10,
        help="minimum relevant fraction for a topic to enter (default 0.10)",
    )

    p = sub.add_parser(
        "convert-mesh", help="convert ASCII MeSH files to the vocabulary format",
    )
    p.add_argument("--descriptors", required=True, help="descriptor file (d####.bin)")
    p.add_argument("--qualifiers", help="qualifier file (q####.bin)")
    p.add_argument("--out", required=True, help="output vocabulary file")
    p.set_defaults(func=cmd_convert_mesh)

    p = sub.add_parser(
        "ic", parents=[p_vocab, p_corpus_opt, p_freq, p_out],
        help="compute the information-content table",
    )
    p.set_defaults(func=cmd_ic)

    p = sub.add_parser(
        "graph", parents=[p_vocab, p_corpus_opt, p_freq, p_out],
        help="build a term graph",
    )
    p.add_argument("--graph", required=True, choices=["g1", "dic"], help="edge weighting")
    p.set_defaults(func=cmd_graph)

    p = sub.add_parser(
        "simmatrix", parents=[p_vocab, p_corpus_opt, p_freq, p_out],
        help="materialize a sparse term similarity matrix",
    )
    p.add_argument("--graph", required=True, choices=["g1", "dic"], help="edge weighting")
    p.add_argument("--lambda", dest="lam", type=float, required=True, help="distance decay")
    p.add_argument(
        "--eps", type=float, default=1e-4,
        help="similarity floor for storage (default 1e-4)",
    )
    p.set_defaults(func=cmd_simmatrix)

    p = sub.add_parser(
        "relate", parents=[p_vocab, p_corpus, p_freq, p_method, p_workers, p_out],
        help="score document pairs",
    )
    p.add_argument("--pairs", help="doc_a<TAB>doc_b pair list (default: all corpus pairs)")
    p.set_defaults(func=cmd_relate)

    p = sub.add_parser(
        "bench", parents=[p_vocab, p_corpus, p_freq, p_method, p_eval, p_workers, p_out],
        help="run the benchmark for one configuration",
    )
    p.add_argument("--dump-dist", help="also dump the two score populations to this file")
    p.set_defaults(func=cmd_bench)

    p = sub.add_parser(
        "sweep", parents=[p_vocab, p_corpus, p_freq, p_eval, p_workers, p_out],
        help="benchmark a grid of configurations",
    )
    p.add_argument("--methods", default="salton", help="comma list: salton,soft,mts,mts-rawdist")
    p.add_argument("--vectors", default="binary", help="comma list: binary,ic")
    p.add_argument("--graphs", default="g1", help="comma list: g1,dic")
    p.add_argument("--w-list", default="1", help="comma list of major term weights")
    p.add_argument("--lambda-list", default="1", help="comma list of decay values")
    p.add_argument("--slim-list", default="false", help="comma list of true/false")
    p.add_argument("--qualifiers-list", default="false", help="comma list of true/false")
    p.add_argument(
        "--eps", type=float, default=1e-4,
        help="similarity floor for matrix storage (default 1e-4)",
    )
    p.add_argument(
        "--preset", choices=["reference9"],
        help="named configuration set (overrides the list flags)",
    )
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("stats", help="summarize or compare saved score files")
    p.add_argument("--scores", required=True, help="score file to summarize")
    p.add_argument("--scores-b", help="second score file; reports concordance against it")
    p.add_argument("--judgements", help="judgement file; reports delta and skewness")
    p.add_argument(
        "--min-frac", type=float, default=0.10,
        help="topic filter threshold when --judgements is given (default 0.10)",
    )
    p.add_argument("--dump-dist", help="dump same/separate populations to this file")
    p.add_argument("--out", help="write the report here instead of stdout")
    p.set_defaults(func=cmd_stats)

    return parser


def main(argv: Sequence[str] | None = None) -> int:
    logging.basicConfig(stream=sys.stderr, level=logging.INFO, format="%(levelname)s %(message)s")
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        args.func(args)
    except (VocabrelError, OSError, ValueError) as exc:
        log.error("%s", exc)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
