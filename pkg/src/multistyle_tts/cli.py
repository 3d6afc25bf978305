"""Operator command line: thin, logged wrappers over the library operations.

Every command funnels its randomness through one seed (printed in the run
log JSON written next to the primary output), so a re-run with the same
arguments reproduces the same artifacts on deterministic paths.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from dataclasses import asdict
from pathlib import Path

import numpy as np

DEFAULT_ABX_TEXTS = (
    "the report is on the table",
    "the meeting starts at nine",
    "please set the timer for ten minutes",
    "the weather today is mostly plain",
)


def _write_run_log(out_ref: Path, command: str, args: argparse.Namespace, outputs: list[str], started: float) -> None:
    log = {
        "command": command,
        "argv": sys.argv[1:],
        "seed": getattr(args, "seed", None),
        "started_at": started,
        "finished_at": time.time(),
        "outputs": outputs,
    }
    path = out_ref if out_ref.is_dir() else out_ref.parent
    path.mkdir(parents=True, exist_ok=True)
    (path / f"{command.replace('-', '_')}_runlog.json").write_text(json.dumps(log, indent=2))
    print(f"[{command}] seed={log['seed']} outputs={outputs}")


def _add_common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--config", type=Path, default=None, help="service/config JSON where applicable")


def _norm_mode(name: str):
    from .corpus.normalize import NormalizationMode

    return NormalizationMode(name)


def cmd_gen_synthetic(args) -> int:
    from .corpus.synthetic import generate_synthetic_corpus

    corpus = generate_synthetic_corpus(
        args.out, n_train=args.n_train, n_dev=args.n_dev, n_test=args.n_test, seed=args.seed
    )
    print(f"generated {len(corpus)} utterances in {args.out}")
    _write_run_log(Path(args.out), "gen-synthetic", args, [str(Path(args.out) / "manifest.jsonl")], args._started)
    return 0


def cmd_extract_features(args) -> int:
    from .corpus.embeddings import HashEmbeddingProvider
    from .corpus.features import FeatureConfig
    from .corpus.manifest import load_manifest
    from .corpus.normalize import fit_normalizer
    from .stylemodel.data import corpus_examples, utterance_bundle

    corpus = load_manifest(args.manifest, corpus_kind=args.kind)
    fconfig = FeatureConfig()
    provider = HashEmbeddingProvider()
    bundles = [utterance_bundle(u, fconfig, provider) for u in corpus.split("train")]
    stats = fit_normalizer(bundles, corpus.corpus_id)
    stats.save(args.out)
    for split in ("train", "dev", "test"):
        counts = corpus.label_counts(split)
        if sum(counts):
            print(f"{split}: " + " ".join(f"{n}" for n in counts))
    _write_run_log(Path(args.out), "extract-features", args, [str(args.out)], args._started)
    return 0


def _load_norm_examples(manifest: Path, kind: str, mode, fconfig, provider, stats_path: Path | None):
    """Load a corpus, fit or load its normalizer, and return normalized examples."""
    from .corpus.manifest import load_manifest
    from .corpus.normalize import NormStats, fit_normalizer
    from .stylemodel.data import corpus_examples, utterance_bundle

    corpus = load_manifest(manifest, corpus_kind=kind)
    if stats_path is not None and Path(stats_path).exists():
        stats = NormStats.load(stats_path)
    else:
        bundles = [utterance_bundle(u, fconfig, provider) for u in corpus.split("train")]
        stats = fit_normalizer(bundles, corpus.corpus_id)
    train, _ = corpus_examples(corpus, fconfig, provider, stats=stats, mode=mode, split="train")
    dev, _ = corpus_examples(corpus, fconfig, provider, stats=stats, mode=mode, split="dev")
    return corpus, stats, train, dev


def cmd_train_classifier(args) -> int:
    from .corpus.embeddings import HashEmbeddingProvider
    from .corpus.features import FeatureConfig
    from .corpus.labels import NUM_STYLES
    from .reporting import plot_history
    from .stylemodel import (
        ClassifierConfig,
        TrainConfig,
        build_classifier,
        class_weights,
        evaluate,
        save_classifier,
        save_history,
        train,
    )

    mode = _norm_mode(args.norm)
    fconfig = FeatureConfig()
    provider = HashEmbeddingProvider()
    all_train, all_dev = [], []
    outputs = [str(args.out)]
    for i, manifest in enumerate(args.manifest):
        kind = args.kind[i] if i < len(args.kind) else "tts"
        corpus, stats, train_ex, dev_ex = _load_norm_examples(manifest, kind, mode, fconfig, provider, None)
        stats_path = Path(args.out).with_suffix(f".stats.{corpus.corpus_id}.json")
        stats.save(stats_path)
        outputs.append(str(stats_path))
        all_train.extend(train_ex)
        all_dev.extend(dev_ex)

    counts = np.zeros(NUM_STYLES)
    for e in all_train:
        if e.label is not None:
            counts[e.label] += 1
    weights = class_weights(counts)

    model = build_classifier(ClassifierConfig(seed=args.seed))
    labeled_train = [e for e in all_train if e.label is not None]
    model, history = train(
        model,
        labeled_train,
        all_dev,
        weights,
        TrainConfig(seed=args.seed, max_epochs=args.epochs),
    )
    save_classifier(args.out, model)
    if args.history:
        save_history(args.history, history)
        png = Path(args.history).with_suffix(".png")
        plot_history([asdict(h) for h in history], png, title="classifier training")
        outputs.extend([str(args.history), str(png)])

    dev_metrics = evaluate(model, all_dev, weights)
    print(
        f"norm={args.norm} dev weighted_acc={dev_metrics.weighted_acc:.4f} "
        f"unweighted_acc={dev_metrics.unweighted_acc:.4f}"
    )
    _write_run_log(Path(args.out), "train-classifier", args, outputs, args._started)
    return 0


def cmd_adapt_bn(args) -> int:
    from .corpus.embeddings import HashEmbeddingProvider
    from .corpus.features import FeatureConfig
    from .stylemodel import adapt_bn, load_classifier, save_classifier

    mode = _norm_mode(args.norm)
    fconfig = FeatureConfig()
    provider = HashEmbeddingProvider()
    model = load_classifier(args.checkpoint)
    _, stats, train_ex, dev_ex = _load_norm_examples(args.manifest, args.kind, mode, fconfig, provider, args.stats)
    adapted = adapt_bn(model, train_ex + dev_ex)
    save_classifier(args.out, adapted)
    _write_run_log(Path(args.out), "adapt-bn", args, [str(args.out)], args._started)
    return 0


def cmd_label_corpus(args) -> int:
    from .corpus.embeddings import HashEmbeddingProvider
    from .corpus.features import FeatureConfig
    from .corpus.manifest import load_manifest
    from .corpus.normalize import NormStats
    from .stylemodel import label_corpus, load_classifier

    model = load_classifier(args.checkpoint)
    corpus = load_manifest(args.manifest, corpus_kind=args.kind)
    stats = NormStats.load(args.stats) if args.stats else None
    report = label_corpus(
        model,
        corpus,
        args.out,
        FeatureConfig(),
        HashEmbeddingProvider(),
        stats=stats,
        mode=_norm_mode(args.norm),
    )
    print(f"labeled {report.written} utterances; skipped {len(report.skipped)}")
    for utt_id, reason in report.skipped:
        print(f"  skipped {utt_id}: {reason}", file=sys.stderr)
    _write_run_log(Path(args.out), "label-corpus", args, [str(args.out)], args._started)
    return 0


def cmd_train_tts(args) -> int:
    from dataclasses import asdict as dc_asdict

    from .corpus.manifest import load_manifest
    from .reporting import plot_history
    from .stylemodel.labeling import load_embedding_file
    from .tts import (
        AcousticConfig,
        ProsodyConfig,
        TtsTrainConfig,
        build_acoustic_model,
        build_prosody_model,
        extract_tts_targets,
        save_tts_model,
        train_tts,
    )
    from .tts.training import save_tts_history

    corpus = load_manifest(args.manifest, corpus_kind="tts")
    embeddings = load_embedding_file(args.embeddings)
    config = TtsTrainConfig(seed=args.seed, epochs=args.epochs)
    targets = extract_tts_targets(corpus, embeddings, config)
    prosody = build_prosody_model(ProsodyConfig(seed=args.seed))
    acoustic = build_acoustic_model(AcousticConfig(seed=args.seed))
    history = train_tts(prosody, acoustic, targets, config)
    save_tts_model(args.out_prosody, prosody)
    save_tts_model(args.out_acoustic, acoustic)
    outputs = [str(args.out_prosody), str(args.out_acoustic)]
    if args.history:
        save_tts_history(args.history, history)
        png = Path(args.history).with_suffix(".png")
        plot_history([dc_asdict(h) for h in history], png, title="tts training")
        outputs.extend([str(args.history), str(png)])
    print(f"tts trained {len(history)} epochs; final prosody={history[-1].prosody_loss:.4f} acoustic={history[-1].acoustic_loss:.4f}")
    _write_run_log(Path(args.out_prosody), "train-tts", args, outputs, args._started)
    return 0


def _build_stack(args):
    from .pipeline import TtsStack
    from .tts.checkpoint import load_tts_model

    neural = load_tts_model(args.neural_vocoder) if getattr(args, "neural_vocoder", None) else None
    return TtsStack(
        prosody=load_tts_model(args.prosody),
        acoustic=load_tts_model(args.acoustic),
        vocoder=args.vocoder,
        neural_vocoder=neural,
        dsp_seed=args.seed,
    )


def _build_extractor(args):
    from .corpus.normalize import NormStats
    from .pipeline import StyleExtractor
    from .stylemodel.checkpoint import load_classifier

    if not getattr(args, "classifier", None):
        return None
    stats = NormStats.load(args.stats) if getattr(args, "stats", None) else None
    return StyleExtractor(classifier=load_classifier(args.classifier), stats=stats)


def cmd_synthesize(args) -> int:
    from .audio import write_wav
    from .pipeline import SynthesisRequest, synthesize
    from .stylemodel.embedding import StyleEmbedding

    kwargs: dict = {"text": args.text, "speaker": args.speaker}
    if args.style:
        kwargs["style_name"] = args.style
    if args.embedding:
        kwargs["style_embedding"] = StyleEmbedding(np.asarray(json.loads(args.embedding)))
    if args.query_audio:
        kwargs["query_audio"] = args.query_audio
        kwargs["query_text"] = args.query_text
    wav, emb = synthesize(SynthesisRequest(**kwargs), _build_stack(args), _build_extractor(args))
    write_wav(args.out, wav)
    print(f"wrote {args.out} ({wav.duration:.2f}s), embedding={np.round(emb.p, 4).tolist()}")
    _write_run_log(Path(args.out), "synthesize", args, [str(args.out)], args._started)
    return 0


def cmd_respond(args) -> int:
    from .audio import write_wav
    from .pipeline import respond

    extractor = _build_extractor(args)
    if extractor is None:
        raise ValueError("respond requires --classifier")
    wav, emb = respond(args.query_audio, args.query_text, args.text, _build_stack(args), extractor)
    write_wav(args.out, wav)
    print(f"wrote {args.out}, query embedding={np.round(emb.p, 4).tolist()}")
    _write_run_log(Path(args.out), "respond", args, [str(args.out)], args._started)
    return 0


def cmd_build_abx(args) -> int:
    from .audio import write_wav
    from .corpus.labels import StyleLabel
    from .evalkit import build_abx, save_abx_items
    from .pipeline import SynthesisRequest, make_style_embedding, synthesize

    stack = _build_stack(args)
    texts = DEFAULT_ABX_TEXTS
    if args.texts:
        texts = tuple(t for t in Path(args.texts).read_text().splitlines() if t.strip())
    media_dir = Path(args.media_dir)
    media_dir.mkdir(parents=True, exist_ok=True)
    pool_dir = Path(args.out_dir)
    pool_dir.mkdir(parents=True, exist_ok=True)

    pool: dict[StyleLabel, list[str]] = {}
    stim = 0
    for style in StyleLabel:
        emb = make_style_embedding(style)
        refs = []
        for k in range(args.per_style):
            wav, _ = synthesize(SynthesisRequest(text=texts[k % len(texts)], style_embedding=emb), stack)
            name = f"s{stim:04d}.wav"
            write_wav(media_dir / name, wav)
            refs.append(name)
            stim += 1
        pool[style] = refs
    items = build_abx(pool, seed=args.seed)
    items_path = pool_dir / "abx_items.jsonl"
    save_abx_items(items_path, items)
    print(f"built {len(items)} ABX items over {len(pool)} styles ({stim} stimuli)")
    _write_run_log(pool_dir, "build-abx", args, [str(items_path)], args._started)
    return 0


def cmd_f0_stats(args) -> int:
    from .corpus.manifest import load_manifest
    from .evalkit import f0_statistics
    from .reporting import report_f0_stats

    corpus = load_manifest(args.manifest, corpus_kind=args.kind)
    groups: dict = {}
    for utt in corpus.labeled():
        groups.setdefault(utt.style_label, []).append(utt.audio_ref)
    table = f0_statistics(groups)
    paths = report_f0_stats(table, args.out_dir)
    for style, row in sorted(table.rows.items()):
        print(f"{style.name.lower():<8} {row.mean_hz:6.1f} +/- {row.std_hz:5.1f}  (n={row.count})")
    _write_run_log(Path(args.out_dir), "f0-stats", args, [str(p) for p in paths.values()], args._started)
    return 0


def cmd_serve(args) -> int:
    import uvicorn

    from .service import ServiceConfig, create_app

    config = ServiceConfig.load(args.config)
    if args.port is not None:
        config.port = args.port
    app = create_app(config)
    uvicorn.run(app, host=config.host, port=config.port)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="mstts", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("gen-synthetic", help="generate the synthetic test corpus")
    p.add_argument("--out", type=Path, required=True)
    p.add_argument("--n-train", type=int, default=20)
    p.add_argument("--n-dev", type=int, default=10)
    p.add_argument("--n-test", type=int, default=0)
    _add_common(p)
    p.set_defaults(func=cmd_gen_synthetic)

    p = sub.add_parser("extract-features", help="fit and save corpus normalization stats")
    p.add_argument("--manifest", type=Path, required=True)
    p.add_argument("--kind", choices=("tts", "external"), default="tts")
    p.add_argument("--out", type=Path, required=True)
    _add_common(p)
    p.set_defaults(func=cmd_extract_features)

    p = sub.add_parser("train-classifier", help="train the style classifier")
    p.add_argument("--manifest", type=Path, action="append", required=True)
    p.add_argument("--kind", action="append", default=[], choices=("tts", "external"))
    p.add_argument("--norm", choices=("none", "mfcc", "prosody", "both"), default="both")
    p.add_argument("--epochs", type=int, default=200)
    p.add_argument("--out", type=Path, required=True)
    p.add_argument("--history", type=Path, default=None)
    _add_common(p)
    p.set_defaults(func=cmd_train_classifier)

    p = sub.add_parser("adapt-bn", help="AdaBN-adapt a classifier to a target corpus")
    p.add_argument("--checkpoint", type=Path, required=True)
    p.add_argument("--manifest", type=Path, required=True)
    p.add_argument("--kind", choices=("tts", "external"), default="tts")
    p.add_argument("--norm", choices=("none", "mfcc", "prosody", "both"), default="both")
    p.add_argument("--stats", type=Path, default=None)
    p.add_argument("--out", type=Path, required=True)
    _add_common(p)
    p.set_defaults(func=cmd_adapt_bn)

    p = sub.add_parser("label-corpus", help="write style embeddings for every utterance")
    p.add_argument("--checkpoint", type=Path, required=True)
    p.add_argument("--manifest", type=Path, required=True)
    p.add_argument("--kind", choices=("tts", "external"), default="tts")
    p.add_argument("--norm", choices=("none", "mfcc", "prosody", "both"), default="both")
    p.add_argument("--stats", type=Path, default=None)
    p.add_argument("--out", type=Path, required=True)
    _add_common(p)
    p.set_defaults(func=cmd_label_corpus)

    p = sub.add_parser("train-tts", help="train prosody and acoustic models")
    p.add_argument("--manifest", type=Path, required=True)
    p.add_argument("--embeddings", type=Path, required=True)
    p.add_argument("--epochs", type=int, default=300)
    p.add_argument("--out-prosody", type=Path, required=True)
    p.add_argument("--out-acoustic", type=Path, required=True)
    p.add_argument("--history", type=Path, default=None)
    _add_common(p)
    p.set_defaults(func=cmd_train_tts)

    def add_stack_args(p):
        p.add_argument("--prosody", type=Path, required=True)
        p.add_argument("--acoustic", type=Path, required=True)
        p.add_argument("--vocoder", choices=("dsp", "neural"), default="dsp")
        p.add_argument("--neural-vocoder", type=Path, default=None)

    p = sub.add_parser("synthesize", help="synthesize speech for a text")
    add_stack_args(p)
    p.add_argument("--text", required=True)
    p.add_argument("--style", default=None)
    p.add_argument("--embedding", default=None, help="JSON list of 6 probabilities")
    p.add_argument("--query-audio", type=Path, default=None)
    p.add_argument("--query-text", default=None)
    p.add_argument("--classifier", type=Path, default=None)
    p.add_argument("--stats", type=Path, default=None)
    p.add_argument("--speaker", type=int, default=0)
    p.add_argument("--out", type=Path, required=True)
    _add_common(p)
    p.set_defaults(func=cmd_synthesize)

    p = sub.add_parser("respond", help="extract a query's style and answer in it")
    add_stack_args(p)
    p.add_argument("--classifier", type=Path, required=True)
    p.add_argument("--stats", type=Path, default=None)
    p.add_argument("--query-audio", type=Path, required=True)
    p.add_argument("--query-text", required=True)
    p.add_argument("--text", required=True)
    p.add_argument("--out", type=Path, required=True)
    _add_common(p)
    p.set_defaults(func=cmd_respond)

    p = sub.add_parser("build-abx", help="synthesize stimuli and build ABX items")
    add_stack_args(p)
    p.add_argument("--out-dir", type=Path, required=True)
    p.add_argument("--media-dir", type=Path, required=True)
    p.add_argument("--per-style", type=int, default=3)
    p.add_argument("--texts", type=Path, default=None)
    _add_common(p)
    p.set_defaults(func=cmd_build_abx)

    p = sub.add_parser("f0-stats", help="per-style F0 statistics of a corpus")
    p.add_argument("--manifest", type=Path, required=True)
    p.add_argument("--kind", choices=("tts", "external"), default="tts")
    p.add_argument("--out-dir", type=Path, required=True)
    _add_common(p)
    p.set_defaults(func=cmd_f0_stats)

    p = sub.add_parser("serve", help="run the HTTP service")
    p.add_argument("--port", type=int, default=None)
    _add_common(p)
    p.set_defaults(func=cmd_serve)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    args._started = time.time()
    try:
        return args.func(args)
    except Exception as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
