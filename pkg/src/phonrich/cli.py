"""Command-line surface: g2p, richness, fit-weights, gen-protocol, simulate,
calibrate, evaluate, report-weights, stats."""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

import numpy as np

from . import __version__
from .calibration import FEATURE_ORDER, cross_validated_calibration, log_net_speech, save_model
from .data import DEMO_VOCABULARY, make_demo_inventory
from .inventory import PhonemeInventory, PresenceVector
from .io import (provenance_line, read_jsonl, read_qmfs, read_scores, read_tsv,
                 write_jsonl, write_scores, write_tsv)
from .lexicon import PhonemeTranscription, load_lexicon, presence_vector, transcribe
from .metrics import (compute_eer, compute_min_c_primary, correlation_report,
                      protocol_stats)
from .protocols import (build_clip_protocol, build_repetitive_protocol, emit_trials,
                        load_inventory_jsonl, load_protocol)
from .richness import (RichnessWeights, count_unique, fit_weights, load_weights,
                       save_weights, weight_report, weighted_count_unique)
from .simulator import SimConfig, simulate_corpus


def _inventory(args) -> PhonemeInventory:
    if getattr(args, "inventory", None):
        return PhonemeInventory.from_file(args.inventory)
    return PhonemeInventory()


def cmd_g2p(args) -> int:
    inventory = _inventory(args)
    lexicon = load_lexicon(args.lexicon, inventory)
    transcripts = read_jsonl(args.transcripts)
    records = []
    total_words = 0
    total_oov = 0
    for rec in transcripts:
        trans = transcribe(rec["transcript"], lexicon, rec["utterance_id"])
        pv = presence_vector(trans, inventory)
        total_oov += trans.oov_words
        total_words += len(rec["transcript"].split())
        records.append({
            "utterance_id": trans.utterance_id,
            "phonemes": list(trans.phonemes),
            "bits": pv.to_bitstring(),
            "cu": count_unique(pv),
            "oov_words": trans.oov_words,
        })
    prov = provenance_line("g2p", None, [args.transcripts, args.lexicon])
    write_jsonl(args.out, records, prov)
    rate = total_oov / total_words if total_words else 0.0
    print(f"g2p: utterances={len(records)} oov_words={total_oov} oov_rate={rate:.4f}")
    if total_oov:
        print(f"warning: {total_oov} out-of-vocabulary words skipped", file=sys.stderr)
    return 0


def cmd_richness(args) -> int:
    inventory = _inventory(args)
    presence = read_jsonl(args.presence)
    weights = load_weights(args.weights, inventory) if args.weights else None
    net_speech = {}
    if args.manifest:
        for rec in read_jsonl(args.manifest):
            net_speech[rec["test_id"]] = float(rec["net_speech"])
    records = []
    for rec in presence:
        pv = PresenceVector.from_bitstring(rec["bits"], rec["utterance_id"])
        out = {"test_id": rec["utterance_id"], "cu": float(count_unique(pv))}
        if weights is not None:
            out["wcu"] = weighted_count_unique(pv, weights)
        if rec["utterance_id"] in net_speech:
            ns = net_speech[rec["utterance_id"]]
            out["net_speech"] = ns
            out["lns"] = log_net_speech(ns)
        records.append(out)
    inputs = [args.presence] + ([args.weights] if args.weights else []) \
        + ([args.manifest] if args.manifest else [])
    write_jsonl(args.out, records, provenance_line("richness", None, inputs))
    print(f"richness: wrote {len(records)} QMF records to {args.out}")
    return 0


def cmd_fit_weights(args) -> int:
    inventory = _inventory(args)
    presence = {rec["utterance_id"]: rec for rec in read_jsonl(args.presence)}
    trials = read_scores(args.scores)
    pairs = []
    for t in trials:
        if t.label != "target":
            continue
        rec = presence.get(t.test_id)
        if rec is not None:
            pairs.append((PresenceVector.from_bitstring(rec["bits"], t.test_id), t.raw_score))
    if not pairs:
        print("error: no positive trials joined with presence vectors", file=sys.stderr)
        return 1
    w = fit_weights(pairs, seed=args.seed)
    prov = provenance_line("fit-weights", args.seed, [args.presence, args.scores])
    save_weights(w, args.out, inventory, prov)
    print(f"fit-weights: n_train={w.n_train} fit_residual={w.fit_residual:.6g}")
    return 0


def cmd_gen_protocol(args) -> int:
    inventory = load_inventory_jsonl(args.corpus)
    if args.protocol == "repetitive":
        words = [r for r in inventory if r.kind == "word"]
        sentences = [r for r in inventory if r.kind == "sentence"]
        spec = build_repetitive_protocol(words, sentences, args.probes_per_speaker,
                                         args.seed, negatives_per_probe=args.negatives_per_probe)
    else:
        if args.target is None:
            print("error: --target is required for the clip protocol", file=sys.stderr)
            return 1
        base = [r for r in inventory if r.kind in ("sentence", "free")]
        trials = None
        if args.base_trials:
            _, rows = read_tsv(args.base_trials)
            trials = [(m, t, lab) for m, t, lab in rows]
        spec = build_clip_protocol(base, args.target, args.seed, trials=trials)
    prov = provenance_line("gen-protocol", args.seed, [args.corpus])
    prefix = args.out_prefix
    emit_trials(spec, f"{prefix}.trials.tsv", f"{prefix}.manifest.jsonl",
                f"{prefix}.models.jsonl", prov)
    print(f"gen-protocol: {len(spec.positive_trials)} positive, "
          f"{len(spec.negative_trials)} negative trials, {len(spec.tests)} tests")
    return 0


def _vocabulary_from_args(args) -> dict:
    if args.lexicon:
        lex = load_lexicon(args.lexicon)
        return {word: prons[0] for word, prons in lex.entries.items()}
    return dict(DEMO_VOCABULARY)


def cmd_simulate(args) -> int:
    protocol = load_protocol(args.trials, args.manifest, args.models)
    config = SimConfig(
        n_speakers=len({m.speaker_id for m in protocol.models}),
        sigma0=args.sigma0, kappa=args.kappa, seed=args.seed,
        vocabulary=_vocabulary_from_args(args), dim=args.dim,
    )
    result = simulate_corpus(config, protocol)
    inputs = [args.trials, args.manifest, args.models]
    prov = provenance_line("simulate", args.seed, inputs)
    write_scores(args.out_scores, result.trials, prov)
    qmf_records = [{"test_id": tid, **vals} for tid, vals in sorted(result.qmfs.items())]
    write_jsonl(args.out_qmf, qmf_records, prov)
    print(f"simulate: scored {len(result.trials)} trials over {config.n_speakers} speakers")
    return 0


def _parse_feature_set(text: str) -> tuple[str, ...]:
    if text.lower() == "none":
        return ()
    names = tuple(n.strip().lower() for n in text.split(",") if n.strip())
    unknown = set(names) - set(FEATURE_ORDER)
    if unknown:
        raise argparse.ArgumentTypeError(f"unknown features {sorted(unknown)}; pick from {FEATURE_ORDER}")
    return names


def cmd_calibrate(args) -> int:
    trials = read_scores(args.scores)
    qmfs = read_qmfs(args.qmf)
    feature_set = _parse_feature_set(args.features)
    if not feature_set:
        print("error: calibrate needs a non-empty feature set", file=sys.stderr)
        return 1
    calibrated, models = cross_validated_calibration(trials, qmfs, feature_set,
                                                     k=args.folds, seed=args.seed)
    prov = provenance_line("calibrate", args.seed, [args.scores, args.qmf])
    write_scores(args.out_scores, calibrated, prov)
    if args.out_models:
        for i, model in enumerate(models):
            save_model(model, f"{args.out_models}.fold{i}.txt", prov)
    print(f"calibrate: features={','.join(feature_set)} folds={args.folds} "
          f"trials={len(calibrated)}")
    return 0


def cmd_evaluate(args) -> int:
    trials = read_scores(args.scores)
    qmfs = read_qmfs(args.qmf) if args.qmf else {}
    feature_sets = [_parse_feature_set(f) for f in args.features] or [()]
    rows = []
    for fs in feature_sets:
        if fs:
            if not args.qmf and any(f != "raw" for f in fs):
                print("error: --qmf is required for features beyond raw", file=sys.stderr)
                return 1
            scored, _ = cross_validated_calibration(trials, qmfs, fs, k=args.folds, seed=args.seed)
        else:
            scored = trials
        eer, _ = compute_eer(scored)
        minc = compute_min_c_primary(scored)
        name = ",".join(fs) if fs else "none"
        rows.append((name, f"{100 * eer:.2f}", f"{minc:.3f}"))
    header = ["features", "eer_percent", "min_c_primary"]
    for row in rows:
        print("\t".join(row))
    if args.out:
        inputs = [args.scores] + ([args.qmf] if args.qmf else [])
        write_tsv(args.out, header, rows, provenance_line("evaluate", args.seed, inputs))
    if args.correlation_out:
        taus, scatter = correlation_report(trials, qmfs)
        lines = ["test_id,qmf_name,qmf_value,score,label"]
        lines += [f"{tid},{name},{val:.17g},{score:.17g},{label}"
                  for tid, name, val, score, label in scatter]
        Path(args.correlation_out).write_text("\n".join(lines) + "\n")
        for (label, name), tau in sorted(taus.items()):
            print(f"tau[{label},{name}] = {tau:.3f}")
    return 0


def cmd_report_weights(args) -> int:
    inventory = _inventory(args)
    weights = load_weights(args.weights, inventory)
    corpus = [PhonemeTranscription(rec["utterance_id"], tuple(rec["phonemes"]))
              for rec in read_jsonl(args.presence)]
    rows = weight_report(weights, corpus, inventory)
    out_rows = [(sym, f"{w:.6f}", f"{f:.6f}") for sym, w, f in rows]
    header = ["phoneme", "normalized_weight", "frequency"]
    if args.out:
        prov = provenance_line("report-weights", None, [args.weights, args.presence])
        write_tsv(args.out, header, out_rows, prov)
    else:
        print("\t".join(header))
        for row in out_rows:
            print("\t".join(row))
    return 0


def cmd_stats(args) -> int:
    qmfs = read_qmfs(args.qmf)
    pairs = [(v["net_speech"], v["cu"]) for v in qmfs.values()
             if "net_speech" in v and "cu" in v]
    if not pairs:
        print("error: QMF file has no records with both net_speech and cu", file=sys.stderr)
        return 1
    ns_mean, ns_std, cu_mean, cu_std = protocol_stats(pairs)
    print(f"net_speech: {ns_mean:.1f} ({ns_std:.1f}) s")
    print(f"cu: {cu_mean:.1f} ({cu_std:.1f})")
    return 0


def cmd_make_demo(args) -> int:
    records = make_demo_inventory(args.speakers, args.seed)
    write_jsonl(args.out, [
        {"utterance_id": r.utterance_id, "speaker_id": r.speaker_id, "kind": r.kind,
         "net_speech": r.net_speech, "transcript": r.transcript, "word_text": r.word_text,
         "repetition_index": r.repetition_index, "gender": r.gender,
         "word_durations": r.word_durations}
        for r in records
    ], provenance_line("make-demo", args.seed))
    print(f"make-demo: wrote {len(records)} utterance records for {args.speakers} speakers")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="phonrich",
                                     description="Phonetic-richness measures and score calibration")
    parser.add_argument("--version", action="version", version=f"phonrich {__version__}")
    sub = parser.add_subparsers(dest="subcommand", required=True)

    p = sub.add_parser("g2p", help="transcripts -> phoneme presence vectors")
    p.add_argument("--transcripts", required=True)
    p.add_argument("--lexicon", required=True)
    p.add_argument("--inventory")
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_g2p)

    p = sub.add_parser("richness", help="presence vectors -> CU/WCU/LNS QMF file")
    p.add_argument("--presence", required=True)
    p.add_argument("--weights")
    p.add_argument("--manifest", help="manifest JSONL supplying net_speech")
    p.add_argument("--inventory")
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_richness)

    p = sub.add_parser("fit-weights", help="fit WCU weights from positive-trial scores")
    p.add_argument("--presence", required=True)
    p.add_argument("--scores", required=True)
    p.add_argument("--inventory")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_fit_weights)

    p = sub.add_parser("gen-protocol", help="generate trial lists from an utterance inventory")
    p.add_argument("--corpus", required=True, help="utterance inventory JSONL")
    p.add_argument("--protocol", choices=["repetitive", "clip"], required=True)
    p.add_argument("--probes-per-speaker", type=int, default=100)
    p.add_argument("--negatives-per-probe", type=int)
    p.add_argument("--target", type=float, help="clip duration in seconds")
    p.add_argument("--base-trials", help="passthrough trial TSV over base utterance ids")
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--out-prefix", required=True)
    p.set_defaults(func=cmd_gen_protocol)

    p = sub.add_parser("simulate", help="score a protocol with synthetic embeddings")
    p.add_argument("--trials", required=True)
    p.add_argument("--manifest", required=True)
    p.add_argument("--models", required=True)
    p.add_argument("--lexicon", help="CMU-style lexicon; defaults to the built-in vocabulary")
    p.add_argument("--sigma0", type=float, default=0.6)
    p.add_argument("--kappa", type=float, default=2.0)
    p.add_argument("--dim", type=int, default=32)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--out-scores", required=True)
    p.add_argument("--out-qmf", required=True)
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("calibrate", help="cross-validated logistic-regression calibration")
    p.add_argument("--scores", required=True)
    p.add_argument("--qmf", required=True)
    p.add_argument("--features", required=True, help="comma-separated subset of raw,lns,cu,wcu")
    p.add_argument("--folds", type=int, default=5)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--out-scores", required=True)
    p.add_argument("--out-models", help="prefix for per-fold model files")
    p.set_defaults(func=cmd_calibrate)

    p = sub.add_parser("evaluate", help="EER / minC_primary per feature set")
    p.add_argument("--scores", required=True)
    p.add_argument("--qmf")
    p.add_argument("--features", action="append", default=[],
                   help="feature set per row: 'none' or comma-separated names; repeatable")
    p.add_argument("--folds", type=int, default=5)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out")
    p.add_argument("--correlation-out", help="write scatter CSV and print per-class taus")
    p.set_defaults(func=cmd_evaluate)

    p = sub.add_parser("report-weights", help="normalized weights vs corpus phoneme frequency")
    p.add_argument("--weights", required=True)
    p.add_argument("--presence", required=True)
    p.add_argument("--inventory")
    p.add_argument("--out")
    p.set_defaults(func=cmd_report_weights)

    p = sub.add_parser("stats", help="net-speech and CU mean/std of a protocol")
    p.add_argument("--qmf", required=True)
    p.set_defaults(func=cmd_stats)

    p = sub.add_parser("make-demo", help="write the built-in demo utterance inventory")
    p.add_argument("--speakers", type=int, default=10)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_make_demo)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    for attr in ("transcripts", "lexicon", "presence", "scores", "qmf", "trials",
                 "manifest", "models", "corpus", "weights", "base_trials"):
        path = getattr(args, attr, None)
        if path and not Path(path).exists():
            print(f"error: input file not found: {path}", file=sys.stderr)
            return 1
    try:
        return args.func(args)
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
