"""``word2hyp`` command line: train, eval, cv, abstract, gen.

Machine-readable output goes to stdout, logs to stderr.  Usage errors exit
with status 2, failures inside a workflow with status 1.
"""

import argparse
import logging
import os
import sys

from . import corpus as _corpus
from . import trainer as _trainer


def _add_train(sub):
    p = sub.add_parser("train", help="train entailment vectors on a corpus")
    p.add_argument("--corpus", required=True, help="whitespace-tokenised text file")
    p.add_argument("--out", required=True, help="embedding output path")
    p.add_argument("--arch", choices=sorted(_trainer.ARCHITECTURES), default="skipgram")
    p.add_argument("--mode", choices=sorted(_trainer.MODES), default="posterior")
    p.add_argument("--score", choices=sorted(_trainer.SCORES), default="entailment",
                   help="pair score; 'dot' gives plain Word2Vec")
    p.add_argument("--dim", type=int, default=200)
    p.add_argument("--window", type=int, default=5)
    p.add_argument("--negative", type=int, default=5)
    p.add_argument("--sample", type=float, default=_corpus.DEFAULT_SAMPLE)
    p.add_argument("--min-count", type=int, default=_corpus.DEFAULT_MIN_COUNT)
    p.add_argument("--epochs", type=int, default=5)
    p.add_argument("--alpha", type=float, default=None,
                   help="initial learning rate (default 0.025 skipgram, 0.05 cbow)")
    p.add_argument("--seed", type=int, default=1)
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--table-size", type=int, default=_corpus.DEFAULT_TABLE_SIZE)
    p.add_argument("--binary", action="store_true", help="write the binary format")
    p.add_argument("--checkpoint", help="also save both arrays to this path")
    p.set_defaults(func=cmd_train)


def _add_eval(sub):
    p = sub.add_parser("eval", help="unsupervised hyponymy evaluation")
    p.add_argument("--embeddings", required=True)
    p.add_argument("--pairs", required=True, help="hypo<TAB>hyper<TAB>label file")
    p.add_argument("--report", help="also write the report to this path")
    p.set_defaults(func=cmd_eval)


def _add_cv(sub):
    p = sub.add_parser("cv", help="semi-supervised map, lexically disjoint cross-validation")
    p.add_argument("--embeddings", required=True)
    p.add_argument("--pairs", required=True)
    p.add_argument("--folds", type=int, default=10)
    p.add_argument("--epochs", type=int, default=500)
    p.add_argument("--lr", type=float, default=1.0)
    p.add_argument("--l2", type=float, default=0.0)
    p.add_argument("--d-out", type=int, default=None)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--report", help="also write the report to this path")
    p.add_argument("--save-maps", help="directory for per-fold map files")
    p.set_defaults(func=cmd_cv)


def _add_abstract(sub):
    p = sub.add_parser("abstract", help="rank words by abstractness 0 >O X")
    p.add_argument("--embeddings", required=True)
    p.add_argument("--counts", required=True, help="word<TAB>count file written by train")
    p.add_argument("--min-freq", type=int, default=300)
    p.add_argument("--top", type=int, default=10)
    p.set_defaults(func=cmd_abstract)


def _add_gen(sub):
    p = sub.add_parser("gen", help="synthetic corpus with a planted taxonomy")
    p.add_argument("--levels", type=int, default=3)
    p.add_argument("--branching", type=int, default=5)
    p.add_argument("--tokens", type=int, default=2_000_000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out-corpus", required=True)
    p.add_argument("--out-pairs", required=True)
    p.set_defaults(func=cmd_gen)


def build_parser():
    parser = argparse.ArgumentParser(prog="word2hyp", description=__doc__.splitlines()[0])
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)
    for add in (_add_train, _add_eval, _add_cv, _add_abstract, _add_gen):
        add(sub)
    return parser


def _load_embeddings(path):
    from .evaluation import Embeddings
    from .model_io import load_embedding_file

    matrix, words = load_embedding_file(path)
    return Embeddings(words, matrix)


def _emit(text, report_path):
    sys.stdout.write(text)
    if report_path:
        with open(report_path, "w", encoding="utf-8") as fh:
            fh.write(text)


def cmd_train(args):
    from .model_io import save_checkpoint, save_counts, save_embeddings

    config = _trainer.TrainConfig(
        dim=args.dim, window=args.window, negative=args.negative, epochs=args.epochs,
        alpha=args.alpha, min_count=args.min_count, sample=args.sample, seed=args.seed,
        workers=args.workers, arch=args.arch, mode=args.mode, score=args.score,
        table_size=args.table_size)
    if not os.path.exists(args.corpus):
        raise FileNotFoundError(f"corpus not found: {args.corpus}")
    params = _trainer.train(args.corpus, config)
    save_embeddings(params, args.out, binary=args.binary)
    save_counts(params.vocab, args.out + ".counts")
    if args.checkpoint:
        save_checkpoint(params, args.checkpoint)
    s = params.stats
    print(f"vocab\t{len(params.vocab)}")
    print(f"words\t{s.words}")
    print(f"seconds\t{s.seconds:.2f}")
    print(f"words_per_sec\t{s.words_per_second:.0f}")
    print(f"final_loss\t{s.epoch_loss[-1]:.6f}")
    return 0


def cmd_eval(args):
    from .evaluation import evaluate, format_report, load_pairs

    emb = _load_embeddings(args.embeddings)
    report = evaluate(emb, load_pairs(args.pairs))
    _emit(format_report(report), args.report)
    return 0


def cmd_cv(args):
    from .evaluation import load_pairs
    from .semisup import MapConfig, evaluate_cv, format_cv_report, save_map

    emb = _load_embeddings(args.embeddings)
    config = MapConfig(epochs=args.epochs, lr=args.lr, l2=args.l2, d_out=args.d_out)
    cv = evaluate_cv(load_pairs(args.pairs), emb, args.folds, config, seed=args.seed)
    _emit(format_cv_report(cv), args.report)
    if args.save_maps:
        os.makedirs(args.save_maps, exist_ok=True)
        for f, lmap in enumerate(cv.maps):
            save_map(lmap, os.path.join(args.save_maps, f"fold{f}.map"))
    return 0


def cmd_abstract(args):
    from .evaluation import abstractness_score, rank_abstractness
    from .model_io import load_counts

    emb = _load_embeddings(args.embeddings)
    ranking = rank_abstractness(emb, load_counts(args.counts), args.min_freq)
    if not ranking:
        print(f"# note\tno words with frequency above {args.min_freq}")
        return 0
    top = ranking[:args.top]
    bottom = ranking[max(args.top, len(ranking) - args.top):]
    print("section\trank\tword\tscore")
    for r, w in enumerate(top, 1):
        print(f"top\t{r}\t{w}\t{abstractness_score(emb, w):.6f}")
    start = len(ranking) - len(bottom) + 1
    for r, w in enumerate(bottom, start):
        print(f"bottom\t{r}\t{w}\t{abstractness_score(emb, w):.6f}")
    return 0


def cmd_gen(args):
    from .evaluation import save_pairs
    from .synthetic import generate_taxonomy, planted_pairs, write_corpus

    tax = generate_taxonomy(args.levels, args.branching, seed=args.seed)
    write_corpus(tax, args.tokens, args.out_corpus, seed=args.seed)
    pairs = planted_pairs(tax, negatives_seed=args.seed)
    save_pairs(pairs, args.out_pairs)
    print(f"words\t{len(tax.nodes)}")
    print(f"tokens\t{args.tokens}")
    print(f"pairs\t{len(pairs)}")
    return 0


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.INFO,
                        format="%(asctime)s %(levelname)s %(message)s", stream=sys.stderr)
    try:
        return args.func(args)
    except (ValueError, OSError, KeyError, RuntimeError) as exc:
        print(f"word2hyp {args.command}: error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
