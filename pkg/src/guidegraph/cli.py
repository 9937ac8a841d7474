"""Command-line entry point wiring the pipeline stages.

Subcommands: extract, enrich, train, classify, synth, eval, export-csv.
Data goes to files or stdout; logs go to stderr.  Exit codes: 0 success,
1 input error, 2 unsupported feature, 3 internal error.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from dataclasses import replace

from . import classifier, concepts, serialize, tnm
from .config import load_config
from .errors import InputError, UnsupportedFeatureError
from .graph import build_graph
from .pdfcore import export_geometry, import_geometry, parse_document
from .synth import CorpusSpec, generate_document, score_extraction

logger = logging.getLogger("guidegraph")

EXIT_OK = 0
EXIT_INPUT = 1
EXIT_UNSUPPORTED = 2
EXIT_INTERNAL = 3


class _Parser(argparse.ArgumentParser):
    """argparse exits with code 2 on bad usage; the contract wants 1."""

    def error(self, message):
        self.print_usage(sys.stderr)
        raise InputError(message)


def _build_parser() -> _Parser:
    parser = _Parser(prog="guidegraph", description=__doc__)
    parser.add_argument("--config", help="TOML threshold overrides")
    parser.add_argument("--jobs", type=int, default=4,
                        help="worker cap for concurrent stages")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("extract", help="PDF or geometry file to JSON-LD graph")
    p.add_argument("input")
    p.add_argument("-o", "--output", required=True)
    p.add_argument("--emit-geometry", help="also dump interchange geometry")
    p.add_argument("--base-iri", default=serialize.DEFAULT_BASE_IRI)

    p = sub.add_parser("enrich", help="annotate a JSON-LD graph")
    p.add_argument("input")
    p.add_argument("-o", "--output", required=True)
    p.add_argument("--tnm", action="store_true", help="stage/TNM mentions")
    p.add_argument("--lexicon", help="lexicon TSV for concept mapping")
    p.add_argument("--overrides", help="override dictionary TSV")
    p.add_argument("--abbrev", help="abbreviation TSV")
    p.add_argument("--remote-endpoint", help="thesaurus search URL")
    p.add_argument("--remote-fixture", help="stub fixture JSON instead of HTTP")
    p.add_argument("--strict-remote", action="store_true")
    p.add_argument("--report", help="write the mapping report JSON here")
    p.add_argument("--base-iri", default=serialize.DEFAULT_BASE_IRI)

    p = sub.add_parser("train", help="fit the node classifier")
    p.add_argument("--dataset", required=True, help="label<TAB>text TSV")
    p.add_argument("--grid", help="JSON list of parameter combos")
    p.add_argument("--folds", type=int, default=10)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("-o", "--output", required=True)
    p.add_argument("--cv-report", help="write per-combo CV table here")

    p = sub.add_parser("classify", help="annotate node classes with a model")
    p.add_argument("input")
    p.add_argument("--model", required=True)
    p.add_argument("-o", "--output", required=True)
    p.add_argument("--base-iri", default=serialize.DEFAULT_BASE_IRI)

    p = sub.add_parser("synth", help="generate synthetic guideline PDFs")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--pages", type=int, default=1)
    p.add_argument("--columns", type=int, default=3)
    p.add_argument("--nodes-per-column", type=int, default=2)
    p.add_argument("--edge-density", type=float, default=0.9)
    p.add_argument("--footnote-rate", type=float, default=0.3)
    p.add_argument("--link-rate", type=float, default=1.0)
    p.add_argument("--jitter", type=float, default=0.0)
    p.add_argument("-o", "--output", help="PDF path (single-document mode)")
    p.add_argument("--truth", help="truth sidecar path (single-document mode)")
    p.add_argument("--batch", type=int,
                   help="generate this many documents (seeds seed..seed+N-1)")
    p.add_argument("--out-dir", help="directory for batch mode + manifest")
    p.add_argument("--base-iri", default=serialize.DEFAULT_BASE_IRI)

    p = sub.add_parser("eval", help="score an extraction against truth")
    p.add_argument("--extracted", required=True)
    p.add_argument("--truth", required=True)
    p.add_argument("-o", "--output")
    p.add_argument("--format", choices=["json"], default="json")

    p = sub.add_parser("export-csv", help="graph to nodes/edges CSV")
    p.add_argument("input")
    p.add_argument("--nodes", required=True)
    p.add_argument("--edges", required=True)
    return parser


def _read_text(path: str) -> str:
    with open(path, "r", encoding="utf-8") as fh:
        return fh.read()


def _write_text(path: str, text: str):
    if path == "-":
        sys.stdout.write(text)
    else:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text)


def _load_graph(path: str):
    return serialize.from_jsonld(_read_text(path))


def _cmd_extract(args, config):
    with open(args.input, "rb") as fh:
        data = fh.read()
    if data.startswith(b"%PDF-1."):
        sink = []
        doc = parse_document(data, config=config.pdf, warning_sink=sink)
        for w in sink:
            logger.warning("pdf: %s", w)
    else:
        doc = import_geometry(data.decode("utf-8"))
    if args.emit_geometry:
        _write_text(args.emit_geometry, export_geometry(doc))
    graph = build_graph(doc, config)
    _write_text(args.output, serialize.to_jsonld(graph, args.base_iri))
    return EXIT_OK


def _cmd_enrich(args, config):
    graph = _load_graph(args.input)
    if args.tnm:
        graph = tnm.annotate_tnm(graph)
    if args.lexicon:
        lexicon = concepts.load_lexicon(args.lexicon)
        overrides = (concepts.load_overrides(args.overrides)
                     if args.overrides else {})
        abbrev = (concepts.load_abbreviations(args.abbrev)
                  if args.abbrev else None)
        client = None
        if args.remote_fixture:
            client = concepts.StubThesaurusClient(args.remote_fixture)
        elif args.remote_endpoint:
            client = concepts.HttpThesaurusClient(args.remote_endpoint)
        cfg = replace(config.concepts, remote_inflight=max(1, args.jobs))
        graph = concepts.annotate_concepts(
            graph, lexicon, overrides, client=client, abbreviations=abbrev,
            strict_remote=args.strict_remote, config=cfg)
        if args.report:
            report = concepts.concept_report(graph)
            _write_text(args.report, json.dumps(report, indent=2) + "\n")
    _write_text(args.output, serialize.to_jsonld(graph, args.base_iri))
    return EXIT_OK


def _cmd_train(args, config):
    dataset = classifier.load_dataset_tsv(args.dataset)
    if args.grid:
        grid = json.loads(_read_text(args.grid))
        if not isinstance(grid, list):
            raise InputError("grid file must hold a JSON list of combos")
        grid = [dict(c) for c in grid]
        best, score, table = classifier.grid_search_cv(
            dataset, grid, k=args.folds, seed=args.seed)
        logger.info("best combo %s with mean accuracy %.4f", best, score)
        if args.cv_report:
            _write_text(args.cv_report, json.dumps(
                {"best_params": best, "best_mean_accuracy": score,
                 "table": table}, indent=2, default=str) + "\n")
        vocab_params, tfidf_params, sgd_params = classifier.split_params(
            best, seed=args.seed)
    else:
        vocab_params = classifier.VocabParams()
        tfidf_params = classifier.TfidfParams()
        sgd_params = classifier.SgdParams(seed=args.seed)
    model = classifier.train(dataset, vocab_params, tfidf_params, sgd_params)
    classifier.save_model(model, args.output)
    return EXIT_OK


def _cmd_classify(args, config):
    graph = _load_graph(args.input)
    model = classifier.load_model(args.model)
    annotations = {nid: dict(ann) for nid, ann in graph.annotations.items()}
    for node in graph.nodes:
        cls, _scores = classifier.predict(model, node.joined_text())
        annotations.setdefault(node.id, {})["node_class"] = cls
    graph = replace(graph, annotations=annotations)
    _write_text(args.output, serialize.to_jsonld(graph, args.base_iri))
    return EXIT_OK


def _cmd_synth(args, config):
    base = CorpusSpec(
        seed=args.seed, pages=args.pages, columns_per_page=args.columns,
        nodes_per_column=args.nodes_per_column, edge_density=args.edge_density,
        footnote_rate=args.footnote_rate, cross_page_link_rate=args.link_rate,
        jitter_pt=args.jitter,
    )
    if args.batch:
        if not args.out_dir:
            raise InputError("--batch requires --out-dir")
        import os

        os.makedirs(args.out_dir, exist_ok=True)
        manifest = []
        for i in range(args.batch):
            spec = replace(base, seed=args.seed + i)
            pdf, truth = generate_document(spec)
            pdf_path = os.path.join(args.out_dir, f"doc-{spec.seed:04d}.pdf")
            truth_path = os.path.join(args.out_dir,
                                      f"doc-{spec.seed:04d}.truth.jsonld")
            with open(pdf_path, "wb") as fh:
                fh.write(pdf)
            _write_text(truth_path, serialize.to_jsonld(truth, args.base_iri))
            manifest.append({
                "pdf": pdf_path, "truth": truth_path,
                "spec": {k: v for k, v in vars(spec).items()
                         if k != "vocabulary"},
            })
        _write_text(os.path.join(args.out_dir, "manifest.json"),
                    json.dumps(manifest, indent=2) + "\n")
        return EXIT_OK
    if not args.output or not args.truth:
        raise InputError("single-document mode requires -o and --truth")
    pdf, truth = generate_document(base)
    with open(args.output, "wb") as fh:
        fh.write(pdf)
    _write_text(args.truth, serialize.to_jsonld(truth, args.base_iri))
    return EXIT_OK


def _cmd_eval(args, config):
    extracted = _load_graph(args.extracted)
    truth = _load_graph(args.truth)
    report = score_extraction(extracted, truth)
    text = json.dumps(report.to_dict(), indent=2) + "\n"
    if args.output:
        _write_text(args.output, text)
    else:
        sys.stdout.write(text)
    logger.info("eval: %s", report.to_dict())
    return EXIT_OK


def _cmd_export_csv(args, config):
    graph = _load_graph(args.input)
    nodes_csv, edges_csv = serialize.export_csv(graph)
    _write_text(args.nodes, nodes_csv)
    _write_text(args.edges, edges_csv)
    return EXIT_OK


_COMMANDS = {
    "extract": _cmd_extract,
    "enrich": _cmd_enrich,
    "train": _cmd_train,
    "classify": _cmd_classify,
    "synth": _cmd_synth,
    "eval": _cmd_eval,
    "export-csv": _cmd_export_csv,
}


def run(argv=None) -> int:
    logging.basicConfig(stream=sys.stderr, level=logging.INFO,
                        format="%(levelname)s %(name)s: %(message)s")
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
        config = load_config(args.config)
        return _COMMANDS[args.command](args, config)
    except UnsupportedFeatureError as exc:
        logger.error("unsupported feature: %s", exc)
        return EXIT_UNSUPPORTED
    except InputError as exc:
        logger.error("%s", exc)
        return EXIT_INPUT
    except OSError as exc:
        logger.error("%s", exc)
        return EXIT_INPUT
    except Exception:  # pragma: no cover - internal failures
        logger.exception("internal error")
        return EXIT_INTERNAL


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
