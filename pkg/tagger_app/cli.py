"""
Command-line surface of the tagger: train, tag, eval, inspect, coverage,
context and profile.

Resource locations default to the TAGGER_* environment (see AppSettings)
and can be overridden per command.
"""

import argparse
import logging
import sys
from pathlib import Path
from typing import List, Optional

import pandas as pd
from rich.console import Console
from rich.table import Table

from tagger_app.api.services.genotype_service import GenotypeService
from tagger_app.api.services.lexicon_service import LexiconService
from tagger_app.api.services.pipeline_service import PipelineService
from tagger_app.api.services.tokenizer_service import TokenizerService
from tagger_app.resources.models import Genotype
from tagger_app.resources.store import Resources, load_resources
from tagger_app.utils.config import MODES, AppSettings, load_config
from tagger_app.utils.errors import TaggerError

logger = logging.getLogger(__name__)

console = Console()
err_console = Console(stderr=True)


def print_frame(frame: pd.DataFrame, title: str) -> None:
    table = Table(title=title)
    table.add_column("", style="cyan")
    for column in frame.columns:
        table.add_column(str(column), justify="right")
    for index, row in frame.iterrows():
        table.add_row(str(index), *(str(value) for value in row))
    console.print(table)


def _settings(args: argparse.Namespace) -> AppSettings:
    """Environment settings overridden by whichever resource flags were given"""
    overrides = {
        "tagset_path": args.tagset,
        "lexicon_path": args.lexicon,
        "rules_path": getattr(args, "rules", None),
        "model_path": getattr(args, "model", None),
        "compounds_path": getattr(args, "compounds", None),
        "config_path": args.config,
        "workers": getattr(args, "workers", None),
    }
    return load_config().model_copy(update={k: v for k, v in overrides.items() if v is not None})


def _resources(args: argparse.Namespace) -> Resources:
    return load_resources(_settings(args))


def cmd_train(args: argparse.Namespace) -> int:
    # only the tag set and lexicon are needed; the model may not exist yet
    settings = _settings(args).model_copy(update={"model_path": None, "rules_path": None})
    resources = load_resources(settings)
    corpus = GenotypeService.load_tagged_corpus(args.corpus)
    model = GenotypeService.train(
        corpus, resources.lexicon, resources.tagset, resources.cfg,
        tag_space=args.tag_space, strict=args.strict,
    )
    GenotypeService.save_model(model, args.out)
    print_frame(GenotypeService.corpus_profile(model).to_frame(label=Path(args.corpus).name), "Training corpus")
    return 0


def cmd_tag(args: argparse.Namespace) -> int:
    settings = _settings(args)
    resources = load_resources(settings)
    text = Path(args.input).read_text(encoding="utf-8") if args.input else sys.stdin.read()
    tagged = PipelineService.tag_text(text, resources, args.mode or settings.mode)
    sys.stdout.write(PipelineService.render_tagged(tagged, full_tags=args.full_tags, show_cost=args.show_cost))
    return 0


def cmd_eval(args: argparse.Namespace) -> int:
    resources = _resources(args)
    gold = GenotypeService.load_tagged_corpus(args.gold)
    report = PipelineService.evaluate(gold, resources, count_punct=args.count_punct)
    print_frame(report.to_frame(label=Path(args.gold).name), "Tagger accuracy")
    if args.errors:
        print_frame(report.errors_frame("full"), "Most frequent errors (full mode)")
    if args.report_json:
        Path(args.report_json).write_text(report.model_dump_json(indent=2), encoding="utf-8")
        console.print(f"[green]Report written to {args.report_json}[/green]")
    return 0


def cmd_inspect(args: argparse.Namespace) -> int:
    report = PipelineService.inspect(_resources(args))
    print_frame(report.to_frame(), "Transducer sizes")
    return 0


def cmd_coverage(args: argparse.Namespace) -> int:
    resources = _resources(args)
    test = GenotypeService.load_tagged_corpus(args.test)
    report = GenotypeService.coverage(resources.require_model(), test, resources.lexicon, resources.tagset, resources.cfg)
    print_frame(report.to_frame(), "Coverage of test n-gram genotypes")
    return 0


def cmd_context(args: argparse.Namespace) -> int:
    model = GenotypeService.load_model(args.model)
    try:
        genotype = Genotype.parse(args.genotype)
    except ValueError as e:
        raise TaggerError(str(e)) from None
    report = GenotypeService.context_report(model, genotype)
    if not report.rows:
        console.print(f"[yellow]Genotype {genotype} was not seen in training[/yellow]")
        return 0
    print_frame(report.to_frame().set_index("n-gram"), f"Contexts of {genotype}")
    print_frame(report.summary_frame(), f"Predictive power of {genotype}")
    return 0


def cmd_profile(args: argparse.Namespace) -> int:
    # only the tag set and lexicon are needed; the model may not exist yet
    settings = _settings(args).model_copy(update={"model_path": None, "rules_path": None})
    resources = load_resources(settings)
    corpus = GenotypeService.load_tagged_corpus(args.corpus)
    sentences = [TokenizerService.sentence_of(surface for surface, _ in sentence) for sentence in corpus]
    ambiguity = LexiconService.ambiguity_profile(sentences, resources.lexicon, resources.cfg)
    model = GenotypeService.train(corpus, resources.lexicon, resources.tagset, resources.cfg)
    print_frame(ambiguity.to_frame(), "Analyses per token")
    print_frame(GenotypeService.corpus_profile(model).to_frame(label=Path(args.corpus).name), "Genotype distribution")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="tagger", description="Genotype-based weighted transducer tagger")
    parser.add_argument("--log-level", default=None, help="Logging level (default from TAGGER_LOG_LEVEL)")
    sub = parser.add_subparsers(dest="command", required=True)

    def resource_args(p: argparse.ArgumentParser, model: bool = True, rules: bool = True) -> None:
        p.add_argument("--tagset", type=Path, help="Tag set file (full<TAB>short)")
        p.add_argument("--lexicon", type=Path, help="Full-form lexicon file")
        p.add_argument("--config", type=Path, help="key=value file overriding weight defaults")
        if model:
            p.add_argument("--model", type=Path, help="Genotype model file")
        if rules:
            p.add_argument("--rules", type=Path, help="Negative constraint rules")
            p.add_argument("--compounds", type=Path, help="Multiword expressions, one per line")
            p.add_argument("--workers", type=int, help="Sentences tagged in parallel")

    p = sub.add_parser("train", help="Count genotype n-grams from a tagged corpus")
    resource_args(p, model=False, rules=False)
    p.add_argument("--corpus", type=Path, required=True)
    p.add_argument("--out", type=Path, required=True)
    p.add_argument("--tag-space", choices=("collapsed", "full"), default="collapsed")
    p.add_argument("--strict", action="store_true", help="Fail when a gold tag is outside its genotype")
    p.set_defaults(func=cmd_train)

    p = sub.add_parser("tag", help="Tag raw text from a file or stdin")
    resource_args(p)
    p.add_argument("--input", type=Path)
    p.add_argument("--mode", choices=MODES, help="Tagging mode (default from TAGGER_MODE)")
    p.add_argument("--show-cost", action="store_true")
    p.add_argument("--full-tags", action="store_true")
    p.set_defaults(func=cmd_tag)

    p = sub.add_parser("eval", help="Accuracy of every mode against a gold corpus")
    resource_args(p)
    p.add_argument("--gold", type=Path, required=True)
    p.add_argument("--count-punct", action="store_true", help="Also report accuracy including punctuation")
    p.add_argument("--errors", action="store_true", help="Show the most frequent errors")
    p.add_argument("--report-json", type=Path)
    p.set_defaults(func=cmd_eval)

    p = sub.add_parser("inspect", help="States and arcs of the compiled machines")
    resource_args(p)
    p.set_defaults(func=cmd_inspect)

    p = sub.add_parser("coverage", help="Test n-gram genotypes seen in training")
    resource_args(p)
    p.add_argument("--test", type=Path, required=True)
    p.set_defaults(func=cmd_coverage)

    p = sub.add_parser("context", help="Context decisions for one genotype")
    p.add_argument("--model", type=Path, required=True)
    p.add_argument("--genotype", required=True, help="e.g. '[JMP NMP]'")
    p.set_defaults(func=cmd_context)

    p = sub.add_parser("profile", help="Ambiguity and genotype profile of a tagged corpus")
    resource_args(p, model=False, rules=False)
    p.add_argument("--corpus", type=Path, required=True)
    p.set_defaults(func=cmd_profile)

    return parser


def main(argv: Optional[List[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    level = args.log_level or load_config().log_level
    logging.basicConfig(
        level=getattr(logging, level.upper(), logging.INFO),
        format='%(asctime)s - %(levelname)s - %(message)s'
    )
    try:
        return args.func(args)
    except (TaggerError, OSError, ValueError) as e:
        err_console.print(f"[red]Error: {e}[/red]")
        return 1
