import argparse

from da_sfft.api.facegen.service import CorpusGenerationService


def generate_corpus(args: argparse.Namespace) -> int:
    CorpusGenerationService.prod().generate(args.seed, args.count, args.res, args.out)
    return 0
