import argparse

from da_sfft.api.degradation.service import DegradationService


def degrade_corpus(args: argparse.Namespace) -> int:
    DegradationService.prod().degrade_manifest(args.manifest, args.seed, (args.m_min, args.m_max), args.out,
                                               dump_layers=args.dump_layers)
    return 0
