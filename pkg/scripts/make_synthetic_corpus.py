"""Write a small labeled PPM corpus (subdirs layout) for smoke runs.

    python scripts/make_synthetic_corpus.py constant out/constant
    python scripts/make_synthetic_corpus.py textured out/textured --classes 5 --per-class 20 --seed 1
"""

import argparse

from btcluster.synthetic import write_constant_corpus, write_textured_corpus


def main():
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("kind", choices=["constant", "textured"])
    p.add_argument("root")
    p.add_argument("--classes", type=int, default=10)
    p.add_argument("--per-class", type=int, default=5)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--size", type=int, nargs=2, default=(16, 16), metavar=("H", "W"))
    args = p.parse_args()
    if args.kind == "constant":
        write_constant_corpus(args.root, args.classes, args.per_class, tuple(args.size))
    else:
        write_textured_corpus(args.root, args.seed, args.classes, args.per_class, tuple(args.size))
    print(f"wrote {args.classes * args.per_class} images under {args.root}")


if __name__ == "__main__":
    main()
