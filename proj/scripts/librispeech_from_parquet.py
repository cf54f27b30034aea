#!/usr/bin/env python3
# Copyright 2026 The Vocalis Authors
#
# Licensed under the Apache License, Version 2.0
"""Extract LibriSpeech FLAC files from a HuggingFace parquet shard.

The parquet conversion of openslr/librispeech_asr stores each utterance's
original FLAC bytes in the `audio` column. This writes them back out as
individual .flac files, sampling rows uniformly across the shard so many
speakers are represented.

Usage:
    # e.g. first download a shard (~340 MB for validation.clean):
    # curl -LO https://huggingface.co/datasets/openslr/librispeech_asr/resolve/main/clean/validation/0000.parquet
    python3 scripts/librispeech_from_parquet.py 0000.parquet out_dir --count 160
"""

import argparse
import os

import pyarrow.parquet as pq


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("parquet", help="parquet shard with an 'audio' column")
    parser.add_argument("out_dir", help="directory to write .flac files into")
    parser.add_argument("--count", type=int, default=160,
                        help="number of utterances to extract (default 160)")
    args = parser.parse_args()

    shard = pq.ParquetFile(args.parquet)
    total = shard.metadata.num_rows
    step = max(1, total // args.count)
    wanted = set(range(0, total, step))

    os.makedirs(args.out_dir, exist_ok=True)
    written = 0
    row = 0
    for batch in shard.iter_batches(batch_size=64, columns=["audio", "id"]):
        for record in batch.to_pylist():
            if row in wanted and written < args.count:
                path = os.path.join(args.out_dir, record["id"] + ".flac")
                with open(path, "wb") as fh:
                    fh.write(record["audio"]["bytes"])
                written += 1
            row += 1
    print(f"wrote {written} files to {args.out_dir}")


if __name__ == "__main__":
    main()
