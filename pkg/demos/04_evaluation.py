"""Tampering evaluation on a synthetic dataset.

Generates a 10-document collection whose untampered evidence matches
each query image exactly while every confounder is orthogonal, then runs
the random-location strategy and prints verification accuracy and AUC
(both must come out 1.00 on this construction).
"""

import sys
import tempfile
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parent.parent / "tests"))
from conftest import build_eval_env

from crossmodal.evaluation import load_catalog, load_documents, parse_strategy, run_evaluation
from crossmodal.evaluation.runner import EvaluationScorer, render_table
from crossmodal.features import FixtureEmbedProvider, FixtureFaceDetector, Modality


def main():
    with tempfile.TemporaryDirectory() as tmp:
        env = build_eval_env(Path(tmp) / "eval")
        documents = load_documents(env.dataset_path)
        catalog = load_catalog(env.catalog_path)
        scorer = EvaluationScorer(
            providers={
                Modality.LOCATION: FixtureEmbedProvider.from_file(
                    Modality.LOCATION, env.vectors_path
                )
            },
            detector=FixtureFaceDetector({}),
        )
        run = run_evaluation(
            documents, catalog, parse_strategy("random-location"), scorer, seed=7
        )
        print(render_table([run]))
        print(f"documents: {run.dataset_size}, excluded: {run.excluded}")
        print(f"first pair (untampered vs tampered): {run.pairs[0][1]} vs {run.pairs[0][2]}")


if __name__ == "__main__":
    main()
