"""Cross-lingual SRL by annotation projection with cost-sensitive bootstrapping."""

from .align import AlignmentSet, SentencePair, intersect, parse_alignments, write_alignments
from .bootstrap import BootstrapConfig, PartitionedData, Variant, bootstrap, checkpoint_metrics, partition
from .conll import PredicateFrame, Sentence, Token, parse_conll, write_conll
from .evaluation import EvalReport, emit_iteration_curves, score
from .features import Stage, extract_features
from .perceptron import LinearModel, TrainingInstance, perceptron_update, predict, train_stage
from .pipeline import ModelBundle, run_pipeline, train_supervised
from .project import (CostMode, CostVector, ProjectedInstance, assign_costs, completeness_cost,
                      dep_match_cost, filter_by_density, project_corpus, project_pair,
                      projection_density)
from .synth import SynthConfig, generate

__version__ = "0.1.0"
