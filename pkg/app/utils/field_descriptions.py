from enum import Enum

class JsflConfigFieldDescriptions(Enum):
    POOLED_LENGTH = "Pooled temporal size T_P the block input is reduced to before filter generation"
    REDUCTION_RATIO = "Channel reduction ratio r of the spatial branch bottleneck"
    INFLATION_RATIO = "Temporal inflation ratio alpha of the temporal branch (T_P -> alpha * T_P)"
    SPATIAL_KERNELS = "Spatial kernel count K_S, equal to the number of adjacency partitions"
    TEMPORAL_KERNEL = "Temporal kernel size K_T of the generated depthwise temporal filters (odd)"
    FILTER_MODE = "adaptive: per-sequence per-joint filters, static: learned filters shared by all sequences, global: one generated filter set shared by all joints"

class NetworkConfigFieldDescriptions(Enum):
    PROFILE = "Name of the profile this config was built from, informational only"
    VARIANT = "Model variant: baseline, jsfl-only, vatl-only, cag-joint or cag-two-stream"
    SKELETON = "Skeleton convention: coco17, body18 or custom"
    CUSTOM_SKELETON_PATH = "Path of a custom skeleton JSON file, used when skeleton is custom"
    CUSTOM_SKELETON = "Inline custom skeleton {n, edges, root}, used when skeleton is custom and no path is given"
    INPUT_CHANNELS = "Coordinate channels per joint: 2 for (x, y), 3 with confidence"
    FRAMES = "Input sequence length T in frames"
    EMBEDDING_CHANNELS = "Output width of the embedding graph block"
    BLOCK_CHANNELS = "Output widths of the four stacked graph blocks"
    BLOCK_STRIDES = "Temporal stride of each of the four stacked graph blocks"
    HEAD_CHANNELS = "Output width of every per-scale head"
    VIEW_COUNT = "Number of camera views K_V"
    VATL_EMBEDDING_CHANNELS = "Width of the graph block inside the view classifier"
    VATL_TEMPORAL_KERNEL = "Temporal kernel of the graph block inside the view classifier"
    TEMPORAL_KERNEL = "Temporal kernel of the dense graph blocks and the embedding block"
    TOPOLOGY_COEFFICIENTS = "Weights (g1, g2, g3) of the selected, mixed and fixed topologies"
    TOPOLOGY_MASK = "Which of the three topologies take part, as booleans (g1, g2, g3)"
    JSFL = "Joint-specific filter learning settings shared by every CAG block"

class LossConfigFieldDescriptions(Enum):
    TRIPLET_MARGIN = "Margin of the batch-all triplet loss"
    CIRCLE_MARGIN = "Relaxation margin m of the circle loss"
    CIRCLE_SCALE = "Scale factor gamma of the circle loss"
    CIRCLE_DETACH_WEIGHTS = "Treat the circle loss pair weights as constants during backward"
    TRIPLET_WEIGHT = "Weight lambda_1 of the triplet loss"
    CIRCLE_WEIGHT = "Weight lambda_2 of the circle loss"
    VIEW_WEIGHT = "Weight lambda_3 of the view cross-entropy loss"

class OptimizerConfigFieldDescriptions(Enum):
    LEARNING_RATE = "Adam learning rate of every parameter outside the view classifier"
    VATL_LEARNING_RATE = "Adam learning rate of the view-adaptive topology module"
    BETAS = "Adam moment decay rates (beta1, beta2)"
    EPS = "Adam denominator guard"
    WEIGHT_DECAY = "L2 penalty added to every gradient"
    WARMUP_EPOCHS = "Epochs of linear learning rate warmup from zero"
    DECAY_EPOCHS = "Epochs at which the learning rate is multiplied by decay_ratio"
    DECAY_RATIO = "Multiplicative step decay ratio"

class DataConfigFieldDescriptions(Enum):
    CORPUS_DIR = "Root of the corpus tree <subject>/<sequence>/<view>.jsonl"
    GALLERY_SEQUENCES = "Sequence tags that form the gallery set"
    PROBE_SEQUENCES = "Sequence tags that form the probe set, every non-gallery tag when empty"
    TRAIN_SUBJECTS = "Subjects used for training, all subjects when empty"
    EVAL_SUBJECTS = "Subjects used for evaluation, all subjects when empty"
    EXCLUDE_IDENTICAL_VIEW = "Mask gallery rows sharing the probe view"

class TrainingConfigFieldDescriptions(Enum):
    EPOCHS = "Number of training epochs"
    STEPS_PER_EPOCH = "Batches per epoch, derived from the corpus size when empty"
    BATCH = "Subjects p and sequences per subject k of every batch"
    PREFETCH = "Prepare batches on a worker thread"
    PREFETCH_DEPTH = "Capacity of the prefetch queue"
    CHECKPOINT_EVERY = "Write a checkpoint every n epochs, only at the end when 0"
    EVAL_BATCH_SIZE = "Sequences per forward pass when extracting embeddings"

class RunConfigFieldDescriptions(Enum):
    SEED = "Seed of parameter initialization and batch sampling"
    CHECKPOINT_PATH = "Where the trained model checkpoint is written"
    METRICS_PATH = "Where the JSONL metric log is written"

class CommandOptionDescriptions(Enum):
    CONFIG = "Run config file (.toml or .json)"
    PROFILE = "Network profile the config starts from (casia-b, ou-mvlp, desk, tiny)"
    CORPUS = "Corpus directory, overrides data.corpus_dir of the run config"
    TOPOLOGY_MASK = "Train once per VATL topology mask (three 0/1 digits, or all) and log the final losses"
    CHECKPOINT = "Checkpoint file, defaults to checkpoint_path of the run config"
    EVAL_CSV = "Also write the accuracy matrices to this CSV file"
    SUBJECTS = "Number of synthetic subjects"
    VIEWS = "Number of camera views, spread uniformly over 0..180 degrees"
    SEQUENCES = "Sequences per subject and view"
    OUT_DIR = "Directory the corpus is written to"
    FRAMES = "Frames per synthetic sequence"
    SEED = "Seed of the synthetic corpus"
    SKELETON = "Joint layout of the synthetic walkers"
    INPUT_CHANNELS = "2 for (x, y), 3 for (x, y, confidence)"
    TOLERANCE = "Largest accepted relative error"
    STEP = "Central difference step"
    GRADCHECK_SEED = "Seed of the random inputs and weights"
    SKIP_NETWORK = "Leave out the whole-network case"
    VARIANT = "Only report this variant"
    COMPLEXITY_FRAMES = "Sequence length, defaults to the profile's"
    FLOPS_PER_MAC = "FLOPs counted per multiply-accumulate"
    OUT_CSV = "CSV file to write"
    BLOCK = "CAG block index of the joint stream, defaults to the last block"
