from enum import Enum

class EngineErrorMessages(Enum):
    # shape related errors
    MATMUL_SHAPE_MISMATCH = "matmul: inner dimensions disagree for shapes {} and {}"
    MATMUL_BATCH_MISMATCH = "matmul: batch dimensions of shapes {} and {} are not broadcastable"
    MATMUL_RANK = "matmul: both operands need at least 2 dimensions, got shapes {} and {}"
    CHANNEL_MISMATCH = "{}: channel dimension of input shape {} does not match weight shape {}"
    FILTER_SHAPE_MISMATCH = "{}: joints/channels of input shape {} do not match filter shape {}"
    EVEN_TEMPORAL_KERNEL = "{}: temporal kernel size must be odd, got {}"
    INVALID_STRIDE = "{}: stride must be a positive integer, got {}"
    BROADCAST_MISMATCH = "{}: shapes {} and {} are not broadcastable"
    RESHAPE_MISMATCH = "reshape: cannot reshape {} into {}"
    AXIS_OUT_OF_RANGE = "{}: axis {} is out of range for shape {}"
    BN_EPS_NOT_POSITIVE = "batch_norm: eps must be positive, got {}"
    BN_AFFINE_MISMATCH = "batch_norm: gamma/beta length {} does not match channel count {}"
    POOL_SIZE_OUT_OF_RANGE = "adaptive_temporal_pool: pooled size must be in [1, {}], got {}"
    UNKNOWN_POOL_KIND = "pool: unknown pooling kind {}"
    UNKNOWN_ACTIVATION = "activation: unknown activation kind {}"
    LABEL_OUT_OF_RANGE = "cross_entropy: label {} is outside [0, {})"
    EMPTY_CONCAT = "{}: needs at least one tensor"

    # tape related errors
    NON_SCALAR_LOSS = "backward: loss must hold exactly one value, got shape {}"
    NOT_ON_TAPE = "backward: loss is not connected to any tensor that requires gradients"
    NON_DETERMINISTIC_FUNCTION = "finite_diff_check: function returned {} then {} for identical inputs"
    NON_POSITIVE_STEP = "finite_diff_check: step h must be positive, got {}"

    # module related errors
    STATE_DICT_MISSING_KEY = "load_state_dict: missing tensor {}"
    STATE_DICT_UNEXPECTED_KEY = "load_state_dict: unexpected tensor {}"
    STATE_DICT_SHAPE_MISMATCH = "load_state_dict: tensor {} has shape {} but the model expects {}"

class SkeletonErrorMessages(Enum):
    UNKNOWN_SKELETON = "Unknown skeleton name {}; expected one of {}"
    EDGE_OUT_OF_RANGE = "Edge ({}, {}) references a joint outside [0, {})"
    SELF_LOOP = "Edge ({}, {}) is a self-loop"
    DISCONNECTED = "Skeleton graph is disconnected: joints {} are unreachable from the root"
    ROOT_OUT_OF_RANGE = "Root joint {} is outside [0, {})"
    UNSUPPORTED_PARTITION = "Unsupported spatial partition count K_S={}; expected 1 or 3"
    CUSTOM_EDGES_REQUIRED = "A custom skeleton needs an edge list"
    JOINT_COUNT_NOT_POSITIVE = "Joint count must be positive, got {}"
    NAME_COUNT_MISMATCH = "Skeleton has {} joints but {} joint names"
    SKELETON_FILE_INVALID = "Skeleton file {} is not valid: {}"

class NetworkErrorMessages(Enum):
    JOINT_MISMATCH = "{}: input has {} joints but the skeleton has {}"
    FRAME_MISMATCH = "{}: input has {} frames but the network expects {}"
    INPUT_CHANNEL_MISMATCH = "{}: input has {} coordinate channels but the network expects {}"
    TOPOLOGY_SHAPE_MISMATCH = "{}: topology shape {} does not match K_S={} and N={}"
    RATIO_MISMATCH = "JSFL: block input width {} is not divisible by the reduction ratio {}"
    POOLED_SIZE_TOO_LARGE = "JSFL: pooled size T_P={} exceeds the block input length {}"
    VIEW_INDEX_OUT_OF_RANGE = "VATL: view index {} is outside [0, {})"
    EMPTY_TOPOLOGY_SET = "VATL: the view topology set is empty"
    UNKNOWN_VARIANT = "Unknown model variant {}; expected one of {}"
    UNKNOWN_FILTER_MODE = "Unknown JSFL filter mode {}; expected one of {}"

class ObjectiveErrorMessages(Enum):
    NON_FINITE_PART = "total_loss: loss part {} is not finite ({})"
    BATCH_SIZE_MISMATCH = "{}: {} embeddings but {} labels"
    VIEW_LABEL_OUT_OF_RANGE = "view_ce_loss: view label {} is outside [0, {})"
    DEGENERATE_BATCH = "{}: batch has no valid pairs/triplets (labels = {}); loss defined as 0"

class DataErrorMessages(Enum):
    FILE_NOT_FOUND = "Sequence file {} does not exist"
    MALFORMED_LINE = "{}: line {} is not valid JSON ({})"
    MISSING_HEADER_FIELD = "{}: header is missing field {}"
    EMPTY_FILE = "{}: file has no header line"
    NO_FRAMES = "{}: file has a header but no frames"
    JOINT_COUNT_MISMATCH = "{}: line {}: expected {}, got {} joints"
    HEADER_JOINT_MISMATCH = "{}: header declares n={} but the skeleton expects {}"
    CHANNEL_COUNT_MISMATCH = "{}: line {}: joint {} has {} values, expected {}"
    NON_FINITE_COORDINATE = "{}: line {}: coordinates must be finite"
    VIEW_OUT_OF_RANGE = "View index {} is outside [0, {})"
    INSUFFICIENT_SUBJECTS = "Corpus has {} subjects but the batch needs p={}"
    EMPTY_CORPUS = "No sequence files found under {}"
    TARGET_LENGTH_NOT_POSITIVE = "Target length must be positive, got {}"
    UNKNOWN_SAMPLING_MODE = "Unknown sampling mode {}; expected train or eval"
    SYNTH_NEEDS_NAMED_JOINTS = "The synthetic walker needs a named skeleton (coco17 or body18), got {}"
    UNKNOWN_CONDITION = "Unknown walking condition {}; expected one of {}"
    EMPTY_GALLERY_OR_PROBE = "rank1: gallery and probe tables must be non-empty (gallery = {}, probe = {})"
    CORPUS_CHANNEL_MISMATCH = "{}: sequence has {} coordinate channels but the network expects {}"
    NO_RECORDS_SELECTED = "No sequences left after selecting {}"

class ConfigErrorMessages(Enum):
    CONFIG_NOT_FOUND = "Config file {} does not exist"
    CONFIG_UNREADABLE = "Config file {} could not be parsed: {}"
    CONFIG_INVALID = "Config file {} failed validation: {}"
    UNSUPPORTED_CONFIG_SUFFIX = "Config file {} must be .toml or .json"
    UNKNOWN_PROFILE = "Unknown network profile {}; expected one of {}"
    CORPUS_DIR_MISSING = "No corpus directory given; pass --corpus or set data.corpus_dir"

class CheckpointErrorMessages(Enum):
    CHECKPOINT_NOT_FOUND = "Checkpoint {} does not exist"
    VERSION_MISSING = "Checkpoint {} has no format_version field"
    VERSION_MISMATCH = "Checkpoint {} has format version {} but this build reads version {}"
    CONFIG_MISMATCH = "Checkpoint {} was trained with a different network config: {}"

class CommandErrorMessages(Enum):
    GRADCHECK_FAILED = "Gradient check failed for: {}"
    INTERNAL_ERROR = "Unexpected error: {}"
    VARIANT_WITHOUT_VATL = "{} needs a variant with VATL, got {}"
    VARIANT_WITHOUT_JSFL = "{} needs a variant with JSFL, got {}"
    BLOCK_INDEX_OUT_OF_RANGE = "CAG block index {} is outside [0, {})"
    UNKNOWN_TOPOLOGY_MASK = "Topology mask {} must be three 0/1 digits with at least one 1, or \"all\""
