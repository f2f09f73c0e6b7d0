"""Constants for the reduced-GE OSD library."""

# Packing width of BitMatrix rows
WORD_BITS = 64

# Primitive polynomials per extension degree, bit i = coefficient of x^i
PRIMITIVE_POLYNOMIALS: dict[int, int] = {
    3: 0b1011,  # x^3 + x + 1
    4: 0b10011,  # x^4 + x + 1
    5: 0b100101,  # x^5 + x^2 + 1
    6: 0b1000011,  # x^6 + x + 1
    7: 0b10001001,  # x^7 + x^3 + 1
    8: 0b100011101,  # x^8 + x^4 + x^3 + x^2 + 1
    9: 0b1000010001,  # x^9 + x^4 + 1
    10: 0b10000001001,  # x^10 + x^3 + 1
    11: 0b100000000101,  # x^11 + x^2 + 1
    12: 0b1000001010011,  # x^12 + x^6 + x^4 + x + 1
    13: 0b10000000011011,  # x^13 + x^4 + x^3 + x + 1
    14: 0b100010001000011,  # x^14 + x^10 + x^6 + x + 1
    15: 0b1000000000000011,  # x^15 + x + 1
    16: 0b10001000000001011,  # x^16 + x^12 + x^3 + x + 1
}
MIN_FIELD_DEGREE = 3
MAX_FIELD_DEGREE = 16

# Decoder guards
CHASE_MAX_P = 20
ML_MAX_K = 16
ROW_SPACE_MAX_ROWS = 20
MAX_CANDIDATE_COUNT = 2**63 - 1

# Decoder names
DECODER_CLASSIC = "classic"
DECODER_STAGED = "staged"
DECODER_ONEPASS = "onepass"
DECODER_CHASE = "chase"
DECODER_ML = "ml"
DECODERS = [DECODER_CLASSIC, DECODER_STAGED, DECODER_ONEPASS, DECODER_CHASE, DECODER_ML]

TRANSMIT_ZERO = "zero"
TRANSMIT_RANDOM = "random"
ALPHA_AUTO = "auto"

# Config Keys
CONF_CODE = "code"
CONF_DECODER = "decoder"
CONF_ORDER = "order"
CONF_BMAX = "bmax"
CONF_STAGES = "stages"
CONF_ALPHA = "alpha"
CONF_P = "p"
CONF_SNR = "snr"
CONF_FRAMES = "frames"
CONF_MAX_ERRORS = "max_errors"
CONF_SEED = "seed"
CONF_WORKERS = "workers"
CONF_OUT = "out"
CONF_TRANSMIT = "transmit"
CONF_CHUNK_SIZE = "chunk_size"
CONF_N = "n"
CONF_K = "k"
CONF_BLR = "blr"
CONF_SAMPLES = "samples"

# Defaults
DEFAULT_DECODER = DECODER_STAGED
DEFAULT_ORDER = 2
DEFAULT_STAGES = 2
DEFAULT_CHASE_P = 7
DEFAULT_FRAMES = 10_000
DEFAULT_MAX_ERRORS = 100
DEFAULT_SEED = 1
DEFAULT_WORKERS = 1
DEFAULT_CHUNK_SIZE = 64
DEFAULT_INSPECT_SAMPLES = 1000

# CSV output
CSV_COLUMNS = [
    "snr_db",
    "frames",
    "word_errors",
    "ml_errors",
    "wer",
    "mld_lb_wer",
    "ber",
    "mean_candidates",
    "mean_dependencies",
    "mean_stage2_rowops",
]

# Exit codes
EXIT_OK = 0
EXIT_CONFIG_ERROR = 1
EXIT_IO_ERROR = 2

# Published three-stage cost quoted for (n, k, b_lr, alpha) that disagrees
# with the product it is printed next to
MISQUOTED_THREE_STAGE_COSTS: dict[tuple[int, int, int, int], int] = {
    (256, 128, 64, 32): 559_992,
}

# Reprocessing: patterns scored per vectorised block, and the largest
# phase whose pattern index array is kept between frames
PATTERN_CHUNK = 4096
PATTERN_CACHE_LIMIT = 1 << 18
