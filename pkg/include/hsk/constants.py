from typing import List, Tuple


DEBUG = False

# checkpoint framing
CHECKPOINT_MAGIC = b"HSKCKPT\x00"
CHECKPOINT_FORMAT = "1.0"
CHECKPOINT_FILENAME = "checkpoint.hsk"

# run directory layout
RUN_CONFIG_FILENAME = "config.yaml"
RUN_MANIFEST_FILENAME = "manifest.json"
RUN_HISTORY_FILENAME = "history.csv"

CONFIG_SCHEMA_VERSION = "1.0"

DEFAULT_CONFIG = {
    "hidden_size": 64,
    "batch_size": 32,
    "epochs": 300,
    "lr": 0.001,
    "weight_decay": 0.001,
    "eval_every": 10,
    "seed": 0,
    "mode": "single",
    "layers": 2,
    "split_ratio": 0.9,
    "precision": "float64",
    "embeddings.dim": 8,
    "embeddings.ngram_len": 3,
    "embeddings.seed": 0,
}

ADAM_BETA1 = 0.9
ADAM_BETA2 = 0.999
ADAM_EPSILON = 1e-8

DEFAULT_REPETITIONS = 10

# placeholder fed to the encoder for posts without tokens
EMPTY_TOKEN = "<empty>"

# URLs: http(s) scheme or a bare t.co shortener, up to the next whitespace
URL_PATTERN = r"(?:https?://|\bt\.co/)\S*"

# '#' and '@' stay attached to the word that follows them
PUNCTUATION = "".join(
    sorted((set("!\"$%&'()*+,-./:;<=>?[\\]^_`{|}~") |
            set("…“”‘’«»¡¿–—")))
)

# pictographic / emoji code points removed by the preprocessor (inclusive ranges)
EMOJI_RANGES: List[Tuple[int, int]] = [
    (0x200D, 0x200D),      # zero width joiner
    (0x20E3, 0x20E3),      # combining enclosing keycap
    (0x2300, 0x23FF),      # miscellaneous technical
    (0x2600, 0x26FF),      # miscellaneous symbols
    (0x2700, 0x27BF),      # dingbats
    (0x2B00, 0x2BFF),      # miscellaneous symbols and arrows
    (0x3030, 0x3030),
    (0x303D, 0x303D),
    (0x3297, 0x3297),
    (0x3299, 0x3299),
    (0xFE00, 0xFE0F),      # variation selectors
    (0x1F000, 0x1FAFF),    # tiles, cards, enclosed supplements, pictographs, emoticons...
    (0xE0020, 0xE007F),    # tag characters
]

BASELINE_NGRAM_RANGE = (1, 4)
BASELINE_HASH_FEATURES = 2 ** 18
BASELINE_EPOCHS = 100
BASELINE_LR = 0.05
BASELINE_WEIGHT_DECAY = 1e-4

TSNE_PERPLEXITY = 30.0
TSNE_ITERATIONS = 1000
TSNE_EXAGGERATION = 12.0
TSNE_EXAGGERATION_ITERATIONS = 250
TSNE_MOMENTUM = 0.5
TSNE_FINAL_MOMENTUM = 0.8
TSNE_LEARNING_RATE = 200.0
TSNE_MIN_GAIN = 0.01
TSNE_INIT_STD = 1e-4
