"""Lossless recoding of bit streams through run tokens.

Any bit string splits uniquely into tokens ``0, 10, 110, ...`` plus a tail of
1s. Remapping the tokens through a Huffman, Shannon or palindromic codebook
gives compression, a baseline, or a code that decodes from both ends.
"""

from .bitio import BitCursor, BitVector, BitWriter, append_bit, concat, from_bytes, reverse, to_bytes
from .coders import (
    CodeBook,
    build_huffman,
    build_identity,
    build_shannon,
    build_symmetric,
    decode,
    decode_reverse,
    encode,
    kraft_sum,
    palindrome,
)
from .container import Archive, Mode, compress, decompress, pack, unpack
from .model import FrequencyTable, count, entropy_bits_per_token, identity_payload_bits
from .tokenizer import TokenStream, detokenize, token_bits, tokenize

__version__ = "0.1.0"
