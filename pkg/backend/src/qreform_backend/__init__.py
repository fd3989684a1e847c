"""Prefix-controlled seq2seq reformulation backend.

Two-stage training (weak pretraining on REP/ROO pairs, annotated
finetuning across all operators) for a BART-class encoder-decoder, plus
an HTTP inference server implementing the reformulation wire protocol.
"""

__version__ = "0.1.0"
