"""The multimodal dual-recurrent style classifier.

Two recurrent encoders run in parallel: one over MFCC frames (its final
state is joined with the utterance prosody vector and projected), one over
word-token embeddings. The concatenated representation passes through a
single batch-norm layer (the domain-adaptation point) and a dense layer to
6 logits; the softmax over those logits doubles as the style embedding.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import torch
from torch import Tensor, nn
from torch.nn.utils.rnn import pack_padded_sequence

from ..corpus.labels import NUM_STYLES
from .embedding import StyleEmbedding


@dataclass(frozen=True)
class ClassifierConfig:
    mfcc_dim: int = 39
    prosody_dim: int = 35
    token_dim: int = 300
    audio_hidden: int = 128
    text_hidden: int = 128
    audio_out: int = 128
    # Fraction of the running statistic kept per batch-norm update.
    bn_momentum: float = 0.9
    num_styles: int = NUM_STYLES
    seed: int = 0


class StyleClassifier(nn.Module):
    def __init__(self, config: ClassifierConfig):
        super().__init__()
        self.config = config
        self.audio_rnn = nn.GRU(config.mfcc_dim, config.audio_hidden, batch_first=True)
        self.audio_proj = nn.Linear(config.audio_hidden + config.prosody_dim, config.audio_out)
        self.text_rnn = nn.GRU(config.token_dim, config.text_hidden, batch_first=True)
        joint = config.audio_out + config.text_hidden
        # torch's momentum is the weight of the new value, ours of the old.
        self.bn = nn.BatchNorm1d(joint, momentum=1.0 - config.bn_momentum)
        self.head = nn.Linear(joint, config.num_styles)

    def pre_bn(
        self,
        mfcc: Tensor,
        mfcc_lens: Tensor,
        prosody: Tensor,
        tokens: Tensor,
        token_lens: Tensor,
    ) -> Tensor:
        """Concatenated audio+text representation, before batch norm."""
        if mfcc.shape[-1] != self.config.mfcc_dim:
            raise ValueError(f"expected mfcc dim {self.config.mfcc_dim}, got {mfcc.shape[-1]}")
        if prosody.shape[-1] != self.config.prosody_dim:
            raise ValueError(f"expected prosody dim {self.config.prosody_dim}, got {prosody.shape[-1]}")
        if tokens.shape[-1] != self.config.token_dim:
            raise ValueError(f"expected token dim {self.config.token_dim}, got {tokens.shape[-1]}")
        packed_a = pack_padded_sequence(mfcc, mfcc_lens.cpu(), batch_first=True, enforce_sorted=False)
        _, h_audio = self.audio_rnn(packed_a)
        audio = torch.relu(self.audio_proj(torch.cat([h_audio[-1], prosody], dim=1)))
        packed_t = pack_padded_sequence(tokens, token_lens.cpu(), batch_first=True, enforce_sorted=False)
        _, h_text = self.text_rnn(packed_t)
        return torch.cat([audio, h_text[-1]], dim=1)

    def forward(self, mfcc, mfcc_lens, prosody, tokens, token_lens) -> Tensor:
        return self.head(self.bn(self.pre_bn(mfcc, mfcc_lens, prosody, tokens, token_lens)))

    @torch.no_grad()
    def embed_batch(self, mfcc, mfcc_lens, prosody, tokens, token_lens) -> np.ndarray:
        """Softmax rows, one per utterance. Deterministic in eval mode."""
        was_training = self.training
        self.eval()
        try:
            logits = self.forward(mfcc, mfcc_lens, prosody, tokens, token_lens)
            probs = torch.softmax(logits.double(), dim=1)
        finally:
            self.train(was_training)
        return probs.numpy()

    @torch.no_grad()
    def embed_one(self, mfcc, mfcc_lens, prosody, tokens, token_lens) -> StyleEmbedding:
        row = self.embed_batch(mfcc, mfcc_lens, prosody, tokens, token_lens)[0]
        return StyleEmbedding(row / row.sum())


def build_classifier(config: ClassifierConfig) -> StyleClassifier:
    """Construct with deterministic initialization from config.seed."""
    torch.manual_seed(config.seed)
    return StyleClassifier(config)
