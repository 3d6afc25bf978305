"""Style-embedded TTS: extract a 6-way style embedding from a speech query
and condition a multi-model TTS pipeline on it."""

__version__ = "0.1.0"
