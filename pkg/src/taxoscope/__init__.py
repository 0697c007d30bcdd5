"""taxoscope: LLM-based constraint characterization of a regulatory corpus."""

__version__ = "0.1.0"
