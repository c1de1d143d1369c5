"""depconj: a proof kernel for a preorder calculus built from adjunctions,
with dependent conjunction and implication, set-bounded quantifier
elaboration, description terms, and a finite-model soundness oracle."""

__version__ = "0.1.0"
