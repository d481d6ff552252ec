"""Proof kernel and symbolic consistency toolkit for satisfaction-class
logic over arithmetic: coding, syntax, the infinitary and template proof
systems, the approximating-function algebra, the bounded proof translation,
template-structure semantics, witness constructions, and the batch CLI."""

__version__ = "0.1.0"
