"""Exact arithmetic engine for the framed topological vertex."""

from .partitions import Partition
from .qnum import SYMBOLIC, NumericHalf, QRat, bracket, qfact, qpow
from .vertex import Framing, VertexKey, w_bogoliubov, w_det_f, w_skew

__all__ = [
    "Partition",
    "QRat",
    "SYMBOLIC",
    "NumericHalf",
    "bracket",
    "qfact",
    "qpow",
    "Framing",
    "VertexKey",
    "w_skew",
    "w_det_f",
    "w_bogoliubov",
]
