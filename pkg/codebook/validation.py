"""
Code book validation.

Checks the orthogonality a CDMA bus relies on and measures whether the
book actually round-trips data through encode_group/decode_group.
"""

from dataclasses import dataclass
from typing import Optional

import numpy as np

from codebook.codes import CodeBook
from codec.group import correlate_batch, encode_batch
from utils.config import get_codebook_params
from utils.logger import get_codebook_logger

logger = get_codebook_logger()


@dataclass(frozen=True)
class ValidationReport:
    """Result of validate()."""

    orthogonal: bool
    decodable: bool
    worst_offdiag: int
    vectors_checked: int = 0
    exhaustive: bool = True

    def to_dict(self) -> dict:
        return {
            'orthogonal': self.orthogonal,
            'decodable': self.decodable,
            'worst_offdiag': self.worst_offdiag,
            'vectors_checked': self.vectors_checked,
            'exhaustive': self.exhaustive,
        }


def all_bit_vectors(length: int) -> np.ndarray:
    """All 2^S data vectors as a 2^S x S array, bit k of row v = (v >> k) & 1."""
    values = np.arange(2 ** length, dtype=np.int64)[:, None]
    return (values >> np.arange(length, dtype=np.int64)) & 1


def data_vectors(
    length: int,
    exhaustive_limit: int,
    samples: int,
    seed: int
) -> np.ndarray:
    """Exhaustive vectors while 2^S <= limit, else seeded random vectors."""
    if 2 ** length <= exhaustive_limit:
        return all_bit_vectors(length)
    rng = np.random.default_rng(seed)
    return rng.integers(0, 2, size=(samples, length), dtype=np.int64)


def validate(
    book: CodeBook,
    exhaustive_limit: Optional[int] = None,
    samples: Optional[int] = None,
    seed: Optional[int] = None
) -> ValidationReport:
    """
    Check orthogonality and round-trip decodability of a code book.

    A data vector decodes when no correlation is zero and the sign of
    every correlation gives back the data bit.

    Args:
        book: Code book to check
        exhaustive_limit: Exhaustive while 2^S <= limit (config if None)
        samples: Random vectors above the limit (config if None)
        seed: Seed of the random vectors (config if None)

    Returns:
        ValidationReport
    """
    params = get_codebook_params().get('validation', {})
    if exhaustive_limit is None:
        exhaustive_limit = int(params.get('exhaustive_limit', 65536))
    if samples is None:
        samples = int(params.get('samples', 10000))
    if seed is None:
        seed = int(params.get('seed', 0))

    gram = book.gram
    offdiag = np.abs(gram[~np.eye(book.length, dtype=bool)])
    worst = int(offdiag.max()) if offdiag.size else 0

    vectors = data_vectors(book.length, exhaustive_limit, samples, seed)
    correlations = correlate_batch(encode_batch(vectors, book), book)
    decodable = bool(
        (correlations != 0).all() and ((correlations > 0) == (vectors == 1)).all()
    )

    report = ValidationReport(
        orthogonal=worst == 0,
        decodable=decodable,
        worst_offdiag=worst,
        vectors_checked=len(vectors),
        exhaustive=2 ** book.length <= exhaustive_limit,
    )

    if report.orthogonal:
        logger.info(f"✅ {book.kind} code book S={book.length} is orthogonal")
    else:
        logger.warning(
            f"⚠️  {book.kind} code book S={book.length} is not orthogonal "
            f"(worst off-diagonal {worst}, decodable={decodable})"
        )
    return report
