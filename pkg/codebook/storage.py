"""
Code book text files.

Line 1 is "S=<int> kind=<walsh|lfsr-window|custom>", followed by S lines
of S characters 0/1, one code per line. Files round-trip byte for byte.
"""

from pathlib import Path
from typing import Union

from codebook.codes import KINDS, CodeBook, custom_codebook
from utils.errors import CodebookFormatError, CdmaBusError
from utils.logger import get_codebook_logger

logger = get_codebook_logger()


def format_codebook(book: CodeBook) -> str:
    """Render a code book in the text format."""
    lines = [f"S={book.length} kind={book.kind}"]
    lines.extend(book.rows())
    return '\n'.join(lines) + '\n'


def parse_codebook(text: str) -> CodeBook:
    """
    Parse the text format.

    Raises:
        CodebookFormatError: On a malformed header or code line
    """
    lines = text.split('\n')
    if lines and lines[-1] == '':
        lines.pop()
    if not lines:
        raise CodebookFormatError("empty codebook file")

    header = dict(
        field.split('=', 1) for field in lines[0].split() if '=' in field
    )
    try:
        length = int(header['S'])
        kind = header['kind']
    except (KeyError, ValueError) as e:
        raise CodebookFormatError(f"bad header '{lines[0]}'") from e
    if kind not in KINDS:
        raise CodebookFormatError(f"unknown kind '{kind}'")

    rows = lines[1:]
    if len(rows) != length:
        raise CodebookFormatError(f"header says S={length} but {len(rows)} codes follow")
    for number, row in enumerate(rows, start=2):
        if len(row) != length or set(row) - {'0', '1'}:
            raise CodebookFormatError(f"line {number}: expected {length} characters of 0/1")

    try:
        return custom_codebook(rows, kind=kind)
    except CdmaBusError as e:
        raise CodebookFormatError(str(e)) from e


def save_codebook(book: CodeBook, path: Union[str, Path]) -> Path:
    """
    Write a code book file.

    Args:
        book: Code book
        path: Destination

    Returns:
        Path written
    """
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(format_codebook(book), newline='\n')
    logger.info(f"💾 Code book saved: {path} (S={book.length}, {book.kind})")
    return path


def load_codebook(path: Union[str, Path]) -> CodeBook:
    """
    Read a code book file.

    Args:
        path: Source file

    Returns:
        CodeBook
    """
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as e:
        raise CodebookFormatError(f"cannot read {path}: {e}") from e
    book = parse_codebook(text)
    logger.debug(f"Code book loaded: {path} (S={book.length}, {book.kind})")
    return book
