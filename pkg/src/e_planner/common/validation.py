from __future__ import annotations

from typing import TYPE_CHECKING

from .error import ValidationError

if TYPE_CHECKING:
    from pathlib import Path


def ensure_file(path: Path, description: str) -> None:
    """Ensure path exists and is a regular file.

    Args:
        path: Path to validate
        description: Short description of path to validate

    Raises:
        ValidationError: If path does not exist or is not a file
    """
    if path.is_file():
        return

    msg = (
        f"{description} not found: [path]{path}[/]"
        if not path.exists()
        else f"{description} is not a file: [path]{path}[/]"
    )

    stem = path.stem.lower()
    if stem and path.parent.is_dir():
        for candidate in sorted(path.parent.iterdir()):
            other = candidate.stem.lower()
            if candidate.is_file() and candidate.suffix == ".e" and (stem in other or other in stem):
                msg += f"\n\n[tip]tip:[/] did you mean [path]{candidate.name}[/]?"
                # first similar only
                break

    raise ValidationError(msg)


def read_text(path: Path, description: str) -> str:
    """Read a UTF-8 file after checking it exists.

    Raises:
        ValidationError: If the file is missing or not valid UTF-8
    """
    ensure_file(path, description)
    try:
        return path.read_text(encoding="utf-8")
    except UnicodeDecodeError as e:
        msg = f"{description} is not valid UTF-8: [path]{path}[/]"
        raise ValidationError(msg) from e
