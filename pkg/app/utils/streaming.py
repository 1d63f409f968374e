from typing import Any, Iterable, Iterator, Optional, TextIO
import hashlib
import json
import sys
from pydantic import BaseModel
from app.utils.logger import app_logger


def model_to_dict(obj: Any) -> Any:
    """Convert Pydantic models and other objects to JSON-serializable format"""
    if isinstance(obj, BaseModel):
        return obj.model_dump(mode="json", by_alias=True)
    elif isinstance(obj, (list, tuple)):
        return [model_to_dict(item) for item in obj]
    elif isinstance(obj, dict):
        return {k: model_to_dict(v) for k, v in obj.items()}
    elif hasattr(obj, "tolist"):
        return obj.tolist()
    else:
        return obj


def canonical_json(obj: Any) -> str:
    """Key-sorted compact JSON; identical inputs give identical text"""
    return json.dumps(model_to_dict(obj), sort_keys=True, separators=(",", ":"))


def stable_digest(obj: Any) -> str:
    """64-bit blake2b digest of the canonical JSON, as 16 hex characters"""
    return hashlib.blake2b(canonical_json(obj).encode("utf-8"), digest_size=8).hexdigest()


def json_lines(items: Iterable[Any]) -> Iterator[str]:
    """
    Convert an iterator of models to JSON-lines
    """
    for item in items:
        line = canonical_json(item)
        app_logger.debug(f"Emitted {len(line)} bytes")
        yield line + "\n"


def write_output(items: Iterable[Any], out: Optional[str] = None, lines: bool = False) -> None:
    """
    Write one JSON document, or JSON-lines, to a path or stdout

    Args:
        items: A single result, or an iterable of results when lines is set
        out: Output path; stdout when None
        lines: Emit one document per line
    """
    chunks = json_lines(items) if lines else [canonical_json(items) + "\n"]
    if out is None:
        _write_all(sys.stdout, chunks)
        sys.stdout.flush()
        return
    with open(out, "w", encoding="utf-8") as handle:
        _write_all(handle, chunks)
    app_logger.info(f"Wrote output to {out}")


def _write_all(handle: TextIO, chunks: Iterable[str]) -> None:
    for chunk in chunks:
        handle.write(chunk)
